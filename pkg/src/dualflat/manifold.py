"""Dual coordinate charts, Legendre-dual potentials, and the Riemannian metric.

A dually flat family carries two global affine charts, theta and eta, linked by
a strictly convex potential pair (psi, phi) satisfying

    psi(theta) + phi(eta) = theta . eta

at dual points, with eta = grad psi(theta) and theta = grad phi(eta).  Concrete
families implement whichever closed forms they have; the functions here fill in
the rest numerically (central finite differences and a damped-Newton Legendre
solver) behind a uniform operation surface.

All values are plain floats and float64 vectors.  Everything in this module is
a pure function of its inputs; coordinate pairs and metric matrices are frozen
after construction, so concurrent use needs no synchronization.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConditioningError,
    ConvergenceError,
    DomainError,
    UnsupportedError,
)

__all__ = [
    "CoordinatePair",
    "Family",
    "MetricMatrix",
    "FD_STEP",
    "SOLVER_GRAD_TOL",
    "conjugate_solve",
    "dual_conjugate_solve",
    "duality_residual",
    "eta_from_theta",
    "finite_diff_gradient",
    "finite_diff_jacobian",
    "metric",
    "metric_eta_form",
    "metric_theta_form",
    "point_from_eta",
    "point_from_theta",
    "potential_phi",
    "potential_psi",
    "theta_from_eta",
]

#: Central-difference step scale, optimal order for a second-order scheme.
FD_STEP = float(np.cbrt(np.finfo(float).eps))

#: Accepted scaled gradient norm at a Legendre-solver solution.
SOLVER_GRAD_TOL = 1e-10

# The solver aims two decades below the accepted tolerance when it can; Newton
# converges quadratically near the optimum, so the extra steps are cheap and
# keep downstream identity residuals well under their budgets.
_SOLVER_GRAD_TARGET = 1e-12

_SOLVER_MAX_ITER = 100
_SOLVER_MAX_HALVINGS = 60


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


class Family(ABC):
    """Abstract dually flat family.

    Subclasses set ``kind``, ``kind_class``, ``dimension`` and override the
    closed-form hooks for at least one full chart side (value + gradient +
    Hessian).  ``has_closed_psi`` / ``has_closed_phi`` advertise which sides
    exist; the generic operations below reach the other side through the
    Legendre solver.
    """

    kind: str = "abstract"
    kind_class: str = "abstract"  # "exponential" | "mixture" | "selfdual"
    dimension: int = 0

    has_closed_psi: bool = False
    has_closed_phi: bool = False

    # -- chart membership ---------------------------------------------------

    @abstractmethod
    def in_theta_domain(self, theta: np.ndarray) -> bool:
        """Whether ``theta`` lies in the open theta-domain."""

    @abstractmethod
    def in_eta_domain(self, eta: np.ndarray) -> bool:
        """Whether ``eta`` lies in the open eta-domain."""

    # -- closed forms (override where analytic expressions exist) ------------

    def psi_closed(self, theta: np.ndarray) -> float | None:
        return None

    def grad_psi_closed(self, theta: np.ndarray) -> np.ndarray | None:
        return None

    def hess_psi_closed(self, theta: np.ndarray) -> np.ndarray | None:
        return None

    def phi_closed(self, eta: np.ndarray) -> float | None:
        return None

    def grad_phi_closed(self, eta: np.ndarray) -> np.ndarray | None:
        return None

    def hess_phi_closed(self, eta: np.ndarray) -> np.ndarray | None:
        return None

    # -- solver hints ---------------------------------------------------------

    def initial_theta(self, eta: np.ndarray) -> np.ndarray:
        """Heuristic starting theta for the conjugate solve (moment matching)."""
        raise UnsupportedError(f"{self.kind}: no initial theta heuristic")

    def initial_eta(self, theta: np.ndarray) -> np.ndarray:
        """Heuristic starting eta for the dual conjugate solve."""
        raise UnsupportedError(f"{self.kind}: no initial eta heuristic")

    # -- statistics hooks (concrete families override what they support) -----

    def point_from_params(self, params) -> "CoordinatePair":
        raise UnsupportedError(f"{self.kind}: no user-facing parameterization")

    def log_density(self, point: "CoordinatePair", outcome) -> float:
        raise UnsupportedError(f"{self.kind}: no density")

    def support_pmf(self, point: "CoordinatePair") -> np.ndarray:
        raise UnsupportedError(f"{self.kind}: no discrete support")

    def entropy(self, point: "CoordinatePair") -> float:
        raise UnsupportedError(f"{self.kind}: no entropy oracle")

    def kl_divergence(self, p: "CoordinatePair", q: "CoordinatePair") -> float:
        raise UnsupportedError(f"{self.kind}: no KL oracle")

    def bhattacharyya(self, p, q, alpha: float) -> float:
        raise UnsupportedError(f"{self.kind}: no Bhattacharyya oracle")

    def js_divergence(self, p, q, alpha: float) -> float:
        raise UnsupportedError(f"{self.kind}: no Jensen-Shannon oracle")

    def closed_form_affine(self, p, q) -> float:
        raise UnsupportedError(f"{self.kind}: no closed-form affine divergence")

    def sample_point(self, rng: np.random.Generator) -> "CoordinatePair":
        raise UnsupportedError(f"{self.kind}: no verification sampler")

    @property
    def label(self) -> str:
        return self.kind


@dataclass(frozen=True, eq=False)
class CoordinatePair:
    """A manifold point carried in both charts with both potentials cached.

    Invariants (established at construction): ``eta == grad psi(theta)`` within
    gradient tolerance and ``psi + phi - theta . eta == 0`` within duality
    tolerance.
    """

    theta: np.ndarray
    eta: np.ndarray
    psi: float
    phi: float

    @property
    def dimension(self) -> int:
        return self.theta.shape[0]


@dataclass(frozen=True, eq=False)
class MetricMatrix:
    """Riemannian metric at a point, in one of its two dual representations.

    ``representation`` is ``"theta"`` for the lower-index form (Hessian of psi,
    the Jacobian d eta / d theta) and ``"eta"`` for its inverse (Hessian of
    phi).
    """

    entries: np.ndarray
    representation: str


# ---------------------------------------------------------------------------
# validation helpers
# ---------------------------------------------------------------------------


def _coord_vector(family: Family, values, chart: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != family.dimension:
        raise DomainError(
            f"{family.label}: {chart} vector must have length {family.dimension}, "
            f"got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{family.label}: {chart} vector has non-finite entries")
    return arr


def _check_theta(family: Family, theta) -> np.ndarray:
    theta = _coord_vector(family, theta, "theta")
    if not family.in_theta_domain(theta):
        raise DomainError(f"{family.label}: theta {theta.tolist()} outside the open theta-domain")
    return theta


def _check_eta(family: Family, eta) -> np.ndarray:
    eta = _coord_vector(family, eta, "eta")
    if not family.in_eta_domain(eta):
        raise DomainError(f"{family.label}: eta {eta.tolist()} outside the open eta-domain")
    return eta


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------


def finite_diff_gradient(f, x: np.ndarray) -> np.ndarray:
    """Central-difference gradient with per-coordinate step h = FD_STEP*(1+|x_i|)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        h = FD_STEP * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        out[i] = (f(xp) - f(xm)) / (2.0 * h)
    return out


def finite_diff_jacobian(f, x: np.ndarray) -> np.ndarray:
    """Central-difference Jacobian of a vector-valued ``f`` (rows index outputs)."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.shape[0]):
        h = FD_STEP * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        cols.append((np.asarray(f(xp), dtype=float) - np.asarray(f(xm), dtype=float)) / (2.0 * h))
    return np.stack(cols, axis=1)


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


# ---------------------------------------------------------------------------
# raw (unvalidated) closed-or-numeric accessors on one chart side
# ---------------------------------------------------------------------------


def _psi_raw(family: Family, theta: np.ndarray) -> float:
    v = family.psi_closed(theta)
    if v is None:
        raise UnsupportedError(f"{family.label}: psi has no closed form")
    return float(v)


def _grad_psi_raw(family: Family, theta: np.ndarray) -> np.ndarray:
    g = family.grad_psi_closed(theta)
    if g is not None:
        return np.asarray(g, dtype=float)
    return finite_diff_gradient(lambda t: _psi_raw(family, t), theta)


def _hess_psi_raw(family: Family, theta: np.ndarray) -> np.ndarray:
    h = family.hess_psi_closed(theta)
    if h is not None:
        return np.asarray(h, dtype=float)
    return _sym(finite_diff_jacobian(lambda t: _grad_psi_raw(family, t), theta))


def _phi_raw(family: Family, eta: np.ndarray) -> float:
    v = family.phi_closed(eta)
    if v is None:
        raise UnsupportedError(f"{family.label}: phi has no closed form")
    return float(v)


def _grad_phi_raw(family: Family, eta: np.ndarray) -> np.ndarray:
    g = family.grad_phi_closed(eta)
    if g is not None:
        return np.asarray(g, dtype=float)
    return finite_diff_gradient(lambda e: _phi_raw(family, e), eta)


def _hess_phi_raw(family: Family, eta: np.ndarray) -> np.ndarray:
    h = family.hess_phi_closed(eta)
    if h is not None:
        return np.asarray(h, dtype=float)
    return _sym(finite_diff_jacobian(lambda e: _grad_phi_raw(family, e), eta))


# ---------------------------------------------------------------------------
# damped-Newton Legendre solver
# ---------------------------------------------------------------------------


def _legendre_max(target, x0, value, grad, hess, in_domain, side: str):
    """Maximize ``target . x - value(x)`` over the open domain by damped Newton.

    The step is halved until the iterate stays inside the domain and the
    objective does not decrease.  Returns ``(x, maximum)``; the maximum equals
    the conjugate potential at ``target``.
    """
    x = np.array(x0, dtype=float)
    if x.shape != np.shape(target) or not np.all(np.isfinite(x)):
        raise DomainError(f"{side}-solve: malformed initial guess")
    if not in_domain(x):
        raise DomainError(f"{side}-solve: initial guess outside the domain")
    target = np.asarray(target, dtype=float)
    scale = 1.0 + float(np.linalg.norm(target))
    obj = float(target @ x) - value(x)

    for _ in range(_SOLVER_MAX_ITER):
        g = target - grad(x)
        gnorm = float(np.linalg.norm(g))
        if gnorm <= _SOLVER_GRAD_TARGET * scale:
            return x, obj
        try:
            step = np.linalg.solve(hess(x), g)
        except np.linalg.LinAlgError as exc:
            raise ConditioningError(f"{side}-solve: singular curvature") from exc
        if not np.all(np.isfinite(step)):
            raise ConvergenceError(f"{side}-solve: non-finite Newton step")

        s = 1.0
        entered = False
        accepted = False
        for _ in range(_SOLVER_MAX_HALVINGS):
            cand = x + s * step
            if in_domain(cand):
                entered = True
                cand_obj = float(target @ cand) - value(cand)
                if np.isfinite(cand_obj) and cand_obj >= obj - 1e-15 * (1.0 + abs(obj)):
                    x, obj = cand, cand_obj
                    accepted = True
                    break
            s *= 0.5
        if not accepted:
            if gnorm <= SOLVER_GRAD_TOL * scale:
                return x, obj
            if not entered:
                raise DomainError(f"{side}-solve: iterates left the domain irrecoverably")
            raise ConvergenceError(
                f"{side}-solve: line search stalled at gradient norm {gnorm:.3e}"
            )

    g = target - grad(x)
    if float(np.linalg.norm(g)) <= SOLVER_GRAD_TOL * scale:
        return x, obj
    raise ConvergenceError(f"{side}-solve: no convergence in {_SOLVER_MAX_ITER} Newton steps")


def conjugate_solve(family: Family, eta, initial_theta=None):
    """Numerical Legendre transform: maximize ``theta . eta - psi(theta)``.

    Returns ``(theta, value)`` where the value equals ``phi(eta)``.  Requires a
    closed-form psi side.  The scaled gradient norm at the solution is below
    ``SOLVER_GRAD_TOL``.
    """
    eta = _check_eta(family, eta)
    if not family.has_closed_psi:
        raise UnsupportedError(f"{family.label}: conjugate_solve needs a closed-form psi")
    x0 = family.initial_theta(eta) if initial_theta is None else np.asarray(initial_theta, float)
    theta, best = _legendre_max(
        eta,
        x0,
        lambda t: _psi_raw(family, t),
        lambda t: _grad_psi_raw(family, t),
        lambda t: _hess_psi_raw(family, t),
        family.in_theta_domain,
        "theta",
    )
    return _readonly(theta), float(best)


def dual_conjugate_solve(family: Family, theta, initial_eta=None):
    """Mirror of :func:`conjugate_solve`: maximize ``theta . eta - phi(eta)``.

    Returns ``(eta, value)`` where the value equals ``psi(theta)``.  This is
    the working path for families that only know their phi side in closed form
    (mixture families).
    """
    theta = _coord_vector(family, theta, "theta")
    if not family.has_closed_phi:
        raise UnsupportedError(f"{family.label}: dual_conjugate_solve needs a closed-form phi")
    x0 = family.initial_eta(theta) if initial_eta is None else np.asarray(initial_eta, float)
    eta, best = _legendre_max(
        theta,
        x0,
        lambda e: _phi_raw(family, e),
        lambda e: _grad_phi_raw(family, e),
        lambda e: _hess_phi_raw(family, e),
        family.in_eta_domain,
        "eta",
    )
    return _readonly(eta), float(best)


# ---------------------------------------------------------------------------
# potentials and dual gradients
# ---------------------------------------------------------------------------


def potential_psi(family: Family, theta) -> float:
    """psi(theta), closed form where the family has one, else by dual solve."""
    if family.has_closed_psi:
        theta = _check_theta(family, theta)
        v = float(family.psi_closed(theta))
    else:
        _, v = dual_conjugate_solve(family, theta)
    if not np.isfinite(v):
        raise DomainError(f"{family.label}: psi evaluated non-finite")
    return v


def potential_phi(family: Family, eta) -> float:
    """phi(eta), closed form where the family has one, else by conjugate solve."""
    if family.has_closed_phi:
        eta = _check_eta(family, eta)
        v = float(family.phi_closed(eta))
    else:
        _, v = conjugate_solve(family, eta)
    if not np.isfinite(v):
        raise DomainError(f"{family.label}: phi evaluated non-finite")
    return v


def eta_from_theta(family: Family, theta) -> np.ndarray:
    """grad psi(theta): the dual (expectation) coordinates of a theta point."""
    if family.has_closed_psi:
        theta = _check_theta(family, theta)
        g = _grad_psi_raw(family, theta)
        if not np.all(np.isfinite(g)):
            raise DomainError(f"{family.label}: grad psi evaluated non-finite")
        return _readonly(g)
    eta, _ = dual_conjugate_solve(family, theta)
    return eta


def theta_from_eta(family: Family, eta) -> np.ndarray:
    """grad phi(eta): inverse of :func:`eta_from_theta`."""
    if family.has_closed_phi:
        eta = _check_eta(family, eta)
        g = _grad_phi_raw(family, eta)
        if not np.all(np.isfinite(g)):
            raise DomainError(f"{family.label}: grad phi evaluated non-finite")
        return _readonly(g)
    theta, _ = conjugate_solve(family, eta)
    return theta


# ---------------------------------------------------------------------------
# point construction
# ---------------------------------------------------------------------------


def point_from_theta(family: Family, theta) -> CoordinatePair:
    """Build a :class:`CoordinatePair` from theta coordinates.

    Both charts and both potentials are populated eagerly; the potentials are
    computed independently where both closed forms exist, so the duality
    residual of the result is a meaningful check rather than zero by
    construction.
    """
    theta = _coord_vector(family, theta, "theta")
    if family.has_closed_psi:
        if not family.in_theta_domain(theta):
            raise DomainError(f"{family.label}: theta {theta.tolist()} outside the theta-domain")
        psi = float(family.psi_closed(theta))
        eta = _grad_psi_raw(family, theta)
        if not (np.isfinite(psi) and np.all(np.isfinite(eta))):
            raise DomainError(f"{family.label}: potentials non-finite at theta {theta.tolist()}")
        if not family.in_eta_domain(eta):
            raise DomainError(f"{family.label}: dual of theta {theta.tolist()} leaves the eta-domain")
        phi = float(family.phi_closed(eta)) if family.has_closed_phi else float(theta @ eta - psi)
    else:
        eta, psi = dual_conjugate_solve(family, theta)
        phi = float(family.phi_closed(eta))
    return CoordinatePair(_readonly(theta), _readonly(eta), psi, phi)


def point_from_eta(family: Family, eta) -> CoordinatePair:
    """Build a :class:`CoordinatePair` from eta coordinates."""
    eta = _coord_vector(family, eta, "eta")
    if family.has_closed_phi:
        if not family.in_eta_domain(eta):
            raise DomainError(f"{family.label}: eta {eta.tolist()} outside the eta-domain")
        phi = float(family.phi_closed(eta))
        theta = _grad_phi_raw(family, eta)
        if not (np.isfinite(phi) and np.all(np.isfinite(theta))):
            raise DomainError(f"{family.label}: potentials non-finite at eta {eta.tolist()}")
        if not family.in_theta_domain(theta):
            raise DomainError(f"{family.label}: dual of eta {eta.tolist()} leaves the theta-domain")
        psi = float(family.psi_closed(theta)) if family.has_closed_psi else float(theta @ eta - phi)
    else:
        theta, phi = conjugate_solve(family, eta)
        psi = float(family.psi_closed(theta))
    return CoordinatePair(_readonly(theta), _readonly(eta), psi, phi)


def duality_residual(family: Family, point: CoordinatePair) -> float:
    """|psi + phi - theta . eta| for the cached values of ``point``."""
    return float(abs(point.psi + point.phi - float(point.theta @ point.eta)))


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------


def metric_theta_form(family: Family, theta) -> np.ndarray:
    """Lower-index metric g_ij at theta: the Hessian of psi (d eta / d theta)."""
    theta = _coord_vector(family, theta, "theta")
    if family.has_closed_psi:
        if not family.in_theta_domain(theta):
            raise DomainError(f"{family.label}: theta outside the theta-domain")
        return _hess_psi_raw(family, theta)
    eta, _ = dual_conjugate_solve(family, theta)
    try:
        return np.linalg.inv(_hess_phi_raw(family, eta))
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"{family.label}: phi Hessian not invertible") from exc


def metric_eta_form(family: Family, eta) -> np.ndarray:
    """Upper-index metric g^ij at eta: the Hessian of phi (d theta / d eta)."""
    eta = _coord_vector(family, eta, "eta")
    if family.has_closed_phi:
        if not family.in_eta_domain(eta):
            raise DomainError(f"{family.label}: eta outside the eta-domain")
        return _hess_phi_raw(family, eta)
    theta, _ = conjugate_solve(family, eta)
    try:
        return np.linalg.inv(_hess_psi_raw(family, theta))
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"{family.label}: psi Hessian not invertible") from exc


def metric(family: Family, point: CoordinatePair, representation: str = "theta") -> MetricMatrix:
    """Metric at ``point`` in the requested representation, checked SPD.

    Raises :class:`ConditioningError` when the matrix fails finiteness or
    positive-definiteness at working precision.
    """
    if representation == "theta":
        entries = metric_theta_form(family, point.theta)
    elif representation == "eta":
        entries = metric_eta_form(family, point.eta)
    else:
        raise ValueError(f"unknown metric representation {representation!r}")
    if not np.all(np.isfinite(entries)):
        raise ConditioningError(f"{family.label}: metric has non-finite entries")
    smallest = float(np.linalg.eigvalsh(_sym(entries)).min())
    if smallest <= 0.0:
        raise ConditioningError(
            f"{family.label}: metric not positive definite (min eigenvalue {smallest:.3e})"
        )
    return MetricMatrix(_readonly(entries), representation)
