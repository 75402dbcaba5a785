"""Divergence functionals over coordinate pairs.

canonical      D(P||Q) = psi(P) + phi(Q) - theta(P) . eta(Q)
affine         D_A(P,Q) = (eta(Q) - eta(P)) . (theta(Q) - theta(P)),
               symmetric, equal to D(P||Q) + D(Q||P)
dual inner     <Q,R>_P, the polarization of D_A around a base point
psi/phi skew   Jensen gaps of the potentials at chart-affine midpoints
combination    a D(P||R) + b D(Q||R) for R = a theta(P) + b theta(Q) (or the
               eta-side mirror)
renyi          Renyi divergence via the psi-divergence at skew 1 - alpha

All functions work from the cached coordinates and potentials of their
:class:`~dualflat.manifold.CoordinatePair` arguments; midpoints are built
through the manifold layer so both charts stay consistent.  Values that are
provably nonnegative are clamped to zero inside a 1e-12 rounding slack;
anything more negative raises, since that indicates a logic bug rather than
rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonnegativityError, UnsupportedError
from .manifold import CoordinatePair, Family, point_from_eta, point_from_theta

__all__ = [
    "NONNEG_SLACK",
    "DivergenceValue",
    "affine",
    "canonical",
    "dual_inner_product",
    "phi_divergence",
    "psi_divergence",
    "renyi",
    "skew_combination",
]

#: Absolute slack distinguishing rounding noise from sign errors.
NONNEG_SLACK = 1e-12

_KINDS = ("canonical", "affine", "psi_skew", "phi_skew", "renyi", "combination")


@dataclass(frozen=True)
class DivergenceValue:
    """A labeled scalar divergence: which functional, its value, and how it was called."""

    kind: str
    value: float
    alpha: float | None = None
    weights: tuple[float, float] | None = None
    argument_order: tuple[str, ...] = ("P", "Q")


def _clamped(value: float, kind: str) -> float:
    if value < -NONNEG_SLACK:
        raise NonnegativityError(f"{kind} divergence evaluated to {value:.6e}")
    return 0.0 if value < 0.0 else float(value)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie strictly inside (0, 1), got {alpha}")
    return alpha


def _check_points(family: Family, *points: CoordinatePair) -> None:
    for p in points:
        if p.dimension != family.dimension:
            raise DomainError(
                f"point of dimension {p.dimension} does not belong to {family.label}"
            )


def canonical(family: Family, p: CoordinatePair, q: CoordinatePair,
              labels: tuple[str, str] = ("P", "Q")) -> DivergenceValue:
    """Canonical divergence D(P||Q); asymmetric, zero iff P = Q.

    For exponential and mixture kinds this equals KL(p_Q || p_P) of the
    underlying distributions (note the argument reversal; see README).
    """
    _check_points(family, p, q)
    value = p.psi + q.phi - float(p.theta @ q.eta)
    return DivergenceValue("canonical", _clamped(value, "canonical"), argument_order=labels)


def affine(family: Family, p: CoordinatePair, q: CoordinatePair,
           labels: tuple[str, str] = ("P", "Q")) -> DivergenceValue:
    """Affine divergence D_A(P,Q): the dual-increment inner product.

    Symmetric, nonnegative, zero iff P = Q; equals the canonical divergence
    summed over both directions, and the Jeffreys divergence for families with
    a KL oracle.  Reduces to squared Euclidean distance in a self-dual space.
    """
    _check_points(family, p, q)
    value = float((q.eta - p.eta) @ (q.theta - p.theta))
    return DivergenceValue("affine", _clamped(value, "affine"), argument_order=labels)


def dual_inner_product(family: Family, q: CoordinatePair, r: CoordinatePair,
                       base: CoordinatePair) -> float:
    """Symmetrized dual inner product <Q,R>_base; <Q,Q>_base = D_A(base, Q)."""
    _check_points(family, q, r, base)
    return 0.5 * (
        float((q.theta - base.theta) @ (r.eta - base.eta))
        + float((r.theta - base.theta) @ (q.eta - base.eta))
    )


def psi_divergence(family: Family, p: CoordinatePair, q: CoordinatePair, alpha: float,
                   labels: tuple[str, str] = ("P", "Q")) -> DivergenceValue:
    """alpha-skew psi-divergence: the Jensen gap of psi at the theta-midpoint.

    (1-alpha) psi(P) + alpha psi(Q) - psi(R) with theta(R) the alpha-skewed
    affine combination.  Equals the alpha-skew Bhattacharyya distance for
    exponential kinds.  Raises DomainError when the midpoint leaves the
    theta-domain.
    """
    alpha = _check_alpha(alpha)
    _check_points(family, p, q)
    mid = point_from_theta(family, (1.0 - alpha) * p.theta + alpha * q.theta)
    value = (1.0 - alpha) * p.psi + alpha * q.psi - mid.psi
    return DivergenceValue("psi_skew", _clamped(value, "psi_skew"), alpha=alpha,
                           argument_order=labels)


def phi_divergence(family: Family, p: CoordinatePair, q: CoordinatePair, alpha: float,
                   labels: tuple[str, str] = ("P", "Q")) -> DivergenceValue:
    """alpha-skew phi-divergence: the Jensen gap of phi at the eta-midpoint.

    Equals the alpha-skew Jensen-Shannon divergence for mixture kinds.
    """
    alpha = _check_alpha(alpha)
    _check_points(family, p, q)
    mid = point_from_eta(family, (1.0 - alpha) * p.eta + alpha * q.eta)
    value = (1.0 - alpha) * p.phi + alpha * q.phi - mid.phi
    return DivergenceValue("phi_skew", _clamped(value, "phi_skew"), alpha=alpha,
                           argument_order=labels)


def skew_combination(family: Family, p: CoordinatePair, q: CoordinatePair,
                     a: float, b: float, side: str = "theta") -> float:
    """Weighted canonical combination toward the chart-affine point R.

    theta side: R with theta(R) = a theta(P) + b theta(Q); returns
    a D(P||R) + b D(Q||R).  eta side: R with eta(R) = a eta(P) + b eta(Q);
    returns a D(R||P) + b D(R||Q).  Algebraically this equals the potential
    form (a+b-1) phi(R) + a psi(P) + b psi(Q) - psi(R) (theta side, with
    psi/phi swapped on the eta side); nonnegative when a, b >= 0.
    """
    _check_points(family, p, q)
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError(f"skew weights must be finite, got a={a}, b={b}")
    if side == "theta":
        mid = point_from_theta(family, a * p.theta + b * q.theta)
        return a * canonical(family, p, mid).value + b * canonical(family, q, mid).value
    if side == "eta":
        mid = point_from_eta(family, a * p.eta + b * q.eta)
        return a * canonical(family, mid, p).value + b * canonical(family, mid, q).value
    raise DomainError(f"side must be 'theta' or 'eta', got {side!r}")


def renyi(family: Family, p: CoordinatePair, q: CoordinatePair, alpha: float,
          labels: tuple[str, str] = ("P", "Q")) -> DivergenceValue:
    """Renyi divergence of order alpha through the psi-divergence.

    D_R = D_psi at skew (1 - alpha), scaled by 1/(1 - alpha); for exponential
    kinds the psi-divergence is the skewed Bhattacharyya distance, making this
    the standard Renyi divergence.  Not defined for mixture kinds.
    """
    alpha = _check_alpha(alpha)
    if family.kind_class == "mixture":
        raise UnsupportedError("renyi divergence is not defined for mixture kinds")
    base = psi_divergence(family, p, q, 1.0 - alpha, labels=labels)
    return DivergenceValue("renyi", _clamped(base.value / (1.0 - alpha), "renyi"),
                           alpha=alpha, argument_order=labels)
