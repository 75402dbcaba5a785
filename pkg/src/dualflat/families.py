"""Concrete dually flat families with closed-form maps and reference oracles.

Built-in kinds:

* ``gaussian1d``   one-dimensional normal, natural chart over (x^2, x)
* ``binomial``     n trials, logit natural coordinate, eta = n p
* ``categorical``  m outcomes in exponential-family form, last outcome as the
                   reference (theta_i = ln(p_i / p_last))
* ``mixture``      discrete mixture family over fixed strictly positive
                   component rows; eta holds the mixing weights and the
                   negative Shannon entropy is the phi potential
* ``selfdual``     theta = eta with psi = phi = ||x||^2 / 2, in which every
                   construction reduces to Euclidean geometry

Reference oracles (entropy, KL, Bhattacharyya, Jensen-Shannon) are computed by
direct summation or Gaussian closed forms/quadrature, never through the
potentials, so they can stand on the other side of consistency tests.

Direction convention, fixed empirically at bring-up and relied on by every
consistency test: the canonical divergence satisfies

    canonical(P, Q) = KL(p_Q || p_P)

for both exponential and mixture kinds (see README family table).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import ConfigError, DomainError, SamplingExhausted, UnsupportedError
from .manifold import (
    CoordinatePair,
    Family,
    point_from_eta,
    point_from_theta,
)

__all__ = [
    "Binomial",
    "Categorical",
    "DEFAULT_MIXTURE_COMPONENTS",
    "FAMILY_KINDS",
    "Gaussian1D",
    "Mixture",
    "SelfDual",
    "closed_form_affine",
    "log_density",
    "make_family",
    "point_from_params",
    "reference_bhattacharyya",
    "reference_entropy",
    "reference_js",
    "reference_kl",
    "support_pmf",
]

FAMILY_KINDS = ("gaussian1d", "binomial", "categorical", "mixture", "selfdual")

#: Two-point mixture used as the default CLI/table example family.
DEFAULT_MIXTURE_COMPONENTS = ((0.5, 0.5), (0.9, 0.1))

_LN_2PI = math.log(2.0 * math.pi)

# Sampling boxes for randomized verification; chosen to keep conditioning
# bounded so residual tolerances stay meaningful.
_MU_BOX = (-3.0, 3.0)
_SIGMA_BOX = (0.3, 3.0)
_P_BOX = (0.05, 0.95)
_SELFDUAL_BOX = (-3.0, 3.0)
_MIXTURE_SHRINK = 0.05
_SAMPLE_ATTEMPTS = 100


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _entropy_of(p: np.ndarray) -> float:
    return float(-(p @ np.log(p)))


class Gaussian1D(Family):
    """N(mu, sigma^2) with theta = (-1/(2 sigma^2), mu/sigma^2), eta = (sigma^2 + mu^2, mu)."""

    kind = "gaussian1d"
    kind_class = "exponential"
    dimension = 2
    has_closed_psi = True
    has_closed_phi = True

    def in_theta_domain(self, theta):
        return bool(theta[0] < 0.0)

    def in_eta_domain(self, eta):
        return bool(eta[0] - eta[1] ** 2 > 0.0)

    def psi_closed(self, theta):
        t1, t2 = theta
        return -(t2 * t2) / (4.0 * t1) + 0.5 * math.log(math.pi / (-t1))

    def grad_psi_closed(self, theta):
        t1, t2 = theta
        return np.array([t2 * t2 / (4.0 * t1 * t1) - 0.5 / t1, -t2 / (2.0 * t1)])

    def hess_psi_closed(self, theta):
        t1, t2 = theta
        d11 = -(t2 * t2) / (2.0 * t1 ** 3) + 0.5 / (t1 * t1)
        d12 = t2 / (2.0 * t1 * t1)
        d22 = -0.5 / t1
        return np.array([[d11, d12], [d12, d22]])

    def phi_closed(self, eta):
        var = eta[0] - eta[1] ** 2
        return -0.5 * (_LN_2PI + 1.0 + math.log(var))

    def grad_phi_closed(self, eta):
        var = eta[0] - eta[1] ** 2
        return np.array([-0.5 / var, eta[1] / var])

    def hess_phi_closed(self, eta):
        var = eta[0] - eta[1] ** 2
        m = eta[1]
        return np.array(
            [
                [0.5 / (var * var), -m / (var * var)],
                [-m / (var * var), 1.0 / var + 2.0 * m * m / (var * var)],
            ]
        )

    def initial_theta(self, eta):
        var = max(eta[0] - eta[1] ** 2, 1e-8)
        return np.array([-0.5 / var, eta[1] / var])

    def initial_eta(self, theta):
        var = -0.5 / theta[0]
        mu = theta[1] * var
        return np.array([var + mu * mu, mu])

    def _mu_sigma(self, point: CoordinatePair):
        mu = float(point.eta[1])
        var = float(point.eta[0] - point.eta[1] ** 2)
        return mu, math.sqrt(var)

    def point_from_params(self, params):
        params = dict(params)
        try:
            mu = float(params.pop("mu"))
            sigma = float(params.pop("sigma"))
        except KeyError as exc:
            raise ConfigError(f"gaussian1d parameters need 'mu' and 'sigma', missing {exc}") from exc
        _require(not params, f"gaussian1d: unknown parameters {sorted(params)}")
        if not (math.isfinite(mu) and math.isfinite(sigma) and sigma > 0.0):
            raise DomainError(f"gaussian1d: need finite mu and sigma > 0, got mu={mu}, sigma={sigma}")
        var = sigma * sigma
        return point_from_theta(self, np.array([-0.5 / var, mu / var]))

    def log_density(self, point, outcome):
        x = float(outcome)
        if not math.isfinite(x):
            raise DomainError("gaussian1d: outcome must be a finite real")
        mu, sigma = self._mu_sigma(point)
        var = sigma * sigma
        return -((x - mu) ** 2) / (2.0 * var) - 0.5 * math.log(2.0 * math.pi * var)

    def entropy(self, point):
        _, sigma = self._mu_sigma(point)
        return 0.5 * math.log(2.0 * math.pi * math.e * sigma * sigma)

    def kl_divergence(self, p, q):
        mu_p, s_p = self._mu_sigma(p)
        mu_q, s_q = self._mu_sigma(q)
        return (
            math.log(s_q / s_p)
            + (s_p * s_p + (mu_p - mu_q) ** 2) / (2.0 * s_q * s_q)
            - 0.5
        )

    def bhattacharyya(self, p, q, alpha):
        # Adaptive quadrature of p^(1-alpha) q^alpha; 12 combined sigmas of
        # margin push the truncated tails below the quadrature tolerance.
        mu_p, s_p = self._mu_sigma(p)
        mu_q, s_q = self._mu_sigma(q)
        lo = min(mu_p, mu_q) - 12.0 * max(s_p, s_q)
        hi = max(mu_p, mu_q) + 12.0 * max(s_p, s_q)

        def integrand(x):
            lp = -((x - mu_p) ** 2) / (2.0 * s_p * s_p) - 0.5 * math.log(2.0 * math.pi * s_p * s_p)
            lq = -((x - mu_q) ** 2) / (2.0 * s_q * s_q) - 0.5 * math.log(2.0 * math.pi * s_q * s_q)
            return math.exp((1.0 - alpha) * lp + alpha * lq)

        coeff, _ = quad(integrand, lo, hi, epsabs=1e-13, epsrel=1e-11, limit=200)
        return -math.log(coeff)

    def closed_form_affine(self, p, q):
        mu_p, s_p = self._mu_sigma(p)
        mu_q, s_q = self._mu_sigma(q)
        vp, vq = s_p * s_p, s_q * s_q
        return (vq - vp) ** 2 / (2.0 * vp * vq) + (mu_q - mu_p) ** 2 * (
            0.5 / vp + 0.5 / vq
        )

    def sample_point(self, rng):
        mu = rng.uniform(*_MU_BOX)
        sigma = rng.uniform(*_SIGMA_BOX)
        return self.point_from_params({"mu": mu, "sigma": sigma})


class Binomial(Family):
    """Binomial(n, p) with theta = logit(p) and eta = n p."""

    kind = "binomial"
    kind_class = "exponential"
    dimension = 1
    has_closed_psi = True
    has_closed_phi = True

    def __init__(self, trials: int):
        _require(
            isinstance(trials, (int, np.integer)) and not isinstance(trials, bool) and trials >= 1,
            f"binomial: trial count must be an integer >= 1, got {trials!r}",
        )
        self.trials = int(trials)

    @property
    def label(self):
        return f"binomial(n={self.trials})"

    def in_theta_domain(self, theta):
        return True

    def in_eta_domain(self, eta):
        return bool(0.0 < eta[0] < self.trials)

    def psi_closed(self, theta):
        return self.trials * float(np.logaddexp(0.0, theta[0]))

    def grad_psi_closed(self, theta):
        p = 1.0 / (1.0 + math.exp(-theta[0]))
        return np.array([self.trials * p])

    def hess_psi_closed(self, theta):
        p = 1.0 / (1.0 + math.exp(-theta[0]))
        return np.array([[self.trials * p * (1.0 - p)]])

    def phi_closed(self, eta):
        p = eta[0] / self.trials
        return self.trials * (p * math.log(p) + (1.0 - p) * math.log1p(-p))

    def grad_phi_closed(self, eta):
        p = eta[0] / self.trials
        return np.array([math.log(p / (1.0 - p))])

    def hess_phi_closed(self, eta):
        p = eta[0] / self.trials
        return np.array([[1.0 / (self.trials * p * (1.0 - p))]])

    def initial_theta(self, eta):
        p = min(max(eta[0] / self.trials, 1e-9), 1.0 - 1e-9)
        return np.array([math.log(p / (1.0 - p))])

    def initial_eta(self, theta):
        p = 1.0 / (1.0 + math.exp(-theta[0]))
        return np.array([self.trials * p])

    def _p(self, point):
        return float(point.eta[0]) / self.trials

    def point_from_params(self, params):
        params = dict(params)
        try:
            p = float(params.pop("p"))
        except KeyError as exc:
            raise ConfigError("binomial parameters need 'p'") from exc
        _require(not params, f"binomial: unknown parameters {sorted(params)}")
        if not (math.isfinite(p) and 0.0 < p < 1.0):
            raise DomainError(f"binomial: need p in (0, 1), got {p}")
        return point_from_eta(self, np.array([self.trials * p]))

    def support_pmf(self, point):
        p = self._p(point)
        k = np.arange(self.trials + 1)
        log_pmf = (
            gammaln(self.trials + 1)
            - gammaln(k + 1)
            - gammaln(self.trials - k + 1)
            + k * math.log(p)
            + (self.trials - k) * math.log1p(-p)
        )
        return np.exp(log_pmf)

    def log_density(self, point, outcome):
        k = outcome
        if not (isinstance(k, (int, np.integer)) or (isinstance(k, float) and k.is_integer())):
            raise DomainError(f"binomial: outcome must be an integer count, got {outcome!r}")
        k = int(k)
        if not 0 <= k <= self.trials:
            raise DomainError(f"binomial: outcome {k} outside 0..{self.trials}")
        p = self._p(point)
        return float(
            gammaln(self.trials + 1)
            - gammaln(k + 1)
            - gammaln(self.trials - k + 1)
            + k * math.log(p)
            + (self.trials - k) * math.log1p(-p)
        )

    def entropy(self, point):
        pmf = self.support_pmf(point)
        return float(-(pmf @ np.log(pmf)))

    def kl_divergence(self, p, q):
        pp, pq = self.support_pmf(p), self.support_pmf(q)
        return float(pp @ (np.log(pp) - np.log(pq)))

    def bhattacharyya(self, p, q, alpha):
        pp, pq = self.support_pmf(p), self.support_pmf(q)
        return -math.log(float(np.sum(pp ** (1.0 - alpha) * pq ** alpha)))

    def js_divergence(self, p, q, alpha):
        pp, pq = self.support_pmf(p), self.support_pmf(q)
        mix = (1.0 - alpha) * pp + alpha * pq
        return _entropy_of(mix) - (1.0 - alpha) * _entropy_of(pp) - alpha * _entropy_of(pq)

    def closed_form_affine(self, p, q):
        a, b = self._p(p), self._p(q)
        return self.trials * (b - a) * math.log(b * (1.0 - a) / (a * (1.0 - b)))

    def sample_point(self, rng):
        return self.point_from_params({"p": rng.uniform(*_P_BOX)})


class Categorical(Family):
    """Categorical over m outcomes; reference outcome is the last one."""

    kind = "categorical"
    kind_class = "exponential"
    has_closed_psi = True
    has_closed_phi = True

    def __init__(self, outcomes: int):
        _require(
            isinstance(outcomes, (int, np.integer)) and not isinstance(outcomes, bool) and outcomes >= 2,
            f"categorical: outcome count must be an integer >= 2, got {outcomes!r}",
        )
        self.outcomes = int(outcomes)
        self.dimension = self.outcomes - 1

    @property
    def label(self):
        return f"categorical(m={self.outcomes})"

    def _probs_from_theta(self, theta):
        logits = np.concatenate((theta, [0.0]))
        logits = logits - logits.max()
        expl = np.exp(logits)
        return expl / expl.sum()

    def _probs_from_eta(self, eta):
        return np.concatenate((eta, [1.0 - eta.sum()]))

    def in_theta_domain(self, theta):
        return True

    def in_eta_domain(self, eta):
        return bool(np.all(eta > 0.0) and eta.sum() < 1.0)

    def psi_closed(self, theta):
        m = max(float(np.max(theta)), 0.0)
        return m + math.log(math.exp(-m) + float(np.sum(np.exp(theta - m))))

    def grad_psi_closed(self, theta):
        return self._probs_from_theta(theta)[:-1]

    def hess_psi_closed(self, theta):
        p = self._probs_from_theta(theta)[:-1]
        return np.diag(p) - np.outer(p, p)

    def phi_closed(self, eta):
        p = self._probs_from_eta(eta)
        return float(p @ np.log(p))

    def grad_phi_closed(self, eta):
        last = 1.0 - eta.sum()
        return np.log(eta) - math.log(last)

    def hess_phi_closed(self, eta):
        last = 1.0 - eta.sum()
        return np.diag(1.0 / eta) + 1.0 / last

    def initial_theta(self, eta):
        p = self._probs_from_eta(eta)
        return np.log(p[:-1]) - math.log(p[-1])

    def initial_eta(self, theta):
        return self._probs_from_theta(theta)[:-1]

    def point_from_params(self, params):
        params = dict(params)
        try:
            probs = np.asarray(params.pop("probs"), dtype=float)
        except KeyError as exc:
            raise ConfigError("categorical parameters need 'probs'") from exc
        _require(not params, f"categorical: unknown parameters {sorted(params)}")
        if probs.shape != (self.outcomes,):
            raise DomainError(
                f"categorical: probs must have length {self.outcomes}, got shape {probs.shape}"
            )
        if not (np.all(np.isfinite(probs)) and np.all(probs > 0.0)):
            raise DomainError("categorical: probs must be finite and strictly positive")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise DomainError(f"categorical: probs sum to {probs.sum()!r}, not 1")
        probs = probs / probs.sum()
        return point_from_eta(self, probs[:-1])

    def support_pmf(self, point):
        return self._probs_from_eta(point.eta)

    def log_density(self, point, outcome):
        i = outcome
        if not (isinstance(i, (int, np.integer)) or (isinstance(i, float) and i.is_integer())):
            raise DomainError(f"categorical: outcome must be a support index, got {outcome!r}")
        i = int(i)
        if not 0 <= i < self.outcomes:
            raise DomainError(f"categorical: outcome {i} outside 0..{self.outcomes - 1}")
        return math.log(float(self.support_pmf(point)[i]))

    def entropy(self, point):
        return _entropy_of(self.support_pmf(point))

    def kl_divergence(self, p, q):
        pp, pq = self.support_pmf(p), self.support_pmf(q)
        return float(pp @ (np.log(pp) - np.log(pq)))

    def bhattacharyya(self, p, q, alpha):
        pp, pq = self.support_pmf(p), self.support_pmf(q)
        return -math.log(float(np.sum(pp ** (1.0 - alpha) * pq ** alpha)))

    def js_divergence(self, p, q, alpha):
        pp, pq = self.support_pmf(p), self.support_pmf(q)
        mix = (1.0 - alpha) * pp + alpha * pq
        return _entropy_of(mix) - (1.0 - alpha) * _entropy_of(pp) - alpha * _entropy_of(pq)

    def sample_point(self, rng):
        margin = min(0.05, 0.5 / self.outcomes)
        w = rng.dirichlet(np.ones(self.outcomes))
        probs = margin + (1.0 - margin * self.outcomes) * w
        return self.point_from_params({"probs": probs})


class Mixture(Family):
    """Discrete mixture family p_eta = p_0 + sum_i eta_i (p_i - p_0).

    The eta chart (mixing weights) is primary: phi(eta) is the negative
    Shannon entropy of p_eta, known in closed form, while psi comes from the
    numerical Legendre transform.  The eta-domain is clipped to
    min_x p_eta(x) > 1e-12, slightly stricter than the affine hull, which
    keeps the entropy and theta = grad phi finite.
    """

    kind = "mixture"
    kind_class = "mixture"
    has_closed_psi = False
    has_closed_phi = True

    #: Pointwise probability floor defining the open eta-domain.
    FLOOR = 1e-12

    def __init__(self, components):
        comp = np.asarray(components, dtype=float)
        _require(comp.ndim == 2, f"mixture: components must be a 2-d table, got shape {comp.shape}")
        _require(comp.shape[0] >= 2, "mixture: need a reference row plus at least one component")
        _require(comp.shape[1] >= 2, "mixture: support needs at least two outcomes")
        _require(bool(np.all(np.isfinite(comp))), "mixture: components must be finite")
        _require(bool(np.all(comp > 0.0)), "mixture: component rows must be strictly positive")
        sums = comp.sum(axis=1)
        _require(
            bool(np.all(np.abs(sums - 1.0) <= 1e-12)),
            f"mixture: component rows must sum to 1 within 1e-12, got sums {sums.tolist()}",
        )
        diffs = comp[1:] - comp[0]
        rank = np.linalg.matrix_rank(diffs, tol=1e-12)
        _require(
            rank == comp.shape[0] - 1,
            "mixture: component rows must be affinely independent of the reference row",
        )
        comp.setflags(write=False)
        self.components = comp
        self.dimension = comp.shape[0] - 1
        self._diffs = diffs
        self._box = self._axis_box()

    @property
    def label(self):
        r, m = self.components.shape
        return f"mixture({r - 1}+ref on {m} outcomes)"

    def _axis_box(self):
        # Per-axis validity interval of eta_i with the other weights at zero,
        # shrunk by 5% per side; joint validity is re-checked when sampling.
        base = self.components[0]
        lows = np.full(self.dimension, -np.inf)
        highs = np.full(self.dimension, np.inf)
        for i in range(self.dimension):
            d = self._diffs[i]
            for x in range(d.shape[0]):
                if d[x] == 0.0:
                    continue
                bound = (self.FLOOR - base[x]) / d[x]
                if d[x] > 0.0:
                    lows[i] = max(lows[i], bound)
                else:
                    highs[i] = min(highs[i], bound)
        widths = highs - lows
        return lows + _MIXTURE_SHRINK * widths, highs - _MIXTURE_SHRINK * widths

    def pmf_from_eta(self, eta):
        return self.components[0] + eta @ self._diffs

    def in_theta_domain(self, theta):
        if theta.shape != (self.dimension,) or not np.all(np.isfinite(theta)):
            return False
        try:
            from .manifold import dual_conjugate_solve

            dual_conjugate_solve(self, theta)
            return True
        except Exception:
            return False

    def in_eta_domain(self, eta):
        return bool(np.min(self.pmf_from_eta(eta)) > self.FLOOR)

    def phi_closed(self, eta):
        p = self.pmf_from_eta(eta)
        return float(p @ np.log(p))

    def grad_phi_closed(self, eta):
        p = self.pmf_from_eta(eta)
        return self._diffs @ np.log(p)

    def hess_phi_closed(self, eta):
        p = self.pmf_from_eta(eta)
        return (self._diffs / p) @ self._diffs.T

    def initial_eta(self, theta):
        return np.zeros(self.dimension)

    def point_from_params(self, params):
        params = dict(params)
        try:
            weights = np.asarray(params.pop("weights"), dtype=float)
        except KeyError as exc:
            raise ConfigError("mixture parameters need 'weights'") from exc
        _require(not params, f"mixture: unknown parameters {sorted(params)}")
        return point_from_eta(self, weights)

    def support_pmf(self, point):
        return self.pmf_from_eta(point.eta)

    def log_density(self, point, outcome):
        i = outcome
        if not (isinstance(i, (int, np.integer)) or (isinstance(i, float) and i.is_integer())):
            raise DomainError(f"mixture: outcome must be a support index, got {outcome!r}")
        i = int(i)
        m = self.components.shape[1]
        if not 0 <= i < m:
            raise DomainError(f"mixture: outcome {i} outside 0..{m - 1}")
        return math.log(float(self.support_pmf(point)[i]))

    def entropy(self, point):
        return _entropy_of(self.support_pmf(point))

    def kl_divergence(self, p, q):
        pp, pq = self.support_pmf(p), self.support_pmf(q)
        return float(pp @ (np.log(pp) - np.log(pq)))

    def bhattacharyya(self, p, q, alpha):
        pp, pq = self.support_pmf(p), self.support_pmf(q)
        return -math.log(float(np.sum(pp ** (1.0 - alpha) * pq ** alpha)))

    def js_divergence(self, p, q, alpha):
        pp, pq = self.support_pmf(p), self.support_pmf(q)
        mix = (1.0 - alpha) * pp + alpha * pq
        return _entropy_of(mix) - (1.0 - alpha) * _entropy_of(pp) - alpha * _entropy_of(pq)

    def sample_point(self, rng):
        lows, highs = self._box
        for _ in range(_SAMPLE_ATTEMPTS):
            eta = rng.uniform(lows, highs)
            if self.in_eta_domain(eta):
                return point_from_eta(self, eta)
        raise SamplingExhausted(f"{self.label}: eta sampling found no valid point")


class SelfDual(Family):
    """Self-dual flat space: theta = eta, psi = phi = ||x||^2 / 2.

    Exists so the Euclidean reduction claims (affine divergence = squared
    distance, skew divergences = alpha(1-alpha)/2 * squared distance) are
    literally testable, and as the exact baseline for every identity check.
    """

    kind = "selfdual"
    kind_class = "selfdual"
    has_closed_psi = True
    has_closed_phi = True

    def __init__(self, dimension: int):
        _require(
            isinstance(dimension, (int, np.integer)) and not isinstance(dimension, bool) and dimension >= 1,
            f"selfdual: dimension must be an integer >= 1, got {dimension!r}",
        )
        self.dimension = int(dimension)

    @property
    def label(self):
        return f"selfdual(n={self.dimension})"

    def in_theta_domain(self, theta):
        return True

    def in_eta_domain(self, eta):
        return True

    def psi_closed(self, theta):
        return 0.5 * float(theta @ theta)

    def grad_psi_closed(self, theta):
        return np.array(theta, dtype=float)

    def hess_psi_closed(self, theta):
        return np.eye(self.dimension)

    def phi_closed(self, eta):
        return 0.5 * float(eta @ eta)

    def grad_phi_closed(self, eta):
        return np.array(eta, dtype=float)

    def hess_phi_closed(self, eta):
        return np.eye(self.dimension)

    def initial_theta(self, eta):
        return np.array(eta, dtype=float)

    def initial_eta(self, theta):
        return np.array(theta, dtype=float)

    def point_from_params(self, params):
        params = dict(params)
        try:
            values = np.asarray(params.pop("values"), dtype=float)
        except KeyError as exc:
            raise ConfigError("selfdual parameters need 'values'") from exc
        _require(not params, f"selfdual: unknown parameters {sorted(params)}")
        return point_from_theta(self, values)

    def sample_point(self, rng):
        return point_from_theta(self, rng.uniform(*_SELFDUAL_BOX, size=self.dimension))


def make_family(kind: str, **config) -> Family:
    """Build a family descriptor, validating the kind-specific configuration.

    Accepted forms::

        make_family("gaussian1d")
        make_family("binomial", trials=10)
        make_family("categorical", outcomes=4)
        make_family("mixture", components=[[0.5, 0.5], [0.9, 0.1]])
        make_family("selfdual", dimension=2)
    """
    builders = {
        "gaussian1d": (Gaussian1D, ()),
        "binomial": (Binomial, ("trials",)),
        "categorical": (Categorical, ("outcomes",)),
        "mixture": (Mixture, ("components",)),
        "selfdual": (SelfDual, ("dimension",)),
    }
    if kind not in builders:
        raise ConfigError(f"unknown family kind {kind!r}; expected one of {FAMILY_KINDS}")
    cls, required = builders[kind]
    missing = [name for name in required if name not in config]
    _require(not missing, f"{kind}: missing configuration {missing}")
    extra = [name for name in config if name not in required]
    _require(not extra, f"{kind}: unknown configuration {extra}")
    return cls(**config)


# Module-level operation surface mirroring the family methods.


def point_from_params(family: Family, params) -> CoordinatePair:
    """Build a fully populated point from user-facing parameters."""
    return family.point_from_params(params)


def log_density(family: Family, point: CoordinatePair, outcome) -> float:
    """Log density/pmf of the distribution at ``point`` evaluated at ``outcome``."""
    return family.log_density(point, outcome)


def support_pmf(family: Family, point: CoordinatePair) -> np.ndarray:
    """Probability vector over the discrete support (discrete kinds only)."""
    return family.support_pmf(point)


def reference_entropy(family: Family, point: CoordinatePair) -> float:
    """(Differential) entropy computed independently of the potentials."""
    return family.entropy(point)


def reference_kl(family: Family, p: CoordinatePair, q: CoordinatePair) -> float:
    """KL(p_P || p_Q) by direct summation or the Gaussian closed form."""
    return family.kl_divergence(p, q)


def reference_bhattacharyya(family: Family, p, q, alpha: float) -> float:
    """alpha-skewed Bhattacharyya distance -ln sum p^(1-alpha) q^alpha."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"bhattacharyya: alpha must lie in (0, 1), got {alpha}")
    return family.bhattacharyya(p, q, alpha)


def reference_js(family: Family, p, q, alpha: float) -> float:
    """alpha-skew Jensen-Shannon divergence via the entropy form (discrete only)."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"js: alpha must lie in (0, 1), got {alpha}")
    return family.js_divergence(p, q, alpha)


def closed_form_affine(family: Family, p: CoordinatePair, q: CoordinatePair) -> float:
    """Per-family closed form of the affine divergence, where one exists."""
    return family.closed_form_affine(p, q)
