"""Randomized residual checks for every identity and inequality of the library.

Coverage (theorem -> check -> report name):

====================================  =========================  ==============================
quantity                              check function             report rows
====================================  =========================  ==============================
triangular relation                   check_triangle_family      triangular_relation
law of cosines                        check_triangle_family      law_of_cosines
expansion formula (both forms)        check_vector_sum_family    expansion_formula
parallelogram law                     check_vector_sum_family    parallelogram_law
polarization identity                 check_vector_sum_family    polarization_identity
interior-angle sum                    check_vector_sum_family    interior_angle_sum
division lemma                        check_division_family      division_lemma_{theta,eta}
reversed division corollary           check_division_family      division_corollary_{theta,eta}
division theorem                      check_division_family      division_theorem_{theta,eta}
psi-divergence bound                  check_inequalities_family  psi_vs_affine
phi-divergence bound                  check_inequalities_family  phi_vs_affine
skew JS bound (mixture)               check_inequalities_family  lin1_js
skew Bhattacharyya bound              check_inequalities_family  lin2_bhattacharyya
Renyi bound                           check_inequalities_family  lin2_renyi
affine integral form                  check_quadrature_family    affine_integral_{theta,eta}
canonical integral form               check_quadrature_family    canonical_integral_{theta,eta}
profile monotonicity                  check_quadrature_family    profile_monotonicity
====================================  =========================  ==============================

Reports are deterministic functions of (family, seed, sample count): every
sample draws from its own generator seeded by (seed, check stream, index), so
results are schedule independent and re-runs are bit identical.  Identity
residuals are normalized by (1 + sum of |terms|) before comparison with the
tolerance; inequality checks compare their raw minimum slack instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .divergences import (
    affine,
    canonical,
    dual_inner_product,
    phi_divergence,
    psi_divergence,
)
from .errors import ConfigError, ConvergenceError, DomainError, SamplingExhausted
from .families import reference_bhattacharyya, reference_js, reference_kl
from .geodesics import divergence_profile, make_spec
from .geodesics import affine_via_metric_integral, canonical_via_weighted_integral
from .manifold import CoordinatePair, Family, point_from_eta, point_from_theta

__all__ = [
    "ResidualReport",
    "SampleConfig",
    "check_division_family",
    "check_inequalities_family",
    "check_quadrature_family",
    "check_triangle_family",
    "check_vector_sum_family",
    "run_all",
]

_RESAMPLE_ATTEMPTS = 10

# Stable per-check stream tags keeping the sample generators disjoint.
_STREAM_TRIANGLE = 1
_STREAM_VECTOR_SUM = 2
_STREAM_DIVISION = 3
_STREAM_INEQUALITIES = 4
_STREAM_QUADRATURE = 5

# The division identities exclude t in {0, 1}; sample away from the poles of
# the 1/t and 1/(1-t) weights.
_T_SEGMENTS = ((0.05, 0.95), (1.05, 1.5))

_ALPHA_BOX = (0.05, 0.95)

#: Rounding allowance when asserting a provable inequality on samples.
INEQUALITY_SLACK = 1e-10

_PROFILE_GRID = 101


@dataclass(frozen=True)
class SampleConfig:
    """Sampling plan for one verification run."""

    seed: int = 0
    samples: int = 200
    tol_closed: float = 1e-9
    tol_quad: float = 1e-6
    quadrature_samples: int = 50

    def __post_init__(self):
        if not (isinstance(self.seed, (int, np.integer)) and 0 <= self.seed < 2 ** 64):
            raise ConfigError(f"seed must be a 64-bit nonnegative integer, got {self.seed!r}")
        if not (isinstance(self.samples, (int, np.integer)) and self.samples >= 1):
            raise ConfigError(f"samples must be >= 1, got {self.samples!r}")
        if not (isinstance(self.quadrature_samples, (int, np.integer)) and self.quadrature_samples >= 1):
            raise ConfigError(f"quadrature_samples must be >= 1, got {self.quadrature_samples!r}")
        if not (self.tol_closed > 0.0 and self.tol_quad > 0.0):
            raise ConfigError("tolerances must be positive")


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one identity or inequality over a sample set.

    For identities, ``passed`` means the maximum normalized residual stayed
    within tolerance; for inequalities (``min_slack`` set), it means the
    minimum slack stayed above minus the tolerance.  ``worst_case`` embeds the
    offending configuration verbatim so failures replay from (seed, index).
    """

    name: str
    samples: int
    max_abs_residual: float
    max_rel_residual: float
    tolerance: float
    passed: bool
    worst_case: dict = field(default_factory=dict)
    min_slack: float | None = None


def _rng(config: SampleConfig, stream: int, index: int) -> np.random.Generator:
    return np.random.default_rng([config.seed, stream, index])


def _coords(point: CoordinatePair) -> dict:
    return {"theta": [float(v) for v in point.theta], "eta": [float(v) for v in point.eta]}


def _case(index: int, points: dict, **extra) -> dict:
    case = {"sample": index}
    case.update({name: _coords(p) for name, p in points.items()})
    case.update(extra)
    return case


def _attempt(construct, rng, what: str):
    """Run ``construct(rng)`` with bounded resampling on domain violations."""
    for _ in range(_RESAMPLE_ATTEMPTS):
        try:
            return construct(rng)
        except (DomainError, ConvergenceError):
            continue
    raise SamplingExhausted(f"{what}: no valid configuration in {_RESAMPLE_ATTEMPTS} attempts")


class _ResidualAgg:
    """Running max of |residual| and its normalized form, with the worst case."""

    def __init__(self, name: str):
        self.name = name
        self.max_abs = 0.0
        self.max_rel = 0.0
        self.worst: dict = {}

    def add(self, residual: float, terms, case: dict) -> None:
        abs_res = abs(float(residual))
        rel = abs_res / (1.0 + float(sum(abs(t) for t in terms)))
        self.max_abs = max(self.max_abs, abs_res)
        if rel >= self.max_rel:
            self.max_rel = rel
            self.worst = case

    def report(self, samples: int, tolerance: float) -> ResidualReport:
        return ResidualReport(
            name=self.name,
            samples=samples,
            max_abs_residual=self.max_abs,
            max_rel_residual=self.max_rel,
            tolerance=tolerance,
            passed=self.max_rel <= tolerance,
            worst_case=self.worst,
        )


class _SlackAgg:
    """Running min slack of an inequality, with the tightest case."""

    def __init__(self, name: str):
        self.name = name
        self.min_slack = np.inf
        self.worst: dict = {}

    def add(self, slack: float, case: dict) -> None:
        slack = float(slack)
        if slack <= self.min_slack:
            self.min_slack = slack
            self.worst = case

    def report(self, samples: int, tolerance: float) -> ResidualReport:
        violation = max(0.0, -float(self.min_slack))
        return ResidualReport(
            name=self.name,
            samples=samples,
            max_abs_residual=violation,
            max_rel_residual=violation,
            tolerance=tolerance,
            passed=self.min_slack >= -tolerance,
            worst_case=self.worst,
            min_slack=float(self.min_slack),
        )


def check_triangle_family(family: Family, config: SampleConfig) -> list[ResidualReport]:
    """Triangular relation and generalized law of cosines over sampled triples."""
    tri = _ResidualAgg("triangular_relation")
    cos = _ResidualAgg("law_of_cosines")
    for i in range(config.samples):
        rng = _rng(config, _STREAM_TRIANGLE, i)
        p, q, r = (family.sample_point(rng) for _ in range(3))
        case = _case(i, {"P": p, "Q": q, "R": r})

        dpq = canonical(family, p, q).value
        dqr = canonical(family, q, r).value
        dpr = canonical(family, p, r).value
        cross = float((r.eta - q.eta) @ (p.theta - q.theta))
        tri.add(dpq + dqr - dpr - cross, (dpq, dqr, dpr, cross), case)

        apq = affine(family, p, q).value
        aqr = affine(family, q, r).value
        apr = affine(family, p, r).value
        ip = dual_inner_product(family, p, r, base=q)
        cos.add(apq + aqr - 2.0 * ip - apr, (apq, aqr, apr, ip), case)
    return [tri.report(config.samples, config.tol_closed),
            cos.report(config.samples, config.tol_closed)]


def check_vector_sum_family(family: Family, config: SampleConfig) -> list[ResidualReport]:
    """Expansion formula, parallelogram law, polarization identity, and the
    interior-angle sum over sampled parallelograms, on both chart sides."""
    expansion = _ResidualAgg("expansion_formula")
    parallelogram = _ResidualAgg("parallelogram_law")
    polarization = _ResidualAgg("polarization_identity")
    interior = _ResidualAgg("interior_angle_sum")

    for i in range(config.samples):
        rng = _rng(config, _STREAM_VECTOR_SUM, i)
        for side in ("theta", "eta"):

            def construct(r):
                p, q, s = (family.sample_point(r) for _ in range(3))
                if side == "theta":
                    fourth = point_from_theta(family, q.theta + s.theta - p.theta)
                else:
                    fourth = point_from_eta(family, q.eta + s.eta - p.eta)
                return p, q, fourth, s

            p, q, r, s = _attempt(construct, rng, f"parallelogram completion ({side})")
            case = _case(i, {"P": p, "Q": q, "R": r, "S": s}, side=side)

            apr = affine(family, p, r).value
            aqs = affine(family, q, s).value
            apq = affine(family, p, q).value
            aps = affine(family, p, s).value
            arq = affine(family, r, q).value
            ars = affine(family, r, s).value
            asp = affine(family, s, p).value
            aqr = affine(family, q, r).value
            qs_at_p = dual_inner_product(family, q, s, base=p)
            qs_at_r = dual_inner_product(family, q, s, base=r)
            pr_at_q = dual_inner_product(family, p, r, base=q)
            pr_at_s = dual_inner_product(family, p, r, base=s)

            expansion.add(apr - apq - aps - 2.0 * qs_at_r, (apr, apq, aps, qs_at_r), case)
            expansion.add(apr - arq - ars - 2.0 * qs_at_p, (apr, arq, ars, qs_at_p), case)
            parallelogram.add(
                apq + aqr + ars + asp - apr - aqs,
                (apq, aqr, ars, asp, apr, aqs),
                case,
            )
            polarization.add(
                2.0 * (qs_at_p + qs_at_r) - (apr - aqs),
                (qs_at_p, qs_at_r, apr, aqs),
                case,
            )
            interior.add(
                qs_at_p + qs_at_r + pr_at_q + pr_at_s,
                (qs_at_p, qs_at_r, pr_at_q, pr_at_s),
                case,
            )
    tol = config.tol_closed
    return [expansion.report(config.samples, tol),
            parallelogram.report(config.samples, tol),
            polarization.report(config.samples, tol),
            interior.report(config.samples, tol)]


def _draw_t(rng: np.random.Generator) -> float:
    lengths = [hi - lo for lo, hi in _T_SEGMENTS]
    u = rng.uniform(0.0, sum(lengths))
    for (lo, hi), length in zip(_T_SEGMENTS, lengths):
        if u <= length:
            return lo + u
        u -= length
    return _T_SEGMENTS[-1][1]


def check_division_family(family: Family, config: SampleConfig) -> list[ResidualReport]:
    """The three collinear-division identities on both charts.

    For Q dividing the chart segment P -> R at parameter t, the canonical
    divergence splits with a tail weighted by t/(1-t) (theta chart) or
    (1-t)/t (eta chart); the reversed corollary swaps the endpoints; and the
    affine divergence obeys the 1/t, 1/(1-t) summation rule on both charts.
    """
    aggs = {
        (name, chart): _ResidualAgg(f"{name}_{chart}")
        for name in ("division_lemma", "division_corollary", "division_theorem")
        for chart in ("theta", "eta")
    }
    for i in range(config.samples):
        rng = _rng(config, _STREAM_DIVISION, i)
        for chart in ("theta", "eta"):

            def construct(r):
                p, q = family.sample_point(r), family.sample_point(r)
                t = _draw_t(r)
                if chart == "theta":
                    mid = point_from_theta(family, (1.0 - t) * p.theta + t * q.theta)
                else:
                    mid = point_from_eta(family, (1.0 - t) * p.eta + t * q.eta)
                return p, mid, q, t

            p, q, r, t = _attempt(construct, rng, f"division point ({chart})")
            case = _case(i, {"P": p, "Q": q, "R": r}, t=t, chart=chart)

            dpr = canonical(family, p, r).value
            dpq = canonical(family, p, q).value
            dqr = canonical(family, q, r).value
            drp = canonical(family, r, p).value
            dqp = canonical(family, q, p).value
            drq = canonical(family, r, q).value
            apq = affine(family, p, q).value
            aqr = affine(family, q, r).value
            apr = affine(family, p, r).value

            if chart == "theta":
                lemma_tail = (t / (1.0 - t)) * aqr
                corollary_tail = ((1.0 - t) / t) * apq
            else:
                lemma_tail = ((1.0 - t) / t) * apq
                corollary_tail = (t / (1.0 - t)) * aqr
            aggs[("division_lemma", chart)].add(
                dpr - dpq - dqr - lemma_tail, (dpr, dpq, dqr, lemma_tail), case)
            aggs[("division_corollary", chart)].add(
                drp - dqp - drq - corollary_tail, (drp, dqp, drq, corollary_tail), case)
            aggs[("division_theorem", chart)].add(
                apr - apq / t - aqr / (1.0 - t), (apr, apq / t, aqr / (1.0 - t)), case)
    return [aggs[(name, chart)].report(config.samples, config.tol_closed)
            for name in ("division_lemma", "division_corollary", "division_theorem")
            for chart in ("theta", "eta")]


def check_inequalities_family(family: Family, config: SampleConfig) -> list[ResidualReport]:
    """Minimum slack of the skew-divergence inequalities over sampled (P, Q, alpha).

    The alpha(1-alpha) affine bounds run on every kind; the Jensen-Shannon
    bound needs the mixture JS oracle and the Bhattacharyya/Renyi bounds need
    the exponential-kind Bhattacharyya oracle, so those are gated by kind.
    """
    exponential = family.kind_class == "exponential"
    mixture = family.kind_class == "mixture"

    psi_agg = _SlackAgg("psi_vs_affine")
    phi_agg = _SlackAgg("phi_vs_affine")
    js_agg = _SlackAgg("lin1_js") if mixture else None
    bhat_agg = _SlackAgg("lin2_bhattacharyya") if exponential else None
    renyi_agg = _SlackAgg("lin2_renyi") if exponential else None

    for i in range(config.samples):
        rng = _rng(config, _STREAM_INEQUALITIES, i)

        def construct(r):
            p, q = family.sample_point(r), family.sample_point(r)
            alpha = r.uniform(*_ALPHA_BOX)
            # The theta-side midpoint can leave a clipped mixture domain;
            # evaluating here keeps the resample loop around it.
            dpsi = psi_divergence(family, p, q, alpha).value
            dphi = phi_divergence(family, p, q, alpha).value
            return p, q, alpha, dpsi, dphi

        p, q, alpha, dpsi, dphi = _attempt(construct, rng, "skew midpoints")
        da = affine(family, p, q).value
        case = _case(i, {"P": p, "Q": q}, alpha=alpha)
        coeff = alpha * (1.0 - alpha)
        psi_agg.add(coeff * da - dpsi, case)
        phi_agg.add(coeff * da - dphi, case)

        if exponential or mixture:
            jeffreys = reference_kl(family, p, q) + reference_kl(family, q, p)
            if mixture:
                js_agg.add(coeff * jeffreys - reference_js(family, p, q, alpha), case)
            if exponential:
                bhat_agg.add(
                    coeff * jeffreys - reference_bhattacharyya(family, p, q, alpha), case)
                renyi_oracle = reference_bhattacharyya(family, p, q, 1.0 - alpha) / (1.0 - alpha)
                renyi_agg.add(alpha * jeffreys - renyi_oracle, case)

    tol = INEQUALITY_SLACK
    reports = [psi_agg.report(config.samples, tol), phi_agg.report(config.samples, tol)]
    for agg in (js_agg, bhat_agg, renyi_agg):
        if agg is not None:
            reports.append(agg.report(config.samples, tol))
    return reports


def check_quadrature_family(family: Family, config: SampleConfig) -> list[ResidualReport]:
    """Integral divergence forms against direct evaluations, plus profile monotonicity."""
    aggs = {
        (name, chart): _ResidualAgg(f"{name}_{chart}")
        for name in ("affine_integral", "canonical_integral")
        for chart in ("theta", "eta")
    }
    mono = _ResidualAgg("profile_monotonicity")

    for i in range(config.quadrature_samples):
        rng = _rng(config, _STREAM_QUADRATURE, i)
        for chart in ("theta", "eta"):

            def construct(r):
                p, q = family.sample_point(r), family.sample_point(r)
                start = p.theta if chart == "theta" else p.eta
                end = q.theta if chart == "theta" else q.eta
                return p, q, make_spec(family, p, end - start, chart, 1.0)

            p, q, spec = _attempt(construct, rng, f"geodesic sampling ({chart})")
            case = _case(i, {"P": p, "Q": q}, chart=chart)

            direct_affine = affine(family, p, q).value
            direct_canonical = canonical(family, p, q).value
            quad_affine = affine_via_metric_integral(family, spec)
            quad_canonical = canonical_via_weighted_integral(family, spec)
            aggs[("affine_integral", chart)].add(
                quad_affine - direct_affine, (quad_affine, direct_affine), case)
            aggs[("canonical_integral", chart)].add(
                quad_canonical - direct_canonical, (quad_canonical, direct_canonical), case)

            profile = divergence_profile(family, p, q, chart, _PROFILE_GRID)
            dips = []
            for col in (profile.canonical, profile.affine):
                steps = np.diff(col)
                dips.append(max(0.0, -float(steps.min())) if steps.size else 0.0)
            scale = max(profile.canonical[-1], profile.affine[-1])
            mono.add(max(dips), (scale,), case)

    tol = config.tol_quad
    reports = [aggs[(name, chart)].report(config.quadrature_samples, tol)
               for name in ("affine_integral", "canonical_integral")
               for chart in ("theta", "eta")]
    reports.append(mono.report(config.quadrature_samples, tol))
    return reports


def run_all(family: Family, config: SampleConfig) -> list[ResidualReport]:
    """Every check in a fixed order; the verification suite behind the CLI."""
    reports = []
    reports.extend(check_triangle_family(family, config))
    reports.extend(check_vector_sum_family(family, config))
    reports.extend(check_division_family(family, config))
    reports.extend(check_inequalities_family(family, config))
    reports.extend(check_quadrature_family(family, config))
    return reports
