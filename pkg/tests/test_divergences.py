"""Divergence functionals: values, semimetric axioms, relations, inequalities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualflat import (
    affine,
    canonical,
    dual_inner_product,
    make_family,
    phi_divergence,
    point_from_params,
    psi_divergence,
    renyi,
    skew_combination,
)
from dualflat.divergences import NONNEG_SLACK, _clamped
from dualflat.errors import DomainError, NonnegativityError, UnsupportedError
from dualflat.manifold import point_from_theta

from conftest import MIXTURE_COMPONENTS, build_all_families


@pytest.fixture()
def gaussian_pair():
    g = make_family("gaussian1d")
    p = point_from_params(g, {"mu": 0.0, "sigma": 1.0})
    q = point_from_params(g, {"mu": 1.0, "sigma": 2.0})
    return g, p, q


# ---------------------------------------------------------------------------
# canonical and affine
# ---------------------------------------------------------------------------


def test_canonical_gaussian_example(gaussian_pair):
    # psi(P) + phi(Q) - theta(P).eta(Q) = 0.9189385 - 2.1120857 + 2.5
    g, p, q = gaussian_pair
    value = canonical(g, p, q)
    assert value.kind == "canonical"
    assert value.value == pytest.approx(1.3068528194400546, abs=1e-12)
    assert canonical(g, q, p).value == pytest.approx(0.4431471805599453, abs=1e-12)


def test_canonical_zero_iff_equal(gaussian_pair):
    g, p, _ = gaussian_pair
    assert canonical(g, p, p).value == pytest.approx(0.0, abs=1e-14)


def test_canonical_selfdual_half_squared_distance():
    f = make_family("selfdual", dimension=2)
    p = point_from_theta(f, [0.0, 0.0])
    q = point_from_theta(f, [3.0, 4.0])
    assert canonical(f, p, q).value == pytest.approx(12.5, abs=1e-14)


def test_affine_gaussian_example(gaussian_pair):
    # closed form: 9/8 + 1*(1/2 + 1/8); also the two KLs summed
    g, p, q = gaussian_pair
    assert affine(g, p, q).value == pytest.approx(1.75, abs=1e-12)


def test_affine_binomial_example():
    b = make_family("binomial", trials=1)
    p = point_from_params(b, {"p": 0.2})
    q = point_from_params(b, {"p": 0.8})
    assert affine(b, p, q).value == pytest.approx(0.6 * math.log(16.0), abs=1e-12)


def test_affine_selfdual_squared_distance():
    f = make_family("selfdual", dimension=2)
    p = point_from_theta(f, [0.0, 0.0])
    q = point_from_theta(f, [3.0, 4.0])
    assert affine(f, p, q).value == pytest.approx(25.0, abs=1e-13)


def test_affine_equals_canonical_both_ways():
    for name, family in build_all_families().items():
        rng = np.random.default_rng(21)
        for _ in range(25):
            p, q = family.sample_point(rng), family.sample_point(rng)
            both = canonical(family, p, q).value + canonical(family, q, p).value
            assert abs(affine(family, p, q).value - both) < 1e-12 * (1 + both), name


def test_semimetric_axioms():
    for name, family in build_all_families().items():
        rng = np.random.default_rng(22)
        for _ in range(50):
            p, q = family.sample_point(rng), family.sample_point(rng)
            forward = affine(family, p, q).value
            backward = affine(family, q, p).value
            assert forward >= 0.0, name
            assert abs(forward - backward) < 1e-12 * (1 + forward), name
            if forward < 1e-10:
                gap = max(np.max(np.abs(p.theta - q.theta)), np.max(np.abs(p.eta - q.eta)))
                assert gap < 1e-5, name
        assert affine(family, p, p).value == 0.0


# ---------------------------------------------------------------------------
# dual inner product
# ---------------------------------------------------------------------------


def test_inner_product_diagonal_is_affine(gaussian_pair):
    g, p, q = gaussian_pair
    assert dual_inner_product(g, q, q, base=p) == pytest.approx(
        affine(g, p, q).value, abs=1e-13)


def test_inner_product_selfdual_orthogonal():
    f = make_family("selfdual", dimension=2)
    base = point_from_theta(f, [0.0, 0.0])
    q = point_from_theta(f, [1.0, 0.0])
    r = point_from_theta(f, [0.0, 1.0])
    assert dual_inner_product(f, q, r, base=base) == 0.0


def test_inner_product_law_of_cosines_residual():
    g = make_family("gaussian1d")
    p = point_from_params(g, {"mu": 0.0, "sigma": 1.0})
    q = point_from_params(g, {"mu": 1.0, "sigma": 1.0})
    r = point_from_params(g, {"mu": 0.0, "sigma": 2.0})
    residual = (
        affine(g, q, p).value + affine(g, p, r).value
        - 2.0 * dual_inner_product(g, q, r, base=p) - affine(g, q, r).value
    )
    assert abs(residual) < 1e-10


def test_inner_product_symmetry_in_arguments():
    for family in build_all_families().values():
        rng = np.random.default_rng(23)
        p, q, r = (family.sample_point(rng) for _ in range(3))
        assert dual_inner_product(family, q, r, base=p) == pytest.approx(
            dual_inner_product(family, r, q, base=p), abs=1e-13)


# ---------------------------------------------------------------------------
# skew divergences
# ---------------------------------------------------------------------------


def test_psi_divergence_binomial_example():
    # oracle: ln(1.25)/2 + ln(5)/2 - ln 2 = ln 1.25 = -ln 0.8
    b = make_family("binomial", trials=1)
    p = point_from_params(b, {"p": 0.2})
    q = point_from_params(b, {"p": 0.8})
    value = psi_divergence(b, p, q, 0.5)
    assert value.kind == "psi_skew" and value.alpha == 0.5
    assert value.value == pytest.approx(-math.log(0.8), abs=1e-12)


def test_psi_divergence_zero_at_equality():
    b = make_family("binomial", trials=1)
    p = point_from_params(b, {"p": 0.3})
    assert psi_divergence(b, p, p, 0.7).value == pytest.approx(0.0, abs=1e-14)


def test_psi_divergence_selfdual_reduction():
    # alpha(1-alpha)/2 * (delta theta)^2 = 0.25 * 0.5 * 4
    f = make_family("selfdual", dimension=1)
    p = point_from_theta(f, [0.0])
    q = point_from_theta(f, [2.0])
    assert psi_divergence(f, p, q, 0.5).value == pytest.approx(0.5, abs=1e-14)


def test_psi_divergence_equals_canonical_combination():
    for name, family in build_all_families().items():
        rng = np.random.default_rng(24)
        for _ in range(20):
            p, q = family.sample_point(rng), family.sample_point(rng)
            alpha = rng.uniform(0.1, 0.9)
            try:
                direct = psi_divergence(family, p, q, alpha).value
            except DomainError:
                continue
            mid = point_from_theta(family, (1 - alpha) * p.theta + alpha * q.theta)
            combo = (1 - alpha) * canonical(family, p, mid).value + alpha * canonical(
                family, q, mid).value
            assert abs(direct - combo) < 1e-12 * (1 + abs(direct) + abs(combo)), name


def test_phi_divergence_mixture_example():
    m = make_family("mixture", components=MIXTURE_COMPONENTS)
    p = point_from_params(m, {"weights": [0.0]})
    q = point_from_params(m, {"weights": [1.0]})
    # oracle: H(0.7,0.3) - H(0.5,0.5)/2 - H(0.9,0.1)/2 = 0.10174922507919678
    assert phi_divergence(m, p, q, 0.5).value == pytest.approx(0.10174922507919678, abs=1e-12)
    assert phi_divergence(m, p, p, 0.5).value == pytest.approx(0.0, abs=1e-14)


def test_phi_divergence_selfdual_reduction():
    f = make_family("selfdual", dimension=1)
    p = point_from_theta(f, [0.0])
    q = point_from_theta(f, [2.0])
    assert phi_divergence(f, p, q, 0.5).value == pytest.approx(0.5, abs=1e-14)


def test_skew_alpha_validation(gaussian_pair):
    g, p, q = gaussian_pair
    for alpha in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(DomainError):
            psi_divergence(g, p, q, alpha)
        with pytest.raises(DomainError):
            phi_divergence(g, p, q, alpha)


def test_combination_point_outside_domain_raises():
    # weights outside the simplex can push the combination point out of the
    # gaussian half-plane theta_1 < 0
    g = make_family("gaussian1d")
    p = point_from_params(g, {"mu": 0.0, "sigma": 1.0})
    q = point_from_params(g, {"mu": 0.0, "sigma": 0.5})
    with pytest.raises(DomainError):
        skew_combination(g, p, q, -2.0, 0.5, side="theta")


# ---------------------------------------------------------------------------
# skew combinations
# ---------------------------------------------------------------------------


def test_skew_combination_specializes_to_psi_divergence(gaussian_pair):
    g, p, q = gaussian_pair
    alpha = 0.3
    combo = skew_combination(g, p, q, 1 - alpha, alpha, side="theta")
    assert combo == pytest.approx(psi_divergence(g, p, q, alpha).value, abs=1e-12)


def test_skew_combination_degenerate_weights(gaussian_pair):
    g, p, q = gaussian_pair
    assert skew_combination(g, p, q, 1.0, 0.0, side="theta") == pytest.approx(0.0, abs=1e-13)


def test_skew_combination_potential_form_agreement():
    # both sides of the combination identity evaluated independently
    g = make_family("gaussian1d")
    p = point_from_params(g, {"mu": 0.0, "sigma": 1.0})
    q = point_from_params(g, {"mu": 0.0, "sigma": 2.0})
    a = b = 1.0
    combo = skew_combination(g, p, q, a, b, side="theta")
    mid = point_from_theta(g, a * p.theta + b * q.theta)
    potential_form = (a + b - 1.0) * mid.phi + a * p.psi + b * q.psi - mid.psi
    assert abs(combo - potential_form) < 1e-10


def test_skew_combination_eta_side_potential_form():
    g = make_family("gaussian1d")
    rng = np.random.default_rng(25)
    from dualflat.manifold import point_from_eta

    for _ in range(25):
        p, q = g.sample_point(rng), g.sample_point(rng)
        a, b = rng.uniform(0.1, 1.2, size=2)
        try:
            combo = skew_combination(g, p, q, a, b, side="eta")
        except DomainError:
            continue  # a+b != 1 can push the combination point out of the domain
        mid = point_from_eta(g, a * p.eta + b * q.eta)
        potential_form = (a + b - 1.0) * mid.psi + a * p.phi + b * q.phi - mid.phi
        assert abs(combo - potential_form) < 1e-11 * (1 + abs(combo))
        assert combo >= -1e-11  # nonnegative for a, b >= 0


def test_skew_combination_rejects_bad_side(gaussian_pair):
    g, p, q = gaussian_pair
    with pytest.raises(DomainError):
        skew_combination(g, p, q, 0.5, 0.5, side="diagonal")


# ---------------------------------------------------------------------------
# Renyi
# ---------------------------------------------------------------------------


def test_renyi_half_doubles_psi_divergence():
    b = make_family("binomial", trials=1)
    p = point_from_params(b, {"p": 0.2})
    q = point_from_params(b, {"p": 0.8})
    assert renyi(b, p, q, 0.5).value == pytest.approx(
        2.0 * psi_divergence(b, p, q, 0.5).value, abs=1e-13)
    assert renyi(b, p, q, 0.5).value == pytest.approx(0.4462871026284195, abs=1e-12)
    assert renyi(b, p, p, 0.5).value == pytest.approx(0.0, abs=1e-14)


def test_renyi_unsupported_for_mixture():
    m = make_family("mixture", components=MIXTURE_COMPONENTS)
    p = point_from_params(m, {"weights": [0.0]})
    with pytest.raises(UnsupportedError):
        renyi(m, p, p, 0.5)


def test_renyi_matches_quadrature_definition():
    # standard Renyi: (alpha - 1)^-1 ln integral p^alpha q^(1-alpha), computed
    # from the Bhattacharyya oracle at skew 1-alpha
    from dualflat import reference_bhattacharyya

    b = make_family("binomial", trials=4)
    rng = np.random.default_rng(26)
    for _ in range(25):
        p, q = b.sample_point(rng), b.sample_point(rng)
        alpha = rng.uniform(0.1, 0.9)
        oracle = reference_bhattacharyya(b, p, q, 1.0 - alpha) / (1.0 - alpha)
        assert renyi(b, p, q, alpha).value == pytest.approx(oracle, abs=1e-9)


# ---------------------------------------------------------------------------
# relations from the triangular identity
# ---------------------------------------------------------------------------


def test_triangular_relation_sampled():
    for name, family in build_all_families().items():
        rng = np.random.default_rng(27)
        for _ in range(200):
            p, q, r = (family.sample_point(rng) for _ in range(3))
            lhs = (
                canonical(family, p, q).value
                + canonical(family, q, r).value
                - canonical(family, p, r).value
            )
            rhs = float((r.eta - q.eta) @ (p.theta - q.theta))
            scale = 1 + abs(lhs) + abs(rhs)
            assert abs(lhs - rhs) < 1e-9 * scale, name


def test_pythagorean_specialization_by_orthogonal_completion():
    # choose theta(P) = theta(Q) + v with v orthogonal to eta(R) - eta(Q)
    for name in ("gaussian1d", "categorical", "selfdual"):
        family = build_all_families()[name]
        rng = np.random.default_rng(28)
        done = 0
        while done < 50:
            q, r = family.sample_point(rng), family.sample_point(rng)
            u = r.eta - q.eta
            w = rng.normal(size=family.dimension)
            v = w - (w @ u) / (u @ u) * u
            norm = np.linalg.norm(v)
            if norm < 1e-12:
                continue
            try:
                p = point_from_theta(family, q.theta + 0.05 * v / norm)
            except DomainError:
                continue
            done += 1
            residual = (
                canonical(family, p, q).value
                + canonical(family, q, r).value
                - canonical(family, p, r).value
            )
            assert abs(residual) < 1e-9, name


def test_inequality_theorem_spot():
    for name, family in build_all_families().items():
        rng = np.random.default_rng(29)
        for _ in range(50):
            p, q = family.sample_point(rng), family.sample_point(rng)
            alpha = rng.uniform(0.05, 0.95)
            bound = alpha * (1 - alpha) * affine(family, p, q).value
            try:
                assert bound - psi_divergence(family, p, q, alpha).value >= -1e-10, name
            except DomainError:
                pass
            assert bound - phi_divergence(family, p, q, alpha).value >= -1e-10, name


# ---------------------------------------------------------------------------
# nonnegativity clamp
# ---------------------------------------------------------------------------


def test_clamp_accepts_rounding_noise_and_rejects_bugs():
    assert _clamped(-0.5 * NONNEG_SLACK, "affine") == 0.0
    assert _clamped(3.25, "affine") == 3.25
    with pytest.raises(NonnegativityError):
        _clamped(-1e-6, "affine")


def test_dimension_mismatch_rejected(gaussian_pair):
    g, p, _ = gaussian_pair
    other = make_family("selfdual", dimension=3)
    alien = point_from_theta(other, [0.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        canonical(g, p, alien)


# ---------------------------------------------------------------------------
# property-based Euclidean reductions
# ---------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(
    x=st.lists(st.floats(-50, 50), min_size=3, max_size=3),
    y=st.lists(st.floats(-50, 50), min_size=3, max_size=3),
)
def test_selfdual_affine_is_squared_distance(x, y):
    f = make_family("selfdual", dimension=3)
    p = point_from_theta(f, x)
    q = point_from_theta(f, y)
    expected = float(np.sum((np.asarray(y) - np.asarray(x)) ** 2))
    assert affine(f, p, q).value == pytest.approx(expected, rel=1e-12, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(-20, 20),
    y=st.floats(-20, 20),
    alpha=st.floats(0.01, 0.99),
)
def test_selfdual_skew_divergences_reduce(x, y, alpha):
    f = make_family("selfdual", dimension=1)
    p = point_from_theta(f, [x])
    q = point_from_theta(f, [y])
    expected = 0.5 * alpha * (1 - alpha) * (y - x) ** 2
    assert psi_divergence(f, p, q, alpha).value == pytest.approx(expected, rel=1e-10, abs=1e-10)
    assert phi_divergence(f, p, q, alpha).value == pytest.approx(expected, rel=1e-10, abs=1e-10)
