"""dualflat: dually flat statistical manifolds.

Dual affine charts and Legendre-dual potentials, the divergence functionals
built from them (canonical, affine, skew psi/phi, Renyi), chart geodesics with
integral divergence representations, and a randomized residual harness that
verifies every identity and inequality on concrete families.
"""

from .divergences import (
    DivergenceValue,
    affine,
    canonical,
    dual_inner_product,
    phi_divergence,
    psi_divergence,
    renyi,
    skew_combination,
)
from .errors import (
    ConditioningError,
    ConfigError,
    ConvergenceError,
    DomainError,
    DualFlatError,
    MonotonicityError,
    NonnegativityError,
    QuadratureError,
    SamplingExhausted,
    UnsupportedError,
)
from .families import (
    DEFAULT_MIXTURE_COMPONENTS,
    FAMILY_KINDS,
    closed_form_affine,
    log_density,
    make_family,
    point_from_params,
    reference_bhattacharyya,
    reference_entropy,
    reference_js,
    reference_kl,
    support_pmf,
)
from .geodesics import (
    GeodesicProfile,
    GeodesicSpec,
    affine_via_metric_integral,
    canonical_via_weighted_integral,
    divergence_profile,
    interpolate,
    make_spec,
)
from .identities import (
    ResidualReport,
    SampleConfig,
    check_division_family,
    check_inequalities_family,
    check_quadrature_family,
    check_triangle_family,
    check_vector_sum_family,
    run_all,
)
from .manifold import (
    CoordinatePair,
    Family,
    MetricMatrix,
    conjugate_solve,
    dual_conjugate_solve,
    duality_residual,
    eta_from_theta,
    metric,
    point_from_eta,
    point_from_theta,
    potential_phi,
    potential_psi,
    theta_from_eta,
)

__version__ = "0.1.0"
