"""Shared fixtures: built-in families and numeric-twin views.

The view classes hide one closed-form side of a family so the generic
numerical machinery (conjugate solver, finite differences) is forced onto
paths that closed forms would otherwise shadow.  Tests compare the numeric
results against the full family's closed forms.
"""

import numpy as np
import pytest

from dualflat import make_family
from dualflat.manifold import Family

MIXTURE_COMPONENTS = [[0.5, 0.5], [0.9, 0.1]]


def build_all_families():
    return {
        "selfdual": make_family("selfdual", dimension=2),
        "gaussian1d": make_family("gaussian1d"),
        "binomial": make_family("binomial", trials=10),
        "categorical": make_family("categorical", outcomes=4),
        "mixture": make_family("mixture", components=MIXTURE_COMPONENTS),
    }


@pytest.fixture(scope="session")
def families():
    return build_all_families()


class PsiOnlyView(Family):
    """Delegating view with the phi side hidden: forces the conjugate solver."""

    has_closed_psi = True
    has_closed_phi = False

    def __init__(self, base):
        self._base = base
        self.kind = base.kind
        self.kind_class = base.kind_class
        self.dimension = base.dimension

    def in_theta_domain(self, theta):
        return self._base.in_theta_domain(theta)

    def in_eta_domain(self, eta):
        return self._base.in_eta_domain(eta)

    def psi_closed(self, theta):
        return self._base.psi_closed(theta)

    def grad_psi_closed(self, theta):
        return self._base.grad_psi_closed(theta)

    def hess_psi_closed(self, theta):
        return self._base.hess_psi_closed(theta)

    def initial_theta(self, eta):
        return self._base.initial_theta(eta)


class ValueOnlyPsiView(PsiOnlyView):
    """Hides the psi gradient and Hessian too: forces finite differences."""

    def grad_psi_closed(self, theta):
        return None

    def hess_psi_closed(self, theta):
        return None

    def initial_theta(self, eta):
        return self._base.initial_theta(eta)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
