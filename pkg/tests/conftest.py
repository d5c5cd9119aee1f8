"""Shared fixtures for the test suite.

Most tests want a small, fast geometry; the fixtures here build one Cantor
set per session and hand out read-only views.  Anything that mutates state
should build its own objects.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cantor_riesz import CantorParams, KernelSpec, atomize, build_profile, eval_brute

# Numerical property tests routinely blow the default 200 ms deadline on
# cold numpy imports; wall-clock limits are enforced separately in the
# acceptance module where they matter.
settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def params_small():
    """d=1, s=1/2, four generations of ratio 1/4."""
    return CantorParams(d=1, s=0.5, lam=(0.25,) * 4)


@pytest.fixture(scope="session")
def params_mixed():
    """d=1 with non-constant ratios, so theta is not identically 1."""
    return CantorParams(d=1, s=0.5, lam=(0.25, 0.3, 0.2, 0.25))


@pytest.fixture(scope="session")
def params_plane():
    """A small planar set (d=2)."""
    return CantorParams(d=2, s=1.0, lam=(0.25, 0.3, 0.2))


@pytest.fixture(scope="session")
def atoms_small(params_small):
    return atomize(params_small, refine_k=2)


@pytest.fixture(scope="session")
def atoms_mixed(params_mixed):
    return atomize(params_mixed, refine_k=2)


@pytest.fixture(scope="session")
def atoms_plane(params_plane):
    return atomize(params_plane, refine_k=2)


@pytest.fixture(scope="session")
def profile_small(params_small):
    return build_profile(params_small)


@pytest.fixture(scope="session")
def profile_mixed(params_mixed):
    return build_profile(params_mixed)


@pytest.fixture(scope="session")
def field_mixed(atoms_mixed):
    """Self-excluded transform of the natural measure at its own atoms."""
    return eval_brute(atoms_mixed, atoms_mixed.points, KernelSpec(s=0.5), self_exclude=True)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260825)
