"""Brute-force transform evaluation, kernels, and summation order.

The determinism contract matters as much as the values: results must be
bitwise reproducible across chunk sizes, which test_chunking_bitwise pins
down by shrinking the chunk length to force many passes.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import cantor_riesz.riesz as riesz_mod
from cantor_riesz import (
    AtomSet,
    CantorParams,
    KernelSpec,
    ParameterError,
    SingularityError,
    VecField,
    atomize,
    eval_brute,
    kernel,
    l2_norm_sq,
    pairwise_sum,
    smoothstep_psi,
    square_function,
)


def single_atom(x=0.25, mass=1.0):
    return AtomSet(
        params=CantorParams(d=1, s=0.5),
        refine_k=1,
        points=np.array([[x]]),
        masses=np.array([mass]),
        leaf_rank=np.zeros(1, dtype=np.int64),
    )


class TestKernelSpec:
    def test_defaults(self):
        spec = KernelSpec(s=0.5)
        assert spec.eps == 0.0

    @pytest.mark.parametrize("kwargs", [dict(s=0.0), dict(s=-1.0), dict(s=0.5, eps=-0.1)])
    def test_validation(self, kwargs):
        with pytest.raises(ParameterError):
            KernelSpec(**kwargs)


class TestVecField:
    def test_shape_guard(self):
        with pytest.raises(ParameterError):
            VecField(np.zeros(3))

    def test_finite_guard(self):
        with pytest.raises(ParameterError):
            VecField(np.array([[np.inf]]))

    def test_magnitudes(self):
        f = VecField(np.array([[3.0, 4.0], [0.0, 0.0]]))
        np.testing.assert_allclose(f.magnitudes(), [5.0, 0.0])
        assert f.n == 2


class TestPairwiseSum:
    @given(
        vals=st.lists(
            st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
            min_size=0,
            max_size=65,
        )
    )
    def test_matches_fsum(self, vals):
        arr = np.asarray(vals, dtype=float)
        got = pairwise_sum(arr)
        want = math.fsum(vals)
        assert got == pytest.approx(want, abs=1e-6 * (1 + abs(want)))

    def test_empty(self):
        assert pairwise_sum(np.zeros(0)) == 0.0
        assert pairwise_sum(np.zeros((0, 3)), axis=0).shape == (3,)

    def test_axis(self, rng):
        a = rng.normal(size=(5, 7))
        np.testing.assert_allclose(pairwise_sum(a, axis=1), a.sum(axis=1), rtol=1e-12)

    def test_deterministic(self, rng):
        a = rng.normal(size=1001)
        assert pairwise_sum(a) == pairwise_sum(a.copy())


class TestKernel:
    def test_value_on_axis(self):
        # |x|^(-s) falloff: at x=4 with s=1/2 the magnitude is 1/2
        assert kernel([4.0], 0.5) == pytest.approx([0.5])

    def test_antisymmetric(self, rng):
        for _ in range(5):
            x = rng.normal(size=2)
            np.testing.assert_allclose(kernel(-x, 0.7), -kernel(x, 0.7), rtol=1e-14)

    def test_magnitude(self, rng):
        x = rng.normal(size=3)
        r = np.linalg.norm(x)
        assert np.linalg.norm(kernel(x, 1.2)) == pytest.approx(r**-1.2, rel=1e-12)

    def test_singularity(self):
        with pytest.raises(SingularityError):
            kernel([0.0, 0.0], 1.0)


class TestEvalBrute:
    def test_two_atom_closed_form(self):
        # atoms at 1/8 and 7/8 with mass 1/2, s = 1/2: field magnitude at
        # each atom is (1/2) * (3/4)^(-1/2) = 1/sqrt(3), pointing inward
        atoms = atomize(CantorParams(d=1, s=0.5, lam=(0.25,)), refine_k=1)
        f = eval_brute(atoms, atoms.points, KernelSpec(s=0.5), self_exclude=True)
        np.testing.assert_allclose(
            f.values.ravel(), [1 / math.sqrt(3), -1 / math.sqrt(3)], rtol=1e-14
        )
        assert l2_norm_sq(f, atoms) == pytest.approx(1 / 3, rel=1e-14)

    def test_off_set_target(self):
        atoms = single_atom(x=0.25, mass=0.5)
        f = eval_brute(atoms, [[1.25]], KernelSpec(s=0.5))
        # mass * (x_a - t)/|x_a - t|^(3/2) = 0.5 * (-1) / 1
        assert f.values[0, 0] == pytest.approx(-0.5)

    @given(lam=st.floats(min_value=0.05, max_value=0.49))
    def test_global_cancellation(self, lam):
        """Total momentum sum_a m_a field(a) vanishes by antisymmetry."""
        params = CantorParams(d=1, s=0.5, lam=(lam,) * 3)
        atoms = atomize(params, refine_k=2)
        f = eval_brute(atoms, atoms.points, KernelSpec(s=0.5), self_exclude=True)
        total = np.einsum("n,nc->c", atoms.masses, f.values)
        assert np.abs(total).max() < 1e-12

    def test_truncation_removes_far_atoms(self):
        atoms = atomize(CantorParams(d=1, s=0.5, lam=(0.25,)), refine_k=1)
        # the only other atom sits at distance 3/4; eps above that kills it
        f = eval_brute(atoms, atoms.points, KernelSpec(s=0.5, eps=0.8), self_exclude=True)
        np.testing.assert_array_equal(f.values, np.zeros((2, 1)))

    def test_truncation_strict_inequality(self):
        atoms = atomize(CantorParams(d=1, s=0.5, lam=(0.25,)), refine_k=1)
        f = eval_brute(atoms, atoms.points, KernelSpec(s=0.5, eps=0.75), self_exclude=True)
        np.testing.assert_array_equal(f.values, np.zeros((2, 1)))
        f = eval_brute(
            atoms, atoms.points, KernelSpec(s=0.5, eps=0.7499), self_exclude=True
        )
        assert np.abs(f.values).min() > 0.5

    def test_exact_hit_raises(self, atoms_small):
        with pytest.raises(SingularityError):
            eval_brute(atoms_small, atoms_small.points[:3], KernelSpec(s=0.5))

    def test_exact_hit_truncated_is_fine(self, atoms_small):
        f = eval_brute(atoms_small, atoms_small.points[:3], KernelSpec(s=0.5, eps=1e-9))
        assert np.all(np.isfinite(f.values))

    def test_self_exclude_needs_matching_targets(self, atoms_small):
        with pytest.raises(ParameterError):
            eval_brute(atoms_small, atoms_small.points[:3], KernelSpec(s=0.5), True)

    def test_order_guard(self, atoms_small):
        with pytest.raises(ParameterError):
            eval_brute(atoms_small, [[0.5]], KernelSpec(s=1.5))

    def test_chunking_bitwise(self, atoms_mixed, monkeypatch):
        spec = KernelSpec(s=0.5)
        want = eval_brute(atoms_mixed, atoms_mixed.points, spec, self_exclude=True)
        monkeypatch.setattr(riesz_mod, "_CHUNK_ELEMS", 64)
        got = eval_brute(atoms_mixed, atoms_mixed.points, spec, self_exclude=True)
        assert np.array_equal(got.values, want.values)

    def test_plane_field_finite(self, atoms_plane):
        f = eval_brute(atoms_plane, atoms_plane.points, KernelSpec(s=1.0), True)
        assert f.values.shape == (atoms_plane.n, 2)
        assert np.all(np.isfinite(f.values))

    def test_norm_size_guard(self, atoms_small):
        f = eval_brute(atoms_small, [[2.0], [3.0], [4.0]], KernelSpec(s=0.5))
        with pytest.raises(ParameterError):
            l2_norm_sq(f, atoms_small)


class TestSmoothstepPsi:
    def test_plateaus(self):
        assert smoothstep_psi(0.1) == 1.0
        assert smoothstep_psi(0.5) == 1.0
        assert smoothstep_psi(2.0) == 0.0
        assert smoothstep_psi(7.0) == 0.0

    def test_midpoint(self):
        # geometric midpoint of [1/2, 2] is 1; the cubic hits 1/2 there
        assert smoothstep_psi(1.0) == pytest.approx(0.5)

    def test_monotone(self):
        rs = np.linspace(0.01, 4.0, 500)
        vals = smoothstep_psi(rs)
        assert np.all(np.diff(vals) <= 1e-15)

    def test_shapes(self):
        assert np.isscalar(smoothstep_psi(1.0)) or smoothstep_psi(1.0).ndim == 0
        assert smoothstep_psi([0.1, 1.0, 3.0]).shape == (3,)


class TestSquareFunction:
    def test_single_atom_bounds(self):
        # weights over annuli form a partition of unity, so the square sum
        # lies between (m |K|)^2 / 3 and (m |K|)^2
        atoms = single_atom(x=0.0, mass=1.0)
        for x in (0.37, 1.0, 2.13):
            full = x**-0.5
            got = square_function(atoms, [x], KernelSpec(s=0.5))
            assert full / math.sqrt(3) - 1e-12 <= got <= full + 1e-12

    def test_matches_default_psi(self, atoms_small):
        spec = KernelSpec(s=0.5)
        a = square_function(atoms_small, [0.4], spec)
        b = square_function(atoms_small, [0.4], spec, psi=smoothstep_psi)
        assert a == b

    def test_at_atom_excludes_self(self, atoms_small):
        got = square_function(atoms_small, atoms_small.points[0], KernelSpec(s=0.5))
        assert np.isfinite(got) and got > 0.0

    def test_empty_atoms(self, params_small):
        empty = AtomSet(
            params=params_small,
            refine_k=1,
            points=np.zeros((0, 1)),
            masses=np.zeros(0),
            leaf_rank=np.zeros(0, dtype=np.int64),
        )
        assert square_function(empty, [0.3], KernelSpec(s=0.5)) == 0.0

    @pytest.mark.parametrize(
        "bad_psi",
        [
            lambda r: np.zeros_like(np.asarray(r, dtype=float)),  # not 1 near 0
            lambda r: np.ones_like(np.asarray(r, dtype=float)),  # no decay
            lambda r: np.asarray(r, dtype=float) / 8.0,  # increasing
            lambda r: 2.0 * smoothstep_psi(r),  # out of [0, 1]
        ],
    )
    def test_rejects_bad_psi(self, atoms_small, bad_psi):
        with pytest.raises(ParameterError):
            square_function(atoms_small, [0.4], KernelSpec(s=0.5), psi=bad_psi)
