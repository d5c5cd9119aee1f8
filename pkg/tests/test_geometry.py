"""Geometry layer: parameters, cube addressing, density profiles."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cantor_riesz import (
    CantorParams,
    CubeId,
    DepthError,
    ParameterError,
    build_profile,
    containing_cube,
    cube_from_rank,
    cube_position,
    p_between,
)

ratios = st.lists(
    st.floats(min_value=0.05, max_value=0.49, allow_nan=False), min_size=1, max_size=12
)


class TestCantorParams:
    def test_defaults(self):
        p = CantorParams(d=1, s=0.5, lam=(0.25, 0.3))
        assert p.depth == 2
        assert p.branching == 2
        assert p.tau0 == 0.3  # defaults to max(lam)

    def test_counting(self):
        p = CantorParams(d=2, s=1.0, lam=(0.25,) * 3)
        assert p.branching == 4
        assert p.num_cubes(3) == 4**3
        assert p.cube_mass(3) == 0.25**3

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(d=0, s=0.5),
            dict(d=True, s=0.5),
            dict(d=1, s=0.0),
            dict(d=1, s=1.0),
            dict(d=1, s=0.5, lam=(0.6,)),
            dict(d=1, s=0.5, lam=(0.25,), tau0=0.5),
            dict(d=1, s=0.5, lam=(0.25,), tau0=0.2),
            dict(d=1, s=0.5, lam=(0.0,)),
        ],
    )
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(ParameterError):
            CantorParams(**kwargs)

    def test_s_up_to_dimension(self):
        # s may approach d but not reach it
        CantorParams(d=2, s=1.999, lam=(0.25,))
        with pytest.raises(ParameterError):
            CantorParams(d=2, s=2.0, lam=(0.25,))


class TestProfile:
    def test_unit_density_case(self, profile_small):
        # lam = 1/4 with d=1, s=1/2 makes every scale density exactly 1
        assert np.array_equal(profile_small.theta, np.ones(5))
        assert profile_small.depth == 4

    def test_side_lengths_multiply(self):
        lam = (0.25, 0.3, 0.2)
        prof = build_profile(CantorParams(d=1, s=0.5, lam=lam))
        assert prof.ell[0] == 1.0
        for j in range(1, 4):
            assert prof.ell[j] == pytest.approx(math.prod(lam[:j]), rel=1e-15)

    def test_density_formula(self, profile_mixed, params_mixed):
        d, s = params_mixed.d, params_mixed.s
        for n in range(profile_mixed.depth + 1):
            expect = 2.0 ** (-n * d) / profile_mixed.ell[n] ** s
            assert profile_mixed.theta[n] == pytest.approx(expect, rel=1e-15)

    @given(lam=ratios)
    def test_p_recursion(self, lam):
        """p satisfies p_{j+1} = lam_{j+1} p_j + theta_{j+1} exactly."""
        prof = build_profile(CantorParams(d=1, s=0.5, lam=tuple(lam)))
        for j in range(len(lam)):
            expect = lam[j] * prof.p[j] + prof.theta[j + 1]
            assert prof.p[j + 1] == pytest.approx(expect, rel=1e-12)

    @given(lam=ratios)
    def test_p_dominates_theta(self, lam):
        # the k=j term of the defining sum is theta_j itself
        prof = build_profile(CantorParams(d=2, s=1.3, lam=tuple(lam)))
        assert np.all(prof.p >= prof.theta)

    def test_sum_theta_sq_inclusive(self, profile_small):
        assert profile_small.sum_theta_sq(0, 4) == pytest.approx(5.0)
        assert profile_small.sum_theta_sq(1, 4) == pytest.approx(4.0)
        assert profile_small.sum_theta_sq(2, 2) == pytest.approx(1.0)
        assert profile_small.sum_theta_sq() == profile_small.sum_theta_sq(0, 4)

    def test_arrays_read_only(self, profile_small):
        with pytest.raises(ValueError):
            profile_small.theta[0] = 2.0

    def test_p_between_full_range_is_p(self, profile_mixed):
        for q in range(profile_mixed.depth + 1):
            assert p_between(profile_mixed, q, 0) == pytest.approx(
                profile_mixed.p[q], rel=1e-14
            )

    def test_p_between_single_term(self, profile_mixed):
        assert p_between(profile_mixed, 3, 3) == pytest.approx(
            profile_mixed.theta[3], rel=1e-15
        )

    def test_p_between_bad_range(self, profile_mixed):
        with pytest.raises(ParameterError):
            p_between(profile_mixed, 1, 2)
        with pytest.raises(ParameterError):
            p_between(profile_mixed, 9, 0)


class TestCubeAddressing:
    def test_parent_child(self):
        c = CubeId(2, (1, 0))
        assert c.child(3).path == (1, 0, 3)
        assert c.parent().path == (1,)
        with pytest.raises(DepthError):
            CubeId(0, ()).parent()

    def test_bad_ids(self):
        with pytest.raises(ParameterError):
            CubeId(2, (0,))
        with pytest.raises(ParameterError):
            CubeId(1, (-1,))
        with pytest.raises(ParameterError):
            CubeId(1, (4,)).flat_rank(d=2)

    @given(rank=st.integers(min_value=0, max_value=4**5 - 1))
    def test_rank_round_trip(self, rank):
        cube = cube_from_rank(rank, gen=5, d=2)
        assert cube.flat_rank(d=2) == rank

    def test_rank_out_of_range(self):
        with pytest.raises(ParameterError):
            cube_from_rank(16, gen=2, d=2)
        with pytest.raises(ParameterError):
            cube_from_rank(-1, gen=1, d=1)

    def test_positions_interval(self, params_small):
        corner, side = cube_position(params_small, CubeId(1, (1,)))
        assert corner[0] == pytest.approx(0.75)
        assert side == pytest.approx(0.25)
        corner, side = cube_position(params_small, CubeId(2, (1, 1)))
        assert corner[0] == pytest.approx(0.9375)
        assert side == pytest.approx(0.0625)

    def test_positions_plane(self, params_plane):
        # corner code bit k moves coordinate k to the high side
        corner, side = cube_position(params_plane, CubeId(1, (2,)))
        np.testing.assert_allclose(corner, [0.0, 0.75])
        assert side == pytest.approx(0.25)

    def test_position_depth_guard(self, params_small):
        with pytest.raises(DepthError):
            cube_position(params_small, CubeId(7, (0,) * 7))


class TestContainingCube:
    @given(rank=st.integers(min_value=0, max_value=2**3 - 1))
    def test_round_trip_through_center(self, rank):
        params = CantorParams(d=1, s=0.5, lam=(0.25, 0.3, 0.2))
        cube = cube_from_rank(rank, gen=3, d=1)
        corner, side = cube_position(params, cube)
        found = containing_cube(params, corner + 0.5 * side, 3)
        assert found == cube

    def test_round_trip_plane(self, params_plane):
        for rank in range(16):
            cube = cube_from_rank(rank, gen=2, d=2)
            corner, side = cube_position(params_plane, cube)
            assert containing_cube(params_plane, corner + 0.5 * side, 2) == cube

    def test_gap_point(self, params_small):
        assert containing_cube(params_small, [0.5], 1) is None

    def test_outside_unit_cube(self, params_small):
        assert containing_cube(params_small, [-0.1], 1) is None
        assert containing_cube(params_small, [1.1], 1) is None

    def test_generation_zero(self, params_small):
        assert containing_cube(params_small, [0.4], 0) == CubeId(0, ())

    def test_depth_guard(self, params_small):
        with pytest.raises(DepthError):
            containing_cube(params_small, [0.0], 9)

    def test_dimension_mismatch(self, params_plane):
        with pytest.raises(ParameterError):
            containing_cube(params_plane, [0.1], 1)
