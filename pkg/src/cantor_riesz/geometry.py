"""Corner Cantor sets: cube hierarchy, side lengths, densities, potentials.

The generation-n set consists of 2^(n*d) closed cubes of side
ell_n = lam_1 * ... * lam_n.  Each cube of generation n-1 spawns one child
in each of its 2^d corners, so a child is addressed by a corner code in
[0, 2^d) whose bit k selects the low or high corner along coordinate k.
The natural measure puts mass 2^(-n*d) on every generation-n cube; its
s-density at that scale is theta_n = 2^(-n*d) / ell_n^s, and the
ancestor-weighted potential of scale j is

    p_j = sum_{k=0..j} theta_k * ell_j / ell_k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DepthError, ParameterError

__all__ = [
    "CantorParams",
    "CubeId",
    "DensityProfile",
    "build_profile",
    "containing_cube",
    "cube_position",
    "p_between",
]


@dataclass(frozen=True)
class CantorParams:
    """Construction parameters for a depth-N corner Cantor set.

    d    ambient dimension (>= 1)
    s    kernel order, 0 < s < d
    lam  contraction ratios lam_1..lam_N, each in (0, tau0]
    tau0 uniform upper ratio bound, tau0 < 1/2 (defaults to max(lam))
    """

    d: int
    s: float
    lam: tuple[float, ...] = ()
    tau0: float | None = None

    def __post_init__(self):
        if not isinstance(self.d, int) or isinstance(self.d, bool) or self.d < 1:
            raise ParameterError(f"dimension d must be an integer >= 1, got {self.d!r}")
        if not (0.0 < float(self.s) < self.d):
            raise ParameterError(
                f"kernel order s must satisfy 0 < s < d, got s={self.s} with d={self.d}"
            )
        lam = tuple(float(v) for v in self.lam)
        object.__setattr__(self, "lam", lam)
        tau0 = float(self.tau0) if self.tau0 is not None else (max(lam) if lam else 0.499)
        object.__setattr__(self, "tau0", tau0)
        if not (0.0 < tau0 < 0.5):
            raise ParameterError(f"tau0 must lie in (0, 1/2), got {tau0}")
        for i, v in enumerate(lam, start=1):
            if not (0.0 < v <= tau0):
                raise ParameterError(
                    f"ratio lam_{i}={v} outside (0, tau0={tau0}]"
                )

    @property
    def depth(self) -> int:
        return len(self.lam)

    @property
    def branching(self) -> int:
        return 1 << self.d

    def num_cubes(self, gen: int) -> int:
        return 1 << (self.d * gen)

    def cube_mass(self, gen: int) -> float:
        return 2.0 ** (-gen * self.d)


@dataclass(frozen=True)
class CubeId:
    """Address of a generation-`gen` cube: corner codes from the root down."""

    gen: int
    path: tuple[int, ...]

    def __post_init__(self):
        path = tuple(int(c) for c in self.path)
        object.__setattr__(self, "path", path)
        if self.gen != len(path):
            raise ParameterError(
                f"cube generation {self.gen} does not match path length {len(path)}"
            )
        if any(c < 0 for c in path):
            raise ParameterError(f"negative corner code in path {path}")

    def parent(self) -> "CubeId":
        if self.gen == 0:
            raise DepthError("the root cube has no parent")
        return CubeId(self.gen - 1, self.path[:-1])

    def child(self, code: int) -> "CubeId":
        return CubeId(self.gen + 1, self.path + (int(code),))

    def flat_rank(self, d: int) -> int:
        """Path-lexicographic rank among generation-`gen` cubes."""
        r = 0
        for c in self.path:
            if c >> d:
                raise ParameterError(f"corner code {c} out of range for d={d}")
            r = (r << d) | c
        return r


def cube_from_rank(rank: int, gen: int, d: int) -> CubeId:
    """Inverse of CubeId.flat_rank."""
    if rank < 0 or rank >= 1 << (d * gen):
        raise ParameterError(f"rank {rank} out of range for generation {gen}")
    mask = (1 << d) - 1
    digits = []
    for _ in range(gen):
        digits.append(rank & mask)
        rank >>= d
    return CubeId(gen, tuple(reversed(digits)))


@dataclass(frozen=True)
class DensityProfile:
    """Side lengths, densities, and potentials for generations 0..N."""

    ell: np.ndarray
    theta: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        for name in ("ell", "theta", "p"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not (self.ell.shape == self.theta.shape == self.p.shape):
            raise ParameterError("profile arrays must share one shape")

    @property
    def depth(self) -> int:
        return len(self.ell) - 1

    def sum_theta_sq(self, lo: int = 0, hi: int | None = None) -> float:
        """sum of theta_n^2 over lo <= n <= hi (hi defaults to N)."""
        hi = self.depth if hi is None else hi
        return math.fsum(float(t) ** 2 for t in self.theta[lo : hi + 1])


def build_profile(params: CantorParams) -> DensityProfile:
    """Compute (ell_n, theta_n, p_n) for n = 0..N by direct summation."""
    n = params.depth
    ell = np.empty(n + 1)
    ell[0] = 1.0
    for i, lam in enumerate(params.lam, start=1):
        ell[i] = ell[i - 1] * lam
    gens = np.arange(n + 1)
    theta = 2.0 ** (-gens * params.d) / ell**params.s
    p = np.array(
        [
            math.fsum(theta[k] * ell[j] / ell[k] for k in range(j + 1))
            for j in range(n + 1)
        ]
    )
    return DensityProfile(ell=ell, theta=theta, p=p)


def p_between(profile: DensityProfile, q: int, r: int) -> float:
    """Partial potential sum_{k=r..q} theta_k * ell_q / ell_k, for r <= q."""
    n = profile.depth
    if not (0 <= r <= q <= n):
        raise ParameterError(
            f"p_between needs 0 <= r <= q <= N, got q={q}, r={r}, N={n}"
        )
    ell, theta = profile.ell, profile.theta
    return math.fsum(theta[k] * ell[q] / ell[k] for k in range(r, q + 1))


def cube_position(params: CantorParams, cube: CubeId) -> tuple[np.ndarray, float]:
    """Lower-left corner and side length of a cube, or raise DepthError."""
    if cube.gen > params.depth:
        raise DepthError(
            f"cube generation {cube.gen} exceeds construction depth {params.depth}"
        )
    d = params.d
    ell_prev = 1.0
    corner = np.zeros(d)
    for i, code in enumerate(cube.path, start=1):
        if code >> d:
            raise ParameterError(f"corner code {code} out of range for d={d}")
        side = ell_prev * params.lam[i - 1]
        step = ell_prev - side
        for k in range(d):
            if (code >> k) & 1:
                corner[k] += step
        ell_prev = side
    return corner, ell_prev


def containing_cube(params: CantorParams, x, n: int) -> CubeId | None:
    """Generation-n cube whose closed region contains x, or None.

    Points on a shared face resolve to the lexicographically smallest path.
    """
    if n > params.depth:
        raise DepthError(
            f"generation {n} exceeds construction depth {params.depth}"
        )
    d = params.d
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != d:
        raise ParameterError(f"point has {x.shape[0]} coordinates, expected {d}")
    corner = np.zeros(d)
    ell_prev = 1.0
    if np.any(x < 0.0) or np.any(x > 1.0):
        return None
    path = []
    for i in range(1, n + 1):
        side = ell_prev * params.lam[i - 1]
        step = ell_prev - side
        code = 0
        for k in range(d):
            lo = corner[k]
            if lo <= x[k] <= lo + side:
                continue  # low corner, bit stays 0
            if lo + step <= x[k] <= lo + ell_prev:
                code |= 1 << k
                corner[k] = lo + step
            else:
                return None
        path.append(code)
        ell_prev = side
    return CubeId(n, tuple(path))
