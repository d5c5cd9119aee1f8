"""Atomic quadrature for the natural measure and exact ball masses.

atomize() replaces each generation-N leaf cube by refine_k^d equal-mass
point atoms on a uniform sub-grid, ordered leaf-by-leaf (path-lexicographic)
and row-major inside a leaf.  ball_mass() computes mu(closed ball) by tree
descent, summing cubes fully inside and resolving straddling leaves with
recursive dyadic subdivision of the Lebesgue density.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, ParameterError
from .geometry import CantorParams, CubeId, cube_from_rank

__all__ = ["AtomSet", "atomize", "ball_mass", "DEFAULT_ATOM_BUDGET"]

DEFAULT_ATOM_BUDGET = 4_000_000


@dataclass(frozen=True)
class AtomSet:
    """Equal-mass atoms approximating the depth-N measure."""

    params: CantorParams
    refine_k: int
    points: np.ndarray  # (n, d)
    masses: np.ndarray  # (n,)
    leaf_rank: np.ndarray  # (n,) path-lex rank of the containing leaf

    def __post_init__(self):
        for name in ("points", "masses", "leaf_rank"):
            getattr(self, name).flags.writeable = False

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def atoms_per_leaf(self) -> int:
        return self.refine_k**self.params.d

    def leaf_of(self, i: int) -> CubeId:
        """Leaf cube containing atom i."""
        return cube_from_rank(int(self.leaf_rank[i]), self.params.depth, self.params.d)

    def to_csv(self, path) -> None:
        d = self.d
        header = ",".join([f"x{k}" for k in range(d)] + ["mass", "leaf_path"])
        lines = [header]
        n_gen = self.params.depth
        m = self.params.d
        for i in range(self.n):
            rank = int(self.leaf_rank[i])
            digits = []
            for _ in range(n_gen):
                digits.append(rank & ((1 << m) - 1))
                rank >>= m
            leaf = "-".join(str(c) for c in reversed(digits))
            cells = [format(v, ".17g") for v in self.points[i]]
            cells.append(format(self.masses[i], ".17g"))
            cells.append(leaf)
            lines.append(",".join(cells))
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


def _leaf_corners(params: CantorParams) -> np.ndarray:
    """Corners of all generation-N cubes in path-lexicographic order."""
    d = params.d
    corners = np.zeros((1, d))
    ell_prev = 1.0
    codes = np.arange(1 << d)
    bits = ((codes[:, None] >> np.arange(d)[None, :]) & 1).astype(float)
    for lam in params.lam:
        side = ell_prev * lam
        offsets = bits * (ell_prev - side)
        corners = (corners[:, None, :] + offsets[None, :, :]).reshape(-1, d)
        ell_prev = side
    return corners


def atomize(
    params: CantorParams, refine_k: int, budget: int = DEFAULT_ATOM_BUDGET
) -> AtomSet:
    """Place refine_k^d equal-mass atoms at sub-grid centers of every leaf."""
    if not isinstance(refine_k, int) or refine_k < 1:
        raise ParameterError(f"refine_k must be an integer >= 1, got {refine_k!r}")
    d, n_gen = params.d, params.depth
    n_leaves = 1 << (d * n_gen)
    n_atoms = n_leaves * refine_k**d
    if n_atoms > budget:
        raise BudgetError(
            f"atomize would create {n_atoms} atoms, exceeding budget {budget}"
        )
    corners = _leaf_corners(params)
    side = 1.0
    for lam in params.lam:
        side *= lam
    grids = np.meshgrid(*([np.arange(refine_k)] * d), indexing="ij")
    sub_idx = np.stack(grids, axis=-1).reshape(-1, d)  # row-major, last axis fastest
    sub_off = (sub_idx + 0.5) * (side / refine_k)
    points = (corners[:, None, :] + sub_off[None, :, :]).reshape(n_atoms, d)
    mass = 2.0 ** (-n_gen * d) / refine_k**d
    masses = np.full(n_atoms, mass)
    leaf_rank = np.repeat(np.arange(n_leaves, dtype=np.int64), refine_k**d)
    return AtomSet(
        params=params,
        refine_k=refine_k,
        points=points,
        masses=masses,
        leaf_rank=leaf_rank,
    )


def _box_near_far_sq(corners: np.ndarray, side: float, x: np.ndarray):
    """Squared nearest/farthest distance from x to each closed box."""
    lo_gap = corners - x[None, :]
    hi_gap = x[None, :] - corners - side
    near = np.maximum(np.maximum(lo_gap, hi_gap), 0.0)
    far = np.maximum(x[None, :] - corners, corners + side - x[None, :])
    return (near**2).sum(axis=1), (far**2).sum(axis=1)


def _ball_interval_length(corners: np.ndarray, side: float, x: np.ndarray, r: float) -> float:
    """Total length of [x-r, x+r] clipped to each interval (d = 1)."""
    lo = np.maximum(corners[:, 0], x[0] - r)
    hi = np.minimum(corners[:, 0] + side, x[0] + r)
    return float(np.maximum(hi - lo, 0.0).sum())


def _disc_rect_area(corners: np.ndarray, side: float, x: np.ndarray, r: float) -> float:
    """Exact area of disc(x, r) intersected with each box, summed (d = 2).

    Uses the oriented corner primitive A(a, b) = integral over [0,a]x[0,b]
    of the disc indicator (disc centered at the origin); the box area is the
    alternating sum of A at its four corners.
    """
    x0 = corners[:, 0] - x[0]
    y0 = corners[:, 1] - x[1]
    x1 = x0 + side
    y1 = y0 + side
    r2 = r * r

    def antider(t):
        # integral of sqrt(r^2 - v^2) dv from 0 to t, for t in [0, r]
        t = np.minimum(t, r)
        return 0.5 * (
            t * np.sqrt(np.maximum(r2 - t * t, 0.0))
            + r2 * np.arcsin(np.clip(t / r, -1.0, 1.0))
        )

    def corner(a, b):
        sgn = np.sign(a) * np.sign(b)
        aa = np.minimum(np.abs(a), r)
        bb = np.minimum(np.abs(b), r)
        # x-extent of the disc shrinks past v* = sqrt(r^2 - aa^2)
        vstar = np.sqrt(np.maximum(r2 - aa * aa, 0.0))
        full = aa * bb  # corner rectangle entirely inside the disc
        part = aa * vstar + antider(bb) - antider(vstar)
        return sgn * np.where(bb <= vstar, full, part)

    area = corner(x1, y1) - corner(x0, y1) - corner(x1, y0) + corner(x0, y0)
    return float(np.maximum(area, 0.0).sum())


def _ball_box_volume(
    corners: np.ndarray,
    side: float,
    x: np.ndarray,
    r: float,
    tol: float,
    depth_cap: int,
) -> float:
    """Lebesgue volume of ball(x, r) intersected with the given boxes.

    Closed forms in one and two dimensions; higher dimensions fall back to
    recursive dyadic subdivision with a midpoint estimate for the cells the
    sphere still straddles at depth_cap.
    """
    d = x.shape[0]
    if d == 1:
        return _ball_interval_length(corners, side, x, r)
    if d == 2:
        return _disc_rect_area(corners, side, x, r)
    r2 = r * r
    codes = np.arange(1 << d)
    bits = ((codes[:, None] >> np.arange(d)[None, :]) & 1).astype(float)
    vol = 0.0
    v0 = max(corners.shape[0] * side**d, np.finfo(float).tiny)
    boxes = corners
    for _ in range(depth_cap):
        if boxes.shape[0] == 0:
            return vol
        near2, far2 = _box_near_far_sq(boxes, side, x)
        inside = far2 <= r2
        straddle = ~inside & (near2 <= r2)
        vol += float(inside.sum()) * side**d
        boxes = boxes[straddle]
        uncertain = boxes.shape[0] * side**d
        if uncertain <= tol * v0:
            return vol + 0.5 * uncertain
        half = side / 2.0
        boxes = (boxes[:, None, :] + (bits * half)[None, :, :]).reshape(-1, d)
        side = half
    near2, far2 = _box_near_far_sq(boxes, side, x)
    live = near2 <= r2
    return vol + 0.5 * float(live.sum()) * side**d


def ball_mass(
    params: CantorParams,
    x,
    r: float,
    *,
    tol_ball: float = 1e-6,
    depth_cap: int = 40,
) -> float:
    """mu(closed ball B(x, r)) for the depth-N measure."""
    if not r > 0.0:
        raise ParameterError(f"ball radius must be positive, got {r}")
    d, n_gen = params.d, params.depth
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != d:
        raise ParameterError(f"point has {x.shape[0]} coordinates, expected {d}")
    r2 = r * r
    codes = np.arange(1 << d)
    bits = ((codes[:, None] >> np.arange(d)[None, :]) & 1).astype(float)
    mass = 0.0
    boxes = np.zeros((1, d))
    ell_prev = 1.0
    for g in range(n_gen + 1):
        side = ell_prev
        near2, far2 = _box_near_far_sq(boxes, side, x)
        inside = far2 <= r2
        straddle = ~inside & (near2 <= r2)
        mass += float(inside.sum()) * 2.0 ** (-g * d)
        boxes = boxes[straddle]
        if boxes.shape[0] == 0:
            return mass
        if g == n_gen:
            break
        child = ell_prev * params.lam[g]
        offsets = bits * (ell_prev - child)
        boxes = (boxes[:, None, :] + offsets[None, :, :]).reshape(-1, d)
        ell_prev = child
    leaf_side = ell_prev
    density = 2.0 ** (-n_gen * d) / leaf_side**d
    vol = _ball_box_volume(boxes, leaf_side, x, r, tol_ball, depth_cap)
    return mass + density * vol
