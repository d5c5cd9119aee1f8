"""Truncated s-Riesz transforms of atomic measures.

The vector kernel is K(x) = x / |x|^(s+1), so |K(x)| = |x|^(-s) and
K(-x) = -K(x).  The eps-truncated transform at a target t sums
m_a * K(p_a - t) over atoms with |p_a - t| > eps (strict).  Sums are
accumulated by a balanced adjacent-pair cascade in atom-index order, which
makes every result deterministic for a fixed atom ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SingularityError
from .quadrature import AtomSet

__all__ = [
    "KernelSpec",
    "VecField",
    "eval_brute",
    "kernel",
    "l2_norm_sq",
    "pairwise_sum",
    "smoothstep_psi",
    "square_function",
]

_CHUNK_ELEMS = 2_000_000


@dataclass(frozen=True)
class KernelSpec:
    """Kernel order s and truncation radius eps (eps = 0: only exact hits drop)."""

    s: float
    eps: float = 0.0

    def __post_init__(self):
        if not self.s > 0.0:
            raise ParameterError(f"kernel order s must be positive, got {self.s}")
        if self.eps < 0.0:
            raise ParameterError(f"truncation eps must be >= 0, got {self.eps}")


@dataclass(frozen=True)
class VecField:
    """Vector field values, one d-vector per target."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ParameterError("field values must be a (targets, d) array")
        if not np.all(np.isfinite(values)):
            raise ParameterError("field values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def magnitudes(self) -> np.ndarray:
        return np.sqrt((self.values**2).sum(axis=1))


def pairwise_sum(a: np.ndarray, axis: int = 0) -> np.ndarray:
    """Balanced adjacent-pair reduction along `axis`.

    Pairs (0,1), (2,3), ... are combined per round; an odd tail element
    passes through to the next round.  Deterministic for a fixed row order.
    """
    a = np.moveaxis(np.asarray(a, dtype=float), axis, 0)
    n = a.shape[0]
    if n == 0:
        return np.zeros(a.shape[1:], dtype=float)
    while n > 1:
        m = n // 2
        paired = a[0 : 2 * m : 2] + a[1 : 2 * m : 2]
        if n % 2:
            a = np.concatenate([paired, a[2 * m :]], axis=0)
        else:
            a = paired
        n = a.shape[0]
    return a[0]


def kernel(x, s: float) -> np.ndarray:
    """K(x) = x / |x|^(s+1); raises SingularityError at x = 0."""
    x = np.asarray(x, dtype=float).reshape(-1)
    nrm = float(np.sqrt((x**2).sum()))
    if nrm == 0.0:
        raise SingularityError("kernel evaluated at zero separation")
    return x / nrm ** (s + 1.0)


def _as_targets(targets, d: int) -> np.ndarray:
    arr = np.asarray(targets, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if d == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise ParameterError(f"targets must be a (m, {d}) array")
    return arr


def _check_order(spec: KernelSpec, d: int) -> None:
    if not (0.0 < spec.s < d):
        raise ParameterError(
            f"kernel order s must satisfy 0 < s < d, got s={spec.s} with d={d}"
        )


def _chunk_terms(
    points: np.ndarray,
    masses: np.ndarray,
    tgt: np.ndarray,
    spec: KernelSpec,
    self_base: int | None,
    t_offset: int = 0,
) -> np.ndarray:
    """Kernel terms (chunk, n_atoms, d), zero where truncated or self-paired."""
    diffs = points[None, :, :] - tgt[:, None, :]
    nrm = np.sqrt((diffs**2).sum(axis=2))
    include = nrm > spec.eps
    c = tgt.shape[0]
    rows = np.arange(c)
    if self_base is not None:
        include[rows, self_base + rows] = False
    if spec.eps == 0.0:
        hits = nrm == 0.0
        if self_base is not None:
            hits[rows, self_base + rows] = False
        if hits.any():
            ti, ai = np.argwhere(hits)[0]
            raise SingularityError(
                f"atom {int(ai)} coincides with target {int(ti) + t_offset} "
                "and eps = 0; exclude it or truncate"
            )
    safe = np.where(include, nrm, 1.0)
    w = np.where(include, masses[None, :] / safe ** (spec.s + 1.0), 0.0)
    return diffs * w[:, :, None]


def eval_brute(
    atoms: AtomSet,
    targets,
    spec: KernelSpec,
    self_exclude: bool = False,
) -> VecField:
    """Direct O(targets x atoms) evaluation of the truncated transform.

    With self_exclude set, targets must be the atom positions in atom order;
    the atom sharing a target's index is skipped.
    """
    d = atoms.d
    _check_order(spec, d)
    tgts = _as_targets(targets, d)
    n_t = tgts.shape[0]
    if self_exclude and n_t != atoms.n:
        raise ParameterError(
            "self_exclude requires one target per atom in atom order"
        )
    out = np.empty((n_t, d))
    chunk = max(1, _CHUNK_ELEMS // max(atoms.n, 1))
    for t0 in range(0, n_t, chunk):
        t1 = min(t0 + chunk, n_t)
        terms = _chunk_terms(
            atoms.points,
            atoms.masses,
            tgts[t0:t1],
            spec,
            t0 if self_exclude else None,
            t_offset=t0,
        )
        out[t0:t1] = pairwise_sum(terms, axis=1)
    return VecField(out)


def l2_norm_sq(field: VecField, atoms: AtomSet) -> float:
    """||field||^2 in L2(mu): sum of m_a |field_a|^2."""
    if field.n != atoms.n:
        raise ParameterError("field and atom set sizes differ")
    contrib = atoms.masses * (field.values**2).sum(axis=1)
    return float(pairwise_sum(contrib))


def smoothstep_psi(r) -> np.ndarray:
    """Radial bump: 1 on [0, 1/2], 0 on [2, inf), cubic in log2(r) between."""
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    out = np.ones_like(r)
    out[r >= 2.0] = 0.0
    mid = (r > 0.5) & (r < 2.0)
    u = (np.log2(r[mid]) + 1.0) / 2.0
    out[mid] = 1.0 - (3.0 * u**2 - 2.0 * u**3)
    return out[0] if scalar else out


def _validate_psi(psi) -> None:
    rs = np.concatenate(
        [
            np.linspace(1e-9, 0.5, 64),
            np.linspace(0.5, 2.0, 257),
            np.linspace(2.0, 8.0, 64),
        ]
    )
    vals = np.asarray(psi(rs), dtype=float)
    tol = 1e-12
    if vals.shape != rs.shape or not np.all(np.isfinite(vals)):
        raise ParameterError("psi must map radii to finite values elementwise")
    if np.any(vals > 1.0 + tol) or np.any(vals < -tol):
        raise ParameterError("psi must take values in [0, 1]")
    if np.any(vals[rs <= 0.5] < 1.0 - tol):
        raise ParameterError("psi must equal 1 on [0, 1/2]")
    if np.any(vals[rs >= 2.0] > tol):
        raise ParameterError("psi must vanish on [2, inf)")
    if np.any(np.diff(vals) > tol):
        raise ParameterError("psi must be nonincreasing")


def square_function(atoms: AtomSet, x, spec: KernelSpec, psi=None) -> float:
    """Littlewood-Paley square function of the transform at a point.

    The kernel is split over dyadic annuli by phi_j(y) = psi(2^j y) -
    psi(2^(j+1) y); the return value is sqrt(sum_j |R_j(x)|^2) where R_j uses
    the kernel piece phi_j(x - y) K(x - y).
    """
    d = atoms.d
    _check_order(spec, d)
    if psi is None:
        psi = smoothstep_psi
    else:
        _validate_psi(psi)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != d:
        raise ParameterError(f"point has {x.shape[0]} coordinates, expected {d}")
    if atoms.n == 0:
        return 0.0
    diffs = x[None, :] - atoms.points
    dist = np.sqrt((diffs**2).sum(axis=1))
    pos = dist > 0.0
    if not pos.any():
        return 0.0
    dmin, dmax = float(dist[pos].min()), float(dist[pos].max())
    j_lo = int(np.floor(-np.log2(dmax))) - 2
    j_hi = int(np.ceil(-np.log2(dmin))) + 2
    safe = np.where(pos, dist, 1.0)
    base = np.where(pos, atoms.masses / safe ** (spec.s + 1.0), 0.0)
    total = 0.0
    for j in range(j_lo, j_hi + 1):
        w = psi(np.ldexp(dist, j)) - psi(np.ldexp(dist, j + 1))
        w = np.where(pos, w, 0.0)
        if not np.any(w > 0.0):
            continue
        r_j = pairwise_sum(diffs * (base * w)[:, None], axis=0)
        total += float((r_j**2).sum())
    return float(np.sqrt(total))
