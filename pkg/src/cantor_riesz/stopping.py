"""Stopping-scale combinatorics on density sequences.

Given the per-generation densities theta_j of a corner Cantor set, the scale
axis [0, N] is cut at indices where the density first leaves the band
[theta/B, B*theta] around the density at the previous cut.  The resulting
intervals are typed by which band edge fired (increasing / decreasing /
terminal), labeled good/bad and long/short, and paired into larger blocks
whose internal structure drives the lower bound for the transform norm.

Everything here is exact integer/float combinatorics — no quadrature — so the
inequalities with explicit constants are asserted outright, while the ones
with existential constants are only measured and reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ParameterError
from .martingale import decompose, project

__all__ = [
    "KIND_DD",
    "KIND_ID",
    "KIND_TERMINAL",
    "Classification",
    "IntervalRecord",
    "JIntervalRecord",
    "LemmaCheck",
    "LemmaReport",
    "StopConfig",
    "StopSet",
    "classify",
    "compute_stops",
    "sigma",
    "verify_sequence_lemmas",
    "verify_transform_lemmas",
]

KIND_ID = "ID"          # right endpoint fired the upper band edge
KIND_DD = "DD"          # right endpoint fired the lower band edge
KIND_TERMINAL = "terminal"  # right endpoint is the final scale N

#: relative slack for hard inequalities whose two sides are float sums
_REL_SLACK = 1e-12


@dataclass(frozen=True)
class StopConfig:
    """Knobs of the stopping construction.

    B is the density band ratio, N_L the long-interval threshold, and C10 the
    standardness constant.  good_factor / good_fraction are structural
    constants of the good-scale machinery and are deliberately not
    configurable: the verification constants quoted in reports are only valid
    for these values.
    """

    B: float = 1000.0
    N_L: int = 100
    C10: float = 0.05
    good_factor: float = field(default=40.0, init=False)
    good_fraction: float = field(default=0.1, init=False)

    def __post_init__(self):
        if not (isinstance(self.B, (int, float)) and self.B > 100):
            raise ConfigError(f"band ratio B must exceed 100, got {self.B!r}")
        if not (isinstance(self.N_L, int) and self.N_L >= 1):
            raise ConfigError(f"N_L must be an integer >= 1, got {self.N_L!r}")
        if not (isinstance(self.C10, (int, float)) and self.C10 > 0):
            raise ConfigError(f"C10 must be positive, got {self.C10!r}")


@dataclass(frozen=True)
class StopSet:
    """Increasing cut indices s_0 = 0 < ... < s_m = n plus interval kinds."""

    s: tuple[int, ...]
    kinds: tuple[str, ...]
    n: int

    def __post_init__(self):
        s = self.s
        if not s or s[0] != 0 or s[-1] != self.n:
            raise ParameterError(f"stop sequence must run from 0 to {self.n}: {s}")
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ParameterError(f"stop sequence must be strictly increasing: {s}")
        if len(self.kinds) != len(s) - 1:
            raise ParameterError("need one interval kind per consecutive stop pair")
        for i, kind in enumerate(self.kinds):
            terminal = kind == KIND_TERMINAL
            if terminal != (i == len(self.kinds) - 1) or kind not in (
                KIND_ID,
                KIND_DD,
                KIND_TERMINAL,
            ):
                raise ParameterError(
                    f"interval {i} has kind {kind!r}; exactly the last must be terminal"
                )

    @property
    def num_intervals(self) -> int:
        return len(self.s) - 1

    def intervals(self) -> tuple[tuple[int, int], ...]:
        """Half-open index ranges [s_k, s_{k+1})."""
        return tuple(zip(self.s, self.s[1:]))


def _density_array(theta) -> np.ndarray:
    th = np.asarray(theta, dtype=float).ravel()
    if th.size == 0:
        raise ParameterError("density sequence is empty")
    if not np.all(np.isfinite(th)) or not np.all(th > 0):
        raise ParameterError("density values must be positive and finite")
    return th


def compute_stops(theta, config: StopConfig, n: int | None = None) -> StopSet:
    """Cut [0, n] where the density leaves the B-band of the last cut.

    The next cut after s_k is the least i > s_k with (in order of precedence)
    i == n, theta_i > B*theta_{s_k}, or theta_i < theta_{s_k}/B; the winning
    condition types the interval [s_k, s_{k+1}).  theta must supply indices
    0..n-1; by default n = len(theta) - 1, so the final value theta_n is
    present but — by the precedence of i == n — never read.
    """
    th = _density_array(theta)
    if n is None:
        n = th.size - 1
    n = int(n)
    if n < 0 or n > th.size:
        raise ParameterError(
            f"depth n={n} incompatible with {th.size} density values"
        )
    cuts = [0]
    kinds: list[str] = []
    while cuts[-1] < n:
        base = th[cuts[-1]]
        hi = config.B * base
        lo = base / config.B
        i = cuts[-1] + 1
        kind = KIND_TERMINAL
        while i < n:
            if th[i] > hi:
                kind = KIND_ID
                break
            if th[i] < lo:
                kind = KIND_DD
                break
            i += 1
        cuts.append(i)
        kinds.append(kind)
    return StopSet(s=tuple(cuts), kinds=tuple(kinds), n=n)


def sigma(theta, indices) -> float:
    """Sum of squared densities over an index set."""
    th = np.asarray(theta, dtype=float).ravel()
    idx = sorted({int(j) for j in indices})
    if idx and (idx[0] < 0 or idx[-1] >= th.size):
        raise ParameterError(
            f"index set spans [{idx[0]}, {idx[-1]}], density has {th.size} entries"
        )
    return math.fsum(th[j] ** 2 for j in idx)


@dataclass(frozen=True)
class IntervalRecord:
    k: int
    lo: int
    hi: int
    kind: str
    good: bool
    long: bool
    sigma: float

    @property
    def length(self) -> int:
        return self.hi - self.lo

    def to_json(self) -> dict:
        # numpy scalars sneak in from array comparisons; json refuses them
        return {
            "k": int(self.k),
            "lo": int(self.lo),
            "hi": int(self.hi),
            "kind": self.kind,
            "good": bool(self.good),
            "long": bool(self.long),
            "sigma": float(self.sigma),
        }


@dataclass(frozen=True)
class JIntervalRecord:
    h: int
    members: tuple[int, ...]
    lo: int
    hi: int
    t_h: int
    theta_max: float
    standard: bool

    def to_json(self) -> dict:
        return {
            "h": int(self.h),
            "members": [int(k) for k in self.members],
            "t_h": int(self.t_h),
            "theta_max": float(self.theta_max),
            "standard": bool(self.standard),
        }


@dataclass(frozen=True)
class Classification:
    """Full labeling of one density sequence; iterates as (good, intervals, j_intervals)."""

    good: frozenset
    intervals: tuple[IntervalRecord, ...]
    j_intervals: tuple[JIntervalRecord, ...]
    stops: StopSet
    config: StopConfig

    def __iter__(self):
        return iter((self.good, self.intervals, self.j_intervals))

    def to_json(self) -> dict:
        return {
            "n": int(self.stops.n),
            "stops": [int(v) for v in self.stops.s],
            "intervals": [rec.to_json() for rec in self.intervals],
            "j_intervals": [rec.to_json() for rec in self.j_intervals],
        }


def _run_pattern_ok(kinds: list[str]) -> bool:
    # A maximal run of intervals not absorbed into any paired block must be
    # a stretch of DD followed by a stretch of ID; the terminal interval may
    # only close the run directly after the DD stretch (an ID immediately
    # before a DD/terminal would have been paired).
    seen_id = False
    for i, kind in enumerate(kinds):
        if kind == KIND_DD and seen_id:
            return False
        if kind == KIND_ID:
            seen_id = True
        if kind == KIND_TERMINAL and (seen_id or i != len(kinds) - 1):
            return False
    return True


def classify(theta, p, ell, config: StopConfig, n: int | None = None) -> Classification:
    """Label intervals (kind/good/long), pair them into blocks, test standardness.

    theta, p, ell must each cover indices 0..n-1 (n defaults to
    len(theta) - 1).  Good scales are those with p_j <= good_factor*theta_j;
    an interval is good when its good scales carry at least good_fraction of
    its squared-density mass, long when it has at least N_L scales.

    A paired block joins a consecutive (ID, DD-or-terminal) interval pair; a
    leading DD interval forms block 0 on its own.  Within a block, t_h is the
    first scale whose density exceeds theta_max/sqrt(B), and the block is
    standard when (ell[t_h]/ell[t_h-1]) * p[t_h-1] <= C10 * theta_max (block 0
    is standard by convention, and t_h == 0 makes the left side 0).
    """
    th = _density_array(theta)
    pr = np.asarray(p, dtype=float).ravel()
    el = np.asarray(ell, dtype=float).ravel()
    stops = compute_stops(th, config, n=n)
    n_eff = stops.n
    if pr.size < n_eff or el.size < n_eff:
        raise ParameterError(
            f"p ({pr.size}) and ell ({el.size}) must cover indices 0..{n_eff - 1}"
        )
    if n_eff and not (np.all(el[:n_eff] > 0) and np.all(np.isfinite(pr[:n_eff]))):
        raise ParameterError("ell must be positive and p finite on 0..n-1")

    good = frozenset(
        j for j in range(n_eff) if pr[j] <= config.good_factor * th[j]
    )
    intervals = []
    for k, (lo, hi) in enumerate(stops.intervals()):
        sig = sigma(th, range(lo, hi))
        sig_good = math.fsum(th[j] ** 2 for j in range(lo, hi) if j in good)
        intervals.append(
            IntervalRecord(
                k=k,
                lo=lo,
                hi=hi,
                kind=stops.kinds[k],
                good=sig_good >= config.good_fraction * sig,
                long=hi - lo >= config.N_L,
                sigma=sig,
            )
        )

    def make_block(h: int, members: tuple[int, ...]) -> JIntervalRecord:
        lo = intervals[members[0]].lo
        hi = intervals[members[-1]].hi
        theta_max = float(th[lo:hi].max())
        threshold = theta_max / math.sqrt(config.B)
        t_h = next(j for j in range(lo, hi) if th[j] > threshold)
        if h == 0:
            standard = True
        else:
            lhs = 0.0 if t_h == 0 else (el[t_h] / el[t_h - 1]) * pr[t_h - 1]
            standard = lhs <= config.C10 * theta_max
        return JIntervalRecord(
            h=h,
            members=members,
            lo=lo,
            hi=hi,
            t_h=t_h,
            theta_max=theta_max,
            standard=standard,
        )

    j_intervals = []
    if intervals and intervals[0].kind == KIND_DD:
        j_intervals.append(make_block(0, (0,)))
    next_h = 1
    k = 0
    while k + 1 < len(intervals):
        if intervals[k].kind == KIND_ID and intervals[k + 1].kind in (
            KIND_DD,
            KIND_TERMINAL,
        ):
            j_intervals.append(make_block(next_h, (k, k + 1)))
            next_h += 1
            k += 2
        else:
            k += 1

    absorbed = {m for rec in j_intervals for m in rec.members}
    run: list[str] = []
    for rec in intervals:
        if rec.k in absorbed:
            if run and not _run_pattern_ok(run):
                raise AssertionError(
                    f"interval run {run} violates the DD-then-ID structure"
                )
            run = []
        else:
            run.append(rec.kind)
    if run and not _run_pattern_ok(run):
        raise AssertionError(f"interval run {run} violates the DD-then-ID structure")

    return Classification(
        good=good,
        intervals=tuple(intervals),
        j_intervals=tuple(j_intervals),
        stops=stops,
        config=config,
    )


@dataclass(frozen=True)
class LemmaCheck:
    """One verified or measured inequality: lhs <= constant * rhs."""

    name: str
    lhs: float
    rhs: float
    constant: float | None
    hard: bool
    passed: bool | None
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant,
        }
        if self.hard:
            out["pass"] = bool(self.passed)
        else:
            out["measured"] = True
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class LemmaReport:
    checks: tuple[LemmaCheck, ...]

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)

    def __getitem__(self, name: str) -> LemmaCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    @property
    def hard_pass(self) -> bool:
        return all(c.passed for c in self.checks if c.hard)

    def failures(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks if c.hard and not c.passed)

    def to_json(self) -> list:
        return [c.to_json() for c in self.checks]


def verify_sequence_lemmas(
    theta, p, ell, config: StopConfig, n: int | None = None
) -> LemmaReport:
    """Check the sequence-level inequalities of the stopping machinery.

    Hard checks (pass/fail, explicit constants):
      eqpjtj           sum_{j<=M} p_j^2 <= 4 * sum_{j<=M} theta_j^2, all M
      lembons0         sigma(bad scales) <= sigma([0, n)) / 10
      lemgoodint       sigma([0, n)) <= (9/8) * sum over good intervals
      lemj0            first good scale sits in the left B^4/(1+B^4) part
      interior_bracket densities between cuts stay inside [theta/B, B*theta]

    Measured checks (constant reported, never asserted):
      lemamax11        short-interval mass between consecutive paired blocks
                       against the two flanking peak densities
      lemjh            total short-interval mass against all peak densities
    """
    cls = classify(theta, p, ell, config, n=n)
    th = _density_array(theta)
    pr = np.asarray(p, dtype=float).ravel()
    n_eff = cls.stops.n
    checks: list[LemmaCheck] = []

    # cumulative-sum inequality between p and theta
    m_max = min(n_eff, th.size - 1, pr.size - 1)
    cum_p = np.cumsum(pr[: m_max + 1] ** 2)
    cum_t = np.cumsum(th[: m_max + 1] ** 2)
    slack = 1.0 + _REL_SLACK
    ok = bool(np.all(cum_p <= 4.0 * cum_t * slack))
    worst = int(np.argmax(cum_p / cum_t))
    checks.append(
        LemmaCheck(
            name="eqpjtj",
            lhs=float(cum_p[worst]),
            rhs=float(cum_t[worst]),
            constant=4.0,
            hard=True,
            passed=ok,
            note=f"tightest at M={worst} of {m_max}",
        )
    )

    sig_all = sigma(th, range(n_eff))
    sig_bad = math.fsum(th[j] ** 2 for j in range(n_eff) if j not in cls.good)
    checks.append(
        LemmaCheck(
            name="lembons0",
            lhs=sig_bad,
            rhs=sig_all,
            constant=0.1,
            hard=True,
            passed=sig_bad <= 0.1 * sig_all * slack,
        )
    )

    sig_good_ints = math.fsum(rec.sigma for rec in cls.intervals if rec.good)
    checks.append(
        LemmaCheck(
            name="lemgoodint",
            lhs=sig_all,
            rhs=sig_good_ints,
            constant=9.0 / 8.0,
            hard=True,
            passed=sig_all <= (9.0 / 8.0) * sig_good_ints * slack,
        )
    )

    bound = config.B**4 / (1.0 + config.B**4)
    worst_pair = (0, 1)
    worst_ratio = 0.0
    ok = True
    for rec in cls.intervals:
        if not rec.good:
            continue
        j0 = next(j for j in range(rec.lo, rec.hi) if j in cls.good)
        ratio = (j0 - rec.lo) / rec.length
        if ratio > worst_ratio:
            worst_ratio, worst_pair = ratio, (j0 - rec.lo, rec.length)
        ok = ok and (j0 - rec.lo) <= bound * rec.length
    any_good = any(rec.good for rec in cls.intervals)
    checks.append(
        LemmaCheck(
            name="lemj0",
            lhs=float(worst_pair[0]),
            rhs=float(worst_pair[1]),
            constant=bound,
            hard=True,
            passed=ok,
            note="" if any_good else "no good intervals",
        )
    )

    ok = True
    worst_swing = 1.0
    for rec in cls.intervals:
        base = th[rec.lo]
        hi_edge = config.B * base
        lo_edge = base / config.B
        for i in range(rec.lo + 1, rec.hi):
            if th[i] > hi_edge or th[i] < lo_edge:
                ok = False
            swing = max(th[i], base) / min(th[i], base)
            worst_swing = max(worst_swing, swing)
    checks.append(
        LemmaCheck(
            name="interior_bracket",
            lhs=float(worst_swing),
            rhs=float(config.B),
            constant=1.0,
            hard=True,
            passed=ok,
            note="pass uses the exact comparisons of the stopping rule",
        )
    )

    blocks = cls.j_intervals
    gap_lhs = gap_rhs = 0.0
    gap_ratio: float | None = None
    for left, right in zip(blocks, blocks[1:]):
        run_sigma = math.fsum(
            rec.sigma
            for rec in cls.intervals[left.members[-1] + 1 : right.members[0]]
            if not rec.long
        )
        base = left.theta_max**2 + right.theta_max**2
        ratio = run_sigma / base
        if gap_ratio is None or ratio > gap_ratio:
            gap_ratio, gap_lhs, gap_rhs = ratio, run_sigma, base
    checks.append(
        LemmaCheck(
            name="lemamax11",
            lhs=gap_lhs,
            rhs=gap_rhs,
            constant=gap_ratio,
            hard=False,
            passed=None,
            note="" if gap_ratio is not None else "fewer than two paired blocks",
        )
    )

    short_sigma = math.fsum(rec.sigma for rec in cls.intervals if not rec.long)
    peak_sum = math.fsum(rec.theta_max**2 for rec in blocks)
    if peak_sum > 0:
        jh_const: float | None = short_sigma / peak_sum
        jh_note = ""
    elif short_sigma == 0.0:
        jh_const = 0.0
        jh_note = ""
    else:
        jh_const = None
        jh_note = "no paired blocks; ratio undefined"
    checks.append(
        LemmaCheck(
            name="lemjh",
            lhs=short_sigma,
            rhs=peak_sum,
            constant=jh_const,
            hard=False,
            passed=None,
            note=jh_note,
        )
    )

    return LemmaReport(tuple(checks))


def _ratio(num: float, den: float) -> float | None:
    return num / den if den > 0 else None


def verify_transform_lemmas(atoms, field_values, classification: Classification, profile) -> LemmaReport:
    """Measure the transform-side inequalities on a computed vector field.

    Every inequality here carries an existential constant, so nothing is
    asserted beyond finiteness and nonnegativity of the reported sides;
    `constant` is the measured worst-case ratio, or None when no instance
    qualifies.  `field_values` must hold the transform of the atom measure at
    the atoms themselves with the self term excluded, and `classification`
    and `profile` must describe the same construction as `atoms`.

    Checks reported:
      lemnab      oscillation, over each cube, of the field generated outside
                  the cube, against (ell_j/ell_{j-1}) * p_{j-1}
      lemdes11    parent-to-child jump of cube means against p_j
      lemfa1      squared norm of the deepest projection against the
                  squared-density sum over 0..N-1
      mainlem     the same density sum against the total squared norm of the
                  difference layers (implied lower-bound constant)
      lemaux11    difference mass of windows meeting the entry condition
                  (left potential <= 2*C10 * window density sum) against
                  2^(-hd) * (window density sum)^2; smallest ratio
      lemaux00    difference mass of in-band windows with small left
                  potential against (window length) * theta_q^2; smallest
      lemlongood  sigma(I) of long good intervals against their difference
                  mass
      lemstan     peak density squared of standard blocks against their
                  difference mass
      lemnonstan  total nonstandard peak mass against total standard peak mass
    """
    n_gen = atoms.params.depth
    if n_gen == 0:
        return LemmaReport(())
    values = np.asarray(getattr(field_values, "values", field_values), dtype=float)
    if values.shape != (atoms.n, atoms.d):
        raise ParameterError(
            f"field must give one vector per atom: expected {(atoms.n, atoms.d)}, got {values.shape}"
        )
    if classification.stops.n != n_gen or profile.depth != n_gen:
        raise ParameterError(
            "classification/profile depth does not match the atom set"
        )
    d = atoms.d
    order = atoms.params.s
    th, pr, el = profile.theta, profile.p, profile.ell
    cfg = classification.config
    rep = decompose(values, atoms)
    # difference-layer masses, prefix-summed so windows are O(1)
    prefix_d = np.concatenate(([0.0], np.cumsum(rep.d_norms)))
    prefix_th = np.concatenate(([0.0], np.cumsum(th[:n_gen])))
    checks: list[LemmaCheck] = []

    def measured(name, lhs, rhs, const, note=""):
        for v in (lhs, rhs):
            if not (np.isfinite(v) and v >= 0):
                raise ParameterError(f"{name}: sides must be finite and nonnegative")
        checks.append(
            LemmaCheck(
                name=name,
                lhs=float(lhs),
                rhs=float(rhs),
                constant=const,
                hard=False,
                passed=None,
                note=note,
            )
        )

    best: float | None = None
    pair = (0.0, 0.0)
    for j in range(1, n_gen + 1):
        bs = atoms.n >> (j * d)
        denom = (el[j] / el[j - 1]) * pr[j - 1]
        pts = atoms.points.reshape(-1, bs, d)
        ms = atoms.masses.reshape(-1, bs)
        for q in range(pts.shape[0]):
            sub = pts[q]
            diffs = sub[None, :, :] - sub[:, None, :]
            nrm = np.sqrt((diffs**2).sum(axis=-1))
            np.fill_diagonal(nrm, np.inf)
            w = ms[q] / nrm ** (order + 1.0)
            inside = np.einsum("tac,ta->tc", diffs, w)
            outside = values[q * bs : (q + 1) * bs] - inside
            osc = float(np.sqrt(((outside.max(axis=0) - outside.min(axis=0)) ** 2).sum()))
            ratio = _ratio(osc, denom)
            if ratio is not None and (best is None or ratio > best):
                best, pair = ratio, (osc, denom)
    measured("lemnab", pair[0], pair[1], best)

    cells = [project(values, atoms, j) for j in range(n_gen + 1)]
    branch = atoms.params.branching
    best, pair = None, (0.0, 0.0)
    for j in range(n_gen):
        jump = cells[j + 1].values - np.repeat(cells[j].values, branch, axis=0)
        worst = float(np.sqrt((jump**2).sum(axis=1)).max())
        ratio = _ratio(worst, float(pr[j]))
        if ratio is not None and (best is None or ratio > best):
            best, pair = ratio, (worst, float(pr[j]))
    measured("lemdes11", pair[0], pair[1], best)

    head = profile.sum_theta_sq(0, n_gen - 1)
    measured("lemfa1", rep.sN_norm, head, _ratio(rep.sN_norm, head))
    total_d = float(prefix_d[-1])
    measured("mainlem", head, total_d, _ratio(head, total_d))

    c6 = 2.0 * cfg.C10
    best, pair, qualifying = None, (0.0, 0.0), False
    for k in range(n_gen):
        entry = 0.0 if k == 0 else (el[k] / el[k - 1]) * pr[k - 1]
        for end in range(k, n_gen):
            dens = float(prefix_th[end + 1] - prefix_th[k])
            if entry > c6 * dens:
                continue
            qualifying = True
            num = float(prefix_d[end + 1] - prefix_d[k])
            den = 2.0 ** (-(end - k) * d) * dens**2
            ratio = _ratio(num, den)
            if ratio is not None and (best is None or ratio < best):
                best, pair = ratio, (num, den)
    measured(
        "lemaux11",
        pair[0],
        pair[1],
        best,
        note="" if qualifying else "no window meets the entry condition",
    )

    best, pair, qualifying = None, (0.0, 0.0), False
    for q in range(n_gen):
        entry = 0.0 if q == 0 else (el[q] / el[q - 1]) * pr[q - 1]
        if entry > cfg.good_factor * th[q]:
            continue
        hi_band = cfg.B * th[q]
        lo_band = th[q] / cfg.B
        for r in range(q + 1, n_gen):
            if not (lo_band <= th[r] <= hi_band):
                break
            qualifying = True
            num = float(prefix_d[r + 1] - prefix_d[q])
            den = (r - q) * float(th[q]) ** 2
            ratio = _ratio(num, den)
            if ratio is not None and (best is None or ratio < best):
                best, pair = ratio, (num, den)
    measured(
        "lemaux00",
        pair[0],
        pair[1],
        best,
        note="" if qualifying else "no in-band window qualifies",
    )

    best, pair, found = None, (0.0, 0.0), False
    for rec in classification.intervals:
        if not (rec.long and rec.good):
            continue
        found = True
        num = rec.sigma
        den = float(prefix_d[rec.hi] - prefix_d[rec.lo])
        ratio = _ratio(num, den)
        if ratio is not None and (best is None or ratio > best):
            best, pair = ratio, (num, den)
    measured(
        "lemlongood", pair[0], pair[1], best, note="" if found else "no long good intervals"
    )

    best, pair, found = None, (0.0, 0.0), False
    for rec in classification.j_intervals:
        if not rec.standard:
            continue
        found = True
        num = rec.theta_max**2
        den = float(prefix_d[rec.hi] - prefix_d[rec.lo])
        ratio = _ratio(num, den)
        if ratio is not None and (best is None or ratio > best):
            best, pair = ratio, (num, den)
    measured(
        "lemstan", pair[0], pair[1], best, note="" if found else "no standard blocks"
    )

    non_std = math.fsum(
        rec.theta_max**2 for rec in classification.j_intervals if not rec.standard
    )
    std = math.fsum(
        rec.theta_max**2 for rec in classification.j_intervals if rec.standard
    )
    if std > 0:
        ns_const: float | None = non_std / std
        ns_note = ""
    elif non_std == 0.0:
        ns_const = 0.0
        ns_note = "no paired blocks"
    else:
        ns_const = None
        ns_note = "no standard blocks; ratio undefined"
    measured("lemnonstan", non_std, std, ns_const, note=ns_note)

    return LemmaReport(tuple(checks))
