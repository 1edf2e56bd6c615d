"""Dyadic-block variation, window majorants, and membership profiling.

A sequence ``a`` belongs to the step-``r`` class for a majorant ``beta``
when the r-step variation over dyadic blocks,

    V_r(m) = sum_{k=m}^{2m-1} |a_k - a_{k+r}|,

is bounded by a constant multiple of ``beta_m`` for all ``m``.  The
reference majorant used throughout is

    beta_star(n; r, c) = sum_{k=n}^{n+r-1} |a_k|
                       + sum_{k=max(1, floor(n/c))}^{floor(c*n)} |a_k| / k

for some ``c > 1``.  Square brackets in the window limits mean ``floor``;
lower limits are clamped to 1 so small ``n`` stays well defined.

The hidden constant is never estimated as a single number.  Instead a
defect profile samples the ratio ``V_r(m) / beta_m`` on an ascending
``m`` grid and reads the trend: a log-log slope near zero means the
ratio stays bounded (membership holds on the grid), a slope near one
means it grows like ``m`` and membership fails.  Because membership only
requires *some* ``c > 1``, ``gm_membership`` quantifies the profile over
several ``c`` values and accepts if any of them is bounded.
"""

from __future__ import annotations

import math
import operator
import statistics
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .sequences import RealSequence
from .summation import kahan_sum

__all__ = [
    "BetaSpec",
    "DefectSample",
    "DefectReport",
    "RatioSample",
    "RatioReport",
    "TailSup",
    "VERDICT_BOUNDED",
    "VERDICT_GROWING",
    "VERDICT_INCONCLUSIVE",
    "DEFAULT_SLOPE_BOUNDED",
    "DEFAULT_SLOPE_GROWING",
    "DEFAULT_RATIO_CAP",
    "r_variation",
    "variation_window",
    "beta_star",
    "beta_value",
    "defect_profile",
    "classify",
    "gm_membership",
    "weak_monotone_defect",
    "beta_window_ratio",
    "block_asymmetry_partial",
    "block_asymmetry_tail",
    "tail_nbn_sup",
    "nbn_sup_from",
    "weak_monotone_bound_check",
    "dyadic_grid",
]

VERDICT_BOUNDED = "bounded"
VERDICT_GROWING = "growing"
VERDICT_INCONCLUSIVE = "inconclusive"

# Verdict thresholds.  The separating families grow like m or m/ln m
# (slope near 1), so the gap between 0.2 and 0.6 leaves a wide margin.
DEFAULT_SLOPE_BOUNDED = 0.2
DEFAULT_SLOPE_GROWING = 0.6
DEFAULT_RATIO_CAP = 1e6

# Membership quantifies over "some c > 1"; profiles are run for each of
# these by default and any bounded profile accepts.
DEFAULT_MEMBERSHIP_CS = (2.0, 4.0, 8.0)


def dyadic_grid(limit: int) -> list[int]:
    """Powers of two ``1, 2, 4, ...`` not exceeding ``limit``."""
    limit = operator.index(limit)
    if limit < 1:
        raise ValueError("limit must be >= 1")
    grid = []
    m = 1
    while m <= limit:
        grid.append(m)
        m *= 2
    return grid


# ---------------------------------------------------------------------------
# majorants


@dataclass(frozen=True)
class BetaSpec:
    """Choice of majorant: the reference ``beta_star`` or variants v1-v5.

    kind        formula for beta_n
    ----        ------------------
    beta_star   sum_{k=n}^{n+r-1} |a_k| + sum_{k=[n/c]}^{[cn]} |a_k|/k
    v1          |a_n|
    v2          sum_{k=n}^{n+N} |a_k|
    v3          sum_{v=0}^{N} |a_{base^v * n}|          (integer base > 1)
    v4          |a_n| + sum_{k=n+1}^{[cn]} |a_k|/k
    v5          |a_n| + sum_{k=[n/c]}^{[cn]} |a_k|/k    (== beta_star with r=1)
    """

    kind: str
    r: int | None = None
    c: float | None = None
    N: int | None = None
    base: int | None = None

    _KINDS = ("beta_star", "v1", "v2", "v3", "v4", "v5")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown beta kind {self.kind!r}")
        if self.c is not None and not self.c > 1:
            raise ValueError(f"c must be > 1, got {self.c}")
        if self.kind == "beta_star":
            if self.r is None or self.r < 1:
                raise ValueError("beta_star needs r >= 1")
            if self.c is None:
                raise ValueError("beta_star needs c > 1")
        elif self.kind in ("v2", "v3"):
            if self.N is None or self.N < 0:
                raise ValueError(f"{self.kind} needs N >= 0")
            if self.kind == "v3":
                if self.base is None or self.base < 2:
                    raise ValueError("v3 needs an integer base > 1")
        elif self.kind in ("v4", "v5") and self.c is None:
            raise ValueError(f"{self.kind} needs c > 1")

    @classmethod
    def star(cls, r: int, c: float = 2.0) -> "BetaSpec":
        return cls("beta_star", r=r, c=c)


def _window_limits(n: int, c: float) -> tuple[int, int]:
    # [n/c] can be 0 for n < c; clamp to 1 since indexing starts there.
    lo = max(1, math.floor(n / c))
    hi = math.floor(c * n)
    return lo, hi


def _weighted_window_sum(seq: RealSequence, n: int, c: float) -> float:
    """``sum_{k=max(1,[n/c])}^{[cn]} |a_k| / k``, ascending."""
    lo, hi = _window_limits(n, c)
    vals = seq.values(hi)
    ks = np.arange(lo, hi + 1, dtype=np.float64)
    return kahan_sum(np.abs(vals[lo - 1 : hi]) / ks)


def beta_star(seq: RealSequence, n: int, r: int, c: float) -> float:
    """Reference majorant ``sum_{k=n}^{n+r-1}|a_k| + sum_{k=[n/c]}^{[cn]}|a_k|/k``."""
    n = operator.index(n)
    r = operator.index(r)
    if n < 1 or r < 1:
        raise ValueError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
    if not c > 1:
        raise ValueError(f"c must be > 1, got {c}")
    vals = seq.values(n + r - 1)
    head = kahan_sum(np.abs(vals[n - 1 : n + r - 1]))
    return head + _weighted_window_sum(seq, n, c)


def beta_value(seq: RealSequence, n: int, spec: BetaSpec) -> float:
    """Evaluate the majorant selected by ``spec`` at index ``n``."""
    n = operator.index(n)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    kind = spec.kind
    if kind == "beta_star":
        return beta_star(seq, n, spec.r, spec.c)
    if kind == "v1":
        return abs(seq.term(n))
    if kind == "v2":
        vals = seq.values(n + spec.N)
        return kahan_sum(np.abs(vals[n - 1 : n + spec.N]))
    if kind == "v3":
        terms = [abs(seq.term(spec.base**v * n)) for v in range(spec.N + 1)]
        return kahan_sum(np.array(terms, dtype=np.float64))
    if kind == "v4":
        hi = math.floor(spec.c * n)
        head = abs(seq.term(n))
        if hi < n + 1:
            return head
        vals = seq.values(hi)
        ks = np.arange(n + 1, hi + 1, dtype=np.float64)
        return head + kahan_sum(np.abs(vals[n : hi]) / ks)
    # v5: same head + window composition as beta_star at r = 1, so the two
    # agree bit for bit while staying independent code paths.
    return abs(seq.term(n)) + _weighted_window_sum(seq, n, spec.c)


# ---------------------------------------------------------------------------
# variation and defect profiling


def variation_window(seq: RealSequence, start: int, stop: int, r: int) -> float:
    """``sum_{k=start}^{stop} |a_k - a_{k+r}|`` in ascending order."""
    start = operator.index(start)
    stop = operator.index(stop)
    r = operator.index(r)
    if start < 1 or r < 1:
        raise ValueError(f"need start >= 1 and r >= 1, got {start}, {r}")
    if stop < start:
        return 0.0
    vals = seq.values(stop + r)
    return kahan_sum(np.abs(vals[start - 1 : stop] - vals[start - 1 + r : stop + r]))


def r_variation(seq: RealSequence, m: int, r: int) -> float:
    """r-step variation over the dyadic block ``[m, 2m-1]``."""
    m = operator.index(m)
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    return variation_window(seq, m, 2 * m - 1, r)


@dataclass(frozen=True)
class DefectSample:
    """One profiled window: variation ``lhs``, majorant ``beta``, their ratio.

    ``ratio`` is ``math.inf`` when ``beta == 0 < lhs`` and 0 when both
    vanish.
    """

    m: int
    lhs: float
    beta: float
    ratio: float


@dataclass(frozen=True)
class DefectReport:
    samples: list[DefectSample]
    max_ratio: float
    slope: float
    verdict: str


def _ratio_of(lhs: float, beta: float) -> float:
    if beta > 0:
        return lhs / beta
    return math.inf if lhs > 0 else 0.0


def _fit_slope(samples: Sequence[DefectSample], m_floor: float) -> float:
    """Least-squares slope of log(ratio) against log(m), upper grid half only.

    Samples with non-finite or zero ratio are excluded; fewer than two
    usable points fit a flat line.
    """
    xs, ys = [], []
    for s in samples:
        if s.m >= m_floor and math.isfinite(s.ratio) and s.ratio > 0:
            xs.append(math.log(s.m))
            ys.append(math.log(s.ratio))
    if len(xs) < 2:
        return 0.0
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    return sxy / sxx


def classify(
    report: DefectReport,
    slope_growing: float = DEFAULT_SLOPE_GROWING,
    slope_bounded: float = DEFAULT_SLOPE_BOUNDED,
    ratio_cap: float = DEFAULT_RATIO_CAP,
) -> str:
    """Deterministic verdict from a report's slope and ratio statistics."""
    if not slope_bounded < slope_growing:
        raise ValueError("slope_bounded must be below slope_growing")
    any_infinite = any(not math.isfinite(s.ratio) for s in report.samples)
    if report.slope >= slope_growing:
        return VERDICT_GROWING
    if (
        not any_infinite
        and report.slope <= slope_bounded
        and report.max_ratio <= ratio_cap
    ):
        return VERDICT_BOUNDED
    return VERDICT_INCONCLUSIVE


def defect_profile(
    seq: RealSequence,
    r: int,
    spec: BetaSpec,
    m_grid: Sequence[int],
    slope_growing: float = DEFAULT_SLOPE_GROWING,
    slope_bounded: float = DEFAULT_SLOPE_BOUNDED,
    ratio_cap: float = DEFAULT_RATIO_CAP,
) -> DefectReport:
    """Sample ``V_r(m) / beta_m`` over ``m_grid`` and classify the trend."""
    if len(m_grid) == 0:
        raise ValueError("m_grid must be nonempty")
    if any(b <= a for a, b in zip(m_grid, m_grid[1:])):
        raise ValueError("m_grid must be strictly ascending")
    samples = []
    for m in m_grid:
        lhs = r_variation(seq, m, r)
        beta = beta_value(seq, m, spec)
        samples.append(DefectSample(m, lhs, beta, _ratio_of(lhs, beta)))
    finite = [s.ratio for s in samples if math.isfinite(s.ratio)]
    max_ratio = max(finite) if finite else math.inf
    slope = _fit_slope(samples, statistics.median(m_grid))
    stub = DefectReport(samples, max_ratio, slope, VERDICT_INCONCLUSIVE)
    verdict = classify(stub, slope_growing, slope_bounded, ratio_cap)
    return DefectReport(samples, max_ratio, slope, verdict)


def gm_membership(
    seq: RealSequence,
    r: int,
    cs: Iterable[float] = DEFAULT_MEMBERSHIP_CS,
    m_grid: Sequence[int] | None = None,
    **thresholds,
) -> tuple[str, dict[float, DefectReport]]:
    """Profile against ``beta_star(r, c)`` for each ``c``; any bounded accepts."""
    if m_grid is None:
        m_grid = dyadic_grid(2**13)
    reports = {
        c: defect_profile(seq, r, BetaSpec.star(r, c), m_grid, **thresholds)
        for c in cs
    }
    verdicts = [rep.verdict for rep in reports.values()]
    if VERDICT_BOUNDED in verdicts:
        return VERDICT_BOUNDED, reports
    if all(v == VERDICT_GROWING for v in verdicts):
        return VERDICT_GROWING, reports
    return VERDICT_INCONCLUSIVE, reports


# ---------------------------------------------------------------------------
# weak monotonicity and embedding diagnostics


def weak_monotone_defect(seq: RealSequence, n: int, c: float) -> float:
    """``n |a_n| / sum_{k=[n/c]}^{[cn]} |a_k|`` with 0/0 read as 0."""
    n = operator.index(n)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not c > 1:
        raise ValueError(f"c must be > 1, got {c}")
    lo, hi = _window_limits(n, c)
    vals = seq.values(hi)
    denom = kahan_sum(np.abs(vals[lo - 1 : hi]))
    numer = n * abs(seq.term(n))
    if denom > 0:
        return numer / denom
    return math.inf if numer > 0 else 0.0


@dataclass(frozen=True)
class RatioSample:
    n: int
    ratio: float


@dataclass(frozen=True)
class RatioReport:
    """Per-index ratios, their max over finite samples, and flagged indices."""

    samples: list[RatioSample]
    max_ratio: float
    flagged: list[int] = field(default_factory=list)


def beta_window_ratio(
    beta_fn: Callable[[int], float], r: int, n_grid: Sequence[int]
) -> RatioReport:
    """Max over the grid of ``sum_{i=0}^{r-1} beta_{n+i} / beta_n``.

    A bounded max certifies numerically that step-1 membership for this
    majorant implies step-``r`` membership.  Grid points with
    ``beta_n == 0`` are flagged and skipped.
    """
    r = operator.index(r)
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    samples: list[RatioSample] = []
    flagged: list[int] = []
    for n in n_grid:
        bn = beta_fn(n)
        if bn == 0:
            flagged.append(n)
            samples.append(RatioSample(n, math.inf))
            continue
        window = 0.0
        for i in range(r):
            window += beta_fn(n + i)
        samples.append(RatioSample(n, window / bn))
    finite = [s.ratio for s in samples if math.isfinite(s.ratio)]
    return RatioReport(samples, max(finite) if finite else math.inf, flagged)


# ---------------------------------------------------------------------------
# block asymmetry sums (side condition for odd-ish steps r >= 3)


def _block_asymmetry_inner(seq: RealSequence, m_start: int, m_stop: int, r: int) -> float:
    """``sum_{m=m_start}^{m_stop} sum_{k=1}^{floor(r/2)} |a_{rm+k} - a_{rm+r-k}|``."""
    if m_stop < m_start:
        return 0.0
    vals = seq.values(r * m_stop + r - 1)
    ms = np.arange(m_start, m_stop + 1)
    inner = np.zeros(ms.shape[0], dtype=np.float64)
    for k in range(1, r // 2 + 1):  # ascending k, exact per-block order
        inner = inner + np.abs(vals[r * ms + k - 1] - vals[r * ms + r - k - 1])
    return kahan_sum(inner)


def block_asymmetry_partial(seq: RealSequence, r: int, N: int) -> float:
    """Partial sums (from block 1) of the within-block asymmetry series."""
    r = operator.index(r)
    N = operator.index(N)
    if r < 3:
        raise ValueError(f"need r >= 3, got {r}")
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    return _block_asymmetry_inner(seq, 1, N, r)


def block_asymmetry_tail(seq: RealSequence, r: int, n: int, cap: int) -> float:
    """Tail of the asymmetry series from block ``ceil(n/r)``, truncated at ``cap``."""
    r = operator.index(r)
    n = operator.index(n)
    cap = operator.index(cap)
    if r < 3:
        raise ValueError(f"need r >= 3, got {r}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    start = -(-n // r)
    return _block_asymmetry_inner(seq, start, cap, r)


# ---------------------------------------------------------------------------
# scaled tail suprema


class TailSup(NamedTuple):
    value: float
    attained_at_cap: bool


def nbn_sup_from(seq: RealSequence, start: int, cap: int) -> TailSup:
    """``max_{start <= k <= cap} k |a_k|`` with a truncation-honesty flag.

    The flag is set only when the first index attaining the max is the
    cap itself, which signals that the truncated sup cannot be trusted.
    """
    start = operator.index(start)
    cap = operator.index(cap)
    if start < 1:
        raise ValueError(f"need start >= 1, got {start}")
    if cap < start:
        raise ValueError(f"cap {cap} is below the scan start {start}")
    vals = seq.values(cap)
    scaled = np.arange(start, cap + 1, dtype=np.float64) * np.abs(vals[start - 1 : cap])
    i = int(np.argmax(scaled))
    return TailSup(float(scaled[i]), start + i == cap)


def tail_nbn_sup(seq: RealSequence, n: int, c: float, cap: int) -> TailSup:
    """``sup_{k >= n/c} k |a_k|`` truncated at ``cap``; start is ``ceil(n/c)``."""
    n = operator.index(n)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not c > 1:
        raise ValueError(f"c must be > 1, got {c}")
    return nbn_sup_from(seq, max(1, math.ceil(n / c)), cap)


# ---------------------------------------------------------------------------
# derived weak-monotone window bound


def weak_monotone_bound_check(
    seq: RealSequence, r: int, c: float, n_range: Sequence[int]
) -> RatioReport:
    """Max over ``n_range`` of ``n a_n / (4 r sum_{k=ceil(n/c1)}^{floor(c1 n)} a_k)``
    with ``c1 = max(3, 2c)``.

    A max at or below 1 certifies the window bound on the range.  The
    sequence must be nonnegative and every ``n`` must exceed ``r``;
    entries with a nonpositive window sum under a positive numerator are
    flagged and excluded from the max.
    """
    r = operator.index(r)
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    if not c > 1:
        raise ValueError(f"c must be > 1, got {c}")
    if len(n_range) == 0:
        raise ValueError("n_range must be nonempty")
    if min(n_range) <= r:
        raise ValueError("every n must exceed r")
    c1 = max(3.0, 2.0 * c)
    hi_max = math.floor(c1 * max(n_range))
    vals = seq.values(hi_max)
    if np.any(vals < 0):
        raise ValueError("sequence must be nonnegative on the scanned range")
    prefix = np.cumsum(vals)

    samples: list[RatioSample] = []
    flagged: list[int] = []
    for n in n_range:
        lo = math.ceil(n / c1)
        hi = math.floor(c1 * n)
        window = prefix[hi - 1] - (prefix[lo - 2] if lo >= 2 else 0.0)
        numer = n * float(vals[n - 1])
        denom = 4.0 * r * window
        if denom > 0:
            samples.append(RatioSample(n, numer / denom))
        elif numer > 0:
            flagged.append(n)
            samples.append(RatioSample(n, math.inf))
        else:
            samples.append(RatioSample(n, 0.0))
    finite = [s.ratio for s in samples if math.isfinite(s.ratio)]
    return RatioReport(samples, max(finite) if finite else math.inf, flagged)
