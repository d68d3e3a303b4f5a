"""Empirical correlation measures of a finite point set on the unit circle.

The nu-level correlation of points x_1..x_N in [0,1) counts ordered
nu-tuples of distinct points whose consecutive differences, scaled by N,
land in a given box modulo N (the scan conceptually runs on the circle):

    (1/N) * #{ tuples : N*(x_i - x_{i+1}) in box + N*Z, i = 1..nu-1 }

Counting conventions, fixed once so independent code paths agree exactly:

  * boxes are half-open, [lo, hi) per axis;
  * a raw difference d = x_i - x_j is mapped to its canonical circle
    position P = N*(d - floor(d)), folded to 0.0 if rounding lands on N,
    so P is in [0, N);
  * each axis interval is reduced, once per box and in exact rational
    arithmetic, to its intersection with [0, N) modulo N: one or two
    half-open pieces (or the full circle when hi - lo >= N);
  * membership is the boolean OR of plain comparisons of P against the
    piece endpoints — no further arithmetic, no epsilon fuzzing.

Because a partition of an interval yields pieces sharing the same reduced
endpoints, counts over a partition add *exactly*, and any brute-force
enumeration applying the same rules reproduces the fast path bit for bit.

The scan is sort-and-window: for each anchor only candidates within the
box's circular reach are examined, so the cost is O(N * w^(nu-1)) with w
the mean window occupancy. Candidate windows are padded by 1e-12 and the
exact membership predicate decides.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import InputValidationError, SizingError

_WINDOW_PAD = 1e-12          # absolute slack, in circle units, on candidate arcs
_CHAIN_SOFT_CAP = 50_000_000  # max concurrent partial tuples before refusing
_ANCHOR_BLOCK = 1 << 18
_OFFSET_BATCH = 16


@dataclass(frozen=True)
class BoxRegion:
    """A box in difference space: nu-1 half-open intervals [lo, hi)."""

    nu: int
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.nu, int) or self.nu < 2:
            raise InputValidationError(f"nu must be an integer >= 2, got {self.nu}")
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        if len(ivs) != self.nu - 1:
            raise InputValidationError(
                f"need {self.nu - 1} intervals for nu={self.nu}, got {len(ivs)}"
            )
        for lo, hi in ivs:
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise InputValidationError("box bounds must be finite")
            if not lo < hi:
                raise InputValidationError(f"need lo < hi per axis, got [{lo}, {hi})")

    @property
    def in_positive_orthant(self) -> bool:
        """True when every axis satisfies lo >= 0 (required by theory evaluators)."""
        return all(lo >= 0.0 for lo, _ in self.intervals)


@dataclass(frozen=True)
class CorrelationEstimate:
    """Raw tuple count plus the 1/N-normalized measure."""

    nu: int
    box: BoxRegion
    n_points: int
    tuple_count: int
    value: float


@dataclass(frozen=True)
class PairHistogram:
    """Pair correlation binned on [0, lambda_max): density_i = (count_i/N)/delta."""

    n_points: int
    lambda_max: float
    bin_edges: np.ndarray
    counts: np.ndarray
    densities: np.ndarray

    @property
    def bins(self) -> int:
        return len(self.counts)

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    def __iter__(self) -> Iterator[tuple[float, float]]:
        return iter(zip(self.bin_centers.tolist(), self.densities.tolist()))


def _validate_points(points) -> np.ndarray:
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 1:
        raise InputValidationError(f"points must be 1-D, got shape {x.shape}")
    if len(x) == 0:
        raise InputValidationError("points must be non-empty")
    if not np.all(np.isfinite(x)):
        raise InputValidationError("points must be finite")
    if x[0] < 0.0 or x[-1] >= 1.0:
        raise InputValidationError("points must lie in [0, 1)")
    d = np.diff(x)
    if np.any(d <= 0.0):
        raise InputValidationError("points must be strictly increasing (sorted, no duplicates)")
    return x


def circle_positions(d: np.ndarray, n: int) -> np.ndarray:
    """Canonical scaled positions N*(d mod 1) in [0, N) of raw differences."""
    p = d - np.floor(d)
    t = n * p
    # n*p can round up to exactly n when p is within half an ulp of 1
    return np.where(t >= n, t - n, t)


def axis_pieces(lo: float, hi: float, n: int) -> tuple[tuple[float, float], ...]:
    """Reduce [lo, hi) + N*Z to half-open pieces of [0, N), exactly.

    Endpoints are reduced mod N in rational arithmetic, so an endpoint
    shared by two adjacent boxes reduces to the identical float in both —
    the root of the exact-additivity guarantee.
    """
    if hi - lo >= n:
        return ((0.0, float(n)),)
    lo_r = Fraction(lo) % n
    hi_r = Fraction(hi) % n
    a, b = float(lo_r), float(hi_r)
    if lo_r < hi_r:
        return ((a, b),)
    if lo_r > hi_r:
        if b > 0.0:
            return ((a, float(n)), (0.0, b))
        return ((a, float(n)),)
    return ()


def _member(pos: np.ndarray, pieces: tuple[tuple[float, float], ...]) -> np.ndarray:
    out = np.zeros(pos.shape, dtype=bool)
    for a, b in pieces:
        out |= (pos >= a) & (pos < b)
    return out


def _ranges_flat(starts: np.ndarray, stops: np.ndarray) -> np.ndarray:
    """Concatenate integer ranges [starts_i, stops_i) into one index array."""
    lens = stops - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(lens)[:-1]))
    return (
        np.arange(total, dtype=np.int64)
        - np.repeat(offsets, lens)
        + np.repeat(starts.astype(np.int64), lens)
    )


def _count_chains(
    x: np.ndarray,
    xe: np.ndarray,
    intervals: tuple[tuple[float, float], ...],
    pieces_per_axis: list[tuple[tuple[float, float], ...]],
    anchor_lo: int,
    anchor_hi: int,
) -> int:
    """Count tuples whose first element index lies in [anchor_lo, anchor_hi)."""
    n = len(x)
    cols: list[np.ndarray] = [np.arange(anchor_lo, anchor_hi, dtype=np.int64)]
    for (lo, hi), pieces in zip(intervals, pieces_per_axis):
        last = cols[-1]
        if len(last) == 0:
            return 0
        if (hi - lo) / n >= 1.0:
            # Box spans the whole circle on this axis: every point qualifies.
            if len(last) * n > _CHAIN_SOFT_CAP:
                raise SizingError(
                    "window scan would materialize too many candidate tuples; "
                    "the box is too wide for this point count"
                )
            reps = np.full(len(last), n, dtype=np.int64)
            cand = np.tile(np.arange(n, dtype=np.int64), len(last))
        else:
            c = x[last]
            a = c - hi / n - _WINDOW_PAD
            b = c - lo / n + _WINDOW_PAD
            a_mod = a - np.floor(a)
            b_mod = a_mod + (b - a)
            starts = np.searchsorted(xe, a_mod, side="left")
            stops = np.searchsorted(xe, b_mod, side="right")
            reps = (stops - starts).astype(np.int64)
            if int(reps.sum()) > _CHAIN_SOFT_CAP:
                raise SizingError(
                    "window scan would materialize too many candidate tuples; "
                    "the box is too wide for this point count"
                )
            cand = _ranges_flat(starts, stops) % n
        parent = np.repeat(np.arange(len(last), dtype=np.int64), reps)
        pos = circle_positions(x[last[parent]] - x[cand], n)
        keep = _member(pos, pieces)
        for col in cols:  # tuples must use pairwise-distinct points
            keep &= cand != col[parent]
        kept_parent = parent[keep]
        cols = [col[kept_parent] for col in cols]
        cols.append(cand[keep])
    return len(cols[-1])


def _block_task(args) -> int:
    x, intervals, pieces_per_axis, a0, a1 = args
    xe = np.concatenate([x, x + 1.0])
    return _count_chains(x, xe, intervals, pieces_per_axis, a0, a1)


def empirical_correlation(
    points, nu: int, box: BoxRegion, *, workers: int = 1
) -> CorrelationEstimate:
    """Windowed count of ordered nu-tuples with scaled differences in the box.

    Args:
        points: ascending, distinct floats in [0,1) (circle coordinates).
        nu: tuple length, >= 2.
        box: difference-space box with box.nu == nu.
        workers: optional process count; never changes the result.

    Returns:
        CorrelationEstimate with the exact integer count and count/N.
    """
    x = _validate_points(points)
    if not isinstance(nu, int) or nu < 2:
        raise InputValidationError(f"nu must be an integer >= 2, got {nu}")
    if box.nu != nu:
        raise InputValidationError(f"box has nu={box.nu}, expected {nu}")
    n = len(x)
    if n < nu:
        raise InputValidationError(f"need at least nu={nu} points, got {n}")

    pieces_per_axis = [axis_pieces(lo, hi, n) for lo, hi in box.intervals]
    blocks = [(a, min(a + _ANCHOR_BLOCK, n)) for a in range(0, n, _ANCHOR_BLOCK)]
    if workers > 1 and len(blocks) > 1:
        tasks = [(x, box.intervals, pieces_per_axis, a0, a1) for a0, a1 in blocks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_block_task, tasks))
        count = int(sum(parts))
    else:
        xe = np.concatenate([x, x + 1.0])
        count = 0
        for a0, a1 in blocks:
            count += _count_chains(x, xe, box.intervals, pieces_per_axis, a0, a1)
    return CorrelationEstimate(
        nu=nu, box=box, n_points=n, tuple_count=count, value=count / n
    )


def symmetric_correlation(points, nu: int, lambdas, *, workers: int = 1) -> float:
    """2^(1-nu) times the correlation over the symmetric box prod [-l_j, l_j)."""
    lam = [float(v) for v in np.atleast_1d(np.asarray(lambdas, dtype=np.float64))]
    if len(lam) != nu - 1:
        raise InputValidationError(f"need {nu - 1} lambda values, got {len(lam)}")
    if any(v <= 0 for v in lam):
        raise InputValidationError("lambda values must be positive")
    box = BoxRegion(nu=nu, intervals=tuple((-v, v) for v in lam))
    est = empirical_correlation(points, nu, box, workers=workers)
    return 2.0 ** (1 - nu) * est.value


def _offset_task(args) -> tuple[np.ndarray, float]:
    """Bin counts for one circular offset k, plus the offset's min distance."""
    x, k, bin_pieces = args
    n = len(x)
    pos = circle_positions(np.roll(x, -k) - x, n)
    counts = np.empty(len(bin_pieces), dtype=np.int64)
    for i, pieces in enumerate(bin_pieces):
        counts[i] = int(np.count_nonzero(_member(pos, pieces)))
    return counts, float(pos.min())


def pair_correlation_histogram(
    points, lambda_max: float, bins: int, *, workers: int = 1
) -> PairHistogram:
    """Bin the pair correlation on [0, lambda_max) in one sorted-window pass.

    Bin i covers [i*delta, (i+1)*delta), delta = lambda_max/bins, and its
    density is the per-bin correlation value divided by delta. Counts are
    exactly what per-bin empirical_correlation calls would return.
    """
    x = _validate_points(points)
    lambda_max = float(lambda_max)
    if not (lambda_max > 0 and math.isfinite(lambda_max)):
        raise InputValidationError(f"lambda_max must be positive, got {lambda_max}")
    if not isinstance(bins, int) or bins < 1:
        raise InputValidationError(f"bins must be a positive integer, got {bins}")
    n = len(x)
    if n < 2:
        raise InputValidationError("need at least two points")

    delta = lambda_max / bins
    edges = np.arange(bins + 1, dtype=np.float64) * delta
    bin_pieces = [axis_pieces(edges[i], edges[i + 1], n) for i in range(bins)]
    counts = np.zeros(bins, dtype=np.int64)

    if lambda_max >= n / 4:
        # Tiny point sets relative to the range: test all ordered pairs.
        for j in range(n):
            pos = circle_positions(np.delete(x - x[j], j), n)
            for i, pieces in enumerate(bin_pieces):
                counts[i] += int(np.count_nonzero(_member(pos, pieces)))
    else:
        reach = lambda_max + 1e-6  # offsets beyond this circular distance count nothing
        pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
        try:
            k = 1
            done = False
            while not done and k <= n - 1:
                batch = list(range(k, min(k + _OFFSET_BATCH, n)))
                tasks = [(x, kk, bin_pieces) for kk in batch]
                results = pool.map(_offset_task, tasks) if pool else map(_offset_task, tasks)
                for counts_k, minpos in results:
                    counts += counts_k
                    # min circular distance is nondecreasing in the offset
                    if minpos > reach:
                        done = True
                k += _OFFSET_BATCH
        finally:
            if pool:
                pool.shutdown()

    densities = (counts / n) / delta
    return PairHistogram(
        n_points=n,
        lambda_max=lambda_max,
        bin_edges=edges,
        counts=counts,
        densities=densities,
    )
