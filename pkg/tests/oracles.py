"""Independent reference implementations used to freeze test expectations.

Nothing here imports from fareycorr: every function recomputes its quantity
from first principles (trial division, exhaustive enumeration, scalar
arithmetic), so agreement with the package is evidence, not tautology.

The tuple-counting oracle follows the same published counting convention as
the library (canonical circle positions, box axes reduced mod N to half-open
pieces in exact rational arithmetic, comparison-only membership), re-derived
here in plain scalar code. With the convention pinned, windowed counts and
exhaustive counts must agree to the last integer, and the tests assert that.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import quad


# ---------------------------------------------------------------- arithmetic

def phi_brute(n: int) -> int:
    return sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def mu_brute(n: int) -> int:
    if n == 1:
        return 1
    count = 0
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            count += 1
        p += 1
    if m > 1:
        count += 1
    return -1 if count % 2 else 1


@lru_cache(maxsize=None)
def mertens_brute(n: int) -> int:
    return sum(mu_brute(k) for k in range(1, n + 1))


def farey_pairs_brute(order: int) -> list[tuple[int, int]]:
    """All reduced a/q with 1 <= a <= q <= order, ascending by value."""
    pairs = [
        (a, q)
        for q in range(1, order + 1)
        for a in range(1, q + 1)
        if math.gcd(a, q) == 1
    ]
    pairs.sort(key=lambda t: Fraction(t[0], t[1]))
    return pairs


# ------------------------------------------------------- tuple counting

def circle_position(d: float, n: int) -> float:
    """Scaled canonical position N*(d mod 1), folded into [0, N)."""
    p = d - math.floor(d)
    t = n * p
    return t - n if t >= n else t


def reduce_axis(lo: float, hi: float, n: int) -> tuple[tuple[float, float], ...]:
    """[lo, hi) + N*Z intersected with [0, N): up to two half-open pieces."""
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


def count_tuples_brute(points, nu: int, intervals) -> int:
    """Exhaustive ordered-tuple count: every index tuple is examined.

    No sorting, no windows, no vectorization — cost is O(N^2) per axis on
    the surviving prefixes, O(N^nu) worst case. Distinctness means pairwise
    distinct indices, and axis j constrains the scaled difference
    x_{i_j} - x_{i_{j+1}} mod N.
    """
    pts = [float(v) for v in points]
    n = len(pts)
    pieces = [reduce_axis(float(lo), float(hi), n) for lo, hi in intervals]

    prefixes: list[tuple[int, ...]] = [(i,) for i in range(n)]
    for axis in range(nu - 1):
        pcs = pieces[axis]
        nxt: list[tuple[int, ...]] = []
        for pref in prefixes:
            xa = pts[pref[-1]]
            for j in range(n):
                if j in pref:
                    continue
                pos = circle_position(xa - pts[j], n)
                if any(a <= pos < b for a, b in pcs):
                    nxt.append(pref + (j,))
        prefixes = nxt
    return len(prefixes)


def histogram_counts_rowscan(points, lambda_max: float, bins: int) -> list[int]:
    """O(N^2) per-anchor scan of all ordered pairs into histogram bins.

    Vectorized per anchor row for speed, but shares no code with the
    library: positions and bin pieces are recomputed here.
    """
    x = np.asarray(points, dtype=np.float64)
    n = len(x)
    delta = lambda_max / bins
    edges = [i * delta for i in range(bins + 1)]
    pieces = [reduce_axis(edges[i], edges[i + 1], n) for i in range(bins)]
    counts = [0] * bins
    for j in range(n):
        d = x[j] - x
        p = d - np.floor(d)
        t = n * p
        pos = np.where(t >= n, t - n, t)
        keep = np.ones(n, dtype=bool)
        keep[j] = False
        for i, pcs in enumerate(pieces):
            m = np.zeros(n, dtype=bool)
            for a, b in pcs:
                m |= (pos >= a) & (pos < b)
            counts[i] += int(np.count_nonzero(m & keep))
    return counts


# ------------------------------------------------------------ theory side

def g2_scalar(lam: float) -> float:
    """Pair density by the defining sum, trial-division totients, scalar logs."""
    t = math.pi**2 * lam / 3.0
    kmax = math.ceil(t) - 1
    if kmax < 1:
        return 0.0
    acc = sum(phi_brute(k) * math.log(t / k) for k in range(1, kmax + 1))
    return 6.0 / (math.pi**2 * lam * lam) * acc


def integral_quad(f, lo: float, hi: float) -> float:
    """Adaptive 1-D quadrature of f over [lo, hi], splitting at the kinks
    3k/pi^2 of the limiting pair density (scipy's QUADPACK underneath)."""
    breaks = []
    k = 1
    while True:
        t = 3.0 * k / math.pi**2
        if t >= hi:
            break
        if t > lo:
            breaks.append(t)
        k += 1
    val, _ = quad(f, lo, hi, points=breaks or None, limit=400)
    return val


def mc_area_scalar(A, B, Lambda: float, intervals, samples: int, seed: int):
    """Scalar Monte-Carlo area of one correlation term over the unit square.

    Uses the stdlib Mersenne-Twister stream — deliberately a different
    generator and a different code path from any library sampler.
    Returns (estimate, standard_error).
    """
    rng = random.Random(seed)
    d = len(A)
    coef = 3.0 / math.pi**2
    ymin = 3.0 / (math.pi**2 * Lambda)
    hits = 0
    for _ in range(samples):
        x = rng.random()
        y = rng.random()
        if y < ymin or x > y:
            continue
        w = []
        ok = True
        for j in range(d):
            lin = A[j] * y - B[j] * x
            if not 0.0 < lin <= 1.0:
                ok = False
                break
            w.append(coef * B[j] / (y * lin))
        if not ok:
            continue
        for j in range(d):
            f = w[j] - w[j + 1] if j < d - 1 else w[j]
            lo, hi = intervals[j]
            if not lo <= f < hi:
                ok = False
                break
        if ok:
            hits += 1
    p = hits / samples
    return p, math.sqrt(p * (1.0 - p) / samples)


# -------------------------------------------------------- exponential sums

def expsum_direct_brute(order: int, r: int) -> complex:
    """Naive complex sum of e(r a/q) over the brute-force sequence."""
    return sum(
        cmath.exp(2j * cmath.pi * r * a / q) for a, q in farey_pairs_brute(order)
    )


def expsum_identity_brute(order: int, r: int) -> int:
    """Divisor sum of d * M(order // d) with trial-division Mertens values."""
    return sum(
        d * mertens_brute(order // d)
        for d in range(1, order + 1)
        if abs(r) % d == 0
    )
