"""Limiting correlation formulas: the exact pair density, reference models,
and the nu-level limiting measure evaluated by certified 2-D quadrature.

The limiting pair density g2 is a finite totient-weighted log sum with
support [3/pi^2, inf). The nu-level measure of a box in the positive
orthant is twice a finite sum, over coprime integer coefficient pairs
(A_j, B_j), of areas of plane regions

    Omega = {0 <= x <= y <= 1, y >= ymin, 0 < A_j*y - B_j*x <= 1 for all j}

intersected with the preimage of the box under the map

    u_j = (3/pi^2) * B_j / (y * (A_j*y - B_j*x)),    j = 1..nu-1,

followed by consecutive differencing of u (last coordinate kept). Each
area is computed by adaptive quadtree subdivision with interval-certified
cell classification, which yields a hard bracket [inside, inside+boundary]
around the true value.

Certification slack: cell bounds are float evaluations of monotone
expressions padded by _CERT_PAD, which dominates the accumulated rounding
error of the handful of arithmetic ops involved; cells within the pad band
of a constraint boundary simply remain boundary cells, so the bracket is
honest and the pad only (negligibly) slows termination.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, InputValidationError, SizingError
from .numtheory import SieveTables
from .spacing import BoxRegion

PI_SQUARED = math.pi**2

# Left edge of the support of the limiting pair density.
SUPPORT_THRESHOLD = 3.0 / PI_SQUARED

# Ceiling on the box scale for term enumeration: the number of coefficient
# pairs grows like (scale^2)^(2(nu-1)), so large boxes need an explicit opt-in.
DEFAULT_MAX_SCALE = 6.0

_CERT_PAD = 1e-9
_MAX_DEPTH = 26
_CELL_CHUNK = 1 << 21
_TOTAL_CELL_BUDGET = 1 << 27
_MAX_CANDIDATES = 200_000


def g2(tables: SieveTables, lam: float) -> float:
    """Limiting pair correlation density at lam.

    Evaluates (6/(pi^2 lam^2)) * sum over 1 <= k < pi^2*lam/3 of
    phi(k)*log(pi^2*lam/(3k)); the empty sum makes the density exactly
    zero on (0, 3/pi^2].
    """
    lam = float(lam)
    if not (lam > 0 and math.isfinite(lam)):
        raise InputValidationError(f"lambda must be positive and finite, got {lam}")
    t = PI_SQUARED * lam / 3.0
    if math.ceil(t) > tables.limit:
        raise InputValidationError(
            f"sieve tables cover k <= {tables.limit}, need {math.ceil(t)} for lambda={lam}"
        )
    kmax = math.ceil(t) - 1  # strict k < t
    if kmax < 1:
        return 0.0
    k = np.arange(1, kmax + 1, dtype=np.float64)
    terms = tables.phi[1 : kmax + 1].astype(np.float64) * (math.log(t) - np.log(k))
    return (6.0 / (PI_SQUARED * lam * lam)) * math.fsum(terms)


def g_reference(model: str, lam: float) -> float:
    """Reference pair density: 'gue' -> 1 - sin^2(pi lam)/(pi lam)^2, 'poisson' -> 1."""
    lam = float(lam)
    if not (lam > 0 and math.isfinite(lam)):
        raise InputValidationError(f"lambda must be positive and finite, got {lam}")
    name = model.strip().lower()
    if name == "poisson":
        return 1.0
    if name == "gue":
        s = math.sin(math.pi * lam) / (math.pi * lam)
        return 1.0 - s * s
    raise InputValidationError(f"unknown reference model {model!r}; use 'gue' or 'poisson'")


def weighted_totient_log_sum(tables: SieveTables, x: float) -> float:
    """S(x) = sum over 1 <= q < x of phi(q)*log(x/q); main term is 3x^2/(2 pi^2)."""
    x = float(x)
    if not (x > 1 and math.isfinite(x)):
        raise InputValidationError(f"x must exceed 1, got {x}")
    if x > tables.limit:
        raise InputValidationError(f"sieve tables cover q <= {tables.limit}, got x={x}")
    qmax = math.ceil(x) - 1  # strict q < x
    q = np.arange(1, qmax + 1, dtype=np.float64)
    terms = tables.phi[1 : qmax + 1].astype(np.float64) * (math.log(x) - np.log(q))
    return math.fsum(terms)


def g2_asymptotic_diagnostic(
    tables: SieveTables, lambdas: Sequence[float]
) -> list[tuple[float, float]]:
    """Scaled deviations (lam, lam*|g2(lam) - 1|); bounded iff g2 = 1 + O(1/lam)."""
    out = []
    for lam in lambdas:
        lam = float(lam)
        out.append((lam, lam * abs(g2(tables, lam) - 1.0)))
    return out


def _simpson_recurse(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return _simpson_recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + _simpson_recurse(
        f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1
    )


def g2_integral(tables: SieveTables, lo: float, hi: float, *, tol: float = 1e-10) -> float:
    """Integral of the limiting pair density over [lo, hi].

    Adaptive Simpson on each smooth piece, splitting at the density's kink
    points 3k/pi^2 and skipping the zero region below the support edge.
    """
    lo = float(lo)
    hi = float(hi)
    if not (0.0 <= lo < hi and math.isfinite(hi)):
        raise InputValidationError(f"need 0 <= lo < hi, got [{lo}, {hi}]")
    breaks = [lo]
    k = 1
    while True:
        t = 3.0 * k / PI_SQUARED
        if t >= hi:
            break
        if t > lo:
            breaks.append(t)
        k += 1
    breaks.append(hi)

    def f(lam: float) -> float:
        return g2(tables, lam)

    pieces = []
    span = hi - lo
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= SUPPORT_THRESHOLD:
            continue  # identically zero below the support edge
        fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
        whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
        pieces.append(_simpson_recurse(f, a, b, fa, fm, fb, whole, tol * (b - a) / span, 40))
    return math.fsum(pieces)


@dataclass(frozen=True)
class CorrelationTerm:
    """One coefficient pair (A, B) of the nu-level sum, at box scale Lambda.

    A and B are positive integer vectors of length nu-1 with gcd(A_j,B_j)=1
    componentwise, each entry bounded by ceil(nu * (pi^2 Lambda/3)^2).
    """

    A: tuple[int, ...]
    B: tuple[int, ...]
    Lambda: float

    def __post_init__(self) -> None:
        A = tuple(int(v) for v in self.A)
        B = tuple(int(v) for v in self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "Lambda", float(self.Lambda))
        if len(A) == 0 or len(A) != len(B):
            raise InputValidationError("A and B must be non-empty and of equal length")
        if not (self.Lambda > 0 and math.isfinite(self.Lambda)):
            raise InputValidationError(f"Lambda must be positive, got {self.Lambda}")
        c = PI_SQUARED * self.Lambda / 3.0
        cap = math.ceil(self.nu * c * c)
        for a, b in zip(A, B):
            if a < 1 or b < 1:
                raise InputValidationError("coefficient entries must be >= 1")
            if a > cap or b > cap:
                raise InputValidationError(
                    f"coefficient entry exceeds the admissible bound {cap} at this scale"
                )
            if math.gcd(a, b) != 1:
                raise InputValidationError(f"coefficients must be coprime per axis, got ({a},{b})")

    @property
    def nu(self) -> int:
        return len(self.A) + 1


@dataclass(frozen=True)
class RegionOmega:
    """The convex region attached to a term, as an exactly-computed polygon.

    Vertices are rational points in counterclockwise order, from clipping
    the triangle {0 <= x <= y <= 1} by y >= ymin and, per axis,
    0 <= A_j*y - B_j*x <= 1 (closure of the open constraint; the closure
    differs by measure zero).
    """

    term: CorrelationTerm
    vertices: tuple[tuple[Fraction, Fraction], ...]

    @property
    def area(self) -> Fraction:
        v = self.vertices
        if len(v) < 3:
            return Fraction(0)
        s = Fraction(0)
        for i in range(len(v)):
            x1, y1 = v[i]
            x2, y2 = v[(i + 1) % len(v)]
            s += x1 * y2 - x2 * y1
        return abs(s) / 2

    @property
    def is_empty(self) -> bool:
        return self.area == 0


def _clip_halfplane(poly, a, b, c):
    """Clip a polygon (Fraction pairs) to {a*x + b*y + c >= 0}."""
    if not poly:
        return []
    out = []
    m = len(poly)
    for i in range(m):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % m]
        f1 = a * x1 + b * y1 + c
        f2 = a * x2 + b * y2 + c
        if f1 >= 0:
            out.append((x1, y1))
        if (f1 > 0 > f2) or (f1 < 0 < f2):
            t = f1 / (f1 - f2)
            out.append((x1 + t * (x2 - x1), y1 + t * (y2 - y1)))
    return out


def omega_region(term: CorrelationTerm) -> RegionOmega:
    """Exact polygon for the term's region (closure; empty iff zero area)."""
    ymin = Fraction(3.0 / (PI_SQUARED * term.Lambda))
    poly = [
        (Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(1)),
        (Fraction(0), Fraction(1)),
    ]
    poly = _clip_halfplane(poly, Fraction(0), Fraction(1), -ymin)
    for a, b in zip(term.A, term.B):
        poly = _clip_halfplane(poly, Fraction(-b), Fraction(a), Fraction(0))
        poly = _clip_halfplane(poly, Fraction(b), Fraction(-a), Fraction(1))
    # drop consecutive duplicates introduced by clipping through vertices
    cleaned = []
    for p in poly:
        if not cleaned or p != cleaned[-1]:
            cleaned.append(p)
    if len(cleaned) > 1 and cleaned[0] == cleaned[-1]:
        cleaned.pop()
    return RegionOmega(term=term, vertices=tuple(cleaned))


def map_T_AB(term: CorrelationTerm, x: float, y: float) -> tuple[float, ...]:
    """Component maps u_j = (3/pi^2) B_j / (y (A_j y - B_j x)); rejects y<=0 or
    nonpositive denominators (points outside the term's region)."""
    x = float(x)
    y = float(y)
    if y <= 0:
        raise InputValidationError(f"singular input: need y > 0, got y={y}")
    out = []
    for a, b in zip(term.A, term.B):
        den = a * y - b * x
        if den <= 0:
            raise InputValidationError(
                f"singular input: {a}*y - {b}*x = {den} is not positive at ({x}, {y})"
            )
        out.append((3.0 / PI_SQUARED) * b / (y * den))
    return tuple(out)


def map_T_forward(u: Sequence[float]) -> tuple[float, ...]:
    """Consecutive differences with the last coordinate preserved."""
    v = [float(t) for t in u]
    if not v:
        raise InputValidationError("need at least one coordinate")
    return tuple(v[i] - v[i + 1] for i in range(len(v) - 1)) + (v[-1],)


def map_T_inverse(u: Sequence[float]) -> tuple[float, ...]:
    """Suffix sums: the inverse of map_T_forward."""
    v = [float(t) for t in u]
    if not v:
        raise InputValidationError("need at least one coordinate")
    out = []
    acc = 0.0
    for t in reversed(v):
        acc += t
        out.append(acc)
    return tuple(reversed(out))


def _validate_orthant_box(box: BoxRegion, scale: float) -> None:
    if not box.in_positive_orthant:
        raise InputValidationError("box must lie in the positive orthant (lo >= 0 per axis)")
    for _, hi in box.intervals:
        if hi > scale:
            raise InputValidationError(
                f"box upper bound {hi} exceeds the scale {scale}; enlarge the scale"
            )


def enumerate_terms(
    nu: int,
    Lambda: float,
    box: BoxRegion,
    *,
    max_scale: float = DEFAULT_MAX_SCALE,
) -> list[CorrelationTerm]:
    """All coefficient pairs that can contribute nonzero area for this box.

    Enumerates coprime (A_j, B_j) up to the hard cap ceil(nu c^2),
    c = pi^2 Lambda / 3, then prunes:

      (a) every component map is >= (3/pi^2) B_j on the region (all
          denominators are at most 1), so B_j is bounded via the suffix
          sums of the box's upper corners (the inverse difference map);
      (b) per-axis feasibility forces A_j - B_j <= c;
      (c) terms whose region polygon has exactly zero area are dropped.

    The result is sorted lexicographically by (A, B). Returns [] when
    c < 1, where no term exists at all.
    """
    if not isinstance(nu, int) or nu < 2:
        raise InputValidationError(f"nu must be an integer >= 2, got {nu}")
    Lambda = float(Lambda)
    if not (Lambda > 0 and math.isfinite(Lambda)):
        raise InputValidationError(f"Lambda must be positive, got {Lambda}")
    if Lambda > max_scale:
        raise SizingError(
            f"Lambda={Lambda} exceeds the configured maximum {max_scale}; "
            "term count grows like Lambda^(4(nu-1)) — raise max_scale explicitly to proceed"
        )
    if box.nu != nu:
        raise InputValidationError(f"box has nu={box.nu}, expected {nu}")
    _validate_orthant_box(box, Lambda)

    c = PI_SQUARED * Lambda / 3.0
    if c < 1.0:
        return []
    cap = math.ceil(nu * c * c)
    coef = 3.0 / PI_SQUARED

    his = [hi for _, hi in box.intervals]
    suffix = [0.0] * (nu - 1)
    acc = 0.0
    for j in reversed(range(nu - 1)):
        acc += his[j]
        suffix[j] = acc

    slack = math.floor(c)  # max feasible A_j - B_j (see (b))
    axis_pairs: list[list[tuple[int, int]]] = []
    for j in range(nu - 1):
        bmax = min(cap, int(suffix[j] / coef) + 1)
        while bmax > 0 and coef * bmax > suffix[j]:
            bmax -= 1
        pairs = [
            (a, b)
            for b in range(1, bmax + 1)
            for a in range(1, min(cap, b + slack) + 1)
            if math.gcd(a, b) == 1
        ]
        if not pairs:
            return []
        axis_pairs.append(pairs)

    total = math.prod(len(p) for p in axis_pairs)
    if total > _MAX_CANDIDATES:
        raise SizingError(
            f"term enumeration would examine {total} candidates; shrink the box or scale"
        )

    out = []
    for combo in itertools.product(*axis_pairs):
        term = CorrelationTerm(
            A=tuple(a for a, _ in combo), B=tuple(b for _, b in combo), Lambda=Lambda
        )
        if not omega_region(term).is_empty:
            out.append(term)
    out.sort(key=lambda t: (t.A, t.B))
    return out


@dataclass(frozen=True)
class AreaResult:
    """Certified area: lower <= truth <= upper, value the midpoint."""

    value: float
    error_bound: float
    lower: float
    upper: float


def term_area(
    term: CorrelationTerm,
    box: BoxRegion,
    tol: float,
    *,
    max_depth: int = _MAX_DEPTH,
) -> AreaResult:
    """Area of the term's region intersected with the box preimage, within tol.

    Adaptive quadtree on the unit square: a cell is counted inside when every
    constraint holds over the whole cell (interval certification), discarded
    when some constraint fails over the whole cell, and split otherwise;
    iteration stops once total undecided area is at most tol. The returned
    bracket [lower, upper] contains the true area.

    Raises ConvergenceError, carrying the partial bracket, if the depth or
    cell budget is exhausted first.
    """
    if box.nu != term.nu:
        raise InputValidationError(f"box has nu={box.nu}, term has nu={term.nu}")
    _validate_orthant_box(box, math.inf)
    tol = float(tol)
    if not (tol > 0 and math.isfinite(tol)):
        raise InputValidationError(f"tol must be positive, got {tol}")

    d = term.nu - 1
    A = [float(v) for v in term.A]
    B = [float(v) for v in term.B]
    num = [(3.0 / PI_SQUARED) * b for b in B]
    lob = [lo for lo, _ in box.intervals]
    hib = [hi for _, hi in box.intervals]
    ymin = 3.0 / (PI_SQUARED * term.Lambda)
    pad = _CERT_PAD

    x0 = np.array([0.0])
    y0 = np.array([0.0])
    inside = 0.0
    depth = 0
    processed = 0
    while True:
        s = 2.0**-depth
        cell = s * s
        n = len(x0)
        processed += n
        in_count = 0
        undecided_x: list[np.ndarray] = []
        undecided_y: list[np.ndarray] = []
        # classify in fixed-size chunks so level width is memory-bounded
        for start in range(0, n, _CELL_CHUNK):
            sl = slice(start, min(start + _CELL_CHUNK, n))
            xs = x0[sl]
            ys = y0[sl]
            x1 = xs + s
            y1 = ys + s
            in_all = ys >= ymin + pad
            out_any = y1 <= ymin - pad
            in_all &= (ys - x1) >= pad
            out_any |= (y1 - xs) <= -pad
            wlo = np.empty((d, len(xs)))
            whi = np.empty((d, len(xs)))
            with np.errstate(divide="ignore", invalid="ignore"):
                for j in range(d):
                    Llo = A[j] * ys - B[j] * x1
                    Lhi = A[j] * y1 - B[j] * xs
                    in_all &= (Llo > pad) & (Lhi <= 1.0 - pad)
                    out_any |= (Lhi <= -pad) | (Llo >= 1.0 + pad)
                    valid = (Llo > pad) & (ys > 0.0)
                    wlo[j] = np.where(valid, num[j] / (y1 * Lhi), -np.inf)
                    whi[j] = np.where(valid, num[j] / (ys * Llo), np.inf)
            for j in range(d):
                if j < d - 1:
                    flo = wlo[j] - whi[j + 1]
                    fhi = whi[j] - wlo[j + 1]
                else:
                    flo = wlo[j]
                    fhi = whi[j]
                in_all &= (flo >= lob[j] + pad) & (fhi <= hib[j] - pad)
                out_any |= (fhi < lob[j] - pad) | (flo > hib[j] + pad)
            in_count += int(np.count_nonzero(in_all))
            und = ~(in_all | out_any)
            if und.any():
                undecided_x.append(xs[und])
                undecided_y.append(ys[und])

        inside += in_count * cell
        m = sum(len(p) for p in undecided_x)
        boundary = m * cell
        if boundary <= tol or m == 0:
            return AreaResult(
                value=inside + 0.5 * boundary,
                error_bound=0.5 * boundary,
                lower=inside,
                upper=inside + boundary,
            )
        if depth >= max_depth or processed + 4 * m > _TOTAL_CELL_BUDGET:
            raise ConvergenceError(
                f"area quadrature stalled at depth {depth} "
                f"({processed} cells examined): undecided area "
                f"{boundary:.3e} exceeds tol {tol:.3e}",
                lower=inside,
                upper=inside + boundary,
            )
        h = s * 0.5
        x0 = np.empty(4 * m)
        y0 = np.empty(4 * m)
        off = 0
        for xs, ys in zip(undecided_x, undecided_y):
            k = 4 * len(xs)
            x0[off + 0 : off + k : 4] = xs
            y0[off + 0 : off + k : 4] = ys
            x0[off + 1 : off + k : 4] = xs + h
            y0[off + 1 : off + k : 4] = ys
            x0[off + 2 : off + k : 4] = xs
            y0[off + 2 : off + k : 4] = ys + h
            x0[off + 3 : off + k : 4] = xs + h
            y0[off + 3 : off + k : 4] = ys + h
            off += k
        depth += 1


@dataclass(frozen=True)
class MonteCarloArea:
    value: float
    std_error: float
    samples: int
    hits: int


def monte_carlo_term_area(
    term: CorrelationTerm, box: BoxRegion, samples: int, seed: int
) -> MonteCarloArea:
    """Plain Monte-Carlo estimate of the same area, for cross-checking."""
    if box.nu != term.nu:
        raise InputValidationError(f"box has nu={box.nu}, term has nu={term.nu}")
    samples = int(samples)
    if samples < 1:
        raise InputValidationError("samples must be positive")
    d = term.nu - 1
    num = [(3.0 / PI_SQUARED) * b for b in term.B]
    ymin = 3.0 / (PI_SQUARED * term.Lambda)
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left > 0:
        m = min(left, 1 << 20)
        left -= m
        xs = rng.random(m)
        ys = rng.random(m)
        ok = (ys >= ymin) & (xs <= ys)
        w = []
        with np.errstate(divide="ignore", invalid="ignore"):
            for j in range(d):
                L = term.A[j] * ys - term.B[j] * xs
                ok &= (L > 0) & (L <= 1.0)
                w.append(num[j] / (ys * L))
            for j, (lo, hi) in enumerate(box.intervals):
                f = w[j] - w[j + 1] if j < d - 1 else w[j]
                ok &= (f >= lo) & (f < hi)
        hits += int(np.count_nonzero(ok))
    p = hits / samples
    return MonteCarloArea(
        value=p,
        std_error=math.sqrt(p * (1.0 - p) / samples),
        samples=samples,
        hits=hits,
    )


@dataclass(frozen=True)
class NuLevelResult:
    """The limiting nu-level measure of a box, with a certified error bound."""

    nu: int
    box: BoxRegion
    value: float
    error_bound: float
    term_count: int
    tol: float


def _area_task(args) -> AreaResult:
    term, box, tol = args
    return term_area(term, box, tol)


def nu_level_measure(
    nu: int,
    box: BoxRegion,
    tol: float,
    *,
    workers: int = 1,
    max_scale: float = DEFAULT_MAX_SCALE,
) -> NuLevelResult:
    """Limiting nu-level measure of a positive-orthant box, to within tol.

    The box scale is its largest upper corner; regions do not change when
    the scale grows beyond that, so this choice is canonical. Twice the sum
    of certified term areas is returned, each term given an equal share of
    the error budget and summed in lexicographic term order. For a box with
    negative coordinates, apply the reversal symmetry of the correlation
    measure first.
    """
    if not isinstance(nu, int) or nu < 2:
        raise InputValidationError(f"nu must be an integer >= 2, got {nu}")
    if box.nu != nu:
        raise InputValidationError(f"box has nu={box.nu}, expected {nu}")
    tol = float(tol)
    if not (tol > 0 and math.isfinite(tol)):
        raise InputValidationError(f"tol must be positive, got {tol}")
    scale = max(hi for _, hi in box.intervals)
    terms = enumerate_terms(nu, scale, box, max_scale=max_scale)
    if not terms:
        return NuLevelResult(
            nu=nu, box=box, value=0.0, error_bound=0.0, term_count=0, tol=tol
        )
    per_tol = tol / len(terms)
    if workers > 1 and len(terms) > 1:
        tasks = [(t, box, per_tol) for t in terms]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            areas = list(pool.map(_area_task, tasks))
    else:
        areas = [term_area(t, box, per_tol) for t in terms]
    value = 2.0 * math.fsum(a.value for a in areas)
    error = 2.0 * math.fsum(a.error_bound for a in areas)
    return NuLevelResult(
        nu=nu, box=box, value=value, error_bound=error, term_count=len(terms), tol=tol
    )
