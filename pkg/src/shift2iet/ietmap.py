"""Piecewise-affine approximants of the interval map conjugate to the shift.

Level n splits the unit interval into p(n) equal right-open pieces, one per
sorted length-n factor, and sends the piece of a factor onto the interval of
its one-letter-shorter suffix at level n-1.  All endpoints are exact rationals;
floats appear only in reports.  As n grows the slope p(n)/p(n-1) tends to 1 and
the graphs converge, away from the discontinuities, to the interval exchange
the shift codes.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import NamedTuple

from .errors import InputError
from .language import FactorTable
from .partition import PartitionResult


class AffinePiece(NamedTuple):
    factor: str
    source_index: int   # i: source is [i/p(n), (i+1)/p(n))
    target_index: int   # j: image is [j/p(n-1), (j+1)/p(n-1))


@dataclass
class PiecewiseAffineMap:
    level: int
    source_count: int   # p(n)
    target_count: int   # p(n-1)
    pieces: list[AffinePiece]

    @property
    def slope(self) -> Fraction:
        return Fraction(self.source_count, self.target_count)

    def source_interval(self, i: int) -> tuple[Fraction, Fraction]:
        return Fraction(i, self.source_count), Fraction(i + 1, self.source_count)

    def target_interval(self, j: int) -> tuple[Fraction, Fraction]:
        return Fraction(j, self.target_count), Fraction(j + 1, self.target_count)

    def evaluate(self, x) -> Fraction:
        """Exact value at a point of [0, 1)."""
        x = Fraction(x)
        if not 0 <= x < 1:
            raise InputError("point outside [0, 1)")
        i = int(x * self.source_count)
        piece = self.pieces[i]
        return Fraction(piece.target_index, self.target_count) + (
            x - Fraction(i, self.source_count)
        ) * self.slope

    def discontinuities(self) -> list[Fraction]:
        """Internal breakpoints where the left limit differs from the next value.

        The junction i/p(n) is continuous exactly when the target index steps
        up by one across it, because slope * source length = target length.
        """
        jumps = []
        for i in range(1, self.source_count):
            if self.pieces[i - 1].target_index + 1 != self.pieces[i].target_index:
                jumps.append(Fraction(i, self.source_count))
        return jumps


def build_approximant(table: FactorTable, n: int) -> PiecewiseAffineMap:
    """Level-n approximant read off the sorted factor lists."""
    if not 2 <= n <= table.n_max:
        raise InputError(f"approximant level must be within 2..{table.n_max}")
    pieces = [
        AffinePiece(v, i, table.index_of(n - 1, v[1:]))
        for i, v in enumerate(table.factors(n))
    ]
    return PiecewiseAffineMap(n, table.complexity(n), table.complexity(n - 1), pieces)


def block_affinity_check(amap: PiecewiseAffineMap, partition: PartitionResult) -> dict[int, bool]:
    """Is the map a single affine function over each emitted cylinder's block?

    The block of a cylinder word is the run of pieces whose factors extend it.
    One affine function over the whole block means: contiguous run and target
    index stepping by one at every internal junction (exact rational check).
    """
    longest = max((len(c.word) for c in partition.cylinders), default=0)
    if amap.level < longest:
        raise InputError("approximant level smaller than the longest cylinder word")
    verdict: dict[int, bool] = {}
    for cyl in partition.cylinders:
        indices = [i for i, piece in enumerate(amap.pieces) if piece.factor.startswith(cyl.word)]
        ok = bool(indices)
        ok = ok and indices == list(range(indices[0], indices[0] + len(indices)))
        ok = ok and all(
            amap.pieces[i + 1].target_index == amap.pieces[i].target_index + 1
            for i in indices[:-1]
        )
        verdict[cyl.k] = ok
    return verdict


class LimitInterval(NamedTuple):
    k: int
    word: str
    left: Fraction          # estimated left endpoint of the cylinder's interval
    length: Fraction        # estimated mass of the cylinder
    image_left: Fraction    # estimated left endpoint of the shifted cylinder
    translation: Fraction   # image_left - left


@dataclass
class LimitIntervalSet:
    level: int
    intervals: list[LimitInterval]

    @property
    def residual(self) -> Fraction:
        return 1 - sum((iv.length for iv in self.intervals), Fraction(0))


def limit_intervals(table: FactorTable, partition: PartitionResult, n: int) -> LimitIntervalSet:
    """Estimated interval data for every emitted cylinder, counted at length n.

    The left endpoint is the total mass of the same-length factors sorted
    before the cylinder word; the image endpoint does the same for the suffix
    one level down.  Their difference is the translation the limit map applies
    on that cylinder.
    """
    if not 2 <= n <= table.n_max:
        raise InputError(f"counting length must be within 2..{table.n_max}")
    longest = max((len(c.word) for c in partition.cylinders), default=0)
    if n < longest:
        raise InputError("counting length smaller than the longest cylinder word")
    intervals = []
    for cyl in partition.cylinders:
        lo, hi = table.prefix_range(cyl.word, n)
        left = Fraction(lo, table.complexity(n))
        length = Fraction(hi - lo, table.complexity(n))
        lo2, _ = table.prefix_range(cyl.word[1:], n - 1)
        image_left = Fraction(lo2, table.complexity(n - 1))
        intervals.append(LimitInterval(cyl.k, cyl.word, left, length, image_left, image_left - left))
    return LimitIntervalSet(n, intervals)


@dataclass
class ConvergenceReport:
    coarse_level: int
    fine_level: int
    grid_size: int
    sup_difference: float
    excluded_fraction: Fraction
    compared_points: int


def convergence_report(table: FactorTable, n1: int, n2: int, grid_size: int = 1000) -> ConvergenceReport:
    """Largest gap between two approximants on a grid, off the jump neighborhoods.

    Grid points closer than 1/p(n1) to a discontinuity of either map are
    excluded; the excluded share of the grid is reported next to the sup.
    """
    if not 2 <= n1 <= n2 <= table.n_max:
        raise InputError("levels must satisfy 2 <= n1 <= n2 <= table depth")
    if grid_size < 1:
        raise InputError("grid_size must be >= 1")
    coarse = build_approximant(table, n1)
    fine = build_approximant(table, n2)
    jumps = sorted(set(coarse.discontinuities()) | set(fine.discontinuities()))
    radius = Fraction(1, coarse.source_count)
    sup = Fraction(0)
    excluded = 0
    for g in range(grid_size):
        x = Fraction(g, grid_size)
        if _near(jumps, x, radius):
            excluded += 1
            continue
        gap = abs(coarse.evaluate(x) - fine.evaluate(x))
        if gap > sup:
            sup = gap
    return ConvergenceReport(
        n1, n2, grid_size, float(sup), Fraction(excluded, grid_size), grid_size - excluded
    )


def _near(sorted_points, x, radius) -> bool:
    pos = bisect_left(sorted_points, x)
    for q in sorted_points[max(0, pos - 1) : pos + 1]:
        if abs(x - q) < radius:
            return True
    return False


class Cluster(NamedTuple):
    center: float
    size: int
    low: float
    high: float


def _cluster_points(source) -> list:
    """Flatten maps, limit-interval sets, or bare numbers into one point list."""
    if isinstance(source, PiecewiseAffineMap):
        return list(source.discontinuities())
    if isinstance(source, LimitIntervalSet):
        points = []
        for iv in source.intervals:
            points.append(iv.left)
            points.append(iv.left + iv.length)
        return points
    if isinstance(source, Real):
        return [source]
    if isinstance(source, str):
        raise InputError("cannot read discontinuity points from a string")
    try:
        items = list(source)
    except TypeError:
        raise InputError("cannot read discontinuity points from this input") from None
    points = []
    for item in items:
        points.extend(_cluster_points(item))
    return points


def accumulation_clusters(source, epsilon: float, min_size: int = 5) -> list[Cluster]:
    """Single-linkage clusters of discontinuity points at scale epsilon.

    The input may be one approximant, several of them, a limit-interval set,
    or bare points; jump locations are pooled into one set and exact
    duplicates collapse.  Sorted points are chained while consecutive gaps
    stay within epsilon, and chains shorter than min_size are dropped.  Dense
    chains that survive mark accumulation points of the limit map's
    discontinuity set, a finite-level stand-in for a set the limit theory
    only describes asymptotically.
    """
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if min_size < 1:
        raise InputError("min_size must be >= 1")
    values = sorted(float(p) for p in set(_cluster_points(source)))
    clusters: list[Cluster] = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > epsilon:
            chunk = values[start:i]
            if len(chunk) >= min_size:
                clusters.append(
                    Cluster(sum(chunk) / len(chunk), len(chunk), chunk[0], chunk[-1])
                )
            start = i
    return clusters


def accumulation_diagnostic(
    table: FactorTable, n: int, epsilon: float, min_size: int = 5
) -> list[Cluster]:
    """Accumulation clusters at level n, pooling the coarse/fine level pair.

    A single level cannot separate an accumulation point from a handful of
    nearby jumps: each junction contributes one point and the chains stay
    short.  Pooling the discontinuities of the same coarse/fine pair the
    convergence report compares (n//2 against n) doubles up the chains that
    shrink toward an accumulation point while persistent isolated jumps
    contribute only one point per level and stay below min_size.
    """
    if not 2 <= n <= table.n_max:
        raise InputError(f"diagnostic level must be within 2..{table.n_max}")
    levels = sorted({max(2, n // 2), n})
    maps = [build_approximant(table, m) for m in levels]
    return accumulation_clusters(maps, epsilon, min_size)


def non_injectivity_witnesses(
    amap: PiecewiseAffineMap,
    clusters: list[Cluster],
    grid_size: int = 1000,
    flank: float = 0.02,
    limit: int = 32,
) -> list[tuple[float, float]]:
    """Grid point pairs near different clusters yet mapped almost together.

    A pair x < x' with |T(x) - T(x')| below one target cell, where x and x'
    sit within `flank` of different clusters' hulls, is numeric evidence that
    the limit map glues the two accumulation regions together and so fails
    injectivity there.  At most `limit` pairs are returned, ordered by
    position; this is an observation aid, not a proof.
    """
    if grid_size < 1:
        raise InputError("grid_size must be >= 1")
    if len(clusters) < 2:
        return []
    tol = Fraction(1, amap.target_count)
    samples = []
    for cl in clusters:
        lo = cl.low - flank
        hi = cl.high + flank
        pts = [
            (x, amap.evaluate(x))
            for g in range(grid_size)
            if lo <= (x := Fraction(g, grid_size)) <= hi
        ]
        samples.append(pts)
    pairs = []
    for a in range(len(samples)):
        for b in range(a + 1, len(samples)):
            for x, y in samples[a]:
                for x2, y2 in samples[b]:
                    if abs(y - y2) < tol:
                        pairs.append((float(min(x, x2)), float(max(x, x2))))
    pairs.sort()
    return pairs[:limit]
