"""Machine-checkable invariant suite behind the `verify` subcommand.

Each check re-derives a contract of one module on the configured substitution
and reports a counterexample when it fails.  Output is deterministic: fixed
check order, no clocks, no randomness (sample sets are exhaustive small-word
enumerations).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, NamedTuple

from .coding import golden_coding, golden_iet, roundtrip_check
from .errors import InputError
from .fixtures import FIXTURE_RULES
from .ietmap import (
    accumulation_clusters,
    accumulation_diagnostic,
    block_affinity_check,
    build_approximant,
    convergence_report,
    limit_intervals,
)
from .language import FactorTable, build_factor_table
from .measure import cylinder_measure_estimate, invariance_defect, measure_table
from .partition import refine
from .substitution import Substitution


class CheckResult(NamedTuple):
    module: str
    name: str
    ok: bool
    detail: str


@dataclass
class VerificationReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def log_text(self) -> str:
        lines = []
        for c in self.checks:
            if c.ok:
                lines.append(f"ok {c.module}.{c.name}")
            else:
                lines.append(f"FAIL {c.module}.{c.name}: {c.detail}")
        good = sum(c.ok for c in self.checks)
        lines.append(f"passed {good}/{len(self.checks)}")
        return "\n".join(lines) + "\n"


def thread_cap() -> int:
    """Worker cap from SHIFT2IET_THREADS; absent or empty means 1."""
    raw = os.environ.get("SHIFT2IET_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"SHIFT2IET_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError("SHIFT2IET_THREADS must be >= 1")
    return value


def run_verification(
    substitution: Substitution,
    n_max: int,
    depth_cap: int,
    measure_level: int | None = None,
    approximant_level: int | None = None,
    grid_size: int = 1000,
    threads: int | None = None,
) -> VerificationReport:
    """Run every module's invariant suite on one substitution."""
    table = build_factor_table(substitution, n_max)
    if measure_level is None:
        measure_level = n_max
    if approximant_level is None:
        approximant_level = min(100, n_max)
    partition = refine(table, depth_cap)
    if threads is None:
        threads = thread_cap()

    groups: list[tuple[str, Callable[[], list[CheckResult]]]] = [
        ("substitution", lambda: _substitution_checks(substitution)),
        ("language", lambda: _language_checks(table)),
        ("partition", lambda: _partition_checks(table, depth_cap, measure_level)),
        ("measure", lambda: _measure_checks(table, partition, measure_level)),
        ("ietmap", lambda: _ietmap_checks(table, partition, approximant_level, grid_size)),
        ("coding", lambda: _coding_checks(substitution, n_max)),
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda g: g[1](), groups))
    else:
        results = [fn() for _, fn in groups]
    checks = [c for group in results for c in group]
    return VerificationReport(checks)


def _check(module: str, name: str, ok: bool, detail: str = "") -> CheckResult:
    return CheckResult(module, name, bool(ok), "" if ok else detail)


# -- substitution ------------------------------------------------------------


def _substitution_checks(sub: Substitution) -> list[CheckResult]:
    out = []
    letters = sub.alphabet.letters
    words = [""] + ["".join(p) for k in (1, 2) for p in product(letters, repeat=k)]
    bad = next(
        ((u, v) for u in words for v in words if sub.apply(u + v) != sub.apply(u) + sub.apply(v)),
        None,
    )
    out.append(_check("substitution", "morphism-law", bad is None, f"split at {bad}"))

    mat = sub.incidence_matrix()
    cols = [int(mat[:, j].sum()) for j in range(len(letters))]
    lens = [len(sub.images[a]) for a in letters]
    out.append(
        _check("substitution", "incidence-column-sums", cols == lens, f"{cols} != {lens}")
    )

    prim = sub.primitivity()
    out.append(
        _check(
            "substitution",
            "primitivity-witness",
            prim.primitive and prim.witness_power is not None and prim.witness_power >= 1,
            f"result {prim}",
        )
    )
    out.append(
        _check(
            "substitution",
            "primitivity-power-stable",
            sub.power(2).primitivity().primitive == prim.primitive,
            "square disagrees with the substitution itself",
        )
    )

    seed, power = sub.fixed_point_seed()
    iterate = sub.power(power)
    small = iterate.fixed_point_prefix(seed, 5)
    large = iterate.fixed_point_prefix(seed, 50)
    out.append(
        _check(
            "substitution",
            "fixed-point-prefix-nested",
            large.startswith(small),
            f"{small!r} not a prefix of the longer prefix",
        )
    )

    freqs = sub.perron_frequencies()
    total = sum(freqs.values())
    ok = abs(total - 1.0) <= 1e-12 and all(v > 0 for v in freqs.values())
    out.append(_check("substitution", "perron-normalized", ok, f"frequencies {freqs}"))
    return out


# -- language ----------------------------------------------------------------


def _language_checks(table: FactorTable) -> list[CheckResult]:
    out = []
    code = table.alphabet.code
    n_max = table.n_max

    ok, detail = True, ""
    for n in range(1, n_max + 1):
        level = table.factors(n)
        keys = [code(w) for w in level]
        if keys != sorted(keys) or len(set(level)) != len(level):
            ok, detail = False, f"level {n} not sorted/unique"
            break
    out.append(_check("language", "levels-sorted-unique", ok, detail))

    ok, detail = True, ""
    for n in range(2, n_max + 1):
        lower = set(table.factors(n - 1))
        for w in table.factors(n):
            if w[1:] not in lower or w[:-1] not in lower:
                ok, detail = False, f"{w!r} has a non-factor sub-word"
                break
        if not ok:
            break
    out.append(_check("language", "prefix-suffix-closure", ok, detail))

    growth = [table.complexity(n) for n in range(1, n_max + 1)]
    ok = all(a <= b for a, b in zip(growth, growth[1:]))
    out.append(_check("language", "complexity-nondecreasing", ok, f"counts {growth[:20]}..."))

    ok, detail = True, ""
    for n in range(1, n_max):
        for w in table.factors(n):
            if not table.left_extensions(w) or not table.right_extensions(w):
                ok, detail = False, f"{w!r} is not prolongable"
                break
        if not ok:
            break
    out.append(_check("language", "prolongable", ok, detail))

    ok, detail = True, ""
    for n in range(1, n_max):
        total_l = sum(len(table.left_extensions(w)) for w in table.factors(n))
        total_r = sum(len(table.right_extensions(w)) for w in table.factors(n))
        if total_l != table.complexity(n + 1) or total_r != table.complexity(n + 1):
            ok, detail = False, f"extension totals at {n}: {total_l}/{total_r} != p({n + 1})"
            break
    out.append(_check("language", "extension-totals", ok, detail))

    ok, detail = True, ""
    for n in range(2, min(n_max - 1, 40) + 1):
        lower = set(table.left_special(n - 1))
        for w in table.left_special(n):
            if w[:-1] not in lower:
                ok, detail = False, f"left special {w!r} with non-special prefix"
                break
        if not ok:
            break
    out.append(_check("language", "left-special-prefix-closure", ok, detail))

    ok, detail = True, ""
    alphabet = table.alphabet.letters
    for m in range(1, min(6, n_max - 1) + 1):
        for u in table.factors(m):
            for n in range(m + 1, min(20, n_max) + 1):
                spread = sum(table.restricted_complexity(a + u, n) for a in alphabet)
                base = table.restricted_complexity(u, n - 1)
                bound = len(alphabet) * table.left_special_count(n - 1)
                if not 0 <= spread - base <= bound:
                    ok, detail = False, f"u={u!r} n={n}: {spread}-{base} outside [0,{bound}]"
                    break
            if not ok:
                break
        if not ok:
            break
    out.append(_check("language", "left-extension-count-window", ok, detail))

    cap = min(n_max, 30)
    seed, power = table.substitution.fixed_point_seed()
    prefix = table.substitution.power(power).fixed_point_prefix(seed, 10 * cap * cap)
    ok, detail = True, ""
    for n in range(1, cap + 1):
        seen = {prefix[i : i + n] for i in range(len(prefix) - n + 1)}
        if seen != set(table.factors(n)):
            ok, detail = False, f"level {n}: table and brute-force prefix scan differ"
            break
    out.append(_check("language", "oracle-equivalence", ok, detail))

    total = sum(table.restricted_complexity(a, n_max) for a in alphabet)
    out.append(
        _check(
            "language",
            "restricted-complexity-total",
            total == table.complexity(n_max),
            f"letter blocks sum to {total}, p = {table.complexity(n_max)}",
        )
    )
    return out


# -- partition ----------------------------------------------------------------


def _partition_checks(table: FactorTable, depth_cap: int, measure_level: int) -> list[CheckResult]:
    out = []
    code = table.alphabet.code
    result = refine(table, depth_cap)

    ok = all(c.k == i + 1 for i, c in enumerate(result.cylinders))
    steps = [(c.step, code(c.word)) for c in result.cylinders]
    ok = ok and steps == sorted(steps)
    out.append(_check("partition", "emission-order", ok, "not ordered by (step, lex)"))

    ok, detail = True, ""
    for c in result.cylinders:
        u = c.word[1:]
        if table.left_extensions(u) != frozenset(c.word[0]):
            ok, detail = False, f"{c.word!r}: tail has extensions {set(table.left_extensions(u))}"
            break
        for j in range(1, len(u)):
            if u[:j] not in set(table.left_special(j)):
                ok, detail = False, f"{c.word!r}: inner prefix {u[:j]!r} not left special"
                break
        if not ok:
            break
    out.append(_check("partition", "emitted-shape", ok, detail))

    words = result.cylinder_words() + result.unresolved
    clash = next(
        (
            (w, v)
            for i, w in enumerate(words)
            for v in words[i + 1 :]
            if w.startswith(v) or v.startswith(w)
        ),
        None,
    )
    out.append(_check("partition", "pairwise-non-prefix", clash is None, f"prefix pair {clash}"))

    special = set(table.left_special(depth_cap - 1))
    ok = all(len(u) == depth_cap and u[1:] in special for u in result.unresolved)
    out.append(_check("partition", "unresolved-shape", ok, "unresolved word of wrong shape"))

    ok, detail = True, ""
    for d in range(2, depth_cap + 1):
        stage = refine(table, d)
        emitted = stage.cylinder_words()
        pending = set(stage.unresolved)
        lengths = sorted({len(w) for w in emitted})
        by_len = {m: {w for w in emitted if len(w) == m} for m in lengths}
        for f in table.factors(d):
            hits = sum(f[:m] in by_len[m] for m in lengths) + (f in pending)
            if hits != 1:
                ok, detail = False, f"depth {d}: {f!r} classified {hits} times"
                break
        if not ok:
            break
    out.append(_check("partition", "cover-at-each-depth", ok, detail))

    half = refine(table, max(2, depth_cap // 2))
    ok = result.cylinders[: len(half.cylinders)] == half.cylinders
    out.append(_check("partition", "monotone-in-depth", ok, "emission lists diverge"))

    mt = measure_table(table, result.cylinder_words(), measure_level)
    r_full = result.residual_mass(mt)
    r_half = half.residual_mass(mt)
    ok = 0 <= r_full <= r_half <= 1
    out.append(
        _check("partition", "residual-nonincreasing", ok, f"residuals {r_half} -> {r_full}")
    )

    ok, detail = True, ""
    for c in result.cylinders:
        if result.classify(c.word) != c.k:
            ok, detail = False, f"classify({c.word!r}) != {c.k}"
            break
        if len(c.word) < table.n_max - 1:
            ext = sorted(table.right_extensions(c.word), key=code)
            if any(result.classify(c.word + x) != c.k for x in ext):
                ok, detail = False, f"extension of {c.word!r} classified differently"
                break
    for u in result.unresolved:
        if result.classify(u) != "unresolved":
            ok, detail = False, f"classify({u!r}) != unresolved"
            break
    out.append(_check("partition", "classify-roundtrip", ok, detail))
    return out


# -- measure -------------------------------------------------------------------


def _measure_checks(table: FactorTable, partition, measure_level: int) -> list[CheckResult]:
    out = []
    n = measure_level
    letters = table.alphabet.letters
    mt = measure_table(table, partition.cylinder_words(), n)

    out.append(
        _check("measure", "empty-word-unity", mt.entries[""] == 1, f'entry("") = {mt.entries[""]}')
    )

    total = sum(mt.letter_frequencies.values())
    out.append(_check("measure", "letters-sum-one", total == 1, f"sum = {total}"))

    total2 = sum(cylinder_measure_estimate(table, u, n) for u in table.factors(2))
    out.append(_check("measure", "level2-sum-one", total2 == 1, f"sum = {total2}"))

    ok, detail = True, ""
    for u in list(letters) + partition.cylinder_words():
        if len(u) + 1 > min(n, table.n_max - 1):
            continue
        split = sum(
            cylinder_measure_estimate(table, u + x, n) for x in table.right_extensions(u)
        )
        whole = cylinder_measure_estimate(table, u, n)
        if split != whole:
            ok, detail = False, f"{u!r}: {whole} != sum of children {split}"
            break
    out.append(_check("measure", "splitting-identity", ok, detail))

    ok, detail = True, ""
    bound = len(letters) * table.left_special_count(n - 1)
    for m in range(1, min(6, n - 1) + 1):
        for u in table.factors(m):
            d = invariance_defect(table, u, n)
            if not 0 <= d <= bound:
                ok, detail = False, f"defect({u!r}) = {d} outside [0, {bound}]"
                break
        if not ok:
            break
    out.append(_check("measure", "defect-window", ok, detail))

    cap = Fraction(bound, table.complexity(n - 1))
    out.append(
        _check(
            "measure",
            "normalized-defect-bound",
            0 <= mt.normalized_defect <= cap,
            f"{mt.normalized_defect} outside [0, {cap}]",
        )
    )

    ok, detail = True, ""
    for m in range(2, n + 1):
        grow = table.complexity(m) - table.complexity(m - 1)
        limit = (len(letters) - 1) * table.left_special_count(m - 1)
        if not 0 <= grow <= limit:
            ok, detail = False, f"p({m})-p({m - 1}) = {grow} > {limit}"
            break
    out.append(_check("measure", "complexity-growth-bound", ok, detail))

    ok, detail = True, ""
    p_n = table.complexity(n)
    p_n1 = table.complexity(n - 1)
    sp = table.left_special_count(n - 1)
    for u in letters:
        shifted = sum(cylinder_measure_estimate(table, a + u, n) for a in letters)
        base = cylinder_measure_estimate(table, u, n - 1)
        upper = Fraction(len(letters) * sp, p_n)
        lower = -Fraction(
            table.restricted_complexity(u, n - 1) * (len(letters) - 1) * sp, p_n * p_n1
        )
        if not lower <= shifted - base <= upper:
            ok, detail = False, f"{u!r}: drift {shifted - base} outside [{lower}, {upper}]"
            break
    out.append(_check("measure", "shifted-estimate-window", ok, detail))

    ok, detail = True, ""
    for u in letters:
        a = cylinder_measure_estimate(table, u, n)
        b = cylinder_measure_estimate(table, u, n // 2)
        if abs(a - b) > Fraction(1, 20):
            ok, detail = False, f"{u!r} moved {float(abs(a - b)):.4f} between {n // 2} and {n}"
            break
    out.append(_check("measure", "letter-estimates-settled", ok, detail))
    return out


# -- ietmap ---------------------------------------------------------------------


def _ietmap_checks(table: FactorTable, partition, level: int, grid_size: int) -> list[CheckResult]:
    out = []
    amap = build_approximant(table, level)
    p_n, p_n1 = amap.source_count, amap.target_count

    out.append(
        _check(
            "ietmap",
            "piece-count",
            len(amap.pieces) == table.complexity(level),
            f"{len(amap.pieces)} pieces != p({level})",
        )
    )

    hits: dict[int, int] = {}
    for piece in amap.pieces:
        hits[piece.target_index] = hits.get(piece.target_index, 0) + 1
    ok, detail = True, ""
    for j, u in enumerate(table.factors(level - 1)):
        want = len(table.left_extensions(u)) if level - 1 < table.n_max else None
        if want is not None and hits.get(j, 0) != want:
            ok, detail = False, f"target {u!r} covered {hits.get(j, 0)} times, expected {want}"
            break
    ok = ok and sum(hits.values()) == p_n
    out.append(_check("ietmap", "target-coverage", ok, detail))

    grow_ok = p_n - p_n1 <= (len(table.alphabet) - 1) * table.left_special_count(level - 1)
    out.append(
        _check(
            "ietmap",
            "slope-window",
            amap.slope >= 1 and grow_ok,
            f"slope {amap.slope} vs special-factor budget",
        )
    )

    ok, detail = True, ""
    for idx in (0, len(amap.pieces) // 2, len(amap.pieces) - 1):
        piece = amap.pieces[idx]
        left, right = amap.source_interval(piece.source_index)
        mid = (left + right) / 2
        want_left = Fraction(piece.target_index, p_n1)
        if amap.evaluate(left) != want_left:
            ok, detail = False, f"piece {idx}: value at left endpoint off"
            break
        if amap.evaluate(mid) != want_left + (mid - left) * amap.slope:
            ok, detail = False, f"piece {idx}: midpoint off the affine line"
            break
    out.append(_check("ietmap", "evaluate-affine", ok, detail))

    jumps = set(amap.discontinuities())
    ok, detail = True, ""
    for i in range(1, p_n):
        x = Fraction(i, p_n)
        left_limit = Fraction(amap.pieces[i - 1].target_index + 1, p_n1)
        value = Fraction(amap.pieces[i].target_index, p_n1)
        if (left_limit != value) != (x in jumps):
            ok, detail = False, f"junction {x} misclassified"
            break
    out.append(_check("ietmap", "discontinuity-definition", ok, detail))

    block_level = max(level, min(partition.depth_cap, table.n_max))
    verdict = block_affinity_check(build_approximant(table, block_level), partition)
    bad = [k for k, good in verdict.items() if not good]
    out.append(
        _check("ietmap", "block-affinity", not bad, f"cylinders {bad} not affine blocks")
    )

    lis = limit_intervals(table, partition, block_level)
    ordered = sorted(lis.intervals, key=lambda iv: iv.left)
    ok = all(
        a.left + a.length <= b.left for a, b in zip(ordered, ordered[1:])
    ) and 0 <= lis.residual <= 1
    ok = ok and all(iv.translation == iv.image_left - iv.left for iv in lis.intervals)
    out.append(_check("ietmap", "limit-intervals-disjoint", ok, "overlap or bad residual"))

    report = convergence_report(table, max(2, level // 2), level, grid_size)
    same = convergence_report(table, level, level, grid_size)
    ok = (
        report.sup_difference >= 0
        and 0 <= report.excluded_fraction <= 1
        and report.compared_points == grid_size - report.excluded_fraction * grid_size
        and same.sup_difference == 0
    )
    out.append(
        _check(
            "ietmap",
            "convergence-report-accounting",
            ok,
            f"sup {report.sup_difference:.4f}, excluded {float(report.excluded_fraction):.3f}",
        )
    )

    merged = accumulation_clusters(amap, 1.0, 1)
    total = sum(c.size for c in merged)
    ok = total == len(jumps) and len(merged) <= 1
    diagnostic = accumulation_diagnostic(table, level, 0.02)
    ok = ok and all(c.size >= 5 and c.low <= c.center <= c.high for c in diagnostic)
    ok = ok and all(a.high < b.low for a, b in zip(diagnostic, diagnostic[1:]))
    out.append(
        _check(
            "ietmap",
            "cluster-accounting",
            ok,
            f"{total} jumps, {len(merged)} merged, {len(diagnostic)} diagnostic clusters",
        )
    )
    return out


# -- coding ----------------------------------------------------------------------


def _coding_checks(sub: Substitution, n_max: int) -> list[CheckResult]:
    fib_letters, fib_rules = FIXTURE_RULES["fibonacci"]
    if sub.alphabet.letters != tuple(fib_letters) or sub.images != fib_rules:
        return []
    out = []
    iet = golden_iet()
    coding = golden_coding()

    golden = iet.breakpoints[1]
    ok = iet.apply(0) == 1 - golden and iet.apply(golden) == 0
    out.append(_check("coding", "golden-endpoints", ok, "exchange moves endpoints wrongly"))

    from .coding import code_orbit, coded_factor_table

    ok, detail = True, ""
    for j in range(5):
        x = Fraction(j, 7)
        big = code_orbit(iet, coding, x, 31)
        if code_orbit(iet, coding, iet.apply(x), 30) != big[1:]:
            ok, detail = False, f"shift compatibility broken at {x}"
            break
    out.append(_check("coding", "shift-compatibility", ok, detail))

    points = [Fraction(j, 23) for j in range(23)]
    codes = [coding.sort_key(code_orbit(iet, coding, x, 40)) for x in points]
    ok = all(a <= b for a, b in zip(codes, codes[1:]))
    out.append(_check("coding", "order-compatibility", ok, "coding not monotone in the point"))

    levels = coded_factor_table(iet, coding, min(15, n_max))
    ok, detail = True, ""
    for n, words in levels.items():
        if len(words) != n + 1:
            ok, detail = False, f"coded complexity at {n} is {len(words)}, want {n + 1}"
            break
    out.append(_check("coding", "sturmian-complexity", ok, detail))

    result = roundtrip_check(sub, iet, coding, min(15, n_max))
    out.append(
        _check(
            "coding",
            "roundtrip",
            result.passed,
            f"mismatch {result.first_mismatch}, sup {result.sup_difference}",
        )
    )
    return out
