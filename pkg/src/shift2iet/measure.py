"""Cylinder measure estimates from factor counting.

The mass of a cylinder is approximated by the share of long factors that start
with its word.  The estimates are exact rationals; how far they are from being
shift-invariant is controlled by the number of left special factors, and that
defect is reported alongside the values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .language import FactorTable


def cylinder_measure_estimate(table: FactorTable, word: str, n: int) -> Fraction:
    """Share of length-n factors starting with the word, as an exact rational.

    The empty word gives 1.  Words that are not factors give 0.
    """
    if n < len(word):
        raise InputError("estimate needs n >= len(word)")
    return Fraction(table.restricted_complexity(word, n), table.complexity(n))


def invariance_defect(table: FactorTable, word: str, n: int) -> int:
    """How far the estimate at level n is from exact shift invariance.

    Counts the length-n factors that start with some one-letter extension of
    the word, minus the length-(n-1) factors starting with the word itself.
    The result is >= 0 and at most |alphabet| times the number of left special
    factors of length n-1.
    """
    if not 1 <= len(word) < n:
        raise InputError("defect needs 1 <= len(word) < n")
    if n > table.n_max:
        raise InputError(f"length {n} outside table range 1..{table.n_max}")
    extended = sum(
        table.restricted_complexity(x + word, n) for x in table.alphabet.letters
    )
    return extended - table.restricted_complexity(word, n - 1)


@dataclass
class MeasureTable:
    """Estimates for a set of cylinder words at a fixed counting length."""

    n_used: int
    entries: dict[str, Fraction]
    defects: dict[str, int]
    normalized_defect: Fraction
    letter_frequencies: dict[str, Fraction] = field(default_factory=dict)


def measure_table(table: FactorTable, words, n: int) -> MeasureTable:
    """Estimate the cylinders of the given words plus all single letters.

    The defect report covers every entry of length 1..n-1; the normalized
    defect is the largest defect divided by the number of length-(n-1) factors.
    """
    if not 2 <= n <= table.n_max:
        raise InputError(f"counting length must be within 2..{table.n_max}")
    wanted = list(dict.fromkeys(list(words) + list(table.alphabet.letters)))
    entries: dict[str, Fraction] = {"": Fraction(1)}
    defects: dict[str, int] = {}
    for w in wanted:
        if len(w) > n:
            raise InputError(f"word {w!r} longer than counting length {n}")
        entries[w] = cylinder_measure_estimate(table, w, n)
        if 1 <= len(w) < n:
            defects[w] = invariance_defect(table, w, n)
    worst = max(defects.values(), default=0)
    normalized = Fraction(worst, table.complexity(n - 1))
    letters = {a: entries[a] for a in table.alphabet.letters}
    return MeasureTable(n, entries, defects, normalized, letters)


def convergence_certificate(table: FactorTable, words, n: int, threshold: float = 0.02):
    """Compare estimates at n and n//2 and flag words that moved too much.

    Returns (certified, worst_gap, offenders).  For a primitive substitution the
    estimates converge, so the gap shrinking below the threshold certifies that
    the counting length is deep enough for the requested words.
    """
    if n // 2 < max((len(w) for w in words), default=1):
        raise InputError("n//2 too small for the requested words")
    gaps = {}
    for w in words:
        a = cylinder_measure_estimate(table, w, n)
        b = cylinder_measure_estimate(table, w, n // 2)
        gaps[w] = abs(a - b)
    worst = max(gaps.values(), default=Fraction(0))
    offenders = sorted(w for w, g in gaps.items() if g > threshold)
    return (worst <= threshold, worst, offenders)
