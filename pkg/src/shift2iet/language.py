"""Factor language of a primitive substitution shift.

The factor table holds, for each length n <= n_max, the sorted list of words of
that length occurring in the shift, together with left/right extension sets.
Everything else in the package (special factors, cylinder partitions, measure
estimates, affine approximants) reads from this table.
"""

from __future__ import annotations

from bisect import bisect_left

from .errors import InputError
from .substitution import Substitution


class FactorTable:
    """Sorted factor lists per length plus extension data.

    Lexicographic order comes from the alphabet's letter order.  Extension sets
    (which letters may precede/follow a factor inside the shift) are known for
    lengths strictly below n_max, because they are read off the next level.
    """

    def __init__(self, substitution: Substitution, n_max: int, levels, left_ext, right_ext):
        self.substitution = substitution
        self.alphabet = substitution.alphabet
        self.n_max = n_max
        self._levels = levels
        self._left_ext = left_ext
        self._right_ext = right_ext
        self._index = [None] * (n_max + 1)

    # -- raw access ---------------------------------------------------------

    def factors(self, n: int) -> tuple[str, ...]:
        """Sorted tuple of the length-n factors."""
        self._check_level(n)
        return self._levels[n]

    def complexity(self, n: int) -> int:
        """Number of distinct length-n factors."""
        self._check_level(n)
        return len(self._levels[n])

    def is_factor(self, word: str) -> bool:
        if word == "":
            return True
        n = len(word)
        if n > self.n_max:
            raise InputError(f"word longer than table depth {self.n_max}")
        lo, hi = self.prefix_range(word, n)
        return hi > lo

    def index_of(self, n: int, word: str) -> int:
        """Position of a factor inside the sorted level n."""
        self._check_level(n)
        if self._index[n] is None:
            self._index[n] = {w: i for i, w in enumerate(self._levels[n])}
        try:
            return self._index[n][word]
        except KeyError:
            raise InputError(f"{word!r} is not a length-{n} factor") from None

    def left_extensions(self, word: str) -> frozenset[str]:
        """Letters x with x+word a factor.  Known for len(word) < n_max."""
        return self._extensions(self._left_ext, word)

    def right_extensions(self, word: str) -> frozenset[str]:
        """Letters x with word+x a factor.  Known for len(word) < n_max."""
        return self._extensions(self._right_ext, word)

    # -- special factors ----------------------------------------------------

    def left_special(self, n: int) -> tuple[str, ...]:
        """Length-n factors with at least two left extensions, sorted."""
        self._check_extension_level(n)
        ext = self._left_ext
        return tuple(w for w in self._levels[n] if len(ext[w]) >= 2)

    def right_special(self, n: int) -> tuple[str, ...]:
        """Length-n factors with at least two right extensions, sorted."""
        self._check_extension_level(n)
        ext = self._right_ext
        return tuple(w for w in self._levels[n] if len(ext[w]) >= 2)

    def left_special_count(self, n: int) -> int:
        return len(self.left_special(n))

    def right_special_count(self, n: int) -> int:
        return len(self.right_special(n))

    def persistent_left_special(self, n: int, margin: int | None = None) -> tuple[str, ...]:
        """Left special factors of length n that stay on a left special branch.

        Keeps the length-n left special factors that are prefixes of some left
        special factor of length n + margin.  Transient branches die out as the
        margin grows; the survivors approximate the infinite left special words.
        Default margin is half the table depth.
        """
        if margin is None:
            margin = self.n_max // 2
        if margin < 1:
            raise InputError("margin must be >= 1")
        if n + margin > self.n_max - 1:
            raise InputError("margin too large: extension data stops below the table depth")
        deep = self.left_special(n + margin)
        heads = {w[:n] for w in deep}
        return tuple(w for w in self.left_special(n) if w in heads)

    # -- restricted complexity ----------------------------------------------

    def prefix_range(self, prefix: str, n: int) -> tuple[int, int]:
        """Index range [lo, hi) of the length-n factors starting with the prefix."""
        self._check_level(n)
        if len(prefix) > n:
            raise InputError("prefix longer than the requested length")
        code = self.alphabet.code
        level = self._levels[n]
        needle = code(prefix)
        lo = bisect_left(level, needle, key=code)
        hi = bisect_left(level, needle + (len(self.alphabet),), key=code)
        return lo, hi

    def restricted_complexity(self, prefix: str, n: int) -> int:
        """Number of length-n factors that start with the given word.

        A word that is not a factor gives 0, not an error.
        """
        lo, hi = self.prefix_range(prefix, n)
        return hi - lo

    # -- internals -----------------------------------------------------------

    def _check_level(self, n: int):
        if not 1 <= n <= self.n_max:
            raise InputError(f"length {n} outside table range 1..{self.n_max}")

    def _check_extension_level(self, n: int):
        if not 1 <= n <= self.n_max - 1:
            raise InputError(
                f"extension data exists for lengths 1..{self.n_max - 1}, got {n}"
            )

    def _extensions(self, ext: dict, word: str) -> frozenset[str]:
        if not 1 <= len(word) <= self.n_max - 1:
            raise InputError("extensions are known for lengths 1..n_max-1 only")
        try:
            return ext[word]
        except KeyError:
            raise InputError(f"{word!r} is not a factor") from None


def build_factor_table(substitution: Substitution, n_max: int) -> FactorTable:
    """Harvest the factors of a primitive substitution shift up to length n_max.

    Iterates the substitution on every letter and collects length-n_max windows
    (all factors while an iterate is still short), stopping once one full extra
    iteration adds nothing.  Shorter levels are then derived downward: by
    prolongability, level n is exactly the set of prefixes and suffixes of
    level n+1.
    """
    if n_max <= 0:
        raise InputError("n_max must be >= 1")
    prim = substitution.primitivity()
    if not prim.primitive:
        raise InputError("factor table needs a primitive substitution")
    if max(len(w) for w in substitution.images.values()) == 1:
        raise InputError("substitution images never grow; the shift is a finite orbit")

    top: set[str] = set()
    short: set[str] = set()

    def harvest(word: str):
        if len(word) >= n_max:
            for i in range(len(word) - n_max + 1):
                top.add(word[i : i + n_max])
        else:
            for n in range(1, len(word) + 1):
                for i in range(len(word) - n + 1):
                    short.add(word[i : i + n])

    words = list(substitution.alphabet.letters)
    for w in words:
        harvest(w)
    while True:
        words = [substitution.apply(w) for w in words]
        before = (len(top), len(short))
        for w in words:
            harvest(w)
        if (len(top), len(short)) == before and all(len(w) >= n_max for w in words):
            break

    code = substitution.alphabet.code
    levels: list[tuple[str, ...]] = [()] * (n_max + 1)
    levels[n_max] = tuple(sorted(top, key=code))
    by_len: dict[int, set[str]] = {}
    for w in short:
        by_len.setdefault(len(w), set()).add(w)
    for n in range(n_max - 1, 0, -1):
        level = {w[:-1] for w in levels[n + 1]}
        level.update(w[1:] for w in levels[n + 1])
        level.update(by_len.get(n, ()))
        levels[n] = tuple(sorted(level, key=code))

    left_ext: dict[str, set[str]] = {w: set() for n in range(1, n_max) for w in levels[n]}
    right_ext: dict[str, set[str]] = {w: set() for n in range(1, n_max) for w in levels[n]}
    for n in range(2, n_max + 1):
        for w in levels[n]:
            left_ext[w[1:]].add(w[0])
            right_ext[w[:-1]].add(w[-1])
    frozen_left = {w: frozenset(s) for w, s in left_ext.items()}
    frozen_right = {w: frozenset(s) for w, s in right_ext.items()}
    return FactorTable(substitution, n_max, levels, frozen_left, frozen_right)
