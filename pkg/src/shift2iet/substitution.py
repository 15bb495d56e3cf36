"""Substitutions on finite alphabets and their incidence data.

A substitution maps each letter to a non-empty word.  Everything downstream
(factor tables, cylinder partitions, affine approximants) is built from the
iterates of a primitive substitution, so this module also decides primitivity,
produces fixed-point prefixes, and computes Perron letter frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError


class Alphabet:
    """Ordered set of single-character letters.

    The declaration order of the letters defines lexicographic order for every
    word comparison in the package; host string order is never used.
    """

    def __init__(self, letters):
        letters = tuple(letters)
        if not letters:
            raise InputError("alphabet must contain at least one letter")
        if len(set(letters)) != len(letters):
            raise InputError("alphabet letters must be distinct")
        for c in letters:
            if not isinstance(c, str) or len(c) != 1:
                raise InputError("alphabet letters must be single characters")
        self.letters = letters
        self._index = {c: i for i, c in enumerate(letters)}

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, letter):
        return letter in self._index

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __repr__(self):
        return f"Alphabet({''.join(self.letters)!r})"

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise InputError(f"letter {letter!r} is not in the alphabet") from None

    def code(self, word: str) -> tuple[int, ...]:
        """Integer code of a word, usable as a lexicographic sort key."""
        idx = self._index
        try:
            return tuple(idx[c] for c in word)
        except KeyError as e:
            raise InputError(f"letter {e.args[0]!r} is not in the alphabet") from None


class PrimitivityResult(NamedTuple):
    primitive: bool
    witness_power: int | None


class FixedPointSeed(NamedTuple):
    seed: str
    power: int


@dataclass(frozen=True)
class Substitution:
    """Non-erasing morphism letter -> word over a fixed alphabet."""

    alphabet: Alphabet
    images: dict[str, str]

    def __post_init__(self):
        if set(self.images) != set(self.alphabet.letters):
            raise InputError("substitution must define exactly one image per letter")
        for a, w in self.images.items():
            if not w:
                raise InputError(f"image of {a!r} is empty; substitution must be non-erasing")
            for c in w:
                if c not in self.alphabet:
                    raise InputError(f"image of {a!r} uses letter {c!r} outside the alphabet")

    def __repr__(self):
        rules = ", ".join(f"{a}->{w}" for a, w in sorted(self.images.items(), key=lambda kv: self.alphabet.index(kv[0])))
        return f"Substitution({rules})"

    def apply(self, word: str) -> str:
        """Image of a word, letter by letter (morphism law)."""
        images = self.images
        try:
            return "".join(images[c] for c in word)
        except KeyError as e:
            raise InputError(f"letter {e.args[0]!r} is not in the alphabet") from None

    def power(self, k: int) -> "Substitution":
        """The substitution applied k times, as a substitution."""
        if k < 1:
            raise InputError("power must be >= 1")
        images = {a: a for a in self.alphabet}
        for _ in range(k):
            images = {a: self.apply(w) for a, w in images.items()}
        return Substitution(self.alphabet, images)

    def incidence_matrix(self) -> np.ndarray:
        """Square count matrix: entry (i, j) = occurrences of letter i in the image of letter j.

        Column sums equal image lengths.
        """
        m = len(self.alphabet)
        mat = np.zeros((m, m), dtype=np.int64)
        for j, a in enumerate(self.alphabet):
            for c in self.images[a]:
                mat[self.alphabet.index(c), j] += 1
        return mat

    def primitivity(self) -> PrimitivityResult:
        """Decide primitivity: some power of the incidence matrix is entrywise positive.

        The search stops at the sharp bound (m-1)^2 + 1 for m letters, so the
        answer is exact, not a heuristic.  witness_power is the least positive
        power, or None when not primitive.
        """
        m = len(self.alphabet)
        reach = self.incidence_matrix() > 0
        bound = (m - 1) ** 2 + 1
        step = reach.astype(np.int8)
        current = reach
        for k in range(1, bound + 1):
            if current.all():
                return PrimitivityResult(True, k)
            current = (current.astype(np.int8) @ step) > 0
        return PrimitivityResult(False, None)

    def fixed_point_prefix(self, seed: str, min_len: int) -> str:
        """Prefix of the one-sided fixed point obtained by iterating on a seed letter.

        Requires the seed to be a strict prefix of its own image with image
        length >= 2; then the iterates are nested prefixes of a unique infinite
        word.  Returns the first iterate of length >= min_len (possibly longer).
        """
        if min_len < 1:
            raise InputError("min_len must be >= 1")
        if seed not in self.alphabet:
            raise InputError(f"seed {seed!r} is not in the alphabet")
        image = self.apply(seed)
        if len(image) < 2 or not image.startswith(seed):
            raise InputError(
                f"seed {seed!r} does not start its own image of length >= 2; no fixed point there"
            )
        word = seed
        while len(word) < min_len:
            word = self.apply(word)
        return word

    def fixed_point_seed(self) -> FixedPointSeed:
        """Find (letter, k) such that the k-th power admits a fixed point on that letter.

        Searches k up to |alphabet| squared, which covers every cycle of the
        first-letter map.  The chosen power is part of the result so callers can
        report it; languages of a substitution and of its powers coincide.
        """
        m = len(self.alphabet)
        current = self
        for k in range(1, m * m + 1):
            for a in self.alphabet:
                image = current.images[a]
                if len(image) >= 2 and image.startswith(a):
                    return FixedPointSeed(a, k)
            current = Substitution(self.alphabet, {x: self.apply(w) for x, w in current.images.items()})
        raise InputError("no letter starts its own image under any small power; images never grow")

    def perron_frequencies(self) -> dict[str, float]:
        """Letter frequencies: the normalized dominant eigenvector of the incidence matrix.

        Power iteration on the positive cone; requires primitivity.  Entries are
        positive and sum to 1 within 1e-12.
        """
        if not self.primitivity().primitive:
            raise InputError("perron frequencies need a primitive substitution")
        mat = self.incidence_matrix().astype(np.float64)
        v = np.full(len(self.alphabet), 1.0 / len(self.alphabet))
        for _ in range(10000):
            w = mat @ v
            w /= w.sum()
            if np.abs(w - v).max() < 1e-15:
                v = w
                break
            v = w
        return {a: float(v[i]) for i, a in enumerate(self.alphabet)}


def parse_substitution(obj: dict) -> Substitution:
    """Build a substitution from the JSON shape {"alphabet": [...], "rules": {...}}."""
    if not isinstance(obj, dict) or "alphabet" not in obj or "rules" not in obj:
        raise InputError('substitution config must be {"alphabet": [...], "rules": {...}}')
    alphabet = Alphabet(obj["alphabet"])
    rules = obj["rules"]
    if not isinstance(rules, dict):
        raise InputError("rules must map each letter to its image word")
    return Substitution(alphabet, {str(a): str(w) for a, w in rules.items()})
