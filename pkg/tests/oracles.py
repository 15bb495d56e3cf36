"""Slow reference implementations the tests compare the library against.

Everything here favors obviousness over speed: fixed points are materialized
as plain strings, factor sets come from sliding windows, special factors from
direct extension counting.  Nothing in this module imports the package under
test, so agreement between the two is meaningful.
"""

from fractions import Fraction


def apply_rules(rules: dict, word: str) -> str:
    return "".join(rules[c] for c in word)


def prolongable_seed(rules: dict) -> str:
    for letter in sorted(rules):
        image = rules[letter]
        if image.startswith(letter) and len(image) > 1:
            return letter
    raise ValueError("no letter starts its own growing image")


def fixed_point_prefix(rules: dict, min_len: int) -> str:
    word = prolongable_seed(rules)
    while len(word) < min_len:
        word = apply_rules(rules, word)
    return word


def window_factors(word: str, n: int) -> list[str]:
    return sorted({word[i : i + n] for i in range(len(word) - n + 1)})


def factor_levels(rules: dict, n_max: int) -> dict[int, list[str]]:
    """Sorted factor lists for lengths 1..n_max+1 from a stabilized prefix.

    The prefix doubles until two consecutive sizes produce identical window
    sets for every length.  Shifts of primitive substitutions are linearly
    recurrent, so every factor shows up once the prefix is a modest multiple
    of the window length and the loop settles fast.
    """
    length = max(64, 8 * n_max)
    previous = None
    while True:
        prefix = fixed_point_prefix(rules, length)
        levels = {n: window_factors(prefix, n) for n in range(1, n_max + 2)}
        if levels == previous:
            return levels
        previous = levels
        length *= 2


def left_special(levels: dict, n: int) -> list[str]:
    seen: dict[str, set] = {}
    for w in levels[n + 1]:
        seen.setdefault(w[1:], set()).add(w[0])
    return sorted(u for u, s in seen.items() if len(s) >= 2)


def right_special(levels: dict, n: int) -> list[str]:
    seen: dict[str, set] = {}
    for w in levels[n + 1]:
        seen.setdefault(w[:-1], set()).add(w[-1])
    return sorted(u for u, s in seen.items() if len(s) >= 2)


def left_extensions(levels: dict, word: str) -> list[str]:
    n = len(word)
    return sorted({w[0] for w in levels[n + 1] if w[1:] == word})


def right_extensions(levels: dict, word: str) -> list[str]:
    n = len(word)
    return sorted({w[-1] for w in levels[n + 1] if w[:-1] == word})


def prefix_count(levels: dict, prefix: str, n: int) -> int:
    return sum(1 for w in levels[n] if w.startswith(prefix))


def refine_cylinders(levels: dict, depth_cap: int):
    """Replay of the cylinder refinement over plain window levels.

    Returns (emitted, unresolved) with emitted entries (k, word, step).
    """
    emitted = []
    active = list(levels[2])
    for length in range(2, depth_cap + 1):
        special = set(left_special(levels, length - 1))
        survivors = []
        for word in active:
            if word[1:] in special:
                survivors.append(word)
            else:
                emitted.append((len(emitted) + 1, word, length - 1))
        if length == depth_cap:
            return emitted, survivors
        active = [w + x for w in survivors for x in right_extensions(levels, w)]
    return emitted, []


def approximant_jumps(levels: dict, n: int) -> list[Fraction]:
    """Jump positions of the level-n map, straight from the sorted lists."""
    fact_n = levels[n]
    index = {w: i for i, w in enumerate(levels[n - 1])}
    targets = [index[v[1:]] for v in fact_n]
    p = len(fact_n)
    return [Fraction(i, p) for i in range(1, p) if targets[i] != targets[i - 1] + 1]


GOLDEN_BETA = (5 ** 0.5 - 1) / 2


def golden_orbit_code(x: float, length: int) -> str:
    """Float shadow of the golden-rotation coding, good to ~1e-12 per step."""
    out = []
    for _ in range(length):
        if x < GOLDEN_BETA:
            out.append("a")
            x = x + 1 - GOLDEN_BETA
        else:
            out.append("b")
            x = x - GOLDEN_BETA
    return "".join(out)
