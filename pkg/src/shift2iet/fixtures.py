"""Built-in substitutions used by the CLI and the test suite."""

from __future__ import annotations

from .errors import InputError
from .substitution import Alphabet, Substitution

FIXTURE_RULES = {
    "thue-morse": (["a", "b"], {"a": "ab", "b": "ba"}),
    "fibonacci": (["a", "b"], {"a": "ab", "b": "a"}),
    "tribonacci": (["a", "b", "c"], {"a": "ab", "b": "ac", "c": "a"}),
    "tetranacci": (["a", "b", "c", "d"], {"a": "ab", "b": "ac", "c": "ad", "d": "a"}),
    "rudin-shapiro": (["a", "b", "c", "d"], {"a": "ab", "b": "ac", "c": "db", "d": "dc"}),
}


def fixture_names() -> list[str]:
    return list(FIXTURE_RULES)


def get_fixture(name: str) -> Substitution:
    try:
        letters, rules = FIXTURE_RULES[name]
    except KeyError:
        known = ", ".join(FIXTURE_RULES)
        raise InputError(f"unknown fixture {name!r}; available: {known}") from None
    return Substitution(Alphabet(letters), dict(rules))
