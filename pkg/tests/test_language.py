"""Factor tables against sliding-window oracles and closed-form complexities."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shift2iet import InputError, build_factor_table, fixture_names, get_fixture, parse_substitution
import oracles

ORACLE_DEPTH = 30


@pytest.fixture(scope="module")
def oracle_levels():
    return {
        name: oracles.factor_levels(dict(get_fixture(name).images), ORACLE_DEPTH)
        for name in fixture_names()
    }


@pytest.fixture(scope="module")
def shallow_tables():
    return {
        name: build_factor_table(get_fixture(name), ORACLE_DEPTH) for name in fixture_names()
    }


def test_thue_morse_short_factor_lists(shallow_tables):
    table = shallow_tables["thue-morse"]
    assert table.factors(1) == ("a", "b")
    assert table.factors(2) == ("aa", "ab", "ba", "bb")
    assert table.factors(3) == ("aab", "aba", "abb", "baa", "bab", "bba")
    assert table.factors(5) == (
        "aabab", "aabba", "abaab", "ababb", "abbaa", "abbab",
        "baaba", "baabb", "babaa", "babba", "bbaab", "bbaba",
    )


def test_thue_morse_length_four_count_is_ten(shallow_tables, oracle_levels):
    """The window oracle pins p(4) = 10; bbab occurs (inside abbabaab)."""
    table = shallow_tables["thue-morse"]
    assert table.complexity(4) == 10
    assert "bbab" in table.factors(4)
    assert list(table.factors(4)) == oracle_levels["thue-morse"][4]


@pytest.mark.parametrize("name", fixture_names())
def test_all_levels_match_window_oracle(name, shallow_tables, oracle_levels):
    table = shallow_tables[name]
    for n in range(1, ORACLE_DEPTH + 1):
        assert list(table.factors(n)) == oracle_levels[name][n]


@pytest.mark.parametrize(
    "name,formula",
    [
        ("fibonacci", lambda n: n + 1),
        ("tribonacci", lambda n: 2 * n + 1),
        ("tetranacci", lambda n: 3 * n + 1),
        ("rudin-shapiro", lambda n: 8 * n - 8 if n >= 2 else 4),
    ],
)
def test_closed_form_complexity(name, formula, deep_tables):
    table = deep_tables[name]
    for n in range(2, 101):
        assert table.complexity(n) == formula(n)


def _tm_complexity(n: int) -> int:
    """Two-branch closed form: write n - 1 = 2**r + q with 0 < q <= 2**r."""
    if n <= 2:
        return 2 * n
    m = n - 1
    r = m.bit_length() - 1
    if m == 2 ** r:
        r -= 1
    q = m - 2 ** r
    if 2 * q <= 2 ** r:
        return 6 * 2 ** (r - 1) + 4 * q
    return 2 ** (r + 2) + 2 * q


def test_thue_morse_complexity_formula(tm100):
    for n in range(1, 101):
        assert tm100.complexity(n) == _tm_complexity(n), n


def test_left_and_right_special_match_oracle(shallow_tables, oracle_levels):
    for name in ("thue-morse", "rudin-shapiro"):
        table = shallow_tables[name]
        levels = oracle_levels[name]
        for n in range(1, 13):
            assert list(table.left_special(n)) == oracles.left_special(levels, n)
            assert list(table.right_special(n)) == oracles.right_special(levels, n)


def test_thue_morse_left_special_lists(shallow_tables):
    table = shallow_tables["thue-morse"]
    assert table.left_special(1) == ("a", "b")
    assert table.left_special(2) == ("ab", "ba")
    assert table.left_special(3) == ("aba", "abb", "baa", "bab")
    assert table.left_special(4) == ("abba", "baab")


def test_extension_sets_match_oracle(shallow_tables, oracle_levels):
    table = shallow_tables["tribonacci"]
    levels = oracle_levels["tribonacci"]
    for n in (1, 2, 5, 9):
        for word in levels[n]:
            assert sorted(table.left_extensions(word)) == oracles.left_extensions(levels, word)
            assert sorted(table.right_extensions(word)) == oracles.right_extensions(levels, word)


def test_extension_totals_account_for_next_level(shallow_tables):
    table = shallow_tables["rudin-shapiro"]
    for n in (3, 10, 20):
        total = sum(len(table.left_extensions(w)) for w in table.factors(n))
        assert total == table.complexity(n + 1)


@pytest.mark.parametrize(
    "name,count",
    [("thue-morse", 2), ("fibonacci", 1), ("tribonacci", 1)],
)
def test_persistent_left_special_counts(name, count, deep_tables):
    table = deep_tables[name]
    for n in range(8, 41):
        assert len(table.persistent_left_special(n, 20)) == count


def test_persistent_left_special_words_are_prefix_nested(tm100):
    shorter = tm100.persistent_left_special(8, 20)
    longer = tm100.persistent_left_special(12, 20)
    for word in longer:
        assert any(word.startswith(s) for s in shorter)


def test_persistent_left_special_margin_guard(shallow_tables):
    table = shallow_tables["fibonacci"]
    with pytest.raises(InputError):
        table.persistent_left_special(20, ORACLE_DEPTH)


def test_prefix_range_and_restricted_complexity(shallow_tables, oracle_levels):
    table = shallow_tables["tetranacci"]
    levels = oracle_levels["tetranacci"]
    for prefix in ("a", "ab", "abac", "d", "abacabadabacabaa"):
        for n in (18, 25):
            lo, hi = table.prefix_range(prefix, n)
            assert hi - lo == oracles.prefix_count(levels, prefix, n)
            assert table.restricted_complexity(prefix, n) == hi - lo
            block = table.factors(n)[lo:hi]
            assert all(w.startswith(prefix) for w in block)


def test_restricted_complexity_totals(shallow_tables):
    table = shallow_tables["thue-morse"]
    for n in (4, 9):
        total = sum(table.restricted_complexity(a, n) for a in table.alphabet.letters)
        assert total == table.complexity(n)


def test_is_factor_and_index_of(shallow_tables):
    table = shallow_tables["fibonacci"]
    assert table.is_factor("abaab")
    assert not table.is_factor("bb")
    idx = table.index_of(5, "abaab")
    assert table.factors(5)[idx] == "abaab"
    with pytest.raises(InputError):
        table.index_of(5, "bbbbb")


def test_level_bounds_are_guarded(shallow_tables):
    table = shallow_tables["fibonacci"]
    with pytest.raises(InputError):
        table.factors(0)
    with pytest.raises(InputError):
        table.factors(ORACLE_DEPTH + 1)
    with pytest.raises(InputError):
        table.left_extensions("a" * ORACLE_DEPTH)


def test_non_growing_substitution_is_rejected():
    swap = parse_substitution({"alphabet": ["a", "b"], "rules": {"a": "b", "b": "a"}})
    with pytest.raises(InputError):
        build_factor_table(swap, 10)


def test_imprimitive_substitution_is_rejected():
    sub = parse_substitution({"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "b"}})
    with pytest.raises(InputError):
        build_factor_table(sub, 10)


_TABLE_CACHE: dict = {}


def _cached_table(name):
    if name not in _TABLE_CACHE:
        _TABLE_CACHE[name] = build_factor_table(get_fixture(name), ORACLE_DEPTH)
    return _TABLE_CACHE[name]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(fixture_names()), st.integers(min_value=1, max_value=ORACLE_DEPTH - 1))
def test_every_factor_extends_and_embeds(name, n):
    """Prefix/suffix closure plus prolongability, on library tables."""
    table = _cached_table(name)
    level = table.factors(n)
    above = set(table.factors(n + 1))
    below = set(table.factors(n - 1)) if n > 1 else {""}
    for w in level:
        assert w[:-1] in below
        assert w[1:] in below or n == 1
        assert any(w + a in above for a in table.alphabet.letters)
        assert any(a + w in above for a in table.alphabet.letters)
