"""Cylinder refinement: emission order, classification, and the oracle replay."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shift2iet import InputError, build_factor_table, fixture_names, get_fixture, measure_table, refine
import oracles


@pytest.fixture(scope="module")
def tm30():
    return build_factor_table(get_fixture("thue-morse"), 30)


def test_thue_morse_depth_five_partition(tm30):
    result = refine(tm30, 5)
    assert [(c.k, c.word, c.step) for c in result.cylinders] == [
        (1, "abb", 2),
        (2, "baa", 2),
        (3, "aabab", 4),
        (4, "ababb", 4),
        (5, "babaa", 4),
        (6, "bbaba", 4),
    ]
    assert result.unresolved == ["aabba", "abaab", "babba", "bbaab"]
    assert result.depth_cap == 5


def test_fibonacci_depth_three_partition():
    table = build_factor_table(get_fixture("fibonacci"), 12)
    result = refine(table, 3)
    assert [(c.k, c.word, c.step) for c in result.cylinders] == [(1, "ab", 1), (2, "baa", 2)]
    assert result.unresolved == ["aab", "bab"]


@pytest.mark.parametrize("name", fixture_names())
@pytest.mark.parametrize("depth", [3, 6, 10])
def test_refinement_matches_oracle_replay(name, depth):
    levels = oracles.factor_levels(dict(get_fixture(name).images), depth + 2)
    table = build_factor_table(get_fixture(name), depth + 2)
    result = refine(table, depth)
    want_emitted, want_unresolved = oracles.refine_cylinders(levels, depth)
    assert [(c.k, c.word, c.step) for c in result.cylinders] == want_emitted
    assert result.unresolved == want_unresolved


def test_emitted_words_have_unique_left_extension_of_suffix(tm30):
    result = refine(tm30, 8)
    for cyl in result.cylinders:
        suffix = cyl.word[1:]
        assert tm30.left_extensions(suffix) == frozenset(cyl.word[0])


def test_emitted_words_are_pairwise_non_prefix(tm30):
    words = refine(tm30, 10).cylinder_words()
    for i, u in enumerate(words):
        for v in words[i + 1 :]:
            assert not u.startswith(v) and not v.startswith(u)


def test_classify_locates_words(tm30):
    result = refine(tm30, 5)
    assert result.classify("abb") == 1
    assert result.classify("abbabb") == 1
    assert result.classify("aababb") == 3
    assert result.classify("abaababb") == "unresolved"
    assert result.classify("ab") == "too-short"
    with pytest.raises(InputError):
        result.classify("bbb")


def test_every_long_factor_classifies_uniquely(tm30):
    """Emitted cylinders plus unresolved words tile the depth-cap level."""
    result = refine(tm30, 7)
    for w in tm30.factors(7):
        heads = [c.word for c in result.cylinders if w.startswith(c.word)]
        heads += [u for u in result.unresolved if w.startswith(u)]
        assert len(heads) == 1, w


def test_residual_mass_decreases_with_depth(tm30):
    masses = []
    for depth in (3, 5, 7, 9):
        result = refine(tm30, depth)
        mt = measure_table(tm30, result.cylinder_words(), 30)
        masses.append(result.residual_mass(mt))
    assert all(0 <= m <= 1 for m in masses)
    assert all(a >= b for a, b in zip(masses, masses[1:]))


def test_residual_mass_requires_entries(tm30):
    result = refine(tm30, 5)
    mt = measure_table(tm30, ["abb"], 30)
    with pytest.raises(InputError):
        result.residual_mass(mt)


def test_depth_cap_bounds(tm30):
    with pytest.raises(InputError):
        refine(tm30, 1)
    with pytest.raises(InputError):
        refine(tm30, 30)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=12))
def test_partitions_are_monotone_in_depth(depth):
    """Deepening never withdraws an emitted cylinder, it only adds."""
    table = _cached()
    shallow = refine(table, depth)
    deeper = refine(table, depth + 2)
    shallow_set = {(c.word, c.step) for c in shallow.cylinders}
    deeper_set = {(c.word, c.step) for c in deeper.cylinders}
    assert shallow_set <= deeper_set
    for u in deeper.unresolved:
        assert any(u.startswith(v) for v in shallow.unresolved)


_CACHE = []


def _cached():
    if not _CACHE:
        _CACHE.append(build_factor_table(get_fixture("thue-morse"), 16))
    return _CACHE[0]
