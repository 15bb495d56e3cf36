"""Morphism plumbing: validation, incidence data, primitivity, fixed points."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shift2iet import (
    Alphabet,
    InputError,
    Substitution,
    fixture_names,
    get_fixture,
    parse_substitution,
)
from oracles import apply_rules, fixed_point_prefix


def test_alphabet_rejects_bad_letter_sets():
    with pytest.raises(InputError):
        Alphabet([])
    with pytest.raises(InputError):
        Alphabet(["a", "a"])
    with pytest.raises(InputError):
        Alphabet(["ab"])


def test_alphabet_code_is_declaration_order():
    alpha = Alphabet(["b", "a"])
    assert alpha.code("ba") == (0, 1)
    assert alpha.code("ab") == (1, 0)
    with pytest.raises(InputError):
        alpha.code("c")


def test_substitution_validation():
    alpha = Alphabet(["a", "b"])
    with pytest.raises(InputError):
        Substitution(alpha, {"a": "ab"})
    with pytest.raises(InputError):
        Substitution(alpha, {"a": "ab", "b": ""})
    with pytest.raises(InputError):
        Substitution(alpha, {"a": "ab", "b": "ac"})


def test_parse_substitution_shape_errors():
    with pytest.raises(InputError):
        parse_substitution({"rules": {"a": "ab"}})
    with pytest.raises(InputError):
        parse_substitution({"alphabet": ["a"], "rules": ["a"]})
    sub = parse_substitution({"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "a"}})
    assert sub.apply("ab") == "aba"


@pytest.mark.parametrize("name", fixture_names())
def test_incidence_columns_sum_to_image_lengths(name):
    sub = get_fixture(name)
    mat = sub.incidence_matrix()
    for j, a in enumerate(sub.alphabet):
        assert mat[:, j].sum() == len(sub.images[a])


@pytest.mark.parametrize("name", fixture_names())
def test_fixtures_are_primitive(name):
    sub = get_fixture(name)
    result = sub.primitivity()
    assert result.primitive
    assert (np.linalg.matrix_power(sub.incidence_matrix(), result.witness_power) > 0).all()
    if result.witness_power > 1:
        below = np.linalg.matrix_power(sub.incidence_matrix(), result.witness_power - 1)
        assert not (below > 0).all()


def test_reducible_substitution_is_not_primitive():
    sub = parse_substitution({"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "b"}})
    assert sub.primitivity() == (False, None)


def test_fixed_point_prefixes_are_nested():
    sub = get_fixture("tribonacci")
    short = sub.fixed_point_prefix("a", 50)
    long = sub.fixed_point_prefix("a", 400)
    assert long.startswith(short)
    reference = fixed_point_prefix(dict(sub.images), 400)
    assert long == reference[: len(long)]


def test_fixed_point_prefix_rejects_bad_seed():
    sub = get_fixture("fibonacci")
    with pytest.raises(InputError):
        sub.fixed_point_prefix("b", 10)
    with pytest.raises(InputError):
        sub.fixed_point_prefix("z", 10)


def test_fixed_point_seed_search_uses_powers():
    # b -> ba only fixes b, and only after squaring a -> b, b -> ab.
    sub = parse_substitution({"alphabet": ["a", "b"], "rules": {"a": "b", "b": "ab"}})
    seed = sub.fixed_point_seed()
    assert seed.power > 1
    image = sub.power(seed.power).images[seed.seed]
    assert image.startswith(seed.seed) and len(image) >= 2


def test_power_matches_repeated_application():
    sub = get_fixture("rudin-shapiro")
    assert sub.power(3).images["a"] == sub.apply(sub.apply(sub.images["a"]))
    with pytest.raises(InputError):
        sub.power(0)


@pytest.mark.parametrize(
    "name,expected",
    [
        ("thue-morse", {"a": 0.5, "b": 0.5}),
        ("fibonacci", {"a": 0.6180339887498949, "b": 0.3819660112501051}),
    ],
)
def test_perron_frequencies_match_known_values(name, expected):
    freqs = get_fixture(name).perron_frequencies()
    for letter, want in expected.items():
        assert freqs[letter] == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("name", fixture_names())
def test_perron_frequencies_match_eigenvector(name):
    """Cross-check power iteration against a direct eigendecomposition."""
    sub = get_fixture(name)
    mat = sub.incidence_matrix().astype(float)
    values, vectors = np.linalg.eig(mat)
    lead = np.argmax(values.real)
    vec = np.abs(vectors[:, lead].real)
    vec /= vec.sum()
    freqs = sub.perron_frequencies()
    for i, a in enumerate(sub.alphabet):
        assert freqs[a] == pytest.approx(vec[i], abs=1e-9)
    assert sum(freqs.values()) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(fixture_names()), st.data())
def test_morphism_law_on_random_words(name, data):
    sub = get_fixture(name)
    letters = list(sub.alphabet.letters)
    u = "".join(data.draw(st.lists(st.sampled_from(letters), max_size=8)))
    v = "".join(data.draw(st.lists(st.sampled_from(letters), max_size=8)))
    assert sub.apply(u + v) == sub.apply(u) + sub.apply(v)
    assert sub.apply(u) == apply_rules(dict(sub.images), u)
