import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from queryspell import damerau_levenshtein

from oracles import edit_distances_by_composition, ref_damerau_levenshtein

short = st.text(alphabet="abcd", max_size=8)
words = st.text(alphabet="abcdefghië", max_size=12)


@pytest.mark.parametrize("a,b,expected", [
    ("change", "chnage", 1),
    ("check", "chekc", 1),
    ("fresh", "frash", 1),
    ("fresh", "freshh", 1),
    ("malleable", "mallable", 1),
    ("happiness", "hapiness", 1),
    ("français", "francais", 1),
    ("x", "x", 0),
    ("", "", 0),
    ("", "abc", 3),
    ("abc", "", 3),
    ("kitten", "sitting", 3),
    ("ca", "abc", 2),      # transpose + insert inside the pair
    ("muzeem", "museum", 2),
    ("park", "0ark", 1),
    ("medal", ",edal", 1),
])
def test_known_distances(a, b, expected):
    assert damerau_levenshtein(a, b) == expected
    assert ref_damerau_levenshtein(a, b) == expected


@given(words, words)
def test_matches_reference_dp(a, b):
    assert damerau_levenshtein(a, b) == ref_damerau_levenshtein(a, b)


@given(short, short)
def test_symmetric(a, b):
    assert damerau_levenshtein(a, b) == damerau_levenshtein(b, a)


@given(words, words)
def test_zero_iff_equal(a, b):
    assert (damerau_levenshtein(a, b) == 0) == (a == b)


@given(short, short, short)
def test_triangle_inequality(a, b, c):
    assert (damerau_levenshtein(a, c)
            <= damerau_levenshtein(a, b) + damerau_levenshtein(b, c))


@settings(max_examples=30, deadline=None)
@given(st.text(alphabet="abc", min_size=1, max_size=5))
def test_agrees_with_edit_composition(word):
    """Distance <= 2 must coincide with reachability by <= 2 single edits."""
    reach = edit_distances_by_composition(word, "abc", 2)
    for other, ops in reach.items():
        assert damerau_levenshtein(word, other) == ops
    # and nothing outside the reachable set is within distance 2
    for other in _all_strings("abc", 5):
        if other not in reach:
            assert damerau_levenshtein(word, other) > 2


def _all_strings(alphabet, max_len):
    out = [""]
    frontier = [""]
    for _ in range(max_len):
        frontier = [s + ch for s in frontier for ch in alphabet]
        out.extend(frontier)
    return out
