"""
Unit Tests for the Enumeration Service

Family sizes are compared with their closed forms, and the three
Stirling-word bijections are checked to be mutually inverse.
"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spk_app.errors import IndexRangeError, InvalidObjectError, ResourceGuardError, UnknownNameError
from spk_app.model.objects import SPCode, StirlingWord, WordVariant
from spk_app.service.enumeration import (
    Family,
    check_guard,
    code_to_tree,
    code_to_word,
    count_family,
    enumerate_family,
    gap_label,
    is_sp_code,
    is_stirling_word,
    parse_family,
    stirling_words_with_codes,
    tree_to_code,
    tree_to_word,
    word_to_code,
    word_to_tree,
)

EXPECTED_SIZES = {
    Family.Q: [1, 3, 15, 105],
    Family.Q1: [1, 2, 8, 48],
    Family.Q0: [1, 2, 8, 48],
    Family.SB: [2, 8, 48, 384],
    Family.SD: [1, 4, 24, 192],
    Family.S: [1, 2, 6, 24],
    Family.DERANGE: [0, 1, 2, 9],
    Family.CODE: [1, 3, 15, 105],
    Family.TREE: [1, 3, 15, 105],
}

WORDS_4 = [StirlingWord(w) for w, _ in stirling_words_with_codes(4)]


@pytest.mark.parametrize("family", list(Family))
def test_enumeration_matches_closed_form(family):
    """Each family has the documented size and no repeated object."""
    for n, expected in enumerate(EXPECTED_SIZES[family], start=1):
        objects = list(enumerate_family(family, n))
        assert len(objects) == expected == count_family(family, n)
        assert len(set(objects)) == len(objects)


def test_q2_in_insertion_order():
    words = [str(w) for w in enumerate_family("q", 2)]
    assert words == ["2211", "1221", "1122"]


def test_variant_membership():
    for word in enumerate_family("q1", 4):
        assert is_stirling_word(word.letters, WordVariant.PINNED)
    for word in enumerate_family("q0", 4):
        assert word.variant is WordVariant.SINGLE_ONE
        assert word.n == 4
        assert is_stirling_word(word.letters, WordVariant.SINGLE_ONE)


def test_signed_families():
    sd = list(enumerate_family("sd", 3))
    assert all(sum(1 for v in perm.values if v < 0) % 2 == 0 for perm in sd)
    derangements = list(enumerate_family("derange", 4))
    assert all(all(v != i for i, v in enumerate(p.values, start=1)) for p in derangements)


@pytest.mark.parametrize("letters, valid", [
    ((1, 1), True),
    ((1, 2, 2, 1), True),
    ((1, 2, 1, 2), False),
    ((2, 1, 1, 2), False),
    ((1, 1, 3, 3), False),
    ((1, 1, 1), False),
    ((), False),
])
def test_is_stirling_word(letters, valid):
    assert is_stirling_word(letters) is valid


def test_is_sp_code():
    assert is_sp_code(SPCode(((0, 0), (1, 1), (1, 3))))
    assert not is_sp_code(SPCode(((0, 0), (1, 1), (1, 1))))
    assert not is_sp_code(SPCode(((0, 0), (2, 1))))
    assert not is_sp_code(SPCode(((1, 1),)))


def test_gap_labels():
    assert gap_label(0, 1) == (1, 1)
    assert gap_label(1, 1) == (1, 2)
    assert gap_label(2, 0) == (2, 3)


@pytest.mark.parametrize("word", WORDS_4, ids=str)
def test_bijections_round_trip(word):
    tree = word_to_tree(word)
    code = word_to_code(word)
    assert tree_to_word(tree) == word
    assert code_to_word(code) == word
    assert tree_to_code(tree) == code
    assert code_to_tree(code) == tree


def test_enumerated_codes_match_bijection():
    for letters, pairs in stirling_words_with_codes(5):
        assert word_to_code(StirlingWord(letters)) == SPCode(pairs)


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_codes_drive_the_bijection(data):
    """Any valid code maps to a Stirling word whose code is the original."""
    n = data.draw(st.integers(1, 6))
    pairs = [(0, 0)]
    for i in range(2, n + 1):
        free = [(a, b) for a in range(1, i) for b in (1, 2, 3) if (a, b) not in pairs]
        pairs.append(data.draw(st.sampled_from(free)))
    code = SPCode(tuple(pairs))
    word = code_to_word(code)
    assert is_stirling_word(word.letters)
    assert word_to_code(word) == code


def test_invalid_objects_rejected():
    with pytest.raises(InvalidObjectError):
        word_to_tree(StirlingWord((1, 2, 1, 2)))
    with pytest.raises(InvalidObjectError):
        word_to_code(StirlingWord((2, 2, 1), WordVariant.SINGLE_ONE))
    with pytest.raises(InvalidObjectError):
        code_to_tree(SPCode(((0, 0), (1, 2), (1, 2))))
    with pytest.raises(InvalidObjectError):
        code_to_tree(SPCode(((1, 1),)))


def test_unknown_family():
    with pytest.raises(UnknownNameError):
        parse_family("qq")
    assert parse_family("SB") is Family.SB


def test_index_range():
    with pytest.raises(IndexRangeError):
        enumerate_family("q", 0)
    assert count_family("q", 0) == 0


def test_resource_guard():
    assert check_guard("q", 4, guard=105) == 105
    with pytest.raises(ResourceGuardError) as exc_info:
        enumerate_family("q", 5, guard=100)
    assert exc_info.value.count == 945
    assert "945" in str(exc_info.value)
