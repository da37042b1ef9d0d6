"""
Unit Tests for the Statistics Service
"""
from collections import Counter

import pytest

from spk_app.errors import InvalidObjectError
from spk_app.model.objects import Permutation, SignedPerm, SPCode, StirlingWord, WordVariant
from spk_app.model.records import ExteriorStatRecord, SignedStatRecord
from spk_app.service.enumeration import Family, enumerate_family, stirling_words_with_codes, word_to_tree
from spk_app.service.stats import (
    code_stats,
    exterior_stats,
    object_stats,
    perm_stats,
    project,
    qzero_stats,
    signed_stats,
    word_record_counts,
    word_stats,
)


def test_word_stats_of_1122():
    record = word_stats(StirlingWord((1, 1, 2, 2)))
    assert (record.asc, record.plat, record.des) == (2, 2, 1)
    assert (record.lap, record.ap, record.apd, record.rpd) == (2, 1, 1, 1)
    assert (record.eud, record.uu, record.dd, record.vv) == (1, 1, 0, 0)
    assert record.pasc == 1
    assert record.alpha == 0


def test_word_stats_of_2211():
    record = word_stats(StirlingWord((2, 2, 1, 1)))
    assert (record.asc, record.plat, record.des) == (1, 2, 2)
    assert (record.lap, record.ap, record.apd) == (1, 0, 1)
    assert record.rpd == 2
    assert (record.eud, record.dd, record.dplat) == (1, 1, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_code_stats_equal_word_stats(n):
    """Statistics read off the code agree with those read off the word."""
    for letters, pairs in stirling_words_with_codes(n):
        assert code_stats(SPCode(pairs)) == word_stats(StirlingWord(letters))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_alpha_identity_and_class_counts(n):
    """n + 2apd - lap - eud - rpd - vv counts the values with two occupied slots."""
    for letters, _ in stirling_words_with_codes(n):
        r = word_stats(StirlingWord(letters))
        assert n + 2 * r.apd - r.lap - r.eud - r.rpd - r.vv == r.alpha >= 0
        counts = r.class_counts()
        assert sum(counts.values()) == n
        assert min(counts.values()) >= 0


def test_exterior_stats_match_word_stats():
    for word in enumerate_family(Family.Q, 4):
        record = word_stats(word)
        assert exterior_stats(word_to_tree(word)) == ExteriorStatRecord(record.asc, record.plat, record.des)


def test_asc_plat_des_equidistributed():
    counts = word_record_counts(4)
    asc = project(counts, ("asc",))
    assert project(counts, ("plat",)) == asc
    assert project(counts, ("des",)) == asc
    assert asc == Counter({(1,): 1, (2,): 22, (3,): 58, (4,): 24})


def test_second_order_eulerian_numbers():
    """The ascent distribution over Q_3 is 1, 8, 6."""
    counts = word_record_counts(3)
    assert project(counts, ("asc",)) == Counter({(1,): 1, (2,): 8, (3,): 6})


def test_qzero_stats():
    assert qzero_stats(StirlingWord((1, 2, 2), WordVariant.SINGLE_ONE)).to_dict() == {"lap": 1, "ap": 1, "even": 1}
    assert qzero_stats(StirlingWord((2, 2, 1), WordVariant.SINGLE_ONE)).to_dict() == {"lap": 1, "ap": 0, "even": 0}
    with pytest.raises(InvalidObjectError):
        qzero_stats(StirlingWord((1, 1)))


def test_signed_stats():
    assert signed_stats(SignedPerm((-1, 2)), with_type_d=True) == SignedStatRecord(0, 1, 1, 1, 0)
    assert signed_stats(SignedPerm((2, -1)), with_type_d=True) == SignedStatRecord(1, 1, 1, 2, 1)
    assert signed_stats(SignedPerm((2, -1))).to_dict() == {"desA": 1, "desB": 1, "neg": 1, "fdes": 2}
    with pytest.raises(InvalidObjectError):
        signed_stats(SignedPerm((1,)), with_type_d=True)


def test_perm_stats():
    record = perm_stats(Permutation((3, 1, 2)))
    assert record.to_dict() == {"des": 1, "exc": 1, "ipk": 0, "lpk": 1, "udrun": 3, "fix": 0}
    identity = perm_stats(Permutation((1, 2, 3)))
    assert (identity.des, identity.fix, identity.udrun) == (0, 3, 1)


def test_object_stats_dispatch():
    tree = next(iter(enumerate_family(Family.TREE, 2)))
    assert isinstance(object_stats(Family.TREE, tree), ExteriorStatRecord)
    sd_record = object_stats(Family.SD, SignedPerm((2, -1, -3)))
    assert sd_record.des_d is not None
    sd_small = object_stats(Family.SD, SignedPerm((1,)))
    assert sd_small.des_d is None
    assert object_stats(Family.CODE, SPCode(((0, 0), (1, 3)))) == word_stats(StirlingWord((1, 1, 2, 2)))
