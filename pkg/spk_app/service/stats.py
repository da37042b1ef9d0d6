"""
Statistics Service

This module computes the permutation statistics used throughout the
catalog: the word statistics of Stirling permutations (and the same values
read off SP-codes through the slot-occupancy table), statistics of words
with a single 1, descent statistics of signed permutations and the classical
statistics of plain permutations.

Word statistics pad the word with a 0 on both ends. Pair statistics look at
the neighbours of the two copies of each value.

Distribution helpers at the bottom aggregate a statistic over a whole
family and are cached per process, since several verification checks read
the same distribution.
"""

from collections import Counter
from functools import lru_cache
from typing import Dict, Optional, Tuple, Union

from spk_app.errors import InvalidObjectError
from spk_app.logger.logger import logger
from spk_app.model.objects import Permutation, SignedPerm, SPCode, StirlingWord, TernaryTree, WordVariant
from spk_app.model.records import (
    ExteriorStatRecord,
    PermStatRecord,
    QZeroStatRecord,
    SignedStatRecord,
    StatRecord,
)
from spk_app.service.enumeration import Family, enumerate_family


def word_stats(word: StirlingWord) -> StatRecord:
    """
    Computes every statistic of a Stirling permutation.

    Args:
        word (StirlingWord): A word of Q_n.

    Returns:
        StatRecord: All eighteen counts.
    """
    s = word.letters
    length = len(s)
    p = (0,) + s + (0,)
    asc = plat = des = lap = ap = rpd = apd = 0
    dplat = dasc = ddes = pasc = dpa = 0
    for i in range(1, length + 1):
        before, here, after = p[i - 1], p[i], p[i + 1]
        if before < here:
            asc += 1
            if here < after:
                dasc += 1
        elif before > here:
            if here > after:
                ddes += 1
        if here > after:
            des += 1
        if i < length and here == after:
            plat += 1
            if before < here:
                lap += 1
                if i >= 2:
                    ap += 1
                if after > p[i + 2]:
                    apd += 1
            elif before > here:
                dplat += 1
                if after < p[i + 2]:
                    dpa += 1
        if i >= 2 and before == here:
            if here > after:
                rpd += 1
            elif here < after:
                pasc += 1

    first: Dict[int, int] = {}
    second: Dict[int, int] = {}
    for i in range(1, length + 1):
        if p[i] in first:
            second[p[i]] = i
        else:
            first[p[i]] = i
    eud = dd = uu = vv = apap = pdpd = 0
    for v, i in first.items():
        j = second[v]
        before_first, after_first = p[i - 1], p[i + 1]
        before_second, after_second = p[j - 1], p[j + 1]
        if before_first < v:
            if after_second < v:
                eud += 1
            elif after_second > v:
                uu += 1
        elif after_second < v:
            dd += 1
        second_is_valley = before_second > v < after_second
        if before_first > v < after_first and second_is_valley:
            vv += 1
        if before_first < v < after_first and second_is_valley:
            apap += 1
        if before_first > v < after_first and before_second > v > after_second:
            pdpd += 1
    return StatRecord(
        asc=asc, plat=plat, des=des, lap=lap, ap=ap, rpd=rpd, eud=eud, apd=apd, vv=vv,
        apap=apap, dpa=dpa, pdpd=pdpd, dplat=dplat, dasc=dasc, dd=dd, uu=uu, ddes=ddes, pasc=pasc,
    )


def code_stats(code: SPCode) -> StatRecord:
    """
    Reads the word statistics off an SP-code.

    Each value a has a set S_a of occupied slots (1 left, 2 middle, 3 right);
    every statistic counts the values whose S_a satisfies a fixed condition.

    Args:
        code (SPCode): A valid SP-code.

    Returns:
        StatRecord: Equal to word_stats of the word with this code.
    """
    n = code.n
    used = code.used_slots()
    counts = Counter()
    for a in range(1, n + 1):
        s = used[a]
        left, middle, right = 1 in s, 2 in s, 3 in s
        counts["asc"] += not left
        counts["plat"] += not middle
        counts["des"] += not right
        counts["lap"] += not (left or middle)
        counts["rpd"] += not (middle or right)
        counts["eud"] += not (left or right)
        counts["apd"] += not s
        counts["vv"] += left and middle and right
        counts["dasc"] += not left and middle
        counts["dplat"] += left and not middle
        counts["ddes"] += middle and not right
        counts["pasc"] += not middle and right
        counts["uu"] += not left and right
        counts["dd"] += left and not right
        counts["apap"] += s == {2, 3}
        counts["dpa"] += s == {1, 3}
        counts["pdpd"] += s == {1, 2}

    # the word opens with the leftmost node; its plateau is not an ascent-plateau at i >= 2
    left_child = {a: i for i, (a, b) in enumerate(code.pairs[1:], start=2) if b == 1}
    node = 1
    while node in left_child:
        node = left_child[node]
    opens_with_plateau = 2 not in used[node]
    return StatRecord(ap=counts["lap"] - opens_with_plateau, **{k: int(counts[k]) for k in (
        "asc", "plat", "des", "lap", "rpd", "eud", "apd", "vv", "apap", "dpa", "pdpd",
        "dplat", "dasc", "dd", "uu", "ddes", "pasc",
    )})


def exterior_stats(tree: TernaryTree) -> ExteriorStatRecord:
    """Counts empty left, middle and right slots; they match asc, plat and des of the word."""
    exl = sum(1 for left, _, _ in tree.children if not left)
    exm = sum(1 for _, middle, _ in tree.children if not middle)
    exr = sum(1 for _, _, right in tree.children if not right)
    return ExteriorStatRecord(exl=exl, exm=exm, exr=exr)


def qzero_stats(word: StirlingWord) -> QZeroStatRecord:
    """
    Statistics of a word with a single 1.

    Positions are 1-based; a value v >= 2 is even when its first copy sits
    at an even position.
    """
    if word.variant is not WordVariant.SINGLE_ONE:
        raise InvalidObjectError(f"{word} is not a single-one word")
    s = word.letters
    p = (0,) + s
    lap = ap = 0
    for i in range(1, len(s)):
        if p[i - 1] < p[i] == p[i + 1]:
            lap += 1
            if i >= 2:
                ap += 1
    seen = set()
    even = 0
    for position, v in enumerate(s, start=1):
        if v not in seen:
            seen.add(v)
            if v >= 2 and position % 2 == 0:
                even += 1
    return QZeroStatRecord(lap=lap, ap=ap, even=even)


def signed_stats(perm: SignedPerm, with_type_d: bool = False) -> SignedStatRecord:
    """
    Descent statistics of a signed permutation.

    Args:
        perm (SignedPerm): The signed permutation.
        with_type_d (bool): Also compute the type D descent number, which uses pi(0) = -pi(2).

    Returns:
        SignedStatRecord: desA, desB, neg, fdes and optionally desD.

    Raises:
        InvalidObjectError: If desD is requested for n < 2.
    """
    v = perm.values
    des_a = sum(1 for i in range(len(v) - 1) if v[i] > v[i + 1])
    des_b = des_a + (1 if v and v[0] < 0 else 0)
    neg = sum(1 for x in v if x < 0)
    des_d: Optional[int] = None
    if with_type_d:
        if len(v) < 2:
            raise InvalidObjectError("The type D descent number needs n >= 2")
        des_d = des_a + (1 if -v[1] > v[0] else 0)
    return SignedStatRecord(des_a=des_a, des_b=des_b, neg=neg, fdes=des_a + des_b, des_d=des_d)


def perm_stats(perm: Permutation) -> PermStatRecord:
    """
    Classical statistics of a permutation.

    Up-down runs are counted on the sequence 0, pi(1), ..., pi(n).
    """
    v = perm.values
    n = len(v)
    p = (0,) + v
    des = sum(1 for i in range(1, n) if p[i] > p[i + 1])
    exc = sum(1 for i in range(1, n + 1) if p[i] > i)
    fix = sum(1 for i in range(1, n + 1) if p[i] == i)
    ipk = sum(1 for i in range(2, n) if p[i - 1] < p[i] > p[i + 1])
    lpk = sum(1 for i in range(1, n) if p[i - 1] < p[i] > p[i + 1])
    udrun = 0
    direction = 0
    for i in range(n):
        step = 1 if p[i + 1] > p[i] else -1
        if step != direction:
            udrun += 1
            direction = step
    return PermStatRecord(des=des, exc=exc, ipk=ipk, lpk=lpk, udrun=udrun, fix=fix)


@lru_cache(maxsize=None)
def word_record_counts(n: int, guard: Optional[int] = None) -> Counter:
    """Distribution of StatRecords over Q_n."""
    counts: Counter = Counter(word_stats(w) for w in enumerate_family(Family.Q, n, guard))
    logger.debug(f"Collected {len(counts)} distinct word records over Q_{n}")
    return counts


@lru_cache(maxsize=None)
def qzero_record_counts(n: int, guard: Optional[int] = None) -> Counter:
    """Distribution of QZeroStatRecords over the single-one words with index n."""
    return Counter(qzero_stats(w) for w in enumerate_family(Family.Q0, n, guard))


@lru_cache(maxsize=None)
def signed_record_counts(n: int, type_d: bool = False, guard: Optional[int] = None) -> Counter:
    """Distribution of SignedStatRecords over S_n^B, or over S_n^D with desD filled in."""
    family = Family.SD if type_d else Family.SB
    return Counter(signed_stats(p, with_type_d=type_d) for p in enumerate_family(family, n, guard))


@lru_cache(maxsize=None)
def perm_record_counts(n: int, derangements: bool = False, guard: Optional[int] = None) -> Counter:
    """Distribution of PermStatRecords over S_n or over the derangements of [n]."""
    family = Family.DERANGE if derangements else Family.S
    return Counter(perm_stats(p) for p in enumerate_family(family, n, guard))


def project(counts: Counter, names: Tuple[str, ...]) -> Counter:
    """
    Marginalizes a record distribution onto some of its fields.

    Args:
        counts (Counter): Record -> multiplicity.
        names (Tuple[str, ...]): Attribute names to keep, in order.

    Returns:
        Counter: Tuple of kept values -> multiplicity.
    """
    out: Counter = Counter()
    for record, count in counts.items():
        out[tuple(getattr(record, name) for name in names)] += count
    return out


def object_stats(family: Family, obj) -> Union[StatRecord, QZeroStatRecord, SignedStatRecord, PermStatRecord, ExteriorStatRecord]:
    """
    Computes the statistics record the command line reports for one object.

    Trees report their exterior slot counts; signed permutations of type D
    carry desD whenever n >= 2.
    """
    if family in (Family.Q, Family.Q1):
        return word_stats(obj)
    if family is Family.Q0:
        return qzero_stats(obj)
    if family is Family.CODE:
        return code_stats(obj)
    if family is Family.TREE:
        return exterior_stats(obj)
    if family is Family.SB:
        return signed_stats(obj)
    if family is Family.SD:
        return signed_stats(obj, with_type_d=obj.n >= 2)
    return perm_stats(obj)
