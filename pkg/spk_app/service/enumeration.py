"""
Enumeration Service

This module generates every object of the supported combinatorial families
and implements the bijections between Stirling words, ternary increasing
trees and SP-codes.

Stirling words are grown by inserting the adjacent pair (m, m) into every gap
of a word of the previous size. The kind of gap used (ascent, plateau or
descent, with 0 beyond both ends) is recorded at the same time, which gives
the SP-code of each word without a second pass.
"""

from enum import Enum
from functools import reduce
from itertools import permutations, product
from math import factorial
from typing import Dict, Iterator, List, Optional, Tuple, Union

from spk_app.config import DEFAULT_RESOURCE_GUARD
from spk_app.errors import IndexRangeError, InvalidObjectError, InvariantError, ResourceGuardError, UnknownNameError
from spk_app.logger.logger import logger
from spk_app.model.objects import Permutation, SignedPerm, SPCode, StirlingWord, TernaryTree, WordVariant

Pair = Tuple[int, int]
FamilyObject = Union[StirlingWord, SignedPerm, Permutation, SPCode, TernaryTree]


class Family(str, Enum):
    """Enumerable families; values are the command line spellings."""
    Q = "q"
    Q1 = "q1"
    Q0 = "q0"
    SB = "sb"
    SD = "sd"
    S = "s"
    CODE = "code"
    TREE = "tree"
    DERANGE = "derange"


def parse_family(name: Union[str, Family]) -> Family:
    """
    Resolves a family name, case-insensitively.

    Raises:
        UnknownNameError: If the name is not a family.
    """
    if isinstance(name, Family):
        return name
    try:
        return Family(name.lower())
    except ValueError:
        raise UnknownNameError(f"Unknown family {name!r}; expected one of {[f.value for f in Family]}") from None


def double_factorial_odd(n: int) -> int:
    """(2n-1)!! = 1 * 3 * ... * (2n-1); 1 for n = 0."""
    return reduce(lambda acc, k: acc * (2 * k - 1), range(1, n + 1), 1)


def derangement_count(n: int) -> int:
    a, b = 1, 0
    if n == 0:
        return 1
    for k in range(2, n + 1):
        a, b = b, (k - 1) * (a + b)
    return b


def count_family(family: Union[str, Family], n: int) -> int:
    """
    Closed-form size of a family.

    Args:
        family (Union[str, Family]): Family name.
        n (int): Size parameter.

    Returns:
        int: Number of objects; 0 when n is below the family's range.
    """
    family = parse_family(family)
    if n < 1:
        return 0
    if family in (Family.Q, Family.CODE, Family.TREE):
        return double_factorial_odd(n)
    if family in (Family.Q1, Family.Q0):
        return 2 ** (n - 1) * factorial(n - 1)
    if family is Family.SB:
        return 2 ** n * factorial(n)
    if family is Family.SD:
        return 2 ** (n - 1) * factorial(n)
    if family is Family.S:
        return factorial(n)
    return derangement_count(n)


def check_guard(family: Union[str, Family], n: int, guard: Optional[int] = None) -> int:
    """
    Refuses enumerations larger than the resource guard.

    Returns:
        int: The family size when it fits.

    Raises:
        ResourceGuardError: When count_family(family, n) exceeds the guard.
    """
    family = parse_family(family)
    guard = DEFAULT_RESOURCE_GUARD if guard is None else guard
    size = count_family(family, n)
    if size > guard:
        logger.warning(f"Refusing to enumerate {family.value} at n={n}: {size} objects > guard {guard}")
        raise ResourceGuardError(family.value, n, size, guard)
    return size


def gap_label(left: int, right: int) -> Pair:
    """
    Classifies the gap between two neighbours of a Stirling word.

    Args:
        left (int): Letter before the gap, 0 at the start.
        right (int): Letter after the gap, 0 at the end.

    Returns:
        Pair: (right, 1) for an ascent, (right, 2) for a plateau, (left, 3) for a descent.
    """
    if left < right:
        return right, 1
    if left == right:
        return right, 2
    return left, 3


def _grow(word: Tuple[int, ...], code: Tuple[Pair, ...], m: int, n: int, skip_pinned: bool) -> Iterator[Tuple[Tuple[int, ...], Tuple[Pair, ...]]]:
    if m > n:
        yield word, code
        return
    pinned = word.index(1) + 1 if skip_pinned else -1
    for gap in range(len(word) + 1):
        if gap == pinned:
            continue
        left = word[gap - 1] if gap else 0
        right = word[gap] if gap < len(word) else 0
        yield from _grow(word[:gap] + (m, m) + word[gap:], code + (gap_label(left, right),), m + 1, n, skip_pinned)


def stirling_words_with_codes(n: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[Pair, ...]]]:
    """
    Yields every word of Q_n together with its SP-code, as raw tuples.

    Args:
        n (int): Size, n >= 1.
    """
    if n < 1:
        raise IndexRangeError("Stirling words need n >= 1")
    return _grow((1, 1), ((0, 0),), 2, n, False)


def _variant_words(n: int, variant: WordVariant) -> Iterator[Tuple[int, ...]]:
    if variant is WordVariant.FULL:
        return (word for word, _ in _grow((1, 1), ((0, 0),), 2, n, False))
    if variant is WordVariant.PINNED:
        return (word for word, _ in _grow((1, 1), ((0, 0),), 2, n, True))
    return (word for word, _ in _grow((1,), (), 2, n, False))


def _codes(prefix: Tuple[Pair, ...], n: int) -> Iterator[Tuple[Pair, ...]]:
    i = len(prefix)
    if i == n:
        yield prefix
        return
    taken = set(prefix)
    for a in range(1, i + 1):
        for b in (1, 2, 3):
            if (a, b) not in taken:
                yield from _codes(prefix + ((a, b),), n)


def _signed(n: int, even_negatives: bool) -> Iterator[Tuple[int, ...]]:
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            if even_negatives and signs.count(-1) % 2:
                continue
            yield tuple(s * v for s, v in zip(signs, perm))


def enumerate_family(family: Union[str, Family], n: int, guard: Optional[int] = None) -> Iterator[FamilyObject]:
    """
    Lazily yields every object of a family exactly once.

    Words, codes and trees come in insertion order; permutations in
    lexicographic order (sign patterns innermost for signed permutations).

    Args:
        family (Union[str, Family]): Family name.
        n (int): Size parameter, n >= 1.
        guard (Optional[int]): Largest allowed family size.

    Raises:
        IndexRangeError: If n < 1.
        ResourceGuardError: If the family is larger than the guard.
    """
    family = parse_family(family)
    if n < 1:
        raise IndexRangeError(f"Family {family.value} needs n >= 1, got {n}")
    check_guard(family, n, guard)
    logger.debug(f"Enumerating {family.value} at n={n}")
    if family is Family.Q:
        return (StirlingWord(w, WordVariant.FULL) for w in _variant_words(n, WordVariant.FULL))
    if family is Family.Q1:
        return (StirlingWord(w, WordVariant.PINNED) for w in _variant_words(n, WordVariant.PINNED))
    if family is Family.Q0:
        return (StirlingWord(w, WordVariant.SINGLE_ONE) for w in _variant_words(n, WordVariant.SINGLE_ONE))
    if family is Family.CODE:
        return (SPCode(c) for c in _codes(((0, 0),), n))
    if family is Family.TREE:
        return (code_to_tree(SPCode(c)) for c in _codes(((0, 0),), n))
    if family is Family.SB:
        return (SignedPerm(v) for v in _signed(n, False))
    if family is Family.SD:
        return (SignedPerm(v) for v in _signed(n, True))
    if family is Family.S:
        return (Permutation(p) for p in permutations(range(1, n + 1)))
    return (Permutation(p) for p in permutations(range(1, n + 1)) if all(v != i for i, v in enumerate(p, start=1)))


def is_stirling_word(letters: Tuple[int, ...], variant: WordVariant = WordVariant.FULL) -> bool:
    """
    Checks membership in Q_n, Q_n^(1) or Q_n^(0) directly from the definition.

    Args:
        letters (Tuple[int, ...]): Candidate word.
        variant (WordVariant): Family to test against.

    Returns:
        bool: True when the word belongs to the family.
    """
    positions: Dict[int, List[int]] = {}
    for index, letter in enumerate(letters):
        positions.setdefault(letter, []).append(index)
    n = max(positions) if positions else 0
    if n < 1 or set(positions) != set(range(1, n + 1)):
        return False
    for value, where in positions.items():
        expected = 1 if (variant is WordVariant.SINGLE_ONE and value == 1) else 2
        if len(where) != expected:
            return False
        if expected == 2 and any(letters[k] <= value for k in range(where[0] + 1, where[1])):
            return False
    if variant is WordVariant.PINNED and positions[1][1] != positions[1][0] + 1:
        return False
    return True


def is_sp_code(code: SPCode) -> bool:
    """Checks the SP-code rules: leading (0,0), 1 <= a < i, b in {1,2,3}, no repeats."""
    pairs = code.pairs
    if not pairs or pairs[0] != (0, 0):
        return False
    for i, (a, b) in enumerate(pairs[1:], start=2):
        if not (1 <= a < i and b in (1, 2, 3)):
            return False
    return len(set(pairs)) == len(pairs)


def _require_word(word: StirlingWord) -> None:
    if word.variant is not WordVariant.FULL or not is_stirling_word(word.letters):
        raise InvalidObjectError(f"{word} is not a Stirling permutation")


def tree_to_word(tree: TernaryTree) -> StirlingWord:
    """
    Reads a tree depth first: left subtree, v, middle subtree, v, right subtree.

    Args:
        tree (TernaryTree): The tree.

    Returns:
        StirlingWord: The word in Q_n.
    """
    out: List[int] = []

    def visit(v: int) -> None:
        left, middle, right = tree.children[v - 1]
        if left:
            visit(left)
        out.append(v)
        if middle:
            visit(middle)
        out.append(v)
        if right:
            visit(right)

    visit(1)
    return StirlingWord(tuple(out))


def word_to_tree(word: StirlingWord) -> TernaryTree:
    """
    Splits a word around the two copies of its smallest letter, recursively.

    Raises:
        InvalidObjectError: If the word is not in Q_n.
    """
    _require_word(word)
    children: List[List[int]] = [[0, 0, 0] for _ in range(word.n)]

    def attach(segment: Tuple[int, ...]) -> int:
        if not segment:
            return 0
        root = min(segment)
        first = segment.index(root)
        second = segment.index(root, first + 1)
        children[root - 1] = [attach(segment[:first]), attach(segment[first + 1:second]), attach(segment[second + 1:])]
        return root

    attach(word.letters)
    return TernaryTree(tuple(tuple(slots) for slots in children))


def tree_to_code(tree: TernaryTree) -> SPCode:
    """Records, for nodes 2..n, the parent and the slot each hangs from."""
    links = tree.parent_slots()
    return SPCode(((0, 0),) + tuple(links[v] for v in range(2, tree.n + 1)))


def code_to_tree(code: SPCode) -> TernaryTree:
    """
    Hangs node i in slot b of node a for each pair (a, b).

    Raises:
        InvalidObjectError: If a pair is out of range or reuses an occupied slot.
    """
    if not code.pairs or code.pairs[0] != (0, 0):
        raise InvalidObjectError(f"SP-code must start with (0,0): {code}")
    children: List[List[int]] = [[0, 0, 0] for _ in range(code.n)]
    for i, (a, b) in enumerate(code.pairs[1:], start=2):
        if not (1 <= a < i and 1 <= b <= 3):
            raise InvalidObjectError(f"Pair ({a},{b}) is invalid at position {i}")
        if children[a - 1][b - 1]:
            raise InvalidObjectError(f"Slot {b} of node {a} is already occupied")
        children[a - 1][b - 1] = i
    return TernaryTree(tuple(tuple(slots) for slots in children))


def word_to_code(word: StirlingWord) -> SPCode:
    """
    Recovers the insertion history of a Stirling word as an SP-code.

    For m = n down to 2 the adjacent pair (m, m) is removed and the gap it
    leaves is classified like during enumeration.

    Raises:
        InvalidObjectError: If the word is not in Q_n.
        InvariantError: If two insertions produce the same gap label.
    """
    _require_word(word)
    letters = list(word.letters)
    pairs: List[Pair] = []
    for m in range(word.n, 1, -1):
        i = letters.index(m)
        left = letters[i - 1] if i > 0 else 0
        right = letters[i + 2] if i + 2 < len(letters) else 0
        pairs.append(gap_label(left, right))
        del letters[i:i + 2]
    pairs.append((0, 0))
    pairs.reverse()
    if len(set(pairs)) != len(pairs):
        raise InvariantError(f"Gap labels of {word} are not distinct: {pairs}")
    return SPCode(tuple(pairs))


def code_to_word(code: SPCode) -> StirlingWord:
    """Inverse of word_to_code, through the tree."""
    return tree_to_word(code_to_tree(code))
