"""
Combinatorial Object Models

This module defines the immutable value types produced by enumeration:
Stirling words (and their two variants), SP-codes, increasing plane ternary
trees, plain and signed permutations. Each object knows how to render itself
as text and as a JSON-ready dictionary; membership rules live in the
enumeration service.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Tuple


class WordVariant(str, Enum):
    """Which family of Stirling-like words a StirlingWord belongs to."""
    FULL = "Q"        # both copies of 1..n
    PINNED = "Q1"     # both copies of 1..n, the two 1s adjacent
    SINGLE_ONE = "Q0"  # a single 1, two copies of 2..n


def _letters_text(letters: Tuple[int, ...]) -> str:
    if letters and max(letters) >= 10:
        return " ".join(map(str, letters))
    return "".join(map(str, letters))


@dataclass(frozen=True)
class StirlingWord:
    """
    A word where, between the two copies of any value, all letters are larger.

    Attributes:
        letters (Tuple[int, ...]): The letters, left to right.
        variant (WordVariant): The family the word was drawn from.
    """
    letters: Tuple[int, ...]
    variant: WordVariant = WordVariant.FULL

    @property
    def n(self) -> int:
        if self.variant is WordVariant.SINGLE_ONE:
            return (len(self.letters) + 1) // 2
        return len(self.letters) // 2

    def __str__(self) -> str:
        return _letters_text(self.letters)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "word", "variant": self.variant.value, "word": list(self.letters)}


@dataclass(frozen=True)
class SPCode:
    """
    A Stirling permutation code: a sequence of pairs (a, b).

    The first pair is (0, 0); pair i (1-based) has 1 <= a < i and b in {1, 2, 3},
    and no pair repeats. Pair (a, b) of entry i says node i hangs in slot b of node a.
    """
    pairs: Tuple[Tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.pairs)

    def used_slots(self) -> List[frozenset]:
        """Returns, for each value a (index a), the set of slots b with (a, b) in the code."""
        used: List[set] = [set() for _ in range(self.n + 1)]
        for a, b in self.pairs[1:]:
            used[a].add(b)
        return [frozenset(s) for s in used]

    def __str__(self) -> str:
        return " ".join(f"({a},{b})" for a, b in self.pairs)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "code", "code": [list(pair) for pair in self.pairs]}


@dataclass(frozen=True)
class TernaryTree:
    """
    An increasing plane ternary tree on nodes 1..n rooted at 1.

    Attributes:
        children (Tuple[Tuple[int, int, int], ...]): children[v-1] holds the
            (left, middle, right) child labels of node v, 0 for an empty slot.
    """
    children: Tuple[Tuple[int, int, int], ...]

    @property
    def n(self) -> int:
        return len(self.children)

    def parent_slots(self) -> Dict[int, Tuple[int, int]]:
        """Maps each non-root node to its (parent, slot) with slots numbered 1..3."""
        out: Dict[int, Tuple[int, int]] = {}
        for parent, slots in enumerate(self.children, start=1):
            for slot, child in enumerate(slots, start=1):
                if child:
                    out[child] = (parent, slot)
        return out

    def __str__(self) -> str:
        return " ".join(f"{v}:[{l},{m},{r}]" for v, (l, m, r) in enumerate(self.children, start=1))

    def to_dict(self) -> Dict[str, Any]:
        links = self.parent_slots()
        parents = [links[v][0] if v in links else 0 for v in range(1, self.n + 1)]
        slots = [links[v][1] if v in links else 0 for v in range(1, self.n + 1)]
        return {"kind": "tree", "parent": parents, "slot": slots}


@dataclass(frozen=True)
class Permutation:
    """A permutation of 1..n in one-line notation."""
    values: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return " ".join(map(str, self.values))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "permutation", "values": list(self.values)}


@dataclass(frozen=True)
class SignedPerm:
    """A signed permutation: a permutation of 1..n where each value carries a sign."""
    values: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return " ".join(map(str, self.values))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "signed_permutation", "values": list(self.values)}
