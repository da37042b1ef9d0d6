"""
Result Record Models

Plain immutable records returned by the statistics, catalog, verification
and analysis services. Every record exposes `to_dict()` producing the
JSON-ready shape written by the command line.
"""

from dataclasses import asdict, dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class StatRecord:
    """Statistics of a Stirling word (or the equal values read off its code)."""
    asc: int
    plat: int
    des: int
    lap: int
    ap: int
    rpd: int
    eud: int
    apd: int
    vv: int
    apap: int
    dpa: int
    pdpd: int
    dplat: int
    dasc: int
    dd: int
    uu: int
    ddes: int
    pasc: int

    def class_counts(self) -> Dict[str, int]:
        """
        Splits the n values by the set of occupied child slots.

        Returns:
            Dict[str, int]: Count per slot set; the eight counts add up to n.
        """
        return {
            "none": self.apd,
            "all": self.vv,
            "middle_right": self.apap,
            "left_right": self.dpa,
            "left_middle": self.pdpd,
            "left_only": self.dplat - self.dpa,
            "middle_only": self.dasc - self.apap,
            "right_only": self.uu - self.apap,
        }

    @property
    def alpha(self) -> int:
        """Number of values with exactly two occupied slots."""
        return self.apap + self.dpa + self.pdpd

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class QZeroStatRecord:
    """Statistics of a word with a single 1."""
    lap: int
    ap: int
    even: int

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class SignedStatRecord:
    """Descent statistics of a signed permutation; des_d is None unless requested."""
    des_a: int
    des_b: int
    neg: int
    fdes: int
    des_d: Optional[int] = None

    def to_dict(self) -> Dict[str, int]:
        out = {"desA": self.des_a, "desB": self.des_b, "neg": self.neg, "fdes": self.fdes}
        if self.des_d is not None:
            out["desD"] = self.des_d
        return out


@dataclass(frozen=True)
class PermStatRecord:
    """Statistics of a plain permutation."""
    des: int
    exc: int
    ipk: int
    lpk: int
    udrun: int
    fix: int

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class ExteriorStatRecord:
    """Number of empty left, middle and right slots of a ternary tree."""
    exl: int
    exm: int
    exr: int

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class GammaTable:
    """
    Coefficients gamma(n, i, j, k), indexed by (i, j, k).

    Only non-zero entries are stored.
    """
    n: int
    entries: Dict[Tuple[int, int, int], int]

    def get(self, i: int, j: int, k: int) -> int:
        return self.entries.get((i, j, k), 0)

    def rows(self) -> List[Tuple[Tuple[int, int, int], int]]:
        """Entries ordered by descending k, then descending i."""
        return sorted(self.entries.items(), key=lambda item: (-item[0][2], -item[0][0], -item[0][1]))

    def mass(self, weight: int = 3) -> int:
        """Sum of gamma * weight^(i+j); equals (2n-1)!! for weight 3."""
        return sum(value * weight ** (i + j) for (i, j, _), value in self.entries.items())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "entries": [{"i": i, "j": j, "k": k, "value": v} for (i, j, k), v in self.rows()],
        }


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"


@dataclass
class VerifyRow:
    """Outcome of one check at one n."""
    check_id: str
    n: int
    status: CheckStatus
    detail: str = ""
    counterexample: Optional[Dict[str, Any]] = None
    millis: int = 0

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def to_dict(self, with_timing: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {"check_id": self.check_id, "n": self.n, "status": self.status.value}
        if self.detail:
            out["detail"] = self.detail
        if self.counterexample:
            out["counterexample"] = self.counterexample
        if with_timing:
            out["millis"] = self.millis
        return out


@dataclass
class VerifyReport:
    """All rows of a verification run in (check, n) order."""
    rows: List[VerifyRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def failures(self) -> List[VerifyRow]:
        return [row for row in self.rows if not row.passed]

    def to_dict(self, with_timing: bool = False) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "rows": [row.to_dict(with_timing) for row in self.rows],
        }


class InterlaceVerdict(str, Enum):
    """How the roots of p sit against the roots of q."""
    INTERLACES = "interlaces"
    ALTERNATES_LEFT = "alternates-left"
    NEITHER = "neither"
    VACUOUS = "vacuous"


@dataclass(frozen=True)
class RootInterval:
    """
    A real root located either exactly or inside an open interval.

    Attributes:
        lo (Fraction): Lower end (equal to hi for an exact root).
        hi (Fraction): Upper end.
        multiplicity (int): Multiplicity of the root.
        exact (bool): True when lo == hi is the root itself.
    """
    lo: Fraction
    hi: Fraction
    multiplicity: int
    exact: bool

    def to_dict(self) -> Dict[str, Any]:
        if self.exact:
            return {"root": str(self.lo), "multiplicity": self.multiplicity}
        return {"interval": [str(self.lo), str(self.hi)], "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class RootReport:
    """Real-root summary of a univariate polynomial."""
    label: str
    degree: int
    real_root_count: int
    roots: Tuple[RootInterval, ...]
    window_counts: Dict[str, int]

    @property
    def real_rooted(self) -> bool:
        return self.real_root_count == self.degree

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "degree": self.degree,
            "real_root_count": self.real_root_count,
            "real_rooted": self.real_rooted,
            "roots": [root.to_dict() for root in self.roots],
            "windows": dict(self.window_counts),
        }


@dataclass(frozen=True)
class ZeroTheoremRow:
    """Per-n outcome of the structural zero checks on f_n, xi_n and zeta_n."""
    n: int
    checks: Dict[str, bool]
    detail: str = ""

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"n": self.n, "passed": self.passed, "checks": dict(self.checks)}
        if self.detail:
            out["detail"] = self.detail
        return out
