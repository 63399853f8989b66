"""
Domain value types, enums and configuration constants
"""

from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Iterator, Optional, Tuple

from src.exceptions import DomainError


# Invariants of an I-surface: K^2 = 1, p_g = 2, q = 0
I_SURFACE_K2 = 1
I_SURFACE_PG = 2
I_SURFACE_CHI = 3

MAIN_COMPONENT_DIM = 28
DEFAULT_D_MAX = 32
CENSUS_MAX_LEVEL = 2
CENSUS_WORKERS = 8
VERIFY_M_MAX = 10
PLURIGENERA_M_MAX = 20


class StringKind(str, Enum):
    rational_double_point = "rational_double_point"
    non_canonical_t = "non_canonical_t"
    not_t = "not_t"


class Verdict(str, Enum):
    pending = "pending"
    admitted = "admitted"
    excluded = "excluded"
    unresolved = "unresolved"


class Component(str, Enum):
    main_component_divisor = "main_component_divisor"
    main_component_codim = "main_component_codim"
    new_component = "new_component"
    not_applicable = "not_applicable"


class Smoothable(str, Enum):
    yes = "yes"
    no = "no"
    conjectural = "conjectural"


class Construction(str, Enum):
    double_cover_f2 = "double_cover_f2"
    elliptic_i2_blowup = "elliptic_i2_blowup"
    elliptic_two_blowups = "elliptic_two_blowups"


@dataclass(frozen=True)
class TString:
    """
    Chain [b_1, ..., b_r] of negated self-intersections, every b_i >= 2
    """

    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise DomainError("a T-string needs at least one entry")
        bad = [b for b in self.entries if b < 2]
        if bad:
            raise DomainError(f"string entries must be >= 2, got {list(self.entries)}")

    @classmethod
    def of(cls, *entries: int) -> "TString":
        return cls(tuple(int(b) for b in entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self) -> str:
        return "[" + ",".join(str(b) for b in self.entries) + "]"


@dataclass(frozen=True)
class QuotientType:
    """
    The singularity 1/N(1, Q) with N = d n^2 and Q = d n a - 1
    """

    d: int
    n: int
    a: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError(f"d must be positive, got {self.d}")
        if self.n < 2:
            raise DomainError(f"n must be >= 2, got {self.n}")
        if not 0 < self.a < self.n or gcd(self.a, self.n) != 1:
            raise DomainError(
                f"a must be coprime to n with 0 < a < n, got a={self.a}, n={self.n}"
            )

    @property
    def N(self) -> int:
        return self.d * self.n * self.n

    @property
    def Q(self) -> int:
        return self.d * self.n * self.a - 1

    @property
    def label(self) -> str:
        return f"1/{self.N}(1,{self.Q})"


@dataclass(frozen=True)
class StringClass:
    kind: StringKind
    quotient: Optional[QuotientType] = None

    @property
    def is_t(self) -> bool:
        return self.kind == StringKind.non_canonical_t
