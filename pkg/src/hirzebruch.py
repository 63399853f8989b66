"""
Divisor classes, cohomology and double covers on Hirzebruch surfaces F_n

Classes are stored as a*Gamma + b*sigma_inf where Gamma is a ruling and
sigma_inf the negative section; sigma_0 = sigma_inf + n*Gamma.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from src.exceptions import DomainError, InvariantError
from src.schema import MAIN_COMPONENT_DIM

logger = logging.getLogger(__name__)


class ModuliCase(str, Enum):
    generic = "generic"
    r1 = "R1"
    r2 = "R2"
    r3 = "R3"
    f6_nodal_branch = "F6_NODAL_BRANCH"
    f6_smooth_branch = "F6_SMOOTH_BRANCH"


# index-2 surfaces: double covers of F_2 branched in |4 sigma_0 + 2 Gamma|
BICANONICAL_BASE = 2
BICANONICAL_BRANCH = (4, 2)
# elliptic surfaces with a (-3)-section: double covers of F_6 branched in
# sigma_inf + |3 sigma_0|
ELLIPTIC_BASE = 6
ELLIPTIC_BRANCH_MOVING = (3, 0)

# d1 of each reducible branch case, in the (sigma_0, Gamma) basis
REDUCIBLE_CASES: Dict[ModuliCase, Tuple[int, int]] = {
    ModuliCase.r1: (0, 1),
    ModuliCase.r2: (1, 1),
    ModuliCase.r3: (2, 1),
}
# genus-2 curves in |2 sigma_0 + Gamma| with a Weierstrass point on sigma_inf,
# up to automorphisms of F_2
WEIERSTRASS_FAMILY_DIM = 3


@dataclass(frozen=True)
class FnClass:
    n: int
    a: int  # coefficient of Gamma
    b: int  # coefficient of sigma_inf

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError(f"Hirzebruch parameter must be >= 0, got {self.n}")

    @classmethod
    def ruling(cls, n: int) -> "FnClass":
        return cls(n, 1, 0)

    @classmethod
    def sigma_inf(cls, n: int) -> "FnClass":
        return cls(n, 0, 1)

    @classmethod
    def sigma0(cls, n: int) -> "FnClass":
        return cls(n, n, 1)

    @classmethod
    def from_sigma0(cls, n: int, x: int, y: int) -> "FnClass":
        """
        x*sigma_0 + y*Gamma
        """
        return cls(n, n * x + y, x)

    def to_sigma0(self) -> Tuple[int, int]:
        return self.b, self.a - self.n * self.b

    def _check(self, other: "FnClass") -> None:
        if not isinstance(other, FnClass):
            raise DomainError(f"cannot combine a class on F_{self.n} with {other!r}")
        if other.n != self.n:
            raise DomainError(
                f"classes live on different surfaces: F_{self.n} and F_{other.n}"
            )

    def __add__(self, other: "FnClass") -> "FnClass":
        self._check(other)
        return FnClass(self.n, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "FnClass") -> "FnClass":
        self._check(other)
        return FnClass(self.n, self.a - other.a, self.b - other.b)

    def __mul__(self, k: int) -> "FnClass":
        return FnClass(self.n, k * self.a, k * self.b)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def label(self) -> str:
        x, y = self.to_sigma0()
        parts = []
        if x:
            parts.append(f"{x}σ0" if x != 1 else "σ0")
        if y:
            term = f"{abs(y)}Γ" if abs(y) != 1 else "Γ"
            sign = "-" if y < 0 else ("+" if parts else "")
            parts.append(sign + term)
        return "".join(parts) if parts else "0"

    def __str__(self) -> str:
        return f"{self.label} on F_{self.n}"


@dataclass(frozen=True)
class CoverInvariants:
    chi: int
    k_self: int
    p_g: int
    q: int
    adjoint: FnClass


@dataclass(frozen=True)
class Splitting:
    d1: FnClass
    d2: FnClass
    m: int
    d: int


def intersect(c1: FnClass, c2: FnClass) -> int:
    """
    Gamma^2 = 0, Gamma.sigma_inf = 1, sigma_inf^2 = -n
    """
    c1._check(c2)
    return c1.a * c2.b + c2.a * c1.b - c1.n * c1.b * c2.b


def canonical_class(n: int) -> FnClass:
    if n < 0:
        raise DomainError(f"Hirzebruch parameter must be >= 0, got {n}")
    return FnClass(n, -(n + 2), -2)


def h0(c: FnClass) -> int:
    """
    Dimension of H^0: sum over j <= b of h^0(P^1, O(a - j n))
    """
    if c.b < 0:
        return 0
    return sum(max(0, c.a - j * c.n + 1) for j in range(c.b + 1))


def is_effective(c: FnClass) -> bool:
    return h0(c) > 0


def aut_dim(n: int) -> int:
    if n < 1:
        raise DomainError(f"aut_dim is defined for n >= 1, got {n}")
    return n + 5


def arithmetic_genus(c: FnClass) -> int:
    numerator = intersect(c, c) + intersect(canonical_class(c.n), c)
    return 1 + numerator // 2


def d_bound(branch: FnClass) -> int:
    """
    Largest d with p_a(branch) - floor((d-1)/2) >= 0, i.e. 2 p_a + 2

    Gives 32 for the bicanonical branch (p_a = 15); the small cases read
    2 and 4 for p_a = 0 and 1.

    An A_{d-2} point on the branch curve drops the genus of the
    normalization by floor((d-1)/2).
    """
    genus = arithmetic_genus(branch)
    if genus < 0:
        raise DomainError(f"{branch} has negative arithmetic genus")
    return 2 * genus + 2


def double_cover(n: int, branch: FnClass) -> CoverInvariants:
    """
    Invariants of the double cover of F_n branched on branch = 2L

    q = 0 is taken for granted over the rational base.
    """
    if branch.n != n:
        raise DomainError(f"branch class lives on F_{branch.n}, not F_{n}")
    if branch.a % 2 or branch.b % 2:
        raise DomainError(f"branch class {branch} is not divisible by 2")
    line = FnClass(n, branch.a // 2, branch.b // 2)
    canonical = canonical_class(n)
    adjoint = canonical + line

    chi = 2 + intersect(line, adjoint) // 2
    k_self = 2 * intersect(adjoint, adjoint)
    p_g = h0(canonical) + h0(adjoint)
    q = 0
    if chi != 1 - q + p_g:
        raise DomainError(
            f"branch {branch} is outside the vanishing range: chi={chi}, p_g={p_g}"
        )
    return CoverInvariants(chi=chi, k_self=k_self, p_g=p_g, q=q, adjoint=adjoint)


def admits_irreducible_member(c: FnClass) -> bool:
    """
    Coefficient filter in the (sigma_0, Gamma) basis: a ruling, or x >= 1, y >= 0
    """
    x, y = c.to_sigma0()
    return (x == 0 and y == 1) or (x >= 1 and y >= 0)


def enumerate_splittings(n: int, total: FnClass) -> List[Splitting]:
    """
    Unordered decompositions total = d1 + d2 with both parts meeting sigma_inf
    """
    if total.n != n:
        raise DomainError(f"class lives on F_{total.n}, not F_{n}")
    if not is_effective(total):
        return []
    x, y = total.to_sigma0()

    infinity = FnClass.sigma_inf(n)
    found: List[Splitting] = []
    for x1 in range(x + 1):
        for y1 in range(y + 1):
            x2, y2 = x - x1, y - y1
            if (x1, y1) > (x2, y2):
                continue
            d1 = FnClass.from_sigma0(n, x1, y1)
            d2 = FnClass.from_sigma0(n, x2, y2)
            if d1.is_zero() or d2.is_zero():
                continue
            if not (admits_irreducible_member(d1) and admits_irreducible_member(d2)):
                continue
            # parts missing sigma_inf would meet each other away from it
            if intersect(d1, infinity) <= 0 or intersect(d2, infinity) <= 0:
                continue
            m = intersect(d1, d2)
            if m < 1:
                continue
            found.append(Splitting(d1=d1, d2=d2, m=m, d=2 * m + 1))
    found.sort(key=lambda s: (s.m, s.d1.to_sigma0()))
    logger.debug("splittings of %s: %d", total, len(found))
    return found


def bicanonical_branch() -> FnClass:
    return FnClass.from_sigma0(BICANONICAL_BASE, *BICANONICAL_BRANCH)


def elliptic_branch() -> FnClass:
    """
    sigma_inf + 3 sigma_0 on F_6
    """
    return FnClass.sigma_inf(ELLIPTIC_BASE) + FnClass.from_sigma0(
        ELLIPTIC_BASE, *ELLIPTIC_BRANCH_MOVING
    )


def splitting_case(split: Splitting) -> Optional[ModuliCase]:
    for case, d1 in REDUCIBLE_CASES.items():
        if split.d1.n == BICANONICAL_BASE and split.d1.to_sigma0() == d1:
            return case
    return None


def _reducible_splitting(case: ModuliCase) -> Splitting:
    for split in enumerate_splittings(BICANONICAL_BASE, bicanonical_branch()):
        if splitting_case(split) == case:
            return split
    raise InvariantError(
        f"no splitting of the bicanonical branch realizes {case.value}"
    )


def moduli_count(case: ModuliCase, d: Optional[int] = None) -> int:
    """
    Number of moduli of each family of branch curves
    """
    case = ModuliCase(case)
    if case == ModuliCase.generic:
        if d not in (1, 2, 3):
            raise DomainError(
                f"generic branch count is only known for d in 1..3, got {d}"
            )
        projective = h0(bicanonical_branch()) - 1
        return projective - aut_dim(BICANONICAL_BASE) - (d - 1)

    if case in (ModuliCase.r1, ModuliCase.r2):
        split = _reducible_splitting(case)
        # D_1 free in its system; D_2 among curves meeting D_1 only at P
        parameters = h0(split.d2 - split.d1) + (h0(split.d1) - 1)
        return parameters - aut_dim(BICANONICAL_BASE)

    if case == ModuliCase.r3:
        return WEIERSTRASS_FAMILY_DIM + 1

    moving = FnClass.from_sigma0(ELLIPTIC_BASE, *ELLIPTIC_BRANCH_MOVING)
    projective = h0(moving) - 1
    if case == ModuliCase.f6_nodal_branch:
        # a node on the branch curve is one condition
        return projective - 1 - aut_dim(ELLIPTIC_BASE)
    if case == ModuliCase.f6_smooth_branch:
        return projective - aut_dim(ELLIPTIC_BASE)
    raise DomainError(f"unsupported moduli case: {case}")


def moduli_for_d(d: int) -> Optional[int]:
    """
    Moduli of the index-2 family of type 1/4d(1,2d-1) when a construction is known
    """
    if d in (1, 2, 3):
        return moduli_count(ModuliCase.generic, d)
    for split in enumerate_splittings(BICANONICAL_BASE, bicanonical_branch()):
        if split.d == d:
            case = splitting_case(split)
            if case is not None:
                return moduli_count(case)
    return None


def moduli_d(case: ModuliCase, d: Optional[int] = None) -> Optional[int]:
    """
    The d a moduli case belongs to, None for the F_6 constructions
    """
    case = ModuliCase(case)
    if case == ModuliCase.generic:
        return d
    if case in REDUCIBLE_CASES:
        return _reducible_splitting(case).d
    return None


def expected_codimension(d: int) -> int:
    return d


def moduli_excess(d: int, moduli: int) -> int:
    """
    Moduli beyond the expected count MAIN_COMPONENT_DIM - d
    """
    return moduli - (MAIN_COMPONENT_DIM - expected_codimension(d))
