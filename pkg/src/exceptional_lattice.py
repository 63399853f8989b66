"""
Intersection theory on the exceptional locus of a resolution

All arithmetic is exact: integer Gram matrices and sympy rationals.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from src.exceptions import DomainError, InvariantError
from src.schema import TString
from src.utils import fractional_part

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExceptionalConfig:
    """
    Curves E_i with Gram matrix (E_i.E_j), degrees K.E_i, chi(O) and K^2
    """

    curve_names: Tuple[str, ...]
    gram: Tuple[Tuple[int, ...], ...]
    k_degrees: Tuple[int, ...]
    chi: int
    k_self: int

    def __post_init__(self) -> None:
        size = len(self.curve_names)
        if len(self.gram) != size or any(len(row) != size for row in self.gram):
            raise DomainError(f"Gram matrix must be {size}x{size}")
        if len(self.k_degrees) != size:
            raise DomainError(
                f"expected {size} canonical degrees, got {len(self.k_degrees)}"
            )
        for i in range(size):
            if self.gram[i][i] >= 0:
                raise DomainError(
                    f"curve {self.curve_names[i]} has non-negative self-intersection"
                )
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise DomainError("Gram matrix must be symmetric")

    @property
    def matrix(self) -> sp.Matrix:
        return sp.Matrix(self.gram)

    def __len__(self) -> int:
        return len(self.curve_names)


@dataclass(frozen=True)
class QDivisor:
    curve_names: Tuple[str, ...]
    coeffs: Tuple[sp.Rational, ...]

    @property
    def vector(self) -> sp.Matrix:
        return sp.Matrix(self.coeffs)

    def __str__(self) -> str:
        return " + ".join(
            f"{c}*{name}" for c, name in zip(self.coeffs, self.curve_names)
        )


def chain_config(
    s: TString,
    chi: int,
    k_self: int,
    curve_names: Optional[Sequence[str]] = None,
) -> ExceptionalConfig:
    """
    Tridiagonal configuration of a chain of smooth rational curves
    """
    r = len(s)
    names = tuple(curve_names) if curve_names else tuple(f"E{i + 1}" for i in range(r))
    if len(names) != r:
        raise DomainError(f"{r} curves need {r} names, got {len(names)}")
    gram = [[0] * r for _ in range(r)]
    for i, b in enumerate(s):
        gram[i][i] = -b
        if i + 1 < r:
            gram[i][i + 1] = gram[i + 1][i] = 1
    return ExceptionalConfig(
        curve_names=names,
        gram=tuple(tuple(row) for row in gram),
        # adjunction on a rational curve: K.E = -E^2 - 2
        k_degrees=tuple(b - 2 for b in s),
        chi=chi,
        k_self=k_self,
    )


def leading_minors(gram: Sequence[Sequence[int]]) -> List[int]:
    """
    Leading principal minors as running products of the LU pivots
    """
    matrix = sp.Matrix(gram)
    _, upper, perm = matrix.LUdecomposition(rankcheck=False)
    pivots = [upper[i, i] for i in range(matrix.rows)]
    if perm or any(p == 0 for p in pivots):
        # row swaps break the pivot products; take each minor on its own
        return [
            int(matrix[:k, :k].det(method="bareiss"))
            for k in range(1, matrix.rows + 1)
        ]
    minors: List[int] = []
    running = sp.Integer(1)
    for pivot in pivots:
        running *= pivot
        minors.append(int(running))
    return minors


def is_negative_definite(gram: Sequence[Sequence[int]]) -> bool:
    return all(
        (minor < 0 if k % 2 == 0 else minor > 0)
        for k, minor in enumerate(leading_minors(gram))
    )


def discrepancies(cfg: ExceptionalConfig) -> QDivisor:
    """
    Solve (K + sum a_i E_i).E_j = 0 for the a_i
    """
    minors = leading_minors(cfg.gram)
    if minors[-1] == 0:
        raise DomainError("singular Gram matrix: the curves cannot be contracted")
    if not is_negative_definite(cfg.gram):
        logger.warning("Gram matrix of %s is not negative definite", cfg.curve_names)

    gram = cfg.matrix
    rhs = sp.Matrix([-k for k in cfg.k_degrees])
    solution = gram.LUsolve(rhs)
    residual = gram * solution - rhs
    if any(entry != 0 for entry in residual):
        raise InvariantError(f"discrepancy residual is not zero: {list(residual)}")
    return QDivisor(cfg.curve_names, tuple(sp.Rational(x) for x in solution))


def cartier_index(delta: QDivisor) -> int:
    return int(sp.ilcm(1, *[sp.Rational(c).q for c in delta.coeffs]))


def kx_squared(cfg: ExceptionalConfig, delta: QDivisor) -> sp.Rational:
    """
    (K + Delta)^2 = K^2 + K.Delta, using (K + Delta).E_i = 0
    """
    return sp.Rational(cfg.k_self) + sum(
        (k * a for k, a in zip(cfg.k_degrees, delta.coeffs)), sp.Rational(0)
    )


def self_intersection(cfg: ExceptionalConfig, delta: QDivisor) -> sp.Rational:
    """
    (K + Delta)^2 = K^2 + 2 K.Delta + Delta^2 expanded term by term
    """
    a = delta.vector
    k_dot_delta = sum(
        (k * c for k, c in zip(cfg.k_degrees, delta.coeffs)), sp.Rational(0)
    )
    delta_sq = (a.T * cfg.matrix * a)[0, 0]
    return sp.Rational(cfg.k_self) + 2 * k_dot_delta + delta_sq


def k2_resolution(k2_x, r: int, d: int) -> sp.Rational:
    """
    K^2 of the minimal resolution: K_X^2 - (r - d + 1)
    """
    if r < d:
        raise DomainError(f"need r >= d, got r={r}, d={d}")
    return sp.Rational(k2_x) - (r - d + 1)


def riemann_roch(chi: int, l_self, k_dot_l) -> sp.Rational:
    return sp.Rational(chi) + (sp.Rational(l_self) - sp.Rational(k_dot_l)) / 2


def pullback_multiple(
    delta: QDivisor, m: int
) -> Tuple[Tuple[int, ...], Tuple[sp.Rational, ...]]:
    """
    Split m*Delta into its integral part and fractional part
    """
    integral = tuple(int(sp.floor(m * c)) for c in delta.coeffs)
    fractional = tuple(fractional_part(m * c) for c in delta.coeffs)
    return integral, fractional


def correction_term(cfg: ExceptionalConfig, delta: QDivisor, m: int) -> sp.Rational:
    """
    1/2 {m Delta}.({m Delta} - {Delta}) paired through the Gram matrix
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    _, frac_m = pullback_multiple(delta, m)
    _, frac_1 = pullback_multiple(delta, 1)
    left = sp.Matrix(frac_m)
    right = sp.Matrix([x - y for x, y in zip(frac_m, frac_1)])
    return sp.Rational((left.T * cfg.matrix * right)[0, 0]) / 2


def plurigenus(
    chi: int, k2_x, cfg: ExceptionalConfig, delta: QDivisor, m: int
) -> sp.Rational:
    """
    h^0(m K_X) = chi + m(m-1)/2 K_X^2 + correction, valid for m >= 2
    """
    if m < 2:
        raise DomainError(f"the plurigenus formula needs m >= 2, got m={m}")
    return (
        sp.Rational(chi)
        + sp.Rational(m * (m - 1), 2) * sp.Rational(k2_x)
        + correction_term(cfg, delta, m)
    )
