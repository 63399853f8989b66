"""
Hilbert series of weighted polynomial rings and complete intersections

A series prod(1 - t^e_j) / prod(1 - t^d_i) is kept as its two multisets of
exponents. The relations are assumed to form a regular sequence.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, List, Optional, Tuple

import sympy as sp

from src.exceptions import DomainError

logger = logging.getLogger(__name__)

t = sp.Symbol("t")


@dataclass(frozen=True)
class HilbertSeries:
    generator_weights: Tuple[int, ...]
    relation_degrees: Tuple[int, ...]

    @property
    def numerator(self) -> sp.Poly:
        return _product(self.relation_degrees)

    @property
    def denominator(self) -> sp.Poly:
        return _product(self.generator_weights)

    def __str__(self) -> str:
        num = "".join(f"(1-t^{e})" for e in self.relation_degrees) or "1"
        den = "".join(f"(1-t^{w})" for w in self.generator_weights) or "1"
        return f"{num}/{den}"


def _product(exponents: Iterable[int]) -> sp.Poly:
    return reduce(
        lambda acc, e: acc * sp.Poly(1 - t**e, t, domain="ZZ"),
        exponents,
        sp.Poly(1, t, domain="ZZ"),
    )


def series(weights: Iterable[int], relations: Iterable[int] = ()) -> HilbertSeries:
    """
    Build the series and cancel factors shared by numerator and denominator
    """
    weights = [int(w) for w in weights]
    relations = [int(e) for e in relations]
    if any(w < 1 for w in weights) or any(e < 1 for e in relations):
        raise DomainError("weights and relation degrees must be >= 1")
    gens, rels = Counter(weights), Counter(relations)
    common = gens & rels
    gens -= common
    rels -= common
    return HilbertSeries(
        generator_weights=tuple(sorted(gens.elements())),
        relation_degrees=tuple(sorted(rels.elements())),
    )


def coefficients(h: HilbertSeries, upto: int) -> List[int]:
    """
    Power series coefficients of degrees 0..upto
    """
    if upto < 0:
        raise DomainError(f"degree must be >= 0, got {upto}")
    coeffs = [0] * (upto + 1)
    coeffs[0] = 1
    # multiply by (1 - t^e)
    for e in h.relation_degrees:
        for k in range(upto, e - 1, -1):
            coeffs[k] -= coeffs[k - e]
    # divide by (1 - t^w)
    for w in h.generator_weights:
        for k in range(w, upto + 1):
            coeffs[k] += coeffs[k - w]
    return coeffs


def coefficient(h: HilbertSeries, m: int) -> int:
    return coefficients(h, m)[m]


def equal(h1: HilbertSeries, h2: HilbertSeries) -> bool:
    """
    Cross-multiplied numerators and denominators agree
    """
    return (h1.numerator * h2.denominator - h2.numerator * h1.denominator).is_zero


def first_mismatch(h: HilbertSeries, chi: int, k2, m_max: int) -> Optional[int]:
    """
    Smallest m in 2..m_max with coefficient != chi + m(m-1)/2 K^2
    """
    if m_max < 2:
        raise DomainError(f"m_max must be >= 2, got {m_max}")
    coeffs = coefficients(h, m_max)
    for m in range(2, m_max + 1):
        expected = sp.Rational(chi) + sp.Rational(m * (m - 1), 2) * sp.Rational(k2)
        if coeffs[m] != expected:
            return m
    return None


def matches_plurigenera(h: HilbertSeries, chi: int, k2, m_max: int) -> bool:
    return first_mismatch(h, chi, k2, m_max) is None


def gorenstein_canonical_ring() -> HilbertSeries:
    """
    Degree-10 hypersurface in P(1,1,2,5)
    """
    return series((1, 1, 2, 5), (10,))


def index3_canonical_ring() -> HilbertSeries:
    """
    Complete intersection of degree (3,10) in P(1,1,2,3,5)
    """
    return series((1, 1, 2, 3, 5), (3, 10))


def index3_low_degree_subring() -> HilbertSeries:
    """
    Subring generated in degrees <= 3: C[x1,x2,y,u]/(x1^3 - x2 y)
    """
    return series((1, 1, 2, 3), (3,))
