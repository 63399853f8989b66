"""
Hirzebruch-Jung continued fractions and T-strings

Strings are read with a fixed orientation: a string and its mirror are
different values, they describe the same singularity.
"""

import logging
from math import gcd
from typing import Iterable, List, Optional, Tuple

from src.exceptions import DomainError, InvariantError
from src.schema import QuotientType, StringClass, StringKind, TString

logger = logging.getLogger(__name__)


def expand(N: int, Q: int) -> TString:
    """
    Hirzebruch-Jung expansion of N/Q = b_1 - 1/(b_2 - 1/(... - 1/b_r))
    """
    if N <= 1:
        raise DomainError(f"N must be > 1, got {N}")
    if not 0 < Q < N:
        raise DomainError(f"Q out of range: need 0 < Q < {N}, got {Q}")
    if gcd(N, Q) != 1:
        raise DomainError(f"N and Q must be coprime, gcd({N},{Q}) = {gcd(N, Q)}")

    entries: List[int] = []
    num, den = N, Q
    while den:
        b = -(-num // den)
        entries.append(b)
        num, den = den, b * den - num
    return TString(tuple(entries))


def evaluate(s: TString) -> Tuple[int, int]:
    """
    Back-substitute a string into its reduced fraction (N, Q)
    """
    num, den = 1, 0
    for b in reversed(s.entries):
        num, den = b * num - den, num
    if gcd(num, den) != 1:
        raise InvariantError(f"continued fraction of {s} is not reduced: {num}/{den}")
    return num, den


def classify_string(s: TString) -> StringClass:
    """
    Rational double point, non-canonical T-singularity, or neither
    """
    if all(b == 2 for b in s):
        return StringClass(StringKind.rational_double_point)

    N, Q = evaluate(s)
    matches: List[QuotientType] = []
    n = 2
    while n * n <= N:
        if N % (n * n) == 0:
            d = N // (n * n)
            if (Q + 1) % (d * n) == 0:
                a = (Q + 1) // (d * n)
                if 0 < a < n and gcd(a, n) == 1:
                    matches.append(QuotientType(d=d, n=n, a=a))
        n += 1

    if len(matches) > 1:
        raise InvariantError(f"{s} matches several T-types: {matches}")
    if not matches:
        return StringClass(StringKind.not_t)
    return StringClass(StringKind.non_canonical_t, matches[0])


def _require_t(s: TString) -> QuotientType:
    cls = classify_string(s)
    if not cls.is_t:
        raise DomainError(f"{s} is not the string of a non-canonical T-singularity")
    return cls.quotient


def iterate_left(s: TString) -> TString:
    """
    [b_1, ..., b_r] -> [2, b_1, ..., b_r + 1]
    """
    _require_t(s)
    return TString((2,) + s.entries[:-1] + (s.entries[-1] + 1,))


def iterate_right(s: TString) -> TString:
    """
    [b_1, ..., b_r] -> [b_1 + 1, ..., b_r, 2]
    """
    _require_t(s)
    return TString((s.entries[0] + 1,) + s.entries[1:] + (2,))


def descend(s: TString) -> Optional[TString]:
    """
    Undo one iteration step; None on the index-2 strings
    """
    quotient = _require_t(s)
    if quotient.n == 2:
        return None

    candidates = []
    if s.entries[0] == 2:
        candidates.append(s.entries[1:-1] + (s.entries[-1] - 1,))
    if s.entries[-1] == 2:
        candidates.append((s.entries[0] - 1,) + s.entries[1:-1])
    for entries in candidates:
        if entries and all(b >= 2 for b in entries):
            parent = TString(entries)
            parent_class = classify_string(parent)
            if parent_class.is_t and parent_class.quotient.d == quotient.d:
                return parent
    raise InvariantError(f"{s} has index {quotient.n} but no T-string parent")


def mirror(s: TString) -> TString:
    return TString(tuple(reversed(s.entries)))


def quotient_key(N: int, Q: int) -> Tuple[int, int]:
    """
    Identifies 1/N(1,Q) with 1/N(1,Q') where Q Q' = 1 mod N
    """
    return N, min(Q, pow(Q, -1, N))


def seeds_index2(d_max: int) -> List[TString]:
    """
    [4] for d=1, [3,3] for d=2, [3,2,...,2,3] with d-2 twos for d >= 3
    """
    if d_max < 1:
        raise DomainError(f"d_max must be >= 1, got {d_max}")
    seeds = [TString.of(4)]
    for d in range(2, d_max + 1):
        seeds.append(TString((3,) + (2,) * (d - 2) + (3,)))
    return seeds


def _unique(strings: Iterable[TString]) -> List[TString]:
    seen = set()
    out = []
    for s in strings:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def _children(s: TString) -> Tuple[TString, TString]:
    return iterate_right(s), iterate_left(s)


def generate(level: int, d_max: int) -> List[TString]:
    """
    All strings reached from the index-2 seeds by exactly `level` iterations

    The order is deterministic: parents in order, right child before left
    child, first occurrence kept.
    """
    if level < 0:
        raise DomainError(f"level must be >= 0, got {level}")
    frontier = seeds_index2(d_max)
    for _ in range(level):
        frontier = _unique(child for s in frontier for child in _children(s))
    logger.debug(
        "generate(level=%d, d_max=%d): %d strings", level, d_max, len(frontier)
    )
    return frontier


def generate_upto(max_order: int, d_max: int) -> List[TString]:
    """
    Every non-canonical T-string with N <= max_order and d <= d_max

    N strictly grows under iteration, so the search prunes on it.
    """
    if max_order < 4:
        return []
    frontier = [s for s in seeds_index2(d_max) if evaluate(s)[0] <= max_order]
    found: List[TString] = []
    while frontier:
        found.extend(frontier)
        frontier = _unique(
            child
            for s in frontier
            for child in _children(s)
            if evaluate(child)[0] <= max_order
        )
    return _unique(found)
