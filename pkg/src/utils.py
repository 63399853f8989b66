"""
Util file with helper functions
"""

from typing import List, Sequence

import sympy as sp

from src.models import RationalOut


def fractional_part(x) -> sp.Rational:
    """
    {x} = x - floor(x), always in [0, 1)
    """
    x = sp.Rational(x)
    return x - sp.floor(x)


def rational_out(x) -> RationalOut:
    """
    Serialize an exact rational as {"num": ..., "den": ...}
    """
    value = sp.Rational(x)
    return RationalOut(num=int(value.p), den=int(value.q))


def format_rational(x) -> str:
    value = sp.Rational(x)
    return str(value.p) if value.q == 1 else f"{value.p}/{value.q}"


def markdown_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> List[str]:
    """
    Method to render a GitHub style table
    """
    lines = [
        "| " + " | ".join(headers) + " |",
        "|" + "|".join("---" for _ in headers) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return lines
