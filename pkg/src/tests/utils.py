"""
Helpers for tests
"""

import json
from math import gcd

import sympy as sp

from src.schema import TString


def R(p, q=1):
    """
    Shorthand for an exact rational
    """
    return sp.Rational(p, q)


def chain(*entries):
    return TString.of(*entries)


def index2_string(d):
    """
    The seed string of 1/4d(1,2d-1)
    """
    if d == 1:
        return chain(4)
    return TString((3,) + (2,) * (d - 2) + (3,))


def brute_force_t_quotients(max_order, d_max):
    """
    Every (N, Q) = (d n^2, d n a - 1) with n >= 2, 0 < a < n, gcd(a, n) = 1
    """
    found = set()
    n = 2
    while n * n <= max_order:
        for d in range(1, d_max + 1):
            N = d * n * n
            if N > max_order:
                break
            for a in range(1, n):
                if gcd(a, n) == 1:
                    found.add((N, d * n * a - 1))
        n += 1
    return found


def run_cli(capsys, argv):
    """
    Helper to run the command line and capture (exit code, stdout, stderr)
    """
    from src.cli import main

    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_cli_json(capsys, argv):
    code, out, err = run_cli(capsys, list(argv) + ["--format", "json"])
    assert code == 0, err
    return json.loads(out)


def rational_leaves(node):
    """
    Yield every dict that looks like an encoded rational
    """
    if isinstance(node, dict):
        if set(node) == {"num", "den"}:
            yield node
        for value in node.values():
            yield from rational_leaves(value)
    elif isinstance(node, list):
        for value in node:
            yield from rational_leaves(value)
