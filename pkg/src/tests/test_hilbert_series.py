"""
Tests for Hilbert series of weighted rings
"""

from itertools import product

import pytest
import sympy as sp

from src import hilbert_series as hs


def monomial_count(weights, degree):
    """
    Number of monomials of the given weighted degree
    """
    ranges = [range(degree // w + 1) for w in weights]
    return sum(
        1
        for exps in product(*ranges)
        if sum(e * w for e, w in zip(exps, weights)) == degree
    )


def test_canonical_ring_coefficients():
    """
    Tests dim R_m = 1, 2, 4, 6, 9, 13 for m = 0..5
    """
    ring = hs.gorenstein_canonical_ring()
    assert hs.coefficients(ring, 5) == [1, 2, 4, 6, 9, 13]


def test_index3_ring_equals_hypersurface():
    assert hs.equal(hs.gorenstein_canonical_ring(), hs.index3_canonical_ring())
    assert not hs.equal(hs.gorenstein_canonical_ring(), hs.index3_low_degree_subring())


def test_low_degree_subring():
    """
    Tests S and R agree up to degree 4 and differ in degree 5
    """
    ring = hs.index3_canonical_ring()
    subring = hs.index3_low_degree_subring()
    assert hs.coefficients(subring, 4) == hs.coefficients(ring, 4)
    assert hs.coefficient(subring, 5) == 12
    assert hs.coefficient(ring, 5) == 13


def test_common_factors_cancel():
    h = hs.series((1, 1, 2, 3, 5), (3, 10))
    assert h.generator_weights == (1, 1, 2, 5)
    assert h.relation_degrees == (10,)
    assert str(h) == "(1-t^10)/(1-t^1)(1-t^1)(1-t^2)(1-t^5)"


def test_plurigenera_match():
    ring = hs.gorenstein_canonical_ring()
    assert hs.matches_plurigenera(ring, 3, 1, 20)
    assert hs.first_mismatch(hs.index3_low_degree_subring(), 3, 1, 10) == 5
    with pytest.raises(Exception) as e:
        hs.first_mismatch(ring, 3, 1, 1)
    assert getattr(e.value, "exit_code", None) == 2


def test_polynomial_ring_against_monomials():
    for weights in [(1, 1), (1, 2, 3), (1, 1, 2, 5), (2, 3, 7)]:
        h = hs.series(weights)
        coeffs = hs.coefficients(h, 30)
        assert coeffs == [monomial_count(weights, m) for m in range(31)]


def test_complete_intersection_additivity():
    """
    Tests H_{R/(f)}(m) = H_R(m) - H_R(m - e) up to degree 50
    """
    for weights, relations in [
        ((1, 1, 2, 5), (10,)),
        ((1, 1, 2, 3, 5), (3, 10)),
        ((1, 2, 3, 4), (6, 8)),
    ]:
        ambient = hs.series(weights, relations[:-1])
        quotient = hs.series(weights, relations)
        e = relations[-1]
        a = hs.coefficients(ambient, 50)
        q = hs.coefficients(quotient, 50)
        for m in range(51):
            assert q[m] == a[m] - (a[m - e] if m >= e else 0)


def test_regular_sequence_of_powers():
    """
    Tests C[x_i]/(x_i^k_i) has the monomial count of its truncated box
    """
    weights, powers = (1, 2, 3), (4, 3, 2)
    h = hs.series(weights, [w * k for w, k in zip(weights, powers)])
    box = [
        sum(e * w for e, w in zip(exps, weights))
        for exps in product(*[range(k) for k in powers])
    ]
    assert hs.coefficients(h, 20) == [box.count(m) for m in range(21)]


def test_numerator_and_denominator_polys():
    h = hs.gorenstein_canonical_ring()
    t = hs.t
    assert h.numerator == sp.Poly(1 - t**10, t, domain="ZZ")
    assert h.denominator.degree() == 9
    assert h.denominator == sp.Poly(
        (1 - t) ** 2 * (1 - t**2) * (1 - t**5), t, domain="ZZ"
    )


def test_bad_weights():
    with pytest.raises(Exception) as e:
        hs.series((0, 1))
    assert getattr(e.value, "exit_code", None) == 2
    with pytest.raises(Exception) as e:
        hs.coefficients(hs.series((1,)), -1)
    assert getattr(e.value, "exit_code", None) == 2
