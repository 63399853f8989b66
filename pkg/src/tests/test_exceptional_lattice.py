"""
Tests for discrepancies and plurigenera on resolution chains
"""

import pytest

from src import exceptional_lattice as lattice
from src import hj_strings as hj
from src.schema import PLURIGENERA_M_MAX
from src.tests.utils import *


def t_config(s, chi=3, k2_x=1):
    q = hj.classify_string(s).quotient
    return lattice.chain_config(s, chi, int(lattice.k2_resolution(k2_x, len(s), q.d)))


def test_index2_discrepancy_is_one_half():
    """
    Tests every index-2 string up to d = 32 has all coefficients 1/2
    """
    for d in range(1, 33):
        cfg = t_config(index2_string(d))
        delta = lattice.discrepancies(cfg)
        assert delta.coeffs == tuple(R(1, 2) for _ in range(len(cfg)))
        assert lattice.cartier_index(delta) == 2
        assert lattice.kx_squared(cfg, delta) == 1


@pytest.mark.parametrize(
    "entries, expected, index",
    [
        ((4, 3, 2), (R(2, 3), R(2, 3), R(1, 3)), 3),
        ((3, 5, 2), (R(3, 5), R(4, 5), R(2, 5)), 5),
        ((2, 5, 3), (R(2, 5), R(4, 5), R(3, 5)), 5),
        ((5, 2), (R(2, 3), R(1, 3)), 3),
    ],
)
def test_discrepancy_vectors(entries, expected, index):
    cfg = t_config(chain(*entries))
    delta = lattice.discrepancies(cfg)
    assert delta.coeffs == expected
    assert lattice.cartier_index(delta) == index
    assert lattice.kx_squared(cfg, delta) == 1


def test_curve_names_follow_config():
    cfg = lattice.chain_config(chain(4, 3, 2), 3, -1, ["A", "B", "C"])
    delta = lattice.discrepancies(cfg)
    assert delta.curve_names == ("A", "B", "C")
    assert str(delta) == "2/3*A + 2/3*B + 1/3*C"

    with pytest.raises(Exception) as e:
        lattice.chain_config(chain(4, 3, 2), 3, -1, ["A", "B"])
    assert getattr(e.value, "exit_code", None) == 2


def test_self_intersection_law():
    """
    Tests K^2 + K.Delta against the full expansion of (K + Delta)^2
    """
    for s in hj.generate_upto(200, 20):
        cfg = t_config(s)
        delta = lattice.discrepancies(cfg)
        assert lattice.self_intersection(cfg, delta) == lattice.kx_squared(cfg, delta)


def test_leading_minors_and_definiteness():
    cfg = t_config(chain(4, 3, 2))
    assert lattice.leading_minors(cfg.gram) == [-4, 11, -18]
    assert lattice.is_negative_definite(cfg.gram)
    assert not lattice.is_negative_definite(((-1, 2), (2, -1)))
    # a zero pivot falls back to determinants
    assert lattice.leading_minors(((0, 1), (1, -2))) == [0, -1]


def test_singular_gram_matrix():
    """
    Tests a non-contractible configuration is rejected
    """
    cfg = lattice.ExceptionalConfig(
        curve_names=("E1", "E2"),
        gram=((-1, 1), (1, -1)),
        k_degrees=(-1, -1),
        chi=3,
        k_self=0,
    )
    with pytest.raises(Exception) as e:
        lattice.discrepancies(cfg)
    assert getattr(e.value, "exit_code", None) == 2


def test_config_validation():
    with pytest.raises(Exception) as e:
        lattice.ExceptionalConfig(("E1",), ((-2, 0),), (0,), 3, 0)
    assert getattr(e.value, "exit_code", None) == 2
    with pytest.raises(Exception) as e:
        lattice.ExceptionalConfig(("E1", "E2"), ((-2, 1), (0, -2)), (0, 0), 3, 0)
    assert getattr(e.value, "exit_code", None) == 2
    with pytest.raises(Exception) as e:
        lattice.ExceptionalConfig(("E1",), ((1,),), (0,), 3, 0)
    assert getattr(e.value, "exit_code", None) == 2


def test_k2_resolution_rows():
    assert lattice.k2_resolution(1, 1, 1) == 0
    assert lattice.k2_resolution(1, 3, 2) == -1
    assert lattice.k2_resolution(1, 3, 1) == -2
    with pytest.raises(Exception) as e:
        lattice.k2_resolution(1, 1, 2)
    assert getattr(e.value, "exit_code", None) == 2


def test_riemann_roch_spot_checks():
    assert lattice.riemann_roch(3, 16, 2) == 10
    assert lattice.riemann_roch(3, 8, 2) == 6


def test_pullback_multiple():
    delta = lattice.discrepancies(t_config(chain(3, 5, 2)))
    integral, fractional = lattice.pullback_multiple(delta, 3)
    assert integral == (1, 2, 1)
    assert fractional == (R(4, 5), R(2, 5), R(1, 5))


@pytest.mark.parametrize("entries", [(4,), (3, 3), (3, 2, 2, 2, 3), (4, 3, 2), (2, 5, 3)])
def test_plurigenera_of_the_constructions(entries):
    """
    Tests h0(mK) = 3 + m(m-1)/2 with zero correction for 2 <= m <= 20
    """
    cfg = t_config(chain(*entries))
    delta = lattice.discrepancies(cfg)
    k2_x = lattice.kx_squared(cfg, delta)
    for m in range(2, PLURIGENERA_M_MAX + 1):
        assert lattice.correction_term(cfg, delta, m) == 0
        assert lattice.plurigenus(3, k2_x, cfg, delta, m) == 3 + m * (m - 1) // 2


def test_correction_vanishes_on_t_strings():
    """
    Tests the correction is local and zero on every T-singularity
    """
    for s in hj.generate_upto(150, 40):
        cfg = t_config(s)
        delta = lattice.discrepancies(cfg)
        for m in range(2, 7):
            assert lattice.correction_term(cfg, delta, m) == 0


def test_index_law_on_generated_strings():
    """
    Tests the Cartier index read off the discrepancies is the n of the T-type
    """
    for level in range(3):
        for s in hj.generate(level, 32):
            delta = lattice.discrepancies(t_config(s))
            assert lattice.cartier_index(delta) == hj.classify_string(s).quotient.n


def test_discrepancy_residual_on_long_chains():
    """
    Tests G.Delta = -K.E exactly on generated chains of up to 40 curves
    """
    long_strings = [
        s for level in range(3) for s in hj.generate(level, 38) if len(s) >= 36
    ]
    assert max(len(s) for s in long_strings) == 40
    for s in long_strings:
        cfg = t_config(s)
        delta = lattice.discrepancies(cfg)
        for row, k in zip(cfg.gram, cfg.k_degrees):
            assert sum(g * a for g, a in zip(row, delta.coeffs)) == -k


@pytest.mark.parametrize(
    "entries", [(3,), (5,), (2, 3), (3, 4), (5, 2), (4, 3, 2), (2, 5, 3)]
)
def test_correction_is_periodic_in_the_index(entries):
    cfg = lattice.chain_config(chain(*entries), 3, 0)
    delta = lattice.discrepancies(cfg)
    n = lattice.cartier_index(delta)
    values = [lattice.correction_term(cfg, delta, m) for m in range(1, 3 * n + 1)]
    assert values[n:] == values[:-n]


def test_correction_nonzero_off_t_strings():
    """
    Tests 1/3(1,1) has a non-zero correction in degree 2
    """
    cfg = lattice.chain_config(chain(3), 3, 0)
    delta = lattice.discrepancies(cfg)
    assert delta.coeffs == (R(1, 3),)
    assert lattice.correction_term(cfg, delta, 2) == R(-1, 3)


def test_plurigenus_needs_m_at_least_two():
    cfg = t_config(chain(4, 3, 2))
    delta = lattice.discrepancies(cfg)
    with pytest.raises(Exception) as e:
        lattice.plurigenus(3, 1, cfg, delta, 1)
    assert getattr(e.value, "exit_code", None) == 2
    with pytest.raises(Exception) as e:
        lattice.correction_term(cfg, delta, 0)
    assert getattr(e.value, "exit_code", None) == 2
