import random
from fractions import Fraction

import mpmath
import pytest

from qpiii.bilinear import (
    algebraic_identity_residual,
    appendix_b_amended_residuals,
    appendix_b_residuals,
    appendix_b_specialisation_gap,
    beta_gamma_check,
    bilinear_residual_main,
    fiber_base_negative_check,
    qtoda_residual,
    sector_split,
    weight,
    weight_from_qpoch,
)
from qpiii.checks import random_point
from qpiii.errors import ResonantU
from qpiii.qspecial import qpoch
from qpiii.scalars import ExactField
from qpiii.tau import TauParams, p_n_coefficient

from conftest import rel


def max_abs(series):
    return max((abs(c) for _, c in series.items()), default=mpmath.mpf(0))


def test_weight_zero_is_one():
    assert weight(0, mpmath.mpf("0.3"), mpmath.mpf("0.5")) == 1
    K = ExactField(("a", "b"))
    a, b = K.gens()
    assert weight(0, b**4, a**4) == K.one()


def test_weight_one_against_products():
    rng = random.Random(1)
    for _ in range(5):
        u, q = random_point(rng, "uq")
        w = weight(1, u, q)
        assert rel(w, p_n_coefficient(1, u, q) * p_n_coefficient(1, 1 / u, q)) < mpmath.mpf(10) ** -40
        assert rel(w, weight_from_qpoch(1, u, q)) < mpmath.mpf(10) ** -40


def test_weight_half_closed_form():
    rng = random.Random(2)
    for _ in range(5):
        u, q = random_point(rng, "uq")
        closed = 1 / ((1 - u) * (1 - 1 / u))
        assert rel(weight(Fraction(1, 2), u, q), closed) < mpmath.mpf(10) ** -40
        assert rel(weight_from_qpoch(Fraction(1, 2), u, q), closed) < mpmath.mpf(10) ** -40


def test_weight_resonance():
    with pytest.raises(ResonantU):
        weight(1, mpmath.mpf(1), mpmath.mpf("0.5"))


@pytest.mark.parametrize("order", [1, 2, 4])
def test_main_relation_exact(order):
    assert bilinear_residual_main(order=order, mode="exact").is_zero()


def test_main_relation_numeric_order_12():
    r = bilinear_residual_main(mpmath.mpc("0.37", "0.11"), mpmath.mpf("0.45"), 12, "numeric", 50)
    assert max_abs(r) < mpmath.mpf(10) ** -30


def test_half_sector_is_needed():
    r = bilinear_residual_main(mpmath.mpc("0.37", "0.11"), mpmath.mpf("0.45"), 4, "numeric", 50, drop_half=True)
    assert max_abs(r) > 1


def test_sector_split():
    r = bilinear_residual_main(order=6, mode="exact")
    ints, halves = sector_split(r)
    assert ints.is_zero() and halves.is_zero()
    bad = bilinear_residual_main(mpmath.mpc("0.37", "0.11"), mpmath.mpf("0.45"), 4, "numeric", 50, drop_half=True)
    ints, halves = sector_split(bad)
    assert all(k % 4 == 0 for k in ints.exponents())
    assert all(k % 4 for k in halves.exponents())
    assert max_abs(ints + halves - bad) < mpmath.mpf(10) ** -40


def test_beta_gamma():
    sample = ("Cc", mpmath.log(mpmath.mpc("0.6", "0.2")), mpmath.log(mpmath.mpf("0.4")),
              mpmath.log(mpmath.mpc("0.05", "0.01")))
    assert beta_gamma_check(8, sample) == []


def test_qtoda_random_points():
    rng = random.Random(3)
    with mpmath.workdps(30):
        for _ in range(20):
            u, q, s, Z = random_point(rng, "tau")
            p = TauParams.from_values(u, q, s=s, order=12, digits=30)
            assert qtoda_residual(p, Z) < mpmath.mpf(10) ** -15


@pytest.mark.parametrize("s", [1, -1])
def test_qtoda_algebraic_point(s):
    q = mpmath.mpc("0.45", "0.1")
    p = TauParams(lu=mpmath.log(q) / 2, lq=mpmath.log(q), s=s, order=12, digits=40)
    assert qtoda_residual(p, mpmath.mpc("0.01", "0.004")) < mpmath.mpf(10) ** -25


def test_qtoda_single_block_fails():
    p = TauParams.from_values(mpmath.mpc("0.6", "0.3"), mpmath.mpf("0.4"), s=0, order=12, digits=30)
    assert qtoda_residual(p, mpmath.mpf("0.01")) > mpmath.mpf(10) ** -6


@pytest.mark.parametrize("sign", [-1, 1])
def test_algebraic_identity_exact(sign):
    assert algebraic_identity_residual(4, sign, "exact").is_zero()
    assert algebraic_identity_residual(0, sign, "exact").is_zero()


def test_algebraic_identity_numeric():
    r = algebraic_identity_residual(8, -1, "numeric", q=mpmath.mpc("0.4", "0.2"), digits=50)
    assert max_abs(r) < mpmath.mpf(10) ** -40


B_POINT = (mpmath.mpc("0.3", "0.2"), mpmath.mpc("1.8", "0.3"), mpmath.mpc("0.5", "0.1"))


def test_lozenge_literal_relations_fail():
    r1, r2 = appendix_b_residuals(*B_POINT, order=6, digits=50)
    assert max_abs(r1) > mpmath.mpf(10) ** -3
    assert max_abs(r2) > mpmath.mpf(10) ** -3


def test_lozenge_amended_relations_hold():
    r1, r2 = appendix_b_amended_residuals(*B_POINT, order=6, digits=50)
    assert max_abs(r1) < mpmath.mpf(10) ** -40
    assert max_abs(r2) < mpmath.mpf(10) ** -40


def test_lozenge_sector_guard():
    with pytest.raises(ValueError):
        appendix_b_residuals(mpmath.mpf("0.3"), mpmath.mpf("0.5"), mpmath.mpf("0.4"), order=2)


def test_lozenge_specialises_to_main_relation():
    gap = appendix_b_specialisation_gap(B_POINT[0], mpmath.mpf("0.5"), order=6, digits=50)
    assert gap < mpmath.mpf(10) ** -40


def test_fiber_base_gap():
    u, q, Z = mpmath.mpc("0.3", "0.2"), mpmath.mpf("0.5"), mpmath.mpc("0.2", "0.1")
    lhs, rhs, gap = fiber_base_negative_check(u, q, Z, order=8)
    assert gap > mpmath.mpf(10) ** -6
    # order 0: both blocks are 1, only the prefactors remain
    l0, r0, _ = fiber_base_negative_check(u, q, Z, order=0)
    assert rel(l0 * qpoch(u * q, [q, q]) ** 2, 1) < mpmath.mpf(10) ** -40
    assert rel(r0 * qpoch(u * Z * q, [q, q]) ** 2, 1) < mpmath.mpf(10) ** -40


def test_fiber_base_gap_does_not_close():
    u, q, Z = mpmath.mpc("0.3", "0.2"), mpmath.mpf("0.5"), mpmath.mpc("0.2", "0.1")
    g4 = fiber_base_negative_check(u, q, Z, order=4)[2]
    g8 = fiber_base_negative_check(u, q, Z, order=8)[2]
    assert g8 > mpmath.mpf(10) ** -2
    assert g8 > g4 / 10
