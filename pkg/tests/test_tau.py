import random

import mpmath
import pytest

from qpiii.errors import ResonantU
from qpiii.qspecial import qpoch, theta
from qpiii.scalars import ExactField
from qpiii.symmetry import SurfaceState, apply_generator
from qpiii.tau import (
    TauParams,
    c_function,
    fg_from_tau,
    logz,
    p_n_algebraic,
    p_n_coefficient,
    tau_c_eval,
    tau_c_series_form,
    tau_eval,
)

from conftest import rel

TOL = mpmath.mpf(10) ** -40


def polar(rng, lo, hi):
    return mpmath.mpf(rng.uniform(lo, hi)) * mpmath.expj(rng.uniform(-2.5, 2.5))


def sample(rng):
    return polar(rng, 0.4, 2.5), polar(rng, 0.3, 0.6), polar(rng, 0.5, 1.5), polar(rng, 0.005, 0.02)


@pytest.mark.parametrize("choice", ["C1", "Cc"])
def test_c_equations(choice):
    rng = random.Random(2)
    for _ in range(10):
        u = polar(rng, 0.3, 3)
        q = polar(rng, 0.1, 0.9)
        Z = polar(rng, 0.01, 1)
        lu, lq, lZ = mpmath.log(u), mpmath.log(q), mpmath.log(Z)

        def C(du, dz):
            return c_function(choice, lu + du * lq, lq, lZ + dz * lq)

        c2 = C(0, 0) ** 2
        assert abs(C(1, 0) * C(-1, 0) / c2 + mpmath.sqrt(Z)) < TOL * abs(Z) ** 0.5
        assert abs(C(1, 1) * C(-1, -1) / c2 + u * mpmath.root(Z, 4)) < TOL * abs(u * mpmath.root(Z, 4))
        assert abs(C(0, 1) * C(0, -1) / c2 - 1 / mpmath.root(Z, 4)) < TOL / abs(Z) ** 0.25


def test_theta_multiplier_is_homogeneous_up_to_q():
    # theta(u s^(1/2) q; q) solves the u-direction equations up to the constant 1/q;
    # the extra factor exp(log^2 u / (2 log q)) removes it
    u, q, s = mpmath.mpc("0.7", "0.3"), mpmath.mpc("0.4", "0.2"), mpmath.mpf("0.8")
    lq = mpmath.log(q)

    def f(lu, fix):
        v = theta(mpmath.exp(lu) * mpmath.sqrt(s) * q, q)
        return v * mpmath.exp(lu**2 / (2 * lq)) if fix else v

    lu = mpmath.log(u)
    for fix, expect in ((False, 1 / q), (True, 1)):
        r = f(lu + lq, fix) * f(lu - lq, fix) / f(lu, fix) ** 2
        assert rel(r, expect) < TOL


def test_p_n_values():
    u, q = mpmath.mpc("0.3", "0.1"), mpmath.mpc("0.5", "-0.2")
    assert p_n_coefficient(0, u, q) == 1
    closed = -1 / ((1 - u) ** 2 * (mpmath.sqrt(u * q) - 1 / mpmath.sqrt(u * q)) ** 2)
    assert rel(p_n_coefficient(1, u, q), closed) < TOL
    a = mpmath.root(q, 4)
    h = mpmath.sqrt(q)
    closed = 1 / (((1 - h) * (1 - 1 / h)) ** 2 * (1 - h**3) * (1 - h**-3))
    assert rel(p_n_algebraic(1, a), closed) < TOL



def test_algebraic_p_n_matches_rational_form():
    # with the s-hat factor of the rational form at s = 1 folded in
    q = mpmath.mpc("0.5", "-0.2")
    a, h = mpmath.root(q, 4), mpmath.sqrt(q)
    lq = mpmath.log(q)
    lZ = mpmath.log(mpmath.mpf("0.01"))
    R = qpoch(h, [q]) / qpoch(1 / h, [q])
    for choice in ("C1", "Cc"):
        sh = -((c_function(choice, lq / 2, lq, lZ) / c_function(choice, -lq / 2, lq, lZ) * R) ** 2)
        for n in range(-3, 4):
            assert rel(p_n_algebraic(n, a), (-1) ** n * sh**n * p_n_coefficient(n, h, q)) < TOL


def test_p_n_exact_and_resonance():
    K = ExactField(("a", "b"))
    a, b = K.gens()
    p = p_n_coefficient(2, b**4, a**4)
    assert p == 1 / ((1 - b**4) ** 4 * ((1 - b**4 * a**4) * (1 - 1 / (b**4 * a**4))) ** 3
                     * ((1 - b**4 * a**8) * (1 - 1 / (b**4 * a**8))) ** 2 * (1 - b**4 * a**12) * (1 - 1 / (b**4 * a**12)))
    with pytest.raises(ResonantU):
        p_n_coefficient(1, mpmath.mpf(1), mpmath.mpf("0.5"))


def test_three_forms_agree():
    rng = random.Random(4)
    for i in range(4):
        u, q, s, Z = sample(rng)
        p = TauParams.from_values(u, q, s=s, c_choice=("C1", "Cc")[i % 2], order=6, digits=50)
        vals = [tau_eval(p, Z, form=f) for f in ("T", "Tr", "Trational")]
        assert rel(vals[0], vals[1]) < mpmath.mpf(10) ** -35
        assert rel(vals[0], vals[2]) < mpmath.mpf(10) ** -35


@pytest.mark.parametrize("choice", ["C1", "Cc"])
def test_ushift_and_uinv(choice):
    rng = random.Random(5)
    for _ in range(3):
        u, q, s, Z = sample(rng)
        p = TauParams.from_values(u, q, s=s, c_choice=choice, order=4, digits=50)
        t0 = tau_eval(p, Z)
        assert rel(tau_eval(p.shifted(2), Z), t0 / s) < mpmath.mpf(10) ** -35
        assert rel(tau_eval(p.inverted(), Z), t0) < mpmath.mpf(10) ** -35


def test_resonant_u_rejected():
    with pytest.raises(ResonantU):
        TauParams(lu=2 * mpmath.log(mpmath.mpf("0.5")), lq=mpmath.log(mpmath.mpf("0.5")))


def test_series_form_matches_definition():
    p = TauParams.from_values(mpmath.mpc("0.6", "0.3"), mpmath.mpc("0.45", "0.1"), s=0.8, c_choice="Cc",
                              order=8, digits=40)
    Z = mpmath.mpc("0.01", "0.003")
    assert rel(tau_c_series_form(p, Z), tau_c_eval(p, Z)) < mpmath.mpf(10) ** -30


def test_continued_toda_needs_winding():
    # principal branches satisfy the + form, one turn around Z = 0 the - form
    q = mpmath.mpf("0.5")
    Z = mpmath.mpf("0.01")
    for w, sign in ((0, 1), (1, -1)):
        p = TauParams(lu=mpmath.log(mpmath.mpc("0.3", "0.1")), lq=mpmath.log(q), s=0.7, c_choice="Cc",
                      order=12, digits=30, winding=w)

        def T(pp, x):
            return tau_c_series_form(pp, x, include_qqq=False)

        lhs = T(p, q * Z) * T(p, Z / q)
        rhs = T(p, Z) ** 2 + sign * mpmath.sqrt(Z) * T(p.shifted(1), Z) * T(p.shifted(-1), Z)
        assert rel(lhs, rhs) < mpmath.mpf(10) ** -25
        wrong = T(p, Z) ** 2 - sign * mpmath.sqrt(Z) * T(p.shifted(1), Z) * T(p.shifted(-1), Z)
        assert rel(lhs, wrong) > mpmath.mpf(10) ** -3


@pytest.mark.parametrize("s, sign", [(-1, 1), (1, -1)])
def test_algebraic_point_g(s, sign):
    q = mpmath.mpc("0.45", "0.1")
    Z = mpmath.mpc("0.01", "0.004")
    p = TauParams(lu=mpmath.log(q) / 2, lq=mpmath.log(q), s=s, order=10, digits=30)
    F, G = fg_from_tau(p, Z)
    assert rel(G, sign * mpmath.sqrt(Z)) < mpmath.mpf(10) ** -25
    assert rel(F, sign * mpmath.sqrt(q * Z)) < mpmath.mpf(10) ** -25


def test_backlund_matches_pi2_squared():
    q = mpmath.mpc("0.45", "0.1")
    Z = mpmath.mpc("0.01", "0.004")
    p = TauParams.from_values(mpmath.mpc("0.3", "0.2"), q, s=0.8, order=10, digits=30)
    F, G = fg_from_tau(p, Z)
    F2, G2 = fg_from_tau(p.shifted(1), Z)
    image = apply_generator("pi2sq", SurfaceState(Z, q, F, G))
    assert rel(image.F, F2) < mpmath.mpf(10) ** -25
    assert rel(image.G, G2) < mpmath.mpf(10) ** -25


def test_qpp_from_tau_generic():
    rng = random.Random(8)
    u, q, s, Z = sample(rng)
    p = TauParams.from_values(u, q, s=s, order=12, digits=40)
    Gu, G = fg_from_tau(p, Z)
    Gd = fg_from_tau(p, logz(mpmath.log(Z) - p.lq))[1]
    assert rel(Gu * Gd * (G - 1) ** 2, (G - Z) ** 2) < mpmath.mpf(10) ** -22


def test_degenerate_s_zero_keeps_one_term():
    p = TauParams.from_values(mpmath.mpc("0.6", "0.3"), mpmath.mpf("0.4"), s=0, c_choice="Cc", order=6, digits=30)
    Z = mpmath.mpf("0.01")
    v = tau_c_series_form(p, Z, include_qqq=False)
    lu, lq = p.lu, p.lq
    sigma = lu / (2 * lq)
    from qpiii.tau import _block_value, _pair_poch

    single = mpmath.exp(2j * mpmath.pi * sigma**2) * mpmath.exp(sigma**2 * mpmath.log(Z)) * _block_value(
        lu, lq, mpmath.log(Z), 6, 30) / _pair_poch(lu, lq)
    assert rel(v, single) < mpmath.mpf(10) ** -25


def test_logz_marker():
    p = TauParams.from_values(mpmath.mpc("0.6", "0.3"), mpmath.mpf("0.4"), s=1, c_choice="Cc", order=4, digits=30)
    Z = mpmath.mpc("0.01", "0.002")
    assert rel(tau_eval(p, Z), tau_eval(p, logz(mpmath.log(Z)))) < mpmath.mpf(10) ** -25
