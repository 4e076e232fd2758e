import random
from fractions import Fraction

import mpmath
import pytest

from qpiii.errors import NegativeSize, ResonantSigma
from qpiii.partitions import (
    BlockSpec,
    Partition,
    block_4d,
    conformal_block,
    conformal_block_exact,
    conformal_block_lozenge,
    conformal_block_numeric,
    convergence_bound,
    hook_lengths,
    nekrasov_factor,
    partitions_of,
)
from qpiii.limits import block_limit_extrapolation
from qpiii.scalars import exact_eval


def pentagonal_p(n):
    """Partition numbers by Euler's pentagonal recurrence."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, total = 1, 0
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def test_partition_counts():
    assert partitions_of(0) == [Partition(())]
    assert len(partitions_of(4)) == 5
    p = pentagonal_p(12)
    assert [len(partitions_of(n)) for n in range(13)] == p
    assert len(partitions_of(12)) == 77
    assert len(set(partitions_of(12))) == 77


def test_negative_size():
    with pytest.raises(NegativeSize):
        partitions_of(-1)
    with pytest.raises(NegativeSize):
        BlockSpec(order=-1)


# independent Nekrasov factor straight from the arm/leg definitions
def _arm(lam, i, j):
    return (lam[i - 1] if i <= len(lam) else 0) - j


def _leg(lam, i, j):
    conj = sum(1 for r in lam if r >= j)
    return conj - i


def naive_N(lam, mu, u, q1, q2):
    out = 1
    for i, r in enumerate(lam, 1):
        for j in range(1, r + 1):
            out *= 1 - u * q2 ** (-_arm(mu, i, j) - 1) * q1 ** _leg(lam, i, j)
    for i, r in enumerate(mu, 1):
        for j in range(1, r + 1):
            out *= 1 - u * q2 ** _arm(lam, i, j) * q1 ** (-_leg(mu, i, j) - 1)
    return out


def test_single_cell_factors():
    q, u = Fraction(2, 7), Fraction(3, 5)
    assert nekrasov_factor((), (), u, 1 / q, q) == 1
    assert nekrasov_factor((1,), (), u, 1 / q, q) == 1 - u
    assert nekrasov_factor((1,), (1,), Fraction(1), 1 / q, q) == (1 - 1 / q) * (1 - q)


def test_nekrasov_against_naive():
    rng = random.Random(3)
    parts = [p for n in range(5) for p in partitions_of(n)]
    for _ in range(60):
        lam, mu = rng.choice(parts), rng.choice(parts)
        u, q1, q2 = (Fraction(rng.randint(1, 30), rng.randint(31, 60)) for _ in range(3))
        assert nekrasov_factor(lam, mu, u, q1, q2) == naive_N(tuple(lam), tuple(mu), u, q1, q2)


def test_hook_product_on_diagonal():
    q = Fraction(3, 11)
    for n in range(7):
        for lam in partitions_of(n):
            expect = Fraction(1)
            for h in hook_lengths(lam):
                expect *= (1 - q ** (-h)) * (1 - q**h)
            assert nekrasov_factor(lam, lam, Fraction(1), 1 / q, q) == expect


def test_block_order_zero_and_one():
    assert conformal_block(BlockSpec(order=0, backend="exact")).coeffs.keys() == {0}
    F = conformal_block_exact(1)
    for pt in ({"a": Fraction(2, 3), "b": Fraction(5, 4)}, {"a": Fraction(-3, 7), "b": Fraction(1, 2)}):
        qq, uu = pt["a"] ** 4, pt["b"] ** 4
        expect = 2 / ((1 - qq) * (1 - 1 / qq) * (1 - uu) * (1 - 1 / uu))
        assert exact_eval(F[4], pt) == expect


def test_blocksim_exact():
    F = conformal_block_exact(3)
    for k, c in F.items():
        assert c.substitute_monomial({"b": (0, -1)}) == c
        assert c.substitute_monomial({"a": (-1, 0)}) == c


def test_blocksim_numeric_generic():
    u, q1, q2 = mpmath.mpc("0.3", "0.2"), mpmath.mpc("0.5", "0.1"), mpmath.mpc("-0.4", "0.3")
    F = conformal_block_numeric(u, q1, q2, 4)
    for G in (conformal_block_numeric(1 / u, q1, q2, 4), conformal_block_numeric(u, q2, q1, 4)):
        for k in range(0, 17, 4):
            assert abs(F[k] - G[k]) < 1e-40 * max(1, abs(F[k]))


def test_numeric_matches_exact():
    F = conformal_block_exact(3)
    av, bv = mpmath.mpc("0.8", "0.1"), mpmath.mpc("0.9", "-0.3")
    N = conformal_block_numeric(bv**4, 1 / av**4, av**4, 3)
    for k in range(0, 13, 4):
        e = exact_eval(F[k], {"a": av, "b": bv})
        assert abs(e - N[k]) < 1e-40 * abs(e)


def _naive_lozenge(u, q1, q2, order):
    from qpiii.partitions import arm, leg

    out = {}
    for n in range(order + 1):
        for k in range(n + 1):
            for l1 in partitions_of(k):
                for l2 in partitions_of(n - k):
                    den = mpmath.mpc(1)
                    for lam, mu, v in ((l1, l1, 1), (l2, l2, 1), (l1, l2, u), (l2, l1, 1 / u)):
                        for s in lam.cells():
                            if (arm(mu, s) + leg(lam, s) + 1) % 2 == 0:
                                den *= 1 - v * q2 ** (-arm(mu, s) - 1) * q1 ** leg(lam, s)
                        for s in mu.cells():
                            if (arm(lam, s) + leg(mu, s) + 1) % 2 == 0:
                                den *= 1 - v * q2 ** arm(lam, s) * q1 ** (-leg(mu, s) - 1)
                    out[2 * n] = out.get(2 * n, 0) + 1 / den
    return out


def test_lozenge_against_brute_force():
    u, q1, q2 = mpmath.mpc("0.7", "0.2"), mpmath.mpc("1.6", "0.4"), mpmath.mpc("0.3", "-0.2")
    F = conformal_block_lozenge(u, q1, q2, 4)
    ref = _naive_lozenge(u, q1, q2, 4)
    assert F[0] == 1
    for k, v in ref.items():
        assert abs(F[k] - v) < 1e-40 * max(1, abs(v))


def test_convergence_bound_majorises():
    rng = random.Random(5)
    for _ in range(5):
        q = mpmath.mpf(rng.uniform(0.3, 0.6)) * mpmath.expj(rng.uniform(-2, 2))
        u = mpmath.mpf(rng.uniform(0.5, 2)) * mpmath.expj(rng.uniform(-2, 2))
        Z = mpmath.mpf(rng.uniform(0.01, 0.2))
        F = conformal_block_numeric(u, 1 / q, q, 6)
        partial = sum(abs(c) * abs(Z) ** (k // 4) for k, c in F.items())
        assert partial <= convergence_bound(u, q, Z)


def test_block_4d_basics():
    assert block_4d(Fraction(1, 3), 0).coeffs == {0: 1}
    s = Fraction(2, 7)
    assert block_4d(s, 1)[4] == 1 / (2 * s * s)
    with pytest.raises(ResonantSigma):
        block_4d(Fraction(1, 2), 2)


def test_block_4d_is_limit_of_q_block():
    extrap, err, exact = block_limit_extrapolation(mpmath.mpf("0.13"), order=4, hbars=(-0.02, -0.01, -0.005))
    for k, (x, e, ex) in enumerate(zip(extrap, err, exact)):
        assert abs(x - ex) <= 10 * e + mpmath.mpf(10) ** -40, k


def test_full_block_limit_linear_in_hbar():
    sigma, z = mpmath.mpf("0.21"), mpmath.mpf("0.3")
    F4 = block_4d(sigma, 6).evaluate(mpmath.root(z, 4))
    gaps = []
    for h in (mpmath.mpf("-0.01"), mpmath.mpf("-0.001")):
        Fq = conformal_block_numeric(mpmath.exp(2 * sigma * h), mpmath.exp(-h), mpmath.exp(h), 6)
        gaps.append(abs(Fq.evaluate(mpmath.root(h**4 * z, 4)) / F4 - 1))
    assert gaps[1] < gaps[0] / 5
