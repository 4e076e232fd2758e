"""Residuals of the bilinear relations between blocks and tau functions.

Every residual is returned either as a :class:`GradedSeries` (whose
coefficients must vanish) or as a relative scalar.  The main block relation
is normalised by ``prod_eps (u^eps q; q, q)^2`` so that all weights become
rational functions of ``u`` and ``q``.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .errors import ResonantU
from .partitions import (
    _specialised_exponents,
    _sum_inverse_binomials,
    block_pairs,
    conformal_block_exact,
    conformal_block_lozenge,
    conformal_block_numeric,
    shift_exact_block,
)
from .qspecial import qpoch
from .scalars import ExactField, NumericField
from .series import GradedSeries, series_scale_z
from .tau import c_function, p_n_algebraic, p_n_coefficient, tau_eval, logz, _lz

__all__ = [
    "BilinearWeight",
    "algebraic_identity_residual",
    "appendix_b_amended_residuals",
    "appendix_b_residuals",
    "appendix_b_specialisation_gap",
    "beta_gamma_check",
    "bilinear_residual_main",
    "fiber_base_negative_check",
    "qtoda_residual",
    "sector_split",
    "staircase_series",
    "weight",
    "weight_from_qpoch",
]


def _half(n):
    n = Fraction(n)
    if (2 * n).denominator != 1:
        raise ValueError(f"2n must be an integer, got {n}")
    return n


class BilinearWeight:
    """The rational weight ``w_n`` of the normalised main relation."""

    __slots__ = ("n", "w")

    def __init__(self, n, u, q):
        self.n = _half(n)
        self.w = weight(self.n, u, q)

    def __repr__(self):
        return f"BilinearWeight(n={self.n}, w={self.w})"


def weight(n, u, q):
    """``w_n = prod_eps (u^eps q; q,q)^2 / prod_{eps,eps'} (u^eps q^(1+2 eps' n); q,q)``.

    The infinite products telescope to ``P_|n|(u) P_|n|(1/u)``; in
    particular ``w_(1/2) = 1 / ((1-u)(1-1/u))``.  Works for numeric and exact
    ``u, q``.
    """
    n = abs(_half(n))
    return p_n_coefficient(n, u, q) * p_n_coefficient(n, 1 / u, q)


def weight_from_qpoch(n, u, q):
    """The same weight from the infinite products, numerically."""
    n = _half(n)
    u, q = mpmath.mpmathify(u), mpmath.mpmathify(q)
    num = (qpoch(u * q, [q, q]) * qpoch(q / u, [q, q])) ** 2
    den = 1
    for x in (u, 1 / u):
        for e in (1, -1):
            den *= qpoch(x * q ** (1 + 2 * e * n), [q, q])
    if den == 0:
        raise ResonantU(f"weight denominator vanishes at u={u}")
    return num / den


# ---------------------------------------------------------------------------
# main relation


def _m_range(order_zeta):
    """``m = 2n`` with ``Z^(2 n^2) = zeta^(2 m^2)`` inside the truncation."""
    out = []
    m = 0
    while 2 * m * m <= order_zeta:
        out.append(m)
        if m:
            out.append(-m)
        m += 1
    return sorted(out)


def bilinear_residual_main(u=None, q=None, order=4, mode="exact", digits=50, drop_half=False):
    """LHS - RHS of the normalised block relation as a series in ``zeta``.

    ``sum_{2n} w_n [u^(2n) Z^(2n^2) F(uq^-2n | Z/q) F(uq^2n | qZ)
    - (1 - Z^(1/2)) Z^(2n^2) F(uq^-2n | Z) F(uq^2n | Z)]`` truncated at
    ``Z^order``.  In exact mode ``u = b^4`` and ``q = a^4`` are symbolic and
    ``u, q`` must be omitted.  ``drop_half`` removes the ``2n`` odd terms.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    D = 4 * order
    ms = [m for m in _m_range(D) if not (drop_half and m % 2)]
    if mode == "exact":
        if u is not None or q is not None:
            raise ValueError("exact mode is symbolic in u and q")
        field = ExactField(("a", "b"))
        a, b = field.gens()
        U, Q = b**4, a**4
        base = conformal_block_exact(order, field)

        def block(m, K):
            return shift_exact_block(base.truncate(4 * K), k=m)

        up, zscale = U, a
    elif mode == "numeric":
        field = NumericField(digits)
        with mpmath.workdps(digits + 20):
            U, Q = mpmath.mpc(u), mpmath.mpc(q)
            a = mpmath.root(Q, 4)
        cache = {}

        def block(m, K):
            key = (m, K)
            if key not in cache:
                with mpmath.workdps(digits + 20):
                    cache[key] = conformal_block_numeric(U * Q**m, 1 / Q, Q, K, digits=digits)
            return cache[key]

        up, zscale = U, a
    else:
        raise ValueError(f"unknown mode {mode!r}")

    one = field.one()
    lhs = GradedSeries(field, {}, D)
    rhs = GradedSeries(field, {}, D)
    with mpmath.workdps(digits + 20):
        for m in ms:
            e = 2 * m * m
            K = (D - e) // 4
            w = weight(Fraction(m, 2), U, Q)
            Fm, Fp = block(-m, K), block(m, K)
            left = series_scale_z(Fm, 1 / zscale) * series_scale_z(Fp, zscale)
            right = Fm * Fp
            lhs = lhs + _placed(left.scale(w * up**m), e, D)
            rhs = rhs + _placed(right.scale(w), e, D)
        half = GradedSeries(field, {0: one, 2: -one}, D)
        res = lhs - half * rhs
    return res


def _placed(series, e, D):
    """``zeta^e * series`` known through ``zeta^D``.

    ``series`` lives on integer powers of ``Z`` and was computed to
    ``Z^((D - e) // 4)``; its first missing term sits beyond ``D``.
    """
    return GradedSeries(series.field, {k + e: c for k, c in series.coeffs.items()}, D)


def sector_split(series):
    """Split a series into its integer and half-integer ``Z``-power parts."""
    ints = {k: c for k, c in series.coeffs.items() if k % 4 == 0}
    halves = {k: c for k, c in series.coeffs.items() if k % 4 != 0}
    return (
        GradedSeries(series.field, ints, series.order),
        GradedSeries(series.field, halves, series.order),
    )


def beta_gamma_check(kmax=8, numeric_sample=None):
    """Verify ``beta_k = Z beta_(k-1)^2 / beta_(k-2)`` against its closed form.

    Exactly, over generators ``b = u^(1/4)`` and ``zeta = Z^(1/4)``; with
    ``numeric_sample = (choice, lu, lq, lZ)`` the ratios are also formed from
    actual structure functions and compared with ``(-1)^k Z^(k^2/2)`` and
    ``(-1)^k u^k Z^(k^2/2)``.  Returns the list of failures (empty on success).
    """
    field = ExactField(("b", "zeta"))
    b, z = field.gens()
    u, Z, zh = b**4, z**4, z**2
    failures = []
    for name, first in (("beta", -zh), ("gamma", -u * zh)):
        seq = [field.one(), first]
        for k in range(2, kmax + 1):
            seq.append(Z * seq[k - 1] ** 2 / seq[k - 2])
        for k in range(kmax + 1):
            closed = (-1) ** k * zh ** (k * k) * (u**k if name == "gamma" else field.one())
            if seq[k] != closed:
                failures.append((name, k))
    if numeric_sample is not None:
        choice, lu, lq, lZ = numeric_sample
        lu, lq, lZ = (mpmath.mpmathify(v) for v in (lu, lq, lZ))
        C0 = c_function(choice, lu, lq, lZ)
        Cp, Cm = c_function(choice, lu, lq, lZ + lq), c_function(choice, lu, lq, lZ - lq)
        tol = mpmath.mpf(10) ** (-(mpmath.mp.dps - 15))
        for k in range(kmax + 1):
            beta = c_function(choice, lu + k * lq, lq, lZ) * c_function(choice, lu - k * lq, lq, lZ) / C0**2
            gamma = (
                c_function(choice, lu + k * lq, lq, lZ + lq)
                * c_function(choice, lu - k * lq, lq, lZ - lq)
                / (Cp * Cm)
            )
            zk = mpmath.exp(k * k * lZ / 2)
            if abs(beta - (-1) ** k * zk) > tol * abs(zk):
                failures.append(("beta-numeric", k))
            g = (-1) ** k * mpmath.exp(k * lu) * zk
            if abs(gamma - g) > tol * abs(g):
                failures.append(("gamma-numeric", k))
    return failures


# ---------------------------------------------------------------------------
# tau relation


def qtoda_residual(params, Z):
    """``Z^(1/4) T(qZ) T(Z/q) - T(Z)^2 - Z^(1/2) T_(uq)(Z) T_(u/q)(Z)`` over its largest term."""
    with mpmath.workdps(params.digits + 10):
        lZ = _lz(params, Z) - 2j * mpmath.pi * params.winding
        lq = mpmath.mpmathify(params.lq)
        lw = lZ + 2j * mpmath.pi * params.winding

        def T(p, dz):
            return tau_eval(p, logz(lZ + dz * lq))

        A = mpmath.exp(lw / 4) * T(params, 1) * T(params, -1)
        B = T(params, 0) ** 2
        C = mpmath.exp(lw / 2) * T(params.shifted(1), 0) * T(params.shifted(-1), 0)
        scale = max(abs(A), abs(B), abs(C))
        return +(abs(A - B - C) / scale)


# ---------------------------------------------------------------------------
# algebraic point


def _algebraic_block(n, order, field):
    """Block ``F(q^(2n+1/2); q^-1, q | Z)`` over ``a = q^(1/4)``.

    The factor ``1 - u^e q^m`` is ``1 - a^(e(8n+2) + 4m)``, never identically
    one because ``8n + 2`` is not a multiple of 4.
    """
    by_order = {}
    for total, l1, l2 in block_pairs(order):
        if total == 0:
            continue
        vecs = []
        for lam, mu, e in ((l1, l1, 0), (l2, l2, 0), (l1, l2, 1), (l2, l1, -1)):
            vecs.extend((e * (8 * n + 2) + 4 * m,) for m in _specialised_exponents(lam, mu))
        by_order.setdefault(total, []).append((1, vecs))
    coeffs = {0: field.one()}
    for total, terms in by_order.items():
        coeffs[4 * total] = _sum_inverse_binomials(field, terms)
    return GradedSeries(field, coeffs, 4 * order)


def algebraic_identity_residual(order=4, sign=-1, mode="exact", q=None, digits=50):
    """``(-+ Z^(1/2) q^(1/2); q^(1/2), q^(1/2)) - sum_n (-+1)^n Z^(n^2+n/2) P_n(q) F(q^(2n+1/2))``.

    ``sign`` is the upper/lower choice: ``sign=-1`` reads ``-Z^(1/2)`` in the
    Pochhammer symbol and ``(-1)^n`` in the sum, ``sign=+1`` reads ``+Z^(1/2)``
    and ``(+1)^n``.  The Pochhammer symbol is expanded via its exponential
    form ``exp(-sum_m x^m / (m (1 - t^m)^2))``.  Exact mode works over
    ``a = q^(1/4)``; numeric mode takes ``q``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    D = 4 * order
    if mode == "exact":
        field = ExactField(("a",))
        (a,) = field.gens()
    elif mode == "numeric":
        field = NumericField(digits)
        with mpmath.workdps(digits + 20):
            a = mpmath.root(mpmath.mpc(q), 4)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    with mpmath.workdps(digits + 20):
        # x = sign * Z^(1/2) q^(1/2) = sign * a^2 zeta^2, t = q^(1/2) = a^2
        logs = {}
        for m in range(1, D // 2 + 1):
            t = a ** (2 * m)
            logs[2 * m] = -(sign**m) * t / (m * (1 - t) ** 2)
        lhs = GradedSeries(field, logs, D).exp()
        rhs = GradedSeries(field, {}, D)
        n = 0
        ns = []
        while True:
            hit = False
            for k in {n, -n}:
                e = 4 * k * k + 2 * k
                if e <= D:
                    ns.append((k, e))
                    hit = True
            if not hit:
                break
            n += 1
        for k, e in ns:
            K = (D - e) // 4
            if mode == "exact":
                F = _algebraic_block(k, K, field)
            else:
                F = conformal_block_numeric(a ** (8 * k + 2), 1 / a**4, a**4, K, digits=digits)
            coeff = sign ** abs(k) * p_n_algebraic(k, a)
            rhs = rhs + _placed(F.scale(coeff), e, D)
        return lhs - rhs


# ---------------------------------------------------------------------------
# generic (q1, q2)


def _appendix_b_weight(n, u, q1, q2, d):
    """The ``n``-th weight of ``F^_d`` including ``u^(2dn) (q1 q2)^(4dn^2)``."""
    d1 = qpoch(u * q1 ** (4 * n - 2), [1 / q1**2, q2 / q1]) * qpoch(
        q1 ** (-4 * n - 2) / u, [1 / q1**2, q2 / q1]
    )
    d2 = qpoch(u * q2 ** (4 * n + 1) / q1, [q2 / q1, q2**2]) * qpoch(
        q2 ** (-4 * n + 1) / (u * q1), [q2 / q1, q2**2]
    )
    return u ** (2 * d * n) * (q1 * q2) ** (4 * d * n * n) / (d1 * d2)


def _bhat(u, q1, q2, order, d, digits):
    """``F^_d`` divided by its ``n = 0`` weight, graded in ``zeta``; ``order`` in half steps."""
    D = 2 * order
    field = NumericField(digits)
    out = GradedSeries(field, {}, D)
    w0 = _appendix_b_weight(0, u, q1, q2, d)
    for m in _m_range(D):
        n = mpmath.mpf(m) / 2
        e = 2 * m * m
        K = (D - e) // 4
        w = _appendix_b_weight(n, u, q1, q2, d) / w0
        F1 = conformal_block_numeric(u * q1 ** (2 * m), q1**2, q2 / q1, K, digits=digits)
        F2 = conformal_block_numeric(u * q2 ** (2 * m), q1 / q2, q2**2, K, digits=digits)
        F1 = F1.substitute_z(q1 ** (2 * d))
        F2 = F2.substitute_z(q2 ** (2 * d))
        out = out + _placed((F1 * F2).scale(w), e, D)
    return out


def appendix_b_residuals(u, q1, q2, order=6, digits=50):
    """``(F_loz - F^_1, F_loz - (1 - q1 q2 Z^(1/2)) F^_0)``.

    ``order`` counts powers of ``Z^(1/2)``; ``F^_d`` is normalised by its
    ``n = 0`` weight so that both sides start with 1.
    """
    with mpmath.workdps(digits + 20):
        u, q1, q2 = mpmath.mpc(u), mpmath.mpc(q1), mpmath.mpc(q2)
        if not abs(q2) < 1 < abs(q1):
            raise ValueError("need |q2| < 1 < |q1|")
        D = 2 * order
        field = NumericField(digits)
        Floz = conformal_block_lozenge(u, q1, q2, order, digits=digits)
        F1 = _bhat(u, q1, q2, order, 1, digits)
        F0 = _bhat(u, q1, q2, order, 0, digits)
        one = mpmath.mpc(1)
        fac = GradedSeries(field, {0: one, 2: -q1 * q2}, D)
        return Floz - F1, Floz - fac * F0


def staircase_series(order, digits=50):
    """``sum_k Z^(k(k+1)/2)``: pairs of equal staircase diagrams in the lozenge sum.

    For ``lam1 = lam2 = (k, k-1, ..., 1)`` every cell fails the parity filter,
    so these pairs contribute bare powers of ``Z``.  ``order`` is in half steps.
    """
    field = NumericField(digits)
    D = 2 * order
    coeffs = {}
    k = 0
    while 2 * k * (k + 1) <= D:
        coeffs[2 * k * (k + 1)] = mpmath.mpc(1)
        k += 1
    return GradedSeries(field, coeffs, D)


def appendix_b_amended_residuals(u, q1, q2, order=6, digits=50):
    """``(F_loz - chi F^_0, F^_1 - (1 - q1 q2 Z^(1/2)) F^_0)`` with ``chi`` the staircase sum.

    These are the forms that hold numerically; compare
    :func:`appendix_b_residuals` for the relations read literally.
    """
    with mpmath.workdps(digits + 20):
        u, q1, q2 = mpmath.mpc(u), mpmath.mpc(q1), mpmath.mpc(q2)
        if not abs(q2) < 1 < abs(q1):
            raise ValueError("need |q2| < 1 < |q1|")
        D = 2 * order
        field = NumericField(digits)
        Floz = conformal_block_lozenge(u, q1, q2, order, digits=digits)
        F1 = _bhat(u, q1, q2, order, 1, digits)
        F0 = _bhat(u, q1, q2, order, 0, digits)
        fac = GradedSeries(field, {0: mpmath.mpc(1), 2: -q1 * q2}, D)
        return Floz - staircase_series(order, digits) * F0, F1 - fac * F0


def appendix_b_specialisation_gap(u, q, order=6, digits=50):
    """Compare ``F^_1 - (1 - Z^(1/2)) F^_0`` at ``(q1, q2) = (1/q, q)`` with the main relation.

    At this point the two relations combine to the main one with ``Q = q^2``
    (blocks in ``(q^-2, q^2)``), up to the common ``n = 0`` normalisation;
    returns the largest coefficient of the difference.
    """
    with mpmath.workdps(digits + 20):
        u, q = mpmath.mpc(u), mpmath.mpc(q)
        F1 = _bhat(u, 1 / q, q, order, 1, digits)
        F0 = _bhat(u, 1 / q, q, order, 0, digits)
        D = 2 * order
        field = NumericField(digits)
        comb = F1 - GradedSeries(field, {0: mpmath.mpc(1), 2: mpmath.mpc(-1)}, D) * F0
        main = bilinear_residual_main(u, q**2, order=order // 2, mode="numeric", digits=digits)
        main = main.truncate(comb.order)
        comb = comb.truncate(main.order)
        return max((abs(c) for _, c in (comb - main).items()), default=mpmath.mpf(0))


# ---------------------------------------------------------------------------
# negative check


def fiber_base_negative_check(u, q, Z, order=8, digits=50):
    """Both sides of the naive fiber-base relation and their relative gap.

    ``F(u | Z) / (uq; q,q)^2`` against ``F(uZ | 1/Z) / (uZq; q,q)^2``, each
    block summed to ``order``.  Returns ``(lhs, rhs, relative_gap)``.
    """
    with mpmath.workdps(digits + 20):
        u, q, Z = mpmath.mpc(u), mpmath.mpc(q), mpmath.mpc(Z)
        FL = conformal_block_numeric(u, 1 / q, q, order, digits=digits)
        FR = conformal_block_numeric(u * Z, 1 / q, q, order, digits=digits)
        lhs = sum((c * Z ** (k // 4) for k, c in FL.items()), mpmath.mpc(0)) / qpoch(u * q, [q, q]) ** 2
        rhs = sum((c * Z ** (-(k // 4)) for k, c in FR.items()), mpmath.mpc(0)) / qpoch(
            u * Z * q, [q, q]
        ) ** 2
        gap = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
        return +lhs, +rhs, +gap
