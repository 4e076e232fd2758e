"""Continuous limit q = e^hbar -> 1 of the q-difference objects.

Parameterisation: ``hbar < 0`` real, ``q = e^hbar``, ``Z = hbar^4 z`` and
``u = e^(2 sigma hbar)``.  Every comparison is a ratio or a normalised
quantity, so overall constants never enter.  Derivatives in ``log z`` act
termwise on explicit power exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import ResonantSigma
from .partitions import block_4d, conformal_block_numeric
from .report import CheckReport, timed
from .scalars import RationalField
from .tau import TauParams, logz, tau_c_series_form

__all__ = [
    "GILParams",
    "bilincont_residual",
    "block_limit_extrapolation",
    "c_ratio",
    "fit_order",
    "gil_terms",
    "gil_tau",
    "hirota_d2",
    "limit_qpainleve",
    "limit_qpainleve_tau",
    "limit_tau",
    "limit_toda",
    "pp_combination",
    "stattau_check",
    "toda_residual_gil",
]

DEFAULT_HBARS = (mpmath.mpf("-0.1"), -mpmath.power(10, mpmath.mpf("-1.5")), mpmath.mpf("-0.01"))


@dataclass(frozen=True)
class GILParams:
    """Parameters of the continuous tau series; ``n_max`` and ``k_max`` are cutoffs."""

    sigma: object
    s: object
    z: object = 0.5
    n_max: int = 4
    k_max: int = 12

    def __post_init__(self):
        two = 2 * mpmath.mpmathify(self.sigma)
        if abs(mpmath.im(two)) < 1e-30 and abs(two - mpmath.nint(mpmath.re(two))) < 1e-30:
            raise ResonantSigma(f"2*sigma = {two} is an integer")
        if self.n_max < 0 or self.k_max < 0:
            raise ValueError("cutoffs must be non-negative")


# ---------------------------------------------------------------------------
# Barnes ratios


def c_ratio(sigma, m):
    """``C(sigma + m) / C(sigma)`` for ``2m`` integer, ``C(x) = 1/(G(1-2x) G(1+2x))``.

    Reduced to Gamma functions with ``G(1+x) = Gamma(x) G(x)``::

        C(sigma+n)/C(sigma) = prod_{k=1}^{2n} Gamma(1-2sigma-k) / prod_{k=0}^{2n-1} Gamma(1+2sigma+k)

    for integer ``n > 0`` (``sigma -> -sigma`` for ``n < 0``), and
    ``C(sigma +- 1/2)/C(sigma) = Gamma(-+2sigma)/Gamma(1 +- 2sigma)``.
    """
    m = Fraction(m)
    if (2 * m).denominator != 1:
        raise ValueError("2m must be an integer")
    sigma = mpmath.mpmathify(sigma)
    if m.denominator == 2:
        if m > 0:
            half = mpmath.gamma(-2 * sigma) / mpmath.gamma(1 + 2 * sigma)
            return half * c_ratio(sigma + mpmath.mpf(1) / 2, m - Fraction(1, 2))
        half = mpmath.gamma(2 * sigma) / mpmath.gamma(1 - 2 * sigma)
        return half * c_ratio(sigma - mpmath.mpf(1) / 2, m + Fraction(1, 2))
    n = int(m)
    if n == 0:
        return mpmath.mpf(1)
    if n < 0:
        return c_ratio(-sigma, -n)
    num = mpmath.fprod(mpmath.gamma(1 - 2 * sigma - k) for k in range(1, 2 * n + 1))
    den = mpmath.fprod(mpmath.gamma(1 + 2 * sigma + k) for k in range(0, 2 * n))
    return num / den


# ---------------------------------------------------------------------------
# continuous tau


def gil_terms(sigma, s, n_max, k_max, shift=0):
    """Monomials ``(coefficient, exponent)`` of ``tau(sigma + shift, s | z) / C(sigma)``.

    ``shift`` may be a half-integer; the normalisation stays ``C(sigma)`` so
    that shifted series can be combined in bilinear expressions.
    """
    sigma = mpmath.mpmathify(sigma)
    s = mpmath.mpmathify(s)
    shift = Fraction(shift)
    out = []
    for n in range(-n_max, n_max + 1):
        x = sigma + shift + n
        w = c_ratio(sigma, shift + n) * (s**n if n >= 0 else (1 / s) ** (-n)) if s != 0 or n == 0 else 0
        if w == 0:
            continue
        F = block_4d(x, k_max)
        for k, c in F.items():
            out.append((w * c, x * x + k // 4))
    return out


def _eval_terms(terms, z):
    lz = mpmath.log(mpmath.mpmathify(z))
    return mpmath.fsum(c * mpmath.exp(e * lz) for c, e in terms)


def gil_tau(params, z=None, shift=0):
    """``tau(sigma, s | z) / C(sigma)`` summed over ``|n| <= n_max`` and ``k <= k_max``."""
    z = params.z if z is None else z
    return _eval_terms(gil_terms(params.sigma, params.s, params.n_max, params.k_max, shift), z)


def hirota_d2(f_terms, g_terms, z, printed=False):
    """``D^2_(log z)(f, g)`` for ``f, g`` given as monomial lists.

    Termwise ``D^2(z^alpha, z^beta) = (alpha - beta)^2 z^(alpha+beta)``.  With
    ``printed=True`` the cross term ``-2 f' g'`` is replaced by ``-f' g'``
    (kept to show that variant does not satisfy the equation).
    """
    lz = mpmath.log(mpmath.mpmathify(z))
    total = mpmath.mpf(0)
    for c, al in f_terms:
        for d, be in g_terms:
            if printed:
                # z^2(f''g - f'g' + fg'') + z(f'g + fg') on monomials
                k = al * (al - 1) - al * be + be * (be - 1) + al + be
            else:
                k = (al - be) ** 2
            total += c * d * k * mpmath.exp((al + be) * lz)
    return total


def toda_residual_gil(params, z=None, printed=False):
    """``(1/2 D^2(tau, tau) + z^(1/2) tau_(+1/2) tau_(-1/2)) / tau^2``."""
    z = params.z if z is None else z
    t0 = gil_terms(params.sigma, params.s, params.n_max, params.k_max)
    tp = gil_terms(params.sigma, params.s, params.n_max, params.k_max, Fraction(1, 2))
    tm = gil_terms(params.sigma, params.s, params.n_max, params.k_max, Fraction(-1, 2))
    tau = _eval_terms(t0, z)
    d2 = hirota_d2(t0, t0, z, printed)
    return (d2 / 2 + mpmath.sqrt(z) * _eval_terms(tp, z) * _eval_terms(tm, z)) / tau**2


# ---------------------------------------------------------------------------
# continuous block relation, exact in sigma


def bilincont_residual(sigma, order=3):
    """Exact residual of the continuous block relation through ``z^order``.

    ``sum_{2n} W_n [D^2(B_(sigma+n), B_(sigma-n)) + 2 z^(1/2) B_(sigma+n) B_(sigma-n)]``
    with ``B_x = z^(x^2) F(x^2 | z)`` and
    ``W_n = (-1)^(2n) / (prod_{k=1}^{2|n|-1} (k^2 - 4 sigma^2)^(2(2|n|-k)) (4 sigma^2)^(2|n|))``.
    Returns ``{exponent - 2 sigma^2: coefficient}`` (all must be zero).
    """
    sigma = Fraction(sigma)
    if (2 * sigma).denominator == 1:
        raise ResonantSigma(f"2*sigma = {2 * sigma} is an integer")
    order = Fraction(order)
    base = 2 * sigma * sigma
    out = {}
    m = 0
    while Fraction(m * m, 2) <= order:
        for mm in {m, -m}:
            n = Fraction(mm, 2)
            an = abs(n)
            W = Fraction(1)
            for k in range(1, int(2 * an)):
                W *= (Fraction(k * k) - 4 * sigma * sigma) ** (2 * (int(2 * an) - k))
            W *= (4 * sigma * sigma) ** int(2 * an)
            W = (-1 if int(2 * n) % 2 else 1) / W
            K = int(order - 2 * n * n) + 1
            xp, xm = sigma + n, sigma - n
            Fp, Fm = block_4d(xp, K, RationalField()), block_4d(xm, K, RationalField())
            fp = [(c, xp * xp + k // 4) for k, c in Fp.items()]
            fm = [(c, xm * xm + k // 4) for k, c in Fm.items()]
            for c, al in fp:
                for d, be in fm:
                    e = al + be - base
                    if e <= order:
                        out[e] = out.get(e, 0) + W * c * d * (al - be) ** 2
                    e2 = e + Fraction(1, 2)
                    if e2 <= order:
                        out[e2] = out.get(e2, 0) + 2 * W * c * d
        m += 1
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# fits and extrapolation


def fit_order(hbars, values):
    """Least-squares slope of ``log|value|`` against ``log|hbar|``."""
    xs = [mpmath.log(abs(mpmath.mpmathify(h))) for h in hbars]
    ys = [mpmath.log(abs(mpmath.mpmathify(v))) for v in values]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


def block_limit_extrapolation(sigma, order=4, hbars=(-0.02, -0.01, -0.005), digits=40):
    """Richardson-extrapolated ``hbar -> 0`` limits of ``hbar^(4k) F_k(u; q^-1, q)``.

    The rescaled coefficients are analytic in ``hbar`` with a linear leading
    correction; extrapolation uses the three smallest values.  Returns
    ``(extrapolated, estimate_of_error, exact_4d)`` lists indexed by ``k``.
    """
    with mpmath.workdps(digits + 20):
        sigma = mpmath.mpmathify(sigma)
        rows = []
        for h in hbars:
            h = mpmath.mpf(h)
            F = conformal_block_numeric(mpmath.exp(2 * sigma * h), mpmath.exp(-h), mpmath.exp(h), order, digits)
            rows.append([F[4 * k] * h ** (4 * k) for k in range(order + 1)])
        hs = [mpmath.mpf(h) for h in hbars]
        F4 = block_4d(sigma, order)
        extrap, err = [], []
        for k in range(order + 1):
            ys = [r[k] for r in rows]
            # quadratic fit through three points evaluated at hbar = 0
            p2 = mpmath.mpf(0)
            for i in range(3):
                li = mpmath.mpf(1)
                for j in range(3):
                    if i != j:
                        li *= (0 - hs[j]) / (hs[i] - hs[j])
                p2 += li * ys[i]
            # linear extrapolation from the two smallest |hbar| as error scale
            p1 = ys[2] + (ys[2] - ys[1]) * (0 - hs[2]) / (hs[2] - hs[1])
            extrap.append(p2)
            err.append(abs(p2 - p1))
        return extrap, err, [F4[4 * k] for k in range(order + 1)]


# ---------------------------------------------------------------------------
# q-side quantities in the scaling limit


def _tc(sigma, s, hbar, z, shift=0, order=10, digits=40, twist=True):
    """``T_c(u q^shift, s' | hbar^4 z)`` from the direct series, ``(q;q,q)^2`` omitted.

    ``twist`` replaces ``s`` by ``(-1)^(-4 sigma) s = e^(-4 pi i sigma) s``.
    """
    hbar = mpmath.mpmathify(hbar)
    sigma = mpmath.mpmathify(sigma)
    s = mpmath.mpmathify(s)
    if twist:
        s = mpmath.exp(-4j * mpmath.pi * sigma) * s
    lq = hbar
    lu = 2 * sigma * hbar + shift * hbar
    p = TauParams(lu=lu, lq=lq, s=s, c_choice="Cc", order=order, digits=digits)
    lZ = 4 * mpmath.log(abs(hbar)) + mpmath.log(mpmath.mpmathify(z))
    return tau_c_series_form(p, logz(lZ), include_qqq=False)


def _check_hbars(hbars):
    hbars = [mpmath.mpmathify(h) for h in hbars]
    if any(h == 0 for h in hbars):
        raise ValueError("hbar = 0 is not allowed")
    if any(mpmath.re(h) >= 0 for h in hbars):
        raise ValueError("the limit is taken along hbar < 0 (0 < q < 1)")
    return hbars


def limit_tau(hbars=DEFAULT_HBARS, sigma=mpmath.mpc("0.13", "0.05"), s=mpmath.mpf("0.7"), z1=0.4, z2=0.2,
              order=10, digits=40, gil=None):
    """Ratio ``T_c(z1)/T_c(z2)`` against ``tau(z1)/tau(z2)`` for each ``hbar``."""
    hbars = _check_hbars(hbars)
    gil = gil or GILParams(sigma, s, n_max=4, k_max=12)
    with timed() as clock, mpmath.workdps(digits + 10):
        target = gil_tau(gil, z1) / gil_tau(gil, z2)
        gaps = []
        for h in hbars:
            r = _tc(sigma, s, h, z1, order=order, digits=digits) / _tc(sigma, s, h, z2, order=order, digits=digits)
            gaps.append(abs(r / target - 1))
        rate = fit_order(hbars, gaps) if all(g > 0 for g in gaps) else mpmath.inf
    return CheckReport(
        check_name="limit-tau",
        parameters={"sigma": sigma, "s": s, "z1": z1, "z2": z2, "order": order, "digits": digits},
        order=order,
        residual_max=rate,
        threshold=0.8,
        direction="above",
        wall_time_ms=clock.ms,
        details={"hbars": list(hbars), "discrepancies": gaps, "expected_order": 1},
    )


def limit_toda(hbars=DEFAULT_HBARS, sigma=mpmath.mpc("0.13", "0.05"), s=mpmath.mpf("0.7"), z=0.3,
               order=10, digits=40):
    """Both halves of the q-Toda relation scale as ``hbar^2`` and tend to the Hirota pieces.

    ``A = T(qZ) T(Z/q)/T^2 - 1`` and ``B = Z^(1/2) T_(uq) T_(u/q)/T^2`` with
    ``T = T_c`` (twisted ``s``); ``A/hbar^2 -> 1/2 D^2(tau,tau)/tau^2`` and
    ``B/hbar^2 -> -z^(1/2) tau_(+1/2) tau_(-1/2)/tau^2``.  The report value is
    the smallest ratio ``fitted order / expected order`` over the four fits.
    """
    hbars = _check_hbars(hbars)
    gil = GILParams(sigma, s, n_max=4, k_max=12)
    with timed() as clock, mpmath.workdps(digits + 10):
        t0 = gil_terms(sigma, s, gil.n_max, gil.k_max)
        tp = gil_terms(sigma, s, gil.n_max, gil.k_max, Fraction(1, 2))
        tm = gil_terms(sigma, s, gil.n_max, gil.k_max, Fraction(-1, 2))
        tau = _eval_terms(t0, z)
        hA = hirota_d2(t0, t0, z) / 2 / tau**2
        hB = -mpmath.sqrt(z) * _eval_terms(tp, z) * _eval_terms(tm, z) / tau**2
        As, Bs, gA, gB, res = [], [], [], [], []
        for h in hbars:
            T = _tc(sigma, s, h, z, order=order, digits=digits)
            Tu = _tc(sigma, s, h, z * mpmath.exp(h), order=order, digits=digits)
            Td = _tc(sigma, s, h, z * mpmath.exp(-h), order=order, digits=digits)
            Tp = _tc(sigma, s, h, z, shift=1, order=order, digits=digits)
            Tm = _tc(sigma, s, h, z, shift=-1, order=order, digits=digits)
            A = Tu * Td / T**2 - 1
            B = h * h * mpmath.sqrt(z) * Tp * Tm / T**2
            As.append(A)
            Bs.append(B)
            gA.append(abs(A / h**2 - hA))
            gB.append(abs(B / h**2 - hB))
            res.append(abs(A - B) / max(abs(A), abs(B)))
        ratios = [fit_order(hbars, As) / 2, fit_order(hbars, Bs) / 2, fit_order(hbars, gA), fit_order(hbars, gB)]
    return CheckReport(
        check_name="limit-toda",
        parameters={"sigma": sigma, "s": s, "z": z, "order": order, "digits": digits},
        order=order,
        residual_max=min(ratios),
        threshold=0.8,
        direction="above",
        wall_time_ms=clock.ms,
        details={
            "hbars": list(hbars),
            "A": [abs(a) for a in As],
            "B": [abs(b) for b in Bs],
            "hirota_gap": gA,
            "product_gap": gB,
            "q_toda_relative_residual": res,
            "order_ratios": ratios,
            "gil_toda_residual": abs(hA - hB),
        },
    )


def pp_combination(w, z):
    """``w w_tt - w_t^2 - 2 w^3 + 2 z w`` with ``t = log z``; zero iff Painleve III(D8) holds."""
    z = mpmath.mpmathify(z)
    f = lambda t: w(mpmath.exp(t))  # noqa: E731
    t = mpmath.log(z)
    w0 = f(t)
    w1 = mpmath.diff(f, t)
    w2 = mpmath.diff(f, t, 2)
    return w0 * w2 - w1**2 - 2 * w0**3 + 2 * z * w0


def _g_from_tau(sigma, s, hbar, z, order, digits):
    """``G = -Z^(1/2) T(u)^2 / (s T(uq)^2)`` through the direct ``T_c`` series.

    The ``C``-dependent prefactors relating ``T`` and ``T_c`` cancel in this ratio.
    """
    T1 = _tc(sigma, s, hbar, z, order=order, digits=digits, twist=False)
    T3 = _tc(sigma, s, hbar, z, shift=1, order=order, digits=digits, twist=False)
    return -(hbar * hbar) * mpmath.sqrt(mpmath.mpmathify(z)) * T1**2 / (mpmath.mpmathify(s) * T3**2)


def limit_qpainleve_tau(hbars=DEFAULT_HBARS, sigma=mpmath.mpc("0.13", "0.05"), s=mpmath.mpf("0.7"), z=0.3,
                        order=10, digits=40):
    """q-Painleve residual of ``G`` built from the tau series along ``Z = hbar^4 z``.

    Reports ``max |E| / |G - Z|^2``; the relation is conjectural, so the
    report carries the conjecture flag.  ``G/hbar^2`` stays finite.
    """
    hbars = _check_hbars(hbars)
    with timed() as clock, mpmath.workdps(digits + 10):
        rels, ws = [], []
        for h in hbars:
            q = mpmath.exp(h)
            g = _g_from_tau(sigma, s, h, z, order, digits)
            gu = _g_from_tau(sigma, s, h, z * q, order, digits)
            gd = _g_from_tau(sigma, s, h, z / q, order, digits)
            Z = h**4 * mpmath.mpmathify(z)
            E = gu * gd * (g - 1) ** 2 - (g - Z) ** 2
            rels.append(abs(E) / abs(g - Z) ** 2)
            ws.append(g / h**2)
    return CheckReport(
        check_name="limit-qpainleve-tau",
        parameters={"sigma": sigma, "s": s, "z": z, "order": order, "digits": digits},
        order=order,
        residual_max=max(rels),
        threshold=mpmath.mpf(10) ** -8,
        conjecture=True,
        wall_time_ms=clock.ms,
        details={"hbars": list(hbars), "relative_residual": rels, "w": ws},
    )


def limit_qpainleve(hbars=DEFAULT_HBARS, z=0.3, w=None, digits=40):
    """Expansion of the q-Painleve residual for ``G(Z) = hbar^2 w(Z / hbar^4)``.

    ``E = G(qZ) G(Z/q) (G-1)^2 - (G-Z)^2`` satisfies ``E/hbar^4 = hbar^2 P[w]
    + O(hbar^4)`` with ``P`` from :func:`pp_combination`.  The report value is
    the smaller of ``order(E/hbar^4)/2`` and ``order(E/hbar^6 - P[w])/2``
    (the expansion is even in ``hbar``).  For an exact solution
    (``w = +-z^(1/2)``) ``P[w] = 0`` and the gap itself is reported.
    """
    hbars = _check_hbars(hbars)
    if w is None:
        w = lambda x: mpmath.sqrt(x) + x / 3  # noqa: E731  generic sample, not a solution
    with timed() as clock, mpmath.workdps(digits + 10):
        z = mpmath.mpmathify(z)
        P = pp_combination(w, z)
        Es, gaps = [], []
        for h in hbars:
            Z = h**4 * z

            def G(x):
                return h * h * w(x / h**4)

            g = G(Z)
            E = G(mpmath.exp(h) * Z) * G(mpmath.exp(-h) * Z) * (g - 1) ** 2 - (g - Z) ** 2
            Es.append(E / h**4)
            gaps.append(abs(E / h**6 - P))
        tol = mpmath.mpf(10) ** (-(digits // 2))
        exact = abs(P) <= tol
        if exact:
            # an exact solution: nothing to fit, the residual itself must vanish
            value, threshold, direction = max(gaps), tol, "below"
        else:
            value = min(fit_order(hbars, Es) / 2, fit_order(hbars, gaps) / 2)
            threshold, direction = 0.8, "above"
    return CheckReport(
        check_name="limit-qpainleve",
        parameters={"z": z, "digits": digits},
        residual_max=value,
        threshold=threshold,
        direction=direction,
        wall_time_ms=clock.ms,
        details={"hbars": list(hbars), "scaled_residual": Es, "gap_to_pp": gaps, "pp_value": P},
    )


def stattau_check(hbar=-0.01, z1=0.4, z2=0.2, order=10, digits=40):
    """``T_c(q^(1/2), +-1)`` ratios against ``(z1/z2)^(1/16) e^(+-4(z1^(1/2) - z2^(1/2)))``.

    Returns ``{sign: relative_gap}`` for ``s = +1`` and ``s = -1``.
    """
    out = {}
    with mpmath.workdps(digits + 10):
        quarter = mpmath.mpf(1) / 4
        for s in (1, -1):
            r = _tc(quarter, s, hbar, z1, order=order, digits=digits, twist=False) / _tc(
                quarter, s, hbar, z2, order=order, digits=digits, twist=False
            )
            closed = (mpmath.mpf(z1) / z2) ** (mpmath.mpf(1) / 16) * mpmath.exp(
                s * 4 * (mpmath.sqrt(z1) - mpmath.sqrt(z2))
            )
            out[s] = abs(r / closed - 1)
    return out
