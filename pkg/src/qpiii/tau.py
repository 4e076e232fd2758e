"""Structure functions C(u; q | Z), P_n coefficients and the tau series.

Numeric parameters are carried as logarithms ``lu = log u``, ``lq = log q``
and ``lZ = log Z``.  Shifts such as ``u -> u q`` or ``Z -> q Z`` then act by
addition, and every fractional power is ``exp(x * log)``, so the three
difference equations for ``C`` hold on the nose without branch bookkeeping.
A winding number ``k`` on ``Z`` (``lZ -> lZ + 2 pi i k``) implements the
analytic continuation around ``Z = 0`` that flips the sign of ``Z^(1/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath

from .errors import NoConvergence, ResonantU, ZeroTau
from .partitions import conformal_block_numeric
from .qspecial import elliptic_gamma, qpoch

__all__ = [
    "C_CHOICES",
    "TauParams",
    "c_function",
    "fg_from_tau",
    "logz",
    "p_n_algebraic",
    "p_n_coefficient",
    "tau_c_eval",
    "tau_c_series_form",
    "tau_eval",
    "tau_letters",
]

C_CHOICES = ("C1", "Cc")
N_MAX_CEILING = 32


# ---------------------------------------------------------------------------
# rational coefficients


def p_n_coefficient(n, u, q):
    """``P_n(u; q)`` for ``2n`` integer, over any ring containing ``u, q``.

    With ``m = 2n >= 0``::

        P_n = 1 / ((1-u)^m prod_{i=1}^{m-1} ((1 - u q^i)(1 - q^-i / u))^(m-i))

    which for integer ``n`` equals the form with ``(u^(1/2) q^(i/2) -
    u^(-1/2) q^(-i/2))^2`` factors and sign ``(-1)^n``; ``P_{-n}(u) =
    P_n(1/u)``.  Exact inputs (e.g. ``b**4, a**4``) give exact results.
    """
    m = Fraction(n) * 2
    if m.denominator != 1:
        raise ValueError(f"2n must be an integer, got n={n}")
    m = int(m)
    if m < 0:
        return p_n_coefficient(Fraction(-m, 2), 1 / u, q)
    one = u**0
    den = one
    f = 1 - u
    if _is_zero(f):
        raise ResonantU("u = 1 is resonant")
    den = den * f**m
    for i in range(1, m):
        g = (1 - u * q**i) * (1 - 1 / (u * q**i))
        if _is_zero(g):
            raise ResonantU(f"u = q^(+-{i}) is resonant")
        den = den * g ** (m - i)
    return one / den


def p_n_algebraic(n, a):
    """``P_n(q)`` of the algebraic point ``u = q^(1/2)`` with ``a = q^(1/4)``.

    ``prod_{j=0}^{k-1} 1/((1 - q^(j+1/2))(1 - q^(-j-1/2)))^(k-j)`` with
    ``k = 2n`` for ``n > 0`` and ``k = -2n-1`` for ``n < 0``.
    """
    n = int(n)
    k = 2 * n if n > 0 else -2 * n - 1
    one = a**0
    den = one
    h = a**2  # q^(1/2)
    for j in range(k):
        x = h ** (2 * j + 1)
        den = den * ((1 - x) * (1 - 1 / x)) ** (k - j)
    return one / den


def _spow(x, n):
    """``x^n``; at ``x = 0`` only the ``n = 0`` term survives (degenerate ``s = 0``)."""
    if x == 0:
        return mpmath.mpf(1) if n == 0 else mpmath.mpf(0)
    return x**n


def _is_zero(x):
    try:
        return x == 0 or abs(x) < mpmath.mpf(10) ** (-(mpmath.mp.dps - 3))
    except TypeError:
        return x == 0


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class TauParams:
    """Parameters of ``T(u, s; q | Z)``.

    ``lu, lq`` are logarithms of ``u, q`` (use :meth:`from_values` for the
    principal branch).  ``winding`` is added to ``log Z`` as ``2 pi i k``;
    ``winding=1`` flips ``Z^(1/2)``.  ``order`` is the block truncation in
    ``Z``; ``n_max=None`` selects the adaptive cutoff.
    """

    lu: object
    lq: object
    s: object = 1
    c_choice: str = "C1"
    order: int = 10
    n_max: object = None
    digits: int = 50
    winding: int = 0
    precision_target: object = None

    def __post_init__(self):
        if self.c_choice not in C_CHOICES:
            raise ValueError(f"c_choice must be one of {C_CHOICES}")
        with mpmath.workdps(self.digits + 10):
            lq = mpmath.mpmathify(self.lq)
            if mpmath.re(lq) >= 0:
                raise ValueError("need |q| < 1")
            sig = mpmath.mpmathify(self.lu) / lq
            if abs(mpmath.im(sig)) < 1e-30 and abs(sig - mpmath.nint(mpmath.re(sig))) < mpmath.mpf(10) ** (
                -(self.digits - 5)
            ):
                raise ResonantU(f"u = q^{mpmath.nint(mpmath.re(sig))} is resonant")

    @classmethod
    def from_values(cls, u, q, **kw):
        with mpmath.workdps(kw.get("digits", 50) + 10):
            return cls(lu=mpmath.log(mpmath.mpmathify(u)), lq=mpmath.log(mpmath.mpmathify(q)), **kw)

    @property
    def sigma(self):
        return mpmath.mpmathify(self.lu) / (2 * mpmath.mpmathify(self.lq))

    def shifted(self, du=0):
        """Parameters with ``u -> u q^du``."""
        return replace(self, lu=mpmath.mpmathify(self.lu) + du * mpmath.mpmathify(self.lq))

    def inverted(self):
        """``u -> 1/u`` and ``s -> 1/s``."""
        return replace(self, lu=-mpmath.mpmathify(self.lu), s=1 / mpmath.mpmathify(self.s))

    def target(self):
        t = self.precision_target
        return -(self.digits - 2) if t is None else t


def _lz(params, Z):
    """``log Z`` including the winding; ``Z`` may be given as ``('log', lZ)``."""
    if isinstance(Z, tuple) and Z[0] == "log":
        lz = mpmath.mpmathify(Z[1])
    else:
        lz = mpmath.log(mpmath.mpmathify(Z))
    if params.winding:
        lz += 2j * mpmath.pi * params.winding
    return lz


def logz(lZ):
    """Mark a value as ``log Z`` for functions taking ``Z``."""
    return ("log", lZ)


# ---------------------------------------------------------------------------
# structure functions


def c_function(choice, lu, lq, lZ):
    """``C(u; q | Z)`` from logarithms.

    ``C1 = Gamma(x; a, a)^3 / (Gamma(i x b; a, a) Gamma(i x / b; a, a))`` with
    ``a = q^(1/4)``, ``b = u^(1/4)``, ``x = (qZ)^(1/4)``, and
    ``Cc = (-1)^(2 sigma^2) Gamma(-x; a, a) exp(lu^2 lZ / (4 lq^2))`` with
    ``(-1)^y = e^(i pi y)``.
    """
    lu, lq, lZ = (mpmath.mpmathify(v) for v in (lu, lq, lZ))
    a = mpmath.exp(lq / 4)
    x = mpmath.exp((lq + lZ) / 4)
    if choice == "C1":
        b = mpmath.exp(lu / 4)
        return elliptic_gamma(x, a, a) ** 3 / (
            elliptic_gamma(1j * x * b, a, a) * elliptic_gamma(1j * x / b, a, a)
        )
    if choice == "Cc":
        sigma = lu / (2 * lq)
        return (
            mpmath.exp(2j * mpmath.pi * sigma**2)
            * elliptic_gamma(-x, a, a)
            * mpmath.exp(lu**2 * lZ / (4 * lq**2))
        )
    raise ValueError(f"unknown C choice {choice!r}")


# ---------------------------------------------------------------------------
# tau series

_BLOCKS = {}
_POCH = {}


def _block(lu, lq, order, digits):
    key = (mpmath.nstr(lu, digits + 10), mpmath.nstr(lq, digits + 10), order, digits)
    F = _BLOCKS.get(key)
    if F is None:
        with mpmath.workdps(digits + 10):
            u, q = mpmath.exp(lu), mpmath.exp(lq)
            F = conformal_block_numeric(u, 1 / q, q, order, digits=digits)
        _BLOCKS[key] = F
    return F


def _block_value(lu, lq, lZ, order, digits):
    F = _block(lu, lq, order, digits)
    with mpmath.workdps(digits + 10):
        Z = mpmath.exp(lZ)
        return sum((c * Z ** (k // 4) for k, c in F.items()), mpmath.mpc(0))


def _dpoch(lx, lq):
    """``(x; q, q)`` with ``x = exp(lx)``, cached."""
    key = (mpmath.nstr(lx, mpmath.mp.dps), mpmath.nstr(lq, mpmath.mp.dps), mpmath.mp.dps)
    v = _POCH.get(key)
    if v is None:
        q = mpmath.exp(lq)
        v = qpoch(mpmath.exp(lx), [q, q])
        _POCH[key] = v
    return v


def _pair_poch(lu, lq):
    """``prod_eps (u^eps q; q, q)``."""
    return _dpoch(lu + lq, lq) * _dpoch(-lu + lq, lq)


def _adaptive_sum(term, params):
    """Sum ``term(n)`` over ``n`` in Z, growing the cutoff until it stabilises."""
    target = mpmath.mpf(10) ** params.target()
    if params.n_max is not None:
        return sum((term(n) for n in range(-params.n_max, params.n_max + 1)), mpmath.mpc(0)), params.n_max
    total = term(0)
    quiet = 0
    for N in range(1, N_MAX_CEILING + 1):
        inc = term(N) + term(-N)
        total += inc
        if abs(inc) <= target * max(abs(total), mpmath.mpf(10) ** -300):
            quiet += 1
            if quiet >= 2:
                return total, N
        else:
            quiet = 0
    raise NoConvergence(f"tau series did not stabilise within n_max = {N_MAX_CEILING}")


def tau_eval(params, Z, form="Tr", return_nmax=False):
    """``T(u, s; q | Z)`` in one of three equivalent forms.

    ``form="T"``: ``sum_n s^n C(uq^2n) F(uq^2n) / ((uq^(2n+1); q,q)(u^-1 q^(1-2n); q,q))``;
    ``form="Tr"``: ``C(u) sum_n st^n Z^(n^2+n/2) F(uq^2n) / prod_eps((uq^2n)^eps q; q,q)``
    with ``st = -(C(u)/C(u/q))^2 s``;
    ``form="Trational"``: ``C(u)/prod_eps(u^eps q; q,q) sum_n Z^(n^2+n/2) sh^n P_n(u) F(uq^2n)``
    with ``sh = -(C(u)/C(u/q) (u; q)/(1/u; q))^2 s``.
    """
    with mpmath.workdps(params.digits + 10):
        lu, lq = mpmath.mpmathify(params.lu), mpmath.mpmathify(params.lq)
        lZ = _lz(params, Z)
        s = mpmath.mpmathify(params.s)
        K, dg = params.order, params.digits
        ch = params.c_choice

        if form == "T":
            def term(n):
                lun = lu + 2 * n * lq
                return (
                    _spow(s, n)
                    * c_function(ch, lun, lq, lZ)
                    * _block_value(lun, lq, lZ, K, dg)
                    / _pair_poch(lun, lq)
                )
            total, nmax = _adaptive_sum(term, params)
        elif form == "Tr":
            C0 = c_function(ch, lu, lq, lZ)
            st = -((C0 / c_function(ch, lu - lq, lq, lZ)) ** 2) * s

            def term(n):
                lun = lu + 2 * n * lq
                return (
                    _spow(st, n)
                    * mpmath.exp((n * n + mpmath.mpf(n) / 2) * lZ)
                    * _block_value(lun, lq, lZ, K, dg)
                    / _pair_poch(lun, lq)
                )
            total, nmax = _adaptive_sum(term, params)
            total *= C0
        elif form == "Trational":
            C0 = c_function(ch, lu, lq, lZ)
            q = mpmath.exp(lq)
            u = mpmath.exp(lu)
            R = qpoch(u, [q]) / qpoch(1 / u, [q])
            sh = -((C0 / c_function(ch, lu - lq, lq, lZ) * R) ** 2) * s

            def term(n):
                lun = lu + 2 * n * lq
                return (
                    _spow(sh, n)
                    * mpmath.exp((n * n + mpmath.mpf(n) / 2) * lZ)
                    * p_n_coefficient(n, u, q)
                    * _block_value(lun, lq, lZ, K, dg)
                )
            total, nmax = _adaptive_sum(term, params)
            total *= C0 / _pair_poch(lu, lq)
        else:
            raise ValueError(f"unknown tau form {form!r}")
    total = +total
    return (total, nmax) if return_nmax else total


def _gamma_prefactor(lq, lZ):
    """``(q; q, q)^2 / Gamma(-(qZ)^(1/4); q^(1/4), q^(1/4))``."""
    a = mpmath.exp(lq / 4)
    x = mpmath.exp((lq + lZ) / 4)
    q = mpmath.exp(lq)
    return qpoch(q, [q, q]) ** 2 / elliptic_gamma(-x, a, a)


def tau_c_eval(params, Z, form="Tr"):
    """``T_c = (q; q, q)^2 / Gamma(-(qZ)^(1/4); q^(1/4), q^(1/4)) * T``."""
    with mpmath.workdps(params.digits + 10):
        lZ = _lz(params, Z)
        pre = _gamma_prefactor(mpmath.mpmathify(params.lq), lZ)
    val = tau_eval(params, logz(lZ - 2j * mpmath.pi * params.winding), form=form)
    with mpmath.workdps(params.digits + 10):
        return +(pre * val)


def tau_c_series_form(params, Z, include_qqq=True):
    """``T_c`` for the ``Cc`` structure function summed directly::

        (q; q, q)^2 (-1)^(2 sigma^2) sum_n Z^((sigma+n)^2) ((-1)^(4 sigma) s)^n
            F(uq^2n) / prod_eps((uq^2n)^eps q; q, q)

    No elliptic Gamma is evaluated.  ``include_qqq=False`` drops the
    ``(q; q, q)^2`` constant, which is convenient for ratios near ``q = 1``.
    """
    if params.c_choice != "Cc":
        raise ValueError("the direct series form needs c_choice='Cc'")
    with mpmath.workdps(params.digits + 10):
        lu, lq = mpmath.mpmathify(params.lu), mpmath.mpmathify(params.lq)
        lZ = _lz(params, Z)
        s = mpmath.mpmathify(params.s)
        sigma = lu / (2 * lq)
        tw = mpmath.exp(4j * mpmath.pi * sigma) * s

        def term(n):
            lun = lu + 2 * n * lq
            return (
                _spow(tw, n)
                * mpmath.exp((sigma + n) ** 2 * lZ)
                * _block_value(lun, lq, lZ, params.order, params.digits)
                / _pair_poch(lun, lq)
            )

        total, _ = _adaptive_sum(term, params)
        total *= mpmath.exp(2j * mpmath.pi * sigma**2)
        if include_qqq:
            q = mpmath.exp(lq)
            total *= qpoch(q, [q, q]) ** 2
        return +total


def tau_letters(params, Z, form="Tr"):
    """``(T1, T2, T3, T4)`` with ``T1 = T(u,s|Z)``, ``T3 = s^(1/2) T(uq,s|Z)`` and
    ``T2, T4`` their values at ``qZ``."""
    with mpmath.workdps(params.digits + 10):
        lZ = _lz(params, Z) - 2j * mpmath.pi * params.winding
        lq = mpmath.mpmathify(params.lq)
        rs = mpmath.sqrt(mpmath.mpmathify(params.s))
        up = params.shifted(1)
        T1 = tau_eval(params, logz(lZ), form)
        T3 = rs * tau_eval(up, logz(lZ), form)
        T2 = tau_eval(params, logz(lZ + lq), form)
        T4 = rs * tau_eval(up, logz(lZ + lq), form)
    return T1, T2, T3, T4


def fg_from_tau(params, Z, form="Tr"):
    """``F = -(qZ)^(1/2) T2^2/T4^2`` and ``G = -Z^(1/2) T1^2/T3^2``."""
    T1, T2, T3, T4 = tau_letters(params, Z, form)
    if T3 == 0 or T4 == 0:
        raise ZeroTau("a tau letter in a denominator vanishes")
    with mpmath.workdps(params.digits + 10):
        lZ = _lz(params, Z)
        lq = mpmath.mpmathify(params.lq)
        F = -mpmath.exp((lq + lZ) / 2) * T2**2 / T4**2
        G = -mpmath.exp(lZ / 2) * T1**2 / T3**2
        return +F, +G
