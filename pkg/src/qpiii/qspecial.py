"""Numeric q-special functions built on the multiple q-Pochhammer symbol.

All functions work at the ambient :mod:`mpmath` precision (wrap calls in
``mpmath.workdps``).  Fractional powers use principal branches.
"""

from __future__ import annotations

import mpmath

from .errors import PoleHit, UnitModulusBase

__all__ = [
    "classical_gamma",
    "elliptic_gamma",
    "q_barnes_g",
    "q_gamma",
    "qpoch",
    "qpoch_with_bound",
    "theta",
    "theta_series",
]

_SMALL = mpmath.mpf("0.1")


def _normalise_bases(Z, bases, eps=None):
    """Rewrite every base with ``|t| > 1`` by ``(Z; t, ...) = 1/(Z/t; 1/t, ...)``.

    Returns ``(Z, bases, inverted)`` where ``inverted`` is the parity of the
    number of reciprocals taken.
    """
    if eps is None:
        eps = mpmath.mpf(2) ** (-mpmath.mp.prec + 8)
    out = []
    inverted = False
    for t in bases:
        t = mpmath.mpmathify(t)
        r = abs(t)
        if abs(r - 1) <= eps:
            raise UnitModulusBase(f"base {t} has unit modulus")
        if r > 1:
            Z = Z / t
            t = 1 / t
            inverted = not inverted
        out.append(t)
    return Z, out, inverted


def _log_series(Z, bases, target):
    """``-sum_m Z^m/m prod 1/(1-t^m)`` with its tail bound, for ``|Z| <= _SMALL``."""
    az = abs(Z)
    const = mpmath.mpf(1)
    for t in bases:
        const /= 1 - abs(t)
    total = mpmath.mpc(0)
    zm = mpmath.mpc(1)
    tm = [mpmath.mpc(1)] * len(bases)
    m = 0
    while True:
        m += 1
        zm *= Z
        term = zm / m
        for k, t in enumerate(bases):
            tm[k] *= t
            term /= 1 - tm[k]
        total -= term
        tail = const * az ** (m + 1) / (1 - az)
        if tail < target or az == 0:
            return total, tail


def _equal_pair_core(Z, t, target):
    """``(Z; t, t) = prod_{n<N} (1 - Z t^n)^(n+1) (Z t^N; t, t) (Z t^N; t)^N``.

    One double and one single series instead of ``N`` single ones.
    """
    N = max(1, int(mpmath.ceil(mpmath.log(abs(Z) / _SMALL) / -mpmath.log(abs(t)))))
    head = mpmath.mpc(1)
    zn = Z
    for n in range(N):
        head *= (1 - zn) ** (n + 1)
        zn *= t
    d, ed = _qpoch_core(zn, [t, t], target / 2)
    s, es = _qpoch_core(zn, [t], target / (2 * N))
    val = head * d * s**N
    if d == 0 or s == 0:
        return val, abs(head) * (ed + es)
    # first-order propagation, doubled for safety
    err = 2 * abs(val) * (ed / abs(d) + N * es / abs(s))
    return val, err


def _qpoch_core(Z, bases, target):
    """Value and absolute error bound of ``(Z; bases)`` with all ``|t| < 1``."""
    if Z == 0:
        return mpmath.mpc(1), mpmath.mpf(0)
    if not bases:
        return 1 - Z, mpmath.mpf(0)
    az = abs(Z)
    if az <= _SMALL:
        log_val, tail = _log_series(Z, bases, target)
        val = mpmath.exp(log_val)
        # |e^(x+d) - e^x| <= |e^x| (e^|d| - 1)
        return val, abs(val) * (mpmath.exp(tail) - 1) * 2
    if len(bases) == 2 and bases[0] == bases[1]:
        return _equal_pair_core(Z, bases[0], target)
    # peel factors along the base of smallest modulus until |Z t^K| <= _SMALL
    k0 = min(range(len(bases)), key=lambda k: abs(bases[k]))
    t0 = bases[k0]
    rest = bases[:k0] + bases[k0 + 1:]
    K = max(1, int(mpmath.ceil(mpmath.log(az / _SMALL) / -mpmath.log(abs(t0)))))
    val = mpmath.mpc(1)
    err = mpmath.mpf(0)
    zi = Z
    for _ in range(K):
        v, e = _qpoch_core(zi, rest, target / (K + 1))
        val *= v
        err = err * abs(v) + e * abs(val / v) if v != 0 else err
        zi *= t0
    v, e = _qpoch_core(zi, bases, target / (K + 1))
    err = err * abs(v) + e * abs(val)
    return val * v, err


def qpoch_with_bound(Z, bases, precision_target=None):
    """``(Z; t_1, ..., t_N)_inf`` and a bound on its truncation error.

    ``precision_target`` is the base-10 exponent of the requested absolute
    error and defaults to ``-mp.dps``.  Bases with ``|t| > 1`` are handled
    through the reciprocal rewriting; unit-modulus bases are rejected.
    """
    if precision_target is None:
        precision_target = -mpmath.mp.dps
    Z = mpmath.mpmathify(Z)
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec + 8)  # caller precision, not the padded one
    with mpmath.extradps(10):
        Z, bases, inverted = _normalise_bases(Z, list(bases), eps)
        target = mpmath.mpf(10) ** (precision_target - 5)
        val, err = _qpoch_core(Z, bases, target)
        if inverted:
            if abs(val) <= err or val == 0:
                raise PoleHit(f"pole of the continued Pochhammer symbol at Z={Z}")
            inv = 1 / val
            err = err * abs(inv) ** 2 * 2
            val = inv
    return +val, +err


def qpoch(Z, bases, precision_target=None):
    """``(Z; t_1, ..., t_N)_inf`` (see :func:`qpoch_with_bound`)."""
    if not isinstance(bases, (list, tuple)):
        bases = [bases]
    return qpoch_with_bound(Z, bases, precision_target)[0]


def theta(Z, q):
    """``theta(Z; q) = (Z; q)(q/Z; q)``."""
    Z = mpmath.mpmathify(Z)
    if Z == 0:
        raise PoleHit("theta(0; q) is singular")
    return qpoch(Z, [q]) * qpoch(q / Z, [q])


def theta_series(Z, q, kmax=None):
    """Theta function from its bilateral series divided by ``(q; q)``."""
    Z, q = mpmath.mpmathify(Z), mpmath.mpmathify(q)
    if kmax is None:
        # q^(k(k-1)/2) max(|Z|,1/|Z|)^k must drop below the working epsilon
        lq = -mpmath.log(abs(q))
        lz = abs(mpmath.log(abs(Z)))
        need = mpmath.mp.dps * mpmath.log(10) + 20
        kmax = int((lz + lq / 2 + mpmath.sqrt((lz + lq / 2) ** 2 + 2 * lq * need)) / lq) + 2
    s = mpmath.mpc(0)
    for k in range(-kmax, kmax + 1):
        s += (-1) ** k * q ** (k * (k - 1) // 2) * Z**k
    return s / qpoch(q, [q])


def elliptic_gamma(Z, t, q):
    """``Gamma(Z; t, q) = (t q / Z; t, q) / (Z; t, q)``."""
    Z = mpmath.mpmathify(Z)
    den = qpoch(Z, [t, q])
    if den == 0:
        raise PoleHit(f"elliptic Gamma pole at Z={Z}")
    return qpoch(t * q / Z, [t, q]) / den


def _qpow(q, x):
    return mpmath.exp(x * mpmath.log(q))


def q_gamma(x, q):
    """``Gamma(x; q) = (1-q)^(1-x) (q; q) / (q^x; q)``."""
    x, q = mpmath.mpmathify(x), mpmath.mpmathify(q)
    den = qpoch(_qpow(q, x), [q])
    if den == 0:
        raise PoleHit(f"q-Gamma pole at x={x}")
    return mpmath.power(1 - q, 1 - x) * qpoch(q, [q]) / den


def q_barnes_g(x, q):
    """``G(x; q) = (1-q)^(-(x-1)(x-2)/2) (q; q)^(x-1) (q^x; q, q) / (q; q, q)``."""
    x, q = mpmath.mpmathify(x), mpmath.mpmathify(q)
    return (
        mpmath.power(1 - q, -(x - 1) * (x - 2) / 2)
        * mpmath.power(qpoch(q, [q]), x - 1)
        * qpoch(_qpow(q, x), [q, q])
        / qpoch(q, [q, q])
    )


def classical_gamma(x):
    """Euler Gamma at working precision."""
    x = mpmath.mpmathify(x)
    if mpmath.im(x) == 0 and mpmath.re(x) <= 0 and mpmath.re(x) == mpmath.floor(mpmath.re(x)):
        raise PoleHit(f"Gamma pole at {x}")
    return mpmath.gamma(x)
