"""Young diagrams, Nekrasov factors and the instanton block series.

Cells are 1-based ``(i, j)`` with ``i`` the row.  For a cell outside a
diagram the arm and leg are simply negative, which the Nekrasov factor needs
(``a_0(s) = -1`` for the empty diagram, for instance).

Three block families are provided:

* the pure SU(2) block ``F(u; q1, q2 | Z)``, numerically for arbitrary bases
  and exactly either in the ``(q^-1, q)`` specialisation over ``a = q^(1/4)``,
  ``b = u^(1/4)`` or for generic symbolic ``q1, q2, u``;
* the parity filtered "lozenge" block, a series in ``Z^(1/2)``;
* the classical ``c = 1`` irregular block ``F(sigma^2 | z)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint
import mpmath

from .errors import NegativeSize, PoleAtResonance, ResonantSigma
from .scalars import ExactField, NumericField, RationalField, exact_normalize
from .series import GradedSeries

__all__ = [
    "BlockSpec",
    "Partition",
    "arm",
    "block_4d",
    "block_pairs",
    "conformal_block",
    "conformal_block_exact",
    "conformal_block_generic_exact",
    "conformal_block_lozenge",
    "conformal_block_numeric",
    "convergence_bound",
    "hook_lengths",
    "leg",
    "nekrasov_exponents",
    "nekrasov_factor",
    "partitions_of",
    "shift_exact_block",
]


class Partition(tuple):
    """Weakly decreasing tuple of positive parts."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(parts[k] < parts[k + 1] for k in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self):
        return sum(self)

    def part(self, i):
        """``lambda_i`` (1-based), zero beyond the last row."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    @property
    def conjugate(self):
        return _conjugate(tuple(self))

    def cells(self):
        return [(i, j) for i in range(1, len(self) + 1) for j in range(1, self[i - 1] + 1)]

    def __repr__(self):
        return f"Partition({list(self)})"


@lru_cache(maxsize=None)
def _conjugate(parts):
    if not parts:
        return Partition(())
    return Partition(tuple(sum(1 for p in parts if p >= j) for j in range(1, parts[0] + 1)))


def arm(lam, cell):
    i, j = cell
    return lam.part(i) - j


def leg(lam, cell):
    i, j = cell
    return lam.conjugate.part(j) - i


def hook_lengths(lam):
    return [arm(lam, s) + leg(lam, s) + 1 for s in lam.cells()]


@lru_cache(maxsize=None)
def _partitions(n, largest):
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n):
    """All partitions of ``n`` in reverse-lexicographic order (``(n)`` first)."""
    if n < 0:
        raise NegativeSize(f"no partitions of negative size {n}")
    return [Partition(p) for p in _partitions(n, n)]


@lru_cache(maxsize=None)
def block_pairs(order):
    """All pairs ``(lam1, lam2)`` with ``|lam1| + |lam2| <= order``, grouped by total size."""
    out = []
    for total in range(order + 1):
        for k in range(total, -1, -1):
            for l1 in partitions_of(k):
                for l2 in partitions_of(total - k):
                    out.append((total, l1, l2))
    return tuple(out)


# ---------------------------------------------------------------------------
# Nekrasov factor


@lru_cache(maxsize=None)
def nekrasov_exponents(lam, mu):
    """Exponent pairs ``(x, y)`` such that ``N_{lam,mu}(u) = prod (1 - u q2^x q1^y)``."""
    out = []
    for s in lam.cells():
        out.append((-arm(mu, s) - 1, leg(lam, s)))
    for s in mu.cells():
        out.append((arm(lam, s), -leg(mu, s) - 1))
    return tuple(out)


def nekrasov_factor(lam, mu, u, q1, q2):
    """``N_{lam,mu}(u; q1, q2)`` for values of any ring with integer powers."""
    lam, mu = Partition(lam), Partition(mu)
    result = None
    for x, y in nekrasov_exponents(lam, mu):
        f = 1 - u * q2**x * q1**y
        result = f if result is None else result * f
    if result is None:
        return u**0 if not isinstance(u, (int, Fraction)) else Fraction(1)
    return result


def _specialised_exponents(lam, mu):
    """For ``(q1, q2) = (q^-1, q)`` every factor is ``1 - u q^m``; return the ``m``."""
    return tuple(x - y for x, y in nekrasov_exponents(lam, mu))


def _lozenge_exponents(lam, mu):
    out = []
    for s in lam.cells():
        if (arm(mu, s) + leg(lam, s) + 1) % 2 == 0:
            out.append((-arm(mu, s) - 1, leg(lam, s)))
    for s in mu.cells():
        if (arm(lam, s) + leg(mu, s) + 1) % 2 == 0:
            out.append((arm(lam, s), -leg(mu, s) - 1))
    return tuple(out)


# ---------------------------------------------------------------------------
# block specification


@dataclass(frozen=True)
class BlockSpec:
    """Parameters of one block computation.

    ``order`` is the truncation order in ``Z``.  In the exact backend ``u``
    and ``q`` are the symbolic generators and ``q1, q2`` must be left unset
    (the ``(q^-1, q)`` specialisation); numeric blocks take complex ``u, q1,
    q2`` directly.
    """

    order: int
    backend: str = "numeric"
    u: object = None
    q1: object = None
    q2: object = None
    digits: int = 50

    def __post_init__(self):
        if self.order < 0:
            raise NegativeSize(f"negative order {self.order}")
        if self.backend not in ("exact", "numeric"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "exact" and any(v is not None for v in (self.u, self.q1, self.q2)):
            raise ValueError("exact blocks are symbolic in u and q; leave u, q1, q2 unset")
        if self.backend == "numeric" and any(v is None for v in (self.u, self.q1, self.q2)):
            raise ValueError("numeric blocks need u, q1 and q2")


def conformal_block(spec):
    """Block series ``F(u; q1, q2 | Z)`` as a :class:`GradedSeries` in ``zeta``."""
    if spec.backend == "exact":
        return conformal_block_exact(spec.order)
    return conformal_block_numeric(spec.u, spec.q1, spec.q2, spec.order, digits=spec.digits)


# ---------------------------------------------------------------------------
# exact blocks


def _sum_inverse_binomials(field, terms):
    """Exact ``sum_i c_i / prod_j (1 - m_ij)`` for Laurent monomials ``m_ij``.

    ``terms`` is a list of ``(coefficient, [exponent vectors])``.  The sum is
    put over the least common multiple of the binomial factors so only one
    gcd is needed at the end.
    """
    nv = field.nvars
    zero = (0,) * nv
    canon_terms = []
    for coeff, vecs in terms:
        sign = 1
        mono = [0] * nv
        mult = {}
        for v in vecs:
            v = tuple(v)
            if v == zero:
                raise PoleAtResonance("a Nekrasov factor vanishes identically")
            first = next(e for e in v if e)
            if first < 0:
                # 1 - m = -m (1 - 1/m)
                sign = -sign
                for k in range(nv):
                    mono[k] -= v[k]  # 1/(1-m) = -(1/m) / (1 - 1/m)
                v = tuple(-e for e in v)
            # 1 - m = x^-neg (x^neg - x^pos)  =>  1/(1-m) = x^neg / f
            for k in range(nv):
                if v[k] < 0:
                    mono[k] += -v[k]
            mult[v] = mult.get(v, 0) + 1
        canon_terms.append((sign * Fraction(coeff), tuple(mono), mult))

    lcm = {}
    for _, _, mult in canon_terms:
        for v, k in mult.items():
            if lcm.get(v, 0) < k:
                lcm[v] = k
    ctx = field.ctx

    @lru_cache(maxsize=None)
    def fpow(v, k):
        pos = tuple(max(e, 0) for e in v)
        neg = tuple(max(-e, 0) for e in v)
        f = ctx.from_dict({neg: 1, pos: -1}) if pos != neg else ctx.constant(0)
        return f**k

    lo = [min(t[1][k] for t in canon_terms) for k in range(nv)]
    den_content = 1
    for c, _, _ in canon_terms:
        den_content = den_content * c.denominator // _gcd(den_content, c.denominator)
    num = ctx.constant(0)
    for c, mono, mult in canon_terms:
        p = ctx.from_dict({tuple(m - l for m, l in zip(mono, lo)): int(c * den_content)})
        for v, k in lcm.items():
            extra = k - mult.get(v, 0)
            if extra:
                p = p * fpow(v, extra)
        num = num + p
    den = ctx.constant(den_content)
    for v, k in lcm.items():
        den = den * fpow(v, k)
    # restore the monomial offset x^lo
    num_shift = tuple(max(l, 0) for l in lo)
    den_shift = tuple(max(-l, 0) for l in lo)
    if any(num_shift):
        num = num * ctx.from_dict({num_shift: 1})
    if any(den_shift):
        den = den * ctx.from_dict({den_shift: 1})
    return exact_normalize(num, den, field)


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return x


_EXACT_CACHE = {}


def conformal_block_exact(order, field=None):
    """Exact block at ``(q1, q2) = (q^-1, q)`` with coefficients in ``a, b``.

    Each factor ``1 - u^e q^m`` becomes ``1 - b^(4e) a^(4m)``.
    """
    field = field or ExactField(("a", "b"))
    key = (field, order)
    if key in _EXACT_CACHE:
        return _EXACT_CACHE[key]
    ia, ib = field.names.index("a"), field.names.index("b")

    def vec(e, m):
        v = [0] * field.nvars
        v[ia] = 4 * m
        v[ib] = 4 * e
        return tuple(v)

    by_order = {}
    for total, l1, l2 in block_pairs(order):
        if total == 0:
            continue
        vecs = []
        for (lam, mu, e) in ((l1, l1, 0), (l2, l2, 0), (l1, l2, 1), (l2, l1, -1)):
            vecs.extend(vec(e, m) for m in _specialised_exponents(lam, mu))
        by_order.setdefault(total, []).append((1, vecs))
    coeffs = {0: field.one()}
    for total, terms in by_order.items():
        coeffs[4 * total] = _sum_inverse_binomials(field, terms)
    series = GradedSeries(field, coeffs, 4 * order)
    _EXACT_CACHE[key] = series
    return series


def shift_exact_block(block, k=0, invert=False):
    """The block at ``u^(+-1) q^k`` via the substitution ``b -> b^(+-1) a^k``.

    ``b -> b a^k`` sends ``u = b^4`` to ``u q^k``; ``k`` may be any integer.
    """
    field = block.field
    n = field.nvars
    ia, ib = field.names.index("a"), field.names.index("b")
    img = [0] * n
    img[ib] = -1 if invert else 1
    img[ia] = k
    images = {"b": tuple(img)}
    if k == 0 and not invert:
        return block
    return GradedSeries(
        field, {e: c.substitute_monomial(images) for e, c in block.coeffs.items()}, block.order
    )


def conformal_block_generic_exact(order, field=None):
    """Exact block in independent symbols ``q1, q2, u`` (small orders only)."""
    field = field or ExactField(("q1", "q2", "u"))
    i1, i2, iu = (field.names.index(n) for n in ("q1", "q2", "u"))

    def vec(e, x, y):
        v = [0] * field.nvars
        v[iu] = e
        v[i2] = x
        v[i1] = y
        return tuple(v)

    by_order = {}
    for total, l1, l2 in block_pairs(order):
        if total == 0:
            continue
        vecs = []
        for (lam, mu, e) in ((l1, l1, 0), (l2, l2, 0), (l1, l2, 1), (l2, l1, -1)):
            vecs.extend(vec(e, x, y) for x, y in nekrasov_exponents(lam, mu))
        by_order.setdefault(total, []).append((1, vecs))
    coeffs = {0: field.one()}
    for total, terms in by_order.items():
        coeffs[4 * total] = _sum_inverse_binomials(field, terms)
    return GradedSeries(field, coeffs, 4 * order)


# ---------------------------------------------------------------------------
# numeric blocks


def to_acb(z):
    """Exact conversion of an mpmath number to a FLINT complex ball."""
    z = mpmath.mpc(z)
    return flint.acb(flint.arb(z.real), flint.arb(z.imag))


def _arb_to_mpf(x):
    mid = x.mid()
    if mid == 0:
        return mpmath.mpf(0)
    m, e = mid.man_exp()
    return mpmath.mpf((int(m), int(e)))


def acb_to_mpc(z):
    return mpmath.mpc(_arb_to_mpf(z.real), _arb_to_mpf(z.imag))


class _flint_precision:
    """Temporarily set the FLINT working precision (in bits)."""

    def __init__(self, digits):
        self.bits = int(digits * 3.33) + 64

    def __enter__(self):
        self.old = flint.ctx.prec
        flint.ctx.prec = self.bits

    def __exit__(self, *exc):
        flint.ctx.prec = self.old


def _numeric_sum(u, q1, q2, order, exps_fn, weight_unit, digits):
    """Sum of ``Z^(weight_unit * total / 4)`` over pairs, in FLINT ball arithmetic.

    The hot loop multiplies cached factors ``1 - u^e q2^x q1^y``; results are
    converted back to mpmath at the end.
    """
    with _flint_precision(digits + 20):
        U = {0: flint.acb(1), 1: to_acb(u)}
        U[-1] = 1 / U[1]
        Q1, Q2 = to_acb(q1), to_acb(q2)
        tol = flint.arb(2) ** (-(flint.ctx.prec - 40))
        factors = {}
        nf_cache = {}

        def factor(e, x, y):
            key = (e, x, y)
            v = factors.get(key)
            if v is None:
                v = 1 - U[e] * Q2**x * Q1**y
                if abs(v) < tol:
                    raise PoleAtResonance(f"Nekrasov factor vanishes at u={u}")
                factors[key] = v
            return v

        def nf(lam, mu, e):
            key = (lam, mu, e)
            v = nf_cache.get(key)
            if v is None:
                v = flint.acb(1)
                for x, y in exps_fn(lam, mu):
                    v *= factor(e, x, y)
                if e != 0:
                    return v  # pair specific, not worth caching
                nf_cache[key] = v
            return v

        sums = {}
        for total, l1, l2 in block_pairs(order):
            den = nf(l1, l1, 0) * nf(l2, l2, 0) * nf(l1, l2, 1) * nf(l2, l1, -1)
            k = weight_unit * total
            sums[k] = sums[k] + 1 / den if k in sums else 1 / den
        with mpmath.workdps(digits + 20):
            return {k: acb_to_mpc(v) for k, v in sums.items()}


def conformal_block_numeric(u, q1, q2, order, digits=50):
    """Numeric block ``F(u; q1, q2 | Z)`` to ``Z^order``."""
    field = NumericField(digits)
    with mpmath.workdps(digits + 20):
        u, q1, q2 = mpmath.mpc(u), mpmath.mpc(q1), mpmath.mpc(q2)
    coeffs = _numeric_sum(u, q1, q2, order, nekrasov_exponents, 4, digits)
    return GradedSeries(field, coeffs, 4 * order)


def conformal_block_lozenge(u, q1, q2, order, digits=50):
    """Parity filtered block ``F_lozenge`` as a series in ``Z^(1/2)``.

    ``order`` counts half-integer steps: the result holds ``Z^(k/2)`` for
    ``k <= order`` (exponent ``2k`` in ``zeta``).
    """
    field = NumericField(digits)
    with mpmath.workdps(digits + 20):
        u, q1, q2 = mpmath.mpc(u), mpmath.mpc(q1), mpmath.mpc(q2)
    coeffs = _numeric_sum(u, q1, q2, order, _lozenge_exponents_cached, 2, digits)
    return GradedSeries(field, coeffs, 2 * order)


@lru_cache(maxsize=None)
def _lozenge_exponents_cached(lam, mu):
    return _lozenge_exponents(lam, mu)


def convergence_bound(u, q, Z, nmax=200):
    """Majorant ``exp|2|Z| / (L1 L2 (q^(1/2) - q^(-1/2))^4)|`` for the specialised block.

    ``L1`` and ``L2`` are the largest constants with
    ``|(q^(n/2) - q^(-n/2)) / (q^(1/2) - q^(-1/2))| >= n L1^(1/2)`` for
    ``n != 0`` and ``|(u^(1/2) q^(n/2) - u^(-1/2) q^(-n/2)) / (q^(1/2) - q^(-1/2))|
    >= L2^(1/2)`` for all ``n``; the infima are taken over ``|n| <= nmax``,
    beyond which the terms grow geometrically.
    """
    q, u, Z = mpmath.mpc(q), mpmath.mpc(u), mpmath.mpc(Z)
    sq = mpmath.sqrt(q)
    su = mpmath.sqrt(u)
    d = sq - 1 / sq
    l1 = min(abs((sq**n - sq ** (-n)) / d) / n for n in range(1, nmax + 1)) ** 2
    l2 = min(abs((su * sq**n - 1 / (su * sq**n)) / d) for n in range(-nmax, nmax + 1)) ** 2
    return mpmath.exp(abs(2 * abs(Z) / (l1 * l2 * d**4)))


# ---------------------------------------------------------------------------
# classical c = 1 irregular block


def block_4d(sigma, order, field=None):
    """Irregular ``c = 1`` block ``F(sigma^2 | z)`` to ``z^order``.

    Each q-factor ``1 - u q^m`` with ``u = e^(2 sigma hbar)``, ``q = e^hbar``
    behaves like ``-hbar (2 sigma + m)``; the ``hbar`` powers cancel against
    ``Z = hbar^4 z``.  ``sigma`` may be a :class:`Fraction` (exact rational
    coefficients) or any mpmath number.  The series is graded in ``z^(1/4)``
    like every other block.
    """
    if isinstance(sigma, (int, Fraction)):
        sigma = Fraction(sigma)
        if (2 * sigma).denominator == 1:
            raise ResonantSigma(f"2*sigma = {2 * sigma} is an integer")
        field = field or RationalField()
        one = Fraction(1)
    else:
        sigma = mpmath.mpmathify(sigma)
        if abs(2 * sigma - mpmath.nint(mpmath.re(2 * sigma))) < mpmath.mpf(10) ** (-(mpmath.mp.dps - 5)):
            raise ResonantSigma(f"2*sigma = {2 * sigma} is an integer")
        field = field or NumericField(mpmath.mp.dps)
        one = mpmath.mpc(1)
    xs = {0: 0 * one, 1: 2 * sigma * one, -1: -2 * sigma * one}
    cache = {}

    def nf(lam, mu, e):
        key = (lam, mu, e)
        v = cache.get(key)
        if v is None:
            v = one
            for m in _specialised_exponents(lam, mu):
                v = v * (xs[e] + m)
            cache[key] = v
        return v

    coeffs = {}
    for total, l1, l2 in block_pairs(order):
        den = nf(l1, l1, 0) * nf(l2, l2, 0) * nf(l1, l2, 1) * nf(l2, l1, -1)
        coeffs[4 * total] = coeffs.get(4 * total, 0 * one) + one / den
    return GradedSeries(field, coeffs, 4 * order)
