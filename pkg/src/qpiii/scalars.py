"""Coefficient backends: exact rational functions, exact rationals, mpmath complex.

Every series computation in the package is written against a *field* object
that knows how to build constants and test for zero.  Three fields exist:

``ExactField``
    rational functions with integer coefficients in an ordered list of
    generators (default ``a = q^{1/4}``, ``b = u^{1/4}``), stored in
    canonical reduced form.  Polynomial gcd is delegated to FLINT.
``RationalField``
    plain :class:`fractions.Fraction` values, used for rational sample points
    and for exact arithmetic in a single rational parameter.
``NumericField``
    :mod:`mpmath` complex numbers at a configured decimal precision.

Values of all three support ``+ - * /`` and integer powers, so the block and
series code never branches on the backend.
"""

from __future__ import annotations

import contextlib
from fractions import Fraction
from numbers import Integral, Rational

import flint
import mpmath

from .errors import BackendMismatch, DenominatorVanishes, ZeroDenominator

DEFAULT_DIGITS = 50

__all__ = [
    "DEFAULT_DIGITS",
    "ExactField",
    "ExactScalar",
    "NumericField",
    "RationalField",
    "exact_eval",
    "exact_normalize",
]


# ---------------------------------------------------------------------------
# exact rational functions


class ExactField:
    """Field of rational functions over the integers in the given generators.

    Monomial order is lexicographic in the order the generators are listed;
    that order fixes the sign convention of the canonical form (leading
    coefficient of the denominator is positive).
    """

    kind = "exact"

    def __init__(self, names=("a", "b")):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names {self.names}")
        self.ctx = flint.fmpz_mpoly_ctx.get(self.names, "lex")
        self._one = self.ctx.constant(1)
        self._zero = self.ctx.constant(0)

    def __eq__(self, other):
        return isinstance(other, ExactField) and other.names == self.names

    def __hash__(self):
        return hash(("ExactField", self.names))

    def __repr__(self):
        return f"ExactField{self.names}"

    @property
    def nvars(self):
        return len(self.names)

    def zero(self):
        return ExactScalar._raw(self, self._zero, self._one)

    def one(self):
        return ExactScalar._raw(self, self._one, self._one)

    def const(self, value):
        if isinstance(value, ExactScalar):
            if value.field != self:
                raise BackendMismatch(f"{value.field} vs {self}")
            return value
        if isinstance(value, Integral):
            return ExactScalar._raw(self, self.ctx.constant(int(value)), self._one)
        if isinstance(value, Rational):
            value = Fraction(value)
            return ExactScalar._raw(
                self, self.ctx.constant(value.numerator), self.ctx.constant(value.denominator)
            )
        raise TypeError(f"cannot embed {value!r} in {self}")

    def gen(self, name):
        i = self.names.index(name)
        exps = [0] * self.nvars
        exps[i] = 1
        return self.monomial(exps)

    def gens(self):
        return tuple(self.gen(n) for n in self.names)

    def monomial(self, exps, coeff=1):
        """``coeff * prod(g_i ** exps[i])``; negative exponents allowed."""
        if isinstance(exps, dict):
            vec = [0] * self.nvars
            for name, e in exps.items():
                vec[self.names.index(name)] = e
            exps = vec
        exps = tuple(int(e) for e in exps)
        num = tuple(max(e, 0) for e in exps)
        den = tuple(max(-e, 0) for e in exps)
        c = Fraction(coeff)
        if c == 0:
            return self.zero()
        n = self.ctx.from_dict({num: c.numerator})
        d = self.ctx.from_dict({den: c.denominator})
        if c.denominator < 0:  # pragma: no cover - Fraction keeps denominators positive
            n, d = -n, -d
        return ExactScalar._raw(self, n, d)

    def from_laurent(self, num, den=None):
        """Build a value from Laurent-polynomial dicts ``{exponent tuple: int}``."""
        return exact_normalize(num, {(0,) * self.nvars: 1} if den is None else den, self)

    def is_zero(self, x):
        return x.num.is_zero()

    def workdps(self):
        return contextlib.nullcontext()


class ExactScalar:
    """Reduced fraction ``num/den`` of integer polynomials.

    Instances are immutable.  The representation is canonical: ``gcd(num,
    den) = 1`` and the lex-leading coefficient of ``den`` is positive, so two
    values are equal iff their numerators and denominators are identical.
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den=None):
        v = exact_normalize(num, den if den is not None else field._one, field)
        self.field, self.num, self.den = v.field, v.num, v.den

    @classmethod
    def _raw(cls, field, num, den):
        obj = object.__new__(cls)
        obj.field = field
        obj.num = num
        obj.den = den
        return obj

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            if other.field != self.field:
                raise BackendMismatch(f"{other.field} vs {self.field}")
            return other
        if isinstance(other, (Integral, Rational)):
            return self.field.const(other)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d1 == d2:
            return _reduce(self.field, n1 + n2, d1)
        g = d1.gcd(d2)
        if g.is_one():
            return ExactScalar._raw(self.field, n1 * d2 + n2 * d1, d1 * d2)
        d1g = d1 / g
        d2g = d2 / g
        t = n1 * d2g + n2 * d1g
        if t.is_zero():
            return self.field.zero()
        g2 = t.gcd(g)
        if not g2.is_one():
            t = t / g2
            g = g / g2
        return _fix_sign(self.field, t, d1g * d2g * g)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar._raw(self.field, -self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return self.field.zero()
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        g1 = n1.gcd(d2)
        if not g1.is_one():
            n1 = n1 / g1
            d2 = d2 / g1
        g2 = n2.gcd(d1)
        if not g2.is_one():
            n2 = n2 / g2
            d1 = d1 / g2
        return _fix_sign(self.field, n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDenominator("inverse of zero")
        return _fix_sign(self.field, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, Integral):
            raise TypeError("only integer powers of exact values are defined")
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return self.field.one()
        return _fix_sign(self.field, self.num**k, self.den**k)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.num.to_dict().items())),
                     tuple(sorted(self.den.to_dict().items()))))

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    # -- misc -------------------------------------------------------------
    def __repr__(self):
        if self.den.is_one():
            return f"({self.num})"
        return f"({self.num})/({self.den})"

    def evaluate(self, assignment):
        return exact_eval(self, assignment)

    def substitute_monomial(self, images):
        """Apply the ring map sending each generator to a Laurent monomial.

        ``images`` maps a generator name to an exponent tuple over the same
        generators; unnamed generators are fixed.  Used for ``u -> u q^k``
        (``b -> b a^k``) and ``u -> 1/u`` (``b -> b^-1``).
        """
        n = self.field.nvars
        rows = []
        for i, name in enumerate(self.field.names):
            if name in images:
                rows.append(tuple(images[name]))
            else:
                rows.append(tuple(1 if j == i else 0 for j in range(n)))

        def remap(poly):
            out = {}
            for exps, c in poly.to_dict().items():
                new = [0] * n
                for i, e in enumerate(exps):
                    e = int(e)
                    if e:
                        r = rows[i]
                        for j in range(n):
                            new[j] += e * r[j]
                key = tuple(new)
                out[key] = out.get(key, 0) + int(c)
            return out

        return exact_normalize(remap(self.num), remap(self.den), self.field)

    def degrees(self):
        return tuple(int(max(x, y)) for x, y in zip(self.num.degrees(), self.den.degrees()))


def _fix_sign(field, num, den):
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    if den.leading_coefficient() < 0:
        num, den = -num, -den
    return ExactScalar._raw(field, num, den)


def _reduce(field, num, den):
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    if num.is_zero():
        return field.zero()
    g = num.gcd(den)
    if not g.is_one():
        num = num / g
        den = den / g
    return _fix_sign(field, num, den)


def exact_normalize(n, d, field=None):
    """Canonical reduced fraction ``n/d``.

    ``n`` and ``d`` may be FLINT polynomials or Laurent dicts
    ``{exponent tuple: int}`` (negative exponents are cleared by a common
    monomial).  Raises :class:`ZeroDenominator` when ``d`` is zero.
    """
    if field is None:
        field = ExactField()
    if isinstance(n, dict) or isinstance(d, dict):
        n = n if isinstance(n, dict) else {k: int(v) for k, v in n.to_dict().items()}
        d = d if isinstance(d, dict) else {k: int(v) for k, v in d.to_dict().items()}
        n = {k: v for k, v in n.items() if v}
        d = {k: v for k, v in d.items() if v}
        if not d:
            raise ZeroDenominator("zero denominator")
        if not n:
            return field.zero()
        nv = field.nvars
        shift = [0] * nv
        for k in list(n) + list(d):
            for i in range(nv):
                shift[i] = min(shift[i], k[i])
        n = field.ctx.from_dict({tuple(e - s for e, s in zip(k, shift)): v for k, v in n.items()})
        d = field.ctx.from_dict({tuple(e - s for e, s in zip(k, shift)): v for k, v in d.items()})
    return _reduce(field, n, d)


def _eval_poly(poly, names, assignment, one):
    terms = poly.to_dict()
    if not terms:
        return one * 0
    needed = [i for i, d in enumerate(poly.degrees()) if d > 0]
    for i in needed:
        if names[i] not in assignment:
            raise KeyError(f"assignment lacks generator {names[i]!r}")
    powers = {}
    total = one * 0
    for exps, c in terms.items():
        term = one * int(c)
        for i in needed:
            e = int(exps[i])
            if e:
                key = (i, e)
                p = powers.get(key)
                if p is None:
                    p = assignment[names[i]] ** e
                    powers[key] = p
                term = term * p
        total = total + term
    return total


def exact_eval(x, assignment, one=None):
    """Evaluate an exact value at a point.

    ``assignment`` maps generator names to values of any ring (mpmath
    numbers, Fractions, ...).  Raises :class:`DenominatorVanishes` at a pole.
    """
    if one is None:
        sample = next(iter(assignment.values()), None)
        one = Fraction(1) if isinstance(sample, (Integral, Rational)) else mpmath.mpc(1)
    names = x.field.names
    den = _eval_poly(x.den, names, assignment, one)
    if den == 0:
        raise DenominatorVanishes(f"denominator of {x!r} vanishes at {assignment}")
    return _eval_poly(x.num, names, assignment, one) / den


# ---------------------------------------------------------------------------
# exact rationals


class RationalField:
    kind = "rational"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")

    def __repr__(self):
        return "RationalField()"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def const(self, value):
        return Fraction(value)

    def is_zero(self, x):
        return x == 0

    def workdps(self):
        return contextlib.nullcontext()


# ---------------------------------------------------------------------------
# arbitrary-precision complex numbers


class NumericField:
    """mpmath complex numbers at ``digits`` decimal digits.

    ``tol`` is the absolute threshold used by :meth:`is_zero`; it defaults to
    ``10**-(digits - 10)``.
    """

    kind = "numeric"

    def __init__(self, digits=DEFAULT_DIGITS, tol=None):
        self.digits = int(digits)
        self.tol = mpmath.mpf(10) ** (-(self.digits - 10)) if tol is None else mpmath.mpf(tol)

    def __eq__(self, other):
        return isinstance(other, NumericField) and other.digits == self.digits

    def __hash__(self):
        return hash(("NumericField", self.digits))

    def __repr__(self):
        return f"NumericField(digits={self.digits})"

    def zero(self):
        return mpmath.mpc(0)

    def one(self):
        return mpmath.mpc(1)

    def const(self, value):
        if isinstance(value, Fraction):
            return mpmath.mpc(mpmath.mpf(value.numerator) / value.denominator)
        return mpmath.mpc(value)

    def is_zero(self, x):
        return abs(x) <= self.tol

    def workdps(self):
        return mpmath.workdps(self.digits)
