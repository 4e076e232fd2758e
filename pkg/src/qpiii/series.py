"""Truncated sparse power series in the grading variable zeta = Z^(1/4)."""

from __future__ import annotations

from numbers import Integral

from .errors import BackendMismatch

__all__ = ["GradedSeries", "series_mul", "series_scale_z", "series_assert_zero"]


class GradedSeries:
    """Sparse series ``sum c_k zeta^k`` known for exponents ``k <= order``.

    ``order`` is in zeta units, so ``Z^n`` lives at exponent ``4n`` and
    ``Z^(1/2)`` at exponent 2.  Coefficients belong to ``field`` (see
    :mod:`qpiii.scalars`); absent exponents are zero.
    """

    __slots__ = ("field", "order", "coeffs")

    def __init__(self, field, coeffs=None, order=0):
        self.field = field
        self.order = int(order)
        cs = {}
        if coeffs:
            for k, c in coeffs.items():
                if k <= self.order and not _exactly_zero(field, c):
                    cs[int(k)] = c
        self.coeffs = cs

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, field, value, order):
        return cls(field, {0: field.const(value) if not hasattr(value, "field") else value}, order)

    @classmethod
    def monomial(cls, field, exponent, value, order):
        return cls(field, {exponent: value}, order)

    @classmethod
    def from_z_coefficients(cls, field, coeffs, order_z):
        """Series from a list ``[c_0, c_1, ...]`` of integer-Z-power coefficients."""
        return cls(field, {4 * k: c for k, c in enumerate(coeffs)}, 4 * order_z)

    # -- access -----------------------------------------------------------
    def __getitem__(self, k):
        if k > self.order:
            raise IndexError(f"exponent {k} beyond truncation order {self.order}")
        return self.coeffs.get(k, self.field.zero())

    def exponents(self):
        return sorted(self.coeffs)

    def items(self):
        return [(k, self.coeffs[k]) for k in sorted(self.coeffs)]

    def z_coefficients(self):
        """Coefficients of integer powers of Z, ``[c_0, ..., c_{order//4}]``."""
        return [self[4 * k] for k in range(self.order // 4 + 1)]

    def truncate(self, order):
        order = min(order, self.order)
        return GradedSeries(self.field, {k: c for k, c in self.coeffs.items() if k <= order}, order)

    def is_zero(self):
        return not self.nonzero_terms()

    def __repr__(self):
        body = " + ".join(f"({c})*zeta^{k}" for k, c in self.items()) or "0"
        return f"GradedSeries[{self.field!r}, order={self.order}]({body})"

    # -- ring operations --------------------------------------------------
    def _check(self, other):
        if not isinstance(other, GradedSeries):
            return False
        if other.field != self.field:
            raise BackendMismatch(f"{self.field!r} vs {other.field!r}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return self + GradedSeries(self.field, {0: self.field.const(other)}, self.order)
        order = min(self.order, other.order)
        out = {k: c for k, c in self.coeffs.items() if k <= order}
        for k, c in other.coeffs.items():
            if k <= order:
                out[k] = out[k] + c if k in out else c
        return GradedSeries(self.field, out, order)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries(self.field, {k: -c for k, c in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        if not self._check(other):
            return self + (-self.field.const(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GradedSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply every coefficient by the scalar ``c``."""
        return GradedSeries(self.field, {k: v * c for k, v in self.coeffs.items()}, self.order)

    def shift(self, m):
        """Multiply by ``zeta^m``; the truncation order moves with the series."""
        return GradedSeries(self.field, {k + m: c for k, c in self.coeffs.items()}, self.order + m)

    def scale_z(self, c):
        return series_scale_z(self, c)

    def substitute_z(self, factor):
        """``Z -> factor * Z`` for a series supported on integer powers of Z."""
        out = {}
        powers = {}
        for k, c in self.coeffs.items():
            if k % 4:
                raise ValueError("substitute_z needs a series in integer powers of Z")
            n = k // 4
            p = powers.get(n)
            if p is None:
                p = factor**n
                powers[n] = p
            out[k] = c * p
        return GradedSeries(self.field, out, self.order)

    def exp(self):
        """``exp`` of a series with no terms at exponents ``<= 0``."""
        if any(k <= 0 for k in self.coeffs):
            raise ValueError("exp needs a series vanishing at zeta = 0")
        f = {0: self.field.one()}
        g = self.coeffs
        for e in range(1, self.order + 1):
            acc = None
            for j, gj in g.items():
                fe = f.get(e - j)
                if fe is not None:
                    t = gj * fe * j
                    acc = t if acc is None else acc + t
            if acc is not None and not _exactly_zero(self.field, acc):
                f[e] = acc / e
        return GradedSeries(self.field, f, self.order)

    def evaluate(self, zeta):
        """Numeric value of the truncated sum at ``zeta``."""
        total = None
        for k, c in self.coeffs.items():
            t = c * zeta**k
            total = t if total is None else total + t
        return self.field.zero() if total is None else total

    def nonzero_terms(self):
        return series_assert_zero(self)


def _exactly_zero(field, c):
    if field.kind == "numeric":
        return c == 0
    return field.is_zero(c)


def series_mul(f, g):
    """Cauchy product truncated at ``min(f.order, g.order)``."""
    if not isinstance(f, GradedSeries) or not isinstance(g, GradedSeries):
        raise TypeError("series_mul expects two GradedSeries")
    if f.field != g.field:
        raise BackendMismatch(f"{f.field!r} vs {g.field!r}")
    order = min(f.order, g.order)
    # exponents may be negative, so truncation must look at the partner's minimum
    gmin = min(g.coeffs, default=0)
    out = {}
    for i, a in f.coeffs.items():
        if i + gmin > order:
            continue
        for j, b in g.coeffs.items():
            k = i + j
            if k > order:
                continue
            t = a * b
            out[k] = out[k] + t if k in out else t
    return GradedSeries(f.field, out, order)


def series_scale_z(f, c):
    """Substitute ``zeta -> c * zeta``: the ``zeta^k`` coefficient gains ``c^k``.

    With ``c = a = q^(1/4)`` this realises ``Z -> qZ``; ``c = 1/a`` gives
    ``Z -> Z/q``.
    """
    out = {}
    for k, v in f.coeffs.items():
        if not isinstance(k, Integral):  # pragma: no cover - keys are always ints
            raise TypeError
        out[k] = v * (c**k) if k else v
    return GradedSeries(f.field, out, f.order)


def series_assert_zero(f):
    """List of ``(exponent, coefficient)`` pairs that fail to vanish.

    Exact backends compare with zero literally; the numeric backend uses the
    field tolerance.
    """
    bad = []
    for k in sorted(f.coeffs):
        c = f.coeffs[k]
        if not f.field.is_zero(c):
            bad.append((k, c))
    return bad
