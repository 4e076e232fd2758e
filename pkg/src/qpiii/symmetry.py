"""The group W = Dih_4 x| W(A1^(1)) on surface coordinates and on tau letters.

Two representations are provided:

* :class:`SurfaceState` ``(Z, q, F, G)`` with the birational maps;
* :class:`TauLetterState` ``(T1, T2, T3, T4, a, zeta)`` with ``a = q^(1/4)``
  and ``zeta = Z^(1/4)`` carried as independent quantities, so every map is
  rational and no branch of a fractional power is ever chosen.

Words of generators compose right to left: ``("pi2inv", "s0")`` is
``pi2^-1 o s0`` and applies ``s0`` first.  Relations are certified by
evaluation at random points (exact rationals or 50-digit complex numbers).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import SingularLocus
from .report import CheckReport, timed

__all__ = [
    "GENERATORS",
    "RELATIONS",
    "SurfaceState",
    "TauLetterState",
    "apply_generator",
    "apply_word",
    "letters_to_surface",
    "random_state",
    "tau13_orbit",
    "verify_induced_action",
    "verify_qpp_consequence",
    "verify_relations",
    "verify_tau13_and_forms",
]


@dataclass(frozen=True)
class SurfaceState:
    Z: object
    q: object
    F: object
    G: object

    def values(self):
        return (self.Z, self.q, self.F, self.G)


@dataclass(frozen=True)
class TauLetterState:
    T1: object
    T2: object
    T3: object
    T4: object
    a: object
    zeta: object

    def values(self):
        return (self.T1, self.T2, self.T3, self.T4, self.a, self.zeta)

    @property
    def q(self):
        return self.a**4

    @property
    def Z(self):
        return self.zeta**4


def _div(x, y):
    if y == 0:
        raise SingularLocus("a required denominator vanishes")
    return x / y


# ---------------------------------------------------------------------------
# surface maps


def _s_pi1(s):
    Z, q, F, G = s.values()
    return SurfaceState(_div(1, Z), _div(1, q), _div(F, q * Z), _div(1, G))


def _s_pi2(s):
    Z, q, F, G = s.values()
    return SurfaceState(_div(1, q * Z), q, _div(G, Z), _div(1, F))


def _s_pi2inv(s):
    Z, q, F, G = s.values()
    return SurfaceState(_div(1, q * Z), q, _div(1, G), _div(F, q * Z))


def _s_s1(s):
    Z, q, F, G = s.values()
    return SurfaceState(_div(1, Z), q, _div(F * (G - 1) ** 2, (G - Z) ** 2), _div(G, Z))


def _s_s0(s):
    Z, q, F, G = s.values()
    return SurfaceState(_div(1, q * q * Z), q, _div(F, q * Z), _div(G * (1 - F) ** 2, (Z * q - F) ** 2))


def _s_T(s):
    Z, q, F, G = s.values()
    return SurfaceState(q * Z, q, _div((F - q * Z) ** 2, (F - 1) ** 2 * G), F)


def _s_Tinv(s):
    Z, q, F, G = s.values()
    return SurfaceState(_div(Z, q), q, G, _div((G - Z) ** 2, F * (G - 1) ** 2))


def _s_pi2sq(s):
    return _s_pi2(_s_pi2(s))


# ---------------------------------------------------------------------------
# tau letter maps


def _t_pi1(t):
    T1, T2, T3, T4, a, z = t.values()
    return TauLetterState(T3, T2, T1, T4, _div(1, a), _div(1, z))


def _t_pi2(t):
    T1, T2, T3, T4, a, z = t.values()
    return TauLetterState(T4, T1, T2, T3, a, _div(1, a * z))


def _t_pi2inv(t):
    T1, T2, T3, T4, a, z = t.values()
    return TauLetterState(T2, T3, T4, T1, a, _div(1, a * z))


def _t_s1(t):
    T1, T2, T3, T4, a, z = t.values()
    z2 = z * z
    return TauLetterState(
        T1, _div(T3**2 + z2 * T1**2, z * T4), T3, _div(T1**2 + z2 * T3**2, z * T2), a, _div(1, z)
    )


def _t_s0(t):
    T1, T2, T3, T4, a, z = t.values()
    w = a * z  # (qZ)^(1/4)
    w2 = w * w
    return TauLetterState(
        _div(T4**2 + w2 * T2**2, w * T3), T2, _div(T2**2 + w2 * T4**2, w * T1), T4, a, _div(1, a * w)
    )


def _t_T(t):
    T1, T2, T3, T4, a, z = t.values()
    w = a * z
    w2 = w * w
    return TauLetterState(T2, _div(T2**2 + w2 * T4**2, w * T1), T4, _div(T4**2 + w2 * T2**2, w * T3), a, w)


def _t_Tinv(t):
    T1, T2, T3, T4, a, z = t.values()
    z2 = z * z
    return TauLetterState(
        _div(T1**2 + z2 * T3**2, z * T2), T1, _div(T3**2 + z2 * T1**2, z * T4), T3, a, _div(z, a)
    )


def _t_pi2sq(t):
    return _t_pi2(_t_pi2(t))


def _identity(x):
    return x


GENERATORS = {
    "surface": {
        "id": _identity,
        "pi1": _s_pi1,
        "pi2": _s_pi2,
        "pi2inv": _s_pi2inv,
        "pi2sq": _s_pi2sq,
        "s0": _s_s0,
        "s1": _s_s1,
        "T": _s_T,
        "Tinv": _s_Tinv,
    },
    "tau_letters": {
        "id": _identity,
        "pi1": _t_pi1,
        "pi2": _t_pi2,
        "pi2inv": _t_pi2inv,
        "pi2sq": _t_pi2sq,
        "s0": _t_s0,
        "s1": _t_s1,
        "T": _t_T,
        "Tinv": _t_Tinv,
    },
}

#: ``(name, left word, right word)``; each side composes right to left.
RELATIONS = (
    ("s0^2 = 1", ("s0", "s0"), ()),
    ("s1^2 = 1", ("s1", "s1"), ()),
    ("pi1^2 = 1", ("pi1", "pi1"), ()),
    ("pi2^4 = 1", ("pi2",) * 4, ()),
    ("(pi1 pi2)^2 = 1", ("pi1", "pi2", "pi1", "pi2"), ()),
    ("pi2 pi2^-1 = 1", ("pi2", "pi2inv"), ()),
    ("s1 = pi2 s0 pi2^-1", ("s1",), ("pi2", "s0", "pi2inv")),
    ("s0 = pi2^2 s0 pi2^-2", ("s0",), ("pi2", "pi2", "s0", "pi2inv", "pi2inv")),
    ("s0 = pi1 s0 pi1^-1", ("s0",), ("pi1", "s0", "pi1")),
    ("s1 = pi1 s1 pi1^-1", ("s1",), ("pi1", "s1", "pi1")),
    ("s1 = pi2^2 s1 pi2^-2", ("s1",), ("pi2", "pi2", "s1", "pi2inv", "pi2inv")),
    ("T = pi2^-1 s0", ("T",), ("pi2inv", "s0")),
    ("T T^-1 = 1", ("T", "Tinv"), ()),
    ("T^-1 T = 1", ("Tinv", "T"), ()),
    ("pi2^2 commutes with T", ("pi2sq", "T"), ("T", "pi2sq")),
)


def _kind(state):
    return "surface" if isinstance(state, SurfaceState) else "tau_letters"


def apply_generator(g, state, table=None):
    """Apply generator ``g`` (``s0, s1, pi1, pi2, pi2inv, pi2sq, T, Tinv, id``)."""
    table = table or GENERATORS[_kind(state)]
    try:
        fn = table[g]
    except KeyError:
        raise ValueError(f"unknown generator {g!r}") from None
    try:
        return fn(state)
    except ZeroDivisionError as exc:
        if isinstance(exc, SingularLocus):
            raise
        raise SingularLocus(str(exc)) from exc


def apply_word(word, state, table=None):
    """Apply ``word`` right to left."""
    for g in reversed(word):
        state = apply_generator(g, state, table)
    return state


# ---------------------------------------------------------------------------
# sampling


def _rational(rng, bound=1000):
    while True:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        if num:
            return Fraction(num, den)


def _complex(rng):
    return mpmath.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))


def random_state(representation, rng, exact=True):
    draw = (lambda: _rational(rng)) if exact else (lambda: _complex(rng))
    if representation == "surface":
        return SurfaceState(draw(), draw(), draw(), draw())
    return TauLetterState(draw(), draw(), draw(), draw(), draw(), draw())


def _states_equal(x, y, exact, tol):
    if exact:
        return x.values() == y.values()
    for u, v in zip(x.values(), y.values()):
        if abs(u - v) > tol * max(1, abs(u), abs(v)):
            return False
    return True


def _max_gap(x, y):
    return max(abs(u - v) / max(1, abs(u), abs(v)) for u, v in zip(x.values(), y.values()))


# ---------------------------------------------------------------------------
# checks


def verify_relations(trials=100, seed=0, representation="surface", exact=True, digits=50, table=None):
    """Check every relation of :data:`RELATIONS` on ``trials`` random states.

    ``table`` replaces the generator actions (used to check that corrupted
    maps are detected).  Singular samples are redrawn and counted.
    """
    rng = random.Random(seed)
    tol = mpmath.mpf(10) ** (-(digits - 10))
    failures = []
    resampled = 0
    worst = mpmath.mpf(0)
    with timed() as clock, mpmath.workdps(digits):
        for _ in range(trials):
            while True:
                state = random_state(representation, rng, exact)
                try:
                    results = [
                        (name, apply_word(lhs, state, table), apply_word(rhs, state, table))
                        for name, lhs, rhs in RELATIONS
                    ]
                    break
                except SingularLocus:
                    resampled += 1
            for name, x, y in results:
                if not exact:
                    worst = max(worst, _max_gap(x, y))
                if not _states_equal(x, y, exact, tol):
                    failures.append(name)
    return CheckReport(
        check_name=f"symmetry-relations-{representation}-{'exact' if exact else 'numeric'}",
        parameters={"trials": trials, "seed": seed, "digits": digits},
        residual_max=len(failures) if exact else worst,
        threshold=1 if exact else tol,
        wall_time_ms=clock.ms,
        details={"resampled": resampled, "failed_relations": sorted(set(failures))},
        verdict=not failures,
    )


def letters_to_surface(t):
    """``F = -(qZ)^(1/2) T2^2/T4^2`` and ``G = -Z^(1/2) T1^2/T3^2`` with ``(Z, q)``."""
    a, z = t.a, t.zeta
    F = -_div(a * a * z * z * t.T2**2, t.T4**2)
    G = -_div(z * z * t.T1**2, t.T3**2)
    return SurfaceState(z**4, a**4, F, G)


def verify_induced_action(trials=100, seed=0, exact=True, digits=50,
                          generators=("id", "pi1", "pi2", "s0", "s1", "T", "Tinv")):
    """Letter action followed by ``(F, G)`` equals ``(F, G)`` followed by the surface action."""
    rng = random.Random(seed)
    tol = mpmath.mpf(10) ** (-(digits - 10))
    failures = []
    resampled = 0
    worst = mpmath.mpf(0)
    with timed() as clock, mpmath.workdps(digits):
        for _ in range(trials):
            for g in generators:
                while True:
                    t = random_state("tau_letters", rng, exact)
                    try:
                        via_letters = letters_to_surface(apply_generator(g, t))
                        via_surface = apply_generator(g, letters_to_surface(t))
                        break
                    except SingularLocus:
                        resampled += 1
                if not exact:
                    worst = max(worst, _max_gap(via_letters, via_surface))
                if not _states_equal(via_letters, via_surface, exact, tol):
                    failures.append(g)
    return CheckReport(
        check_name=f"symmetry-induced-action-{'exact' if exact else 'numeric'}",
        parameters={"trials": trials, "seed": seed, "digits": digits},
        residual_max=len(failures) if exact else worst,
        threshold=1 if exact else tol,
        wall_time_ms=clock.ms,
        details={"resampled": resampled, "failed_generators": sorted(set(failures))},
        verdict=not failures,
    )


# ---------------------------------------------------------------------------
# T-orbits, the two first-order systems


def tau13_orbit(T1m, T1, T3m, T3, a, zeta, steps, constrained=True, rng=None):
    """Letters ``T1_k, T3_k`` at ``Z q^k`` for ``k = -1 .. steps``.

    ``constrained`` propagates by ``zeta_k T1_(k+1) T1_(k-1) = T1_k^2 +
    zeta_k^2 T3_k^2`` (and the same with 1, 3 swapped), ``zeta_k = a^k zeta``.
    Otherwise the new letters are drawn from ``rng`` (negative control).
    Returns dicts ``{k: value}``.
    """
    t1 = {-1: T1m, 0: T1}
    t3 = {-1: T3m, 0: T3}
    for k in range(0, steps):
        zk = a**k * zeta
        if constrained:
            t1[k + 1] = _div(t1[k] ** 2 + zk * zk * t3[k] ** 2, zk * t1[k - 1])
            t3[k + 1] = _div(t3[k] ** 2 + zk * zk * t1[k] ** 2, zk * t3[k - 1])
        else:
            t1[k + 1] = _rational(rng) if isinstance(T1, Fraction) else _complex(rng)
            t3[k + 1] = _rational(rng) if isinstance(T1, Fraction) else _complex(rng)
    return t1, t3


def _xy(t1, t3, a, zeta, k):
    zk = a**k * zeta
    x = _div(zk * t3[k - 1] * t1[k + 1], a * t3[k] * t1[k])
    y = _div(a * t3[k + 1] * t1[k], t3[k] * t1[k + 1])
    return x, y


def _forms_residuals(t1, t3, a, zeta):
    """Both sides of the two first-order systems at the middle of an orbit.

    Needs ``t1, t3`` on ``k = -1 .. 4``; equations are checked at ``k = 2``.
    """
    q2 = a * a  # q^(1/2)
    xs, ys = {}, {}
    for k in range(0, 4):
        xs[k], ys[k] = _xy(t1, t3, a, zeta, k)
    k = 2
    Z = (a**k * zeta) ** 4
    x, y = xs[k], ys[k]
    gs = {j: 1 - xs[j] * ys[j] for j in xs}
    fs = {j: -q2 * _div(gs[j - 1], ys[j - 1]) for j in range(1, 4)}
    f, g = fs[k], gs[k]
    return {
        "GR-1": ((xs[k + 1] * y - 1) * (x * y - 1), Z * y * y),
        "GR-2": ((x * y - 1) * (x * ys[k - 1] - 1), Z),
        "Sakai-1": (f * fs[k + 1], _div(g * (Z - g), g - 1)),
        "Sakai-2": (g * gs[k + 1], fs[k + 1] ** 2),
    }


def verify_tau13_and_forms(trials=100, seed=0, exact=True, digits=50, constrained=True):
    """The printed ``x, y`` solve the GR system and ``f, g`` the Sakai system on T-orbits.

    With ``constrained=False`` the orbit letters are random, so the
    systems are expected to fail; the report then passes iff every sample
    fails (negative control).
    """
    rng = random.Random(seed)
    tol = mpmath.mpf(10) ** (-(digits - 10))
    failed = {}
    resampled = 0
    worst = mpmath.mpf(0)
    with timed() as clock, mpmath.workdps(digits):
        for _ in range(trials):
            while True:
                draw = (lambda: _rational(rng, 30)) if exact else (lambda: _complex(rng))
                vals = [draw() for _ in range(6)]
                try:
                    t1, t3 = tau13_orbit(*vals, steps=4, constrained=constrained, rng=rng)
                    res = _forms_residuals(t1, t3, vals[4], vals[5])
                    break
                except SingularLocus:
                    resampled += 1
            for name, (lhs, rhs) in res.items():
                if exact:
                    bad = lhs != rhs
                else:
                    r = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
                    worst = max(worst, r)
                    bad = r > tol
                if bad:
                    failed[name] = failed.get(name, 0) + 1
    if constrained:
        residual, threshold, direction = (sum(failed.values()) if exact else worst), (1 if exact else tol), "below"
    else:
        # every unconstrained sample must violate both GR equations
        residual = min(failed.get("GR-1", 0), failed.get("GR-2", 0))
        threshold, direction = trials - 1, "above"
    return CheckReport(
        check_name=f"symmetry-tau13-forms-{'exact' if exact else 'numeric'}"
        + ("" if constrained else "-unconstrained"),
        parameters={"trials": trials, "seed": seed, "digits": digits, "constrained": str(constrained)},
        residual_max=residual,
        threshold=threshold,
        direction=direction,
        wall_time_ms=clock.ms,
        details={"resampled": resampled, "failures": failed},
    )


def verify_qpp_consequence(trials=100, seed=0):
    """``G(T s) G(T^-1 s) = ((G - Z)/(G - 1))^2`` exactly on random rational states."""
    rng = random.Random(seed)
    failures = 0
    resampled = 0
    with timed() as clock:
        for _ in range(trials):
            while True:
                s = random_state("surface", rng, True)
                try:
                    up, down = apply_generator("T", s), apply_generator("Tinv", s)
                    rhs = _div(s.G - s.Z, s.G - 1) ** 2
                    break
                except SingularLocus:
                    resampled += 1
            if up.G * down.G != rhs:
                failures += 1
    return CheckReport(
        check_name="symmetry-qpp-consequence",
        parameters={"trials": trials, "seed": seed},
        residual_max=failures,
        threshold=1,
        wall_time_ms=clock.ms,
        details={"resampled": resampled},
    )
