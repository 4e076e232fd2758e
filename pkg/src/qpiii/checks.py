"""Report-producing checks shared by the command line and the test suite.

Every function returns a :class:`~qpiii.report.CheckReport` (or a list of
them).  Random sample points come from a seeded :class:`random.Random`, so
reports are reproducible for fixed ``(seed, digits)``.
"""

from __future__ import annotations

import random
from fractions import Fraction

import mpmath

from . import bilinear, limits, qspecial, symmetry
from .partitions import conformal_block_exact, conformal_block_numeric
from .report import CheckReport, timed
from .tau import TauParams, c_function, fg_from_tau, logz, tau_eval

__all__ = [
    "CHECKS",
    "block_report",
    "check_algebraic",
    "check_appendix_b",
    "check_bilincont",
    "check_bilinear",
    "check_fiber_base",
    "check_limits",
    "check_qtoda",
    "check_special_functions",
    "check_symmetry",
    "check_tau_consistency",
    "random_point",
]


def _mp(x):
    return mpmath.mpmathify(x)


def _polar(rng, rmin, rmax):
    r = mpmath.mpf(rng.uniform(rmin, rmax))
    phi = mpmath.mpf(rng.uniform(-2.5, 2.5))
    return r * mpmath.expj(phi)


def random_point(rng, kind):
    """Admissible random sample.

    ``"uq"``: ``(u, q)`` with ``0.3 < |q| < 0.6`` and ``u`` away from ``q^Z``;
    ``"b"``: ``(u, q1, q2)`` with ``|q2| < 1 < |q1|``;
    ``"tau"``: ``(u, q, s, Z)`` with small ``|Z|``.
    """
    if kind == "uq":
        return _polar(rng, 0.4, 2.5), _polar(rng, 0.3, 0.6)
    if kind == "b":
        return _polar(rng, 0.4, 2.5), _polar(rng, 1.4, 2.5), _polar(rng, 0.3, 0.6)
    if kind == "tau":
        return _polar(rng, 0.4, 2.5), _polar(rng, 0.35, 0.6), _polar(rng, 0.5, 1.5), _polar(rng, 0.005, 0.02)
    raise ValueError(f"unknown sample kind {kind!r}")


def _max_abs(series):
    return max((abs(c) for _, c in series.items()), default=mpmath.mpf(0))


def _exact_report(name, series, params, order, clock, conjecture=False):
    nonzero = series.nonzero_terms()
    return CheckReport(
        check_name=name,
        parameters=params,
        order=order,
        residual_max=len(nonzero),
        threshold=1,
        conjecture=conjecture,
        wall_time_ms=clock.ms,
        details={"nonzero_coefficients": [k for k, _ in nonzero] if nonzero else []},
    )


# ---------------------------------------------------------------------------
# blocks


def block_report(order=3, mode="exact", u=None, q=None, digits=30):
    """Block coefficients as a dict ``{k: coefficient of Z^k}`` (strings)."""
    if mode == "exact":
        F = conformal_block_exact(order)
        return {str(k // 4): str(c) for k, c in F.items()}
    with mpmath.workdps(digits + 10):
        q = _mp(q if q is not None else "0.5")
        u = _mp(u if u is not None else "0.3")
        F = conformal_block_numeric(u, 1 / q, q, order, digits=digits)
        return {str(k // 4): mpmath.nstr(c, digits) for k, c in F.items()}


# ---------------------------------------------------------------------------
# block relations


def check_bilinear(order=4, mode="exact", points=None, trials=3, seed=0, digits=50, threshold=None):
    """Main block relation; numeric mode runs ``trials`` random ``(u, q)`` unless ``points``."""
    if mode == "exact":
        with timed() as clock:
            res = bilinear.bilinear_residual_main(order=order, mode="exact")
        return _exact_report("bilinear-exact", res, {"order": order}, order, clock, conjecture=True)
    rng = random.Random(seed)
    if points is None:
        points = [random_point(rng, "uq") for _ in range(trials)]
    threshold = mpmath.mpf(10) ** -30 if threshold is None else _mp(threshold)
    worst, per = mpmath.mpf(0), []
    with timed() as clock:
        for u, q in points:
            r = _max_abs(bilinear.bilinear_residual_main(u, q, order=order, mode="numeric", digits=digits))
            per.append(r)
            worst = max(worst, r)
    return CheckReport(
        check_name="bilinear-numeric",
        parameters={"order": order, "digits": digits, "seed": seed, "trials": len(points)},
        order=order,
        residual_max=worst,
        threshold=threshold,
        conjecture=True,
        wall_time_ms=clock.ms,
        details={"points": [list(p) for p in points], "residuals": per},
    )


def check_algebraic(order=4, sign=-1, mode="exact", q=None, digits=50):
    """Algebraic-point identity for one sign."""
    with timed() as clock:
        if mode == "exact":
            res = bilinear.algebraic_identity_residual(order=order, sign=sign, mode="exact")
            return _exact_report(
                f"algebraic-exact-sign{sign:+d}", res, {"order": order, "sign": sign}, order, clock, conjecture=True
            )
        q = _mp(q if q is not None else "0.4+0.1j")
        res = bilinear.algebraic_identity_residual(order=order, sign=sign, mode="numeric", q=q, digits=digits)
    return CheckReport(
        check_name=f"algebraic-numeric-sign{sign:+d}",
        parameters={"order": order, "sign": sign, "q": q, "digits": digits},
        order=order,
        residual_max=_max_abs(res),
        threshold=mpmath.mpf(10) ** (-(digits - 15)),
        conjecture=True,
        wall_time_ms=clock.ms,
    )


def check_appendix_b(order=6, points=None, trials=3, seed=0, digits=50, threshold=None, amended=False):
    """Generic ``(q1, q2)`` relations; ``order`` counts powers of ``Z`` (``2*order`` half steps).

    ``amended=False`` checks the two relations as stated; ``amended=True``
    checks the staircase-corrected pair that holds numerically.
    """
    rng = random.Random(seed)
    if points is None:
        points = [random_point(rng, "b") for _ in range(trials)]
    threshold = mpmath.mpf(10) ** -30 if threshold is None else _mp(threshold)
    fn = bilinear.appendix_b_amended_residuals if amended else bilinear.appendix_b_residuals
    worst = [mpmath.mpf(0), mpmath.mpf(0)]
    with timed() as clock:
        for u, q1, q2 in points:
            r1, r2 = fn(u, q1, q2, order=2 * order, digits=digits)
            worst = [max(worst[0], _max_abs(r1)), max(worst[1], _max_abs(r2))]
    return CheckReport(
        check_name="appendix-b-amended" if amended else "appendix-b",
        parameters={"order": order, "digits": digits, "seed": seed, "trials": len(points)},
        order=order,
        residual_max=max(worst),
        threshold=threshold,
        conjecture=True,
        wall_time_ms=clock.ms,
        details={"relation_1": worst[0], "relation_2": worst[1], "points": [list(p) for p in points]},
    )


def check_fiber_base(order=8, points=None, trials=3, seed=0, digits=50, threshold="1e-6"):
    """Negative check: the naive ``Z -> 1/Z`` relation fails by more than ``threshold``."""
    rng = random.Random(seed)
    if points is None:
        points = []
        for _ in range(trials):
            u, q = random_point(rng, "uq")
            points.append((u, q, _polar(rng, 0.1, 0.5)))
    gaps = []
    with timed() as clock:
        for u, q, Z in points:
            gaps.append(bilinear.fiber_base_negative_check(u, q, Z, order=order, digits=digits)[2])
    return CheckReport(
        check_name="fiber-base",
        parameters={"order": order, "digits": digits, "seed": seed, "trials": len(points)},
        order=order,
        residual_max=min(gaps),
        threshold=_mp(threshold),
        direction="above",
        wall_time_ms=clock.ms,
        details={"gaps": gaps, "points": [list(p) for p in points]},
    )


# ---------------------------------------------------------------------------
# tau function


def _tau_params(u, q, s, **kw):
    return TauParams.from_values(u, q, s=s, **kw)


def check_tau_consistency(trials_forms=10, trials_shifts=100, seed=0, digits=50, order=4):
    """Series forms agree; ``u``-shift, ``u``-inversion and the ``C`` equations hold.

    Returns a list of reports: forms, shifts (both ``C`` choices) and ``C`` equations.
    """
    rng = random.Random(seed)
    tol = mpmath.mpf(10) ** -35
    reports = []
    with timed() as clock, mpmath.workdps(digits + 10):
        worst = mpmath.mpf(0)
        for i in range(trials_forms):
            u, q, s, Z = random_point(rng, "tau")
            p = _tau_params(u, q, s, c_choice="C1" if i % 2 else "Cc", order=order, digits=digits)
            vals = [tau_eval(p, Z, form=f) for f in ("T", "Tr", "Trational")]
            scale = max(abs(v) for v in vals)
            for a in range(3):
                for b in range(a + 1, 3):
                    worst = max(worst, abs(vals[a] - vals[b]) / scale)
    reports.append(CheckReport("tau-forms", {"trials": trials_forms, "seed": seed, "digits": digits}, order,
                               worst, tol, wall_time_ms=clock.ms))
    for choice in ("C1", "Cc"):
        with timed() as clock, mpmath.workdps(digits + 10):
            ws, wi, wc = mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(0)
            for _ in range(trials_shifts):
                u, q, s, Z = random_point(rng, "tau")
                p = _tau_params(u, q, s, c_choice=choice, order=order, digits=digits)
                t0 = tau_eval(p, Z)
                t2 = tau_eval(p.shifted(2), Z)
                ti = tau_eval(p.inverted(), Z)
                ws = max(ws, abs(t2 - t0 / s) / abs(t0 / s))
                wi = max(wi, abs(ti - t0) / abs(t0))
                lu, lq, lZ = p.lu, p.lq, mpmath.log(Z)

                def C(du, dz):
                    return c_function(choice, lu + du * lq, lq, lZ + dz * lq)

                c2 = C(0, 0) ** 2
                r01 = C(1, 0) * C(-1, 0) / c2 / -mpmath.sqrt(Z)
                r11 = C(1, 1) * C(-1, -1) / c2 / (-u * mpmath.root(Z, 4))
                r10 = C(0, 1) * C(0, -1) / c2 * mpmath.root(Z, 4)
                wc = max(wc, *(abs(r - 1) for r in (r01, r11, r10)))
        params = {"trials": trials_shifts, "seed": seed, "digits": digits, "c_choice": choice}
        reports.append(CheckReport(f"tau-ushift-{choice}", params, order, ws, tol, wall_time_ms=clock.ms))
        reports.append(CheckReport(f"tau-uinv-{choice}", params, order, wi, tol, wall_time_ms=clock.ms))
        reports.append(CheckReport(f"c-equations-{choice}", params, None, wc, tol, wall_time_ms=clock.ms))
    return reports


def check_qtoda(trials=10, seed=0, digits=50, order=14, threshold="1e-25", points=None):
    """Bilinear tau relation and the q-Painleve equation for ``G`` from tau (conjectural)."""
    rng = random.Random(seed)
    if points is None:
        points = [random_point(rng, "tau") for _ in range(trials)]
    rt, rp = [], []
    with timed() as clock, mpmath.workdps(digits + 10):
        for u, q, s, Z in points:
            p = _tau_params(u, q, s, order=order, digits=digits)
            rt.append(bilinear.qtoda_residual(p, Z))
            Gu, G = fg_from_tau(p, Z)  # F(Z) = G(qZ)
            # continue log Z rather than re-taking the principal log of Z/q
            Gd = fg_from_tau(p, logz(mpmath.log(Z) - p.lq))[1]
            lhs, rhs = Gu * Gd * (G - 1) ** 2, (G - Z) ** 2
            rp.append(abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    base = {"trials": len(points), "seed": seed, "digits": digits}
    return [
        CheckReport("qtoda", base, order, max(rt), _mp(threshold), conjecture=True, wall_time_ms=clock.ms,
                    details={"residuals": rt}),
        CheckReport("qpainleve-from-tau", base, order, max(rp), _mp(threshold), conjecture=True,
                    wall_time_ms=clock.ms, details={"residuals": rp}),
    ]


# ---------------------------------------------------------------------------
# special functions


def check_special_functions(trials=100, seed=0, digits=50):
    """Shift, inversion, theta, elliptic Gamma, q-Gamma / q-Barnes identities and the ``q -> 1`` approach."""
    rng = random.Random(seed)
    tol = mpmath.mpf(10) ** -40
    res = {k: mpmath.mpf(0) for k in ("shift", "qtrans", "tshift", "Gshift", "G2p", "GN", "triple")}
    glim_bad = 0
    with timed() as clock, mpmath.workdps(digits):
        for _ in range(trials):
            Z = _polar(rng, 0.1, 0.9)
            t1, t2 = _polar(rng, 0.2, 0.7), _polar(rng, 0.2, 0.7)
            q, t = _polar(rng, 0.2, 0.7), _polar(rng, 0.2, 0.7)

            def rel(a, b):
                return abs(a - b) / max(abs(a), abs(b))

            res["shift"] = max(
                res["shift"],
                rel(qspecial.qpoch(Z, [t1, t2]) / qspecial.qpoch(Z * t1, [t1, t2]), qspecial.qpoch(Z, [t2])),
                rel(qspecial.qpoch(Z, [t1]) / qspecial.qpoch(Z * t1, [t1]), 1 - Z),
            )
            res["qtrans"] = max(
                res["qtrans"], rel(qspecial.qpoch(Z, [1 / t1, t2]), 1 / qspecial.qpoch(Z * t1, [t1, t2]))
            )
            th = qspecial.theta(Z, q)
            res["tshift"] = max(
                res["tshift"], rel(qspecial.theta(q * Z, q), -th / Z), rel(qspecial.theta(q * Z, q), qspecial.theta(1 / Z, q))
            )
            res["triple"] = max(res["triple"], rel(qspecial.theta_series(Z, q), th))
            g0 = qspecial.elliptic_gamma(Z, t, q)
            res["Gshift"] = max(
                res["Gshift"],
                rel(qspecial.elliptic_gamma(q * Z, t, q), qspecial.theta(Z, t) * g0),
                rel(qspecial.elliptic_gamma(t * Z, t, q), qspecial.theta(Z, q) * g0),
            )
            gu = qspecial.elliptic_gamma(Z, q, q)
            res["G2p"] = max(
                res["G2p"],
                rel(qspecial.elliptic_gamma(Z * q, q, q) * qspecial.elliptic_gamma(Z / q, q, q) / gu**2, -q / Z),
            )
            x = mpmath.mpc(rng.uniform(0.2, 2.5), rng.uniform(-1, 1))
            qr = mpmath.mpf(rng.uniform(0.2, 0.8))
            res["GN"] = max(
                res["GN"],
                rel(qspecial.q_gamma(x + 1, qr), (1 - qr**x) / (1 - qr) * qspecial.q_gamma(x, qr)),
                rel(qspecial.q_barnes_g(x + 1, qr), qspecial.q_gamma(x, qr) * qspecial.q_barnes_g(x, qr)),
            )
        # q -> 1^- approach along q = 1 - 10^-k; G uses a shorter ladder (double base is slower)
        xs = [mpmath.mpf(x) for x in ("0.5", "1.5", "2.5")]
        xs += [mpmath.mpf(rng.uniform(0.3, 2.5)) for _ in range(max(0, trials // 10 - 3))]
        ladder = [1 - mpmath.mpf(10) ** -k for k in (1, 2, 3, 4)]
        for x in xs:
            eg = [abs(qspecial.q_gamma(x, qq) - mpmath.gamma(x)) for qq in ladder]
            eG = [abs(qspecial.q_barnes_g(x, qq) - mpmath.barnesg(x)) for qq in ladder[:3]]
            for e in (eg, eG):
                glim_bad += sum(1 for a, b in zip(e, e[1:]) if not b < a)
    reports = [
        CheckReport(f"special-{k}", {"trials": trials, "seed": seed, "digits": digits}, None, v, tol,
                    wall_time_ms=clock.ms)
        for k, v in sorted(res.items())
    ]
    reports.append(CheckReport("special-Glim", {"trials": len(xs), "seed": seed}, None, glim_bad, 1,
                               wall_time_ms=clock.ms))
    return reports


# ---------------------------------------------------------------------------
# symmetry


def check_symmetry(trials=100, seed=0, digits=50):
    """Group relations in both representations, induced action, tau forms and the q-Painleve consequence."""
    out = []
    for rep in ("surface", "tau_letters"):
        for exact in (True, False):
            out.append(symmetry.verify_relations(trials, seed, rep, exact, digits))
    for exact in (True, False):
        out.append(symmetry.verify_induced_action(trials, seed, exact, digits))
        out.append(symmetry.verify_tau13_and_forms(trials, seed, exact, digits))
    out.append(symmetry.verify_tau13_and_forms(trials, seed, True, digits, constrained=False))
    out.append(symmetry.verify_qpp_consequence(trials, seed))
    return out


# ---------------------------------------------------------------------------
# continuous limits


def check_bilincont(sigma=Fraction(1, 7), order=3):
    """Continuous block relation with exact rational ``sigma``."""
    with timed() as clock:
        res = limits.bilincont_residual(Fraction(sigma), order)
    bad = [k for k, v in res.items() if v != 0]
    return CheckReport(
        "bilincont",
        {"sigma": str(Fraction(sigma)), "order": order},
        order,
        len(bad),
        1,
        wall_time_ms=clock.ms,
        details={"nonzero_exponents": [str(k) for k in bad]},
    )


def check_limits(sigma="0.13+0.05j", s="0.7", z="0.3", digits=40, order=10):
    """The three scaling checks plus the algebraic-point closed form."""
    sigma, s, z = _mp(complex(sigma) if isinstance(sigma, str) else sigma), _mp(s), _mp(z)
    out = [
        limits.limit_tau(sigma=sigma, s=s, z1=2 * z, z2=z, order=order, digits=digits),
        limits.limit_toda(sigma=sigma, s=s, z=z, order=order, digits=digits),
        limits.limit_qpainleve(z=z, digits=digits),
    ]
    with timed() as clock:
        st = limits.stattau_check(hbar=-0.01, z1=2 * z, z2=z, order=order, digits=digits)
    out.append(CheckReport("limit-stattau", {"hbar": "-0.01", "z": z}, order, max(st.values()),
                           mpmath.mpf("1e-3"), wall_time_ms=clock.ms, details={"s=+1": st[1], "s=-1": st[-1]}))
    return out


CHECKS = {
    "bilinear": check_bilinear,
    "algebraic": check_algebraic,
    "appendix-b": check_appendix_b,
    "fiber-base": check_fiber_base,
    "qtoda": check_qtoda,
    "symmetry": check_symmetry,
    "limits": check_limits,
    "tau": check_tau_consistency,
    "special": check_special_functions,
    "bilincont": check_bilincont,
}
