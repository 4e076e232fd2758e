"""Command line: ``qpiii <subcommand> [flags]``.

Reports go to stdout as JSON (default) or CSV.  Exit status is 0 when every
requested check passes, 1 when any fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from . import checks
from .errors import QPIIIError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUBCOMMANDS = ("block", "bilinear", "qtoda", "algebraic", "appendix-b", "fiber-base", "symmetry", "limits", "suite")

CSV_FIELDS = ("check_name", "pass", "residual_max", "threshold", "direction", "order", "conjecture", "wall_time_ms")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _number(text):
    """Parse ``0.5``, ``1e-3``, ``0.3+0.1j`` or ``1/7`` into an mpmath number."""
    text = text.strip().replace(" ", "")
    try:
        if "/" in text and "j" not in text:
            f = Fraction(text)
            return mpmath.mpf(f.numerator) / f.denominator
        if "j" in text:
            return mpmath.mpc(complex(text))
        return mpmath.mpf(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def read_config(path):
    """``key = value`` lines; ``#`` starts a comment; keys use flag names without dashes."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def build_parser():
    p = _Parser(prog="qpiii", description="Identity checks for q-Painleve III(D8) tau functions.")
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--order", type=int)
    p.add_argument("--mode", choices=("exact", "numeric"))
    p.add_argument("--digits", type=int)
    p.add_argument("--u", type=_number)
    p.add_argument("--q", type=_number)
    p.add_argument("--q1", type=_number)
    p.add_argument("--q2", type=_number)
    p.add_argument("--s", type=_number)
    p.add_argument("--sigma", type=str)
    p.add_argument("--z", type=_number)
    p.add_argument("--zz", type=_number, help="capital Z")
    p.add_argument("--sign", type=int, choices=(-1, 1))
    p.add_argument("--n-max", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", choices=("json", "csv"))
    p.add_argument("--config")
    p.add_argument("--amended", action="store_true", help="appendix-b: check the staircase-corrected relations")
    p.add_argument("--quick", action="store_true", help="suite: reduced orders and trial counts")
    p.add_argument("--no-time", action="store_true", help="omit wall times (byte-identical reruns)")
    return p


DEFAULTS = {"digits": 50, "seed": 0, "out": "json", "mode": "exact"}


def _merge_config(args, parser):
    cfg = read_config(args.config) if args.config else {}
    known = {a.dest: a for a in parser._actions}
    for key, raw in cfg.items():
        if key not in known or key in ("command", "config", "help"):
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key) not in (None, False):
            continue  # flags override the file
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                value = action.type(raw)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"config {key}: {exc}") from exc
        else:
            value = raw
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"config {key}: {value!r} not in {list(action.choices)}")
        setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    return args


def _given(*values):
    return all(v is not None for v in values)


def _sigma(text):
    if text is None:
        return None
    try:
        if "j" in text:
            return mpmath.mpc(complex(text.replace(" ", "")))
        return Fraction(text)
    except ValueError as exc:
        raise UsageError(f"bad --sigma {text!r}") from exc


def run_command(args):
    """Reports (list of CheckReport) for a parsed command; ``block`` returns a dict."""
    c, d, seed = args.command, args.digits, args.seed
    trials = args.trials
    if c == "block":
        return checks.block_report(args.order if args.order is not None else 3, args.mode, args.u, args.q, d)
    if c == "bilinear":
        order = 4 if args.order is None else args.order
        if args.mode == "exact":
            return [checks.check_bilinear(order, "exact")]
        pts = [(args.u, args.q)] if _given(args.u, args.q) else None
        return [checks.check_bilinear(order, "numeric", pts, trials or 3, seed, d)]
    if c == "algebraic":
        order = 4 if args.order is None else args.order
        signs = [args.sign] if args.sign else [-1, 1]
        return [checks.check_algebraic(order, sg, args.mode, args.q, d) for sg in signs]
    if c == "appendix-b":
        order = 3 if args.order is None else args.order
        pts = [(args.u, args.q1, args.q2)] if _given(args.u, args.q1, args.q2) else None
        return [checks.check_appendix_b(order, pts, trials or 3, seed, d, amended=args.amended)]
    if c == "fiber-base":
        order = 8 if args.order is None else args.order
        pts = [(args.u, args.q, args.zz)] if _given(args.u, args.q, args.zz) else None
        return [checks.check_fiber_base(order, pts, trials or 3, seed, d)]
    if c == "qtoda":
        order = 14 if args.order is None else args.order
        pts = [(args.u, args.q, args.s if args.s is not None else 1, args.zz)] if _given(args.u, args.q, args.zz) else None
        return checks.check_qtoda(trials or 10, seed, d, order, points=pts)
    if c == "symmetry":
        return checks.check_symmetry(trials or 100, seed, d)
    if c == "limits":
        sigma = _sigma(args.sigma)
        kw = {"digits": min(d, 40)}
        if sigma is not None:
            kw["sigma"] = sigma if not isinstance(sigma, Fraction) else mpmath.mpf(sigma.numerator) / sigma.denominator
        if args.s is not None:
            kw["s"] = args.s
        if args.z is not None:
            kw["z"] = args.z
        out = checks.check_limits(**kw)
        out.append(checks.check_bilincont(sigma if isinstance(sigma, Fraction) else Fraction(1, 7), 3))
        return out
    if c == "suite":
        return run_suite(args)
    raise UsageError(f"unknown command {c!r}")


def run_suite(args):
    """Every check at desk scale (``--quick`` shrinks orders and trial counts)."""
    quick = args.quick
    d, seed = args.digits, args.seed
    n = 10 if quick else 100
    out = [
        checks.check_bilinear(2 if quick else 4, "exact"),
        checks.check_bilinear(6 if quick else 12, "numeric", None, 1 if quick else 3, seed, d),
        checks.check_algebraic(2 if quick else 4, -1, "exact"),
        checks.check_algebraic(2 if quick else 4, 1, "exact"),
        checks.check_appendix_b(3, None, 1 if quick else 3, seed, d),
        checks.check_fiber_base(8, None, 3, seed, d),
        *checks.check_tau_consistency(2 if quick else 10, n, seed, d),
        *checks.check_qtoda(2 if quick else 10, seed, d, 14),
        *checks.check_special_functions(n, seed, d),
        *checks.check_symmetry(n, seed, d),
        checks.check_bilincont(Fraction(1, 7), 3),
    ]
    if not quick:
        out.extend(checks.check_limits(digits=min(d, 40)))
    return out


def render(reports, fmt, include_time):
    if isinstance(reports, dict):
        return json.dumps(reports, indent=2, sort_keys=True)
    dicts = sorted((r.to_dict(include_time) for r in reports), key=lambda x: x["check_name"])
    if fmt == "csv":
        buf = io.StringIO()
        fields = [f for f in CSV_FIELDS if include_time or f != "wall_time_ms"]
        w = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in dicts:
            w.writerow(row)
        return buf.getvalue().rstrip("\n")
    return json.dumps({"reports": dicts, "pass": all(x["pass"] for x in dicts)}, indent=2, sort_keys=True)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(args, parser)
        if args.digits < 15:
            raise UsageError("--digits must be at least 15")
        with mpmath.workdps(args.digits):
            reports = run_command(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QPIIIError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(render(reports, args.out, not args.no_time))
    if isinstance(reports, dict):
        return EXIT_OK
    for r in reports:
        print(r.line(), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
