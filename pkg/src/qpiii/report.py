"""Structured results of identity checks."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import mpmath

__all__ = ["CheckReport", "VERSION", "decimal_string", "timed"]

VERSION = "0.1.0"


def decimal_string(x, digits=15):
    """Decimal string of a real number (mpmath, float, int or Fraction)."""
    if x is None:
        return None
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(x).lower()
    try:
        x = mpmath.mpmathify(x)
    except (TypeError, ValueError):
        return str(x)
    if isinstance(x, mpmath.mpc):
        return f"{mpmath.nstr(x.real, digits)}{'+' if x.imag >= 0 else '-'}{mpmath.nstr(abs(x.imag), digits)}j"
    if x == 0:
        return "0"
    return mpmath.nstr(x, digits)


@dataclass
class CheckReport:
    """Result of one check.

    ``direction`` is ``"below"`` for identities (the residual must stay
    under ``threshold``) and ``"above"`` for negative checks.  ``passed`` is
    derived from the two, except for checks that are not residual-driven,
    which may override it through ``verdict``.
    """

    check_name: str
    parameters: dict = field(default_factory=dict)
    order: object = None
    residual_max: object = 0
    threshold: object = 0
    direction: str = "below"
    conjecture: bool = False
    wall_time_ms: float = 0.0
    details: dict = field(default_factory=dict)
    verdict: object = None

    @property
    def passed(self):
        if self.verdict is not None:
            return bool(self.verdict)
        r = mpmath.mpmathify(self.residual_max)
        t = mpmath.mpmathify(self.threshold)
        return bool(r < t) if self.direction == "below" else bool(r > t)

    def to_dict(self, include_time=True):
        out = {
            "check_name": self.check_name,
            "parameters": {k: decimal_string(v) if not isinstance(v, (int, str)) else v
                           for k, v in sorted(self.parameters.items())},
            "order": self.order,
            "residual_max": decimal_string(self.residual_max),
            "threshold": decimal_string(self.threshold),
            "direction": self.direction,
            "pass": self.passed,
            "conjecture": self.conjecture,
            "artifact_version": VERSION,
        }
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in sorted(self.details.items())}
        if include_time:
            out["wall_time_ms"] = round(self.wall_time_ms, 3)
        return out

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return (
            f"{flag} {self.check_name}: residual={decimal_string(self.residual_max, 6)} "
            f"{'<' if self.direction == 'below' else '>'} {decimal_string(self.threshold, 3)}"
        )


def _jsonable(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return decimal_string(v)


class timed:
    """Context manager recording elapsed milliseconds into ``self.ms``."""

    def __enter__(self):
        self._t = time.perf_counter()
        self.ms = 0.0
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self._t) * 1000.0
