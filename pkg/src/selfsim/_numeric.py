"""Private numeric context and coercion helpers.

All construction-time arithmetic runs on a private mpmath context so that the
global ``mpmath.mp`` precision is never touched.  Values that are exact
(``int``/``Fraction``) stay exact until something irrational forces a lift.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from numbers import Rational

import mpmath

WORKING_DPS = 60

ctx = mpmath.MPContext()
ctx.dps = WORKING_DPS


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def exact(x) -> Fraction | None:
    """Return ``x`` as a Fraction when that is lossless, else None."""
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, (str, Decimal)):
        try:
            return Fraction(str(x).strip())
        except ValueError:
            return None
    return None


def mpf(x):
    """Coerce to a working-precision real (or complex) number."""
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, (str, Decimal)):
        return ctx.mpf(str(x))
    if isinstance(x, (complex, mpmath.mpc)) or type(x).__name__ == "mpc":
        return ctx.mpc(x)
    return ctx.mpf(x)


def number(x):
    """Parse user input: decimal strings and rationals stay exact."""
    ex = exact(x)
    if ex is not None:
        return ex
    return mpf(x)


def lift_all(values):
    """Keep a sequence exact when every entry is rational; otherwise lift all."""
    values = list(values)
    if all(is_exact(v) for v in values):
        return [Fraction(v) for v in values]
    return [mpf(v) for v in values]


def to_float(x) -> float:
    if isinstance(x, Fraction):
        return float(x)
    return float(ctx.re(x)) if type(x).__name__ == "mpc" else float(x)


def is_complex(x) -> bool:
    return type(x).__name__ == "mpc" or isinstance(x, complex)


def real_if_close(x, rel: float | None = None):
    """Drop a negligible imaginary part (|Im| < 1e-20 (1 + |Re|) by default)."""
    if not is_complex(x):
        return x
    x = ctx.mpc(x)
    tol = ctx.mpf(10) ** -20 if rel is None else ctx.mpf(rel)
    if abs(x.imag) < tol * (1 + abs(x.real)):
        return x.real
    return x
