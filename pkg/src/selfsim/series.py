"""Truncated power-series algebra and the series-level derivations.

A series is stored against the substituted variable ``u = g**q`` with integer
exponents; ``q`` (``power_step``) is metadata.  Coefficient lists stay exact
(``Fraction``) while every input is rational and are lifted to the private
working-precision context otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._numeric import ctx, exact, is_exact, lift_all, mpf, number
from .errors import BetaDegenerate

__all__ = [
    "PowerPrefactor",
    "AsymptoticSeries",
    "MomentVector",
    "TransformedSeries",
    "series_mul",
    "series_log",
    "series_exp",
    "series_pow",
    "binomial_series",
    "compute_moments",
    "beta_series",
    "transform_series",
    "expand_approximant",
]


# --------------------------------------------------------------------------
# truncated algebra on plain coefficient lists
# --------------------------------------------------------------------------


def _zero_like(values):
    return Fraction(0) if all(is_exact(v) for v in values) else ctx.mpf(0)


def series_mul(a: Sequence, b: Sequence, order: int) -> list:
    """Cauchy product truncated at ``order``."""
    a, b = list(a), list(b)
    if not all(is_exact(v) for v in a + b):
        a, b = [mpf(v) for v in a], [mpf(v) for v in b]
    zero = _zero_like(a + b)
    out = []
    for n in range(order + 1):
        s = zero
        for i in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1):
            s += a[i] * b[n - i]
        out.append(s)
    return out


def _unit_check(a):
    if not a or a[0] != 1:
        raise ValueError("series must start with a unit constant term")


def series_log(a: Sequence, order: int) -> list:
    """Coefficients of ln(a) for a series with a[0] = 1; entry 0 is zero."""
    a = lift_all(a)
    _unit_check(a)
    zero = _zero_like(a)
    a = a + [zero] * max(0, order + 1 - len(a))
    log = [zero] * (order + 1)
    # n a_n = sum_{j=1..n} j L_j a_{n-j}
    for n in range(1, order + 1):
        s = n * a[n]
        for j in range(1, n):
            s -= j * log[j] * a[n - j]
        log[n] = s / n
    return log


def series_exp(c: Sequence, order: int) -> list:
    """exp of a series with zero constant term."""
    c = lift_all(c)
    zero = _zero_like(c)
    c = c + [zero] * max(0, order + 1 - len(c))
    if c[0] != 0:
        raise ValueError("exp expects a zero constant term")
    out = [zero + 1] + [zero] * order
    for n in range(1, order + 1):
        s = zero
        for j in range(1, n + 1):
            s += j * c[j] * out[n - j]
        out[n] = s / n
    return out


def series_pow(a: Sequence, p, order: int) -> list:
    """a**p truncated at ``order`` for a[0] = 1 and any real exponent p.

    Uses the J.C.P. Miller recurrence, which stays exact for rational input.
    """
    ex = exact(p)
    a = lift_all(a)
    if ex is not None and all(is_exact(v) for v in a):
        p = ex
    else:
        a = [mpf(v) for v in a]
        p = mpf(p)
    _unit_check(a)
    zero = _zero_like(a) if is_exact(p) else ctx.mpf(0)
    a = a + [zero] * max(0, order + 1 - len(a))
    out = [zero + 1] + [zero] * order
    for n in range(1, order + 1):
        s = zero
        for j in range(1, n + 1):
            if a[j]:
                s += (p * j - (n - j)) * a[j] * out[n - j]
        out[n] = s / n
    return out


def binomial_series(node, exponent, order: int) -> list:
    """Coefficients of (1 + node*u)**exponent (node may be complex)."""
    n_ex, e_ex = exact(node), exact(exponent)
    if n_ex is not None and e_ex is not None:
        out = [Fraction(1)]
        for j in range(1, order + 1):
            out.append(out[-1] * (e_ex - (j - 1)) / j * n_ex)
        return out
    node, e = _any_mp(node), _any_mp(exponent)
    out = [ctx.mpf(1)]
    for j in range(1, order + 1):
        out.append(out[-1] * (e - (j - 1)) / j * node)
    return out


def _is_mp(x) -> bool:
    return type(x).__module__.startswith("mpmath")


def _any_mp(x):
    if isinstance(x, complex) or type(x).__name__ == "mpc":
        return ctx.mpc(x)
    return mpf(x)


# --------------------------------------------------------------------------
# domain types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerPrefactor:
    """Leading form ``amplitude * g**exponent``."""

    amplitude: object
    exponent: Fraction = Fraction(0)

    def __post_init__(self):
        amp = number(self.amplitude) if not _is_mp(self.amplitude) else mpf(self.amplitude)
        if amp == 0:
            raise ValueError("prefactor amplitude must be nonzero")
        ex = exact(self.exponent)
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "exponent", ex if ex is not None else mpf(self.exponent))

    def __call__(self, g):
        return mpf(self.amplitude) * ctx.power(mpf(g), mpf(self.exponent))


@dataclass(frozen=True)
class AsymptoticSeries:
    """f(g) ~ prefactor(g) * sum_n coefficients[n] * u**n with u = g**power_step."""

    prefactor: PowerPrefactor
    coefficients: tuple
    power_step: Fraction = Fraction(1)

    def __post_init__(self):
        coeffs = tuple(lift_all(number(c) if not _is_mp(c) else c for c in self.coefficients))
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        if coeffs[0] != 1:
            raise ValueError("coefficients must be normalized (a0 = 1); use from_raw")
        q = exact(self.power_step)
        if q is None or q <= 0:
            raise ValueError("power_step must be a positive rational")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "power_step", q)

    @classmethod
    def from_raw(cls, amplitude, exponent, coefficients, power_step=1) -> "AsymptoticSeries":
        """Build from an unnormalized coefficient list, folding a0 into the prefactor."""
        coeffs = lift_all(number(c) if not _is_mp(c) else c for c in coefficients)
        a0 = coeffs[0]
        if a0 == 0:
            raise ValueError("leading coefficient a0 must be nonzero")
        amp = number(amplitude) if not _is_mp(amplitude) else mpf(amplitude)
        if is_exact(amp) != is_exact(a0):
            amp, a0 = mpf(amp), mpf(a0)
        return cls(
            PowerPrefactor(amp * a0, exponent),
            tuple(c / a0 for c in coeffs),
            power_step,
        )

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coefficients)

    def truncate(self, order: int) -> "AsymptoticSeries":
        if order > self.order:
            raise ValueError(f"series known only to order {self.order}")
        return AsymptoticSeries(self.prefactor, self.coefficients[: order + 1], self.power_step)

    def extend(self, coefficient) -> "AsymptoticSeries":
        """Return a copy with one more (normalized) coefficient appended."""
        return AsymptoticSeries(
            self.prefactor, self.coefficients + (coefficient,), self.power_step
        )

    def __call__(self, g):
        """Partial sum at g (working precision)."""
        u = ctx.power(mpf(g), mpf(self.power_step))
        return self.prefactor(g) * ctx.polyval([mpf(c) for c in reversed(self.coefficients)], u)


@dataclass(frozen=True)
class MomentVector:
    """Weighted power sums B_n = sum_i n_i A_i**n for n = 1..k."""

    values: tuple
    moment_zero: object = None

    def __len__(self):
        return len(self.values)

    def as_dict(self) -> dict:
        d = {m + 1: v for m, v in enumerate(self.values)}
        if self.moment_zero is not None:
            d[0] = self.moment_zero
        return d


@dataclass(frozen=True)
class TransformedSeries:
    omega: object
    base: AsymptoticSeries
    # coefficients of the source series, kept for diagnostics
    source: AsymptoticSeries = field(default=None, compare=False, repr=False)


# --------------------------------------------------------------------------
# derivations
# --------------------------------------------------------------------------


def compute_moments(series: AsymptoticSeries) -> MomentVector:
    """Moments B_n = (-1)**(n-1) * n * L_n with L_n the log coefficients."""
    if series.order < 1:
        raise ValueError("moments need a series of order >= 1")
    log = series_log(series.coefficients, series.order)
    return MomentVector(
        tuple((-1) ** (n - 1) * n * log[n] for n in range(1, series.order + 1))
    )


def beta_series(series: AsymptoticSeries) -> AsymptoticSeries:
    """Expansion of the log-derivative d ln f / d ln g.

    With prefactor exponent alpha != 0 the result is ``alpha * sum c_n u**n``;
    for alpha = 0 the leading term is carried by the first log coefficient and
    the returned series is one order shorter.
    """
    if series.order < 1:
        raise ValueError("beta series needs order >= 1")
    k = series.order
    q = series.power_step
    log = series_log(series.coefficients, k)
    alpha = series.prefactor.exponent
    tail = [q * n * log[n] for n in range(k + 1)]  # u d/du ln(sum) scaled to d/d ln g
    if alpha != 0:
        if not is_exact(alpha):
            tail = [mpf(t) for t in tail]
        coeffs = [tail[0] + 1] + [t / alpha for t in tail[1:]]
        return AsymptoticSeries(PowerPrefactor(alpha, 0), tuple(coeffs), q)
    if log[1] == 0:
        raise BetaDegenerate("prefactor exponent and first coefficient both vanish")
    lead = tail[1]
    coeffs = [tail[n + 1] / lead for n in range(k)]
    return AsymptoticSeries(PowerPrefactor(lead, q), tuple(coeffs), q)


def transform_series(series: AsymptoticSeries, omega) -> TransformedSeries:
    """Re-expand f(g) in z after substituting g = z (1 - z)**(-1/omega).

    The prefactor amplitude*g**alpha becomes amplitude*z**alpha times a factor
    that is folded into the z-coefficients, so the leading power is preserved.
    """
    if series.power_step != 1:
        raise ValueError("variable transformation requires an integer-power series (q = 1)")
    om = exact(omega)
    if om is None:
        om = mpf(omega)
    if om <= 0:
        raise ValueError("omega must be positive")
    k = series.order
    alpha = series.prefactor.exponent
    exact_path = series.is_exact and is_exact(om) and is_exact(alpha)
    coeffs = list(series.coefficients) if exact_path else [mpf(c) for c in series.coefficients]
    inv = 1 / om if exact_path else 1 / mpf(om)
    zero = Fraction(0) if exact_path else ctx.mpf(0)
    out = [zero] * (k + 1)
    for m, a_m in enumerate(coeffs):
        if not a_m:
            continue
        # (1 - z)**(-(alpha + m)/omega) = (1 + (-1) z)**(...)
        e = -(alpha + m) * inv if exact_path else -(mpf(alpha) + m) * inv
        factor = binomial_series(Fraction(-1) if exact_path else ctx.mpf(-1), e, k - m)
        for j, c in enumerate(factor):
            out[m + j] += a_m * c
    base = AsymptoticSeries(series.prefactor, tuple(out), 1)
    return TransformedSeries(om, base, series)


def expand_approximant(approx, order: int) -> AsymptoticSeries:
    """Taylor coefficients of a factor, root or weighted approximant about g = 0."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return approx.expand(order)
