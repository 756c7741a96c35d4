"""Self-similar root approximants.

A root approximant is a nested ladder

    R(g) = f0(g) * S_p(x),   S_j = (S_{j-1} + A_j x**m_j)**n_j,   S_0 = 1,

in a ladder variable ``x = g**s`` (anchored at zero) or ``x = g**-s``
(anchored at infinity).  Two constructions are provided: interpolants pinned
to a strong-coupling expansion whose amplitudes are fixed by the weak-coupling
series (with bootstrap prediction of further coefficients), and iterated roots
built stage by stage from the weak-coupling series alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._numeric import ctx, exact, is_exact, mpf, number
from .errors import BranchError, DepthUnavailable
from .series import AsymptoticSeries, PowerPrefactor, series_pow

__all__ = [
    "StrongCouplingExpansion",
    "RootApproximant",
    "build_root_interpolant",
    "predict_next_coefficient",
    "bootstrap_sequence",
    "build_root_iterated",
    "evaluate_root",
    "root_asymptote",
]

ZERO = "zero"
INFINITY = "infinity"


@dataclass(frozen=True)
class StrongCouplingExpansion:
    """Large-g expansion ``sum_j b_j g**alpha_j`` with strictly descending powers."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((number(b), number(a)) for b, a in self.terms)
        if not terms:
            raise ValueError("strong-coupling expansion needs at least one term")
        if terms[0][0] == 0:
            raise ValueError("leading strong-coupling amplitude must be nonzero")
        for (_, a1), (_, a2) in zip(terms, terms[1:]):
            if not a1 > a2:
                raise ValueError("strong-coupling powers must be strictly descending")
        object.__setattr__(self, "terms", terms)

    @property
    def leading(self):
        return self.terms[0]


@dataclass(frozen=True)
class RootApproximant:
    """Nested root ladder ``prefactor(g) * S_p(x)``.

    ``variable_exponent`` is s; the ladder runs in ``x = g**s`` when
    ``anchor == "zero"`` and in ``x = g**-s`` when ``anchor == "infinity"``.
    """

    prefactor: PowerPrefactor
    amplitudes: tuple
    exponents: tuple
    powers: tuple
    variable_exponent: Fraction = Fraction(1)
    anchor: str = ZERO

    def __post_init__(self):
        if not (len(self.amplitudes) == len(self.exponents) == len(self.powers)):
            raise ValueError("ladder amplitudes, exponents and powers must have equal length")
        if self.anchor not in (ZERO, INFINITY):
            raise ValueError(f"unknown anchor {self.anchor!r}")
        s = exact(self.variable_exponent)
        if s is None or s <= 0:
            raise ValueError("variable_exponent must be a positive rational")
        object.__setattr__(self, "variable_exponent", s)
        object.__setattr__(self, "amplitudes", tuple(self.amplitudes))
        object.__setattr__(self, "exponents", tuple(self.exponents))
        object.__setattr__(self, "powers", tuple(int(m) for m in self.powers))

    @property
    def depth(self) -> int:
        return len(self.amplitudes)

    def __call__(self, g) -> float:
        return evaluate_root(self, g)

    def asymptote(self):
        return root_asymptote(self)

    def expand(self, order: int) -> AsymptoticSeries:
        """Expansion on the small-g side (the weak-coupling series)."""
        if self.anchor == ZERO:
            return AsymptoticSeries(
                self.prefactor, tuple(_anchor_series(self, order)), self.variable_exponent
            )
        amp, coeffs = _far_series(self.amplitudes, self.exponents, order)
        exponent = self.prefactor.exponent - self.variable_exponent * self.depth * self.exponents[-1]
        return AsymptoticSeries(
            PowerPrefactor(mpf(self.prefactor.amplitude) * amp, exponent),
            tuple(coeffs),
            self.variable_exponent / 2,
        )

    def expand_anchor(self, order: int) -> list:
        """Coefficients of S_p in powers of the ladder variable x about x = 0."""
        return _anchor_series(self, order)


def _anchor_series(root: RootApproximant, order: int) -> list:
    S = [Fraction(1)] + [Fraction(0)] * order
    for a, n, m in zip(root.amplitudes, root.exponents, root.powers):
        S = list(S)
        if m <= order:
            S[m] = S[m] + a if is_exact(a) and is_exact(S[m]) else mpf(S[m]) + mpf(a)
        S = series_pow(S, n, order)
    return S


def _far_series(amplitudes, exponents, order):
    """Expansion of an infinity-anchored ladder with the standard schedule.

    Returns ``(c_p, T)`` with ``S_p = c_p * x**(p n_p) * T(w)`` and
    ``w = x**(-1/2)``.  Interior exponents must be (2j+1)/(2j) and powers j.
    """
    T = [ctx.mpf(0), ctx.mpf(1)] + [ctx.mpf(0)] * max(0, order - 1)
    T = T[: order + 1]
    c = ctx.mpf(1)
    for a, n in zip(amplitudes, exponents):
        a = mpf(a)
        inner = [ctx.mpf(1)] + [c / a * t for t in T[:order]]
        T = series_pow(inner, n, order)
        c = ctx.power(a, mpf(n))
    return c, [mpf(t) for t in T]


def _ladder_exponents(p: int, terminal):
    return tuple(Fraction(2 * j + 1, 2 * j) for j in range(1, p)) + (terminal,)


def _root_v(v, n):
    """Solve A**n = v for real A."""
    if v <= 0:
        raise DepthUnavailable(f"negative radicand {ctx.nstr(v, 8)} for a real amplitude")
    return ctx.power(v, 1 / mpf(n))


def _affine_solve(residual):
    """Root of a residual that is affine in its argument (two evaluations, one check)."""
    v1, v2 = ctx.mpf(1), ctx.mpf(2)
    r1, r2 = residual(v1), residual(v2)
    if r1 == r2:
        raise DepthUnavailable("ladder condition does not depend on its amplitude")
    v = v1 - r1 * (v2 - v1) / (r2 - r1)
    scale = abs(r1) + abs(r2)
    try:
        if abs(residual(v)) > ctx.mpf(10) ** -30 * scale:
            v = ctx.findroot(residual, v, solver="secant")
    except ZeroDivisionError:
        raise DepthUnavailable("ladder amplitude vanishes") from None
    return v


def build_root_interpolant(series: AsymptoticSeries, anchor: StrongCouplingExpansion, depth: int | None = None) -> RootApproximant:
    """Ladder anchored at infinity that reproduces the weak-coupling series.

    The ladder variable is ``x = g**-s`` with ``s = 2 q``; interior exponents
    are (2j+1)/(2j) and the terminal one bridges the two leading powers.
    Subleading anchor terms fix the innermost amplitudes, the series
    coefficients fix the outer ones.  ``depth`` defaults to all available
    conditions.
    """
    if not isinstance(anchor, StrongCouplingExpansion):
        anchor = StrongCouplingExpansion(tuple(anchor))
    s = 2 * series.power_step
    b1, alpha_a = anchor.leading
    alpha_f = series.prefactor.exponent

    # subleading anchor terms: x-power m -> normalized coefficient
    anchor_targets = {}
    for b, a in anchor.terms[1:]:
        m = (alpha_a - a) / s
        if m.denominator != 1:
            raise ValueError(f"anchor power {a} is not on the ladder grid")
        anchor_targets[int(m)] = mpf(b) / mpf(b1)
    n_anchor = max(anchor_targets, default=0)
    if depth is None:
        depth = series.order + 1 + n_anchor
    p = int(depth)
    n_far = p - n_anchor
    if n_far < 1:
        raise DepthUnavailable("depth too small for the supplied anchor terms")
    if n_far > series.order + 1:
        raise DepthUnavailable(f"depth {p} needs {n_far} series coefficients, have {series.order + 1}")

    terminal = (alpha_a - alpha_f) / (s * p)
    exps = _ladder_exponents(p, terminal)
    A = [None] * p
    a = [mpf(c) for c in series.coefficients]
    ratio = mpf(series.prefactor.amplitude) / mpf(b1)

    # innermost amplitudes from the anchor side: order m is affine in A_m
    for m in range(1, n_anchor + 1):
        target = anchor_targets.get(m, ctx.mpf(0))

        def anchor_res(v, m=m, target=target):
            trial = [x if x is not None else ctx.mpf(1) for x in A]
            trial[m - 1] = v
            S = _anchor_series(RootApproximant(PowerPrefactor(1, 0), trial, exps, range(1, p + 1)), m)
            return mpf(S[m]) - target

        A[m - 1] = _affine_solve(anchor_res)

    # outer amplitudes from the far side: order m is affine in c_{p-m} = A**n
    A[p - 1] = _root_v(ratio, terminal)
    for m in range(1, n_far):
        idx = p - m - 1
        target = ratio * a[m]

        def far_res(v, m=m, idx=idx, target=target):
            trial = [x if x is not None else ctx.mpf(1) for x in A]
            trial[idx] = ctx.power(v, 1 / mpf(exps[idx]))
            c, T = _far_series(trial, exps, m)
            return c * T[m] - target

        v = _affine_solve(far_res)
        A[idx] = _root_v(v, exps[idx])

    return RootApproximant(
        PowerPrefactor(b1, alpha_a), tuple(A), exps, tuple(range(1, p + 1)), s, INFINITY
    )


def predict_next_coefficient(root: RootApproximant, series: AsymptoticSeries):
    """Normalized weak-coupling coefficient of order k+1 implied by ``root``.

    Multiply by the series prefactor amplitude to get the raw coefficient.
    """
    k = series.order + 1
    far = root.expand(k)
    return far.coefficients[k] * mpf(far.prefactor.amplitude) / mpf(series.prefactor.amplitude)


def bootstrap_sequence(series: AsymptoticSeries, anchor: StrongCouplingExpansion, max_depth: int) -> list:
    """Alternate interpolation and coefficient prediction up to ``max_depth``.

    Returns ``[(root, series_used, predicted_or_None), ...]``; stops early on
    an unavailable depth.
    """
    if not isinstance(anchor, StrongCouplingExpansion):
        anchor = StrongCouplingExpansion(tuple(anchor))
    n_anchor = len(anchor.terms) - 1
    depth = series.order + 1 + n_anchor
    if max_depth < depth:
        raise ValueError(f"max_depth must be at least {depth}")
    out = []
    current = series
    while True:
        try:
            root = build_root_interpolant(current, anchor, depth)
        except DepthUnavailable:
            break
        if depth == max_depth:
            out.append((root, current, None))
            break
        nxt = predict_next_coefficient(root, current)
        out.append((root, current, nxt))
        current = current.extend(nxt)
        depth += 1
    return out


def build_root_iterated(series: AsymptoticSeries) -> list:
    """Iterated roots R_2*, R_4*, ... anchored at zero.

    Stage 1 is ``(1 + A_1 u)**n_1`` from a_1, a_2.  Stage j keeps every lower
    parameter, splits the previous outer exponent as n_prev / n_new and adds
    ``A_j u**(2j-1)`` inside a new outer power n_new, fixed by a_{2j-1}, a_{2j}.
    """
    k = series.order
    if k < 2:
        raise ValueError("iterated roots need order >= 2")
    a = list(series.coefficients)
    if a[1] == 0:
        return []
    A1 = a[1] - 2 * a[2] / a[1]
    if A1 == 0:
        return []
    stages = []
    amps, exps, pows = [A1], [a[1] / A1], [1]
    q = series.power_step

    def make():
        return RootApproximant(series.prefactor, tuple(amps), tuple(exps), tuple(pows), q, ZERO)

    stages.append(make())
    j = 2
    while 2 * j <= k:
        S = _anchor_series(stages[-1], 2 * j)
        P = a[2 * j - 1] - S[2 * j - 1]
        D = a[2 * j] - S[2 * j] - P * S[1]
        if P == 0 or D == 0:
            break
        n_new = -P * S[1] / D
        exps[-1] = exps[-1] / n_new
        amps.append(P / n_new)
        exps.append(n_new)
        pows.append(2 * j - 1)
        stages.append(make())
        j += 1
    return stages


def _dominant(root: RootApproximant):
    """Leading (amplitude, x-power) of S_p as x -> infinity."""
    amp, power = ctx.mpf(1), Fraction(0)
    for a, n, m in zip(root.amplitudes, root.exponents, root.powers):
        if m > power:
            amp, power = mpf(a), Fraction(m)
        elif m == power:
            amp = amp + mpf(a)
        if amp == 0:
            raise BranchError("leading terms cancel in the ladder")
        if amp < 0 and exact(n) is not None and exact(n).denominator != 1:
            raise BranchError("negative leading base under a fractional power")
        if amp < 0 and exact(n) is None:
            raise BranchError("negative leading base under a fractional power")
        amp = ctx.power(amp, mpf(n))
        power = power * n if exact(n) is not None else mpf(power) * mpf(n)
    return amp, power


def root_asymptote(root: RootApproximant):
    """(amplitude, exponent) on the side opposite to the anchor."""
    amp, power = _dominant(root)
    s = root.variable_exponent
    sign = 1 if root.anchor == ZERO else -1
    exponent = root.prefactor.exponent + sign * s * power
    return mpf(root.prefactor.amplitude) * amp, exponent


def evaluate_root(root: RootApproximant, g) -> float:
    g = mpf(g)
    if g < 0:
        raise ValueError("root approximants are evaluated for g >= 0")
    if g == 0:
        if root.anchor == ZERO:
            return float(root.prefactor(g)) if root.prefactor.exponent >= 0 else _blow_up(g)
        amp, exponent = root_asymptote(root)
        if exponent > 0:
            return 0.0
        if exponent == 0:
            return float(amp)
        return _blow_up(g)
    s = mpf(root.variable_exponent)
    x = ctx.power(g, s if root.anchor == ZERO else -s)
    S = ctx.mpf(1)
    for a, n, m in zip(root.amplitudes, root.exponents, root.powers):
        base = S + mpf(a) * x**m
        n = mpf(n)
        if base < 0 and n != ctx.nint(n):
            raise BranchError(f"branch-violation at g = {ctx.nstr(g, 8)}")
        if base == 0 and n < 0:
            raise BranchError(f"branch-violation at g = {ctx.nstr(g, 8)}")
        S = ctx.power(base, n)
    return float(root.prefactor(g) * S)


def _blow_up(g):
    raise BranchError(f"branch-violation at g = {ctx.nstr(g, 8)}")
