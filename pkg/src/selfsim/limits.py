"""Extrapolation of a weak-coupling series to g -> infinity.

Two routes are provided: power restriction (a factor approximant whose total
power cancels the prefactor power) and variable transformation (re-expand in
``z`` with ``g = z (1 - z)**(-1/omega)`` and evaluate the z-side factor
approximant at ``z = 1``).  Per-order values are aggregated by filling single
gaps with the mean of the neighbours and averaging the last two orders.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._numeric import ctx, exact, is_complex, mpf, real_if_close
from .errors import (
    BranchError,
    InsufficientOrders,
    OmegaUnavailable,
    OrderUnavailable,
)
from .factor import (
    FactorApproximant,
    build_factor,
    build_factor_constrained,
    factor_asymptote,
)
from .series import AsymptoticSeries, beta_series, transform_series

__all__ = [
    "OmegaEstimate",
    "LimitEstimate",
    "limit_power_restriction",
    "estimate_omega",
    "limit_via_transformation",
    "aggregate_estimates",
    "evaluate_at_unit",
]

# 1 + B_i closer to zero than this is treated as a zero of the z = 1 product
_ZERO_BASE = ctx.mpf(10) ** -20


@dataclass(frozen=True)
class OmegaEstimate:
    """Per-order omega values from the beta approximants and the selected one."""

    per_order: dict  # k -> (omega or None, approximant or None)
    selected: object

    @property
    def selected_order(self) -> int:
        return max(k for k, (w, _) in self.per_order.items() if w is not None and w == self.selected)


@dataclass(frozen=True)
class LimitEstimate:
    per_order: dict  # k -> value or None
    reasons: dict = field(default_factory=dict)  # k -> why the order is unavailable
    filled: dict = field(default_factory=dict)
    final: object = None
    approximants: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def orders(self) -> list:
        return sorted(self.per_order)


def aggregate_estimates(raw: LimitEstimate) -> LimitEstimate:
    """Neighbour-fill single gaps, then average the last two filled orders."""
    orders = sorted(raw.per_order)
    filled = {}
    for k in orders:
        v = raw.per_order[k]
        if v is not None:
            filled[k] = v
            continue
        lo, hi = raw.per_order.get(k - 1), raw.per_order.get(k + 1)
        if lo is not None and hi is not None:
            filled[k] = (lo + hi) / 2
    usable = sorted(filled)
    if len(usable) < 2:
        raise InsufficientOrders(f"only {len(usable)} usable order(s)")
    final = (filled[usable[-1]] + filled[usable[-2]]) / 2
    return LimitEstimate(dict(raw.per_order), dict(raw.reasons), filled, final, raw.approximants)


def _finish(per_order, reasons, approximants) -> LimitEstimate:
    raw = LimitEstimate(per_order, reasons, {}, None, approximants)
    try:
        return aggregate_estimates(raw)
    except InsufficientOrders:
        filled = {k: v for k, v in per_order.items() if v is not None}
        return LimitEstimate(per_order, reasons, filled, None, approximants)


def limit_power_restriction(series: AsymptoticSeries, orders) -> LimitEstimate:
    """Limits from power-restricted factor approximants at each order."""
    if not series.prefactor.exponent < 0:
        raise ValueError("power restriction needs a negative prefactor exponent")
    per_order, reasons, approximants = {}, {}, {}
    for k in orders:
        if k > series.order or k < 1:
            per_order[k], reasons[k] = None, "order outside the series"
            continue
        try:
            approx = build_factor_constrained(series.truncate(k))
            per_order[k] = factor_asymptote(approx)[0]
            approximants[k] = approx
        except OrderUnavailable as exc:
            per_order[k], reasons[k] = None, str(exc)
    return _finish(per_order, reasons, approximants)


def estimate_omega(series: AsymptoticSeries, max_even_order: int) -> OmegaEstimate:
    """Approach exponent omega from even-order factor approximants of the beta series.

    omega_k is minus the large-g power of beta_k*; the selected value comes
    from the largest even order giving a real positive omega.
    """
    beta = beta_series(series)
    per_order = {}
    for k in range(2, min(max_even_order, beta.order) + 1, 2):
        try:
            approx = build_factor(beta.truncate(k))
            _, exponent = factor_asymptote(approx)
        except (OrderUnavailable, BranchError):
            per_order[k] = (None, None)
            continue
        omega = -exponent
        per_order[k] = (omega if omega > 0 else None, approx)
    valid = [k for k, (w, _) in per_order.items() if w is not None]
    if not valid:
        raise OmegaUnavailable("no even order gives a real positive omega")
    return OmegaEstimate(per_order, per_order[max(valid)][0])


def evaluate_at_unit(approx: FactorApproximant):
    """Value of a z-side factor approximant at z = 1 as a finite product."""
    value = mpf(approx.prefactor.amplitude)
    for node, n in approx.factors:
        base = 1 + mpf(node)
        if not is_complex(base) and abs(base) < _ZERO_BASE:
            raise BranchError("factor vanishes at z = 1")
        if not is_complex(base) and base < 0:
            ex = exact(n)
            integer = ex.denominator == 1 if ex is not None else (not is_complex(n) and n == ctx.nint(n))
            if not integer:
                raise BranchError("negative base under a fractional power at z = 1")
        value = value * ctx.power(base, n)
    value = real_if_close(value, 1e-8)
    if is_complex(value):
        raise BranchError("product at z = 1 is not real")
    return value


def limit_via_transformation(series: AsymptoticSeries, omega, orders) -> LimitEstimate:
    """Limits F_k*(1) of factor approximants of the z-transformed series."""
    transformed = transform_series(series, omega).base
    per_order, reasons, approximants = {}, {}, {}
    for k in orders:
        if k > series.order or k < 0:
            per_order[k], reasons[k] = None, "order outside the series"
            continue
        if k == 0:
            per_order[k] = mpf(series.prefactor.amplitude)
            continue
        try:
            approx = build_factor(transformed.truncate(k))
            per_order[k] = evaluate_at_unit(approx)
            approximants[k] = approx
        except (OrderUnavailable, BranchError) as exc:
            per_order[k], reasons[k] = None, str(exc)
    return _finish(per_order, reasons, approximants)
