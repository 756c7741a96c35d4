from __future__ import annotations

from fractions import Fraction

import pytest

from selfsim import (
    AsymptoticSeries,
    BetaDegenerate,
    FactorApproximant,
    InsufficientOrders,
    LimitEstimate,
    PowerPrefactor,
    aggregate_estimates,
    estimate_omega,
    limit_power_restriction,
    limit_via_transformation,
    load_scenario,
)
from selfsim._numeric import ctx
from selfsim.errors import BranchError
from selfsim.limits import evaluate_at_unit

TIGHT = ctx.mpf(10) ** -30


def test_aggregate_fills_single_gaps():
    est = aggregate_estimates(LimitEstimate({3: 1, 4: None, 5: 3, 6: 5}))
    assert est.filled == {3: 1, 4: 2, 5: 3, 6: 5}
    assert est.final == 4


def test_aggregate_leaves_endpoint_gaps_empty():
    est = aggregate_estimates(LimitEstimate({3: None, 4: 2, 5: 4, 6: None}))
    assert est.filled == {4: 2, 5: 4}
    assert est.final == 3


def test_aggregate_needs_two_orders():
    with pytest.raises(InsufficientOrders):
        aggregate_estimates(LimitEstimate({3: 1, 4: None, 5: None}))


def test_single_factor_limit_is_exact():
    # 2 g**-2 (1 + 3g)**2 = 2 g**-2 (1 + 6g + 9g**2) -> 18
    series = AsymptoticSeries(PowerPrefactor(2, -2), (1, 6, 9))
    est = limit_power_restriction(series, [1, 2])
    assert est.per_order == {1: 18, 2: 18} and est.final == 18


def test_power_restriction_needs_decaying_prefactor():
    with pytest.raises(ValueError):
        limit_power_restriction(AsymptoticSeries(PowerPrefactor(1, 0), (1, 1)), [1])


def test_orders_outside_the_series_are_reported():
    est = limit_power_restriction(AsymptoticSeries(PowerPrefactor(2, -2), (1, 6, 9)), [1, 2, 3])
    assert est.per_order[3] is None and "outside" in est.reasons[3]


def test_membrane_transformation_final():
    sc = load_scenario("membrane")
    omega = estimate_omega(sc.series, 4).selected
    est = limit_via_transformation(sc.series, omega, [4, 5, 6])
    assert round(float(est.final), 4) == 0.0823


def test_string_vanishing_factor_orders_are_filled():
    sc = load_scenario("string")
    est = limit_via_transformation(sc.series, 2, range(3, 16))
    for k in (6, 10, 14):
        assert est.per_order[k] is None and "vanishes" in est.reasons[k]
        assert k in est.filled


def test_unit_evaluation_examples():
    f = FactorApproximant(PowerPrefactor(3, 0), ((1, 2), (Fraction(1, 3), -1)))
    assert abs(evaluate_at_unit(f) - 9) < TIGHT
    with pytest.raises(BranchError):
        evaluate_at_unit(FactorApproximant(PowerPrefactor(1, 0), ((-1, Fraction(1, 2)),)))
    with pytest.raises(BranchError):
        evaluate_at_unit(FactorApproximant(PowerPrefactor(1, 0), ((-3, Fraction(1, 2)),)))


def test_constant_series_transforms_to_its_amplitude():
    est = limit_via_transformation(AsymptoticSeries(PowerPrefactor(5, 0), (1,)), 1, [0])
    assert est.per_order == {0: 5}


def rational_ratio_series(k):
    # (2 + g) / (1 + g) = 2 (1 - g/2 + g**2/2 - ...), approaches 1 like 1/g
    return AsymptoticSeries(PowerPrefactor(2, 0), tuple([Fraction(1)] + [Fraction((-1) ** m, 2) for m in range(1, k + 1)]))


def test_omega_of_rational_ratio():
    est = estimate_omega(rational_ratio_series(8), 8)
    assert abs(est.selected - 1) < TIGHT
    assert est.selected_order == 4


def test_omega_is_deterministic():
    a = estimate_omega(rational_ratio_series(8), 8)
    b = estimate_omega(rational_ratio_series(8), 8)
    assert {k: w for k, (w, _) in a.per_order.items()} == {k: w for k, (w, _) in b.per_order.items()}


def test_omega_of_constant_series():
    with pytest.raises(BetaDegenerate):
        estimate_omega(AsymptoticSeries(PowerPrefactor(3, 0), (1, 0, 0)), 2)


def test_membrane_omega():
    sc = load_scenario("membrane")
    assert float(estimate_omega(sc.series, 4).selected) == pytest.approx(1.926983, abs=5e-7)
