from __future__ import annotations

from fractions import Fraction

import pytest

from selfsim import (
    AsymptoticSeries,
    BranchError,
    DepthUnavailable,
    PowerPrefactor,
    RootApproximant,
    StrongCouplingExpansion,
    bootstrap_sequence,
    build_root_interpolant,
    build_root_iterated,
    evaluate_root,
    load_scenario,
    predict_next_coefficient,
    root_asymptote,
)
from selfsim._numeric import ctx

TIGHT = ctx.mpf(10) ** -40

# sqrt(1 + g) = g**(1/2) (1 + 1/g)**(1/2), weak side in powers of g**(1/2)
SQRT_SERIES = AsymptoticSeries(PowerPrefactor(1, 0), (1, 0, Fraction(1, 2), 0, Fraction(-1, 8)), Fraction(1, 2))
SQRT_ANCHOR = StrongCouplingExpansion(((1, Fraction(1, 2)),))


def test_strong_coupling_powers_descend():
    with pytest.raises(ValueError):
        StrongCouplingExpansion(((1, 0), (2, 1)))
    with pytest.raises(ValueError):
        StrongCouplingExpansion(((0, 1),))


def test_depth_one_recovers_exact_root():
    r = build_root_interpolant(SQRT_SERIES.truncate(0), SQRT_ANCHOR)
    assert r.depth == 1 and r.anchor == "infinity"
    assert abs(r.amplitudes[0] - 1) < TIGHT and r.exponents == (Fraction(1, 2),)
    assert r(3) == pytest.approx(2.0)
    exp = r.expand(4)
    assert exp.power_step == Fraction(1, 2)
    for got, want in zip(exp.coefficients, SQRT_SERIES.coefficients):
        assert abs(got - want) < TIGHT


def test_prediction_matches_next_coefficient():
    r = build_root_interpolant(SQRT_SERIES.truncate(0), SQRT_ANCHOR)
    assert abs(predict_next_coefficient(r, SQRT_SERIES.truncate(0))) < TIGHT
    assert abs(predict_next_coefficient(r, SQRT_SERIES.truncate(1)) - Fraction(1, 2)) < TIGHT


def test_vanishing_amplitude_is_unavailable():
    with pytest.raises(DepthUnavailable):
        build_root_interpolant(SQRT_SERIES.truncate(2), SQRT_ANCHOR)


def test_lieb_liniger_anchor_side():
    sc = load_scenario("lieb-liniger")
    r = build_root_interpolant(sc.series.truncate(0), sc.asymptote)
    assert r.depth == 3
    s1, s2 = r.expand_anchor(2)[1:]
    assert abs(s1 + 4) < TIGHT and abs(s2 - 12) < TIGHT
    assert r.exponents == (Fraction(3, 2), Fraction(5, 4), Fraction(-1, 3))
    assert r(1e8) == pytest.approx(float(ctx.pi**2 / 3), rel=1e-6)
    amp, ex = root_asymptote(r)
    assert ex == 1 and abs(amp - 1) < TIGHT


def test_depth_larger_than_data():
    sc = load_scenario("lieb-liniger")
    with pytest.raises(DepthUnavailable):
        build_root_interpolant(sc.series.truncate(0), sc.asymptote, depth=5)


def test_anchor_power_must_sit_on_grid():
    with pytest.raises(ValueError):
        build_root_interpolant(SQRT_SERIES.truncate(0), StrongCouplingExpansion(((1, Fraction(1, 2)), (1, Fraction(1, 3)))))


def test_bootstrap_needs_a_valid_depth():
    with pytest.raises(ValueError):
        bootstrap_sequence(SQRT_SERIES.truncate(2), SQRT_ANCHOR, 2)


def test_bootstrap_stops_at_unavailable_depth():
    seq = bootstrap_sequence(SQRT_SERIES.truncate(0), SQRT_ANCHOR, 4)
    assert [r.depth for r, _, _ in seq] == [1]
    assert abs(seq[0][2]) < TIGHT


def test_bootstrap_final_stage_has_no_prediction():
    seq = bootstrap_sequence(SQRT_SERIES.truncate(0), SQRT_ANCHOR, 1)
    assert len(seq) == 1 and seq[0][2] is None


def test_bootstrap_extends_series_with_predictions():
    sc = load_scenario("polaron")
    seq = bootstrap_sequence(sc.series, sc.asymptote, 4)
    root, used, pred = seq[0]
    assert used.order == sc.series.order and pred is not None
    assert seq[1][1].coefficients[-1] == pred
    assert seq[1][0].depth == root.depth + 1


def test_polaron_ladder_exponent_schedule():
    sc = load_scenario("polaron")
    root = bootstrap_sequence(sc.series, sc.asymptote, 4)[0][0]
    p = root.depth
    assert root.exponents[:-1] == tuple(Fraction(2 * j + 1, 2 * j) for j in range(1, p))
    # terminal exponent bridges the two leading powers
    assert root.exponents[-1] == Fraction(2 - 1, 2 * p)
    assert root_asymptote(root)[1] == 1


def test_iterated_oscillator_first_stage():
    stages = build_root_iterated(load_scenario("oscillator").series)
    assert [r.depth for r in stages] == [1, 2, 3]
    assert stages[0].amplitudes == (Fraction(17, 2),)
    assert stages[0].exponents == (Fraction(3, 17),)
    assert stages[0](1) == pytest.approx(0.7439, abs=1e-4)


def test_iterated_keeps_lower_amplitudes_frozen():
    stages = build_root_iterated(load_scenario("oscillator").series)
    for lo, hi in zip(stages, stages[1:]):
        assert hi.amplitudes[: lo.depth] == lo.amplitudes
        assert hi.powers[: lo.depth] == lo.powers
        # the previous outer exponent is split, the product is unchanged
        assert hi.exponents[lo.depth - 1] * hi.exponents[lo.depth] == lo.exponents[-1]


def test_iterated_reproduces_series():
    series = load_scenario("oscillator").series
    stages = build_root_iterated(series)
    for r in stages:
        k = 2 * r.depth
        assert r.expand(k).coefficients == series.coefficients[: k + 1]


def test_iterated_needs_two_orders():
    with pytest.raises(ValueError):
        build_root_iterated(SQRT_SERIES.truncate(1))


def test_negative_base_under_fractional_power():
    r = RootApproximant(PowerPrefactor(1, 0), (-2,), (Fraction(1, 2),), (1,))
    with pytest.raises(BranchError):
        root_asymptote(r)


def test_evaluate_rejects_negative_coupling():
    r = RootApproximant(PowerPrefactor(1, 0), (1,), (Fraction(1, 2),), (1,))
    assert evaluate_root(r, 3) == pytest.approx(2.0)
    assert evaluate_root(r, 0) == 1.0
    with pytest.raises(ValueError):
        evaluate_root(r, -1)


def test_mismatched_ladder_rejected():
    with pytest.raises(ValueError):
        RootApproximant(PowerPrefactor(1, 0), (1, 2), (Fraction(1, 2),), (1,))
    with pytest.raises(ValueError):
        RootApproximant(PowerPrefactor(1, 0), (1,), (1,), (1,), anchor="sideways")
