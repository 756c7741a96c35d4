from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfsim import (
    AsymptoticSeries,
    BranchError,
    FactorApproximant,
    NoSolution,
    OrderUnavailable,
    PowerPrefactor,
    StrongCouplingExpansion,
    build_factor,
    build_factor_constrained,
    build_factor_interpolating,
    combine_weighted,
    compute_moments,
    evaluate_factor,
    factor_asymptote,
    load_scenario,
    solve_prony,
)
from selfsim._numeric import ctx, is_complex, mpf
from selfsim.series import MomentVector, series_exp

TIGHT = ctx.mpf(10) ** -30


def product_series(pairs, k, amplitude=1, exponent=0):
    log = [Fraction(0)] * (k + 1)
    for a, n in pairs:
        for m in range(1, k + 1):
            log[m] += n * (-1) ** (m - 1) * Fraction(a) ** m / m
    return AsymptoticSeries(PowerPrefactor(amplitude, exponent), tuple(series_exp(log, k)))


def test_prony_two_nodes():
    pairs = solve_prony(MomentVector((8, 22, 62, 178)), 2)
    assert [(float(a), float(n)) for a, n in pairs] == pytest.approx([(3, 2), (2, 1)])


def test_prony_single_node():
    (a, n), = solve_prony(MomentVector((6, 12)), 1)
    assert abs(a - 2) < TIGHT and abs(n - 3) < TIGHT


def test_prony_string_low_order_has_no_solution():
    with pytest.raises(NoSolution):
        solve_prony(MomentVector((Fraction(1, 4), 0)), 1)


def test_prony_fixed_node_and_moment_zero():
    # n = (1, 2), A = (1, 3): B_m = 1 + 2*3**m, B_0 = 3
    B = MomentVector(tuple(1 + 2 * 3**m for m in range(1, 4)))
    pairs = solve_prony(B, 2, fixed_node=1)
    assert abs(pairs[0][0] - 3) < TIGHT and abs(pairs[1][0] - 1) < TIGHT
    pairs = solve_prony(MomentVector(B.values[:2]), 2, fixed_node=1, moment_zero=3)
    assert abs(pairs[0][1] - 2) < TIGHT and abs(pairs[1][1] - 1) < TIGHT


def test_prony_needs_enough_moments():
    with pytest.raises(ValueError):
        solve_prony(MomentVector((1, 2, 3)), 2)


def test_prony_conjugate_pair():
    a, n = ctx.mpc(1, 2), ctx.mpc(0.5, -0.25)
    B = tuple(ctx.re(n * a**m + ctx.conj(n) * ctx.conj(a) ** m) for m in range(1, 5))
    pairs = solve_prony(MomentVector(B), 2)
    assert all(is_complex(x) for x, _ in pairs)
    assert pairs[0][0] == ctx.conj(pairs[1][0]) and pairs[0][1] == ctx.conj(pairs[1][1])


def test_k1_unit_node():
    f = build_factor(AsymptoticSeries(PowerPrefactor(1, 0), (1, Fraction(5, 3))), "unit_node")
    assert len(f.factors) == 1
    (a, n), = f.factors
    assert a == 1 and abs(n - Fraction(5, 3)) < TIGHT


def test_odd_convention_must_be_known():
    with pytest.raises(ValueError):
        build_factor(product_series([(2, 1), (3, 1)], 3), "whatever")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 30), st.integers(1, 12)), min_size=1, max_size=4, unique_by=lambda t: t[0]))
def test_exact_form_recovery(params):
    pairs = [(Fraction(a, 3), Fraction(n, 4)) for a, n in params]
    approx = build_factor(product_series(pairs, 2 * len(pairs)))
    got = sorted((float(a), float(n)) for a, n in approx.factors)
    assert got == pytest.approx(sorted((float(a), float(n)) for a, n in pairs), rel=1e-25)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=2, max_size=8))
def test_reexpansion_and_conjugate_closure(tail):
    s = AsymptoticSeries(PowerPrefactor(1, 0), tuple([1] + [mpf(x) for x in tail]))
    try:
        approx = build_factor(s)
    except OrderUnavailable:
        return
    complex_nodes = [a for a, _ in approx.factors if is_complex(a)]
    for a in complex_nodes:
        assert any(abs(b - ctx.conj(a)) == 0 for b in complex_nodes)
    exp = approx.expand(s.order)
    for want, got in zip(s.coefficients, exp.coefficients):
        assert abs(got - want) <= 1e-10 * max(1, abs(want))


def test_canonical_order_is_descending_modulus():
    approx = build_factor(product_series([(1, 1), (5, 2), (3, 1)], 6))
    mods = [abs(a) for a in approx.nodes]
    assert mods == sorted(mods, reverse=True)


def test_constrained_total_power_and_limit():
    # f = 2 g**-2 (1 + 3g)**2 -> 18 at infinity
    s = product_series([(3, 2)], 1, amplitude=2, exponent=-2)
    approx = build_factor_constrained(s)
    amp, ex = factor_asymptote(approx)
    assert ex == 0 and abs(amp - 18) < TIGHT


def test_constrained_limit_matches_large_g_evaluation():
    s = load_scenario("string").series.truncate(3)
    approx = build_factor_constrained(s)
    amp, ex = factor_asymptote(approx)
    assert abs(ctx.fsum(approx.weights) - 2) < TIGHT
    assert evaluate_factor(approx, 1e8) == pytest.approx(float(amp), rel=1e-6)


def test_constrained_needs_negative_power():
    with pytest.raises(ValueError):
        build_factor_constrained(product_series([(3, 2)], 2))


def test_constrained_membrane_unavailable_orders():
    s = load_scenario("membrane").series
    for k in (5, 6):
        with pytest.raises(OrderUnavailable):
            build_factor_constrained(s.truncate(k))


def test_evaluate_examples():
    assert evaluate_factor(FactorApproximant(PowerPrefactor(1, 0), ((1, Fraction(1, 2)),)), 3) == pytest.approx(2.0)
    pair = ((ctx.mpc(0, 1), 1), (ctx.mpc(0, -1), 1))
    assert evaluate_factor(FactorApproximant(PowerPrefactor(1, 0), pair), 2) == pytest.approx(5.0)


def test_oscillator_sanity_value():
    f6 = build_factor(load_scenario("oscillator").series.truncate(6))
    assert abs(evaluate_factor(f6, 1) - 0.8038) / 0.8038 < 0.02


def test_branch_point_detected():
    f = FactorApproximant(PowerPrefactor(1, 0), ((-1, Fraction(1, 2)),))
    with pytest.raises(BranchError):
        evaluate_factor(f, 2)
    with pytest.raises(BranchError):
        evaluate_factor(f, 1)


def test_asymptote_oscillator():
    amp, ex = factor_asymptote(build_factor(load_scenario("oscillator").series.truncate(6)))
    assert float(amp) == pytest.approx(0.756157, abs=2e-6)
    assert float(ex) == pytest.approx(0.257, abs=5e-4)


def test_interpolating_with_own_asymptote_reproduces_unconstrained():
    s = product_series([(2, Fraction(1, 2)), (5, Fraction(1, 3))], 4)
    approx = build_factor(s)
    amp, ex = factor_asymptote(approx)
    inter = build_factor_interpolating(s.truncate(3), StrongCouplingExpansion(((amp, Fraction(5, 6)),)))
    assert sorted(float(a) for a in inter.nodes) == pytest.approx([2, 5], rel=1e-20)


def test_interpolating_fermi_gas():
    sc = load_scenario("fermi-gas")
    f31 = build_factor_interpolating(sc.series.truncate(3), sc.asymptote)
    f41 = build_factor_interpolating(sc.series.truncate(4), sc.asymptote)
    amp31, ex31 = factor_asymptote(f31)
    amp41, ex41 = factor_asymptote(f41)
    assert ex31 == 0 and ex41 == 0
    assert abs(amp41 - mpf("0.132")) < ctx.mpf(10) ** -15
    assert 0 < amp31 < 1
    assert evaluate_factor(f41, 0) == pytest.approx(0.3)


def test_combine_weighted_endpoints_and_auto():
    from selfsim import build_root_iterated

    s = load_scenario("oscillator").series
    f = build_factor(s.truncate(4))
    r = build_root_iterated(s.truncate(4))[-1]
    w1, w0 = combine_weighted(f, r, 1), combine_weighted(f, r, 0)
    assert w1(0.7) == pytest.approx(f(0.7)) and w0(0.7) == pytest.approx(r(0.7))
    assert combine_weighted(f, r).weight == Fraction(1, 2)
    auto = combine_weighted(f, r, "auto", next_coefficient=(5, s.coefficients[5]))
    assert abs(auto.expand(5).coefficients[5] - s.coefficients[5]) <= 1e-20 * abs(s.coefficients[5])


def test_moments_sanity_of_built_factor():
    s = product_series([(2, 1), (3, 2)], 4)
    assert compute_moments(build_factor(s).expand(4)).values[3] == pytest.approx(178)
