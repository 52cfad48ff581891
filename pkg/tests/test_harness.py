"""Inequality reports, constants, verdict logic and the suite driver."""
import math

import numpy as np
import pytest

from lcdunkl.corpus import (corpus_default, make_gaussian, make_indicator, make_poly_gaussian,
                            make_smooth_bump)
from lcdunkl.errors import ConcentrationSaturated, FitFailure, ParameterOutOfRange
from lcdunkl.harness import (EMPIRICAL, HOLDS, TRIVIAL, VIOLATED, Case, ExponentPair,
                             SuiteConfig, bandlimited_report, case_sets, clarkson_constant,
                             clarkson_report, cowling_price_extremal_check, donoho_stark_report,
                             gaussian_norm_constant, gaussian_norm_report, heisenberg_report,
                             heisenberg_smoothing_report, level_set_measure, make_report,
                             matolcsi_report, miyachi_extremal_check, moment_interpolation_report,
                             nash_constant, nash_report, nash_two_constant, plancherel_report,
                             riemann_lebesgue_report, run_suite, smoothing_constant, summarize,
                             young_report)
from lcdunkl.measure import IntervalSet, QuadratureSpec, Signal, gamma_measure
from lcdunkl.transform import CanonicalMatrix, fractional_matrix

M = CanonicalMatrix(0.5, -1.0, 0.5, 1.0)


@pytest.fixture(scope="module")
def gauss_case():
    return Case(make_gaussian(1.0), M, 0.5)


def test_exponent_pair():
    pq = ExponentPair.from_p(1.25)
    assert pq.q == pytest.approx(5.0)
    with pytest.raises(ParameterOutOfRange):
        ExponentPair.from_p(2.5)
    with pytest.raises(ParameterOutOfRange):
        ExponentPair(1.5, 2.0)


def test_verdicts():
    assert make_report("t", {}, 1.0, 2.0, 1.0).verdict == HOLDS
    assert make_report("t", {}, 1.0 + 5e-10, 1.0, 1.0).verdict == HOLDS
    assert make_report("t", {}, 1.0 + 2e-9, 1.0, 1.0).verdict == VIOLATED
    assert make_report("t", {}, 1.0, math.inf, 1.0).verdict == TRIVIAL
    assert make_report("t", {}, 0.0, 0.0, 1.0).verdict == TRIVIAL
    r = make_report("t", {}, 3.0, 1.0, None)
    assert r.verdict == EMPIRICAL and r.ratio == 3.0 and math.isnan(r.constant)


def test_constants_closed_forms():
    k, b, q = 0.5, -2.0, 3.0
    ckb = abs(b) ** (-(k + 1))
    ball = 2 ** (k + 1) * math.gamma(k + 2)
    assert nash_constant(k, b, q) == pytest.approx((1 + ckb ** q / ball) ** (1 / q), rel=1e-14)
    q1, q2 = 5.0, 3.0
    expected = (1 + ball ** (-(q1 - q2) / q1) * ckb ** ((1 - 2 / q1) * q2)) ** (1 / q2)
    assert nash_two_constant(k, b, q1, q2) == pytest.approx(expected, rel=1e-14)
    assert clarkson_constant(k, q) == pytest.approx(1 + ball ** (-1 / q), rel=1e-14)
    assert gaussian_norm_constant(k, 1.5) == pytest.approx(3.0 ** (-1.0), rel=1e-14)


def test_constants_stay_finite_at_large_order():
    for fn in (lambda: nash_constant(300.0, 0.5, 3.0), lambda: clarkson_constant(300.0, 3.0),
               lambda: nash_two_constant(300.0, 0.5, 5.0, 3.0)):
        v = fn()
        assert math.isfinite(v) and v >= 1.0


def test_smoothing_constant_domain():
    with pytest.raises(ParameterOutOfRange):
        smoothing_constant(0.0, 1.0, 1.0, 2.0)
    assert smoothing_constant(0.5, 1.0, 0.5, 2.0) > 0


def test_transform_level_reports(gauss_case):
    r = plancherel_report(gauss_case)
    assert r.verdict == HOLDS and r.diagnostics["relative_deviation"] < 1e-9
    for p in (1.25, 1.5, 2.0):
        assert young_report(gauss_case, p).verdict == HOLDS
    # at lam = 0 the chirp exp(i a x^2 / 2b) costs |1 + i a / 2b|^(-(k+1)) against the L^1 bound
    rl = riemann_lebesgue_report(gauss_case)
    chirp = abs(1 + 1j * M.a / (2 * M.b)) ** (-1.5)
    assert rl.verdict == HOLDS and rl.ratio == pytest.approx(chirp, rel=1e-9)


def test_gaussian_norm_report():
    for k in (-0.5, 0.0, 1.5):
        for t in (0.5, 1.0, 4.0):
            r = gaussian_norm_report(k, 1.5, t)
            assert r.diagnostics["relative_deviation"] < 1e-10


def test_young_equality_at_p2(gauss_case):
    # p = 2 is Plancherel: constant 1 and ratio 1
    r = young_report(gauss_case, 2.0)
    assert r.constant == pytest.approx(1.0) and r.ratio == pytest.approx(1.0, abs=1e-9)


def test_nash_and_clarkson_hold_on_gaussian(gauss_case):
    for s in (0.5, 1.0, 2.0):
        assert nash_report("L1_Lp", gauss_case, s, 1.5).verdict == HOLDS
        assert nash_report("L2_Lp", gauss_case, s, 1.25).verdict == HOLDS
        assert nash_report("two_exponent", gauss_case, s, 1.25, 2.0).verdict == HOLDS
        for variant, p, p2 in (("L1_Lp", 1.5, None), ("L2_Lp", 1.5, None), ("p1_p2", 1.25, 1.5)):
            r = clarkson_report(variant, gauss_case.f, 0.5, s, p, p2, case=gauss_case)
            assert r.verdict == HOLDS
    with pytest.raises(ParameterOutOfRange):
        nash_report("L2_Lp", gauss_case, 1.0, 2.0)
    with pytest.raises(ParameterOutOfRange):
        nash_report("bogus", gauss_case, 1.0, 1.5)


def test_smoothing_and_moment_reports(gauss_case):
    pq = ExponentPair.from_p(1.5)
    assert heisenberg_smoothing_report(gauss_case, 0.5, 1.0, pq).verdict == HOLDS
    h = heisenberg_report(gauss_case, 0.5, 1.0, pq)
    assert h.verdict == EMPIRICAL and h.ratio > 0
    m = moment_interpolation_report(gauss_case.spectrum, 1.0, 2.0, 3.0, 0.5, case=gauss_case)
    assert m.verdict == HOLDS
    with pytest.raises(ParameterOutOfRange):
        moment_interpolation_report(gauss_case.spectrum, 2.0, 1.0, 3.0, 0.5)


def test_donoho_stark(gauss_case):
    E, F = IntervalSet.symmetric(4.0), IntervalSet.symmetric(4.0)
    r = donoho_stark_report("L1_Lp", gauss_case, E, F, 1.5)
    assert r.verdict == HOLDS
    assert r.diagnostics["eps_E"] < 1e-6
    r2 = donoho_stark_report("p1_p2", gauss_case, E, F, 1.25, 2.0)
    assert r2.verdict == HOLDS
    with pytest.raises(ConcentrationSaturated):
        donoho_stark_report("L1_Lp", gauss_case, IntervalSet(), F, 1.5)


def test_donoho_stark_monotone_in_sets():
    case = Case(make_indicator(1.0), M, 0.5)
    small = donoho_stark_report("L1_Lp", case, IntervalSet.symmetric(0.6),
                                IntervalSet.symmetric(5.0), 1.5)
    big = donoho_stark_report("L1_Lp", case, IntervalSet.symmetric(0.9),
                              IntervalSet.symmetric(10.0), 1.5)
    assert big.diagnostics["eps_E"] <= small.diagnostics["eps_E"]
    assert big.diagnostics["eps_F"] <= small.diagnostics["eps_F"]
    assert small.verdict == HOLDS and big.verdict == HOLDS


def test_bandlimited(gauss_case):
    E, F = case_sets(gauss_case, 0.6)
    r = bandlimited_report(gauss_case, E, F, 1.5, 2.0)
    assert r.verdict == HOLDS and r.diagnostics["eps_F"] < 1e-3
    # F covering the whole spectral window with room for the taper: h = f
    wide = IntervalSet.symmetric(1.3 * gauss_case.spectrum.decay_radius)
    r2 = bandlimited_report(gauss_case, E, wide, 1.5, 2.0)
    assert r2.diagnostics["eps_F"] < 1e-8


def test_matolcsi_exact_support_is_trivial():
    case = Case(make_indicator(1.0), M, 0.5)
    r = matolcsi_report("L1_Lp", case, 0.0, 1.5)
    assert r.verdict == TRIVIAL and r.rhs == math.inf
    d = matolcsi_report("L1_Lp", case, 1e-6, 1.5)
    assert d.verdict == EMPIRICAL and math.isfinite(d.ratio)
    assert matolcsi_report("p1_p2", case, 0.0, 1.25, 1.5).verdict == TRIVIAL


def test_level_set_measure():
    g = make_indicator(1.0)
    assert level_set_measure(g, 0.5, 0.0, 3.0, n=60001) == pytest.approx(
        gamma_measure(IntervalSet.symmetric(1.0), 0.0), rel=1e-3)
    assert level_set_measure(g, 2.0, 0.0, 3.0) == 0.0


def test_zero_signal_reports_are_trivial():
    zero = Signal(lambda x: np.zeros(np.shape(x), complex), 1.0, "zero",
                  support=IntervalSet.symmetric(1.0))
    case = Case(zero, M, 0.5)
    assert nash_report("L1_Lp", case, 1.0, 1.5).verdict == TRIVIAL
    assert bandlimited_report(case, IntervalSet.symmetric(1), IntervalSet.symmetric(1),
                              1.5, 2.0).verdict == TRIVIAL
    assert matolcsi_report("L1_Lp", case, 0.0, 1.5).verdict == TRIVIAL


def test_miyachi_extremal():
    r = miyachi_extremal_check(0.5, fractional_matrix(math.pi / 2), -0.5)
    assert r.verdict == HOLDS and r.lhs < 1e-8
    assert r.diagnostics["decay_error"] < 1e-6
    assert r.diagnostics["c0_analytic_deviation"] < 1e-10
    assert r.diagnostics["lnplus_max"] < 1e-6


def test_cowling_price_extremal():
    for m in range(4):
        r = cowling_price_extremal_check(m, 1.0, M, 0.5)
        assert r.diagnostics["degree"] == m and r.lhs <= 1e-8
        assert r.diagnostics["parity_defect"] < 1e-10
    with pytest.raises(FitFailure):
        cowling_price_extremal_check(2, 1.0, M, 0.5, tol=1e-30)


def test_homogeneity(gauss_case):
    f = make_poly_gaussian(1, 1.0)
    base = Case(f, M, 0.5)
    for c in (2.0, -3.0, np.exp(0.7j)):
        scaled = Case(f.scaled(c), M, 0.5)
        for fn in (lambda cs: nash_report("L1_Lp", cs, 1.0, 1.5),
                   lambda cs: young_report(cs, 1.25),
                   lambda cs: donoho_stark_report("L1_Lp", cs, IntervalSet.symmetric(2.0),
                                                  IntervalSet.symmetric(4.0), 1.5)):
            assert fn(scaled).ratio == pytest.approx(fn(base).ratio, rel=1e-9)


def test_summarize_counts():
    reps = [make_report("a", {}, 1.0, 2.0, 1.0), make_report("a", {}, 3.0, 1.0, 1.0),
            make_report("b", {}, 1.0, math.inf, 1.0)]
    s = summarize(reps)
    assert s["a"]["cases"] == 2 and s["a"]["violated"] == 1 and s["a"]["verdict"] == VIOLATED
    assert s["a"]["worst_ratio"] == 3.0
    assert s["b"]["verdict"] == TRIVIAL


def test_run_suite_empty_and_deterministic():
    empty = run_suite([], [M], [0.5])
    assert empty.cases == [] and empty.summary == {}
    corpus = [e for e in corpus_default(0) if e.family == "gaussian"][:1]
    cfg = SuiteConfig(s_values=(1.0,), exponents=(1.5, 2.0), gaussian_t=(1.0,), miyachi_s=(0.5,),
                      cowling_price=((1, 1.0),))
    a = run_suite(corpus, [M], [0.5], cfg)
    b = run_suite(corpus, [M], [0.5], cfg)
    assert [r.to_dict() for r in a.cases] == [r.to_dict() for r in b.cases]
    assert a.violated() == 0 and not a.errors
    keys = [(r.theorem_id, r.case) for r in a.cases]
    assert keys == sorted(keys)
