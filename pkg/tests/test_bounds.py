import math
import random

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from oriray.bounds import (NOT_APPLICABLE, ParameterError, RandomModelParameters, chernoff,
                           default_pikh_grid, direct_feasibility, erdos_bounds, erdos_lower,
                           erdos_upper, geom_lemma_check, ir_upper_bounds, k_objective,
                           klr_constraint, klr_parameters, log_one_minus_C_plus_ClnC,
                           minimize_K, pikh_constraints, pikh_parameters, pikh_threshold,
                           random_feasibility, spencer_bound, tower_bound, tower_sizes_check)


def direct_margins(n, N, p, c, C, mode):
    """log(lhs/rhs) of each condition in plain floating point, oriented so positive passes."""
    ln = math.log
    g = 1 - C + C * ln(C)
    rhs2 = (n - 1) * ln(N) + ln(1 + c) + ln(3)
    rhs3 = N * ln(2) + ln(3 * n)
    if mode == "isometric":
        hbar = (1 + c) ** n * (p * N) ** (n - 2)
        lhs2 = g * p * hbar
        lhs3 = c * c * C * C * hbar * hbar
        lhs4 = (n - 1) * (n - 2) / ((1 - c) * p) + 2 * C / (1 - c) * (n - 1) * hbar
    else:
        lhs2 = g * (1 + c) * (n - 2) * p * p * N
        lhs3 = (c * C * (1 + c) * (n - 2) * p * N) ** 2
        lhs4 = n * (n - 1) / ((1 - c) * p) + 2 * C * (1 + c) / (1 - c) * (n - 1) * (n - 2) * p * N
    return {
        "1": ln(c * c * p * N) - ln(3 * ln(3 * N)),
        "2": ln(lhs2) - ln(rhs2),
        "3": ln(lhs3) - ln(rhs3),
        "4": ln(N) - ln(lhs4),
    }


def test_chernoff_examples():
    up, _, _ = chernoff(1, math.e, 0.5)
    assert up == pytest.approx(math.exp(-1), rel=1e-12)
    _, _, low = chernoff(3, 2, 0.5)
    assert low == pytest.approx(0.687289, abs=1e-6)
    with pytest.raises(ParameterError):
        chernoff(1, 1, 0.5)
    with pytest.raises(ParameterError):
        chernoff(1, 2, 1)


@given(st.floats(1e-3, 1e3), st.floats(1.0001, 1e3), st.floats(1e-3, 0.999))
def test_chernoff_bounds_at_most_one(ex, C, c):
    assert all(0 <= b <= 1 for b in chernoff(ex, C, c))


def test_geom_examples():
    assert geom_lemma_check(3, 1, 2) is True
    assert geom_lemma_check(3, 1, 1) is True
    assert geom_lemma_check(2, 1, 5) == NOT_APPLICABLE
    assert geom_lemma_check(1e6, 0.5, 10 ** 6) is True


def test_geom_lemma_never_false_under_hypothesis():
    rng = random.Random(42)
    for _ in range(100_000):
        c = math.exp(rng.uniform(-6, 4))
        a = (1 + 1 / c) * (1 + math.exp(rng.uniform(-12, 3)))
        n = rng.randint(1, 5000)
        assert geom_lemma_check(a, c, n) is True


@given(st.floats(1e-6, 700))
def test_log_one_minus_C_plus_ClnC(L):
    C = math.exp(L)
    direct = 1 - C + C * math.log(C)
    with mpmath.workdps(60):
        exact = float(mpmath.log(1 - mpmath.exp(L) + mpmath.exp(L) * L))
    assert log_one_minus_C_plus_ClnC(L) == pytest.approx(exact, rel=1e-9, abs=1e-9)
    if L > 1e-2:
        assert log_one_minus_C_plus_ClnC(L) == pytest.approx(math.log(direct), rel=1e-9)


@given(st.integers(3, 25), st.floats(0.5, 12), st.floats(-6, -0.01), st.floats(0.01, 0.99),
       st.floats(math.log(1.5), 6), st.sampled_from(["isometric", "plain"]))
def test_log_space_matches_direct_evaluation(n, logN10, log_p, c, log_C, mode):
    log_N = logN10 * math.log(10)
    p = RandomModelParameters(n, log_N, log_p, c, log_C, mode)
    try:
        direct = direct_margins(n, math.exp(log_N), math.exp(log_p), c, math.exp(log_C), mode)
    except (OverflowError, ValueError):
        return
    if any(math.isinf(v) or math.isnan(v) for v in direct.values()):
        return
    rep = random_feasibility(p)
    for k in "1234":
        assert rep.margins[k] == pytest.approx(direct[k], rel=1e-9, abs=1e-9)
    flags = direct_feasibility(n, math.exp(log_N), math.exp(log_p), c, math.exp(log_C), mode)
    for k in "1234":
        if abs(rep.margins[k]) > 1e-9:
            assert flags[k] == rep.conditions[k]


def test_condition1_fails_as_p_vanishes():
    base = dict(n=10, log_N=20.0, c=0.5, log_C=3.0)
    assert random_feasibility(RandomModelParameters(log_p=-1.0, **base)).conditions["1"]
    assert not random_feasibility(RandomModelParameters(log_p=-40.0, **base)).conditions["1"]


def test_parameter_validation():
    with pytest.raises(ParameterError):
        RandomModelParameters(2, 10.0, -1.0, 0.5, 1.0)
    with pytest.raises(ParameterError):
        RandomModelParameters(5, 10.0, 0.5, 0.5, 1.0)
    with pytest.raises(ParameterError):
        RandomModelParameters(5, 10.0, -1.0, 1.5, 1.0)


def test_pikh_constraints():
    assert pikh_constraints(0.05, 0.05)
    assert pikh_constraints(0.375, 0.09, eps=0.5) == []
    with pytest.raises(ParameterError, match="2\\+delta"):
        pikh_parameters(200, 0.05, 0.05)


@pytest.mark.parametrize("n", [3, 10, 50, 200, 1000])
def test_pikh_recipe_identities(n):
    p = pikh_parameters(n, 0.05, 0.05, validate=False)
    pN = 4 * 1.05 * n * n * math.log(n)
    assert p.log_pN == pytest.approx(math.log(pN), rel=1e-12)
    assert p.log_C == n
    with mpmath.workdps(60 + int(p.log_N / math.log(10))):
        m = mpmath.mpf
        pn = 4 * (1 + m(0.05)) * n * n * mpmath.log(n)
        x = (2 + m(0.05)) / (1 - m(0.05)) * mpmath.exp(n) * (n - 1) * (1 + m(0.05)) ** n * pn ** (n - 2)
        if p.N_int is not None:
            assert p.N_int > x and p.N_int - 1 <= x
            assert p.log_N == pytest.approx(float(mpmath.log(p.N_int)), rel=1e-12)
        else:
            assert p.log_N == pytest.approx(float(mpmath.log(x)), rel=1e-12)


def test_pikh_log_N_far_beyond_float_range():
    p = pikh_parameters(5000, 0.05, 0.05, validate=False)
    assert p.N_int is None and math.isfinite(p.log_N) and p.log_N > 700
    rep = random_feasibility(p)
    assert all(math.isfinite(v) for v in rep.margins.values())


def test_pikh_bound_sanity_above_threshold():
    # log N stays below n ln(4e(1+eps) n^2 ln n) once n is large enough
    eps = 0.5
    delta, c = default_pikh_grid(eps)
    for n in (1000, 5000, 10_000):
        p = pikh_parameters(n, delta, c, eps)
        assert p.log_N <= n * math.log(4 * math.e * (1 + eps) * n * n * math.log(n))


def test_condition4_monotone_in_N_with_pN_fixed():
    for n in (5, 50, 500):
        base = pikh_parameters(n, 0.05, 0.05, validate=False)
        prev = None
        for bump in (0.0, 0.5, 1.0, 5.0, 50.0):
            q = RandomModelParameters(n, base.log_N + bump, base.log_p - bump, base.c, base.log_C)
            m = random_feasibility(q).margins["4"]
            if prev is not None:
                assert m >= prev - 1e-12
            prev = m


def test_default_grid_meets_constraints():
    delta, c = default_pikh_grid(0.5)
    assert pikh_constraints(delta, c, 0.5) == []
    assert not pikh_constraints(delta, c + 0.005, 0.5) == []
    with pytest.raises(ParameterError):
        default_pikh_grid(0.001)


def test_pikh_threshold_reports_failures():
    r = pikh_threshold(0.05, 0.05, n_max=60, validate=False)
    assert r.threshold is None and r.last_failure == 60 and r.failures["2"] > 0


def test_k_constant():
    x, K = minimize_K()
    assert K == pytest.approx(98.8249, abs=1e-3)
    assert x == pytest.approx(4.92155, abs=1e-3)
    assert 0 < k_objective(2) < math.inf and 0 < k_objective(10) < math.inf


def test_k_constant_matches_scipy_and_restarts():
    ref = minimize_scalar(k_objective, bounds=(1.5, 20), method="bounded",
                          options={"xatol": 1e-12})
    for x0 in (1.5, 3, 10, 100):
        x, K = minimize_K(x0)
        assert x == pytest.approx(ref.x, abs=1e-6)
        assert K == pytest.approx(ref.fun, rel=1e-10)


def test_klr_recipe():
    r = klr_parameters(10 ** 5, 0.1)
    p = r.params
    assert p.mode == "plain"
    assert r.K * r.delta < 0.1 and klr_constraint(r.delta, r.c) > 0
    n = 10 ** 5
    assert p.log_N - (4 * math.log(n) + math.log(math.log(n))) == pytest.approx(
        math.log(r.K * (1 + r.delta)), abs=1e-9)
    expected = math.log((1 - r.c) / (2 * r.x_star * (1 + r.c) ** 2))
    assert p.log_p + 2 * math.log(n) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ParameterError):
        klr_parameters(100, 0.0)


def test_erdos_examples():
    assert erdos_lower(3, 5).value == 9
    assert erdos_lower(4, 4).value == 8
    h = 30 * math.log(5)
    up = erdos_upper(4, 4)
    assert up.value == math.ceil(h ** 4) and up.notes["h"] == pytest.approx(48.283, abs=1e-3)
    with pytest.raises(ParameterError):
        erdos_upper(3, 4)


def test_erdos_sweep():
    for k in range(2, 21):
        for g in range(4, 13):
            reports = {r.name: r for r in erdos_bounds(k, g)}
            if "erdos_upper" in reports:
                assert reports["erdos_lower"].log_value <= reports["erdos_upper"].log_value


def test_spencer_is_uncertified():
    r = spencer_bound(10, 6, 2.0)
    assert not r.certified
    m = r.value
    assert m ** (1 / 4) * math.log(m) == pytest.approx(20.0, rel=1e-9)


def test_ir_upper_bounds():
    r = {b.name: b for b in ir_upper_bounds(4)}
    assert r["burr_paths"].value == 4
    assert r["burr_trees_upper"].value == 7
    r3 = {b.name: b for b in ir_upper_bounds(3)}
    assert r3["ramsey_paths_lower"].value == 5
    r2 = {b.name: b for b in ir_upper_bounds(2)}
    assert r2["tower"].value == 4


def test_tower():
    assert tower_bound(3).value == 16
    rows = tower_sizes_check(20)
    assert [a for _, a, _ in rows[:5]] == [1, 2, 6, 42, 1806]
    assert all(ok for _, _, ok in rows)
    assert all(rows[i + 1][1] == rows[i][1] * (rows[i][1] + 1) for i in range(19))


def test_report_json_stringifies_big_ints():
    rep = erdos_upper(20, 12).to_json()
    assert isinstance(rep["value"], str) and int(rep["value"]) > 2 ** 53
