import numpy as np
import pytest

import shocklab as sl
from shocklab import lemmas
from shocklab.errors import DomainError


class TestOdeDecayExponent:
    def test_example_one(self):
        params = lemmas.RateOdeParams(1.0, 1.0, 0.0, 1.0, 1.0)
        mu, C0 = sl.ode_decay_exponent(params)
        assert mu == 0.5
        assert C0 == 2.0

    def test_example_two(self):
        params = lemmas.RateOdeParams(1.0, 0.0, 0.0, 2.0, 1.0)
        mu, C0 = sl.ode_decay_exponent(params)
        assert mu == pytest.approx(1.0 / 3.0)
        assert C0 == 1.0

    def test_energy_ode_application(self):
        # beta = 2p, alpha = 0, b = 0 and gamma large: mu = 1/(2p), so the
        # squared norm decays (1+t)^(-1/(2p)) and the norm (1+t)^(-1/(4p))
        for p in (1.2, 1.5, 1.8):
            params = lemmas.RateOdeParams(1.0, 0.0, 0.0, 2.0 * p, 10.0)
            mu, _ = sl.ode_decay_exponent(params)
            assert mu == pytest.approx(1.0 / (2.0 * p))

    def test_field_constraints(self):
        with pytest.raises(DomainError):
            lemmas.RateOdeParams(0.0, 1.0, 0.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            lemmas.RateOdeParams(1.0, -1.0, 0.0, 1.0, 1.0)


class TestOdeComparison:
    def test_closed_form_b0(self):
        params = lemmas.RateOdeParams(1.0, 0.0, 0.0, 2.0, 5.0)
        rep = lemmas.ode_comparison_test(params, t_max=100.0, n_steps=10000)
        assert rep["passed"]
        for case in rep["cases"]:
            assert case["closed_form_error"] <= 1e-6

    def test_large_initial_value(self):
        params = lemmas.RateOdeParams(1.0, 1.0, 0.0, 1.0, 1.0)
        rep = lemmas.ode_comparison_test(params, t_max=1000.0)
        assert rep["passed"]
        big = rep["cases"][-1]
        assert big["y0"] == 100.0
        assert big["entry_time"] <= 2.0
        assert big["margin"] >= 0.0

    def test_zero_start(self):
        params = lemmas.RateOdeParams(1.0, 0.0, 0.0, 1.0, 1.0)
        rep = lemmas.ode_comparison_test(params, t_max=50.0,
                                         y0s=(0.0,), n_steps=10000)
        assert rep["passed"]
        assert rep["cases"][0]["entry_time"] == 0.0

    def test_small_lattice(self):
        for alpha in (0.0, 1.0):
            for beta in (0.5, 2.0):
                for gamma in (0.5, 2.0):
                    params = lemmas.RateOdeParams(1.0, 1.0, alpha, beta, gamma)
                    rep = lemmas.ode_comparison_test(params, t_max=200.0,
                                                     n_steps=5000)
                    assert rep["passed"], (alpha, beta, gamma, rep["cases"])


class TestPowerGapRatio:
    def test_case1_origin(self):
        for p in (1.0, 1.5, 2.0):
            assert sl.power_gap_ratio(1.0, 0.0, p, 0.1) \
                == pytest.approx(1.0 / 1.1, rel=1e-14)

    def test_case2_antipodal(self):
        p, c0 = 1.7, 0.05
        expected = 1.0 / (2.0 ** (p - 1.0) * c0 + 1.0)
        assert sl.power_gap_ratio(1.0, -1.0, p, c0) \
            == pytest.approx(expected, rel=1e-14)

    def test_p1_reduces_to_case1_value(self):
        assert sl.power_gap_ratio(2.0, 1.0, 1.0, 0.2) \
            == pytest.approx(5.0 / 6.0, rel=1e-14)

    def test_scale_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            a, b = rng.uniform(-10.0, 10.0, 2)
            if a == b:
                continue
            lam = rng.uniform(1e-2, 1e2)
            r1 = sl.power_gap_ratio(a, b, 1.7, 0.05)
            r2 = sl.power_gap_ratio(lam * a, lam * b, 1.7, 0.05)
            assert r2 == pytest.approx(r1, rel=1e-12)

    def test_equal_args_rejected(self):
        with pytest.raises(DomainError):
            sl.power_gap_ratio(1.0, 1.0, 1.5, 0.1)


class TestScanAbm:
    @pytest.mark.parametrize("p", [1.0, 1.3, 1.6, 1.9])
    def test_passes_below_threshold(self, p):
        report = sl.scan_abm(p, sl.default_c0(p))
        assert report.passed
        assert report.min_ratio >= 5.0 / 6.0 - 1e-9

    def test_p2_fails_with_exact_minimum(self):
        val, theta = lemmas.min_h2_tilde(2.0)
        assert val == pytest.approx(2.0 * (np.sqrt(2.0) - 1.0), abs=1e-6)
        assert theta == pytest.approx(np.sqrt(2.0) - 1.0, abs=1e-6)
        report = sl.scan_abm(2.0, sl.default_c0(2.0))
        assert not report.passed

    def test_p19_tiny_c0_passes(self):
        report = sl.scan_abm(1.9, 1e-6)
        assert report.passed

    def test_random_scan(self):
        rep = sl.scan_abm_random(1.6, sl.default_c0(1.6), n_pairs=20000)
        assert rep["passed"]

    def test_h1_nondecreasing(self):
        theta = np.linspace(0.0, 1.0 - 1e-6, 10001)
        for p in (1.3, 1.6, 1.9):
            vals = lemmas.h1(theta, p, sl.default_c0(p))
            assert np.all(np.diff(vals) >= -1e-9)

    def test_g_strictly_decreasing(self):
        theta = np.linspace(1e-4, 1.0 - 1e-4, 2001)
        for p in (1.2, 1.5, 1.9):
            g = lemmas.g_case2(theta, p, 0.5)
            assert np.all(np.diff(g) < 0.0)


class TestEstimateP0:
    def test_inside_bracket(self):
        p0 = sl.estimate_p0(1e-8)
        assert 39.0 / 20.0 < p0 < 59.0 / 30.0

    def test_bracket_endpoints(self):
        assert lemmas.min_h2_tilde(39.0 / 20.0)[0] > 5.0 / 6.0
        assert lemmas.min_h2_tilde(59.0 / 30.0)[0] < 5.0 / 6.0

    def test_monotone_in_p(self):
        ps = np.linspace(1.9, 2.0, 11)
        mins = [lemmas.min_h2_tilde(p)[0] for p in ps]
        assert np.all(np.diff(mins) <= 1e-12)

    def test_tolerance_guard(self):
        with pytest.raises(DomainError):
            sl.estimate_p0(1e-3)


class TestCheckElementary:
    def test_power_gap_equality_case(self):
        out = sl.check_elementary(1.0, -1.0, 2.0, 0.5)
        assert out["power_gap"]["lhs"] == 4.0
        assert out["power_gap"]["rhs"] == 4.0
        assert out["power_gap"]["ok"]

    def test_concavity_example(self):
        out = sl.check_elementary(4.0, 1.0, 2.0, 0.5)
        assert out["concavity"]["lhs"] == 1.0
        assert out["concavity"]["rhs"] == pytest.approx(np.sqrt(3.0))
        assert out["concavity"]["ok"]

    def test_equal_args(self):
        out = sl.check_elementary(0.7, 0.7, 3.0, 0.3)
        assert out["power_gap"]["lhs"] == 0.0
        assert out["power_gap"]["ok"]

    def test_randomized(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            a, b = rng.uniform(-5.0, 5.0, 2)
            p = rng.uniform(1.0, 4.0)
            out = sl.check_elementary(a, b, p, 1.0)
            assert out["power_gap"]["ok"], (a, b, p)
        for _ in range(200):
            a, b = rng.uniform(0.0, 5.0, 2)
            q = rng.uniform(0.0, 1.0)
            out = sl.check_elementary(a, b, 1.5, q)
            assert out["concavity"]["ok"], (a, b, q)

    def test_c0_ceiling_respects_endpoints(self):
        for p in (1.0, 1.3, 1.6, 1.9, 2.5):
            c0 = sl.default_c0(p)
            assert 0.0 < c0 <= min(0.2, 2.0 ** (1.0 - p) / 5.0)
