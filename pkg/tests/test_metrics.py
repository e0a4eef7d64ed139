import numpy as np
import pytest

import shocklab as sl
from shocklab import metrics
from shocklab.errors import DomainError, FitError
from shocklab.solver import GridState


def state_from(prof, values):
    return GridState(x0=float(prof.xi[0]), dx=prof.dx,
                     values=np.asarray(values, dtype=float), t=0.0,
                     u_minus=prof.params.u_minus, u_plus=prof.params.u_plus)


class TestPerturbationNorm:
    def test_zero_for_aligned(self, symmetric_p1):
        params, prof = symmetric_p1
        st = state_from(prof, prof.U.copy())
        for q in (1.0, 2.0, np.inf):
            assert sl.perturbation_norm(st, prof, 0.0, q) == 0.0

    def test_square_bump(self, symmetric_p1):
        params, prof = symmetric_p1
        h, w = 0.25, 2.0
        bump = np.where(np.abs(prof.xi - 3.0) <= w / 2.0, h, 0.0)
        st = state_from(prof, prof.U + bump)
        dx = prof.dx
        assert abs(sl.perturbation_norm(st, prof, 0.0, 1.0) - h * w) \
            <= 2.0 * dx * h
        assert abs(sl.perturbation_norm(st, prof, 0.0, 2.0) - h * np.sqrt(w)) \
            <= 2.0 * dx * h
        assert sl.perturbation_norm(st, prof, 0.0, np.inf) == h

    def test_interpolation_inequality(self, short_burgers_run):
        # ||w||_2 <= C ||w_x||_{p+1}^theta ||w||_1^(1-theta),
        # theta = (p+1)/(2(2p+1)); C derived from |w|^s <= s int |w|^(s-1)|w'|
        params, prof, series = short_burgers_run
        p = params.p
        theta = (p + 1.0) / (2.0 * (2.0 * p + 1.0))
        C = ((2.0 * p + 1.0) / (p + 1.0)) ** theta
        for t_snap, (xs, us) in series.snapshots.items():
            w = us - prof.U
            l1 = metrics.norm_of_samples(w, prof.dx, 1.0)
            l2 = metrics.norm_of_samples(w, prof.dx, 2.0)
            gw = np.diff(w) / prof.dx
            grad = (prof.dx * np.sum(np.abs(gw) ** (p + 1.0))) ** (1.0 / (p + 1.0))
            if l1 < 1e-12:
                continue
            assert l2 <= 1.05 * C * grad**theta * l1 ** (1.0 - theta)

    def test_misaligned_grid_rejected(self, symmetric_p1):
        params, prof = symmetric_p1
        st = GridState(x0=0.123, dx=prof.dx, values=prof.U.copy(), t=0.0,
                       u_minus=1.0, u_plus=-1.0)
        with pytest.raises(DomainError):
            sl.perturbation_norm(st, prof, 0.0, 2.0)


class TestDissipation:
    def test_zero_when_aligned(self, symmetric_p1):
        params, prof = symmetric_p1
        st = state_from(prof, prof.U.copy())
        assert abs(sl.dissipation(st, prof, 0.0, params.gamma, params)) <= 1e-8

    def test_mean_perturbation_cancellation(self, symmetric_p1):
        # w = c with X' - gamma = c/2: the two y-integral terms cancel
        params, prof = symmetric_p1
        c = 0.21
        st = state_from(prof, prof.U + c)
        D = sl.dissipation(st, prof, 0.0, params.gamma + c / 2.0, params)
        assert abs(D) <= 1e-8

    def test_lower_bound_along_run(self, short_burgers_run):
        params, prof, series = short_burgers_run
        c0 = sl.default_c0(params.p)
        Up_face = metrics.face_profile_slopes(prof)
        for t_snap, (xs, us) in series.snapshots.items():
            k = int(np.argmin(np.abs(series.t - t_snap)))
            D = metrics.dissipation_of_samples(us, prof, Up_face,
                                               series.Xdot[k], params, c0)
            e = np.diff(us) / prof.dx - Up_face
            floor = (5.0 / 3.0) * c0 * prof.dx * np.sum(
                np.abs(e) ** (params.p + 1.0))
            assert D >= floor - 1e-9


class TestWeightedPoincare:
    def test_constant(self):
        lhs, rhs, ok = sl.weighted_poincare_check(
            lambda y: np.ones_like(y), 1.0, -1.0)
        assert ok and lhs <= 1e-14

    def test_linear_exact_values(self):
        lhs, rhs, ok = sl.weighted_poincare_check(lambda y: y, 1.0, -1.0)
        assert ok
        assert lhs == pytest.approx(2.0 / 3.0, abs=1e-6)
        assert rhs == pytest.approx(10.0 / 9.0, abs=1e-6)

    def test_random_trig_polynomials(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            coeffs = rng.standard_normal((2, 5))

            def w(y, c=coeffs):
                out = np.zeros_like(y)
                for m in range(1, 6):
                    ph = np.pi * m * (y + 1.0) / 2.0
                    out += c[0, m - 1] * np.cos(ph) + c[1, m - 1] * np.sin(ph)
                return out

            lhs, rhs, ok = sl.weighted_poincare_check(w, 1.0, -1.0)
            assert ok, f"poincare failed: lhs={lhs} rhs={rhs}"


class TestChangeOfVariables:
    def test_zero_when_aligned(self, symmetric_p1):
        params, prof = symmetric_p1
        st = state_from(prof, prof.U.copy())
        lhs, rhs, gap = sl.change_of_variables_identity(st, prof, 0.0, params)
        assert lhs <= 1e-10 and rhs <= 1e-10

    def test_smooth_perturbation_fine_grid(self):
        params = sl.ShockParams(1.0, -1.0, 1.0)
        prof = sl.build_profile(params, -20.0, 20.0, 4001)
        w = 0.1 * np.exp(-0.5 * prof.xi**2) * np.sin(prof.xi)
        st = state_from(prof, prof.U + w)
        lhs, rhs, gap = sl.change_of_variables_identity(st, prof, 0.0, params)
        assert gap <= 1e-3

    def test_gap_shrinks_under_refinement(self):
        params = sl.ShockParams(1.0, -1.0, 1.0)
        gaps = []
        for n in (1001, 2001, 4001):
            prof = sl.build_profile(params, -20.0, 20.0, n)
            w = 0.1 * np.exp(-0.5 * prof.xi**2) * np.sin(prof.xi)
            st = state_from(prof, prof.U + w)
            gaps.append(sl.change_of_variables_identity(st, prof, 0.0,
                                                        params)[2])
        order = np.log2(gaps[0] / gaps[2]) / 2.0
        assert order >= 1.0


class TestAntiderivative:
    def test_zero(self, symmetric_p1):
        params, prof = symmetric_p1
        st = state_from(prof, prof.U.copy())
        out = sl.antiderivative_norm(st, prof, 2.0)
        assert out.value == 0.0 and out.boundary_residual == 0.0

    def test_gaussian_derivative(self, symmetric_p1):
        # phi = (A e^(-x^2/(2 s^2)))' => Phi is the bump, known L2 norm
        params, prof = symmetric_p1
        A, s = 0.4, 1.3
        x = prof.xi
        phi = A * np.exp(-0.5 * (x / s) ** 2) * (-x / s**2)
        out = metrics.antiderivative_from_samples(phi, prof.dx, 2.0)
        exact = A * np.sqrt(s * np.sqrt(np.pi))
        assert out.value == pytest.approx(exact, abs=2.0 * prof.dx)
        assert out.boundary_residual <= 1e-10

    def test_nonzero_mass_warns(self, symmetric_p1):
        params, prof = symmetric_p1
        st = state_from(prof, prof.U + 0.3 * np.exp(-0.5 * prof.xi**2))
        with pytest.warns(UserWarning, match="zero-mass"):
            sl.antiderivative_norm(st, prof, 2.0)


class TestRateFit:
    def test_exact_power_law(self):
        t = np.linspace(0.0, 2000.0, 801)
        y = 3.0 * (1.0 + t) ** -0.25
        fit = sl.fit_decay_rate(t, y, (200.0, 2000.0), 0.25)
        assert fit.slope == pytest.approx(-0.25, abs=0.01)
        assert fit.C == pytest.approx(3.0, rel=1e-6)
        assert fit.passed

    def test_log_factor_fails_quarter_passes_tenth(self):
        t = np.linspace(0.0, 2000.0, 801)
        y = (1.0 + t) ** -0.125 * np.log(2.0 + t)
        assert not sl.fit_decay_rate(t, y, (200.0, 2000.0), 0.25).passed
        assert sl.fit_decay_rate(t, y, (200.0, 2000.0), 0.10).passed

    def test_too_few_samples(self):
        t = np.linspace(0.0, 10.0, 30)
        with pytest.raises(FitError):
            sl.fit_decay_rate(t, np.ones_like(t), (9.0, 10.0), 0.25)

    def test_nonpositive_norms(self):
        t = np.linspace(0.0, 100.0, 101)
        y = np.ones_like(t)
        y[50] = 0.0
        with pytest.raises(FitError):
            sl.fit_decay_rate(t, y, (10.0, 100.0), 0.25)


class TestTimeSeriesCsv:
    def test_round_trip(self, tmp_path, short_burgers_run):
        _, _, series = short_burgers_run
        path = tmp_path / "ts.csv"
        series.to_csv(path)
        back = metrics.read_timeseries_csv(path)
        for col in metrics.CSV_COLUMNS:
            a, b = series.column(col), back.column(col)
            assert np.array_equal(a[np.isfinite(a)], b[np.isfinite(b)])
