import numpy as np
import pytest

import shocklab as sl
from shocklab.shift import ShiftState, advance_shift, mass_shift, shift_rhs
from shocklab.solver import GridState


def state_from(prof, values):
    return GridState(x0=float(prof.xi[0]), dx=prof.dx,
                     values=np.asarray(values, dtype=float), t=0.0,
                     u_minus=prof.params.u_minus, u_plus=prof.params.u_plus)


class TestShiftRhs:
    def test_aligned_gives_gamma(self, symmetric_p15):
        params, prof = symmetric_p15
        st = state_from(prof, prof.U.copy())
        assert shift_rhs(st, prof, 0.0, params) == params.gamma == 0.0

    def test_aligned_gives_gamma_moving(self):
        params = sl.ShockParams(2.0, 0.0, 1.0)
        prof = sl.build_profile(params, -18.0, 18.0, 1441)
        st = state_from(prof, prof.U.copy())
        assert shift_rhs(st, prof, 0.0, params) == pytest.approx(1.0, abs=1e-14)

    def test_constant_offset_mean_identity(self, symmetric_p1):
        # v - U = c => X' = gamma + c/2 (since int U' = u_+ - u_-)
        params, prof = symmetric_p1
        c = 0.17
        st = state_from(prof, prof.U + c)
        rhs = shift_rhs(st, prof, 0.0, params)
        assert rhs == pytest.approx(params.gamma + c / 2.0, abs=1e-8)

    def test_xprest_bound_random(self, symmetric_p15):
        params, prof = symmetric_p15
        rng = np.random.default_rng(11)
        bound_const = params.delta ** (1.0 / params.p - 0.5)
        for _ in range(25):
            w = rng.standard_normal(prof.xi.size) * 0.2
            w[0] = w[-1] = 0.0
            st = state_from(prof, prof.U + w)
            rhs = shift_rhs(st, prof, 0.0, params)
            l2 = sl.perturbation_norm(st, prof, 0.0, 2.0)
            assert abs(rhs - params.gamma) <= bound_const * l2 * (1 + 1e-6)

    def test_domain_exceeded(self, symmetric_p15):
        params, prof = symmetric_p15
        st = state_from(prof, prof.U.copy())
        with pytest.raises(sl.DomainError):
            shift_rhs(st, prof, 1e4, params)


class TestAdvanceShift:
    def test_constant_rhs_exact(self):
        s = ShiftState(X=0.0, Xdot=0.7, t=0.0)
        s = advance_shift(s, 0.7, 0.25)
        assert s.X == 0.7 * 0.25
        assert s.t == 0.25

    def test_steady_gives_gamma_t(self):
        gamma = 0.5
        s = ShiftState(X=0.0, Xdot=gamma, t=0.0)
        dt = 1e-3
        for _ in range(1000):
            s = advance_shift(s, gamma, dt)
        assert s.X == pytest.approx(gamma * 1.0, abs=1e-13)

    def test_second_order_convergence(self):
        # prescribed smooth rhs(t) = cos t, X_exact(T) = sin T
        T = 2.0

        def run(n):
            dt = T / n
            s = ShiftState(X=0.0, Xdot=np.cos(0.0), t=0.0)
            for k in range(n):
                s = advance_shift(s, np.cos((k + 1) * dt), dt)
            return s.X

        errs = [abs(run(n) - np.sin(T)) for n in (64, 128, 256)]
        orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
        assert np.all(orders >= 1.9)


class TestMassShift:
    def test_zero_for_aligned(self, symmetric_p1):
        params, prof = symmetric_p1
        st = state_from(prof, prof.U.copy())
        assert mass_shift(st, prof, params) == pytest.approx(0.0, abs=1e-12)

    def test_known_mass(self, symmetric_p1):
        # gaussian with mass exactly 0.5 => y = 0.5 / (u_- - u_+) = 0.25
        params, prof = symmetric_p1
        width = 0.8
        amp = 0.5 / (width * np.sqrt(2.0 * np.pi))
        bump = amp * np.exp(-0.5 * (prof.xi / width) ** 2)
        st = state_from(prof, prof.U + bump)
        y = mass_shift(st, prof, params)
        assert y == pytest.approx(0.25, abs=1e-6)
        # oracle: quadrature of the shifted difference vanishes
        diff = st.values - prof.exact_at(prof.xi - y)
        resid = np.trapezoid(diff, prof.xi)
        assert abs(resid) <= 1e-8

    def test_pure_translation(self, symmetric_p1):
        params, prof = symmetric_p1
        a = 0.3
        st = state_from(prof, prof.exact_at(prof.xi - a))
        y = mass_shift(st, prof, params)
        assert abs(y - a) <= 2.0 * prof.dx


class TestMeanIdentityAlongRun:
    def test_xdot_equals_gamma_plus_half_mean(self, short_burgers_run):
        params, prof, series = short_burgers_run
        # recompute the mean of w over y from the snapshots and compare
        for t_snap, (xs, us) in series.snapshots.items():
            k = int(np.argmin(np.abs(series.t - t_snap)))
            w = us - prof.U
            wbar = prof.dx * np.dot(w, np.abs(prof.Uprime)) / params.delta
            assert series.Xdot[k] - params.gamma == pytest.approx(
                wbar / 2.0, abs=1e-9)


class TestTranslationEquivariance:
    def test_preshifted_data(self):
        params = sl.ShockParams(1.0, -1.0, 1.0)
        prof = sl.build_profile(params, -20.0, 20.0, 801)
        a = 0.5

        def run(pre_shift):
            xi = prof.xi
            pert = 0.3 * np.exp(-0.5 * (xi + pre_shift) ** 2)
            vals = prof.exact_at(xi + pre_shift) + pert
            cfg = sl.SolverConfig(t_end=60.0, output_dt=10.0,
                                  frame="co-moving-shift")

            class _Fixed(sl.InitialData):
                def perturbation(self_inner):
                    return vals - prof.U

            return sl.simulate(_Fixed(prof), params, cfg)

        base = run(0.0)
        shifted = run(a)
        # the tracker re-aligns: X_a(t) + a -> X(t)
        assert abs(shifted.X[-1] + a - base.X[-1]) <= 2.0 * prof.dx
