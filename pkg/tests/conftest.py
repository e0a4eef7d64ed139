import pytest

import shocklab as sl


@pytest.fixture(scope="session")
def symmetric_p1():
    params = sl.ShockParams(1.0, -1.0, 1.0)
    prof = sl.build_profile(params, -20.0, 20.0, 2001, tol=1e-12)
    return params, prof


@pytest.fixture(scope="session")
def symmetric_p15():
    params = sl.ShockParams(1.0, -1.0, 1.5)
    prof = sl.build_profile(params, -15.0, 15.0, 1501, tol=1e-12)
    return params, prof


@pytest.fixture(scope="session")
def short_burgers_run(symmetric_p1):
    """A perturbed p=1 run with snapshots, reused by metric/shift tests."""
    params, _ = symmetric_p1
    prof = sl.build_profile(params, -20.0, 20.0, 1001, tol=1e-12)
    init = sl.InitialData(prof, kind="gaussian", amplitude=0.3, width=1.0)
    cfg = sl.SolverConfig(t_end=8.0, output_dt=0.5, frame="co-moving-shift")
    probes = sl.MetricsSchedule(snapshot_times=(0.0, 2.0, 4.0, 8.0))
    series = sl.simulate(init, params, cfg, probes)
    return params, prof, series
