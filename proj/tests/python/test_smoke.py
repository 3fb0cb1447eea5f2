import math

import pytest

try:
    import wptmec as m
except ImportError:  # running against the build tree
    import _core as m


def test_lambert_w0():
    assert m.lambert_w0(0.0) == 0.0
    assert m.lambert_w0(1.0) == pytest.approx(0.5671432904097838, rel=1e-12)
    w = m.lambert_w0(10.0)
    assert w * math.exp(w) == pytest.approx(10.0, rel=1e-12)


def test_closed_form_chain():
    cfg = m.SystemConfig()
    cfg.I = 1
    cfg.W = 1e6
    sol = m.run_baseline(cfg, [m.UserParams()], m.Scheme.local)
    assert sol.allocation[0].a == 1.0
    assert sol.allocation[0].f_u == pytest.approx(1.25e7, rel=1e-12)
    assert sol.allocation[0].P_b == pytest.approx(0.09765625, rel=1e-12)
    assert sol.report.E_total == pytest.approx(7.8125e-3, rel=1e-12)


def test_run_joint_defaults():
    cfg = m.SystemConfig()
    users = [m.UserParams() for _ in range(5)]
    sol = m.run_joint(cfg, users)
    assert sol.converged
    assert all(abs(x.a - 1.0) < 1e-9 for x in sol.allocation.users)
    assert sol.report.E_total == pytest.approx(0.0390625, rel=1e-9)


def test_grid_search_and_kkt():
    cfg = m.SystemConfig()
    cfg.I = 1
    cfg.W = 1e6
    u = m.UserParams()
    u.R = 3e3
    spec = m.GridSpec()
    spec.a_points = 60
    spec.t_points = 60
    sol = m.run_joint(cfg, [u])
    grid = m.grid_search(cfg, [u], spec)
    assert sol.report.E_total == pytest.approx(grid.report.E_total, rel=2e-2)
    kkt = m.kkt_residuals(sol, cfg, [u])
    assert kkt.max_residual <= 1e-4


def test_exceptions():
    cfg = m.SystemConfig()
    cfg.phi = 0.7
    users = []
    for _ in range(5):
        u = m.UserParams()
        u.R = 4.2e3
        users.append(u)
    with pytest.raises(m.Infeasible):
        m.run_baseline(cfg, users, m.Scheme.local)
    bad = m.SystemConfig()
    bad.T = -1.0
    with pytest.raises(m.ValidationError):
        bad.validate()
