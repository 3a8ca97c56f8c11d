"""Smoke tests for the python bindings: a thin pass over the main operations."""

import math

import pytest

import collapselab as cl


def test_simplex_and_initial_risk():
    u = cl.SimplexVector.uniform(4)
    assert len(u) == 4
    assert u[0] == pytest.approx(0.25)
    assert cl.initial_risk(u, 10) == pytest.approx(0.075)
    with pytest.raises(ValueError):
        cl.SimplexVector([0.5, 0.6])


def test_schedules():
    alpha = cl.AlphaSchedule.make("power-decay", a0=0.5, p=0.5)
    assert cl.alpha_at(alpha, 4) == pytest.approx(0.25)
    n = cl.SampleSizeSchedule.make("polynomial", n0=10, d=2.0)
    assert cl.n_at(n, 3) == 90
    assert cl.improvement_min_sample(11, 0.5) == 15
    report = cl.consistency_diagnostic(alpha, n, 100)
    assert report["verdict"] == "consistency-condition-met-so-far"
    assert "finite-horizon" in report["note"]


def test_analytic_limits():
    assert cl.limit_fixed(0.0, 5, 0.09) == pytest.approx(0.45)
    assert cl.limit_fixed(1.0, 5, 0.09) == pytest.approx(0.09)
    traj = cl.risk_trajectory(
        cl.SimplexVector.uniform(50),
        5,
        cl.AlphaSchedule.make("constant", a0=0.1),
        cl.SampleSizeSchedule.make("constant", n=5),
        500,
    )
    r0 = cl.initial_risk(cl.SimplexVector.uniform(50), 5)
    assert traj.values[-1] == pytest.approx(cl.limit_fixed(0.1, 5, r0), rel=1e-6)
    assert traj.converged


def test_filtered_pieces():
    alpha_tilde, q = cl.filtered_params(0.25, 0.1, 0.2)
    assert q == pytest.approx(0.375)
    assert alpha_tilde == pytest.approx(0.6)
    assert cl.truncated_inverse_moment(2, 0.5) == pytest.approx(5.0 / 6.0)
    assert cl.oracle_type2(0.1, 0.3) == pytest.approx(0.6)


def test_monte_carlo_matches_recurrence():
    config = """
family = "categorical"
K = 10
theta_star = "uniform"
T = 10
reps = 1500
n0 = 20
alpha = {kind="constant", a0=0.3}
n = {kind="constant", n=20}
seed = 7
"""
    traj = cl.run_experiment_config(config, workers=2)
    oracle = cl.analytic_trajectory_config(config)
    report = cl.compare_to_analytic(traj, oracle.values, 4.0)
    assert report["pass"]
    assert traj.reps == 1500
    assert len(traj.mean) == 11


def test_transport_and_gaussian_metrics():
    assert cl.gaussian_w2sq(0.0, 4.0, 0.0, 1.0) == pytest.approx(1.0)
    w1 = cl.mixing_w1([0.0, 2.0], [1.0, 1.0], [0.5, 0.5], [0.0, 3.0], [1.0, 1.0], [0.5, 0.5])
    assert w1 == pytest.approx(0.5, abs=1e-9)


def test_plan_schedule_rows():
    rows = cl.plan_schedule(10, cl.AlphaSchedule.make("power-decay", a0=1.0, p=1.0), 10)
    assert rows[0]["n_min"] == 11.0
    risks = [row["risk"] for row in rows]
    assert all(b < a for a, b in zip(risks, risks[1:]))


def test_trend_and_aggregate():
    traj = cl.aggregate([[1.0, 2.0], [3.0, 2.0]])
    assert traj.mean[0] == pytest.approx(2.0)
    trend = cl.mann_kendall([float(i) + 0.1 * math.sin(i) for i in range(30)])
    assert trend["p_two_sided"] < 0.01
