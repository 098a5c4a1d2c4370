import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import norm

from drobayes.duals import (
    NewsvendorLoss,
    PortfolioLoss,
    SaaDualProblem,
    UnboundedProblemError,
    inner_gamma_opt,
)
from drobayes.expfam import eps_min, nominal, normal_gamma, normal_inverse_wishart, posterior_update
from drobayes.solver import (
    Box,
    Simplex,
    SolveConfig,
    minimize_saa_dual,
    project,
    project_simplex,
    solve_closed_form_portfolio,
    solve_drobas,
)
from oracles import project_simplex_enumeration


# ---------------------------------------------------------------------------
# projections
# ---------------------------------------------------------------------------


def test_box_projection_clamp():
    box = Box.cube(0.0, 50.0, 1)
    np.testing.assert_allclose(project(box, [-3.0]), [0.0])
    np.testing.assert_allclose(project(box, [60.0]), [50.0])
    np.testing.assert_allclose(project(box, [12.5]), [12.5])


def test_simplex_projection_uniform_shift():
    np.testing.assert_allclose(project_simplex([0.4, 0.2, 0.1]), [0.5, 0.3, 0.2], atol=1e-15)


def test_simplex_projection_matches_enumeration():
    rng = np.random.default_rng(0)
    for _ in range(300):
        d = int(rng.integers(2, 9))
        y = rng.normal(0, 2, d)
        got = project_simplex(y)
        expect = project_simplex_enumeration(y)
        np.testing.assert_allclose(got, expect, atol=1e-9)


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=10))
@settings(max_examples=200, deadline=None)
def test_simplex_projection_is_feasible_and_optimal(y):
    y = np.asarray(y, dtype=float)
    x = project_simplex(y)
    assert np.all(x >= 0)
    assert x.sum() == pytest.approx(1.0, abs=1e-9)
    # no feasible point is closer (spot check against random candidates)
    rng = np.random.default_rng(1)
    base = float(np.sum((y - x) ** 2))
    for _ in range(20):
        z = rng.dirichlet(np.ones(y.size))
        assert base <= np.sum((y - z) ** 2) + 1e-9


def test_projection_dimension_mismatch():
    with pytest.raises(ValueError):
        project(Box.cube(0.0, 1.0, 2), [1.0, 2.0, 3.0])


# ---------------------------------------------------------------------------
# sample-average solves
# ---------------------------------------------------------------------------


def test_pe_at_eps_min_recovers_quantile():
    # at the minimal radius the objective is the plain sample-average risk,
    # minimized at the b/(b+h) quantile of the (unit-variance) nominal law
    post = normal_gamma(5.0, 200.0, 100.0, 100.0)  # nominal N(5, 1)
    rng = np.random.default_rng(0)
    sol = solve_drobas(
        post,
        NewsvendorLoss(3.0, 8.0),
        Box.cube(0.0, 10.0, 1),
        eps_min(post),
        "pe",
        m_samples=100_000,
        config=SolveConfig(max_iters=800, seed=1),
        rng=rng,
    )
    target = 5.0 + nominal(post).sd * norm.ppf(8.0 / 11.0)
    assert abs(sol.x_star[0] - target) < 1e-2


def test_pe_below_eps_min_unbounded():
    post = normal_gamma(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(UnboundedProblemError):
        solve_drobas(post, NewsvendorLoss(3.0, 8.0), Box.cube(0, 10, 1), 0.0, "pe")


def test_max_iters_zero_returns_projected_initial():
    post = normal_gamma(0.0, 1.0, 1.0, 1.0)
    cfg = SolveConfig(max_iters=0, seed=0)
    sol = solve_drobas(
        post, NewsvendorLoss(3.0, 8.0), Box.cube(0.0, 10.0, 1), 1.0, "pe",
        m_samples=50, config=cfg, rng=np.random.default_rng(0),
    )
    np.testing.assert_allclose(sol.x_star, [5.0])  # box midpoint
    assert not sol.converged
    assert np.isfinite(sol.objective)


def test_solve_determinism_bitwise():
    post = posterior_update(normal_gamma(0.0, 1.0, 1.0, 1.0),
                            np.random.default_rng(5).normal(25, 10, 20))
    cfg = SolveConfig(max_iters=120, seed=3)

    def run():
        return solve_drobas(
            post, NewsvendorLoss(3.0, 8.0), Box.cube(0.0, 100.0, 1), 0.5, "pp",
            m_samples=80, config=cfg, rng=np.random.default_rng(42),
        )

    a, b = run(), run()
    assert a.equal_ignoring_times(b)


def test_best_iterate_objective_nonincreasing():
    rng = np.random.default_rng(2)
    samples = rng.normal(20.0, 5.0, size=(60, 1))
    problem = SaaDualProblem(0.2, samples, NewsvendorLoss(3.0, 8.0))
    feasible = Box.cube(0.0, 100.0, 1)
    cfg = SolveConfig(max_iters=200, seed=0)

    # re-run with increasing iteration caps: best objective cannot get worse
    values = []
    for iters in (5, 20, 80, 200):
        sol = minimize_saa_dual(
            problem, feasible, SolveConfig(max_iters=iters, seed=0, step_a=cfg.step_scale(feasible)),
            np.random.default_rng(0),
        )
        values.append(sol.objective)
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_iterates_feasible_and_convex_consistent():
    rng = np.random.default_rng(3)
    samples = rng.exponential(20.0, size=(50, 1))
    problem = SaaDualProblem(0.15, samples, NewsvendorLoss(3.0, 8.0))
    feasible = Box.cube(0.0, 100.0, 1)
    sol = minimize_saa_dual(problem, feasible, SolveConfig(max_iters=400, seed=0),
                            np.random.default_rng(0))
    assert 0.0 <= sol.x_star[0] <= 100.0
    # solved objective beats 1000 random feasible points up to tolerance
    for _ in range(1000):
        z = rng.uniform(0.0, 100.0, 1)
        assert sol.objective <= inner_gamma_opt(problem, z).value + 1e-6 * (1 + abs(sol.objective))


def test_pp_variant_negative_radius():
    post = normal_gamma(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(UnboundedProblemError):
        solve_drobas(post, NewsvendorLoss(3.0, 8.0), Box.cube(0, 10, 1), -0.1, "pp")


def test_solve_accepts_raw_samples():
    rng = np.random.default_rng(4)
    data = rng.exponential(10.0, size=(40, 1))
    sol = solve_drobas(
        data, NewsvendorLoss(3.0, 8.0), Box.cube(0.0, 100.0, 1), 0.1,
        config=SolveConfig(max_iters=150, seed=0), rng=np.random.default_rng(0),
    )
    assert sol.sample_time_s == 0.0
    assert np.isfinite(sol.objective)


# ---------------------------------------------------------------------------
# closed-form portfolio path
# ---------------------------------------------------------------------------


def test_closed_form_portfolio_vertex_at_zero_radius():
    mu = np.array([0.1, 0.5, 0.2])
    sol = solve_closed_form_portfolio(mu, np.eye(3), 0.0, Simplex(3))
    np.testing.assert_allclose(sol.x_star, [0.0, 1.0, 0.0], atol=1e-9)


def test_closed_form_portfolio_symmetric_uniform():
    sol = solve_closed_form_portfolio(np.full(4, 0.3), np.eye(4), 0.5, Simplex(4))
    np.testing.assert_allclose(sol.x_star, np.full(4, 0.25), atol=1e-9)


def test_closed_form_portfolio_beats_random_search():
    rng = np.random.default_rng(5)
    d = 5
    a = rng.normal(size=(d, d))
    sigma = a @ a.T / d + 0.05 * np.eye(d)
    mu = rng.normal(0.05, 0.05, d)
    eps = 0.2
    sol = solve_closed_form_portfolio(
        mu, sigma, eps, Simplex(d), SolveConfig(max_iters=5000, tol=1e-12)
    )

    def objective(x):
        return float(-mu @ x) + math.sqrt(2 * eps) * math.sqrt(float(x @ sigma @ x))

    candidates = rng.dirichlet(np.ones(d), size=1_000_000)
    sx = candidates @ sigma
    vals = -(candidates @ mu) + math.sqrt(2 * eps) * np.sqrt(
        np.einsum("kd,kd->k", sx, candidates)
    )
    oracle = float(vals.min())
    assert sol.objective <= oracle + 1e-6
    assert sol.objective == pytest.approx(objective(sol.x_star), rel=1e-12)


def test_closed_form_route_matches_direct_call():
    rng = np.random.default_rng(6)
    d = 4
    data = rng.normal(0.01, 0.05, size=(60, d))
    prior = normal_inverse_wishart(np.zeros(d), 2.0 * d + 3.0, d + 1.0, np.eye(d))
    post = posterior_update(prior, data)
    eps = eps_min(post) + 0.4
    via_solver = solve_drobas(
        post, PortfolioLoss(), Simplex(d), eps, "pe",
        config=SolveConfig(max_iters=2000), rng=np.random.default_rng(0),
    )
    model = nominal(post)
    direct = solve_closed_form_portfolio(
        model.mean, model.cov, eps - eps_min(post), Simplex(d), SolveConfig(max_iters=2000)
    )
    np.testing.assert_allclose(via_solver.x_star, direct.x_star, atol=1e-6)
    assert via_solver.sample_time_s == 0.0
