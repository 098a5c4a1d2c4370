import math

import numpy as np
import pytest

from drobayes.baselines import (
    BdroConfig,
    bdro_gaussian_linear_value_grad,
    bdro_objective,
    solve_bdro,
    solve_bdro_gaussian_linear,
    solve_empirical_kl,
    solve_wasserstein,
    split_sample_budget,
)
from drobayes.duals import (
    NewsvendorLoss,
    PortfolioLoss,
    UnboundedProblemError,
    closed_form_gaussian_linear,
    inner_gamma_opt_batch,
)
from drobayes.expfam import (
    gamma_exponential,
    normal_inverse_wishart,
    posterior_update,
    sample_inverse_wishart,
)
from drobayes.solver import Box, Simplex, SolveConfig


def test_split_sample_budget():
    assert split_sample_budget(100) == (10, 10)
    assert split_sample_budget(900) == (30, 30)
    assert split_sample_budget(30) == (5, 6)
    assert split_sample_budget(7) == (1, 7)


def test_bdro_config_validation():
    with pytest.raises(ValueError):
        BdroConfig(0, 5, 0.1)
    with pytest.raises(UnboundedProblemError):
        BdroConfig(5, 5, -0.1)


def test_bdro_single_theta_bitwise_reduction():
    # one posterior draw collapses the average to a single-nominal dual
    rng = np.random.default_rng(0)
    samples = rng.exponential(15.0, size=(1, 8, 1))
    loss = NewsvendorLoss(3.0, 8.0)
    x = np.array([12.0])
    eps = 0.3
    value, subgrad, gamma = bdro_objective(samples, loss, eps, x)
    sol = inner_gamma_opt_batch(eps, loss.values(x, samples[0]).reshape(1, -1))[0]
    assert value == sol.value
    assert gamma == sol.gamma_star


def test_bdro_zero_radius_is_grand_mean():
    rng = np.random.default_rng(1)
    data = rng.exponential(20.0, 20)
    post = posterior_update(gamma_exponential(1.0, 1.0), data)
    loss = NewsvendorLoss(3.0, 8.0)
    sol = solve_bdro(
        post, loss, Box.cube(0.0, 100.0, 1), BdroConfig(4, 6, 0.0),
        SolveConfig(max_iters=300, seed=0), np.random.default_rng(7),
    )
    # re-draw the same samples to evaluate the grand mean at x_star
    rng2 = np.random.default_rng(7)
    from drobayes.baselines import _draw_bdro_samples

    samples = _draw_bdro_samples(post, BdroConfig(4, 6, 0.0), rng2)
    losses = loss.values(sol.x_star, samples.reshape(-1, 1))
    assert sol.objective == pytest.approx(float(losses.mean()), abs=1e-6)


def test_bdro_objective_matches_separable_grid():
    samples = np.array([[[1.0], [2.0], [3.0]], [[0.5], [1.5], [4.0]]])
    loss = NewsvendorLoss(3.0, 8.0)
    x = np.array([2.0])
    eps = 0.3
    value, _, _ = bdro_objective(samples, loss, eps, x)
    # the two-stage objective is separable across posterior draws: dense
    # 1D grids per Lagrangian at 1e-3 pitch over (0, 100]
    total = 0.0
    for i in range(2):
        f = loss.values(x, samples[i])
        grid = np.arange(1e-3, 100.0 + 1e-9, 1e-3)
        m = f.max()
        vals = grid * (eps - math.log(f.size)) + m + grid * np.log(
            np.exp((f[None, :] - m) / grid[:, None]).sum(axis=1)
        )
        total += float(vals.min())
    assert value == pytest.approx(total / 2.0, abs=1e-4)


def test_bdro_objective_monotone_in_radius():
    rng = np.random.default_rng(2)
    samples = rng.exponential(10.0, size=(5, 6, 1))
    loss = NewsvendorLoss(3.0, 8.0)
    x = np.array([9.0])
    values = [bdro_objective(samples, loss, e, x)[0] for e in (0.0, 0.1, 0.3, 0.9, 2.0)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_bdro_gaussian_linear_identity_with_averaged_covariance():
    mu = np.array([0.01, 0.02, 0.005])
    sigmas = np.stack([np.eye(3) * 0.1, np.eye(3) * 0.3, np.eye(3) * 0.2])
    avg = sigmas.mean(axis=0)
    x = np.array([0.2, 0.5, 0.3])
    eps = 0.4
    value, _ = bdro_gaussian_linear_value_grad(mu, np.stack([avg] * 3), eps, x)
    expect = closed_form_gaussian_linear(-mu, avg, eps, x)
    assert value == pytest.approx(expect, abs=1e-10)


def test_bdro_gaussian_linear_mc_convergence():
    d = 3
    rng = np.random.default_rng(3)
    a = rng.normal(size=(d, d))
    psi = a @ a.T + np.eye(d)
    iota = 9.0
    kappa = iota + d + 2.0
    post = normal_inverse_wishart(rng.normal(size=d) * 0.01, kappa, iota, psi)
    x = np.array([0.3, 0.3, 0.4])
    eps = 0.2

    draws_small = sample_inverse_wishart(psi, iota, 900, np.random.default_rng(11))
    v_small, _ = bdro_gaussian_linear_value_grad(np.asarray(post.params.mu), draws_small, eps, x)
    draws_big = sample_inverse_wishart(psi, iota, 100_000, np.random.default_rng(12))
    sx = np.sqrt(np.einsum("kd,d->k", draws_big @ x, x))
    v_big, _ = bdro_gaussian_linear_value_grad(np.asarray(post.params.mu), draws_big, eps, x)
    se = math.sqrt(2 * eps) * sx.std() / math.sqrt(900)
    assert abs(v_small - v_big) < 3 * se


def test_bdro_gaussian_linear_zero_radius_vertex():
    d = 4
    rng = np.random.default_rng(4)
    psi = np.eye(d)
    post = normal_inverse_wishart(np.array([0.01, 0.04, 0.02, 0.0]), 2.0 * d + 3.0, d + 1.0, psi)
    sol = solve_bdro_gaussian_linear(post, Simplex(d), 0.0, 50,
                                     SolveConfig(max_iters=500), np.random.default_rng(0))
    np.testing.assert_allclose(sol.x_star, [0.0, 1.0, 0.0, 0.0], atol=1e-8)


# ---------------------------------------------------------------------------
# empirical KL
# ---------------------------------------------------------------------------


def test_empirical_kl_zero_radius_is_erm_quantile():
    rng = np.random.default_rng(5)
    data = np.sort(rng.exponential(20.0, 41))
    sol = solve_empirical_kl(
        data, NewsvendorLoss(3.0, 8.0), Box.cube(0.0, 200.0, 1), 0.0,
        SolveConfig(max_iters=1500, seed=0), np.random.default_rng(0),
    )
    # the sample b/(b+h) quantile: optimum lies in the flat region between
    # adjacent order statistics around index ceil(n b/(b+h))
    k = math.ceil(41 * 8.0 / 11.0)
    lo, hi = data[k - 1], data[k]
    assert lo - 0.05 <= sol.x_star[0] <= hi + 0.05


def test_empirical_kl_large_radius_minimizes_max_loss():
    data = np.array([[5.0], [10.0], [30.0]])
    loss = NewsvendorLoss(3.0, 8.0)
    sol = solve_empirical_kl(
        data, loss, Box.cube(0.0, 100.0, 1), math.log(3.0) + 0.5,
        SolveConfig(max_iters=20_000, seed=0, tol=1e-12), np.random.default_rng(0),
    )
    # oracle: dense grid over x of the max-sample loss
    vals = np.array([max(loss.value([x], row) for row in data) for x in np.linspace(10, 30, 20_001)])
    oracle = float(vals.min())
    assert sol.objective == pytest.approx(oracle, abs=2e-2)


def test_empirical_kl_single_datapoint():
    sol = solve_empirical_kl(
        np.array([[7.0]]), NewsvendorLoss(3.0, 8.0), Box.cube(0.0, 100.0, 1), 0.0,
        SolveConfig(max_iters=2000, seed=0), np.random.default_rng(0),
    )
    assert sol.x_star[0] == pytest.approx(7.0, abs=1e-2)
    assert sol.objective == pytest.approx(0.0, abs=0.1)


# ---------------------------------------------------------------------------
# Wasserstein
# ---------------------------------------------------------------------------


def test_wasserstein_zero_radius_matches_empirical_kl():
    rng = np.random.default_rng(6)
    data = rng.exponential(20.0, size=(30, 1))
    kw = dict(loss=NewsvendorLoss(3.0, 8.0), feasible=Box.cube(0.0, 100.0, 1), epsilon=0.0)
    a = solve_wasserstein(data, solve_config=SolveConfig(max_iters=500, seed=0),
                          rng=np.random.default_rng(0), **kw)
    b = solve_empirical_kl(data, solve_config=SolveConfig(max_iters=500, seed=0),
                           rng=np.random.default_rng(0), **kw)
    assert a.x_star == pytest.approx(b.x_star)
    assert a.objective == pytest.approx(b.objective)


def test_wasserstein_newsvendor_objective_identity():
    data = np.array([[5.0], [9.0], [14.0]])
    loss = NewsvendorLoss(3.0, 8.0)
    eps = 0.25
    sol = solve_wasserstein(data, loss, Box.cube(0.0, 100.0, 1), eps,
                            SolveConfig(max_iters=100, seed=0), np.random.default_rng(0))
    empirical = float(loss.values(sol.x_star, data).mean())
    assert sol.objective == pytest.approx(empirical + eps * 8.0, abs=1e-12)


def test_wasserstein_portfolio_matches_random_search():
    rng = np.random.default_rng(7)
    d = 4
    data = rng.normal(0.01, 0.04, size=(60, d))
    eps = 0.02
    sol = solve_wasserstein(
        data, PortfolioLoss(), Simplex(d), eps,
        SolveConfig(max_iters=6000, seed=0, tol=1e-12), np.random.default_rng(0),
    )
    mean = data.mean(axis=0)
    candidates = rng.dirichlet(np.ones(d), size=500_000)
    vals = -(candidates @ mean) + eps * np.linalg.norm(candidates, axis=1)
    assert sol.objective <= float(vals.min()) + 1e-5


def test_wasserstein_negative_radius():
    with pytest.raises(UnboundedProblemError):
        solve_wasserstein(np.ones((3, 1)), NewsvendorLoss(3, 8), Box.cube(0, 10, 1), -0.1)
