import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drobayes.duals import (
    InfiniteNormalizerError,
    NewsvendorLoss,
    PortfolioLoss,
    SaaDualProblem,
    UnboundedProblemError,
    closed_form_gaussian_linear,
    envelope_subgradient,
    exact_dual_1d,
    inner_gamma_opt,
    inner_gamma_opt_batch,
    log_integral_exp,
    loss_subgradient,
    loss_value,
    perspective_lse,
    worst_case_density,
)
from drobayes.expfam import ExponentialModel, LomaxModel, UnivariateNormalModel
from oracles import grid_inner_value


# ---------------------------------------------------------------------------
# losses
# ---------------------------------------------------------------------------


def test_newsvendor_values():
    loss = NewsvendorLoss(3.0, 8.0)
    assert loss_value(loss, [10.0], [4.0]) == pytest.approx(18.0)
    assert loss_value(loss, [4.0], [4.0]) == 0.0
    assert loss_value(loss, [2.0], [5.0]) == pytest.approx(24.0)
    # multivariate: per-dimension costs add up
    assert loss_value(loss, [10.0, 2.0], [4.0, 5.0]) == pytest.approx(18.0 + 24.0)


def test_portfolio_value():
    loss = PortfolioLoss()
    assert loss_value(loss, [0.5, 0.5], [0.02, -0.01]) == pytest.approx(-0.005)


def test_loss_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        loss_value(NewsvendorLoss(3.0, 8.0), [1.0, 2.0], [1.0])
    with pytest.raises(ValueError, match="dimension"):
        PortfolioLoss().values([1.0, 0.0], np.zeros((4, 3)))


def test_newsvendor_subgradient_branches():
    loss = NewsvendorLoss(3.0, 8.0)
    np.testing.assert_allclose(loss_subgradient(loss, [10.0], [4.0]), [3.0])
    np.testing.assert_allclose(loss_subgradient(loss, [4.0], [10.0]), [-8.0])
    np.testing.assert_allclose(loss_subgradient(loss, [4.0], [4.0]), [0.0])


def test_portfolio_subgradient():
    np.testing.assert_allclose(
        loss_subgradient(PortfolioLoss(), [0.3, 0.7], [0.01, 0.02]), [-0.01, -0.02]
    )


def test_loss_subgradient_finite_differences():
    rng = np.random.default_rng(0)
    loss = NewsvendorLoss(3.0, 8.0)
    for _ in range(50):
        d = int(rng.integers(1, 4))
        x = rng.uniform(0, 10, d)
        xi = rng.uniform(0, 10, d)
        g = loss_subgradient(loss, x, xi)
        h = 1e-6
        for k in range(d):
            e = np.zeros(d)
            e[k] = h
            fd = (loss_value(loss, x + e, xi) - loss_value(loss, x - e, xi)) / (2 * h)
            assert fd == pytest.approx(g[k], abs=1e-5)


# ---------------------------------------------------------------------------
# perspective log-sum-exp
# ---------------------------------------------------------------------------


def test_perspective_lse_limit_is_max():
    assert perspective_lse(1e-12, [1.0, 2.0, 3.0]) == 3.0


def test_perspective_lse_closed_form():
    assert perspective_lse(1.0, [0.0, 0.0]) == pytest.approx(math.log(2.0))


def test_perspective_lse_matches_extended_precision():
    rng = np.random.default_rng(1)
    values = rng.normal(0, 5, 50)
    gamma = 0.37
    got = perspective_lse(gamma, values)
    with mpmath.workdps(50):
        total = mpmath.fsum(mpmath.e ** (mpmath.mpf(float(v)) / gamma) for v in values)
        expect = float(gamma * mpmath.log(total))
    assert got == pytest.approx(expect, rel=1e-12)


@given(st.lists(st.floats(-1e4, 1e4), min_size=1, max_size=40))
@settings(max_examples=200, deadline=None)
def test_perspective_lse_floor_fuzz(values):
    assert perspective_lse(1e-12, values) == max(values)
    assert perspective_lse(0.0, values) == max(values)


# ---------------------------------------------------------------------------
# inner minimization
# ---------------------------------------------------------------------------


def _problem(eps_eff, samples, loss=None):
    return SaaDualProblem(
        eps_eff=eps_eff,
        samples=np.asarray(samples, dtype=float).reshape(len(samples), -1),
        loss=loss or NewsvendorLoss(3.0, 8.0),
    )


def test_inner_boundary_max_regime():
    # f = (1, 2), eps = 1 > ln 2: the derivative is positive at 0+
    sol = inner_gamma_opt_batch(1.0, np.array([[1.0, 2.0]]))[0]
    assert sol.gamma_star == 0.0
    assert sol.value == 2.0
    np.testing.assert_allclose(sol.weights, [0.0, 1.0])


def test_inner_mean_regime():
    sol = inner_gamma_opt_batch(0.0, np.array([[1.0, 2.0, 6.0]]))[0]
    assert sol.gamma_star == math.inf
    assert sol.value == pytest.approx(3.0)
    np.testing.assert_allclose(sol.weights, np.full(3, 1 / 3))


def test_inner_interior_matches_grid():
    sol = inner_gamma_opt_batch(0.1, np.array([[0.0, 1.0]]))[0]
    oracle = grid_inner_value(0.1, np.array([0.0, 1.0]))
    assert sol.value == pytest.approx(oracle, abs=1e-8)


def test_inner_oracle_random_instances():
    rng = np.random.default_rng(2)
    for _ in range(60):
        m = int(rng.integers(2, 51))
        f = rng.normal(0, 0.4, m)
        eps = float(rng.uniform(0.05, 0.6 * math.log(m)))
        sol = inner_gamma_opt_batch(eps, f.reshape(1, -1))[0]
        assert sol.value == pytest.approx(grid_inner_value(eps, f), abs=1e-8)


def test_inner_negative_radius_raises():
    with pytest.raises(UnboundedProblemError):
        inner_gamma_opt_batch(-0.1, np.array([[1.0, 2.0]]))


def test_inner_nonfinite_values_raise():
    with pytest.raises(ValueError):
        inner_gamma_opt_batch(0.1, np.array([[1.0, np.inf]]))


def test_inner_weights_sum_to_one_and_positive_interior():
    rng = np.random.default_rng(3)
    for _ in range(200):
        f = rng.normal(0, 1, 20)
        eps = float(rng.uniform(0.01, 1.5))
        sol = inner_gamma_opt_batch(eps, f.reshape(1, -1))[0]
        assert sol.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(sol.weights >= 0)
        if 0.0 < sol.gamma_star < math.inf:
            assert np.all(sol.weights > 0)


def test_inner_monotone_in_radius():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        f = rng.normal(0, 2, int(rng.integers(2, 15)))
        e1, e2 = np.sort(rng.uniform(0, 2, 2))
        v1 = inner_gamma_opt_batch(float(e1), f.reshape(1, -1))[0].value
        v2 = inner_gamma_opt_batch(float(e2), f.reshape(1, -1))[0].value
        assert v2 >= v1 - 1e-10


def test_inner_value_sandwich():
    rng = np.random.default_rng(5)
    for _ in range(300):
        f = rng.normal(0, 3, 12)
        eps = float(rng.uniform(0, 4))
        val = inner_gamma_opt_batch(eps, f.reshape(1, -1))[0].value
        assert f.mean() - 1e-10 <= val <= f.max() + 1e-10
    # upper bound attained in the max regime
    f = np.array([0.0, 1.0, 2.0])
    assert inner_gamma_opt_batch(math.log(3.0) + 0.01, f.reshape(1, -1))[0].value == 2.0


def test_dual_objective_convex_in_gamma():
    rng = np.random.default_rng(6)
    for _ in range(200):
        f = rng.normal(0, 1, 10)
        eps = float(rng.uniform(0.01, 1.0))

        def g(gamma):
            return gamma * (eps - math.log(10)) + perspective_lse(gamma, f)

        g1, g2 = np.sort(rng.uniform(0.01, 5.0, 2))
        assert g(0.5 * (g1 + g2)) <= 0.5 * (g(g1) + g(g2)) + 1e-10


def test_radius_shift_equivalence():
    # a posterior-expected ball of radius eps behaves exactly like a plain
    # KL ball of radius eps - gap around the nominal model: the full solve
    # and the direct reduced-radius solve agree bitwise on the same samples
    from drobayes.expfam import eps_min, gamma_exponential, nominal, posterior_update
    from drobayes.solver import Box, SolveConfig, minimize_saa_dual, solve_drobas

    rng = np.random.default_rng(7)
    post = posterior_update(gamma_exponential(1.0, 1.0), rng.exponential(20.0, 20))
    loss = NewsvendorLoss(3.0, 8.0)
    box = Box.cube(0.0, 100.0, 1)
    eps = 0.3
    cfg = SolveConfig(max_iters=120, seed=0)

    via_pe = solve_drobas(post, loss, box, eps, "pe", m_samples=60,
                          config=cfg, rng=np.random.default_rng(5))
    samples = nominal(post).sample(60, np.random.default_rng(5))
    plain_ball = minimize_saa_dual(
        SaaDualProblem(eps - eps_min(post), samples, loss), box, cfg,
        np.random.default_rng(5),
    )
    assert via_pe.equal_ignoring_times(plain_ball)

    # and the inner solutions at the matched effective radius are identical
    a = inner_gamma_opt(SaaDualProblem(eps - eps_min(post), samples, loss), [15.0])
    b = inner_gamma_opt(SaaDualProblem(eps - eps_min(post), samples.copy(), loss), [15.0])
    assert a.gamma_star == b.gamma_star
    assert a.value == b.value
    assert a.weights.tobytes() == b.weights.tobytes()


# ---------------------------------------------------------------------------
# envelope subgradient
# ---------------------------------------------------------------------------


def test_envelope_single_sample():
    loss = NewsvendorLoss(3.0, 8.0)
    problem = _problem(0.5, [[4.0]], loss)
    x = np.array([10.0])
    inner = inner_gamma_opt(problem, x)
    np.testing.assert_allclose(
        envelope_subgradient(problem, x, inner), loss.subgradient(x, [4.0])
    )


def test_envelope_linear_loss():
    rng = np.random.default_rng(8)
    samples = rng.normal(0.01, 0.05, size=(30, 3))
    problem = SaaDualProblem(0.2, samples, PortfolioLoss())
    x = np.array([0.2, 0.3, 0.5])
    inner = inner_gamma_opt(problem, x)
    np.testing.assert_allclose(
        envelope_subgradient(problem, x, inner),
        -(inner.weights @ samples),
        atol=1e-12,
    )


def test_envelope_matches_finite_differences():
    rng = np.random.default_rng(9)
    loss = NewsvendorLoss(3.0, 8.0)
    for _ in range(30):
        d = int(rng.integers(1, 4))
        samples = rng.normal(10.0, 3.0, size=(25, d))
        eps = float(rng.uniform(0.05, 1.0))
        problem = SaaDualProblem(eps, samples, loss)
        x = rng.uniform(5.0, 15.0, d)
        inner = inner_gamma_opt(problem, x)
        grad = envelope_subgradient(problem, x, inner)
        h = 1e-6
        for k in range(d):
            e = np.zeros(d)
            e[k] = h
            fd = (
                inner_gamma_opt(problem, x + e).value
                - inner_gamma_opt(problem, x - e).value
            ) / (2 * h)
            assert fd == pytest.approx(grad[k], abs=1e-4)


# ---------------------------------------------------------------------------
# closed-form Gaussian/linear dual
# ---------------------------------------------------------------------------


def test_closed_form_simple_cases():
    assert closed_form_gaussian_linear(
        np.zeros(2), np.eye(2), 0.5, np.array([1.0, 0.0])
    ) == pytest.approx(1.0)
    mu = np.array([0.3, -0.2])
    x = np.array([0.4, 0.6])
    assert closed_form_gaussian_linear(mu, np.eye(2), 0.0, x) == pytest.approx(float(mu @ x))


def test_closed_form_negative_radius():
    with pytest.raises(UnboundedProblemError):
        closed_form_gaussian_linear(np.zeros(2), np.eye(2), -1e-9, np.ones(2))


def test_closed_form_vs_saa():
    rng = np.random.default_rng(10)
    d = 3
    a = rng.normal(size=(d, d))
    sigma = a @ a.T + 0.5 * np.eye(d)
    mu = rng.normal(0, 1, d)
    x = rng.uniform(0.1, 1.0, d)
    eps = 0.3
    expect = closed_form_gaussian_linear(mu, sigma, eps, x)
    chol = np.linalg.cholesky(sigma)
    samples = mu + rng.standard_normal((100_000, d)) @ chol.T
    f = samples @ x
    got = inner_gamma_opt_batch(eps, f.reshape(1, -1))[0].value
    assert got == pytest.approx(expect, rel=0.01)


# ---------------------------------------------------------------------------
# worst-case densities
# ---------------------------------------------------------------------------


def test_worst_case_constant_tilt_is_nominal():
    nom = UnivariateNormalModel(1.0, 0.5)
    wc = worst_case_density(nom.log_density, PortfolioLoss(), [0.0], 0.7)
    for t in (-2.0, 0.0, 1.5, 4.0):
        assert wc.logpdf(t) == pytest.approx(nom.log_density(t), abs=1e-10)


def test_worst_case_gaussian_linear_tilt():
    # tilting a Normal by exp(x xi / gamma) shifts the mean by sigma^2 x / gamma
    mu, var, xval, gamma = 1.0, 2.0, 0.7, 0.9
    nom = UnivariateNormalModel(mean=mu, precision=1.0 / var)
    wc = worst_case_density(nom.log_density, PortfolioLoss(), [-xval], gamma)
    shifted = UnivariateNormalModel(mean=mu + var * xval / gamma, precision=1.0 / var)
    for t in (-3.0, 0.0, 2.0, 5.0):
        assert wc.logpdf(t) == pytest.approx(shifted.log_density(t), abs=1e-9)


def test_worst_case_normalizes():
    nom = ExponentialModel(0.4)
    wc = worst_case_density(
        nom.log_density, NewsvendorLoss(3.0, 8.0), [2.0], 30.0, support=(0.0, math.inf)
    )
    assert wc.expectation(lambda t: 1.0) == pytest.approx(1.0, abs=1e-6)


def test_worst_case_requires_positive_gamma():
    nom = UnivariateNormalModel(0.0, 1.0)
    with pytest.raises(ValueError):
        worst_case_density(nom.log_density, NewsvendorLoss(3.0, 8.0), [1.0], 0.0)


def test_worst_case_expectation_matches_dual_value():
    nom = UnivariateNormalModel(mean=2.0, precision=1.0)
    loss = NewsvendorLoss(3.0, 8.0)
    x = [2.3]
    gamma_star, dual = exact_dual_1d(nom.log_density, loss, x, 0.25)
    wc = worst_case_density(nom.log_density, loss, x, gamma_star)
    expect = wc.expectation(lambda t: loss.value(x, t))
    assert expect == pytest.approx(dual, rel=1e-4)


def test_infinite_normalizer_detected():
    # a Lomax nominal cannot absorb a linear gain tilt: power tails lose
    lom = LomaxModel(2.0, 5.0)
    with pytest.raises(InfiniteNormalizerError):
        log_integral_exp(
            lambda t: lom.log_density(t) + 2.0 * t, support=(0.0, math.inf)
        )


def test_log_integral_exp_gaussian_mgf():
    mu, var, t = 1.0, 2.0, 0.8
    nom = UnivariateNormalModel(mean=mu, precision=1.0 / var)
    got = log_integral_exp(lambda s: nom.log_density(s) + t * s)
    assert got == pytest.approx(mu * t + 0.5 * var * t * t, abs=1e-10)
