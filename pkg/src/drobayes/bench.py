"""Experiment harness: data-generating processes, pipelines, aggregation.

The newsvendor pipeline draws per-seed training and test data, fits the
conjugate posterior, solves each configured method over a radius grid, and
records per-solve test-cost sufficient statistics (sum, sum of squares,
count) from which the out-of-sample mean and total variance are aggregated
exactly.  The portfolio pipeline builds sliding time windows over a weekly
returns matrix and reuses the closed-form and sampling solvers.

Within a (seed, method, sample-count) slice the nominal samples are drawn
once and the radius grid is processed in decreasing order with warm
starts, which makes the reported in-sample objective exactly nondecreasing
in the radius (each solve's start evaluates the previous optimizer).

Cells are embarrassingly parallel with per-cell seeds derived from the
master seed, so reruns are bit-identical apart from timing columns.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .baselines import (
    bdro_objective,
    solve_bdro_gaussian_linear,
    split_sample_budget,
)
from .duals import (
    LossSpec,
    NewsvendorLoss,
    PortfolioLoss,
    SaaDualProblem,
    UnboundedProblemError,
)
from .expfam import (
    ConjugatePosterior,
    eps_min,
    gamma_exponential,
    nominal,
    normal_gamma,
    normal_inverse_wishart,
    posterior_update,
    predictive,
    sample_likelihood,
    sample_posterior_params,
)
from .solver import (
    Box,
    DualSolution,
    FeasibleSet,
    Simplex,
    SolveConfig,
    minimize_saa_dual,
    projected_subgradient_minimize,
    solve_closed_form_portfolio,
)

__all__ = [
    "ExponentialDgp",
    "NormalDgp",
    "TruncatedNormalDgp",
    "ContaminatedExponentialDgp",
    "MultivariateNormalDgp",
    "DgpSpec",
    "sample_dgp",
    "default_prior_for",
    "OosRecord",
    "OosSummary",
    "NewsvendorConfig",
    "PortfolioConfig",
    "run_newsvendor",
    "run_portfolio",
    "build_windows",
    "oos_summary",
    "pareto_front",
    "CvRow",
    "crossval_epsilon",
    "log_spaced_epsilons",
    "write_results_csv",
    "write_summary_csv",
    "write_returns_csv",
    "read_returns_csv",
    "METHODS",
    "SELECTION_RULES",
]

METHODS = ("pe", "pp", "bdro", "kl", "wasserstein")
SELECTION_RULES = ("min-mean", "min-var", "mean-plus-std-half")

_DATA_TAG = 11
_SOLVE_TAG = 13


# ---------------------------------------------------------------------------
# data-generating processes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentialDgp:
    rate: float

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("rate must be positive")

    label = "exponential"
    dim = 1

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.exponential(1.0 / self.rate, size=(count, 1))


@dataclass(frozen=True)
class NormalDgp:
    mean: float
    sd: float

    def __post_init__(self):
        if self.sd <= 0:
            raise ValueError("sd must be positive")

    label = "normal"
    dim = 1

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.normal(self.mean, self.sd, size=(count, 1))


@dataclass(frozen=True)
class TruncatedNormalDgp:
    """Normal truncated to [lower, inf); mean/sd parametrize the parent Normal."""

    mean: float
    sd: float
    lower: float = 0.0

    def __post_init__(self):
        if self.sd <= 0:
            raise ValueError("sd must be positive")

    label = "truncated-normal"
    dim = 1

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        out = np.empty(count)
        filled = 0
        while filled < count:
            draw = rng.normal(self.mean, self.sd, size=max(2 * (count - filled), 16))
            accepted = draw[draw >= self.lower]
            take = min(accepted.size, count - filled)
            out[filled : filled + take] = accepted[:take]
            filled += take
        return out.reshape(count, 1)


@dataclass(frozen=True)
class ContaminatedExponentialDgp:
    """Exponential base with an independent per-draw Normal contamination."""

    rate: float
    contam_mean: float = 100.0
    contam_sd: float = 0.5
    contam_frac: float = 0.2

    def __post_init__(self):
        if self.rate <= 0 or self.contam_sd <= 0:
            raise ValueError("rate and contam_sd must be positive")
        if not 0.0 <= self.contam_frac <= 1.0:
            raise ValueError("contam_frac must lie in [0, 1]")

    label = "contaminated-exponential"
    dim = 1

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        mask = rng.random(count) < self.contam_frac
        base = rng.exponential(1.0 / self.rate, size=count)
        contam = rng.normal(self.contam_mean, self.contam_sd, size=count)
        return np.where(mask, contam, base).reshape(count, 1)


@dataclass(frozen=True)
class MultivariateNormalDgp:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        if cov.shape != (mean.size, mean.size):
            raise ValueError("mean/cov dimension mismatch")
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    label = "mvnormal"

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        chol = np.linalg.cholesky(self.cov)
        return self.mean + rng.standard_normal((count, self.dim)) @ chol.T


DgpSpec = Union[
    ExponentialDgp,
    NormalDgp,
    TruncatedNormalDgp,
    ContaminatedExponentialDgp,
    MultivariateNormalDgp,
]


def sample_dgp(spec: DgpSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a (count, D) sample matrix from the data-generating process."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return spec.sample(count, rng)


def default_prior_for(dgp: DgpSpec) -> ConjugatePosterior:
    """Prior hyperparameters used by the benchmark configurations."""
    if isinstance(dgp, (ExponentialDgp, ContaminatedExponentialDgp)):
        return gamma_exponential(1.0, 1.0)
    if isinstance(dgp, (NormalDgp, TruncatedNormalDgp)):
        return normal_gamma(0.0, 1.0, 1.0, 1.0)
    d = dgp.dim
    iota0 = d + 1.0
    return normal_inverse_wishart(np.zeros(d), iota0 + d + 2.0, iota0, np.eye(d))


def log_spaced_epsilons(lo: float, hi: float, count: int) -> tuple[float, ...]:
    """Logarithmically spaced radius grid, endpoints inclusive."""
    if not (0 < lo < hi) or count < 2:
        raise ValueError("need 0 < lo < hi and count >= 2")
    return tuple(float(e) for e in np.geomspace(lo, hi, count))


# ---------------------------------------------------------------------------
# records and aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OosRecord:
    """Per-solve record with test-cost sufficient statistics."""

    method: str
    dgp: str
    seed: int
    epsilon: float
    m_samples: int
    n_train: int
    objective: float | None
    solve_time_s: float
    sample_time_s: float
    sum_cost: float | None
    sum_sq_cost: float | None
    t_test: int
    skipped: bool
    x_star: np.ndarray | None


@dataclass(frozen=True)
class OosSummary:
    method: str
    epsilon: float
    m: float
    v: float
    pareto: bool


def oos_summary(records: Sequence[OosRecord]) -> list[OosSummary]:
    """Aggregate out-of-sample mean and total variance per (method, epsilon).

    Exact aggregation from the per-record sufficient statistics:
    ``m = sum(cost) / (J T)`` and ``v = (sum(cost^2) - J T m^2) / (J T - 1)``.
    Rows on the joint mean-variance Pareto front are flagged.
    """
    groups: dict[tuple[str, float], list[OosRecord]] = {}
    for rec in records:
        if rec.skipped:
            continue
        groups.setdefault((rec.method, rec.epsilon), []).append(rec)

    rows = []
    for (method, epsilon), recs in sorted(groups.items()):
        t = recs[0].t_test
        if any(r.t_test != t for r in recs):
            raise ValueError(f"t_test not uniform within group {(method, epsilon)}")
        total = sum(r.t_test for r in recs)
        if total <= 1:
            raise ValueError("variance undefined: need more than one test cost in total")
        s = sum(r.sum_cost for r in recs)
        ss = sum(r.sum_sq_cost for r in recs)
        m = s / total
        v = (ss - total * m * m) / (total - 1)
        rows.append((method, epsilon, m, max(v, 0.0)))

    mask = pareto_front([(m, v) for (_, _, m, v) in rows])
    return [
        OosSummary(method, epsilon, m, v, bool(flag))
        for (method, epsilon, m, v), flag in zip(rows, mask)
    ]


def pareto_front(points: Sequence[tuple[float, float]]) -> list[bool]:
    """Keep a point iff no other point is strictly smaller in both coordinates."""
    kept = []
    for i, (mi, vi) in enumerate(points):
        dominated = any(
            (mj < mi and vj < vi) for j, (mj, vj) in enumerate(points) if j != i
        )
        kept.append(not dominated)
    return kept


# ---------------------------------------------------------------------------
# method dispatch shared by the pipelines and cross-validation
# ---------------------------------------------------------------------------


def _method_index(method: str) -> int:
    try:
        return METHODS.index(method)
    except ValueError:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}") from None


def _draw_method_samples(
    method: str,
    posterior: ConjugatePosterior,
    m_samples: int,
    rng: np.random.Generator,
):
    """Slice-level nominal sampling, fixed across the radius grid."""
    if method == "pe":
        return nominal(posterior).sample(m_samples, rng)
    if method == "pp":
        return predictive(posterior).sample(m_samples, rng)
    if method == "bdro":
        m_theta, m_xi = split_sample_budget(m_samples)
        fam = posterior.family
        out = np.empty((m_theta, m_xi, posterior.dim))
        thetas = sample_posterior_params(posterior, m_theta, rng)
        for i in range(m_theta):
            theta_i = tuple(t[i] for t in thetas) if isinstance(thetas, tuple) else thetas[i]
            out[i] = sample_likelihood(fam, theta_i, m_xi, rng)
        return out
    return None  # empirical methods use the training data directly


def _solve_cell(
    method: str,
    posterior: ConjugatePosterior,
    train: np.ndarray,
    loss: LossSpec,
    feasible: FeasibleSet,
    epsilon: float,
    samples,
    solve_config: SolveConfig,
    rng: np.random.Generator,
    initial: np.ndarray | None,
) -> DualSolution | None:
    """One (method, epsilon) solve on pre-drawn samples; None marks a skip."""
    if method == "pe":
        gap = eps_min(posterior)
        if epsilon < gap:
            return None
        problem = SaaDualProblem(eps_eff=epsilon - gap, samples=samples, loss=loss)
        return minimize_saa_dual(problem, feasible, solve_config, rng, initial=initial)
    if method == "pp":
        problem = SaaDualProblem(eps_eff=epsilon, samples=samples, loss=loss)
        return minimize_saa_dual(problem, feasible, solve_config, rng, initial=initial)
    if method == "bdro":
        def fun(x: np.ndarray):
            return bdro_objective(samples, loss, epsilon, x)

        t0 = time.perf_counter()
        x, val, gamma, iters, converged = projected_subgradient_minimize(
            fun, feasible, solve_config, rng, initial
        )
        return DualSolution(
            x_star=x,
            gamma_star=gamma,
            objective=val,
            iterations=iters,
            converged=converged,
            solve_time_s=time.perf_counter() - t0,
            sample_time_s=0.0,
        )
    if method == "kl":
        problem = SaaDualProblem(eps_eff=epsilon, samples=train, loss=loss)
        return minimize_saa_dual(problem, feasible, solve_config, rng, initial=initial)
    if method == "wasserstein":
        from .baselines import solve_wasserstein

        return solve_wasserstein(train, loss, feasible, epsilon, solve_config, rng, initial)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# newsvendor pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NewsvendorConfig:
    dgp: DgpSpec
    prior: ConjugatePosterior
    loss: NewsvendorLoss
    feasible: Box
    methods: tuple[str, ...]
    epsilons: tuple[float, ...]
    m_samples: tuple[int, ...]
    j_seeds: int
    n_train: int = 20
    t_test: int = 50
    seed: int = 0
    solver: SolveConfig = field(default_factory=SolveConfig)
    threads: int = 1

    def __post_init__(self):
        if not self.methods or not self.epsilons or not self.m_samples:
            raise ValueError("methods, epsilons and m_samples must be nonempty")
        for m in self.methods:
            _method_index(m)
        if self.j_seeds < 1 or self.n_train < 1 or self.t_test < 1:
            raise ValueError("j_seeds, n_train and t_test must be >= 1")


def _newsvendor_slice(
    config: NewsvendorConfig, j: int, method: str, m_samples: int
) -> list[OosRecord]:
    """All radius solves for one (seed, method, sample count) slice."""
    data_rng = np.random.default_rng(np.random.SeedSequence([config.seed, _DATA_TAG, j]))
    train = sample_dgp(config.dgp, config.n_train, data_rng)
    test = sample_dgp(config.dgp, config.t_test, data_rng)
    posterior = posterior_update(config.prior, train)

    slice_rng = np.random.default_rng(
        np.random.SeedSequence([config.seed, _SOLVE_TAG, j, _method_index(method), m_samples])
    )
    t0 = time.perf_counter()
    samples = _draw_method_samples(method, posterior, m_samples, slice_rng)
    sample_time = time.perf_counter() - t0

    solved = sum(
        1 for eps in config.epsilons if not (method == "pe" and eps < eps_min(posterior))
    )
    sample_share = sample_time / max(solved, 1)

    records: list[OosRecord] = []
    initial = None
    # decreasing radii with warm starts keep the objective exactly monotone
    for eps in sorted(config.epsilons, reverse=True):
        solution = _solve_cell(
            method,
            posterior,
            train,
            config.loss,
            config.feasible,
            eps,
            samples,
            config.solver,
            slice_rng,
            initial,
        )
        if solution is None:
            records.append(
                OosRecord(
                    method=method,
                    dgp=config.dgp.label,
                    seed=j,
                    epsilon=eps,
                    m_samples=m_samples,
                    n_train=config.n_train,
                    objective=None,
                    solve_time_s=0.0,
                    sample_time_s=0.0,
                    sum_cost=None,
                    sum_sq_cost=None,
                    t_test=config.t_test,
                    skipped=True,
                    x_star=None,
                )
            )
            continue
        initial = solution.x_star
        costs = config.loss.values(solution.x_star, test)
        records.append(
            OosRecord(
                method=method,
                dgp=config.dgp.label,
                seed=j,
                epsilon=eps,
                m_samples=m_samples,
                n_train=config.n_train,
                objective=solution.objective,
                solve_time_s=solution.solve_time_s,
                sample_time_s=sample_share,
                sum_cost=float(costs.sum()),
                sum_sq_cost=float((costs**2).sum()),
                t_test=config.t_test,
                skipped=False,
                x_star=solution.x_star,
            )
        )
    records.sort(key=lambda r: r.epsilon)
    return records


def run_newsvendor(config: NewsvendorConfig) -> list[OosRecord]:
    """Run the newsvendor experiment grid; one record per (method, eps, M, seed)."""
    slices = [
        (j, method, m)
        for j in range(config.j_seeds)
        for method in config.methods
        for m in config.m_samples
    ]
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            chunks = list(pool.map(lambda s: _newsvendor_slice(config, *s), slices))
    else:
        chunks = [_newsvendor_slice(config, *s) for s in slices]
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda r: (r.method, r.m_samples, r.epsilon, r.seed))
    return records


# ---------------------------------------------------------------------------
# portfolio pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PortfolioConfig:
    methods: tuple[str, ...]
    epsilons: tuple[float, ...]
    prior: ConjugatePosterior | None = None
    n_train: int = 52
    t_test: int = 12
    m_pp: int = 3600
    m_theta: int = 900
    seed: int = 0
    solver: SolveConfig = field(default_factory=SolveConfig)
    threads: int = 1
    psi_scale: float = 1.0

    def __post_init__(self):
        for m in self.methods:
            if m not in ("pe", "pp", "bdro"):
                raise ValueError(f"portfolio methods must be pe/pp/bdro, got {m!r}")
        if not self.epsilons:
            raise ValueError("epsilons must be nonempty")


def build_windows(n_rows: int, n_train: int, t_test: int) -> list[tuple[range, range]]:
    """Sliding train/test windows: window j trains on rows
    [t_test * j, t_test * j + n_train) and tests on the following t_test rows."""
    count = (n_rows - n_train) // t_test
    windows = []
    for j in range(count):
        start = t_test * j
        train = range(start, start + n_train)
        test = range(start + n_train, start + n_train + t_test)
        windows.append((train, test))
    return windows


def _portfolio_prior(config: PortfolioConfig, dim: int) -> ConjugatePosterior:
    if config.prior is not None:
        return config.prior
    iota0 = dim + 1.0
    return normal_inverse_wishart(
        np.zeros(dim), iota0 + dim + 2.0, iota0, config.psi_scale * np.eye(dim)
    )


def _portfolio_window(
    config: PortfolioConfig,
    returns: np.ndarray,
    j: int,
    train_rows: range,
    test_rows: range,
) -> tuple[list[OosRecord], list[tuple[int, str, float, float]]]:
    train = returns[list(train_rows)]
    test = returns[list(test_rows)]
    dim = returns.shape[1]
    loss = PortfolioLoss()
    feasible = Simplex(dim)
    prior = _portfolio_prior(config, dim)
    posterior = posterior_update(prior, train)

    records: list[OosRecord] = []
    series: list[tuple[int, str, float, float]] = []
    for method in config.methods:
        rng = np.random.default_rng(
            np.random.SeedSequence([config.seed, _SOLVE_TAG, j, _method_index(method)])
        )
        for eps in config.epsilons:
            skipped = False
            solution = None
            if method == "pe":
                gap = eps_min(posterior)
                if eps < gap:
                    skipped = True
                else:
                    model = nominal(posterior)
                    solution = solve_closed_form_portfolio(
                        model.mean, model.cov, eps - gap, feasible, config.solver
                    )
            elif method == "bdro":
                solution = solve_bdro_gaussian_linear(
                    posterior, feasible, eps, config.m_theta, config.solver, rng
                )
            else:
                t0 = time.perf_counter()
                samples = predictive(posterior).sample(config.m_pp, rng)
                sample_time = time.perf_counter() - t0
                problem = SaaDualProblem(eps_eff=eps, samples=samples, loss=loss)
                solution = minimize_saa_dual(
                    problem, feasible, config.solver, rng, sample_time_s=sample_time
                )
            if skipped:
                records.append(
                    OosRecord(
                        method=method,
                        dgp="portfolio",
                        seed=j,
                        epsilon=eps,
                        m_samples=config.m_pp if method == "pp" else config.m_theta,
                        n_train=config.n_train,
                        objective=None,
                        solve_time_s=0.0,
                        sample_time_s=0.0,
                        sum_cost=None,
                        sum_sq_cost=None,
                        t_test=config.t_test,
                        skipped=True,
                        x_star=None,
                    )
                )
                continue
            costs = loss.values(solution.x_star, test)
            records.append(
                OosRecord(
                    method=method,
                    dgp="portfolio",
                    seed=j,
                    epsilon=eps,
                    m_samples=config.m_pp if method == "pp" else config.m_theta,
                    n_train=config.n_train,
                    objective=solution.objective,
                    solve_time_s=solution.solve_time_s,
                    sample_time_s=solution.sample_time_s,
                    sum_cost=float(costs.sum()),
                    sum_sq_cost=float((costs**2).sum()),
                    t_test=config.t_test,
                    skipped=False,
                    x_star=solution.x_star,
                )
            )
            weekly = test @ solution.x_star
            for offset, r in enumerate(weekly):
                series.append((test_rows.start + offset, method, eps, float(r)))
    return records, series


def run_portfolio(
    config: PortfolioConfig, returns: np.ndarray
) -> tuple[list[OosRecord], list[tuple[int, str, float, float]]]:
    """Run the sliding-window portfolio experiment.

    Returns the per-window records plus a long-format weekly return series
    ``(week, method, epsilon, portfolio_return)`` for the test weeks,
    suitable for cumulative-return plots.
    """
    returns = np.asarray(returns, dtype=float)
    if returns.ndim != 2:
        raise ValueError("returns must be a (weeks, assets) matrix")
    if returns.shape[0] < config.n_train + config.t_test:
        raise ValueError("not enough rows for a single train/test window")
    windows = build_windows(returns.shape[0], config.n_train, config.t_test)

    tasks = list(enumerate(windows))
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(
                pool.map(lambda t: _portfolio_window(config, returns, t[0], *t[1]), tasks)
            )
    else:
        results = [_portfolio_window(config, returns, j, *w) for j, w in tasks]

    records = [rec for recs, _ in results for rec in recs]
    series = [row for _, rows in results for row in rows]
    records.sort(key=lambda r: (r.method, r.epsilon, r.seed))
    series.sort(key=lambda r: (r[1], r[2], r[0]))
    return records, series


# ---------------------------------------------------------------------------
# cross-validation over the radius
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CvRow:
    epsilon: float
    cv_mean: float
    cv_var: float
    cv_std: float
    feasible: bool


def crossval_epsilon(
    data,
    loss: LossSpec,
    method: str,
    candidate_eps: Sequence[float],
    folds: int = 10,
    selection: str = "min-mean",
    prior: ConjugatePosterior | None = None,
    feasible: FeasibleSet | None = None,
    m_samples: int = 100,
    solve_config: SolveConfig | None = None,
    seed: int = 0,
) -> tuple[float, list[CvRow]]:
    """K-fold cross-validation over the radius grid.

    For each candidate radius, every fold is held out in turn, the method
    is fitted on the remaining folds, and the per-validation-point costs
    are pooled across folds into a CV mean/variance/standard deviation.
    The radius minimizing the selection rule is returned (smallest radius
    on ties); radii infeasible on any fold are excluded.
    """
    if selection not in SELECTION_RULES:
        raise ValueError(f"selection must be one of {SELECTION_RULES}")
    _method_index(method)
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data.reshape(-1, 1)
    n = data.shape[0]
    if folds < 2:
        raise ValueError("folds must be >= 2")
    if n < folds:
        raise ValueError("need at least one observation per fold")
    solve_config = solve_config or SolveConfig()
    if feasible is None:
        feasible = Box.cube(0.0, 100.0, data.shape[1])

    perm = np.random.default_rng(np.random.SeedSequence([seed, _DATA_TAG])).permutation(n)
    fold_indices = np.array_split(perm, folds)

    candidates = sorted(float(e) for e in candidate_eps)
    rows: list[CvRow] = []
    for eps_idx, eps in enumerate(candidates):
        pooled: list[np.ndarray] = []
        feasible_eps = True
        for k, val_idx in enumerate(fold_indices):
            train_idx = np.setdiff1d(perm, val_idx, assume_unique=True)
            train = data[train_idx]
            val = data[val_idx]
            posterior = posterior_update(prior, train) if prior is not None else None
            if method == "pe" and posterior is not None and eps < eps_min(posterior):
                feasible_eps = False
                break
            rng = np.random.default_rng(
                np.random.SeedSequence([seed, _SOLVE_TAG, eps_idx, k, _method_index(method)])
            )
            samples = (
                _draw_method_samples(method, posterior, m_samples, rng)
                if method in ("pe", "pp", "bdro")
                else None
            )
            solution = _solve_cell(
                method, posterior, train, loss, feasible, eps, samples, solve_config, rng, None
            )
            if solution is None:
                feasible_eps = False
                break
            pooled.append(loss.values(solution.x_star, val))
        if not feasible_eps:
            rows.append(CvRow(eps, math.nan, math.nan, math.nan, False))
            continue
        costs = np.concatenate(pooled)
        mean = float(costs.mean())
        var = float(costs.var(ddof=1)) if costs.size > 1 else 0.0
        rows.append(CvRow(eps, mean, var, math.sqrt(var), True))

    def score(row: CvRow) -> float:
        if selection == "min-mean":
            return row.cv_mean
        if selection == "min-var":
            return row.cv_var
        return 0.5 * (row.cv_mean + row.cv_std)

    usable = [r for r in rows if r.feasible]
    if not usable:
        raise UnboundedProblemError("no feasible radius among the candidates")
    best = min(usable, key=lambda r: (score(r), r.epsilon))
    return best.epsilon, rows


# ---------------------------------------------------------------------------
# CSV input/output
# ---------------------------------------------------------------------------

RESULTS_COLUMNS = (
    "method",
    "dgp",
    "seed",
    "epsilon",
    "m_samples",
    "n_train",
    "objective",
    "solve_time_s",
    "sample_time_s",
    "sum_cost",
    "sum_sq_cost",
    "t_test",
    "skipped",
    "x_star",
)

SUMMARY_COLUMNS = ("method", "epsilon", "oos_mean", "oos_var", "on_pareto")

RETURNS_COLUMNS = ("week", "method", "epsilon", "weekly_return")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def write_results_csv(records: Sequence[OosRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_COLUMNS)
        for r in records:
            x_star = ";".join(repr(float(v)) for v in r.x_star) if r.x_star is not None else ""
            writer.writerow(
                [
                    r.method,
                    r.dgp,
                    r.seed,
                    _fmt(r.epsilon),
                    r.m_samples,
                    r.n_train,
                    _fmt(r.objective),
                    _fmt(r.solve_time_s),
                    _fmt(r.sample_time_s),
                    _fmt(r.sum_cost),
                    _fmt(r.sum_sq_cost),
                    r.t_test,
                    str(r.skipped).lower(),
                    x_star,
                ]
            )


def write_summary_csv(summaries: Sequence[OosSummary], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for s in summaries:
            writer.writerow(
                [s.method, _fmt(s.epsilon), _fmt(s.m), _fmt(s.v), str(s.pareto).lower()]
            )


def write_returns_csv(series: Sequence[tuple[int, str, float, float]], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RETURNS_COLUMNS)
        for week, method, eps, ret in series:
            writer.writerow([week, method, _fmt(eps), _fmt(ret)])


def read_returns_csv(path) -> np.ndarray:
    """Ingest a weekly returns matrix: header of tickers, one row per week."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty returns file") from None
        rows = []
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"{path}: row {i} has {len(row)} columns, expected {len(header)}"
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise ValueError(f"{path}: row {i} is not numeric: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)
