"""Outer minimization over decisions for the worst-case objectives.

Projected subgradient descent over box or simplex feasible sets drives the
general sample-average duals; the Gaussian/linear portfolio objective has a
smooth closed form and is minimized by projected gradient descent with
backtracking.  Solves are pure given their seed and independent across
(seed, radius, method) combinations, so they can run in parallel.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .duals import (
    PortfolioLoss,
    SaaDualProblem,
    UnboundedProblemError,
    envelope_subgradient,
    inner_gamma_opt,
)
from .expfam import (
    ConjugatePosterior,
    MultivariateNormalModel,
    eps_min,
    nominal,
    predictive,
)

__all__ = [
    "Box",
    "Simplex",
    "FeasibleSet",
    "SolveConfig",
    "DualSolution",
    "project",
    "project_simplex",
    "solve_drobas",
    "solve_closed_form_portfolio",
    "minimize_saa_dual",
    "projected_subgradient_minimize",
    "VARIANT_PE",
    "VARIANT_PP",
]

VARIANT_PE = "pe"  # posterior-expected-KL ball, radius reduced by the Jensen gap
VARIANT_PP = "pp"  # predictive-centred KL ball

_CONVERGENCE_WINDOW = 50


# ---------------------------------------------------------------------------
# feasible sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape:
            raise ValueError("lower and upper must have the same shape")
        if np.any(lo > hi):
            raise ValueError("lower bound exceeds upper bound")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, lower: float, upper: float, dim: int) -> "Box":
        return cls(np.full(dim, float(lower)), np.full(dim, float(upper)))

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def project(self, y) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if y.shape[0] != self.dim:
            raise ValueError(f"dimension mismatch: expected {self.dim}, got {y.shape[0]}")
        return np.clip(y, self.lower, self.upper)

    def initial_point(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper)

    def width(self) -> float:
        w = self.upper - self.lower
        finite = w[np.isfinite(w)]
        return float(finite.max()) if finite.size else 1.0


@dataclass(frozen=True)
class Simplex:
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("simplex dimension must be >= 1")

    def project(self, y) -> np.ndarray:
        return project_simplex(y)

    def initial_point(self) -> np.ndarray:
        return np.full(self.dim, 1.0 / self.dim)

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        return rng.dirichlet(np.ones(self.dim))

    def width(self) -> float:
        return 1.0


FeasibleSet = Union[Box, Simplex]


def project_simplex(y) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort algorithm)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    u = np.sort(y)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, y.size + 1)
    cond = u + (1.0 - css) / idx > 0
    rho = int(np.nonzero(cond)[0][-1])
    shift = (1.0 - css[rho]) / (rho + 1.0)
    return np.maximum(y + shift, 0.0)


def project(feasible: FeasibleSet, y) -> np.ndarray:
    """Euclidean projection of y onto the feasible set."""
    return feasible.project(y)


# ---------------------------------------------------------------------------
# configuration and result records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SolveConfig:
    """Projected-subgradient settings.

    The step size at iteration k is ``a / (1 + b * k)``; when ``step_a`` is
    omitted it defaults to (feasible width) / sqrt(max_iters).  Convergence
    is declared when the relative best-objective improvement stays below
    ``tol`` for 50 consecutive iterations.  ``restarts`` descents from
    random feasible points are added after the deterministic one and the
    best result is kept.
    """

    max_iters: int = 400
    tol: float = 1e-6
    step_a: float | None = None
    step_b: float = 0.1
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")

    def step_scale(self, feasible: FeasibleSet) -> float:
        if self.step_a is not None:
            return self.step_a
        return feasible.width() / math.sqrt(max(self.max_iters, 1))


@dataclass(frozen=True)
class DualSolution:
    x_star: np.ndarray
    gamma_star: float
    objective: float
    iterations: int
    converged: bool
    solve_time_s: float
    sample_time_s: float

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x_star, dtype=float)).copy()
        x.flags.writeable = False
        object.__setattr__(self, "x_star", x)

    def equal_ignoring_times(self, other: "DualSolution") -> bool:
        return (
            np.array_equal(self.x_star, other.x_star)
            and self.gamma_star == other.gamma_star
            and self.objective == other.objective
            and self.iterations == other.iterations
            and self.converged == other.converged
        )


# ---------------------------------------------------------------------------
# descent engines
# ---------------------------------------------------------------------------


def projected_subgradient_minimize(
    fun: Callable[[np.ndarray], tuple[float, np.ndarray, float]],
    feasible: FeasibleSet,
    config: SolveConfig,
    rng: np.random.Generator | None = None,
    initial: np.ndarray | None = None,
) -> tuple[np.ndarray, float, float, int, bool]:
    """Best-iterate projected subgradient descent.

    ``fun(x)`` returns ``(value, subgradient, gamma)``.  Steps move along
    the normalized subgradient direction, so the diminishing step size
    controls distance and the schedule is insensitive to the loss scale.
    Returns the best ``(x, value, gamma, iterations, converged)`` across
    the deterministic start (``initial`` or the canonical point) plus
    ``restarts - 1`` random restarts.
    """
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    step_a = config.step_scale(feasible)

    starts = [feasible.project(initial) if initial is not None else feasible.initial_point()]
    for _ in range(config.restarts - 1):
        starts.append(feasible.random_point(rng))

    best_x: np.ndarray | None = None
    best_val = math.inf
    best_gamma = math.nan
    total_iters = 0
    converged_any = False

    for x0 in starts:
        x = np.array(x0, dtype=float)
        val, grad, gamma = fun(x)
        run_best_x, run_best_val, run_best_gamma = x.copy(), val, gamma
        stall = 0
        converged = False
        for k in range(config.max_iters):
            norm = float(np.linalg.norm(grad))
            if norm == 0.0:
                converged = True
                break
            step = step_a / (1.0 + config.step_b * k)
            x = feasible.project(x - step * grad / norm)
            val, grad, gamma = fun(x)
            total_iters += 1
            if val < run_best_val - config.tol * (1.0 + abs(run_best_val)):
                stall = 0
            else:
                stall += 1
            if val < run_best_val:
                run_best_x, run_best_val, run_best_gamma = x.copy(), val, gamma
            if stall >= _CONVERGENCE_WINDOW:
                converged = True
                break
        converged_any = converged_any or converged
        if run_best_val < best_val:
            best_x, best_val, best_gamma = run_best_x, run_best_val, run_best_gamma

    assert best_x is not None
    return best_x, best_val, best_gamma, total_iters, converged_any


def minimize_saa_dual(
    problem: SaaDualProblem,
    feasible: FeasibleSet,
    config: SolveConfig | None = None,
    rng: np.random.Generator | None = None,
    initial: np.ndarray | None = None,
    sample_time_s: float = 0.0,
) -> DualSolution:
    """Minimize the inner-optimized sample-average dual over the feasible set."""
    config = config or SolveConfig()

    def fun(x: np.ndarray) -> tuple[float, np.ndarray, float]:
        inner = inner_gamma_opt(problem, x)
        return inner.value, envelope_subgradient(problem, x, inner), inner.gamma_star

    t0 = time.perf_counter()
    x, val, gamma, iters, converged = projected_subgradient_minimize(
        fun, feasible, config, rng, initial
    )
    solve_time = time.perf_counter() - t0
    return DualSolution(
        x_star=x,
        gamma_star=gamma,
        objective=val,
        iterations=iters,
        converged=converged,
        solve_time_s=solve_time,
        sample_time_s=sample_time_s,
    )


# ---------------------------------------------------------------------------
# public solves
# ---------------------------------------------------------------------------


def solve_drobas(
    posterior_or_samples,
    loss,
    feasible: FeasibleSet,
    epsilon: float,
    variant: str = VARIANT_PE,
    m_samples: int = 1000,
    config: SolveConfig | None = None,
    rng: np.random.Generator | None = None,
    initial: np.ndarray | None = None,
    use_closed_form: bool = True,
) -> DualSolution:
    """Solve the posterior-informed worst-case problem for one radius.

    ``variant='pe'`` centres the ball on the fitted nominal model with the
    radius reduced by the Jensen gap; radii below ``eps_min`` make the
    problem unbounded and raise.  ``variant='pp'`` centres the ball on the
    posterior predictive with the radius used as-is.  Samples are drawn
    once up front and held fixed across iterations (sample-average
    approximation).  A raw sample matrix may be passed instead of a
    posterior, in which case it is used as the nominal sample directly and
    the radius is not shifted.

    With a Gaussian nominal model, a linear portfolio loss and a simplex
    feasible set, the posterior-expected variant is solved through the
    sampling-free closed form unless ``use_closed_form`` is disabled.
    """
    config = config or SolveConfig()
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    variant = variant.lower()
    if variant not in (VARIANT_PE, VARIANT_PP):
        raise ValueError(f"variant must be 'pe' or 'pp', got {variant!r}")

    if isinstance(posterior_or_samples, ConjugatePosterior):
        posterior = posterior_or_samples
        if variant == VARIANT_PE:
            gap = eps_min(posterior)
            if epsilon < gap:
                raise UnboundedProblemError(
                    f"radius {epsilon} is below eps_min {gap}: the worst-case problem is unbounded"
                )
            eps_eff = epsilon - gap
            model = nominal(posterior)
            if (
                use_closed_form
                and isinstance(loss, PortfolioLoss)
                and isinstance(model, MultivariateNormalModel)
                and isinstance(feasible, Simplex)
            ):
                return solve_closed_form_portfolio(
                    model.mean, model.cov, eps_eff, feasible, config, initial=initial
                )
        else:
            if epsilon < 0:
                raise UnboundedProblemError(f"radius must be nonnegative, got {epsilon}")
            eps_eff = epsilon
            model = predictive(posterior)
        t0 = time.perf_counter()
        samples = model.sample(m_samples, rng)
        sample_time = time.perf_counter() - t0
    else:
        samples = np.asarray(posterior_or_samples, dtype=float)
        if epsilon < 0:
            raise UnboundedProblemError(f"radius must be nonnegative, got {epsilon}")
        eps_eff = epsilon
        sample_time = 0.0

    problem = SaaDualProblem(eps_eff=eps_eff, samples=samples, loss=loss)
    return minimize_saa_dual(
        problem, feasible, config, rng, initial=initial, sample_time_s=sample_time
    )


def closed_form_portfolio_value_grad(
    mu_hat: np.ndarray, sigma_hat: np.ndarray, eps_eff: float, x: np.ndarray
) -> tuple[float, np.ndarray]:
    """Portfolio objective -mu.x + sqrt(2 eps_eff) sqrt(x'Sigma x) and gradient."""
    sx = sigma_hat @ x
    q = math.sqrt(max(float(x @ sx), 1e-300))
    coeff = math.sqrt(2.0 * eps_eff)
    value = float(-mu_hat @ x) + coeff * q
    grad = -mu_hat + coeff * sx / q
    return value, grad


def solve_closed_form_portfolio(
    mu_hat,
    sigma_hat,
    eps_eff: float,
    feasible: Simplex,
    config: SolveConfig | None = None,
    initial: np.ndarray | None = None,
) -> DualSolution:
    """Minimize the closed-form Gaussian/linear worst-case return objective.

    Projected gradient descent with backtracking on the smooth objective
    ``-mu.x + sqrt(2 eps_eff) sqrt(x' Sigma x)``; no sampling is involved.
    Convergence is declared when the projected-gradient residual falls
    below ``tol``.  ``x = 0`` is infeasible on the simplex, so the gradient
    is defined everywhere.
    """
    if eps_eff < 0:
        raise UnboundedProblemError(f"effective radius must be nonnegative, got {eps_eff}")
    config = config or SolveConfig()
    mu = np.atleast_1d(np.asarray(mu_hat, dtype=float))
    sigma = np.atleast_2d(np.asarray(sigma_hat, dtype=float))
    if not isinstance(feasible, Simplex):
        raise ValueError("the closed-form portfolio path requires a simplex feasible set")
    if mu.shape[0] != feasible.dim or sigma.shape != (feasible.dim, feasible.dim):
        raise ValueError("dimension mismatch between mu_hat, sigma_hat and the simplex")

    t0 = time.perf_counter()
    x = feasible.project(initial) if initial is not None else feasible.initial_point()
    val, grad = closed_form_portfolio_value_grad(mu, sigma, eps_eff, x)
    step = 1.0
    iters = 0
    converged = False
    for _ in range(config.max_iters):
        iters += 1
        # backtracking on the standard sufficient-decrease model
        while step > 1e-16:
            x_new = feasible.project(x - step * grad)
            diff = x_new - x
            val_new, grad_new = closed_form_portfolio_value_grad(mu, sigma, eps_eff, x_new)
            if val_new <= val + grad @ diff + 0.5 / step * float(diff @ diff) + 1e-15:
                break
            step *= 0.5
        x, val, grad = x_new, val_new, grad_new
        step = min(step * 2.0, 1e8)
        residual = float(np.max(np.abs(x - feasible.project(x - grad))))
        if residual <= config.tol * (1.0 + float(np.linalg.norm(grad))):
            converged = True
            break
    solve_time = time.perf_counter() - t0
    return DualSolution(
        x_star=x,
        gamma_star=math.nan,
        objective=val,
        iterations=iters,
        converged=converged,
        solve_time_s=solve_time,
        sample_time_s=0.0,
    )
