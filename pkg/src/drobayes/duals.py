"""Dual objectives of the KL worst-case risk and their inner minimization.

For a nominal sample ``xi_1..xi_M``, loss values ``f_i = f_x(xi_i)`` and an
effective radius ``eps_eff >= 0``, the sample-average dual of the worst-case
expected loss over a KL ball is

    g(gamma) = gamma * eps_eff + gamma * ln( (1/M) * sum_i exp(f_i / gamma) )

minimized over ``gamma in [0, inf]``.  ``g`` is convex with strictly
increasing derivative

    g'(gamma) = eps_eff + ln((1/M) sum_i e^{f_i/gamma}) - (1/gamma) sum_i w_i f_i

where ``w_i`` are the softmax weights of ``f/gamma``; the interior minimizer
is found by bisection on ``g'``.  Boundary regimes: as ``gamma -> 0`` the
perspective of log-sum-exp converges to the maximum, so when
``eps_eff + ln(C/M) >= 0`` (``C`` counting ties at the maximum) the optimum
sits at ``gamma = 0`` with value ``max_i f_i``; at ``eps_eff = 0`` the
infimum is the ``gamma -> inf`` limit ``mean_i f_i``, recovering the plain
Bayes risk.

The posterior-expected-KL variant plugs in ``eps_eff = eps - G`` with ``G``
the Jensen gap of the posterior (the ball is equivalent to a plain KL ball
of the reduced radius around the nominal model); the predictive-centred and
empirical variants use ``eps_eff = eps`` directly.

Note on the predictive-centred variant: heavy-tailed predictives
(Student-t, Lomax) have an infinite moment generating function, so the
population dual does not exist; the finite-sample objective here is always
a sample-average approximation and does not solve the population problem
to optimality regardless of M.

Everything in this module is a pure function of immutable inputs; callers
may evaluate many (x, eps) pairs concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

__all__ = [
    "UnboundedProblemError",
    "InfiniteNormalizerError",
    "NewsvendorLoss",
    "PortfolioLoss",
    "SaaDualProblem",
    "InnerSolution",
    "loss_value",
    "loss_values",
    "loss_subgradient",
    "perspective_lse",
    "inner_gamma_opt",
    "inner_gamma_opt_batch",
    "envelope_subgradient",
    "closed_form_gaussian_linear",
    "WorstCaseDensity",
    "worst_case_density",
    "exact_dual_1d",
    "log_integral_exp",
]

GAMMA_FLOOR = 1e-10
_BRACKET_REL_TOL = 1e-10


class UnboundedProblemError(RuntimeError):
    """The worst-case problem is unbounded (negative effective radius)."""


class InfiniteNormalizerError(RuntimeError):
    """The tilted density does not normalize (moment condition violated)."""


# ---------------------------------------------------------------------------
# losses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NewsvendorLoss:
    """Per-unit holding/backorder cost, summed over product dimensions."""

    holding: float
    backorder: float

    def __post_init__(self):
        if self.holding < 0 or self.backorder < 0:
            raise ValueError("holding and backorder costs must be nonnegative")
        if self.holding + self.backorder <= 0:
            raise ValueError("at least one of holding/backorder must be positive")

    def value(self, x, xi) -> float:
        x, xi = _aligned(x, xi)
        gap = x - xi
        return float(np.sum(self.holding * np.maximum(gap, 0.0) + self.backorder * np.maximum(-gap, 0.0)))

    def values(self, x, samples: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        samples = np.asarray(samples, dtype=float)
        if samples.shape[1] != x.shape[0]:
            raise ValueError(f"dimension mismatch: x has {x.shape[0]}, samples have {samples.shape[1]}")
        gap = x[None, :] - samples
        return np.sum(self.holding * np.maximum(gap, 0.0) + self.backorder * np.maximum(-gap, 0.0), axis=1)

    def subgradient(self, x, xi) -> np.ndarray:
        # 0 at ties: a valid, symmetric subgradient at the kink
        x, xi = _aligned(x, xi)
        return self.holding * (x > xi).astype(float) - self.backorder * (x < xi).astype(float)

    def subgradients(self, x, samples: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        samples = np.asarray(samples, dtype=float)
        return self.holding * (x[None, :] > samples).astype(float) - self.backorder * (
            x[None, :] < samples
        ).astype(float)

    def lipschitz_2norm(self, dim: int) -> float:
        return max(self.holding, self.backorder) * math.sqrt(dim)


@dataclass(frozen=True)
class PortfolioLoss:
    """Negative portfolio return: f_x(xi) = -xi . x."""

    def value(self, x, xi) -> float:
        x, xi = _aligned(x, xi)
        return float(-xi @ x)

    def values(self, x, samples: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        samples = np.asarray(samples, dtype=float)
        if samples.shape[1] != x.shape[0]:
            raise ValueError(f"dimension mismatch: x has {x.shape[0]}, samples have {samples.shape[1]}")
        return -samples @ x

    def subgradient(self, x, xi) -> np.ndarray:
        x, xi = _aligned(x, xi)
        return -xi

    def subgradients(self, x, samples: np.ndarray) -> np.ndarray:
        return -np.asarray(samples, dtype=float)


LossSpec = NewsvendorLoss | PortfolioLoss


def _aligned(x, xi):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if x.shape != xi.shape:
        raise ValueError(f"dimension mismatch: x has shape {x.shape}, xi has shape {xi.shape}")
    return x, xi


def loss_value(loss: LossSpec, x, xi) -> float:
    return loss.value(x, xi)


def loss_values(loss: LossSpec, x, samples) -> np.ndarray:
    return loss.values(x, samples)


def loss_subgradient(loss: LossSpec, x, xi) -> np.ndarray:
    return loss.subgradient(x, xi)


# ---------------------------------------------------------------------------
# perspective of log-sum-exp
# ---------------------------------------------------------------------------


def perspective_lse(gamma: float, values) -> float:
    """gamma * ln(sum_i exp(v_i / gamma)) with max-shift stabilization.

    Converges to ``max(values)`` as gamma -> 0; gamma at or below the
    floor 1e-10 returns the maximum exactly.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("values must be nonempty")
    m = float(v.max())
    if gamma <= GAMMA_FLOOR:
        return m
    return m + gamma * float(np.log(np.sum(np.exp((v - m) / gamma))))


# ---------------------------------------------------------------------------
# inner minimization over gamma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SaaDualProblem:
    """Sample-average dual data: effective radius, nominal sample, loss."""

    eps_eff: float
    samples: np.ndarray
    loss: LossSpec

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim == 1:
            samples = samples.reshape(-1, 1)
        if samples.ndim != 2 or samples.shape[0] < 1:
            raise ValueError("samples must be a nonempty (M, D) matrix")
        if not np.isfinite(self.eps_eff):
            raise ValueError("eps_eff must be finite")
        object.__setattr__(self, "samples", samples)

    @property
    def m(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class InnerSolution:
    """Inner minimizer: gamma (inf flags the mean regime), value, softmax weights."""

    gamma_star: float
    value: float
    weights: np.ndarray


def _tie_weights(f: np.ndarray) -> np.ndarray:
    m = f.max()
    ties = f >= m - 1e-12 * (1.0 + abs(m))
    return ties / ties.sum()


def inner_gamma_opt_batch(eps_eff: float, values: np.ndarray) -> list[InnerSolution]:
    """Solve the inner gamma problem for each row of a (K, M) loss matrix.

    Rows are independent: each row's bracket and bisection trajectory is
    frozen at its own convergence, so a row's solution is identical whether
    it is solved alone or inside a batch.
    """
    f = np.asarray(values, dtype=float)
    if f.ndim == 1:
        f = f.reshape(1, -1)
    if not np.all(np.isfinite(f)):
        raise ValueError("loss values must be finite")
    if eps_eff < 0:
        raise UnboundedProblemError(f"effective radius must be nonnegative, got {eps_eff}")

    k, m_count = f.shape
    fmax = f.max(axis=1)

    out: list[InnerSolution | None] = [None] * k

    # mean regime: effectively zero radius, infimum attained as gamma -> inf
    scale = 1e-12 * (1.0 + np.abs(fmax))
    mean_rows = eps_eff <= scale

    # max regime: g'(0+) = eps_eff + ln(C/M) >= 0 so g is nondecreasing
    ties = f >= (fmax - 1e-12 * (1.0 + np.abs(fmax)))[:, None]
    c = ties.sum(axis=1)
    max_rows = (~mean_rows) & (eps_eff + np.log(c / m_count) >= 0)

    for i in np.where(max_rows)[0]:
        out[i] = InnerSolution(0.0, float(fmax[i]), _tie_weights(f[i]))
    for i in np.where(mean_rows)[0]:
        out[i] = InnerSolution(
            math.inf, float(f[i].mean()), np.full(m_count, 1.0 / m_count)
        )

    active = ~(mean_rows | max_rows)
    if np.any(active):
        idx = np.where(active)[0]
        fa = f[idx]
        ma = fa.max(axis=1)
        shifted = fa - ma[:, None]

        def dual_derivative(gamma: np.ndarray) -> np.ndarray:
            e = np.exp(shifted / gamma[:, None])
            s = e.sum(axis=1)
            avg = (e * shifted).sum(axis=1) / s
            return eps_eff + np.log(s / m_count) - avg / gamma

        # scale-aware initial bracket, doubled until the derivative turns positive
        lo = np.full(idx.size, 1e-12)
        hi = (fa.max(axis=1) - fa.min(axis=1)) / max(eps_eff, 1e-8)
        hi = np.maximum(hi, 1e-6)
        for _ in range(200):
            need = dual_derivative(hi) <= 0
            if not np.any(need):
                break
            hi[need] *= 2.0

        converged = np.zeros(idx.size, dtype=bool)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            pos = dual_derivative(mid) > 0
            hi = np.where(~converged & pos, mid, hi)
            lo = np.where(~converged & ~pos, mid, lo)
            converged |= (hi - lo) <= _BRACKET_REL_TOL * (1.0 + hi)
            if np.all(converged):
                break

        gamma = 0.5 * (lo + hi)
        for row, i in enumerate(idx):
            g = float(gamma[row])
            fi = fa[row]
            value = g * (eps_eff - math.log(m_count)) + perspective_lse(g, fi)
            if g <= GAMMA_FLOOR:
                w = _tie_weights(fi)
            else:
                e = np.exp((fi - fi.max()) / g)
                w = e / e.sum()
            out[i] = InnerSolution(g, value, w)

    return out  # type: ignore[return-value]


def inner_gamma_opt(problem: SaaDualProblem, x) -> InnerSolution:
    """Minimize the sample-average dual objective over gamma for decision x.

    Raises :class:`UnboundedProblemError` when the effective radius is
    negative and ``ValueError`` on non-finite loss values.
    """
    f = problem.loss.values(x, problem.samples)
    return inner_gamma_opt_batch(problem.eps_eff, f.reshape(1, -1))[0]


def envelope_subgradient(problem: SaaDualProblem, x, inner: InnerSolution) -> np.ndarray:
    """Subgradient in x of the inner-minimized objective (envelope theorem).

    At the inner optimizer the objective's x-dependence enters only through
    the loss values, weighted by the softmax weights; the weighted average
    of per-sample loss subgradients is therefore a valid subgradient.  The
    boundary regimes are covered by the stored weights (uniform over the
    tied maxima at gamma = 0, uniform over all samples in the mean regime).
    """
    grads = problem.loss.subgradients(x, problem.samples)
    return inner.weights @ grads


# ---------------------------------------------------------------------------
# closed-form Gaussian/linear dual
# ---------------------------------------------------------------------------


def closed_form_gaussian_linear(mu_hat, sigma_hat, eps_eff: float, x) -> float:
    """Worst-case risk of f_x(xi) = xi . x under a Gaussian nominal model.

    The Gaussian moment generating function collapses the inner infimum:
    the value is ``mu_hat . x + sqrt(2 * eps_eff) * sqrt(x' Sigma x)``.
    The negative-return portfolio loss is handled by negating ``mu_hat``.
    """
    if eps_eff < 0:
        raise UnboundedProblemError(f"effective radius must be nonnegative, got {eps_eff}")
    mu = np.atleast_1d(np.asarray(mu_hat, dtype=float))
    sigma = np.atleast_2d(np.asarray(sigma_hat, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if mu.shape[0] != x.shape[0] or sigma.shape != (x.shape[0], x.shape[0]):
        raise ValueError("dimension mismatch between mu_hat, sigma_hat and x")
    quad_form = float(x @ sigma @ x)
    return float(mu @ x) + math.sqrt(2.0 * eps_eff) * math.sqrt(max(quad_form, 0.0))


# ---------------------------------------------------------------------------
# worst-case (exponentially tilted) densities, 1D
# ---------------------------------------------------------------------------


def _probe_grid(support: tuple[float, float], centers: tuple[float, ...]) -> np.ndarray:
    """Geometric probe grid around the given centers, clipped to the support."""
    lo, hi = support
    base = list(centers) if centers else [0.0]
    pts = set()
    for c in base:
        pts.add(float(c))
        for k in range(-20, 46):
            step = 2.0**k
            pts.add(c + step)
            pts.add(c - step)
    if np.isfinite(lo):
        pts = {max(p, lo) for p in pts}
        pts.add(float(lo))
    if np.isfinite(hi):
        pts = {min(p, hi) for p in pts}
        pts.add(float(hi))
    return np.array(sorted(pts))


def _exp_regions(
    logf: Callable[[float], float],
    support: tuple[float, float],
    centers: tuple[float, ...],
) -> tuple[list[tuple[float, float]], list[float], float]:
    """Locate the mass of exp(logf): integration regions, modes, peak value.

    Probes geometrically out to ~1e13, refines every probe-grid local
    maximum, and returns the merged intervals carrying non-negligible
    mass.  A maximum sitting on an infinite boundary of the probed range
    means the tilt dominates the nominal tails: the normalizer diverges.
    """
    from scipy.optimize import minimize_scalar

    lo, hi = support
    xs = _probe_grid(support, centers)
    ys = np.array([logf(float(t)) for t in xs])
    if not np.any(np.isfinite(ys)):
        raise InfiniteNormalizerError("log-density is -inf everywhere on the probe grid")
    imax = int(np.nanargmax(ys))
    if (imax == 0 and not np.isfinite(lo)) or (imax == len(xs) - 1 and not np.isfinite(hi)):
        raise InfiniteNormalizerError(
            "normalizer diverges: the loss tilt dominates the nominal tails "
            "(finite moment generating function violated)"
        )

    candidates = []
    for i in range(len(xs)):
        left_ok = i == 0 or not (ys[i] < ys[i - 1])
        right_ok = i == len(xs) - 1 or not (ys[i] < ys[i + 1])
        if left_ok and right_ok and np.isfinite(ys[i]):
            candidates.append(i)

    refined: list[tuple[float, float, int]] = []  # (value, location, probe index)
    for i in candidates:
        a = xs[max(i - 1, 0)]
        b = xs[min(i + 1, len(xs) - 1)]
        value, loc = float(ys[i]), float(xs[i])
        if b > a:
            res = minimize_scalar(
                lambda t: -logf(float(t)),
                bounds=(a, b),
                method="bounded",
                options={"xatol": 1e-10 * (1.0 + abs(b) + abs(a))},
            )
            if np.isfinite(res.fun) and -res.fun > value:
                value, loc = float(-res.fun), float(res.x)
        refined.append((value, loc, i))

    peak = max(v for v, _, _ in refined)
    modes = [loc for v, loc, _ in refined if v >= peak - 200.0]

    # tight region around each relevant mode: march outward (doubling steps)
    # until the log-density has dropped by 200, so the mass fills a decent
    # fraction of each quadrature interval even for needle-shaped tilts
    def edge(mode: float, value: float, direction: float, bound: float) -> float:
        target = value - 200.0
        pos = mode
        step = max(1e-9 * (1.0 + abs(mode)), 1e-12)
        for _ in range(120):
            nxt = pos + direction * step
            if (direction > 0 and nxt >= bound) or (direction < 0 and nxt <= bound):
                return bound
            if logf(nxt) <= target:
                return nxt
            pos = nxt
            step *= 2.0
        raise InfiniteNormalizerError("failed to bracket the tilted density mass")

    regions: list[tuple[float, float]] = []
    for v, loc, _ in refined:
        if v < peak - 200.0:
            continue
        left = edge(loc, v, -1.0, lo)
        right = edge(loc, v, +1.0, hi)
        regions.append((left, right))
    regions.sort()
    merged = [regions[0]]
    for left, right in regions[1:]:
        if left <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], right))
        else:
            merged.append((left, right))
    return merged, modes, peak


def log_integral_exp(
    logf: Callable[[float], float],
    support: tuple[float, float] = (-math.inf, math.inf),
    points: tuple[float, ...] = (),
) -> float:
    """log of the integral of exp(logf) over the support, by adaptive quadrature.

    The integrand is max-shifted so quadrature works on O(1) values; loss
    kinks passed through ``points`` seed the probe grid and the quadrature
    breakpoints.
    """
    regions, modes, peak = _exp_regions(logf, support, tuple(points))

    def integrand(t: float) -> float:
        return math.exp(min(logf(t) - peak, 50.0))

    total = 0.0
    for left, right in regions:
        inner = sorted({m for m in (*modes, *points) if left < m < right})
        val, _ = quad(integrand, left, right, points=inner or None, limit=300)
        total += val
    if not (np.isfinite(total) and total > 0):
        raise InfiniteNormalizerError("quadrature of the tilted density failed to converge")
    return peak + math.log(total)


@dataclass(frozen=True)
class WorstCaseDensity:
    """Exponentially tilted worst-case density p*(xi) ~ p(xi) exp(f_x(xi)/gamma)."""

    gamma: float
    log_normalizer: float
    base_logpdf: Callable[[float], float]
    loss: LossSpec
    x: np.ndarray
    support: tuple[float, float]

    def unnormalized_logpdf(self, xi: float) -> float:
        lp = self.base_logpdf(xi)
        if lp == -math.inf:
            return -math.inf
        return lp + self.loss.value(self.x, xi) / self.gamma

    def logpdf(self, xi: float) -> float:
        return self.unnormalized_logpdf(xi) - self.log_normalizer

    def expectation(self, fn: Callable[[float], float], points: tuple[float, ...] = ()) -> float:
        """Quadrature expectation of fn under the normalized tilted density."""
        kinks = tuple({*(float(p) for p in points), *(float(v) for v in self.x)})
        regions, modes, peak = _exp_regions(self.unnormalized_logpdf, self.support, kinks)

        def integrand(t: float) -> float:
            return fn(t) * math.exp(min(self.unnormalized_logpdf(t) - peak, 50.0))

        total = 0.0
        for left, right in regions:
            inner = sorted({m for m in (*modes, *kinks) if left < m < right})
            val, _ = quad(integrand, left, right, points=inner or None, limit=300)
            total += val
        return total * math.exp(peak - self.log_normalizer)


def worst_case_density(
    nominal_logpdf: Callable[[float], float],
    loss: LossSpec,
    x,
    gamma_star: float,
    support: tuple[float, float] = (-math.inf, math.inf),
) -> WorstCaseDensity:
    """Worst-case distribution attaining the KL dual at an interior gamma.

    1D supports only; the normalizer is computed by adaptive quadrature and
    :class:`InfiniteNormalizerError` is raised when it diverges (the loss
    tilt overwhelming the nominal tails signals a violated moment
    condition).
    """
    if gamma_star <= 0:
        raise ValueError("worst-case density requires gamma_star > 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))

    def unnorm(t: float) -> float:
        lp = nominal_logpdf(t)
        if lp == -math.inf:
            return -math.inf
        return lp + loss.value(x, t) / gamma_star

    log_z = log_integral_exp(unnorm, support, points=tuple(float(v) for v in x))
    return WorstCaseDensity(
        gamma=gamma_star,
        log_normalizer=log_z,
        base_logpdf=nominal_logpdf,
        loss=loss,
        x=x,
        support=support,
    )


def exact_dual_1d(
    nominal_logpdf: Callable[[float], float],
    loss: LossSpec,
    x,
    eps_eff: float,
    support: tuple[float, float] = (-math.inf, math.inf),
    gamma_bracket: tuple[float, float] = (1e-3, 10.0),
) -> tuple[float, float]:
    """Continuous-nominal dual value by quadrature, for 1D cross-checks.

    Minimizes ``gamma * eps_eff + gamma * ln E[exp(f/gamma)]`` with the
    expectation evaluated by quadrature instead of a sample average.
    Returns ``(gamma_star, value)``; assumes an interior optimizer, which
    holds whenever the loss is unbounded on the support and eps_eff > 0.
    """
    if eps_eff <= 0:
        raise UnboundedProblemError("exact_dual_1d requires a strictly positive radius")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    kinks = tuple(float(v) for v in x)

    def log_mgf(gamma: float) -> float:
        return log_integral_exp(
            lambda t: nominal_logpdf(t) + loss.value(x, t) / gamma, support, points=kinks
        )

    def tilted_mean_loss(gamma: float) -> float:
        wc = worst_case_density(nominal_logpdf, loss, x, gamma, support)
        return wc.expectation(lambda t: loss.value(x, t), points=kinks)

    def derivative(gamma: float) -> float:
        # gammas inside the divergent-MGF region have objective +inf and
        # the minimizer lies above them: treat as -inf derivative
        try:
            return eps_eff + log_mgf(gamma) - tilted_mean_loss(gamma) / gamma
        except InfiniteNormalizerError:
            return -math.inf

    lo, hi = gamma_bracket
    for _ in range(80):
        d_lo = derivative(lo)
        if d_lo == -math.inf:
            lo *= 2.0
            hi = max(hi, 4.0 * lo)
        elif d_lo < 0:
            break
        else:
            lo *= 0.5
    for _ in range(80):
        if hi <= lo:
            hi = 2.0 * lo
        if derivative(hi) > 0:
            break
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if derivative(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-12 * (1.0 + hi):
            break
    gamma_star = 0.5 * (lo + hi)
    value = gamma_star * (eps_eff + log_mgf(gamma_star))
    return gamma_star, value
