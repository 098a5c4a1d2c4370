"""Conjugate exponential-family models.

Three likelihood/prior pairs are supported:

* univariate Normal with unknown mean and precision, Normal-Gamma prior
  (family tag ``NormalGamma``),
* Exponential with unknown rate, Gamma prior (``GammaExponential``),
* multivariate Normal with unknown mean and covariance,
  Normal-Inverse-Wishart prior (``NormalInverseWishart``).

For each family the module provides the conjugate posterior update, the
fitted model at the posterior-mean natural parameter (the *nominal* model),
the posterior predictive distribution, the Jensen gap

    G = E_posterior[A(eta)] - A(E_posterior[eta])

of the log-partition function A (nonnegative by convexity of A), and the
radius formulas built from it: ``eps_min = G`` is the smallest radius for
which the posterior-expected-KL ball is nonempty, and

    eps_star_pe = d_KL(true || nominal) + G

is the smallest radius whose ball is guaranteed to contain a given true
distribution from the same family.  By Jensen's inequality the same value
upper-bounds the radius needed for the predictive-centred ball, exposed as
``eps_star_pp_upper``.

Hyperparameters are stored in standard parametrization throughout; the
natural-parameter bookkeeping only appears implicitly through the closed
forms above.

All types are immutable after construction and all operations are pure
given an explicit ``numpy.random.Generator``, so values can be shared
freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import cholesky, solve_triangular
from scipy.special import digamma, gammaln

__all__ = [
    "DomainError",
    "NormalGammaParams",
    "GammaParams",
    "NiwParams",
    "ConjugatePosterior",
    "UnivariateNormalModel",
    "ExponentialModel",
    "MultivariateNormalModel",
    "StudentTModel",
    "LomaxModel",
    "MultivariateStudentTModel",
    "ToleranceReport",
    "normal_gamma",
    "gamma_exponential",
    "normal_inverse_wishart",
    "posterior_update",
    "nominal",
    "gap_G",
    "eps_min",
    "eps_star_pe",
    "eps_star_pe_plugin",
    "eps_star_pp_upper",
    "tolerance_report",
    "predictive",
    "kl_divergence",
    "mle_model",
    "sample_posterior_params",
    "sample_likelihood",
    "multivariate_digamma",
    "sample_inverse_wishart",
]

NORMAL_GAMMA = "NormalGamma"
GAMMA_EXPONENTIAL = "GammaExponential"
NORMAL_INVERSE_WISHART = "NormalInverseWishart"

FAMILIES = (NORMAL_GAMMA, GAMMA_EXPONENTIAL, NORMAL_INVERSE_WISHART)


class DomainError(ValueError):
    """Invalid parameters or observations outside the family's support."""


def _frozen_array(x, ndim: int, name: str) -> np.ndarray:
    arr = np.array(x, dtype=float, copy=True)
    if arr.ndim != ndim:
        raise DomainError(f"{name} must have {ndim} dimension(s), got {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    arr.flags.writeable = False
    return arr


def _check_spd(mat: np.ndarray, name: str) -> None:
    if mat.shape[0] != mat.shape[1]:
        raise DomainError(f"{name} must be square, got shape {mat.shape}")
    if not np.allclose(mat, mat.T, rtol=1e-10, atol=1e-12):
        raise DomainError(f"{name} must be symmetric")
    try:
        np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        raise DomainError(f"{name} must be positive definite") from None


def multivariate_digamma(a: float, d: int) -> float:
    """Multivariate digamma: sum of psi(a + (1 - j) / 2) for j = 1..d."""
    return float(sum(digamma(a + (1.0 - j) / 2.0) for j in range(1, d + 1)))


# ---------------------------------------------------------------------------
# hyperparameter records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalGammaParams:
    """Normal-Gamma hyperparameters (location, mean-confidence, shape, rate)."""

    mu: float
    kappa: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("kappa", "alpha", "beta"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise DomainError(f"NormalGammaParams.{name} must be positive, got {v}")
        if not np.isfinite(self.mu):
            raise DomainError("NormalGammaParams.mu must be finite")


@dataclass(frozen=True)
class GammaParams:
    """Gamma hyperparameters (shape, rate) for the Exponential likelihood."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise DomainError(f"GammaParams.{name} must be positive, got {v}")


@dataclass(frozen=True)
class NiwParams:
    """Normal-Inverse-Wishart hyperparameters.

    ``kappa > D + 2`` is required because the nominal covariance and the
    Jensen gap carry a ``kappa - D - 2`` factor.  The natural conjugate
    parametrization additionally ties ``iota = kappa - D - 2``; the closed
    forms in this module assume that link, and the posterior update
    preserves it whenever the prior satisfies it.
    """

    mu: np.ndarray
    kappa: float
    iota: float
    psi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu", _frozen_array(self.mu, 1, "NiwParams.mu"))
        object.__setattr__(self, "psi", _frozen_array(self.psi, 2, "NiwParams.psi"))
        d = self.mu.shape[0]
        _check_spd(self.psi, "NiwParams.psi")
        if self.psi.shape[0] != d:
            raise DomainError(
                f"NiwParams.psi shape {self.psi.shape} incompatible with mu dimension {d}"
            )
        if not (np.isfinite(self.iota) and self.iota > d - 1):
            raise DomainError(f"NiwParams.iota must exceed D - 1 = {d - 1}, got {self.iota}")
        if not (np.isfinite(self.kappa) and self.kappa > d + 2):
            raise DomainError(f"NiwParams.kappa must exceed D + 2 = {d + 2}, got {self.kappa}")

    @property
    def dim(self) -> int:
        return self.mu.shape[0]


Params = Union[NormalGammaParams, GammaParams, NiwParams]

_PARAM_FAMILY = {
    NormalGammaParams: NORMAL_GAMMA,
    GammaParams: GAMMA_EXPONENTIAL,
    NiwParams: NORMAL_INVERSE_WISHART,
}


@dataclass(frozen=True)
class ConjugatePosterior:
    """A family-tagged hyperparameter record holding prior or posterior beliefs."""

    family: str
    params: Params
    n_obs: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        expected = _PARAM_FAMILY[type(self.params)]
        if expected != self.family:
            raise DomainError(
                f"family tag {self.family!r} does not match params of type "
                f"{type(self.params).__name__}"
            )
        if self.n_obs < 0:
            raise DomainError("n_obs must be nonnegative")

    @property
    def dim(self) -> int:
        return self.params.dim if isinstance(self.params, NiwParams) else 1


def normal_gamma(mu: float, kappa: float, alpha: float, beta: float, n_obs: int = 0) -> ConjugatePosterior:
    return ConjugatePosterior(NORMAL_GAMMA, NormalGammaParams(mu, kappa, alpha, beta), n_obs)


def gamma_exponential(alpha: float, beta: float, n_obs: int = 0) -> ConjugatePosterior:
    return ConjugatePosterior(GAMMA_EXPONENTIAL, GammaParams(alpha, beta), n_obs)


def normal_inverse_wishart(mu, kappa: float, iota: float, psi, n_obs: int = 0) -> ConjugatePosterior:
    return ConjugatePosterior(NORMAL_INVERSE_WISHART, NiwParams(mu, kappa, iota, psi), n_obs)


# ---------------------------------------------------------------------------
# fitted models (nominal and predictive)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnivariateNormalModel:
    """Normal likelihood fitted at the posterior-mean natural parameter."""

    mean: float
    precision: float

    def __post_init__(self):
        if not (np.isfinite(self.precision) and self.precision > 0):
            raise DomainError(f"precision must be positive, got {self.precision}")

    @property
    def dim(self) -> int:
        return 1

    @property
    def sd(self) -> float:
        return 1.0 / math.sqrt(self.precision)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if count < 1:
            raise DomainError("count must be >= 1")
        return rng.normal(self.mean, self.sd, size=(count, 1))

    def log_density(self, xi) -> float:
        z = float(np.asarray(xi).reshape(()))
        return 0.5 * math.log(self.precision) - 0.5 * math.log(2 * math.pi) \
            - 0.5 * self.precision * (z - self.mean) ** 2


@dataclass(frozen=True)
class ExponentialModel:
    rate: float

    def __post_init__(self):
        if not (np.isfinite(self.rate) and self.rate > 0):
            raise DomainError(f"rate must be positive, got {self.rate}")

    @property
    def dim(self) -> int:
        return 1

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if count < 1:
            raise DomainError("count must be >= 1")
        return rng.exponential(1.0 / self.rate, size=(count, 1))

    def log_density(self, xi) -> float:
        z = float(np.asarray(xi).reshape(()))
        if z < 0:
            return -math.inf
        return math.log(self.rate) - self.rate * z


@dataclass(frozen=True)
class MultivariateNormalModel:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen_array(self.mean, 1, "mean"))
        object.__setattr__(self, "cov", _frozen_array(self.cov, 2, "cov"))
        _check_spd(self.cov, "cov")
        if self.cov.shape[0] != self.mean.shape[0]:
            raise DomainError("mean/cov dimension mismatch")

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def _chol(self) -> np.ndarray:
        return np.linalg.cholesky(self.cov)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if count < 1:
            raise DomainError("count must be >= 1")
        z = rng.standard_normal((count, self.dim))
        return self.mean + z @ self._chol().T

    def log_density(self, xi) -> float:
        x = np.asarray(xi, dtype=float).reshape(self.dim)
        chol = self._chol()
        dev = solve_triangular(chol, x - self.mean, lower=True)
        logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        return float(-0.5 * (self.dim * math.log(2 * math.pi) + logdet + dev @ dev))


@dataclass(frozen=True)
class StudentTModel:
    """Student-t with squared scale ``scale_sq`` (posterior predictive of NormalGamma)."""

    dof: float
    loc: float
    scale_sq: float

    def __post_init__(self):
        if not (np.isfinite(self.dof) and self.dof > 0):
            raise DomainError(f"dof must be positive, got {self.dof}")
        if not (np.isfinite(self.scale_sq) and self.scale_sq > 0):
            raise DomainError(f"scale_sq must be positive, got {self.scale_sq}")

    @property
    def dim(self) -> int:
        return 1

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if count < 1:
            raise DomainError("count must be >= 1")
        z = rng.standard_normal(count)
        w = rng.chisquare(self.dof, count)
        t = z / np.sqrt(w / self.dof)
        return (self.loc + math.sqrt(self.scale_sq) * t).reshape(count, 1)

    def log_density(self, xi) -> float:
        z = float(np.asarray(xi).reshape(()))
        nu = self.dof
        u = (z - self.loc) ** 2 / (nu * self.scale_sq)
        return float(
            gammaln((nu + 1) / 2) - gammaln(nu / 2)
            - 0.5 * math.log(nu * math.pi * self.scale_sq)
            - 0.5 * (nu + 1) * math.log1p(u)
        )


@dataclass(frozen=True)
class LomaxModel:
    """Pareto type II on [0, inf); posterior predictive of GammaExponential."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise DomainError(f"LomaxModel.{name} must be positive, got {v}")

    @property
    def dim(self) -> int:
        return 1

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if count < 1:
            raise DomainError("count must be >= 1")
        # inverse CDF: beta * (U^(-1/alpha) - 1) with U in (0, 1]
        u = 1.0 - rng.random(count)
        return (self.beta * (u ** (-1.0 / self.alpha) - 1.0)).reshape(count, 1)

    def cdf(self, xi) -> float:
        z = float(np.asarray(xi).reshape(()))
        if z < 0:
            return 0.0
        return 1.0 - (1.0 + z / self.beta) ** (-self.alpha)

    def log_density(self, xi) -> float:
        z = float(np.asarray(xi).reshape(()))
        if z < 0:
            return -math.inf
        return math.log(self.alpha / self.beta) - (self.alpha + 1) * math.log1p(z / self.beta)


@dataclass(frozen=True)
class MultivariateStudentTModel:
    dof: float
    loc: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "loc", _frozen_array(self.loc, 1, "loc"))
        object.__setattr__(self, "shape", _frozen_array(self.shape, 2, "shape"))
        if not (np.isfinite(self.dof) and self.dof > 0):
            raise DomainError(f"dof must be positive, got {self.dof}")
        _check_spd(self.shape, "shape")
        if self.shape.shape[0] != self.loc.shape[0]:
            raise DomainError("loc/shape dimension mismatch")

    @property
    def dim(self) -> int:
        return self.loc.shape[0]

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if count < 1:
            raise DomainError("count must be >= 1")
        chol = np.linalg.cholesky(self.shape)
        z = rng.standard_normal((count, self.dim))
        w = rng.chisquare(self.dof, count)
        return self.loc + (z @ chol.T) / np.sqrt(w / self.dof)[:, None]

    def log_density(self, xi) -> float:
        x = np.asarray(xi, dtype=float).reshape(self.dim)
        d, nu = self.dim, self.dof
        chol = np.linalg.cholesky(self.shape)
        dev = solve_triangular(chol, x - self.loc, lower=True)
        logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        return float(
            gammaln((nu + d) / 2) - gammaln(nu / 2)
            - 0.5 * d * math.log(nu * math.pi) - 0.5 * logdet
            - 0.5 * (nu + d) * math.log1p(dev @ dev / nu)
        )


NominalModel = Union[UnivariateNormalModel, ExponentialModel, MultivariateNormalModel]
PredictiveModel = Union[StudentTModel, LomaxModel, MultivariateStudentTModel]


# ---------------------------------------------------------------------------
# posterior update
# ---------------------------------------------------------------------------


def _as_data_matrix(data, dim: int, support_positive: bool) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, dim)
    if dim == 1:
        arr = arr.reshape(-1, 1) if arr.ndim <= 1 else arr
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DomainError(f"data must have {dim} column(s), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        idx = int(np.argwhere(~np.isfinite(arr).all(axis=1))[0, 0])
        raise DomainError(f"observation {idx} is not finite")
    if support_positive:
        bad = np.argwhere(arr[:, 0] <= 0)
        if bad.size:
            idx = int(bad[0, 0])
            raise DomainError(f"observation {idx} outside support (requires xi > 0): {arr[idx, 0]}")
    return arr


def posterior_update(prior: ConjugatePosterior, data) -> ConjugatePosterior:
    """Absorb observations into the conjugate posterior.

    The batch update equals the composition of singleton updates
    (sufficiency of the conjugate statistics).  Exponential observations
    must be strictly positive; violations raise :class:`DomainError`
    naming the offending index.
    """
    p = prior.params
    if prior.family == GAMMA_EXPONENTIAL:
        x = _as_data_matrix(data, 1, support_positive=True)
        n = x.shape[0]
        if n == 0:
            return prior
        new = GammaParams(p.alpha + n, p.beta + float(x.sum()))
        return ConjugatePosterior(prior.family, new, prior.n_obs + n)

    if prior.family == NORMAL_GAMMA:
        x = _as_data_matrix(data, 1, support_positive=False)[:, 0]
        n = x.shape[0]
        if n == 0:
            return prior
        xbar = float(x.mean())
        ss = float(np.sum((x - xbar) ** 2))
        kappa_new = p.kappa + n
        mu_new = (p.kappa * p.mu + n * xbar) / kappa_new
        alpha_new = p.alpha + n / 2.0
        beta_new = p.beta + 0.5 * ss + p.kappa * n * (xbar - p.mu) ** 2 / (2.0 * kappa_new)
        return ConjugatePosterior(
            prior.family, NormalGammaParams(mu_new, kappa_new, alpha_new, beta_new), prior.n_obs + n
        )

    x = _as_data_matrix(data, prior.dim, support_positive=False)
    n = x.shape[0]
    if n == 0:
        return prior
    xbar = x.mean(axis=0)
    dev = x - xbar
    scatter = dev.T @ dev
    kappa_new = p.kappa + n
    mu_new = (p.kappa * p.mu + n * xbar) / kappa_new
    iota_new = p.iota + n
    dm = (xbar - p.mu)[:, None]
    psi_new = p.psi + scatter + (p.kappa * n / kappa_new) * (dm @ dm.T)
    psi_new = 0.5 * (psi_new + psi_new.T)
    return ConjugatePosterior(
        prior.family, NiwParams(mu_new, kappa_new, iota_new, psi_new), prior.n_obs + n
    )


# ---------------------------------------------------------------------------
# nominal model, Jensen gap, radii
# ---------------------------------------------------------------------------


def nominal(posterior: ConjugatePosterior) -> NominalModel:
    """The likelihood fitted at the posterior mean of the natural parameter."""
    p = posterior.params
    if posterior.family == NORMAL_GAMMA:
        return UnivariateNormalModel(mean=p.mu, precision=p.alpha / p.beta)
    if posterior.family == GAMMA_EXPONENTIAL:
        return ExponentialModel(rate=p.alpha / p.beta)
    d = p.dim
    denom = p.kappa - d - 2
    if denom <= 0:
        raise DomainError(f"degenerate posterior: kappa must exceed D + 2 = {d + 2}")
    return MultivariateNormalModel(mean=p.mu, cov=p.psi / denom)


def gap_G(posterior: ConjugatePosterior) -> float:
    """Jensen gap of the log-partition function under the posterior.

    Nonnegative for every valid posterior and vanishing as the posterior
    concentrates (n -> infinity under a fixed data-generating process).
    """
    p = posterior.params
    if posterior.family == NORMAL_GAMMA:
        return 0.5 * (math.log(p.alpha) - float(digamma(p.alpha)) + 1.0 / p.kappa)
    if posterior.family == GAMMA_EXPONENTIAL:
        return math.log(p.alpha) - float(digamma(p.alpha))
    d = p.dim
    a = (p.kappa - d - 2) / 2.0
    return (
        -0.5 * d * math.log(2.0)
        - 0.5 * multivariate_digamma(a, d)
        + d / (2.0 * p.kappa)
        + 0.5 * d * math.log(p.kappa - d - 2)
    )


def eps_min(posterior: ConjugatePosterior) -> float:
    """Smallest radius for which the posterior-expected-KL ball is nonempty."""
    return gap_G(posterior)


def kl_divergence(p: NominalModel, q: NominalModel) -> float:
    """Closed-form KL divergence d_KL(p || q) between same-family models."""
    if isinstance(p, ExponentialModel) and isinstance(q, ExponentialModel):
        return math.log(p.rate) - math.log(q.rate) + q.rate / p.rate - 1.0
    if isinstance(p, UnivariateNormalModel) and isinstance(q, UnivariateNormalModel):
        return 0.5 * (
            math.log(p.precision / q.precision)
            + q.precision / p.precision
            + q.precision * (p.mean - q.mean) ** 2
            - 1.0
        )
    if isinstance(p, MultivariateNormalModel) and isinstance(q, MultivariateNormalModel):
        if p.dim != q.dim:
            raise DomainError(f"dimension mismatch: {p.dim} vs {q.dim}")
        d = p.dim
        cq = np.linalg.cholesky(q.cov)
        cp = np.linalg.cholesky(p.cov)
        logdet_q = 2.0 * np.sum(np.log(np.diag(cq)))
        logdet_p = 2.0 * np.sum(np.log(np.diag(cp)))
        qi = np.linalg.inv(q.cov)
        dm = p.mean - q.mean
        return float(0.5 * (logdet_q - logdet_p - d + dm @ qi @ dm + np.trace(qi @ p.cov)))
    raise DomainError(
        f"cannot take KL divergence between {type(p).__name__} and {type(q).__name__}"
    )


def eps_star_pe(posterior: ConjugatePosterior, true_model: NominalModel) -> float:
    """Smallest radius whose posterior-expected-KL ball contains ``true_model``.

    Computed as the closed-form same-family KL divergence from the true
    distribution to the nominal model, plus the Jensen gap.  Always at
    least ``eps_min``, with equality exactly when the true parameters
    coincide with the nominal ones.
    """
    return kl_divergence(true_model, nominal(posterior)) + gap_G(posterior)


def eps_star_pp_upper(posterior: ConjugatePosterior, true_model: NominalModel) -> float:
    """Upper bound on the radius needed for the predictive-centred ball.

    The KL divergence is jointly convex, so the divergence to the
    predictive mixture is at most the posterior-expected divergence:
    the bound returned here equals :func:`eps_star_pe`.
    """
    return eps_star_pe(posterior, true_model)


def mle_model(family: str, data) -> NominalModel:
    """Maximum-likelihood fit used by the plug-in radius heuristic."""
    if family == GAMMA_EXPONENTIAL:
        x = _as_data_matrix(data, 1, support_positive=True)[:, 0]
        return ExponentialModel(rate=1.0 / float(x.mean()))
    if family == NORMAL_GAMMA:
        x = _as_data_matrix(data, 1, support_positive=False)[:, 0]
        var = float(np.var(x))
        if var <= 0:
            raise DomainError("degenerate sample variance; cannot fit a Normal")
        return UnivariateNormalModel(mean=float(x.mean()), precision=1.0 / var)
    if family == NORMAL_INVERSE_WISHART:
        x = np.asarray(data, dtype=float)
        if x.ndim != 2:
            raise DomainError("multivariate data must be a matrix")
        mean = x.mean(axis=0)
        dev = x - mean
        cov = dev.T @ dev / x.shape[0]
        return MultivariateNormalModel(mean=mean, cov=cov)
    raise DomainError(f"unknown family {family!r}")


def eps_star_pe_plugin(posterior: ConjugatePosterior, data) -> float:
    """Plug-in radius estimate with the MLE standing in for the true parameters.

    Heuristic: the true distribution is unknown in practice, so the
    maximum-likelihood fit of the observed data is substituted into
    :func:`eps_star_pe`.
    """
    return eps_star_pe(posterior, mle_model(posterior.family, data))


@dataclass(frozen=True)
class ToleranceReport:
    eps_min: float
    eps_star_pe: float | None
    eps_star_pp_upper: float | None


def tolerance_report(posterior: ConjugatePosterior, true_model: NominalModel | None = None) -> ToleranceReport:
    e_min = eps_min(posterior)
    if true_model is None:
        return ToleranceReport(e_min, None, None)
    e_star = eps_star_pe(posterior, true_model)
    return ToleranceReport(e_min, e_star, e_star)


# ---------------------------------------------------------------------------
# posterior predictive
# ---------------------------------------------------------------------------


def predictive(posterior: ConjugatePosterior) -> PredictiveModel:
    """Posterior predictive distribution of the next observation."""
    p = posterior.params
    if posterior.family == NORMAL_GAMMA:
        return StudentTModel(
            dof=2.0 * p.alpha,
            loc=p.mu,
            scale_sq=p.beta * (p.kappa + 1.0) / (p.alpha * p.kappa),
        )
    if posterior.family == GAMMA_EXPONENTIAL:
        return LomaxModel(alpha=p.alpha, beta=p.beta)
    d = p.dim
    dof = p.kappa - d + 1.0
    if dof <= 0:
        raise DomainError(f"degenerate predictive: kappa - D + 1 = {dof} must be positive")
    shape = p.psi * (p.kappa + 1.0) / (p.kappa * dof)
    return MultivariateStudentTModel(dof=dof, loc=p.mu, shape=shape)


# ---------------------------------------------------------------------------
# posterior parameter sampling (standard parametrization)
# ---------------------------------------------------------------------------


def sample_inverse_wishart(psi: np.ndarray, dof: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` inverse-Wishart matrices via the Bartlett decomposition.

    The precision ``Sigma^-1`` is Wishart with scale ``psi^-1``; a draw is
    ``M M^T`` with ``M = B A`` where ``B B^T = psi^-1`` and ``A`` is the
    lower-triangular Bartlett factor.  Returns an array ``(count, D, D)``.
    """
    psi = np.asarray(psi, dtype=float)
    d = psi.shape[0]
    if dof <= d - 1:
        raise DomainError(f"inverse-Wishart dof must exceed D - 1 = {d - 1}, got {dof}")
    chol_psi = np.linalg.cholesky(psi)
    # B = chol(psi)^-T satisfies B B^T = psi^-1
    b = solve_triangular(chol_psi, np.eye(d), lower=True).T
    a = np.zeros((count, d, d))
    rows, cols = np.tril_indices(d, k=-1)
    if rows.size:
        a[:, rows, cols] = rng.standard_normal((count, rows.size))
    for i in range(d):
        a[:, i, i] = np.sqrt(rng.chisquare(dof - i, count))
    m = b @ a  # (count, d, d), factor of the precision draw
    eye = np.broadcast_to(np.eye(d), (count, d, d))
    m_inv = np.linalg.solve(m, eye)
    sigma = np.transpose(m_inv, (0, 2, 1)) @ m_inv
    return 0.5 * (sigma + np.transpose(sigma, (0, 2, 1)))


def sample_posterior_params(posterior: ConjugatePosterior, count: int, rng: np.random.Generator):
    """Draw standard-parameter samples from the posterior.

    Returns family-specific arrays: ``(mu, lam)`` for NormalGamma,
    ``lam`` for GammaExponential, ``(mu, sigma)`` for the NIW family
    where ``sigma`` has shape ``(count, D, D)``.
    """
    p = posterior.params
    if posterior.family == NORMAL_GAMMA:
        lam = rng.gamma(shape=p.alpha, scale=1.0 / p.beta, size=count)
        mu = rng.normal(p.mu, 1.0 / np.sqrt(p.kappa * lam))
        return mu, lam
    if posterior.family == GAMMA_EXPONENTIAL:
        return rng.gamma(shape=p.alpha, scale=1.0 / p.beta, size=count)
    sigma = sample_inverse_wishart(p.psi, p.iota, count, rng)
    chols = np.linalg.cholesky(sigma / p.kappa)
    z = rng.standard_normal((count, p.dim))
    mu = p.mu + np.einsum("nij,nj->ni", chols, z)
    return mu, sigma


def sample_likelihood(family: str, theta, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` observations from the likelihood at parameters ``theta``."""
    if family == NORMAL_GAMMA:
        mu, lam = theta
        return rng.normal(mu, 1.0 / math.sqrt(lam), size=(count, 1))
    if family == GAMMA_EXPONENTIAL:
        return rng.exponential(1.0 / float(theta), size=(count, 1))
    if family == NORMAL_INVERSE_WISHART:
        mu, sigma = theta
        chol = np.linalg.cholesky(sigma)
        z = rng.standard_normal((count, len(mu)))
        return np.asarray(mu) + z @ chol.T
    raise DomainError(f"unknown family {family!r}")
