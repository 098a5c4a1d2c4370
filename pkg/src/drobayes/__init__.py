"""Distributionally robust decision-making with posterior-informed KL ambiguity sets."""

__version__ = "0.1.0"

from .expfam import (
    ConjugatePosterior,
    DomainError,
    ExponentialModel,
    GammaParams,
    LomaxModel,
    MultivariateNormalModel,
    MultivariateStudentTModel,
    NiwParams,
    NormalGammaParams,
    StudentTModel,
    ToleranceReport,
    UnivariateNormalModel,
    eps_min,
    eps_star_pe,
    eps_star_pe_plugin,
    eps_star_pp_upper,
    gamma_exponential,
    gap_G,
    kl_divergence,
    nominal,
    normal_gamma,
    normal_inverse_wishart,
    posterior_update,
    predictive,
    tolerance_report,
)
from .duals import (
    InfiniteNormalizerError,
    InnerSolution,
    NewsvendorLoss,
    PortfolioLoss,
    SaaDualProblem,
    UnboundedProblemError,
    closed_form_gaussian_linear,
    envelope_subgradient,
    exact_dual_1d,
    inner_gamma_opt,
    perspective_lse,
    worst_case_density,
)
from .solver import (
    Box,
    DualSolution,
    Simplex,
    SolveConfig,
    project,
    solve_closed_form_portfolio,
    solve_drobas,
)
from .baselines import (
    BdroConfig,
    solve_bdro,
    solve_bdro_gaussian_linear,
    solve_empirical_kl,
    solve_wasserstein,
)
from .bench import (
    ContaminatedExponentialDgp,
    ExponentialDgp,
    MultivariateNormalDgp,
    NewsvendorConfig,
    NormalDgp,
    OosRecord,
    OosSummary,
    PortfolioConfig,
    TruncatedNormalDgp,
    crossval_epsilon,
    oos_summary,
    pareto_front,
    run_newsvendor,
    run_portfolio,
    sample_dgp,
)
