"""Command-line entry point: config parsing, subcommands, result persistence.

Subcommands: ``newsvendor``, ``portfolio``, ``cv``, ``tolerances``,
``solve-one``, ``validate-config``.  Each takes a JSON config via
``--config`` plus optional dotted-path ``--set key=value`` overrides and
``--seed`` / ``--out`` / ``--threads`` flags.  Successful runs write result
CSVs and a run manifest (config echo, versions, wall time) under the
output directory.  Exit codes: 0 success, 2 config error, 3 data ingestion
error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .bench import (
    METHODS,
    SELECTION_RULES,
    ContaminatedExponentialDgp,
    ExponentialDgp,
    MultivariateNormalDgp,
    NewsvendorConfig,
    NormalDgp,
    PortfolioConfig,
    TruncatedNormalDgp,
    crossval_epsilon,
    default_prior_for,
    log_spaced_epsilons,
    oos_summary,
    read_returns_csv,
    run_newsvendor,
    run_portfolio,
    write_results_csv,
    write_returns_csv,
    write_summary_csv,
)
from .duals import NewsvendorLoss, PortfolioLoss
from .expfam import (
    ConjugatePosterior,
    ExponentialModel,
    MultivariateNormalModel,
    UnivariateNormalModel,
    eps_star_pe,
    eps_star_pe_plugin,
    eps_min,
    gamma_exponential,
    normal_gamma,
    normal_inverse_wishart,
    posterior_update,
)
from .solver import Box, Simplex, SolveConfig, solve_drobas
from .baselines import BdroConfig, solve_bdro, solve_empirical_kl, solve_wasserstein, split_sample_budget

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_INGESTION = 3

EXPERIMENTS = ("newsvendor", "portfolio", "cv", "tolerances", "solve-one")


class ConfigError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class IngestionError(Exception):
    pass


# ---------------------------------------------------------------------------
# config access helpers
# ---------------------------------------------------------------------------


def _get(cfg: dict, key: str, path: str, required: bool = True, default=None):
    if key not in cfg:
        if required:
            raise ConfigError(f"{path}.{key}" if path else key, "missing")
        return default
    return cfg[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    return float(value)


def _int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    return value


def _str_choice(value, choices, path: str) -> str:
    if value not in choices:
        raise ConfigError(path, f"expected one of {list(choices)}, got {value!r}")
    return value


def parse_posterior(cfg: dict, path: str) -> ConjugatePosterior:
    family = _get(cfg, "family", path)
    n_obs = _int(cfg.get("n_obs", 0), f"{path}.n_obs")
    try:
        if family == "NormalGamma":
            return normal_gamma(
                _number(_get(cfg, "mu", path), f"{path}.mu"),
                _number(_get(cfg, "kappa", path), f"{path}.kappa"),
                _number(_get(cfg, "alpha", path), f"{path}.alpha"),
                _number(_get(cfg, "beta", path), f"{path}.beta"),
                n_obs,
            )
        if family == "GammaExponential":
            return gamma_exponential(
                _number(_get(cfg, "alpha", path), f"{path}.alpha"),
                _number(_get(cfg, "beta", path), f"{path}.beta"),
                n_obs,
            )
        if family == "NormalInverseWishart":
            return normal_inverse_wishart(
                np.asarray(_get(cfg, "mu", path), dtype=float),
                _number(_get(cfg, "kappa", path), f"{path}.kappa"),
                _number(_get(cfg, "iota", path), f"{path}.iota"),
                np.asarray(_get(cfg, "psi", path), dtype=float),
                n_obs,
            )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(
        f"{path}.family",
        "expected NormalGamma, GammaExponential or NormalInverseWishart",
    )


def posterior_to_json(posterior: ConjugatePosterior) -> dict:
    p = posterior.params
    out = {"family": posterior.family, "n_obs": posterior.n_obs}
    if posterior.family == "NormalGamma":
        out.update(mu=p.mu, kappa=p.kappa, alpha=p.alpha, beta=p.beta)
    elif posterior.family == "GammaExponential":
        out.update(alpha=p.alpha, beta=p.beta)
    else:
        out.update(mu=p.mu.tolist(), kappa=p.kappa, iota=p.iota, psi=p.psi.tolist())
    return out


def parse_dgp(cfg: dict, path: str):
    kind = _get(cfg, "kind", path)
    try:
        if kind == "exponential":
            return ExponentialDgp(_number(_get(cfg, "rate", path), f"{path}.rate"))
        if kind == "normal":
            return NormalDgp(
                _number(_get(cfg, "mean", path), f"{path}.mean"),
                _number(_get(cfg, "sd", path), f"{path}.sd"),
            )
        if kind == "truncated-normal":
            return TruncatedNormalDgp(
                _number(_get(cfg, "mean", path), f"{path}.mean"),
                _number(_get(cfg, "sd", path), f"{path}.sd"),
                _number(cfg.get("lower", 0.0), f"{path}.lower"),
            )
        if kind == "contaminated-exponential":
            return ContaminatedExponentialDgp(
                _number(_get(cfg, "rate", path), f"{path}.rate"),
                _number(cfg.get("contam_mean", 100.0), f"{path}.contam_mean"),
                _number(cfg.get("contam_sd", 0.5), f"{path}.contam_sd"),
                _number(cfg.get("contam_frac", 0.2), f"{path}.contam_frac"),
            )
        if kind == "mvnormal":
            return MultivariateNormalDgp(
                np.asarray(_get(cfg, "mean", path), dtype=float),
                np.asarray(_get(cfg, "cov", path), dtype=float),
            )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(f"{path}.kind", f"unknown DGP kind {kind!r}")


def parse_epsilons(value, path: str) -> tuple[float, ...]:
    if isinstance(value, list):
        if not value:
            raise ConfigError(path, "epsilon grid must be nonempty")
        return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(value))
    if isinstance(value, dict):
        lo = _number(_get(value, "min", path), f"{path}.min")
        hi = _number(_get(value, "max", path), f"{path}.max")
        count = _int(_get(value, "count", path), f"{path}.count")
        spacing = value.get("spacing", "log")
        if spacing == "log":
            return log_spaced_epsilons(lo, hi, count)
        if spacing == "linear":
            return tuple(float(e) for e in np.linspace(lo, hi, count))
        raise ConfigError(f"{path}.spacing", f"expected log or linear, got {spacing!r}")
    raise ConfigError(path, "expected a list of radii or a grid specification")


def parse_solver(cfg: dict | None, path: str) -> SolveConfig:
    if cfg is None:
        return SolveConfig()
    try:
        return SolveConfig(
            max_iters=_int(cfg.get("max_iters", 400), f"{path}.max_iters"),
            tol=_number(cfg.get("tol", 1e-6), f"{path}.tol"),
            step_a=None if cfg.get("step_a") is None else _number(cfg["step_a"], f"{path}.step_a"),
            step_b=_number(cfg.get("step_b", 0.1), f"{path}.step_b"),
            restarts=_int(cfg.get("restarts", 1), f"{path}.restarts"),
            seed=_int(cfg.get("seed", 0), f"{path}.seed"),
        )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(path, str(exc)) from None


def parse_loss(cfg: dict | None, path: str):
    if cfg is None:
        return NewsvendorLoss(3.0, 8.0)
    kind = cfg.get("kind", "newsvendor")
    if kind == "newsvendor":
        return NewsvendorLoss(
            _number(_get(cfg, "holding", path), f"{path}.holding"),
            _number(_get(cfg, "backorder", path), f"{path}.backorder"),
        )
    if kind == "portfolio":
        return PortfolioLoss()
    raise ConfigError(f"{path}.kind", f"unknown loss kind {kind!r}")


def parse_true_params(cfg: dict, path: str):
    try:
        if "rate" in cfg:
            return ExponentialModel(_number(cfg["rate"], f"{path}.rate"))
        if "precision" in cfg:
            return UnivariateNormalModel(
                _number(_get(cfg, "mean", path), f"{path}.mean"),
                _number(cfg["precision"], f"{path}.precision"),
            )
        if "cov" in cfg:
            return MultivariateNormalModel(
                np.asarray(_get(cfg, "mean", path), dtype=float),
                np.asarray(cfg["cov"], dtype=float),
            )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(path, "expected rate, mean/precision, or mean/cov fields")


def apply_overrides(cfg: dict, overrides: list[str]) -> dict:
    out = json.loads(json.dumps(cfg))
    for item in overrides:
        if "=" not in item:
            raise ConfigError("--set", f"expected key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(key, "override path does not address an object")
        node[parts[-1]] = value
    return out


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------


def _validate_newsvendor(cfg: dict) -> NewsvendorConfig:
    dgp = parse_dgp(_get(cfg, "dgp", ""), "dgp")
    prior = (
        parse_posterior(cfg["prior"], "prior") if "prior" in cfg else default_prior_for(dgp)
    )
    loss = parse_loss(cfg.get("loss"), "loss")
    if not isinstance(loss, NewsvendorLoss):
        raise ConfigError("loss", "newsvendor experiment requires a newsvendor loss")
    feas_cfg = cfg.get("feasible", {})
    lower = _number(feas_cfg.get("lower", 0.0), "feasible.lower")
    upper = _number(feas_cfg.get("upper", 100.0), "feasible.upper")
    feasible = Box.cube(lower, upper, dgp.dim)
    methods = _get(cfg, "methods", "")
    if not isinstance(methods, list) or not methods:
        raise ConfigError("methods", "expected a nonempty list")
    for i, m in enumerate(methods):
        _str_choice(m, METHODS, f"methods[{i}]")
    epsilons = parse_epsilons(_get(cfg, "epsilon", ""), "epsilon")
    m_samples = _get(cfg, "m_samples", "", required=False, default=[100])
    if not isinstance(m_samples, list) or not m_samples:
        raise ConfigError("m_samples", "expected a nonempty list")
    return NewsvendorConfig(
        dgp=dgp,
        prior=prior,
        loss=loss,
        feasible=feasible,
        methods=tuple(methods),
        epsilons=epsilons,
        m_samples=tuple(_int(m, f"m_samples[{i}]") for i, m in enumerate(m_samples)),
        j_seeds=_int(_get(cfg, "j_seeds", ""), "j_seeds"),
        n_train=_int(cfg.get("n_train", 20), "n_train"),
        t_test=_int(cfg.get("t_test", 50), "t_test"),
        seed=_int(cfg.get("seed", 0), "seed"),
        solver=parse_solver(cfg.get("solver"), "solver"),
        threads=_int(cfg.get("threads", 1), "threads"),
    )


def _run_newsvendor(cfg: dict, out_dir: Path) -> list[Path]:
    nv = _validate_newsvendor(cfg)
    records = run_newsvendor(nv)
    paths = [out_dir / "results.csv"]
    write_results_csv(records, paths[0])
    for m in nv.m_samples:
        subset = [r for r in records if r.m_samples == m]
        name = "summary.csv" if len(nv.m_samples) == 1 else f"summary_M{m}.csv"
        path = out_dir / name
        write_summary_csv(oos_summary(subset), path)
        paths.append(path)
    return paths


def _validate_portfolio(cfg: dict) -> tuple[PortfolioConfig, str]:
    returns_csv = _get(cfg, "returns_csv", "")
    methods = _get(cfg, "methods", "")
    if not isinstance(methods, list) or not methods:
        raise ConfigError("methods", "expected a nonempty list")
    for i, m in enumerate(methods):
        _str_choice(m, ("pe", "pp", "bdro"), f"methods[{i}]")
    pc = PortfolioConfig(
        methods=tuple(methods),
        epsilons=parse_epsilons(_get(cfg, "epsilon", ""), "epsilon"),
        prior=parse_posterior(cfg["prior"], "prior") if "prior" in cfg else None,
        n_train=_int(cfg.get("n_train", 52), "n_train"),
        t_test=_int(cfg.get("t_test", 12), "t_test"),
        m_pp=_int(cfg.get("m_pp", 3600), "m_pp"),
        m_theta=_int(cfg.get("m_theta", 900), "m_theta"),
        seed=_int(cfg.get("seed", 0), "seed"),
        solver=parse_solver(cfg.get("solver"), "solver"),
        threads=_int(cfg.get("threads", 1), "threads"),
        psi_scale=_number(cfg.get("psi_scale", 1.0), "psi_scale"),
    )
    return pc, returns_csv


def _run_portfolio(cfg: dict, out_dir: Path) -> list[Path]:
    pc, returns_csv = _validate_portfolio(cfg)
    if not Path(returns_csv).exists():
        raise IngestionError(f"returns_csv: file not found: {returns_csv}")
    try:
        returns = read_returns_csv(returns_csv)
    except ValueError as exc:
        raise IngestionError(str(exc)) from None
    records, series = run_portfolio(pc, returns)
    paths = [out_dir / "results.csv", out_dir / "summary.csv", out_dir / "returns.csv"]
    write_results_csv(records, paths[0])
    write_summary_csv(oos_summary(records), paths[1])
    write_returns_csv(series, paths[2])
    return paths


def _run_cv(cfg: dict, out_dir: Path) -> list[Path]:
    loss = parse_loss(cfg.get("loss"), "loss")
    method = _str_choice(_get(cfg, "method", ""), METHODS, "method")
    epsilons = parse_epsilons(_get(cfg, "epsilon", ""), "epsilon")
    seed = _int(cfg.get("seed", 0), "seed")
    if "data" in cfg:
        data = np.asarray(cfg["data"], dtype=float)
    elif "dgp" in cfg:
        dgp = parse_dgp(cfg["dgp"], "dgp")
        n = _int(_get(cfg, "n_train", ""), "n_train")
        data = dgp.sample(n, np.random.default_rng(seed))
    else:
        raise ConfigError("data", "missing (provide data or a dgp plus n_train)")
    if data.ndim == 1:
        data = data.reshape(-1, 1)
    prior = None
    if method in ("pe", "pp", "bdro"):
        if "prior" in cfg:
            prior = parse_posterior(cfg["prior"], "prior")
        elif "dgp" in cfg:
            prior = default_prior_for(parse_dgp(cfg["dgp"], "dgp"))
        else:
            raise ConfigError("prior", "missing (required for model-based methods)")
    feas_cfg = cfg.get("feasible", {})
    feasible = Box.cube(
        _number(feas_cfg.get("lower", 0.0), "feasible.lower"),
        _number(feas_cfg.get("upper", 100.0), "feasible.upper"),
        data.shape[1],
    )
    chosen, rows = crossval_epsilon(
        data,
        loss,
        method,
        epsilons,
        folds=_int(cfg.get("folds", 10), "folds"),
        selection=_str_choice(cfg.get("selection", "min-mean"), SELECTION_RULES, "selection"),
        prior=prior,
        feasible=feasible,
        m_samples=_int(cfg.get("m_samples", 100), "m_samples"),
        solve_config=parse_solver(cfg.get("solver"), "solver"),
        seed=seed,
    )
    path = out_dir / "cv.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epsilon", "cv_mean", "cv_var", "cv_std", "feasible", "chosen"])
        for row in rows:
            writer.writerow(
                [
                    repr(row.epsilon),
                    repr(row.cv_mean),
                    repr(row.cv_var),
                    repr(row.cv_std),
                    str(row.feasible).lower(),
                    str(row.epsilon == chosen).lower(),
                ]
            )
    print(f"chosen epsilon: {chosen}")
    return [path]


def _run_tolerances(cfg: dict, out_dir: Path) -> list[Path]:
    posterior = parse_posterior(_get(cfg, "posterior", ""), "posterior")
    e_min = eps_min(posterior)
    e_star = None
    if "true_params" in cfg:
        e_star = eps_star_pe(posterior, parse_true_params(cfg["true_params"], "true_params"))
    elif "data" in cfg:
        # plug-in heuristic: maximum-likelihood fit stands in for the truth
        e_star = eps_star_pe_plugin(posterior, np.asarray(cfg["data"], dtype=float))
    path = out_dir / "tolerances.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eps_min", "eps_star_pe", "eps_star_pp_upper"])
        writer.writerow(
            [repr(e_min), "" if e_star is None else repr(e_star), "" if e_star is None else repr(e_star)]
        )
    print(f"eps_min: {e_min}" + (f", eps_star_pe: {e_star}" if e_star is not None else ""))
    return [path]


def _run_solve_one(cfg: dict, out_dir: Path) -> list[Path]:
    loss = parse_loss(cfg.get("loss"), "loss")
    method = _str_choice(_get(cfg, "method", ""), METHODS, "method")
    epsilon = _number(_get(cfg, "epsilon", ""), "epsilon")
    seed = _int(cfg.get("seed", 0), "seed")
    solver_cfg = parse_solver(cfg.get("solver"), "solver")
    m_samples = _int(cfg.get("m_samples", 1000), "m_samples")
    rng = np.random.default_rng(seed)

    if "data" in cfg:
        data = np.asarray(cfg["data"], dtype=float)
    elif "dgp" in cfg:
        dgp = parse_dgp(cfg["dgp"], "dgp")
        data = dgp.sample(_int(_get(cfg, "n_train", ""), "n_train"), rng)
    else:
        raise ConfigError("data", "missing (provide data or a dgp plus n_train)")
    if data.ndim == 1:
        data = data.reshape(-1, 1)

    if isinstance(loss, PortfolioLoss):
        feasible = Simplex(data.shape[1])
    else:
        feas_cfg = cfg.get("feasible", {})
        feasible = Box.cube(
            _number(feas_cfg.get("lower", 0.0), "feasible.lower"),
            _number(feas_cfg.get("upper", 100.0), "feasible.upper"),
            data.shape[1],
        )

    if method in ("pe", "pp", "bdro"):
        if "prior" in cfg:
            prior = parse_posterior(cfg["prior"], "prior")
        elif "dgp" in cfg:
            prior = default_prior_for(parse_dgp(cfg["dgp"], "dgp"))
        else:
            raise ConfigError("prior", "missing (required for model-based methods)")
        posterior = posterior_update(prior, data)
        if method == "bdro":
            m_theta, m_xi = split_sample_budget(m_samples)
            solution = solve_bdro(
                posterior, loss, feasible, BdroConfig(m_theta, m_xi, epsilon), solver_cfg, rng
            )
        else:
            solution = solve_drobas(
                posterior, loss, feasible, epsilon, method, m_samples, solver_cfg, rng
            )
    elif method == "kl":
        solution = solve_empirical_kl(data, loss, feasible, epsilon, solver_cfg, rng)
    else:
        solution = solve_wasserstein(data, loss, feasible, epsilon, solver_cfg, rng)

    path = out_dir / "solution.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["method", "epsilon", "objective", "gamma_star", "iterations", "converged",
             "solve_time_s", "sample_time_s", "x_star"]
        )
        writer.writerow(
            [
                method,
                repr(epsilon),
                repr(solution.objective),
                repr(solution.gamma_star),
                solution.iterations,
                str(solution.converged).lower(),
                repr(solution.solve_time_s),
                repr(solution.sample_time_s),
                ";".join(repr(float(v)) for v in solution.x_star),
            ]
        )
    print(f"objective: {solution.objective}, x_star: {solution.x_star}")
    return [path]


def _validate_only(cfg: dict) -> None:
    experiment = _str_choice(_get(cfg, "experiment", ""), EXPERIMENTS, "experiment")
    if experiment == "newsvendor":
        _validate_newsvendor(cfg)
    elif experiment == "portfolio":
        _validate_portfolio(cfg)
    elif experiment == "tolerances":
        parse_posterior(_get(cfg, "posterior", ""), "posterior")
    elif experiment == "cv":
        parse_loss(cfg.get("loss"), "loss")
        _str_choice(_get(cfg, "method", ""), METHODS, "method")
        parse_epsilons(_get(cfg, "epsilon", ""), "epsilon")
    else:
        _str_choice(_get(cfg, "method", ""), METHODS, "method")
        _number(_get(cfg, "epsilon", ""), "epsilon")


_RUNNERS = {
    "newsvendor": _run_newsvendor,
    "portfolio": _run_portfolio,
    "cv": _run_cv,
    "tolerances": _run_tolerances,
    "solve-one": _run_solve_one,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drobayes")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*EXPERIMENTS, "validate-config"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to a JSON config")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="dotted-path config override (JSON-parsed value)")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads for the experiment grid")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except FileNotFoundError:
            raise ConfigError("--config", f"file not found: {args.config}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("--config", f"invalid JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("--config", "top-level JSON value must be an object")

        cfg = apply_overrides(cfg, args.set)
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.threads is not None:
            cfg["threads"] = args.threads
        elif "threads" not in cfg:
            import os

            cfg["threads"] = os.cpu_count() or 1

        if args.command == "validate-config":
            _validate_only(cfg)
            print("config ok")
            return EXIT_OK

        experiment = _str_choice(_get(cfg, "experiment", ""), EXPERIMENTS, "experiment")
        if experiment != args.command:
            raise ConfigError("experiment", f"config is for {experiment!r}, not {args.command!r}")

        out_dir = Path(args.out if args.out is not None else cfg.get("output_dir", "out"))
        out_dir.mkdir(parents=True, exist_ok=True)

        start = time.perf_counter()
        outputs = _RUNNERS[experiment](cfg, out_dir)
        wall = time.perf_counter() - start

        manifest = {
            "experiment": experiment,
            "config": cfg,
            "versions": {
                "python": platform.python_version(),
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "drobayes": __version__,
            },
            "wall_time_s": wall,
            "outputs": [str(p) for p in outputs],
        }
        with open(out_dir / "run_manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2)
        print(f"wrote {len(outputs)} file(s) to {out_dir}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IngestionError as exc:
        print(f"ingestion error: {exc}", file=sys.stderr)
        return EXIT_INGESTION
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
