"""Command-line entry points.

Subcommands: simulate-chain, prior-kn, fit, generate-data. Every command is
deterministic given its configuration and seed; numeric output is serialized
at full precision. A JSON config file with flat keys can preset any option,
with explicit command-line flags taking precedence.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import baselines, chain, data as data_mod, mixture, stickbreak
from .params import BBSBParams, INFINITY, NormalGammaBase, format_kappa, parse_kappa
from .sampling import beta_rv


def _load_config(path) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return cfg


def _merged(args, defaults: dict) -> dict:
    """defaults < config file < explicit CLI flags."""
    cfg = dict(defaults)
    if getattr(args, "config", None):
        file_cfg = _load_config(args.config)
        unknown = set(file_cfg) - set(defaults)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _parse_kappa_list(text) -> list:
    if isinstance(text, list):
        return [parse_kappa(k) for k in text]
    return [parse_kappa(part) for part in str(text).split(",") if part]


def _parse_float_list(text) -> list:
    if isinstance(text, list):
        return [float(x) for x in text]
    return [float(part) for part in str(text).split(",") if part]


def _ensure_out(path) -> str:
    os.makedirs(path, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# simulate-chain


def cmd_simulate_chain(args) -> int:
    cfg = _merged(args, {
        "kappa_list": "0,10,100,inf",
        "alpha": 1.0,
        "theta": 1.0,
        "sticks": 25,
        "seed": 0,
        "out": "chain_out",
    })
    out = _ensure_out(cfg["out"])
    kappas = _parse_kappa_list(cfg["kappa_list"])
    rng = np.random.default_rng(cfg["seed"])
    alpha, theta = float(cfg["alpha"]), float(cfg["theta"])
    # all chains share the same initial draw so trajectories are comparable
    v1 = float(beta_rv(rng, alpha, theta))
    for kappa in kappas:
        params = BBSBParams(kappa=kappa, alpha=alpha, theta=theta)
        sample = chain.sample_chain(params, int(cfg["sticks"]), rng, v1=v1)
        sticks = stickbreak.stick_break(sample.v)
        path = os.path.join(out, f"chain_kappa_{format_kappa(kappa)}.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["j", "v", "w"])
            for j, (v, w) in enumerate(zip(sticks.v, sticks.w), start=1):
                writer.writerow([j, f"{v:.17g}", f"{w:.17g}"])
    return 0


# ---------------------------------------------------------------------------
# prior-kn


def cmd_prior_kn(args) -> int:
    cfg = _merged(args, {
        "kappa_list": "0,10,100,inf",
        "sweep": "theta",
        "alpha": 1.0,
        "theta": 1.0,
        "theta_list": "0.5,1,3,6,10",
        "alpha_list": "0.5,0.75,1,3,6",
        "n": 20,
        "reps": 10000,
        "seed": 0,
        "out": "prior_kn_out",
    })
    out = _ensure_out(cfg["out"])
    kappas = _parse_kappa_list(cfg["kappa_list"])
    if cfg["sweep"] == "theta":
        sweep_values = _parse_float_list(cfg["theta_list"])
        fixed = ("alpha", float(cfg["alpha"]))
    elif cfg["sweep"] == "alpha":
        sweep_values = _parse_float_list(cfg["alpha_list"])
        fixed = ("theta", float(cfg["theta"]))
    else:
        raise ValueError(f"sweep must be 'theta' or 'alpha', got {cfg['sweep']!r}")
    for k_idx, kappa in enumerate(kappas):
        for v_idx, value in enumerate(sweep_values):
            if cfg["sweep"] == "theta":
                params = BBSBParams(kappa=kappa, alpha=fixed[1], theta=value)
            else:
                params = BBSBParams(kappa=kappa, alpha=value, theta=fixed[1])
            rng = np.random.default_rng([int(cfg["seed"]), k_idx, v_idx])
            hist = stickbreak.sample_Kn(int(cfg["n"]), params,
                                        int(cfg["reps"]), rng)
            name = (f"kn_kappa_{format_kappa(kappa)}_{cfg['sweep']}_"
                    f"{value:g}.csv")
            hist.to_csv(os.path.join(out, name))
    return 0


# ---------------------------------------------------------------------------
# fit


def _resolve_base(cfg, values: np.ndarray) -> NormalGammaBase:
    location = cfg["location"]
    if location == "data-mean":
        location = float(values.mean())
    return NormalGammaBase(location=float(location),
                           scale_factor=float(cfg["scale_factor"]),
                           shape=float(cfg["shape"]),
                           rate=float(cfg["rate"]))


def _resolve_grid(cfg, values: np.ndarray) -> np.ndarray:
    points = int(cfg["grid_points"])
    if points < 2:
        raise ValueError("grid_points must be at least 2")
    lo = cfg["grid_min"]
    hi = cfg["grid_max"]
    if lo is None or hi is None:
        return mixture.default_grid(values, points)
    return np.linspace(float(lo), float(hi), points)


def cmd_fit(args) -> int:
    cfg = _merged(args, {
        "data": None,
        "model": "bbsb",
        "kappa": "random",
        "alpha": 1.0,
        "theta": 1.0,
        "sigma": None,
        "kappa_lo": 0,
        "kappa_hi": 100,
        "iterations": 8000,
        "burn_in": 3000,
        "seed": 0,
        "variant": "paper",
        "location": "data-mean",
        "scale_factor": 100.0,
        "shape": 0.5,
        "rate": 0.5,
        "grid_min": None,
        "grid_max": None,
        "grid_points": 512,
        "out": "fit_out",
    })
    if cfg["data"] is None:
        raise ValueError("fit requires --data PATH (CSV with a 'y' column)")
    dataset = data_mod.load(cfg["data"])
    out = _ensure_out(cfg["out"])
    base = _resolve_base(cfg, dataset.values)
    grid = _resolve_grid(cfg, dataset.values)
    trace_path = os.path.join(out, "trace.csv")
    if os.path.exists(trace_path):
        os.remove(trace_path)

    model = cfg["model"]
    if model == "pitman-yor":
        sigma_grid = None
        if cfg["sigma"] is None:
            sigma = 0.0
            sigma_grid = baselines.default_sigma_grid()
        else:
            sigma = float(cfg["sigma"])
        params = baselines.PitmanYorParams(sigma=sigma, theta=float(cfg["theta"]))
        config = mixture.GibbsConfig(
            iterations=int(cfg["iterations"]), burn_in=int(cfg["burn_in"]),
            seed=int(cfg["seed"]), grid=grid, trace_path=trace_path)
        summary = baselines.run_pitman_yor(dataset.values, params, base,
                                           config, sigma_grid=sigma_grid)
    else:
        if model == "dp":
            kappa, alpha = 0, 1.0
            kappa_prior = None
        elif model == "geometric":
            kappa, alpha = INFINITY, float(cfg["alpha"])
            kappa_prior = None
        elif model == "bbsb":
            alpha = float(cfg["alpha"])
            if str(cfg["kappa"]).strip().lower() == "random":
                kappa_prior = mixture.KappaPrior.uniform(int(cfg["kappa_lo"]),
                                                         int(cfg["kappa_hi"]))
                kappa = kappa_prior.mode()
            else:
                kappa = parse_kappa(cfg["kappa"])
                kappa_prior = None
        else:
            raise ValueError(f"unknown model {model!r}")
        params = BBSBParams(kappa=kappa, alpha=alpha, theta=float(cfg["theta"]))
        config = mixture.GibbsConfig(
            iterations=int(cfg["iterations"]), burn_in=int(cfg["burn_in"]),
            seed=int(cfg["seed"]), kappa_prior=kappa_prior,
            variant=cfg["variant"], grid=grid, trace_path=trace_path)
        summary = mixture.run_gibbs(dataset.values, params, base, config)

    summary.write_csvs(out)
    summary.to_json(os.path.join(out, "summary.json"))
    return 0


# ---------------------------------------------------------------------------
# generate-data


def cmd_generate_data(args) -> int:
    cfg = _merged(args, {
        "db": None,
        "spec": None,
        "n": None,
        "seed": 0,
        "out": "data_out",
    })
    if (cfg["db"] is None) == (cfg["spec"] is None):
        raise ValueError("provide exactly one of --db {1,2,3} or --spec PATH")
    if cfg["db"] is not None:
        spec, default_n = data_mod.builtin_database(int(cfg["db"]))
    else:
        spec, default_n = data_mod.load_spec(cfg["spec"]), 200
    n = int(cfg["n"]) if cfg["n"] is not None else default_n
    dataset = data_mod.generate(spec, n, int(cfg["seed"]))
    out = _ensure_out(cfg["out"])
    data_mod.save(dataset, os.path.join(out, "data.csv"), fmt="csv")
    data_mod.save(dataset, os.path.join(out, "data.json"), fmt="json")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bbsb",
        description="Beta-Binomial stick-breaking priors: chain simulation, "
                    "prior group counts, and mixture density estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file with flat keys")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")

    p = sub.add_parser("simulate-chain",
                       help="write length-variable/weight trajectories")
    add_common(p)
    p.add_argument("--kappa-list", dest="kappa_list")
    p.add_argument("--alpha", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--sticks", type=int)
    p.set_defaults(func=cmd_simulate_chain)

    p = sub.add_parser("prior-kn",
                       help="sample the prior number of groups over a "
                            "parameter sweep")
    add_common(p)
    p.add_argument("--kappa-list", dest="kappa_list")
    p.add_argument("--sweep", choices=["theta", "alpha"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--theta-list", dest="theta_list")
    p.add_argument("--alpha-list", dest="alpha_list")
    p.add_argument("--n", type=int)
    p.add_argument("--reps", type=int)
    p.set_defaults(func=cmd_prior_kn)

    p = sub.add_parser("fit", help="run the slice-Gibbs sampler on a dataset")
    add_common(p)
    p.add_argument("--data")
    p.add_argument("--model", choices=["bbsb", "dp", "geometric",
                                       "pitman-yor"])
    p.add_argument("--kappa")
    p.add_argument("--alpha", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--kappa-lo", dest="kappa_lo", type=int)
    p.add_argument("--kappa-hi", dest="kappa_hi", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--variant", choices=["paper", "augmented"])
    p.add_argument("--location")
    p.add_argument("--scale-factor", dest="scale_factor", type=float)
    p.add_argument("--shape", type=float)
    p.add_argument("--rate", type=float)
    p.add_argument("--grid-min", dest="grid_min", type=float)
    p.add_argument("--grid-max", dest="grid_max", type=float)
    p.add_argument("--grid-points", dest="grid_points", type=int)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("generate-data",
                       help="materialize a built-in or custom dataset")
    add_common(p)
    p.add_argument("--db", type=int, choices=[1, 2, 3])
    p.add_argument("--spec")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_generate_data)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, stickbreak.TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
