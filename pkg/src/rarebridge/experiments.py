"""The four reproduction experiments with their default parameters.

Each ``run_*`` takes a fully resolved config dict (see ``default_config``)
and returns the text of its result file, so the CLI and the manifest replay
share one code path.
"""

from __future__ import annotations

from rarebridge.dynamics import DynamicsConfig, run_dynamics, trace_csv
from rarebridge.graph import gen_barbell, gen_chain_sbm
from rarebridge.protocol import (
    ProtocolConfig,
    ResultRow,
    results_to_csv,
    results_to_json,
    run_phase_sweep,
    run_protocol,
)
from rarebridge.sparsify import DEFAULT_LAMBDA, STRATEGIES

EXPERIMENTS = ("barbell", "chain", "phase", "dynamics")
DEFAULT_SEED = 42


def default_config(name: str, seed: int = DEFAULT_SEED) -> dict:
    if name == "barbell":
        return {
            "clique_size": 8, "clique_freq": 0.95, "bridge_freq": 0.05,
            "trials": 500, "rho": 0.5, "lambda": DEFAULT_LAMBDA,
            "strategies": list(STRATEGIES), "seed": seed,
        }
    if name == "chain":
        return {
            "clique_sizes": [10, 15, 20], "clique_freq": 0.95, "bridge_freq": 0.05,
            "trials": 500, "rho": 0.6, "lambda": DEFAULT_LAMBDA,
            "strategies": list(STRATEGIES), "seed": seed,
        }
    if name == "phase":
        return {
            "clique_size": 8, "clique_freq": 0.95, "k_max": 8,
            "trials": 500, "rho": 0.6, "lambda": DEFAULT_LAMBDA,
            "strategies": ["Standard", "Weighted"], "seed": seed,
        }
    if name == "dynamics":
        return {
            "epsilon": 0.05, "omega_standard": 1.0, "omega_weighted": 50.0,
            "eta": 0.05, "batch": 64, "steps": 2000, "theta0": 0.0, "seed": seed,
        }
    raise ValueError(f"unknown experiment {name!r}")


def _protocol_config(cfg):
    return ProtocolConfig(cfg["trials"], cfg["rho"], cfg["lambda"], cfg["seed"], tuple(cfg["strategies"]))


def _render(rows, fmt):
    return results_to_json(rows) if fmt == "json" else results_to_csv(rows)


def run_barbell(cfg: dict, fmt: str = "csv", jobs: int = 1) -> str:
    inst = gen_barbell(cfg["clique_size"], cfg["clique_freq"], cfg["bridge_freq"])
    pcfg = _protocol_config(cfg)
    stats = run_protocol(inst, pcfg, jobs=jobs)
    return _render([ResultRow("barbell", s, pcfg.rho, pcfg.lam, pcfg.base_seed) for s in stats], fmt)


def run_chain(cfg: dict, fmt: str = "csv", jobs: int = 1) -> str:
    inst = gen_chain_sbm(cfg["clique_sizes"], cfg["clique_freq"], cfg["bridge_freq"])
    pcfg = _protocol_config(cfg)
    stats = run_protocol(inst, pcfg, jobs=jobs)
    return _render([ResultRow("chain", s, pcfg.rho, pcfg.lam, pcfg.base_seed) for s in stats], fmt)


def run_phase(cfg: dict, fmt: str = "csv", jobs: int = 1) -> str:
    pcfg = _protocol_config(cfg)
    series = run_phase_sweep(cfg["clique_size"], range(1, cfg["k_max"] + 1), pcfg, jobs=jobs)
    rows = [ResultRow("phase", s, pcfg.rho, pcfg.lam, pcfg.base_seed, k) for k, s in series]
    return _render(rows, fmt)


def run_dynamics_pair(cfg: dict, fmt: str = "csv", jobs: int = 1) -> str:
    common = dict(
        epsilon=cfg["epsilon"], eta=cfg["eta"], batch=cfg["batch"],
        steps=cfg["steps"], theta0=cfg["theta0"], seed=cfg["seed"],
    )
    standard = run_dynamics(DynamicsConfig(omega=cfg["omega_standard"], **common))
    weighted = run_dynamics(DynamicsConfig(omega=cfg["omega_weighted"], **common))
    return trace_csv(standard, weighted)


RUNNERS = {
    "barbell": run_barbell,
    "chain": run_chain,
    "phase": run_phase,
    "dynamics": run_dynamics_pair,
}


def run_experiment(name: str, cfg: dict, fmt: str = "csv", jobs: int = 1) -> str:
    return RUNNERS[name](cfg, fmt, jobs)
