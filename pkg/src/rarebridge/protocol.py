"""Monte-Carlo sparsification harness.

Every trial draws from its own PCG64 stream seeded with
``mix_seed(base_seed, trial_index)``, so results do not depend on the order
trials run in or on how they are spread over worker processes.

``mix_seed`` is bit-exact::

    splitmix64(x) = finalize((x + 0x9E3779B97F4A7C15) mod 2**64)
    finalize(z):   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2**64
                   z = (z ^ (z >> 27)) * 0x94D049BB133111EB  mod 2**64
                   return z ^ (z >> 31)
    mix_seed(base, i) = splitmix64(base ^ splitmix64(i))
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from rarebridge import _backend
from rarebridge.errors import InvalidParameterError
from rarebridge.graph import GeneratedInstance, gen_visible_barbell
from rarebridge.sparsify import (
    DEFAULT_LAMBDA,
    STRATEGIES,
    Strategy,
    budget,
    rank_edges,
    score_edges,
)
from rarebridge.spectral import (
    ResistanceMap,
    fiedler_from_edges,
    rse_from_lambda2,
    weight_map,
)

__all__ = [
    "MASK64",
    "splitmix64",
    "mix_seed",
    "trial_rng",
    "ProtocolConfig",
    "TrialStats",
    "ResultRow",
    "run_trial",
    "run_trials",
    "aggregate",
    "run_protocol",
    "run_phase_sweep",
    "RESULT_FIELDS",
    "format_sig",
    "results_to_csv",
    "results_from_csv",
    "results_to_json",
    "results_from_json",
]

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(base_seed: int, trial_index: int) -> int:
    return splitmix64((base_seed & MASK64) ^ splitmix64(trial_index & MASK64))


def trial_rng(base_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(mix_seed(base_seed, trial_index)))


def _check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= MASK64:
        raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


@dataclass(frozen=True)
class ProtocolConfig:
    trials: int = 500
    rho: float = 0.5
    lam: float = DEFAULT_LAMBDA
    base_seed: int = 42
    strategies: tuple[str, ...] = STRATEGIES

    def __post_init__(self):
        if isinstance(self.trials, bool) or not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise InvalidParameterError(f"trials must be a positive integer, got {self.trials!r}")
        budget(self.rho, 1)  # validates rho
        object.__setattr__(self, "base_seed", _check_seed(self.base_seed))
        object.__setattr__(self, "strategies", tuple(self.strategies))
        for tag in self.strategies:
            Strategy(tag, self.lam)
        if not self.strategies:
            raise InvalidParameterError("at least one strategy is required")


@dataclass(frozen=True)
class TrialStats:
    strategy: str
    connectivity_rate: float
    rse_mean: float
    rse_std: float
    trials: int


def run_trials(
    inst: GeneratedInstance,
    rmap: ResistanceMap,
    strategy: Strategy,
    rho: float,
    indices: Sequence[int],
    base_seed: int,
    lam2_true: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Connectivity flags and RSE values for the given trial indices, in order."""
    g = inst.graph
    eu, ev = g.edge_arrays
    b = budget(rho, g.m)
    if lam2_true is None:
        lam2_true = fiedler_from_edges(g.n, eu, ev)
    masks = np.zeros((len(indices), g.m), dtype=np.uint8)
    for row, idx in enumerate(indices):
        scored = score_edges(strategy, inst, rmap, trial_rng(base_seed, idx))
        masks[row, rank_edges(scored)[:b]] = 1
    connected = _backend.kernels.batch_connected(g.n, eu, ev, masks)
    rse = np.ones(len(indices), dtype=np.float64)
    for row in np.flatnonzero(connected):
        keep = masks[row].astype(bool)
        rse[row] = rse_from_lambda2(lam2_true, fiedler_from_edges(g.n, eu[keep], ev[keep]))
    return connected, rse


def run_trial(
    inst: GeneratedInstance,
    rmap: ResistanceMap,
    strategy: Strategy,
    rho: float,
    trial_index: int,
    base_seed: int,
) -> tuple[bool, float]:
    connected, rse = run_trials(inst, rmap, strategy, rho, [trial_index], _check_seed(base_seed))
    return bool(connected[0]), float(rse[0])


def aggregate(tag: str, connected: np.ndarray, rse: np.ndarray) -> TrialStats:
    k = len(connected)
    rse = np.asarray(rse, dtype=np.float64)
    mean = float(np.mean(rse))
    if k < 2 or np.all(rse == rse[0]):
        std = 0.0
    else:
        std = float(np.std(rse, ddof=1))
    return TrialStats(tag, int(np.count_nonzero(connected)) / k, mean, std, k)


def _chunk_worker(args):
    backend, inst, rmap, strategy, rho, indices, seed, lam2 = args
    _backend.use(backend)
    return run_trials(inst, rmap, strategy, rho, indices, seed, lam2)


def _chunks(k, jobs):
    bounds = np.linspace(0, k, min(jobs, k) + 1).astype(int)
    return [list(range(lo, hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def run_protocol(
    inst: GeneratedInstance,
    config: ProtocolConfig,
    jobs: int = 1,
    rmap: ResistanceMap | None = None,
) -> list[TrialStats]:
    """K trials per strategy, one TrialStats per strategy in config order."""
    if jobs < 1:
        raise InvalidParameterError(f"jobs must be >= 1, got {jobs}")
    if rmap is None:
        rmap = weight_map(inst.graph, config.lam)
    eu, ev = inst.graph.edge_arrays
    lam2 = fiedler_from_edges(inst.graph.n, eu, ev)
    strategies = [Strategy(tag, config.lam) for tag in config.strategies]
    out = []
    if jobs == 1:
        for strat in strategies:
            conn, rse = run_trials(inst, rmap, strat, config.rho, range(config.trials), config.base_seed, lam2)
            out.append(aggregate(strat.tag, conn, rse))
        return out
    chunks = _chunks(config.trials, jobs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for strat in strategies:
            tasks = [
                (_backend.name, inst, rmap, strat, config.rho, idx, config.base_seed, lam2)
                for idx in chunks
            ]
            parts = list(pool.map(_chunk_worker, tasks))
            conn = np.concatenate([p[0] for p in parts])
            rse = np.concatenate([p[1] for p in parts])
            out.append(aggregate(strat.tag, conn, rse))
    return out


PHASE_STRATEGIES = ("Standard", "Weighted")


def run_phase_sweep(
    clique_size: int,
    k_values: Sequence[int],
    config: ProtocolConfig,
    jobs: int = 1,
) -> list[tuple[int, TrialStats]]:
    """Standard and Weighted statistics on the thickened-bridge barbell for each k.

    Runs at ``config.rho`` (0.6 for the frequency-control experiment) with the
    same base seed for every k.
    """
    k_values = list(k_values)
    if not k_values:
        raise InvalidParameterError("k_values must be nonempty")
    cfg = ProtocolConfig(config.trials, config.rho, config.lam, config.base_seed, PHASE_STRATEGIES)
    series = []
    rmap = None
    for k in k_values:
        inst = gen_visible_barbell(clique_size, k)
        if rmap is None:
            rmap = weight_map(inst.graph, cfg.lam)  # structure is identical for every k
        for stats in run_protocol(inst, cfg, jobs=jobs, rmap=rmap):
            series.append((k, stats))
    return series


# -- result tables -------------------------------------------------------------

RESULT_FIELDS = (
    "experiment",
    "strategy",
    "k",
    "rho",
    "lambda",
    "trials",
    "connectivity_rate",
    "rse_mean",
    "rse_std",
    "seed",
)


def format_sig(x: float) -> str:
    """Six significant digits."""
    return format(float(x), ".6g")


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    stats: TrialStats
    rho: float
    lam: float
    seed: int
    k: int | None = field(default=None)

    def as_record(self) -> dict:
        """Field dict with numbers already rounded to the emitted precision."""
        return {
            "experiment": self.experiment,
            "strategy": self.stats.strategy,
            "k": self.k,
            "rho": float(format_sig(self.rho)),
            "lambda": float(format_sig(self.lam)),
            "trials": self.stats.trials,
            "connectivity_rate": float(format_sig(self.stats.connectivity_rate)),
            "rse_mean": float(format_sig(self.stats.rse_mean)),
            "rse_std": float(format_sig(self.stats.rse_std)),
            "seed": self.seed,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ResultRow":
        k = rec.get("k")
        stats = TrialStats(
            str(rec["strategy"]),
            float(rec["connectivity_rate"]),
            float(rec["rse_mean"]),
            float(rec["rse_std"]),
            int(rec["trials"]),
        )
        return cls(
            str(rec["experiment"]),
            stats,
            float(rec["rho"]),
            float(rec["lambda"]),
            int(rec["seed"]),
            None if k in (None, "") else int(k),
        )


def results_to_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_FIELDS)
    for row in rows:
        rec = row.as_record()
        cells = []
        for name in RESULT_FIELDS:
            val = rec[name]
            if val is None:
                cells.append("")
            elif isinstance(val, float):
                cells.append(format_sig(val))
            else:
                cells.append(str(val))
        writer.writerow(cells)
    return buf.getvalue()


def results_from_csv(text: str) -> list[ResultRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != RESULT_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [ResultRow.from_record(rec) for rec in reader]


def results_to_json(rows: Sequence[ResultRow]) -> str:
    return json.dumps([row.as_record() for row in rows], indent=2) + "\n"


def results_from_json(text: str) -> list[ResultRow]:
    return [ResultRow.from_record(rec) for rec in json.loads(text)]
