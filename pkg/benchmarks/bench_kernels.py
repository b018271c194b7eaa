"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Times each hot kernel in isolation and the end-to-end protocol runs that
use them. Results are checked for equality across backends before timing.
"""

import argparse
import timeit

import numpy as np

from rarebridge import _backend
from rarebridge.dynamics import DynamicsConfig, draw_positive_counts, run_dynamics
from rarebridge.graph import gen_barbell, gen_chain_sbm
from rarebridge.protocol import ProtocolConfig, run_protocol, trial_rng
from rarebridge.sparsify import Strategy, budget, rank_edges, score_edges
from rarebridge.spectral import weight_map


def chain_masks(trials=500):
    inst = gen_chain_sbm([10, 15, 20])
    rmap = weight_map(inst.graph, 2.0)
    b = budget(0.6, inst.graph.m)
    masks = np.zeros((trials, inst.graph.m), dtype=np.uint8)
    for t in range(trials):
        masks[t, rank_edges(score_edges(Strategy("Random"), inst, rmap, trial_rng(42, t)))[:b]] = 1
    return inst.graph, masks


def cases():
    g, masks = chain_masks()
    eu, ev = g.edge_arrays
    counts = draw_positive_counts(DynamicsConfig())
    barbell = gen_barbell(8)
    chain = gen_chain_sbm([10, 15, 20])
    return {
        "batch_connected (chain, 500 masks)": lambda k: k.batch_connected(g.n, eu, ev, masks),
        "sgd_trajectory (2000 steps)": lambda k: k.sgd_trajectory(counts, 64, 50.0, 0.05, 0.0),
        "run_protocol barbell (4x500)": lambda k: run_protocol(barbell, ProtocolConfig()),
        "run_protocol chain (4x500)": lambda k: run_protocol(chain, ProtocolConfig(rho=0.6)),
        "run_dynamics (2000 steps)": lambda k: run_dynamics(DynamicsConfig()),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    names = _backend.available()
    if "cython" not in names:
        print("compiled backend not built; timing the Python fallback only")
    print(f"{'case':40s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    original = _backend.name
    for label, fn in cases().items():
        results, times = {}, {}
        for name in names:
            kern = _backend.use(name)
            results[name] = fn(kern)
            times[name] = min(timeit.repeat(lambda: fn(kern), number=1, repeat=args.repeat))
        first = results[names[0]]
        for other in names[1:]:
            same = (
                np.array_equal(first, results[other]) if isinstance(first, np.ndarray)
                else first == results[other] if not hasattr(first, "probs")
                else np.array_equal(first.probs, results[other].probs)
            )
            assert same, f"backends disagree on {label}"
        row = f"{label:40s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if len(names) > 1:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)
    _backend.use(original)


if __name__ == "__main__":
    main()
