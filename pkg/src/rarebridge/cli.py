"""Command-line front end.

    rarebridge resistance GRAPH [--lambda L] [--out FILE]
    rarebridge generate {barbell,chain,visible} --out FILE [...]
    rarebridge experiment {barbell,chain,phase,dynamics} [overrides]
    rarebridge all [--seed S] [--out DIR] [--jobs J]
    rarebridge replay MANIFEST [--out DIR]

Exit codes: 0 success, 1 runtime or domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from datetime import datetime, timezone
from pathlib import Path

from rarebridge import __version__
from rarebridge.errors import DomainError, EdgeListFormatError, InvalidParameterError
from rarebridge.experiments import DEFAULT_SEED, EXPERIMENTS, default_config, run_experiment
from rarebridge.graph import (
    gen_barbell,
    gen_chain_sbm,
    gen_visible_barbell,
    read_edge_list,
    write_edge_list,
    write_frequencies,
)
from rarebridge.protocol import MASK64
from rarebridge.spectral import format_resistance_dump, weight_map

# flags each experiment accepts beyond --seed/--out/--format/--jobs
_OVERRIDES = {
    "barbell": {"trials", "rho", "lambda"},
    "chain": {"trials", "rho", "lambda"},
    "phase": {"trials", "rho", "lambda", "k_max"},
    "dynamics": set(),
}


def _u64(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value <= MASK64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return value


def _density(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"rho must lie in (0, 1]: {text}")
    return value


def _nonneg_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value < float("inf"):
        raise argparse.ArgumentTypeError(f"must be a finite value >= 0: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rarebridge", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resistance", help="effective resistance and weight map of an edge-list graph")
    p.add_argument("graph", type=Path)
    p.add_argument("--lambda", dest="lam", type=_nonneg_float, default=2.0)
    p.add_argument("--out", type=Path, help="dump file (default: stdout)")

    p = sub.add_parser("generate", help="write a generated instance as edge list + frequency file")
    p.add_argument("family", choices=("barbell", "chain", "visible"))
    p.add_argument("--out", type=Path, required=True, help="edge-list path; frequencies go to <out>.freq")
    p.add_argument("--clique-size", type=_positive_int, default=8)
    p.add_argument("--sizes", type=_positive_int, nargs="+", default=[10, 15, 20])
    p.add_argument("--k", type=_positive_int, default=1)

    p = sub.add_parser("experiment", help="run one experiment")
    p.add_argument("name", choices=EXPERIMENTS)
    _add_run_flags(p)
    p.add_argument("--trials", type=_positive_int)
    p.add_argument("--rho", type=_density)
    p.add_argument("--lambda", dest="lam", type=_nonneg_float)
    p.add_argument("--k-max", dest="k_max", type=_positive_int)

    p = sub.add_parser("all", help="run all four experiments with default parameters")
    _add_run_flags(p)

    p = sub.add_parser("replay", help="re-run the experiment recorded in a manifest")
    p.add_argument("manifest", type=Path)
    p.add_argument("--out", type=Path, default=Path("results"))
    p.add_argument("--jobs", type=_positive_int, default=1)
    return parser


def _add_run_flags(p):
    p.add_argument("--seed", type=_u64, default=DEFAULT_SEED)
    p.add_argument("--out", type=Path, default=Path("results"))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=_positive_int, default=1)


def _resolve(args, parser) -> dict:
    cfg = default_config(args.name, args.seed)
    given = {k for k in ("trials", "rho", "lam", "k_max") if getattr(args, k) is not None}
    given = {"lambda" if k == "lam" else k for k in given}
    bad = given - _OVERRIDES[args.name]
    if bad:
        flags = ", ".join("--" + b.replace("_", "-") for b in sorted(bad))
        parser.error(f"experiment {args.name} does not accept {flags}")
    if args.name == "dynamics" and args.format != "csv":
        parser.error("experiment dynamics only writes csv")
    for key in given:
        cfg[key] = getattr(args, "lam" if key == "lambda" else key)
    return cfg


def _result_name(name, fmt):
    return f"{name}.{'csv' if name == 'dynamics' else fmt}"


def _manifest(name, cfg, fmt, result_file):
    return {
        "command": f"experiment {name}",
        "experiment": name,
        "config": cfg,
        "format": fmt,
        "seed": cfg["seed"],
        "version": __version__,
        "outputs": [result_file],
    }


def _write_experiment(name, cfg, fmt, out_dir: Path, jobs: int) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    text = run_experiment(name, cfg, fmt, jobs)
    result = out_dir / _result_name(name, fmt)
    result.write_text(text, encoding="utf-8", newline="\n")
    manifest = out_dir / f"{name}.manifest.json"
    manifest.write_text(
        json.dumps(_manifest(name, cfg, fmt, result.name), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    return [result, manifest]


def cmd_resistance(args) -> int:
    g = read_edge_list(args.graph)
    rmap = weight_map(g, args.lam)
    dump = format_resistance_dump(g, rmap)
    summary = f"sum_r_eff={rmap.r.sum():.9f} n_minus_1={g.n - 1}"
    if args.out is None:
        sys.stdout.write(dump)
        print(summary, file=sys.stderr)
    else:
        args.out.write_text(dump, encoding="utf-8", newline="\n")
        print(summary)
    return 0


def cmd_generate(args) -> int:
    if args.family == "barbell":
        inst = gen_barbell(args.clique_size)
    elif args.family == "chain":
        inst = gen_chain_sbm(args.sizes)
    else:
        inst = gen_visible_barbell(args.clique_size, args.k)
    write_edge_list(inst.graph, args.out)
    write_frequencies(inst.freq, args.out.with_name(args.out.name + ".freq"))
    print(f"n={inst.graph.n} m={inst.graph.m} bridges={sorted(inst.bridge_edges)}")
    return 0


def cmd_experiment(args, parser) -> int:
    cfg = _resolve(args, parser)
    for path in _write_experiment(args.name, cfg, args.format, args.out, args.jobs):
        print(path)
    return 0


def cmd_all(args) -> int:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    final = args.out / f"run-{stamp}-seed{args.seed}"
    partial = args.out / f".{final.name}.partial"
    if partial.exists():
        shutil.rmtree(partial)
    try:
        for name in EXPERIMENTS:
            _write_experiment(name, default_config(name, args.seed), args.format, partial, args.jobs)
            print(f"{name}: done", file=sys.stderr)
        partial.rename(final)
    except BaseException:
        shutil.rmtree(partial, ignore_errors=True)
        raise
    print(final)
    return 0


def cmd_replay(args) -> int:
    try:
        manifest = json.loads(args.manifest.read_text(encoding="utf-8"))
        name, cfg, fmt = manifest["experiment"], manifest["config"], manifest["format"]
    except (json.JSONDecodeError, KeyError) as exc:
        raise InvalidParameterError(f"not a manifest: {args.manifest} ({exc})") from None
    if name not in EXPERIMENTS:
        raise InvalidParameterError(f"unknown experiment in manifest: {name!r}")
    for path in _write_experiment(name, cfg, fmt, args.out, args.jobs):
        print(path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "resistance":
            return cmd_resistance(args)
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "experiment":
            return cmd_experiment(args, parser)
        if args.command == "all":
            return cmd_all(args)
        return cmd_replay(args)
    except (DomainError, InvalidParameterError, EdgeListFormatError, OSError) as exc:
        print(f"rarebridge: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
