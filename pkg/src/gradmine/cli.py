"""Command-line front end.

    gradmine gp    --input data.csv --min-sup 0.5 [--algorithm graank]
    gradmine tgp   --input data.csv --ref attr --min-sup 0.5 --min-rep 0.8
    gradmine tgep  --input data.csv --ref attr --min-sup 0.5 --min-rep 0.5
    gradmine cross --input a.csv --input b.csv

Exit status: 0 on success, 2 on usage errors, 1 on data errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .aco import run_aco_graank, run_aco_paraminer
from .dataset import DatasetError, IngestOptions, format_timestamp, load_csv, write_csv
from .emerging import mine_bt_graank, mine_trenc
from .fuzztx import cross
from .graank import mine_graank
from .paraminer import mine_paraminer
from .temporal import mine_steps

GP_ALGORITHMS = ("graank", "paraminer", "aco-graank", "aco-paraminer")
TGP_ALGORITHMS = ("t-graank", "aco-tgraank")
TGEP_ALGORITHMS = ("bt-graank", "trenc")


def _unit_interval(text):
    v = float(text)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {text}")
    return v


def _open_interval(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text}")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0 or math.isinf(v):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", required=True, help="CSV file, '-' for stdin (repeatable for cross)")
    common.add_argument("--delimiter", default=",")
    common.add_argument("--time-column", help="name of the timestamp column")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    common.add_argument("--seed", type=_seed, help="RNG seed (default: $GRADMINE_SEED, else random)")

    parser = argparse.ArgumentParser(prog="gradmine", description="Gradual pattern mining.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gp = sub.add_parser("gp", parents=[common], help="gradual patterns")
    gp.add_argument("--algorithm", choices=GP_ALGORITHMS, default="graank")
    gp.add_argument("--min-sup", type=_unit_interval, default=0.5)
    gp.add_argument("--evaporation", type=_open_interval, default=0.5)

    tgp = sub.add_parser("tgp", parents=[common], help="temporal gradual patterns")
    tgp.add_argument("--algorithm", choices=TGP_ALGORITHMS, default="t-graank")
    tgp.add_argument("--ref", required=True, help="reference attribute")
    tgp.add_argument("--min-sup", type=_unit_interval, default=0.5)
    tgp.add_argument("--min-rep", type=_unit_interval, default=0.5)

    tgep = sub.add_parser("tgep", parents=[common], help="temporal gradual emerging patterns")
    tgep.add_argument("--algorithm", choices=TGEP_ALGORITHMS, default="bt-graank")
    tgep.add_argument("--ref", required=True, help="reference attribute")
    tgep.add_argument("--min-sup", type=_unit_interval, default=0.5)
    tgep.add_argument("--min-rep", type=_unit_interval, default=0.5)
    tgep.add_argument("--min-growth", type=_positive_float, default=1.0)
    tgep.add_argument("--base-step", type=_positive_int, default=1)

    sub.add_parser("cross", parents=[common], help="fuzzy crossing of time-series")
    return parser


def _resolve_seed(args, parser):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GRADMINE_SEED")
    if env:
        try:
            return _seed(env)
        except (ValueError, argparse.ArgumentTypeError):
            parser.error(f"GRADMINE_SEED is not a valid seed: {env!r}")
    return int(np.random.SeedSequence().entropy % 2**64)


def _num(x):
    return "inf" if x == math.inf else float(x)


def _support(s):
    return {"support": float(s), "support_fraction": str(s)}


def _lag(lag):
    if lag is None:
        return None
    return {"sign": lag.sign, "seconds": lag.t, "sup": None if lag.sup is None else float(lag.sup), "text": lag.text, "valid": lag.valid}


def _pattern_fields(p, names):
    return {
        "items": [it.render(names) for it in p],
        "pattern": p.render(names),
        "complement": p.complement().render(names),
    }


def _gp(args, ds, seed):
    stats = {}
    if args.algorithm == "graank":
        pats = mine_graank(ds, args.min_sup, threads=args.threads)
    elif args.algorithm == "paraminer":
        pats = mine_paraminer(ds, args.min_sup)
    elif args.algorithm == "aco-graank":
        run = run_aco_graank(ds, args.min_sup, seed)
        pats, stats = run.patterns, {"iterations": run.iterations}
    else:
        run = run_aco_paraminer(ds, args.min_sup, args.evaporation, seed)
        pats, stats = run.patterns, {"iterations": run.iterations}
    return [{**_pattern_fields(p, ds.names), **_support(p.support)} for p in pats], stats


def _tgp(args, ds, seed):
    engine = "exhaustive" if args.algorithm == "t-graank" else "aco"
    results = mine_steps(ds, args.ref, args.min_sup, args.min_rep, engine, seed, threads=args.threads)
    records = []
    for r in results:
        for tg in r.patterns:
            if tg.reference_item is None or not tg.lag.valid:
                continue
            records.append(
                {
                    **_pattern_fields(tg.pattern, ds.names),
                    **_support(tg.support),
                    "time_lag": _lag(tg.lag),
                    "representativity": float(tg.representativity),
                    "step": tg.step,
                }
            )
    stats = {"steps": len(results)}
    if engine == "aco":
        stats["iterations"] = [r.iterations for r in results]
    return records, stats


def _tgep(args, ds, seed):
    stats = {}
    if args.algorithm == "bt-graank":
        pats = mine_bt_graank(ds, args.ref, args.min_sup, args.min_rep, threads=args.threads)
    else:
        pats, mats = mine_trenc(
            ds, args.ref, args.min_sup, args.min_rep, args.min_growth, args.base_step, seed, threads=args.threads
        )
        stats["iterations"] = {str(m.step): m.iterations for m in mats}
    records = []
    for t in pats:
        records.append(
            {
                **_pattern_fields(t.pattern, ds.names),
                "growth_rate": _num(t.growth_rate),
                "supports": [float(t.sup_from), float(t.sup_to)],
                "support_fractions": [str(t.sup_from), str(t.sup_to)],
                "steps": [t.step_from, t.step_to],
                "lag_from": _lag(t.lag_from),
                "lag_to": _lag(t.lag_to),
                "lag_mean": t.lag_mean,
            }
        )
    return records, stats


def _csv_report(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pattern", "complement", "support", "support_fraction", "time_lag", "lag_sup", "growth_rate", "representativity", "step"])
    for r in records:
        lag = r.get("time_lag") or r.get("lag_to")
        w.writerow(
            [
                r["pattern"],
                r["complement"],
                r.get("support", r.get("supports", [None, None])[-1]),
                r.get("support_fraction", r.get("support_fractions", [None, None])[-1]),
                lag["text"] if lag else "",
                lag["sup"] if lag and lag["sup"] is not None else "",
                r.get("growth_rate", ""),
                r.get("representativity", ""),
                r.get("step", r.get("steps", [None, ""])[-1]),
            ]
        )
    return buf.getvalue()


def _emit(text, args):
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config(args, seed):
    cfg = {k: v for k, v in vars(args).items() if v is not None and k not in ("seed", "output", "format")}
    cfg["seed"] = seed
    return cfg


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if len(args.delimiter) != 1:
        parser.error("--delimiter must be a single character")
    if args.command != "cross" and len(args.input) != 1:
        parser.error(f"{args.command} takes exactly one --input")
    if args.command == "cross" and len(args.input) < 2:
        parser.error("cross needs at least two --input files")
    seed = _resolve_seed(args, parser)
    opts = IngestOptions(delimiter=args.delimiter, time_column_hint=args.time_column)
    start = time.perf_counter()
    try:
        sources = [load_csv(path, opts) for path in args.input]
        if args.command == "cross":
            return _run_cross(args, sources, seed, start)
        ds = sources[0]
        handler = {"gp": _gp, "tgp": _tgp, "tgep": _tgep}[args.command]
        records, stats = handler(args, ds, seed)
    except (DatasetError, ValueError) as exc:
        print(f"gradmine: error: {exc}", file=sys.stderr)
        return 1
    if (args.format or "json") == "csv":
        _emit(_csv_report(records), args)
        return 0
    report = {
        "config": _config(args, seed),
        "patterns": records,
        "stats": {"seed": seed, "backend": kernels.BACKEND, **stats, "wall_time": time.perf_counter() - start},
    }
    _emit(json.dumps(report, indent=2) + "\n", args)
    return 0


def _run_cross(args, sources, seed, start):
    labels = [Path(p).stem if p != "-" else f"s{k}" for k, p in enumerate(args.input)]
    crossed = cross(sources, labels)
    ds = crossed.to_dataset()
    if (args.format or "csv") == "csv":
        buf = io.StringIO()
        write_csv(ds, buf, args.delimiter)
        _emit(buf.getvalue(), args)
        return 0
    fmt = ds.time_format or "%Y-%m-%dT%H:%M:%S"
    report = {
        "config": _config(args, seed),
        "columns": list(ds.names),
        "rows": [[format_timestamp(r[0], fmt), *map(float, r[1:])] for r in ds.data],
        "provenance": {label: crossed.provenance[:, k].tolist() for k, label in enumerate(labels)},
        "stats": {"boundary": crossed.boundary, "wall_time": time.perf_counter() - start},
    }
    _emit(json.dumps(report, indent=2) + "\n", args)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
