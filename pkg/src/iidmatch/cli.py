"""Command-line interface: generate, ingest, run, sweep, report.

Exit codes: 0 success, 2 usage or parameter error, 3 partial results (some
rows were skipped by the LP size guard; all other rows are still emitted).
A ``--config`` file holds ``key = value`` lines supplying defaults; explicit
flags override it.
"""

from __future__ import annotations

import argparse
import csv as csvmod
import sys
from pathlib import Path

from .generators import (FAMILIES, STAND_ALONE, FamilySpec, ParamError,
                         convert_duplicating, convert_random_partition,
                         generate)
from .graph import read_type_graph, write_type_graph
from .harness import (ALGORITHM_NAMES, ExperimentConfig, GraphPoint,
                      default_roster, expand_roster, run_experiment,
                      write_csv)
from .ingest import GraphFileError, parse_graph_file
from .rng import Xoshiro256, derive_seed

ALL_FAMILIES = FAMILIES + STAND_ALONE


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _convert(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            continue
    return value


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=ALL_FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--c", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--kappa", type=float)


def _run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph-file")
    _family_args(p)
    p.add_argument("--algos", default="all",
                   help="comma-separated algorithm names, or 'all'")
    p.add_argument("--variants", default="vanilla,greedy")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default="-", help="output path, '-' for stdout")
    p.add_argument("--timings", action="store_true",
                   help="measure wall times (CSV no longer byte-stable)")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iidmatch")
    parser.add_argument("--config", help="key = value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a type-graph file")
    _family_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("ingest", help="convert a raw graph file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", choices=("duplicate", "partition"),
                   required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("run", help="benchmark algorithms on one graph setting")
    _run_args(p)

    p = sub.add_parser("sweep", help="benchmark across a parameter grid")
    _run_args(p)
    p.add_argument("--param", required=True, choices=("c", "d", "tau", "kappa"))
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)

    p = sub.add_parser("report", help="pretty-print a results CSV")
    p.add_argument("--csv", required=True)
    return parser


def _spec_kwargs(args) -> dict:
    out = {}
    for key in ("c", "d", "tau", "kappa"):
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    return out


def _cmd_generate(args) -> int:
    if args.family is None or args.n is None:
        print("generate requires --family and --n", file=sys.stderr)
        return 2
    spec = FamilySpec(family=args.family, n=args.n, seed=args.seed,
                      **_spec_kwargs(args))
    tg = generate(spec)
    with open(args.out, "w") as fh:
        write_type_graph(tg, fh)
    return 0


def _cmd_ingest(args) -> int:
    g = parse_graph_file(args.infile)
    if args.method == "duplicate":
        tg = convert_duplicating(g)
    else:
        tg = convert_random_partition(g, Xoshiro256(args.seed))
    with open(args.out, "w") as fh:
        write_type_graph(tg, fh)
    return 0


def _points(args) -> list[GraphPoint]:
    if args.graph_file:
        with open(args.graph_file) as fh:
            tg = read_type_graph(fh)
        return [GraphPoint.from_graph(tg, Path(args.graph_file).name)]
    if args.family is None or args.n is None:
        raise ParamError("run requires --graph-file or --family with --n")
    return [GraphPoint.from_family(args.family, args.n, **_spec_kwargs(args))]


def _roster(args) -> list[tuple[str, str]]:
    if args.algos == "all":
        return default_roster()
    names = [x.strip() for x in args.algos.split(",") if x.strip()]
    variants = [x.strip() for x in args.variants.split(",") if x.strip()]
    for v in variants:
        if v not in ("vanilla", "greedy"):
            raise ParamError(f"unknown variant {v!r}")
    return expand_roster(names, variants)


def _emit(records, args) -> int:
    if args.csv == "-":
        write_csv(records, sys.stdout)
    else:
        with open(args.csv, "w") as fh:
            write_csv(records, fh)
    return 3 if any(r.skipped for r in records) else 0


def _cmd_run(args) -> int:
    cfg = ExperimentConfig(points=_points(args), algorithms=_roster(args),
                           trials=args.trials, master_seed=args.seed,
                           timings=args.timings, jobs=args.jobs)
    return _emit(run_experiment(cfg), args)


def _grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise ParamError("sweep requires step > 0")
    if stop < start:
        raise ParamError("sweep requires from <= to")
    count = int((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, 10) for i in range(count)]

def _cmd_sweep(args) -> int:
    if args.family is None or args.n is None:
        raise ParamError("sweep requires --family and --n")
    points = []
    for value in _grid(args.start, args.stop, args.step):
        kwargs = _spec_kwargs(args)
        kwargs[args.param] = int(round(value)) if args.param == "d" else value
        points.append(GraphPoint.from_family(args.family, args.n, **kwargs))
    cfg = ExperimentConfig(points=points, algorithms=_roster(args),
                           trials=args.trials, master_seed=args.seed,
                           timings=args.timings, jobs=args.jobs)
    return _emit(run_experiment(cfg), args)


def _cmd_report(args) -> int:
    with open(args.csv) as fh:
        rows = list(csvmod.DictReader(fh))
    groups: dict[tuple[str, str, str], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["family"], row["params"], row["graph_id"]),
                          []).append(row)
    for (family, params, gid), entries in groups.items():
        print(f"== {family} [{params}] ({gid})")
        scored = [e for e in entries if e["ratio"]]
        scored.sort(key=lambda e: -float(e["ratio"]))
        for e in scored:
            name = e["algorithm"]
            if e["variant"] not in ("-", ""):
                name += f" ({e['variant']})"
            print(f"  {name:32s} {float(e['ratio']):.3f}"
                  f"  +/- {float(e['ratio_stddev']):.3f}")
        for e in entries:
            if not e["ratio"]:
                print(f"  {e['algorithm']} ({e['variant']})"
                      "  skipped (LP size guard)")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            defaults = _load_config(args.config)
        except (OSError, ValueError) as exc:
            print(str(exc), file=sys.stderr)
            return 2
        given = set()
        for raw in (argv if argv is not None else sys.argv[1:]):
            if raw.startswith("--"):
                given.add(raw[2:].split("=")[0].replace("-", "_"))
        for key, value in defaults.items():
            if key not in given and hasattr(args, key):
                setattr(args, key, _convert(value))
    handlers = {"generate": _cmd_generate, "ingest": _cmd_ingest,
                "run": _cmd_run, "sweep": _cmd_sweep, "report": _cmd_report}
    try:
        return handlers[args.command](args)
    except (ParamError, GraphFileError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
