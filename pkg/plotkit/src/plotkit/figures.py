"""Turn benchmark CSVs into the three figure kinds used by the study.

Input is the harness CSV schema
(family,params,graph_id,algorithm,variant,trials,mean_alg,mean_opt,ratio,
ratio_stddev,preprocess_ms,online_ms).  Every plotted number is a verbatim
CSV cell; this module does no statistics of its own.  Output filenames are
derived from (family, figure kind, parameter point), so re-renders land in
the same place.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

EXPECTED_HEADER = ["family", "params", "graph_id", "algorithm", "variant",
                   "trials", "mean_alg", "mean_opt", "ratio", "ratio_stddev",
                   "preprocess_ms", "online_ms"]


class FigureError(ValueError):
    pass


@dataclass
class FigureSpec:
    csv_path: str
    kind: str  # sweep | ranked_bar | runtime
    out_dir: str = "."
    family: str | None = None
    param: str | None = None        # e.g. "c"
    value: str | None = None        # parameter point for ranked_bar
    log_y: bool = False
    image_format: str = "png"


def load_rows(csv_path: str) -> list[dict]:
    with open(csv_path) as fh:
        reader = csv.DictReader(fh)
        missing = [col for col in EXPECTED_HEADER
                   if col not in (reader.fieldnames or [])]
        if missing:
            raise FigureError(f"CSV is missing columns: {', '.join(missing)}")
        rows = list(reader)
    if not rows:
        raise FigureError("CSV contains no data rows")
    return rows


def split_params(params: str) -> dict[str, str]:
    out = {}
    for part in params.split(";"):
        if part:
            key, _, value = part.partition("=")
            out[key] = value
    return out


def _label(row: dict) -> str:
    if row["variant"] in ("", "-"):
        return row["algorithm"]
    return f"{row['algorithm']} ({row['variant']})"


def _filter(rows: list[dict], spec: FigureSpec) -> list[dict]:
    out = [r for r in rows
           if spec.family is None or r["family"] == spec.family]
    if spec.param is not None and spec.value is not None:
        out = [r for r in out
               if split_params(r["params"]).get(spec.param) == spec.value]
    if not out:
        raise FigureError("filter selects no rows")
    return out


def _sweep_series(rows: list[dict], spec: FigureSpec):
    """Per (algorithm, variant): sorted (x, ratio) pairs over the grid."""
    if spec.param is None:
        raise FigureError("sweep figures need --param")
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        if not row["ratio"]:
            continue  # skipped row (LP guard)
        params = split_params(row["params"])
        if spec.param not in params:
            raise FigureError(f"parameter {spec.param!r} not in params column")
        series.setdefault(_label(row), []).append(
            (float(params[spec.param]), float(row["ratio"])))
    points = {x for pts in series.values() for x, _ in pts}
    if len(points) < 2:
        raise FigureError("sweep needs at least two distinct parameter points")
    return {k: sorted(v) for k, v in series.items()}


def plot_sweep(spec: FigureSpec) -> tuple[Path, dict]:
    rows = _filter(load_rows(spec.csv_path), spec)
    series = _sweep_series(rows, spec)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label in sorted(series):
        xs, ys = zip(*series[label])
        ax.plot(xs, ys, marker=".", label=label)
    ax.set_xlabel(spec.param)
    ax.set_ylabel("competitive ratio")
    family = rows[0]["family"]
    ax.set_title(f"{family}: ratio vs {spec.param}")
    ax.legend(fontsize=7, ncol=2)
    out = Path(spec.out_dir) / f"{family}_sweep_{spec.param}.{spec.image_format}"
    _save(fig, out)
    return out, series


def _ranked_rows(rows: list[dict], spec: FigureSpec):
    scored = [r for r in rows if r["ratio"]]
    points = {r["params"] for r in scored}
    if len(points) != 1:
        raise FigureError(
            f"ranked bars need exactly one parameter point, filter selects "
            f"{len(points)}")
    # descending by ratio; ties keep CSV order (stable sort)
    return sorted(scored, key=lambda r: -float(r["ratio"]))


def plot_ranked_bar(spec: FigureSpec) -> tuple[Path, list]:
    rows = _filter(load_rows(spec.csv_path), spec)
    ranked = _ranked_rows(rows, spec)
    labels = [_label(r) for r in ranked]
    values = [float(r["ratio"]) for r in ranked]
    errors = [float(r["ratio_stddev"]) for r in ranked]
    fig, ax = plt.subplots(figsize=(6, 0.35 * len(ranked) + 1.2))
    ypos = range(len(ranked))
    ax.barh(ypos, values, xerr=errors, color="#4878d0", capsize=3)
    ax.set_yticks(list(ypos), labels, fontsize=8)
    ax.invert_yaxis()  # best ratio on top
    ax.set_xlabel("competitive ratio")
    family = ranked[0]["family"]
    point = ranked[0]["params"].replace(";", "_")
    ax.set_title(f"{family} [{ranked[0]['params']}]")
    out = Path(spec.out_dir) / f"{family}_ranked_{point}.{spec.image_format}"
    _save(fig, out)
    payload = [(l, v, e) for l, v, e in zip(labels, values, errors)]
    return out, payload


def plot_runtime(spec: FigureSpec) -> tuple[Path, dict]:
    rows = _filter(load_rows(spec.csv_path), spec)
    if spec.param is None:
        raise FigureError("runtime figures need --param")
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        if row["algorithm"] == "opt":
            continue
        if not row["preprocess_ms"] or not row["online_ms"]:
            raise FigureError(
                "timing columns are empty; rerun the benchmark with --timings")
        params = split_params(row["params"])
        total = float(row["preprocess_ms"]) + float(row["online_ms"])
        series.setdefault(_label(row), []).append(
            (float(params[spec.param]), total))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label in sorted(series):
        xs, ys = zip(*sorted(series[label]))
        ax.plot(xs, ys, marker=".", label=label)
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel(spec.param)
    ax.set_ylabel("preprocess + online time (ms)")
    family = rows[0]["family"]
    ax.set_title(f"{family}: runtime vs {spec.param}")
    ax.legend(fontsize=7, ncol=2)
    out = Path(spec.out_dir) / f"{family}_runtime_{spec.param}.{spec.image_format}"
    _save(fig, out)
    return out, {k: sorted(v) for k, v in series.items()}


def _save(fig, out: Path) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if out.suffix == ".svg" else {}
    fig.savefig(out, dpi=150, metadata=metadata)
    plt.close(fig)


KINDS = {"sweep": plot_sweep, "ranked_bar": plot_ranked_bar,
         "runtime": plot_runtime}


def render(spec: FigureSpec) -> Path:
    if spec.kind not in KINDS:
        raise FigureError(f"unknown figure kind {spec.kind!r}")
    path, _ = KINDS[spec.kind](spec)
    return path
