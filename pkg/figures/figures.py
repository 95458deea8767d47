#!/usr/bin/env python3
"""Render benchmark figures from led-cmaes CSV outputs.

Three figure kinds are supported:

* ``scaling``   -- evaluations divided by success rate against the number
  of redundant dimensions, one line per (algo, stepsize), built from one
  or more ``summary.csv`` files.
* ``alignment`` -- per-coordinate trajectories of the rotated-eigenvector
  alignment norms, from a ``led_trace.csv``.
* ``snr``       -- per-coordinate SNR trajectories with a min-max band and
  median line, from a ``led_trace.csv``.

The script is a pure consumer: every plotted number is read from the CSV
(or is a min/max/median of rows read from it), and ``--dump-points``
prints exactly what is drawn.
"""
from __future__ import annotations

import argparse
import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

SCALING_COLUMNS = ("algo", "stepsize", "dim", "eff_dim", "success_rate",
                   "median_evals", "q25_evals", "q75_evals")
TRACE_COLUMNS = ("trial", "iteration", "coord", "v_snr", "v", "align")
ANNOTATE_BELOW = 0.75


class MissingColumn(ValueError):
    def __init__(self, path: str, column: str):
        super().__init__(f"{path}: missing required column {column!r}")
        self.column = column


def read_rows(path: str, required: tuple[str, ...]) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                if set(("v_snr", "v", "align")) & set(required):
                    raise MissingColumn(
                        path, column) from ValueError(
                        "per-coordinate columns come from runs with "
                        "--trace-led enabled")
                raise MissingColumn(path, column)
        return list(reader)


def load_summaries(paths: list[str]) -> list[dict]:
    rows = []
    for path in paths:
        for raw in read_rows(path, SCALING_COLUMNS):
            rows.append({
                "algo": raw["algo"],
                "stepsize": raw["stepsize"],
                "n_red": int(raw["dim"]) - int(raw["eff_dim"]),
                "success_rate": float(raw["success_rate"]),
                "median": float(raw["median_evals"]) if raw["median_evals"]
                else None,
                "q25": float(raw["q25_evals"]) if raw["q25_evals"] else None,
                "q75": float(raw["q75_evals"]) if raw["q75_evals"] else None,
            })
    return rows


def scaling_points(rows: list[dict]) -> dict[tuple[str, str], list[dict]]:
    """Plotted points per (algo, stepsize): y is the median number of
    evaluations divided by the success rate; zero-success configs carry no
    point, only an annotation."""
    series = defaultdict(list)
    for row in rows:
        point = {"x": row["n_red"], "success_rate": row["success_rate"]}
        if row["success_rate"] > 0.0 and row["median"] is not None:
            point["y"] = row["median"] / row["success_rate"]
            point["y_low"] = row["q25"] / row["success_rate"]
            point["y_high"] = row["q75"] / row["success_rate"]
        series[(row["algo"], row["stepsize"])].append(point)
    for points in series.values():
        points.sort(key=lambda p: p["x"])
    return dict(series)


def plot_scaling(rows: list[dict], out: str, dump: bool = False) -> None:
    series = scaling_points(rows)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for (algo, stepsize), points in sorted(series.items()):
        drawn = [p for p in points if "y" in p]
        label = f"{algo}/{stepsize}"
        ax.plot([p["x"] for p in drawn], [p["y"] for p in drawn],
                marker="o", label=label)
        ax.fill_between([p["x"] for p in drawn],
                        [p["y_low"] for p in drawn],
                        [p["y_high"] for p in drawn], alpha=0.2)
        for p in points:
            if dump:
                y = p.get("y")
                print(f"point {algo} {stepsize} x={p['x']} "
                      f"y={'' if y is None else repr(y)} "
                      f"rate={p['success_rate']!r}")
            if p["success_rate"] < ANNOTATE_BELOW:
                y = p.get("y", ax.get_ylim()[0])
                ax.annotate(f"{p['success_rate']:.2f}", (p["x"], y),
                            textcoords="offset points", xytext=(0, 6),
                            fontsize=8)
    ax.set_xscale("symlog", linthresh=4)
    ax.set_yscale("log")
    ax.set_xlabel("redundant dimensions")
    ax.set_ylabel("evaluations / success rate")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)


def trace_series(rows: list[dict], column: str) -> dict[int, dict]:
    """Per-coordinate {iteration: value} maps for one trace column."""
    series: dict[int, dict] = defaultdict(dict)
    for raw in rows:
        series[int(raw["coord"])][int(raw["iteration"])] = float(raw[column])
    return dict(series)


def plot_trace(rows: list[dict], kind: str, out: str,
               dump: bool = False) -> None:
    column = "align" if kind == "alignment" else "v_snr"
    series = trace_series(rows, column)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    per_iteration = defaultdict(list)
    for coord in sorted(series):
        iterations = sorted(series[coord])
        values = [series[coord][i] for i in iterations]
        ax.plot(iterations, values, linewidth=0.8)
        for i, v in zip(iterations, values):
            per_iteration[i].append(v)
    if kind == "snr":
        iterations = sorted(per_iteration)
        lows = [min(per_iteration[i]) for i in iterations]
        highs = [max(per_iteration[i]) for i in iterations]
        medians = [sorted(per_iteration[i])[len(per_iteration[i]) // 2]
                   if len(per_iteration[i]) % 2 else
                   0.5 * (sorted(per_iteration[i])[len(per_iteration[i]) // 2 - 1]
                          + sorted(per_iteration[i])[len(per_iteration[i]) // 2])
                   for i in iterations]
        ax.fill_between(iterations, lows, highs, alpha=0.2, color="gray")
        ax.plot(iterations, medians, color="black", linewidth=1.5,
                label="median")
        ax.legend()
        if dump:
            for i, lo, hi, med in zip(iterations, lows, highs, medians):
                print(f"band iter={i} min={lo!r} max={hi!r} median={med!r}")
    elif dump:
        for coord in sorted(series):
            last = max(series[coord])
            print(f"final coord={coord} value={series[coord][last]!r}")
    if kind == "alignment":
        ax.axhline(0.5, color="gray", linestyle=":", linewidth=0.8)
        ax.set_ylabel("alignment norm")
    else:
        ax.set_ylabel("per-coordinate SNR")
    ax.set_xlabel("iteration")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Plot led-cmaes benchmark CSV outputs")
    parser.add_argument("--kind", required=True,
                        choices=("scaling", "alignment", "snr"))
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="PATH", help="summary.csv files (scaling) "
                        "or a led_trace.csv (alignment/snr)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dump-points", action="store_true",
                        help="print every plotted value to stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.kind == "scaling":
            rows = load_summaries(args.inputs)
            if len(rows) < 2:
                raise ValueError("scaling plots need at least two "
                                 "configurations")
            plot_scaling(rows, args.out, dump=args.dump_points)
        else:
            rows = []
            for path in args.inputs:
                rows.extend(read_rows(path, TRACE_COLUMNS))
            plot_trace(rows, args.kind, args.out, dump=args.dump_points)
    except MissingColumn as exc:
        if exc.column in ("v_snr", "v", "align"):
            print(f"error: {exc} (re-run the harness with --trace-led to "
                  f"record per-coordinate data)", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
