"""CSV serialization of sweep results."""

from __future__ import annotations

import csv
from pathlib import Path

from .simulation import METRICS, SweepPoint, SweepResult

HEADER = ("experiment", "agent", "probability", "metric", "value", "stderr",
          "runs", "steps", "window", "seed")


def fmt(x: float) -> str:
    return f"{x:.9g}"


def csv_rows(result: SweepResult):
    rows = []
    for p in sorted(result.points, key=lambda p: (p.agent, p.probability)):
        for metric in sorted(METRICS):
            value, se = p.value(metric)
            rows.append((result.experiment, p.agent, fmt(p.probability), metric, fmt(value),
                         fmt(se), str(p.runs), str(result.steps), fmt(result.window),
                         str(result.seed)))
    return rows


def write_csv(result: SweepResult, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(HEADER)
    writer.writerows(csv_rows(result))


def emit_csv(result: SweepResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(result, fh)


def read_csv(path) -> SweepResult:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != HEADER:
            raise ValueError(f"unexpected CSV header in {path}")
        rows = list(reader)
    if not rows:
        return SweepResult(experiment=Path(path).stem, steps=0, window=0.0, seed=0)
    first = dict(zip(HEADER, rows[0]))
    result = SweepResult(first["experiment"], int(first["steps"]), float(first["window"]),
                         int(first["seed"]))
    cells = {}
    for row in rows:
        rec = dict(zip(HEADER, row))
        key = (rec["agent"], float(rec["probability"]))
        cells.setdefault(key, {"runs": int(rec["runs"])})
        cells[key][rec["metric"]] = (float(rec["value"]), float(rec["stderr"]))
    for (agent, prob), rec in cells.items():
        mp, mse = rec["mean_payout"]
        rf, rse = rec["repair_freq"]
        result.points.append(SweepPoint(agent, prob, mp, mse, rf, rse, rec["runs"]))
    return result
