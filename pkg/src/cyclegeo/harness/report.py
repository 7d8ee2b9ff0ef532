"""Experiment reports: raw per-trial values, derived summary, checks, files on disk."""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .config import ExperimentConfig

FINITE_N_NOTE = "bracket is a finite-n harness tolerance; only the limit value is a theorem"


@dataclass(frozen=True)
class Check:
    name: str
    observed: float
    low: float | None
    high: float | None
    passed: bool
    limit: str = ""
    note: str = FINITE_N_NOTE

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "observed": self.observed,
            "low": self.low,
            "high": self.high,
            "passed": self.passed,
            "limit": self.limit,
            "note": self.note,
        }

    def describe(self) -> str:
        lo = "-inf" if self.low is None else f"{self.low:g}"
        hi = "inf" if self.high is None else f"{self.high:g}"
        return f"{self.name}: observed {self.observed:.6g}, required [{lo}, {hi}]"


def bracket_check(name: str, observed: float, tolerance, limit: str = "", note: str = FINITE_N_NOTE) -> Check:
    """``tolerance`` is ``[low, high]`` or a bare number meaning an upper bound."""
    if isinstance(tolerance, (list, tuple)):
        low, high = (None if v is None else float(v) for v in tolerance)
    else:
        low, high = None, float(tolerance)
    observed = float(observed)
    ok = bool(np.isfinite(observed)) and (low is None or observed >= low) and (high is None or observed <= high)
    return Check(name, observed, low, high, ok, limit, note)


def describe_column(values) -> dict:
    a = np.asarray(values, dtype=float)
    return {
        "mean": float(a.mean()),
        "variance": float(a.var(ddof=1)) if a.size > 1 else 0.0,
        "min": float(a.min()),
        "max": float(a.max()),
    }


@dataclass
class ExperimentReport:
    experiment: str
    config: ExperimentConfig
    columns: list[str]
    raw: dict[str, list]
    summary: dict
    theory: dict
    checks: list[Check] = field(default_factory=list)
    plot: str | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def trials(self) -> int:
        return len(self.raw[self.columns[0]]) if self.columns else 0

    def document(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config.to_dict(),
            "summary": self.summary,
            "theory": self.theory,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
        }

    def summary_json(self) -> str:
        return json.dumps(self.document(), sort_keys=True, indent=2) + "\n"

    def raw_csv(self) -> str:
        lines = [",".join(["trial"] + self.columns)]
        for i in range(self.trials):
            lines.append(",".join([str(i)] + [_fmt(self.raw[c][i]) for c in self.columns]))
        return "\n".join(lines) + "\n"

    def write(self, outdir) -> None:
        os.makedirs(outdir, exist_ok=True)
        with open(os.path.join(outdir, "raw.csv"), "w") as fh:
            fh.write(self.raw_csv())
        with open(os.path.join(outdir, "summary.json"), "w") as fh:
            fh.write(self.summary_json())
        if self.plot is not None:
            with open(os.path.join(outdir, "plot.svg"), "w") as fh:
                fh.write(self.plot)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _parse(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_raw_csv(path) -> tuple[list[str], dict[str, list]]:
    with open(path) as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    if not header or header[0] != "trial":
        raise ValueError(f"{path}: first column must be 'trial'")
    columns = header[1:]
    raw = {c: [] for c in columns}
    for k, row in enumerate(rows[1:]):
        if int(row[0]) != k:
            raise ValueError(f"{path}: trials out of order at row {k}")
        for c, v in zip(columns, row[1:]):
            raw[c].append(_parse(v))
    return columns, raw
