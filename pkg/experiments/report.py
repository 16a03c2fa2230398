"""
Statistical Reports
Per-replicate results, seed aggregation and their JSON/CSV writers
"""

import csv
import os
import sys
import traceback
from typing import Any, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

DEFAULT_THRESHOLD = 0.01
DEFAULT_SEEDS = 3
DEFAULT_REQUIRED = 2


class StatReport(BaseModel):
    """Outcome of one experiment run; reproducible from (name, params, seed)"""

    model_config = ConfigDict(populate_by_name=True)

    name: str
    params: dict[str, Any]
    seed: Optional[int] = None
    sample_size: int
    test: str
    statistic: float
    pvalue: Optional[float] = None
    interval: Optional[tuple[float, float]] = None
    threshold: float = DEFAULT_THRESHOLD
    passed: bool = Field(alias="pass")
    details: dict[str, Any] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)
    samples: list[float] = Field(default_factory=list, exclude=True)

    def summary(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        p = f" p={self.pvalue:.4g}" if self.pvalue is not None else ""
        return f"{self.name} seed={self.seed} n={self.sample_size} {self.test}={self.statistic:.4g}{p} {verdict}"


class AggregateReport(BaseModel):
    """Replicates of one experiment over independent seeds"""

    model_config = ConfigDict(populate_by_name=True)

    name: str
    params: dict[str, Any]
    seed: Optional[int] = None
    required: int = DEFAULT_REQUIRED
    replicates: list[StatReport]
    passed: bool = Field(alias="pass")

    @property
    def passes(self) -> int:
        return sum(r.passed for r in self.replicates)


def aggregate(replicates: Sequence[StatReport], required: int = DEFAULT_REQUIRED,
              seed: Optional[int] = None) -> AggregateReport:
    if not replicates:
        raise ValueError("no replicates to aggregate")
    first = replicates[0]
    passes = sum(r.passed for r in replicates)
    return AggregateReport(name=first.name, params=first.params, seed=seed, required=required,
                           replicates=list(replicates), passed=passes >= min(required, len(replicates)))


def report_json(report: BaseModel) -> str:
    return report.model_dump_json(by_alias=True, indent=2)


def write_json(report: BaseModel, path: str) -> Optional[str]:
    """Write a report as JSON; returns the path, or None on failure"""
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w") as f:
            f.write(report_json(report))
        return path
    except Exception as e:
        print(f"⚠️ JSON report failed: {e}", file=sys.stderr)
        traceback.print_exc()
        return None


def write_samples_csv(reports: Sequence[StatReport], path: str) -> Optional[str]:
    """Raw samples of every replicate as (seed, index, value) rows"""
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["seed", "index", "value"])
            for r in reports:
                for i, x in enumerate(r.samples):
                    writer.writerow([r.seed, i, x])
        return path
    except Exception as e:
        print(f"⚠️ CSV export failed: {e}", file=sys.stderr)
        traceback.print_exc()
        return None
