"""Measured-inequality reports: sweep points, fitted power laws, pass bands,
and their JSON/CSV serializations."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .fitting import PowerLawFit


@dataclass
class SweepPoint:
    params: dict
    lhs: float
    rhs: float
    ratio: float


@dataclass
class EstimateReport:
    """Measured left/right sides of an inequality across a sweep, the fitted
    power law, and a pass/fail verdict against a declared band."""

    name: str
    points: list[SweepPoint]
    fit: Optional[PowerLawFit] = None
    band: tuple[Optional[float], Optional[float]] = (None, None)
    passed: bool = True
    extras: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for pt in self.points:
            if not (math.isfinite(pt.ratio) and pt.ratio >= 0):
                raise ValueError(f"ratio must be finite and nonnegative, got {pt.ratio}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "points": [
                {"params": pt.params, "lhs": pt.lhs, "rhs": pt.rhs, "ratio": pt.ratio}
                for pt in self.points
            ],
            "fit": None
            if self.fit is None
            else {
                "exponent": self.fit.exponent,
                "stderr": self.fit.stderr,
                "constant": self.fit.constant,
            },
            "band": {"lo": self.band[0], "hi": self.band[1]},
            "pass": self.passed,
            "extras": self.extras,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write_json(self, path: Path | str) -> None:
        Path(path).write_text(self.to_json() + "\n")

    def write_csv(self, path: Path | str) -> None:
        keys = sorted({k for pt in self.points for k in pt.params})
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(keys + ["lhs", "rhs", "ratio"])
            for pt in self.points:
                row = [pt.params.get(k, "") for k in keys]
                writer.writerow(row + [repr(pt.lhs), repr(pt.rhs), repr(pt.ratio)])


def check_band(value: float, band: tuple[Optional[float], Optional[float]]) -> bool:
    lo, hi = band
    if lo is not None and value < lo:
        return False
    if hi is not None and value > hi:
        return False
    return True


REPORT_SCHEMA = {
    "type": "object",
    "required": ["name", "points", "fit", "band", "pass"],
    "properties": {
        "name": {"type": "string"},
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["params", "lhs", "rhs", "ratio"],
                "properties": {
                    "params": {"type": "object"},
                    "lhs": {"type": "number"},
                    "rhs": {"type": "number"},
                    "ratio": {"type": "number", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "fit": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["exponent", "stderr", "constant"],
                    "properties": {
                        "exponent": {"type": "number"},
                        "stderr": {"type": "number"},
                        "constant": {"type": "number"},
                    },
                    "additionalProperties": False,
                },
            ]
        },
        "band": {
            "type": "object",
            "required": ["lo", "hi"],
            "properties": {
                "lo": {"type": ["number", "null"]},
                "hi": {"type": ["number", "null"]},
            },
            "additionalProperties": False,
        },
        "pass": {"type": "boolean"},
        "extras": {"type": "object"},
    },
    "additionalProperties": False,
}
