"""Artifact writers and schema validation: diagnostics CSV, partition JSON,
run manifest."""

from __future__ import annotations

import csv
import json
import platform
from datetime import datetime, timezone
from pathlib import Path

import jsonschema
import numpy as np

from .partition import IntervalPartition
from .report import REPORT_SCHEMA
from .trajectory import CHANNELS, Trajectory

DIAGNOSTIC_COLUMNS = ("t",) + CHANNELS

# recorded in every manifest so a run can be reproduced against the exact
# symbol conventions
SYMBOL_DEFINITIONS = {
    "cutoff": (
        "phi(r) = 1 for r <= 1, 0 for r >= 2; on (1, 2) the C-infinity step "
        "1 - step(r - 1) with step(t) = e(t) / (e(t) + e(1 - t)), e(t) = exp(-1/t)"
    ),
    "taper": (
        "m(xi) = 1 for |xi| <= N, (N/|xi|)^(1-s) for |xi| >= 2N; on (N, 2N) "
        "exp(step((|xi| - N)/N) * ln 2^-(1-s)) with the same smooth step"
    ),
    "transform": "unitary DFT, 1/sqrt(n^dim) both directions; xi = (2*pi/L) * k",
}

PARTITION_SCHEMA = {
    "type": "object",
    "required": ["breakpoints", "intervals", "epsilon", "over_budget", "big_breakpoints"],
    "properties": {
        "breakpoints": {"type": "array", "items": {"type": "number"}, "minItems": 2},
        "intervals": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["t0", "t1", "l4"],
                "properties": {
                    "t0": {"type": "number"},
                    "t1": {"type": "number"},
                    "l4": {"type": "number", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "epsilon": {"type": "number", "exclusiveMinimum": 0},
        "over_budget": {"type": "array", "items": {"type": "integer"}},
        "big_breakpoints": {
            "oneOf": [{"type": "null"}, {"type": "array", "items": {"type": "number"}}]
        },
    },
    "additionalProperties": False,
}

MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["config", "seed", "versions", "symbols", "timestamp"],
    "properties": {
        "config": {"type": "object"},
        "seed": {"type": "integer"},
        "versions": {"type": "object"},
        "symbols": {"type": "object"},
        "timestamp": {"type": "string"},
    },
    "additionalProperties": False,
}


def write_diagnostics_csv(traj: Trajectory, path: Path | str) -> None:
    """One row per integrator step: t, mass, energy, energy_Iu, l4x, hs, h_half."""
    if traj.series is None:
        raise ValueError("trajectory carries no diagnostic series")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DIAGNOSTIC_COLUMNS)
        for j, t in enumerate(traj.series.times):
            row = [repr(float(t))]
            for name in CHANNELS:
                row.append(repr(float(traj.series.channels[name][j])))
            writer.writerow(row)


def partition_to_dict(part: IntervalPartition) -> dict:
    return {
        "breakpoints": [float(b) for b in part.breakpoints],
        "intervals": [
            {"t0": float(t0), "t1": float(t1), "l4": float(l4)}
            for (t0, t1), l4 in zip(part.intervals(), part.interval_l4)
        ],
        "epsilon": float(part.epsilon),
        "over_budget": [int(i) for i in part.over_budget],
        "big_breakpoints": None
        if part.big_breakpoints is None
        else [float(b) for b in part.big_breakpoints],
    }


def write_partition_json(part: IntervalPartition, path: Path | str) -> None:
    Path(path).write_text(json.dumps(partition_to_dict(part), indent=2, sort_keys=True) + "\n")


def build_manifest(config_dict: dict, seed: int) -> dict:
    return {
        "config": config_dict,
        "seed": int(seed),
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "nlslab": _package_version(),
        },
        "symbols": SYMBOL_DEFINITIONS,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _package_version() -> str:
    from . import __version__

    return __version__


def write_manifest(config_dict: dict, seed: int, path: Path | str) -> None:
    Path(path).write_text(json.dumps(build_manifest(config_dict, seed), indent=2, sort_keys=True) + "\n")


def validate_artifacts(out_dir: Path | str) -> None:
    """Schema-validate every artifact in the output directory; raises on the
    first violation."""
    out = Path(out_dir)
    for path in sorted(out.glob("*.json")):
        doc = json.loads(path.read_text())
        if path.name == "manifest.json":
            jsonschema.validate(doc, MANIFEST_SCHEMA)
        elif path.name == "partition.json":
            jsonschema.validate(doc, PARTITION_SCHEMA)
        elif path.name == "report.json":
            jsonschema.validate(doc, REPORT_SCHEMA)
        elif path.name == "error.json":
            jsonschema.validate(doc, {"type": "object", "required": ["error"]})
    for path in sorted(out.glob("*.csv")):
        _validate_csv(path)


def _validate_csv(path: Path) -> None:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty CSV")
        width = len(header)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != width:
                raise ValueError(f"{path}:{lineno}: expected {width} columns, got {len(row)}")
            if path.name == "diagnostics.csv":
                for token in row:
                    float(token)
