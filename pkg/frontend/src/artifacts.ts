import { readFileSync } from "fs";

import {
  DIAGNOSTIC_COLUMNS,
  Diagnostics,
  Partition,
  PartitionSchema,
  Report,
  ReportSchema,
} from "./types.js";

export class ArtifactError extends Error {}

export function readReport(path: string): Report {
  const parsed = ReportSchema.safeParse(JSON.parse(readFileSync(path, "utf8")));
  if (!parsed.success) {
    throw new ArtifactError(`${path}: not a sweep report: ${parsed.error.issues[0]?.message}`);
  }
  return parsed.data;
}

export function readPartition(path: string): Partition {
  const parsed = PartitionSchema.safeParse(JSON.parse(readFileSync(path, "utf8")));
  if (!parsed.success) {
    throw new ArtifactError(`${path}: not a partition: ${parsed.error.issues[0]?.message}`);
  }
  return parsed.data;
}

export function readDiagnostics(path: string): Diagnostics {
  const lines = readFileSync(path, "utf8").trim().split(/\r?\n/);
  if (lines.length < 2) throw new ArtifactError(`${path}: empty diagnostics CSV`);
  const header = lines[0].split(",");
  if (header[0] !== "t") throw new ArtifactError(`${path}: first column must be t`);
  for (const col of DIAGNOSTIC_COLUMNS) {
    if (!header.includes(col)) throw new ArtifactError(`${path}: missing column ${col}`);
  }
  const columns: number[][] = header.map(() => []);
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new ArtifactError(`${path}:${i + 1}: expected ${header.length} cells`);
    }
    cells.forEach((cell, j) => {
      const v = Number(cell);
      if (!Number.isFinite(v)) throw new ArtifactError(`${path}:${i + 1}: bad number ${cell}`);
      columns[j].push(v);
    });
  }
  const channels = new Map<string, number[]>();
  header.forEach((name, j) => {
    if (name !== "t") channels.set(name, columns[j]);
  });
  return { t: columns[header.indexOf("t")], channels };
}

/** The numeric sweep axis of a report: the params key with the most distinct
 * numeric values, skipping control points. */
export function sweepAxis(report: Report): { key: string; xs: number[]; ys: number[] } {
  const counts = new Map<string, Set<number>>();
  for (const pt of report.points) {
    if (pt.params["control"]) continue;
    for (const [key, value] of Object.entries(pt.params)) {
      if (typeof value === "number") {
        if (!counts.has(key)) counts.set(key, new Set());
        counts.get(key)!.add(value);
      }
    }
  }
  let best: string | null = null;
  let bestCount = 1;
  for (const [key, values] of [...counts.entries()].sort()) {
    if (values.size > bestCount) {
      best = key;
      bestCount = values.size;
    }
  }
  if (best === null) throw new ArtifactError(`report ${report.name} has no numeric sweep axis`);
  // one point per axis value: the max lhs (the empirical constant)
  const byX = new Map<number, number>();
  for (const pt of report.points) {
    if (pt.params["control"]) continue;
    const x = pt.params[best];
    if (typeof x !== "number") continue;
    byX.set(x, Math.max(byX.get(x) ?? -Infinity, pt.lhs));
  }
  const xs = [...byX.keys()].sort((a, b) => a - b);
  return { key: best, xs, ys: xs.map((x) => byX.get(x)!) };
}
