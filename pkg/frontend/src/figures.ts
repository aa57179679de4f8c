import { readDiagnostics, readPartition, readReport, sweepAxis, ArtifactError } from "./artifacts.js";
import { hexColor, Raster } from "./png.js";
import {
  decadeTicks,
  fmt,
  HEIGHT,
  linearScale,
  linearTicks,
  logScale,
  MARGIN,
  PALETTE,
  Svg,
  WIDTH,
} from "./svg.js";
import { FigureSpec } from "./types.js";

export interface RenderedFigure {
  svg: string;
  png: Buffer;
}

const PLOT = {
  x0: MARGIN.left,
  x1: WIDTH - MARGIN.right,
  y0: HEIGHT - MARGIN.bottom,
  y1: MARGIN.top,
};

const AXIS = "#444444";
const GRID = "#dddddd";
const FLAG = "#d1495b";

function frame(svg: Svg, raster: Raster, title: string): void {
  svg.text(PLOT.x0, MARGIN.top - 16, title, 14);
  raster.addText("title", title);
  svg.line(PLOT.x0, PLOT.y0, PLOT.x1, PLOT.y0, AXIS, 1.5);
  svg.line(PLOT.x0, PLOT.y0, PLOT.x0, PLOT.y1, AXIS, 1.5);
  const rgb = hexColor(AXIS);
  raster.drawLine(PLOT.x0, PLOT.y0, PLOT.x1, PLOT.y0, rgb);
  raster.drawLine(PLOT.x0, PLOT.y0, PLOT.x0, PLOT.y1, rgb);
}

function xTick(svg: Svg, raster: Raster, px: number, label: string): void {
  svg.line(px, PLOT.y0, px, PLOT.y1, GRID, 1);
  svg.line(px, PLOT.y0, px, PLOT.y0 + 5, AXIS, 1);
  svg.text(px, PLOT.y0 + 18, label, 11, "middle");
  raster.drawLine(px, PLOT.y0, px, PLOT.y1, hexColor(GRID));
}

function yTick(svg: Svg, raster: Raster, py: number, label: string): void {
  svg.line(PLOT.x0, py, PLOT.x1, py, GRID, 1);
  svg.line(PLOT.x0 - 5, py, PLOT.x0, py, AXIS, 1);
  svg.text(PLOT.x0 - 8, py + 4, label, 11, "end");
  raster.drawLine(PLOT.x0, py, PLOT.x1, py, hexColor(GRID));
}

function padLog(values: number[]): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  return [lo / 1.5, hi * 1.5];
}

// ---------------------------------------------------------------------------
// figure kinds
// ---------------------------------------------------------------------------

export function loglogSweep(path: string, slopeBand: boolean): RenderedFigure {
  const report = readReport(path);
  if (report.fit === null) {
    throw new ArtifactError(`${path}: loglog_sweep needs a fitted report (fit is null)`);
  }
  const { key, xs, ys } = sweepAxis(report);
  const positive = xs.map((x, i) => [x, ys[i]] as [number, number]).filter(([, y]) => y > 0);
  if (positive.length === 0) throw new ArtifactError(`${path}: no positive sweep values to plot`);

  const svg = new Svg();
  const raster = new Raster(WIDTH, HEIGHT);
  const sx = logScale(padLog(positive.map(([x]) => x)), [PLOT.x0, PLOT.x1]);
  const sy = logScale(padLog(positive.map(([, y]) => y)), [PLOT.y0, PLOT.y1]);

  frame(svg, raster, `${report.name}: sweep over ${key}`);
  for (const t of decadeTicks(sx.domain[0], sx.domain[1])) xTick(svg, raster, sx(t), fmt(t));
  for (const t of decadeTicks(sy.domain[0], sy.domain[1])) yTick(svg, raster, sy(t), texp(t));
  svg.text((PLOT.x0 + PLOT.x1) / 2, HEIGHT - 12, key, 12, "middle");
  svg.text(16, (PLOT.y0 + PLOT.y1) / 2, "measured", 12, "middle");

  const { exponent, constant, stderr } = report.fit;
  const lineAt = (x: number) => constant * Math.pow(x, exponent);
  const pts: Array<[number, number]> = [
    [sx(sx.domain[0]), sy(lineAt(sx.domain[0]))],
    [sx(sx.domain[1]), sy(lineAt(sx.domain[1]))],
  ];
  svg.path(pts, PALETTE[1], 1.5);
  raster.drawLine(pts[0][0], pts[0][1], pts[1][0], pts[1][1], hexColor(PALETTE[1]));

  if (slopeBand && (report.band.lo !== null || report.band.hi !== null)) {
    const xm = Math.sqrt(sx.domain[0] * sx.domain[1]);
    const anchor = lineAt(xm);
    for (const slope of [report.band.lo, report.band.hi]) {
      if (slope === null) continue;
      const ref = (x: number) => anchor * Math.pow(x / xm, slope);
      const band: Array<[number, number]> = [
        [sx(sx.domain[0]), sy(ref(sx.domain[0]))],
        [sx(sx.domain[1]), sy(ref(sx.domain[1]))],
      ];
      svg.line(band[0][0], band[0][1], band[1][0], band[1][1], PALETTE[4], 1, "5,4");
      raster.drawLine(band[0][0], band[0][1], band[1][0], band[1][1], hexColor(PALETTE[4]));
    }
    raster.addText("band", `lo=${report.band.lo} hi=${report.band.hi}`);
  }

  for (const [x, y] of positive) {
    svg.circle(sx(x), sy(y), 4, PALETTE[0]);
    raster.drawCircle(sx(x), sy(y), 3, hexColor(PALETTE[0]));
  }

  // the annotation displays the report's fit verbatim; nothing is recomputed
  const annotation = `slope = ${exponent.toFixed(9)}`;
  svg.text(PLOT.x1, MARGIN.top - 16, `${annotation}  (stderr ${fmt(stderr)})`, 13, "end", PALETTE[1]);
  raster.addText("annotation", annotation);
  raster.addText("fit_exponent", String(exponent));
  raster.addText("fit_stderr", String(stderr));
  raster.addText("fit_constant", String(constant));
  return { svg: svg.render(), png: raster.encode() };
}

function texp(v: number): string {
  const e = Math.log10(v);
  if (Number.isInteger(e) && (e < -3 || e > 3)) return `1e${e}`;
  return fmt(v);
}

export function timeSeries(path: string, channels?: string[]): RenderedFigure {
  const diag = readDiagnostics(path);
  const names = channels ?? [...diag.channels.keys()];
  for (const name of names) {
    if (!diag.channels.has(name)) throw new ArtifactError(`${path}: no channel ${name}`);
  }
  const svg = new Svg();
  const raster = new Raster(WIDTH, HEIGHT);
  const values = names.flatMap((n) => diag.channels.get(n)!);
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (!(hi > lo)) {
    lo -= 1;
    hi += 1;
  }
  const sx = linearScale([diag.t[0], diag.t[diag.t.length - 1]], [PLOT.x0, PLOT.x1]);
  const sy = linearScale([lo, hi], [PLOT.y0, PLOT.y1]);
  frame(svg, raster, "diagnostic channels");
  for (const t of linearTicks(sx.domain[0], sx.domain[1], 6)) xTick(svg, raster, sx(t), fmt(t));
  for (const v of linearTicks(lo, hi, 5)) yTick(svg, raster, sy(v), fmt(v));
  svg.text((PLOT.x0 + PLOT.x1) / 2, HEIGHT - 12, "t", 12, "middle");

  names.forEach((name, i) => {
    const color = PALETTE[i % PALETTE.length];
    const series = diag.channels.get(name)!;
    const pts = diag.t.map((t, j) => [sx(t), sy(series[j])] as [number, number]);
    svg.path(pts, color, 1.5);
    const rgb = hexColor(color);
    for (let j = 1; j < pts.length; j++) {
      raster.drawLine(pts[j - 1][0], pts[j - 1][1], pts[j][0], pts[j][1], rgb);
    }
    svg.text(PLOT.x1, PLOT.y1 + 14 * (i + 1), name, 11, "end", color);
  });
  raster.addText("channels", names.join(","));
  return { svg: svg.render(), png: raster.encode() };
}

export function partitionStrip(path: string): RenderedFigure {
  const part = readPartition(path);
  const svg = new Svg(WIDTH, 220);
  const raster = new Raster(WIDTH, 220);
  const bps = part.breakpoints;
  const sx = linearScale([bps[0], bps[bps.length - 1]], [PLOT.x0, PLOT.x1]);
  const top = 70;
  const bottom = 150;

  svg.text(PLOT.x0, 30, `L4 budget partition (epsilon = ${fmt(part.epsilon)})`, 14);
  raster.addText("title", `L4 budget partition (epsilon = ${fmt(part.epsilon)})`);
  part.intervals.forEach((iv, i) => {
    const flagged = part.over_budget.includes(i);
    const color = flagged ? FLAG : PALETTE[i % 2];
    const x = sx(iv.t0);
    const w = sx(iv.t1) - sx(iv.t0);
    svg.rect(x, top, w, bottom - top, color, 0.45);
    raster.fillRect(x, top, w, bottom - top, hexColor(color), 0.45);
    svg.text((sx(iv.t0) + sx(iv.t1)) / 2, bottom + 16, fmt(Number(iv.l4.toPrecision(3))), 10, "middle");
  });
  for (const b of bps) {
    svg.line(sx(b), top, sx(b), bottom, AXIS, 1);
    raster.drawLine(sx(b), top, sx(b), bottom, hexColor(AXIS));
  }
  if (part.big_breakpoints) {
    for (const b of part.big_breakpoints) {
      svg.line(sx(b), top - 12, sx(b), bottom + 12, "#111111", 2.5);
      raster.drawLine(sx(b), top - 12, sx(b), bottom + 12, hexColor("#111111"));
    }
  }
  svg.text(PLOT.x0, 195, `${part.intervals.length} little interval(s)` +
    (part.big_breakpoints ? `, ${part.big_breakpoints.length - 1} big` : ""), 11);
  raster.addText("intervals", String(part.intervals.length));
  return { svg: svg.render(), png: raster.encode() };
}

export function ratioTable(path: string): RenderedFigure {
  const report = readReport(path);
  const header = ["params", "lhs", "rhs", "ratio"];
  const rows = report.points.map((pt) => [
    Object.entries(pt.params)
      .sort(([a], [b]) => (a < b ? -1 : 1))
      .map(([k, v]) => `${k}=${typeof v === "number" ? fmt(v) : String(v)}`)
      .join(" "),
    fmt(Number(pt.lhs.toPrecision(6))),
    fmt(Number(pt.rhs.toPrecision(6))),
    fmt(Number(pt.ratio.toPrecision(6))),
  ]);
  const rowH = 20;
  const height = 90 + rowH * (rows.length + 1);
  const svg = new Svg(WIDTH, height);
  const raster = new Raster(WIDTH, height);
  svg.text(MARGIN.left, 30, `${report.name}: measured sides`, 14);
  raster.addText("title", `${report.name}: measured sides`);
  const colX = [MARGIN.left, 360, 450, 540];
  const y0 = 56;
  header.forEach((h, c) => svg.text(colX[c], y0, h, 12, "start", "#111111"));
  svg.line(MARGIN.left, y0 + 6, WIDTH - MARGIN.right, y0 + 6, AXIS, 1);
  raster.drawLine(MARGIN.left, y0 + 6, WIDTH - MARGIN.right, y0 + 6, hexColor(AXIS));
  rows.forEach((cells, r) => {
    const y = y0 + rowH * (r + 1);
    cells.forEach((cell, c) => svg.text(colX[c], y, cell, 11));
    raster.drawLine(MARGIN.left, y + 6, WIDTH - MARGIN.right, y + 6, hexColor(GRID));
  });
  raster.addText("table", rows.map((r) => r.join("\t")).join("\n"));
  const verdict = report.pass ? "pass" : "fail";
  svg.text(WIDTH - MARGIN.right, 30, verdict, 13, "end", report.pass ? PALETTE[2] : FLAG);
  raster.addText("pass", String(report.pass));
  return { svg: svg.render(), png: raster.encode() };
}

export function renderFigure(spec: FigureSpec): RenderedFigure {
  switch (spec.kind) {
    case "loglog_sweep":
      return loglogSweep(spec.input, spec.slope_band ?? true);
    case "time_series":
      return timeSeries(spec.input, spec.channels);
    case "partition_strip":
      return partitionStrip(spec.input);
    case "ratio_table":
      return ratioTable(spec.input);
  }
}
