/** Deterministic hand-assembled SVG: fixed canvas, fixed fonts, no layout
 * engine, numbers printed through one formatter. */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { left: 70, right: 24, top: 40, bottom: 48 };
export const FONT = "font-family=\"DejaVu Sans, Helvetica, sans-serif\"";

export const PALETTE = [
  "#1f6fb2",
  "#d1495b",
  "#3a9d6c",
  "#8a5ab6",
  "#c98a1f",
  "#4d4d4d",
];

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  if (v === Math.trunc(v) && Math.abs(v) < 1e7) return String(v);
  return String(Number(v.toPrecision(8)));
}

export class Svg {
  private parts: string[] = [];

  constructor(width = WIDTH, height = HEIGHT) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}">`,
      `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash?: string): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"${d}/>`
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string, opacity = 1): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${fill}" fill-opacity="${fmt(opacity)}"/>`
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  path(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    if (points.length === 0) return;
    const d = points
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
      .join(" ");
    this.parts.push(`<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  text(x: number, y: number, content: string, size = 12, anchor = "start", fill = "#222222"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" ${FONT} font-size="${size}" ` +
        `text-anchor="${anchor}" fill="${fill}">${escapeXml(content)}</text>`
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// ---------------------------------------------------------------------------
// scales and ticks
// ---------------------------------------------------------------------------

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
  log: boolean;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  fn.log = false;
  return fn;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const d0 = Math.log10(domain[0]);
  const d1 = Math.log10(domain[1]);
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((Math.log10(v) - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  fn.log = true;
  return fn;
}

export function linearTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= count) ?? mag * 10;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); e <= Math.floor(Math.log10(hi) + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length === 0) ticks.push(lo, hi);
  return ticks;
}
