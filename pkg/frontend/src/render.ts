#!/usr/bin/env node
/** Figure renderer for lab artifacts.
 *
 * Usage:
 *   nlslab-render --spec figure.json
 *   nlslab-render <artifact> <kind> <out-base>
 *
 * where kind is one of loglog_sweep | time_series | partition_strip |
 * ratio_table. Both <out-base>.svg and <out-base>.png are written. Output is
 * byte-stable for identical inputs: fixed canvas, fixed palette, no clocks.
 */

import { readFileSync, writeFileSync } from "fs";

import { renderFigure } from "./figures.js";
import { FIGURE_KINDS, FigureSpec, FigureSpecSchema } from "./types.js";

function usage(): never {
  process.stderr.write(
    "usage: nlslab-render --spec <figure.json>\n" +
      `       nlslab-render <artifact> <${FIGURE_KINDS.join("|")}> <out-base>\n`
  );
  process.exit(1);
}

export function parseArgs(argv: string[]): FigureSpec {
  if (argv.length === 1 && (argv[0] === "--help" || argv[0] === "-h")) usage();
  if (argv[0] === "--spec") {
    if (argv.length !== 2) usage();
    const parsed = FigureSpecSchema.safeParse(JSON.parse(readFileSync(argv[1], "utf8")));
    if (!parsed.success) {
      throw new Error(`${argv[1]}: bad figure spec: ${parsed.error.issues[0]?.message}`);
    }
    return parsed.data;
  }
  if (argv.length === 3) {
    const parsed = FigureSpecSchema.safeParse({ input: argv[0], kind: argv[1], out: argv[2] });
    if (!parsed.success) {
      throw new Error(`bad arguments: ${parsed.error.issues[0]?.message}`);
    }
    return parsed.data;
  }
  usage();
}

export function outputPaths(out: string): { svg: string; png: string } {
  const base = out.replace(/\.(svg|png)$/, "");
  return { svg: `${base}.svg`, png: `${base}.png` };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const figure = renderFigure(spec);
    const paths = outputPaths(spec.out);
    writeFileSync(paths.svg, figure.svg);
    writeFileSync(paths.png, figure.png);
    process.stdout.write(`${paths.svg}\n${paths.png}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
}

if (process.argv[1] && /render\.(ts|js)$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
