import { z } from "zod";

// ---------------------------------------------------------------------------
// Artifact schemas (must match what the lab CLI emits)
// ---------------------------------------------------------------------------

export const SweepPointSchema = z.object({
  params: z.record(z.unknown()),
  lhs: z.number(),
  rhs: z.number(),
  ratio: z.number().min(0),
});

export const FitSchema = z.object({
  exponent: z.number(),
  stderr: z.number(),
  constant: z.number(),
});

export const ReportSchema = z.object({
  name: z.string(),
  points: z.array(SweepPointSchema),
  fit: FitSchema.nullable(),
  band: z.object({ lo: z.number().nullable(), hi: z.number().nullable() }),
  pass: z.boolean(),
  extras: z.record(z.unknown()).optional(),
});

export const PartitionSchema = z.object({
  breakpoints: z.array(z.number()).min(2),
  intervals: z.array(
    z.object({ t0: z.number(), t1: z.number(), l4: z.number().min(0) })
  ),
  epsilon: z.number().positive(),
  over_budget: z.array(z.number().int()),
  big_breakpoints: z.array(z.number()).nullable(),
});

export type Report = z.infer<typeof ReportSchema>;
export type Partition = z.infer<typeof PartitionSchema>;

export const DIAGNOSTIC_COLUMNS = [
  "t",
  "mass",
  "energy",
  "energy_Iu",
  "l4x",
  "hs",
  "h_half",
] as const;

export interface Diagnostics {
  t: number[];
  channels: Map<string, number[]>;
}

// ---------------------------------------------------------------------------
// Figure specification
// ---------------------------------------------------------------------------

export const FIGURE_KINDS = [
  "loglog_sweep",
  "time_series",
  "partition_strip",
  "ratio_table",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export const FigureSpecSchema = z.object({
  input: z.string(),
  kind: z.enum(FIGURE_KINDS),
  out: z.string(),
  /** overlay dashed reference slopes for the declared band (loglog_sweep) */
  slope_band: z.boolean().optional(),
  /** channel subset for time_series; defaults to every channel in the CSV */
  channels: z.array(z.string()).optional(),
});

export type FigureSpec = z.infer<typeof FigureSpecSchema>;
