import { z } from "zod";

export class SchemaMismatchError extends Error {}

export const configSchema = z
  .object({
    problem: z.object({ kind: z.string() }).passthrough(),
    layers: z.number().int(),
    optimizer: z.object({ kind: z.string() }).passthrough(),
    noise: z.object({ kind: z.string() }).passthrough(),
    runs: z.number().int(),
    budget: z.number().int(),
    n_qubits: z.number().int(),
    ground_energy: z.number().nullable(),
    label: z.string(),
    delta_log_window: z.number().int().nullable(),
  })
  .passthrough();

export type RunConfig = z.infer<typeof configSchema>;

export const runRowSchema = z
  .object({
    seed: z.number().int(),
    final_cost: z.number().nullable(),
    evaluations_used: z.number().int(),
    relative_error: z.number().nullable(),
  })
  .passthrough();

export type RunRow = z.infer<typeof runRowSchema>;

export interface TracePoint {
  gateOptIndex: number;
  evalsUsed: number;
  cost: number;
  delta: number | null;
  phase: string;
}

export const TRACE_COLUMNS = [
  "gate_opt_index",
  "evals_used",
  "cost",
  "delta_avg",
  "phase",
] as const;
