import { readFileSync, readdirSync } from "node:fs";
import { basename, join } from "node:path";
import Papa from "papaparse";
import {
  RunConfig,
  RunRow,
  SchemaMismatchError,
  TracePoint,
  TRACE_COLUMNS,
  configSchema,
  runRowSchema,
} from "./schema.js";

export interface RunDir {
  dir: string;
  label: string;
  config: RunConfig;
  runs: RunRow[];
  traces: TracePoint[][]; // one trace per run, seed order
}

function parseTraceCsv(path: string): TracePoint[] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of TRACE_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaMismatchError(`${path}: missing column '${column}'`);
    }
  }
  return parsed.data.map((row) => ({
    gateOptIndex: Number(row.gate_opt_index),
    evalsUsed: Number(row.evals_used),
    cost: Number(row.cost),
    delta: row.delta_avg === "" ? null : Number(row.delta_avg),
    phase: row.phase,
  }));
}

export function loadRunDir(dir: string): RunDir {
  let rawConfig: unknown;
  try {
    rawConfig = JSON.parse(readFileSync(join(dir, "config.json"), "utf8"));
  } catch (err) {
    throw new SchemaMismatchError(`${dir}: cannot read config.json (${err})`);
  }
  const config = configSchema.safeParse(rawConfig);
  if (!config.success) {
    const field = config.error.issues[0]?.path.join(".") ?? "?";
    throw new SchemaMismatchError(`${dir}/config.json: bad or missing field '${field}'`);
  }
  const runsText = readFileSync(join(dir, "runs.jsonl"), "utf8");
  const runs = runsText
    .split("\n")
    .filter((line) => line.trim() !== "")
    .map((line, index) => {
      const row = runRowSchema.safeParse(JSON.parse(line));
      if (!row.success) {
        const field = row.error.issues[0]?.path.join(".") ?? "?";
        throw new SchemaMismatchError(`${dir}/runs.jsonl:${index + 1}: bad field '${field}'`);
      }
      return row.data;
    });
  const traceFiles = readdirSync(dir)
    .filter((name) => /^trace_\d+\.csv$/.test(name))
    .sort((a, b) => seedOf(a) - seedOf(b));
  if (traceFiles.length === 0) {
    throw new SchemaMismatchError(`${dir}: no trace_<seed>.csv files`);
  }
  const traces = traceFiles.map((name) => parseTraceCsv(join(dir, name)));
  return { dir, label: config.data.label, config: config.data, runs, traces };
}

function seedOf(name: string): number {
  return Number(basename(name, ".csv").replace("trace_", ""));
}

/** Figures only compare runs of the same problem; mixing is a caller error. */
export function assertSameProblem(dirs: RunDir[]): void {
  const reference = JSON.stringify(dirs[0].config.problem);
  for (const entry of dirs.slice(1)) {
    if (JSON.stringify(entry.config.problem) !== reference) {
      throw new SchemaMismatchError(
        `${entry.dir}: problem metadata differs from ${dirs[0].dir} ` +
          `(${JSON.stringify(entry.config.problem)} vs ${reference})`,
      );
    }
  }
}

export function deltaWindow(config: RunConfig): number | null {
  if (config.delta_log_window !== null) return config.delta_log_window;
  const window = (config.optimizer as Record<string, unknown>)["window"];
  return typeof window === "number" ? window : null;
}
