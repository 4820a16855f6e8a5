import { RunDir, assertSameProblem, deltaWindow } from "./loader.js";
import { SchemaMismatchError } from "./schema.js";
import {
  Series,
  boxStats,
  meanSeries,
  medianSeries,
  unionGrid,
} from "./series.js";
import { LinearScale, LogScale, Panel, legend, svgDocument } from "./svg.js";

const DIR_COLORS = ["#e6b422", "#e07b39", "#8b1a1a", "#1f4e9c", "#3a9bd5", "#49c0b0", "#7d4ba0"];
const RUN_BLUES = ["#9ecae1", "#6baed6", "#4292c6", "#2171b5", "#08519c", "#083b7a"];

export interface FigureOptions {
  log?: boolean;
  spaghetti?: boolean;
}

function costSeries(dir: RunDir): Series[] {
  return dir.traces.map((trace) => ({
    x: trace.map((p) => p.evalsUsed),
    y: trace.map((p) => p.cost),
  }));
}

function deltaSeries(dir: RunDir): Series[] {
  return dir.traces.map((trace) => {
    const points = trace.filter((p) => p.delta !== null);
    return { x: points.map((p) => p.gateOptIndex), y: points.map((p) => p.delta as number) };
  });
}

function zipped(series: Series): Array<[number, number]> {
  return series.x.map((x, index) => [x, series.y[index]] as [number, number]);
}

/** Mean cost vs circuit evaluations, one curve per run directory. */
export function convergenceFigure(dirs: RunDir[], options: FigureOptions = {}): string {
  assertSameProblem(dirs);
  const width = 760;
  const height = 480;
  const frame = { x0: 80, y0: 40, width: width - 120, height: height - 110 };
  const perDir = dirs.map((dir) => {
    const series = costSeries(dir);
    return { dir, series, mean: meanSeries(series) };
  });
  const allValues = perDir.flatMap((entry) =>
    options.spaghetti ? entry.series.flatMap((s) => s.y) : entry.mean.y,
  );
  const allEvals = perDir.flatMap((entry) => entry.mean.x);
  if (options.log && allValues.some((v) => v <= 0)) {
    throw new SchemaMismatchError(
      "log scale requested but column 'cost' has non-positive values",
    );
  }
  const lo = Math.min(...allValues);
  const hi = Math.max(...allValues);
  const pad = 0.05 * (hi - lo || 1);
  const xScale = new LinearScale(0, Math.max(...allEvals), frame.x0, frame.x0 + frame.width);
  const yScale = options.log
    ? new LogScale(lo, hi, frame.y0 + frame.height, frame.y0)
    : new LinearScale(lo - pad, hi + pad, frame.y0 + frame.height, frame.y0);
  const panel = new Panel(frame, xScale, yScale);
  perDir.forEach((entry, index) => {
    const color = DIR_COLORS[index % DIR_COLORS.length];
    if (options.spaghetti) {
      for (const series of entry.series) panel.path(zipped(series), color, 0.7, 0.35);
    }
    panel.path(zipped(entry.mean), color, 2.0);
  });
  const title = `${dirs[0].config.problem.kind}, mean of ${dirs[0].config.runs} runs`;
  const body = [
    panel.axes(title, "circuit evaluations", "cost"),
    legend(
      perDir.map((entry, index) => ({
        label: entry.dir.label,
        color: DIR_COLORS[index % DIR_COLORS.length],
      })),
      frame.x0 + 10,
      frame.y0 + 14,
    ),
  ];
  return svgDocument(width, height, body);
}

/** Windowed-average |<M>_avg - <M>| traces, one panel per directory. */
export function deltaTraceFigure(dirs: RunDir[]): string {
  assertSameProblem(dirs);
  const panelWidth = 270;
  const width = 70 + dirs.length * (panelWidth + 40);
  const height = 400;
  const perDir = dirs.map((dir) => {
    const series = deltaSeries(dir);
    if (series.every((s) => s.x.length === 0)) {
      throw new SchemaMismatchError(`${dir.dir}: column 'delta_avg' has no values`);
    }
    const grid = unionGrid(series);
    return { dir, series, mean: meanSeries(series, grid), median: medianSeries(series, grid) };
  });
  // shared y log range over every positive delta in every panel
  const positives = perDir.flatMap((entry) => entry.series.flatMap((s) => s.y.filter((v) => v > 0)));
  const yLo = Math.min(...positives);
  const yHi = Math.max(...positives);
  const body: string[] = [];
  perDir.forEach((entry, index) => {
    const frame = {
      x0: 70 + index * (panelWidth + 40),
      y0: 50,
      width: panelWidth,
      height: height - 130,
    };
    const xScale = new LinearScale(
      0,
      Math.max(...entry.series.map((s) => s.x[s.x.length - 1] ?? 1)),
      frame.x0,
      frame.x0 + frame.width,
    );
    const yScale = new LogScale(yLo, yHi, frame.y0 + frame.height, frame.y0);
    const panel = new Panel(frame, xScale, yScale);
    entry.series.forEach((series, runIndex) => {
      panel.path(zipped(series), RUN_BLUES[runIndex % RUN_BLUES.length], 0.8, 0.8);
    });
    panel.path(zipped(entry.mean), "#c62828", 1.8);
    panel.path(zipped(entry.median), "#2e7d32", 1.8);
    const window = deltaWindow(entry.dir.config);
    body.push(
      panel.axes(`w=${window ?? "?"}`, "gate optimizations", index === 0 ? "|avg - newest|" : ""),
    );
  });
  body.push(
    legend(
      [
        { label: "individual runs", color: RUN_BLUES[2] },
        { label: "mean", color: "#c62828" },
        { label: "median", color: "#2e7d32" },
      ],
      width - 150,
      20,
    ),
  );
  return svgDocument(width, height, body);
}

/** Relative-error box plot: one box per directory, mean as a diamond. */
export function boxplotFigure(dirs: RunDir[]): string {
  assertSameProblem(dirs);
  const width = 160 + dirs.length * 110;
  const height = 440;
  const frame = { x0: 90, y0: 40, width: width - 140, height: height - 120 };
  const values = dirs.map((dir) => {
    const errors = dir.runs
      .map((row) => row.relative_error)
      .filter((v): v is number => v !== null && isFinite(v));
    if (errors.length === 0) {
      throw new SchemaMismatchError(`${dir.dir}: column 'relative_error' has no values`);
    }
    return boxStats(errors);
  });
  const yAll = values.flatMap((stats) => [stats.whiskerLow, stats.whiskerHigh, stats.mean]);
  const lo = Math.min(...yAll);
  const hi = Math.max(...yAll);
  const pad = 0.08 * (hi - lo || Math.abs(hi) || 1);
  const xScale = new LinearScale(-0.5, dirs.length - 0.5, frame.x0, frame.x0 + frame.width);
  const yScale = new LinearScale(lo - pad, hi + pad, frame.y0 + frame.height, frame.y0);
  const panel = new Panel(frame, xScale, yScale);
  values.forEach((stats, index) => {
    const color = DIR_COLORS[index % DIR_COLORS.length];
    const halfWidth = 0.28;
    panel.vline(index, stats.whiskerLow, stats.q1, "#444");
    panel.vline(index, stats.q3, stats.whiskerHigh, "#444");
    panel.hline(stats.whiskerLow, index - halfWidth / 2, index + halfWidth / 2, "#444", 1);
    panel.hline(stats.whiskerHigh, index - halfWidth / 2, index + halfWidth / 2, "#444", 1);
    panel.box(index - halfWidth, index + halfWidth, stats.q1, stats.q3, "#333", color);
    panel.hline(stats.median, index - halfWidth, index + halfWidth, "#111", 2);
    panel.diamond(index, stats.mean, 5, "#222");
  });
  const body = [
    panel.axes(
      `relative error, ${dirs[0].config.runs} runs each`,
      "",
      "|E - E_g| / |E_g|",
      { xTicks: false },
    ),
    ...dirs.map((dir, index) => {
      const px = xScale.toPixel(index).toFixed(2);
      return (
        `<text x="${px}" y="${frame.y0 + frame.height + 18}" text-anchor="middle" ` +
        `font-size="10">${dir.label}</text>`
      );
    }),
  ];
  return svgDocument(width, height, body);
}
