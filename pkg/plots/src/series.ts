/** Step interpolation and pointwise statistics for trace series.
 *
 * Cost is piecewise-constant between gate updates, so traces are resampled
 * onto a shared grid with last-value-carried-forward before averaging.
 */

export interface Series {
  x: number[];
  y: number[];
}

export function unionGrid(seriesList: Series[]): number[] {
  const grid = new Set<number>();
  for (const series of seriesList) {
    for (const x of series.x) grid.add(x);
  }
  return [...grid].sort((a, b) => a - b);
}

/** Last value carried forward; null before the series' first point. */
export function stepInterpolate(series: Series, grid: number[]): (number | null)[] {
  const out: (number | null)[] = [];
  let cursor = -1;
  for (const x of grid) {
    while (cursor + 1 < series.x.length && series.x[cursor + 1] <= x) cursor += 1;
    out.push(cursor >= 0 ? series.y[cursor] : null);
  }
  return out;
}

function pointwise(
  seriesList: Series[],
  grid: number[],
  reduce: (values: number[]) => number,
): Series {
  const interpolated = seriesList.map((s) => stepInterpolate(s, grid));
  const x: number[] = [];
  const y: number[] = [];
  grid.forEach((gx, index) => {
    const values = interpolated
      .map((row) => row[index])
      .filter((v): v is number => v !== null);
    if (values.length === seriesList.length) {
      x.push(gx);
      y.push(reduce(values));
    }
  });
  return { x, y };
}

export function meanSeries(seriesList: Series[], grid?: number[]): Series {
  return pointwise(seriesList, grid ?? unionGrid(seriesList), mean);
}

export function medianSeries(seriesList: Series[], grid?: number[]): Series {
  return pointwise(seriesList, grid ?? unionGrid(seriesList), (v) => quantile(v, 0.5));
}

export function mean(values: number[]): number {
  return values.reduce((a, b) => a + b, 0) / values.length;
}

/** Linear-interpolation quantile over an unsorted sample. */
export function quantile(values: number[], fraction: number): number {
  const sorted = [...values].sort((a, b) => a - b);
  if (sorted.length === 1) return sorted[0];
  const position = fraction * (sorted.length - 1);
  const low = Math.floor(position);
  const high = Math.ceil(position);
  const weight = position - low;
  return sorted[low] * (1 - weight) + sorted[high] * weight;
}

export interface BoxStats {
  mean: number;
  median: number;
  q1: number;
  q3: number;
  whiskerLow: number;
  whiskerHigh: number;
}

/** Quartile box with whiskers at the most extreme data inside 1.5*IQR fences. */
export function boxStats(values: number[]): BoxStats {
  const q1 = quantile(values, 0.25);
  const median = quantile(values, 0.5);
  const q3 = quantile(values, 0.75);
  const iqr = q3 - q1;
  const lowFence = q1 - 1.5 * iqr;
  const highFence = q3 + 1.5 * iqr;
  const inside = values.filter((v) => v >= lowFence && v <= highFence);
  return {
    mean: mean(values),
    median,
    q1,
    q3,
    whiskerLow: Math.min(...inside),
    whiskerHigh: Math.max(...inside),
  };
}
