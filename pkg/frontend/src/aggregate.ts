// Turn replicate rows into per-curve series of (x, mean, sem) points.

import { NumericColumn, ResultRow } from "./csv.js";

export interface Summary {
  mean: number;
  sem: number;
  count: number;
}

export interface SeriesPoint extends Summary {
  x: number;
}

export interface SeriesOptions {
  x: NumericColumn; // horizontal axis, e.g. "T" or "s"
  y: NumericColumn; // value to average over replicates, e.g. "Z"
  curve?: NumericColumn; // one series per distinct value, e.g. "snr"
}

// Mean and standard error with the n-1 variance denominator; a single
// observation has no spread estimate, so its sem is reported as 0.
export function meanAndSem(values: number[]): Summary {
  if (values.length === 0) {
    throw new Error("cannot summarize zero values");
  }
  let total = 0;
  for (const v of values) {
    total += v;
  }
  const mean = total / values.length;
  if (values.length === 1) {
    return { mean, sem: 0, count: 1 };
  }
  let squares = 0;
  for (const v of values) {
    squares += (v - mean) * (v - mean);
  }
  const variance = squares / (values.length - 1);
  return {
    mean,
    sem: Math.sqrt(variance) / Math.sqrt(values.length),
    count: values.length,
  };
}

// Group rows into series. Failed rows (non-empty error) and rows missing
// the y value are skipped; a curve column value of null groups under "".
export function groupSeries(
  rows: ResultRow[],
  options: SeriesOptions,
): Map<string, SeriesPoint[]> {
  const buckets = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    if (row.error !== "") {
      continue;
    }
    const y = row[options.y];
    const x = row[options.x];
    if (y === null || x === null) {
      continue;
    }
    let curveKey = "";
    if (options.curve) {
      const value = row[options.curve];
      curveKey = value === null ? "" : `${options.curve}=${value}`;
    }
    let curve = buckets.get(curveKey);
    if (!curve) {
      curve = new Map<number, number[]>();
      buckets.set(curveKey, curve);
    }
    let values = curve.get(x);
    if (!values) {
      values = [];
      curve.set(x, values);
    }
    values.push(y);
  }
  const series = new Map<string, SeriesPoint[]>();
  const names = [...buckets.keys()].sort();
  for (const name of names) {
    const curve = buckets.get(name)!;
    const points = [...curve.keys()]
      .sort((p, q) => p - q)
      .map((x) => ({ x, ...meanAndSem(curve.get(x)!) }));
    series.set(name, points);
  }
  return series;
}
