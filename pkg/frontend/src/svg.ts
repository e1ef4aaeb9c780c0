// Self-contained SVG line chart: one polyline per series, a vertical error
// bar per aggregated point, markers, axes with ticks, and a legend. No
// styling dependencies; everything is plain shapes and attributes.

import { SeriesPoint } from "./aggregate.js";

export interface ChartOptions {
  width?: number;
  height?: number;
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

const MARGIN = { top: 44, right: 150, bottom: 52, left: 64 };

function escapeText(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function formatTick(value: number): string {
  if (value === 0) {
    return "0";
  }
  return String(parseFloat(value.toPrecision(4)));
}

function domain(values: number[], padFraction: number): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}

function ticks(lo: number, hi: number, count: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < count; i++) {
    out.push(lo + ((hi - lo) * i) / (count - 1));
  }
  return out;
}

export function renderChart(
  series: Map<string, SeriesPoint[]>,
  options: ChartOptions = {},
): string {
  if (series.size === 0) {
    throw new Error("no series to render");
  }
  const width = options.width ?? 640;
  const height = options.height ?? 420;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs: number[] = [];
  const ys: number[] = [];
  for (const points of series.values()) {
    if (points.length === 0) {
      throw new Error("series with zero points");
    }
    for (const p of points) {
      xs.push(p.x);
      ys.push(p.mean - p.sem, p.mean + p.sem);
    }
  }
  const [xLo, xHi] = domain(xs, 0.04);
  const [yLo, yHi] = domain(ys, 0.08);
  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;
  const fmt = (v: number) => v.toFixed(2);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (options.title) {
    parts.push(
      `<text class="title" x="${width / 2}" y="24" text-anchor="middle" ` +
        `font-size="15">${escapeText(options.title)}</text>`,
    );
  }

  // Axes and ticks.
  const axisY = MARGIN.top + plotH;
  parts.push(`<g class="axes" stroke="#333">`);
  parts.push(
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${MARGIN.left + plotW}" y2="${axisY}"/>`,
  );
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisY}"/>`,
  );
  for (const t of ticks(xLo, xHi, 5)) {
    const x = fmt(sx(t));
    parts.push(`<line x1="${x}" y1="${axisY}" x2="${x}" y2="${axisY + 5}"/>`);
    parts.push(
      `<text x="${x}" y="${axisY + 20}" text-anchor="middle" stroke="none" ` +
        `fill="#333">${formatTick(t)}</text>`,
    );
  }
  for (const t of ticks(yLo, yHi, 5)) {
    const y = fmt(sy(t));
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${y}" x2="${MARGIN.left}" y2="${y}"/>`);
    parts.push(
      `<text x="${MARGIN.left - 9}" y="${y}" text-anchor="end" dy="4" stroke="none" ` +
        `fill="#333">${formatTick(t)}</text>`,
    );
  }
  parts.push(`</g>`);
  if (options.xLabel) {
    parts.push(
      `<text class="x-label" x="${MARGIN.left + plotW / 2}" y="${height - 10}" ` +
        `text-anchor="middle">${escapeText(options.xLabel)}</text>`,
    );
  }
  if (options.yLabel) {
    const cx = 18;
    const cy = MARGIN.top + plotH / 2;
    parts.push(
      `<text class="y-label" x="${cx}" y="${cy}" text-anchor="middle" ` +
        `transform="rotate(-90 ${cx} ${cy})">${escapeText(options.yLabel)}</text>`,
    );
  }

  // One group per series: error bars behind, then the line, then markers.
  let index = 0;
  for (const [name, points] of series) {
    const color = PALETTE[index % PALETTE.length]!;
    const label = escapeText(name === "" ? `series ${index + 1}` : name);
    parts.push(`<g class="curve-group" data-curve="${label}">`);
    for (const p of points) {
      if (p.sem > 0) {
        const x = fmt(sx(p.x));
        const top = fmt(sy(p.mean + p.sem));
        const bottom = fmt(sy(p.mean - p.sem));
        parts.push(
          `<line class="error-bar" x1="${x}" y1="${top}" x2="${x}" y2="${bottom}" ` +
            `stroke="${color}" stroke-width="1.5"/>`,
        );
      }
    }
    const coords = points
      .map((p) => `${fmt(sx(p.x))},${fmt(sy(p.mean))}`)
      .join(" ");
    parts.push(
      `<polyline class="curve" points="${coords}" fill="none" ` +
        `stroke="${color}" stroke-width="2"/>`,
    );
    for (const p of points) {
      parts.push(
        `<circle class="marker" cx="${fmt(sx(p.x))}" cy="${fmt(sy(p.mean))}" ` +
          `r="3" fill="${color}"/>`,
      );
    }
    parts.push(`</g>`);
    index++;
  }

  // Legend down the right edge.
  parts.push(`<g class="legend">`);
  index = 0;
  for (const name of series.keys()) {
    const color = PALETTE[index % PALETTE.length]!;
    const label = escapeText(name === "" ? `series ${index + 1}` : name);
    const y = MARGIN.top + 8 + index * 20;
    const x = MARGIN.left + plotW + 16;
    parts.push(
      `<line x1="${x}" y1="${y}" x2="${x + 18}" y2="${y}" stroke="${color}" ` +
        `stroke-width="2"/>`,
    );
    parts.push(`<text x="${x + 24}" y="${y}" dy="4">${label}</text>`);
    index++;
  }
  parts.push(`</g>`);

  parts.push(`</svg>`);
  return parts.join("\n");
}
