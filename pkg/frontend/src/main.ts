// CLI: render a blindnet results CSV to an SVG chart.
//
//   blindnet-plots <results.csv> <output.svg> [--x T] [--y Z]
//                  [--curves snr|none] [--title text]

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";

import { groupSeries } from "./aggregate.js";
import { COLUMNS, NumericColumn, parseResults } from "./csv.js";
import { renderChart } from "./svg.js";

const USAGE =
  "usage: blindnet-plots <results.csv> <output.svg> " +
  "[--x T] [--y Z] [--curves snr|none] [--title text]";

function numericColumn(name: string, flag: string): NumericColumn {
  const known = (COLUMNS as readonly string[]).includes(name);
  if (name === "seed" || name === "error" || !known) {
    throw new Error(`${flag} must be a numeric results column, got "${name}"`);
  }
  return name as NumericColumn;
}

export function run(argv: string[]): void {
  const positional: string[] = [];
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined) {
        throw new Error(`${arg} needs a value`);
      }
      flags.set(arg.slice(2), value);
      i++;
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 2) {
    throw new Error(USAGE);
  }
  const [input, output] = positional;
  const x = numericColumn(flags.get("x") ?? "T", "--x");
  const y = numericColumn(flags.get("y") ?? "Z", "--y");
  const curvesFlag = flags.get("curves") ?? "snr";
  const curve =
    curvesFlag === "none" ? undefined : numericColumn(curvesFlag, "--curves");

  const rows = parseResults(readFileSync(input!, "utf8"));
  const series = groupSeries(rows, { x, y, curve });
  if (series.size === 0) {
    throw new Error(`no plottable rows for y=${y} (all failed or empty)`);
  }
  const svg = renderChart(series, {
    title: flags.get("title"),
    xLabel: x,
    yLabel: y,
  });
  writeFileSync(output!, svg + "\n");
  let points = 0;
  for (const s of series.values()) {
    points += s.length;
  }
  console.log(`wrote ${output}: ${series.size} curve(s), ${points} point(s)`);
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;

if (invokedDirectly) {
  try {
    run(process.argv.slice(2));
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  }
}
