// Reader for the results CSV written by the blindnet experiment runner.
// The file format is versioned: a signature line, a header, then one row
// per replicate. Fields are comma-separated with minimal quoting (a field
// containing a comma or quote is wrapped in double quotes, inner quotes
// doubled). Floats are written with full precision; absent values are
// empty fields.

export const SIGNATURE = "# blindnet-results v1";

export const COLUMNS = [
  "n", "k", "a", "b", "snr", "s", "T", "replicate", "seed",
  "Z", "z_spectral", "q", "eta_eig", "eta_part", "lambda_gap",
  "bound_M", "bound_B", "q_bound", "eta_bound", "wall_time", "error",
] as const;

export type ColumnName = (typeof COLUMNS)[number];

export interface ResultRow {
  // Always present.
  n: number;
  k: number;
  s: number;
  T: number;
  replicate: number;
  seed: string; // unsigned 64-bit, wider than a JS number: kept verbatim
  error: string; // empty when the grid point succeeded
  // Present depending on the model kind and requested metrics.
  a: number | null;
  b: number | null;
  snr: number | null;
  Z: number | null;
  z_spectral: number | null;
  q: number | null;
  eta_eig: number | null;
  eta_part: number | null;
  lambda_gap: number | null;
  bound_M: number | null;
  bound_B: number | null;
  q_bound: number | null;
  eta_bound: number | null;
  wall_time: number | null;
}

export type NumericColumn = Exclude<ColumnName, "seed" | "error">;

const REQUIRED: NumericColumn[] = ["n", "k", "s", "T", "replicate"];

function splitLine(line: string, lineNo: number): string[] {
  const fields: string[] = [];
  let field = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch === '"' && field === "") {
      quoted = true;
    } else if (ch === ",") {
      fields.push(field);
      field = "";
    } else {
      field += ch;
    }
  }
  if (quoted) {
    throw new Error(`line ${lineNo}: unterminated quoted field`);
  }
  fields.push(field);
  return fields;
}

function parseNumber(raw: string, column: string, lineNo: number): number | null {
  if (raw === "") {
    return null;
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new Error(`line ${lineNo}: ${column} is not a number: ${raw}`);
  }
  return value;
}

export function parseResults(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length < 2) {
    throw new Error("file too short: need a signature line and a header");
  }
  if (lines[0] !== SIGNATURE) {
    throw new Error(`line 1: expected signature "${SIGNATURE}", got "${lines[0]}"`);
  }
  if (lines[1] !== COLUMNS.join(",")) {
    throw new Error(`line 2: header does not match the v1 column list`);
  }
  const rows: ResultRow[] = [];
  for (let i = 2; i < lines.length; i++) {
    const lineNo = i + 1;
    const fields = splitLine(lines[i]!, lineNo);
    if (fields.length !== COLUMNS.length) {
      throw new Error(
        `line ${lineNo}: expected ${COLUMNS.length} fields, got ${fields.length}`,
      );
    }
    const cell = new Map<ColumnName, string>();
    COLUMNS.forEach((column, j) => cell.set(column, fields[j]!));
    const numeric = (column: NumericColumn) =>
      parseNumber(cell.get(column)!, column, lineNo);
    for (const column of REQUIRED) {
      if (cell.get(column) === "") {
        throw new Error(`line ${lineNo}: ${column} must not be empty`);
      }
    }
    rows.push({
      n: numeric("n")!,
      k: numeric("k")!,
      s: numeric("s")!,
      T: numeric("T")!,
      replicate: numeric("replicate")!,
      seed: cell.get("seed")!,
      error: cell.get("error")!,
      a: numeric("a"),
      b: numeric("b"),
      snr: numeric("snr"),
      Z: numeric("Z"),
      z_spectral: numeric("z_spectral"),
      q: numeric("q"),
      eta_eig: numeric("eta_eig"),
      eta_part: numeric("eta_part"),
      lambda_gap: numeric("lambda_gap"),
      bound_M: numeric("bound_M"),
      bound_B: numeric("bound_B"),
      q_bound: numeric("q_bound"),
      eta_bound: numeric("eta_bound"),
      wall_time: numeric("wall_time"),
    });
  }
  return rows;
}
