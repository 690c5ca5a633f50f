/**
 * Sweep CSV schema: parsing and validation.
 *
 * The producer writes exactly these columns; dynamics cells
 * (mean_mz, stderr_mz, spin_temp_K) are empty for reference-only sweeps.
 * Parsing is read-only and never touches the filesystem itself.
 */

export const REQUIRED_COLUMNS = [
  "temperature_K",
  "mean_mz",
  "stderr_mz",
  "oracle_mean_sz_over_s",
  "oracle_var_sz",
  "spin_temp_K",
  "n_s",
  "n_t",
  "model",
  "two_s",
] as const;

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface SweepRow {
  temperature_K: number;
  mean_mz: number | null;
  stderr_mz: number | null;
  oracle_mean_sz_over_s: number;
  oracle_var_sz: number;
  spin_temp_K: number | null;
  n_s: number;
  n_t: number;
  model: string;
  two_s: number;
}

export interface SweepTable {
  path: string;
  rows: SweepRow[];
}

function requireNumber(cell: string, column: string, line: number, path: string): number {
  const value = Number(cell);
  if (cell.trim() === "" || !Number.isFinite(value)) {
    throw new SchemaError(
      `${path}:${line}: column '${column}' must be a finite number, got '${cell}'`,
    );
  }
  return value;
}

function optionalNumber(cell: string, column: string, line: number, path: string): number | null {
  if (cell.trim() === "") return null;
  return requireNumber(cell, column, line, path);
}

/** Parse one sweep CSV; throws SchemaError naming any missing column. */
export function parseSweepCsv(text: string, path = "<memory>"): SweepTable {
  const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
  if (lines.length === 0) {
    throw new SchemaError(`${path}: empty file, expected a sweep CSV header`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const index = new Map<string, number>();
  header.forEach((name, i) => index.set(name, i));
  const missing = REQUIRED_COLUMNS.filter((c) => !index.has(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `${path}: missing required column(s): ${missing.join(", ")} ` +
      `(found: ${header.join(", ")})`,
    );
  }
  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length < header.length) {
      throw new SchemaError(
        `${path}:${i + 1}: expected ${header.length} cells, got ${cells.length}`,
      );
    }
    const cell = (c: string) => cells[index.get(c)!];
    rows.push({
      temperature_K: requireNumber(cell("temperature_K"), "temperature_K", i + 1, path),
      mean_mz: optionalNumber(cell("mean_mz"), "mean_mz", i + 1, path),
      stderr_mz: optionalNumber(cell("stderr_mz"), "stderr_mz", i + 1, path),
      oracle_mean_sz_over_s: requireNumber(
        cell("oracle_mean_sz_over_s"), "oracle_mean_sz_over_s", i + 1, path),
      oracle_var_sz: requireNumber(cell("oracle_var_sz"), "oracle_var_sz", i + 1, path),
      spin_temp_K: optionalNumber(cell("spin_temp_K"), "spin_temp_K", i + 1, path),
      n_s: requireNumber(cell("n_s"), "n_s", i + 1, path),
      n_t: requireNumber(cell("n_t"), "n_t", i + 1, path),
      model: cell("model").trim(),
      two_s: requireNumber(cell("two_s"), "two_s", i + 1, path),
    });
  }
  rows.sort((a, b) => a.temperature_K - b.temperature_K);
  return { path, rows };
}

/** Spin label like "s = 1/2" from the two_s column. */
export function spinLabel(twoS: number): string {
  return twoS % 2 === 0 ? `s = ${twoS / 2}` : `s = ${twoS}/2`;
}
