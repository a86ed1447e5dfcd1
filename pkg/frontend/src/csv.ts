/**
 * CSV access for the simulator's output files. The files are plain
 * comma-separated text without quoting. Schema problems are reported as
 * SchemaError naming the offending column, and rendering never starts on
 * malformed input.
 */
import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  header: string[];
  rows: Record<string, string>[];
}

export function parseCsvText(text: string): string[][] {
  return text
    .split(/\r?\n/)
    .filter((line) => line.length > 0)
    .map((line) => line.split(","));
}

/**
 * Read a CSV with a header row and validate that every required column is
 * present. Extra columns (e.g. per-family counts) are allowed.
 */
export function readTable(path: string, required: string[]): Table {
  const lines = parseCsvText(readFileSync(path, "utf8"));
  if (lines.length === 0) {
    throw new SchemaError(`${path}: file is empty`);
  }
  const header = lines[0];
  for (const col of required) {
    if (!header.includes(col)) {
      throw new SchemaError(`${path}: missing required column "${col}"`);
    }
  }
  const rows = lines.slice(1).map((cells, i) => {
    if (cells.length !== header.length) {
      throw new SchemaError(
        `${path}: row ${i + 2} has ${cells.length} cells, expected ${header.length}`,
      );
    }
    const row: Record<string, string> = {};
    header.forEach((name, j) => (row[name] = cells[j]));
    return row;
  });
  if (rows.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return { header, rows };
}

/** Parse a cell that must be a finite number, naming the column if not. */
export function num(row: Record<string, string>, column: string): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new SchemaError(
      `column "${column}" has non-numeric value "${row[column]}"`,
    );
  }
  return value;
}

/** Read a headerless integer-grid CSV (a lattice snapshot). */
export function readGrid(path: string): number[][] {
  const lines = parseCsvText(readFileSync(path, "utf8"));
  if (lines.length === 0) {
    throw new SchemaError(`${path}: file is empty`);
  }
  const width = lines[0].length;
  return lines.map((cells, i) => {
    if (cells.length !== width) {
      throw new SchemaError(
        `${path}: row ${i + 1} has ${cells.length} cells, expected ${width}`,
      );
    }
    return cells.map((c) => {
      const v = Number(c);
      if (!Number.isInteger(v)) {
        throw new SchemaError(`${path}: non-integer cell code "${c}"`);
      }
      return v;
    });
  });
}
