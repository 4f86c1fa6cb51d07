import { readFileSync } from "node:fs";

export type Row = Record<string, string>;

/** Strict reader for the benchmark's header-first comma CSVs. */
export function readCsv(path: string): Row[] {
  const text = readFileSync(path, "utf8").trim();
  if (text === "") throw new Error(`${path}: empty file`);
  const lines = text.split(/\r?\n/);
  const header = lines[0].split(",");
  return lines.slice(1).map((line, i) => {
    const fields = line.split(",");
    if (fields.length !== header.length) {
      throw new Error(
        `${path}: line ${i + 2} has ${fields.length} fields, expected ${header.length}`,
      );
    }
    const row: Row = {};
    header.forEach((name, j) => (row[name] = fields[j]));
    return row;
  });
}

export function requireColumns(rows: Row[], columns: string[], path: string): void {
  if (rows.length === 0) throw new Error(`${path}: no data rows`);
  for (const column of columns) {
    if (!(column in rows[0])) {
      throw new Error(`${path}: missing column '${column}'`);
    }
  }
}

export function num(row: Row, column: string): number {
  const raw = row[column];
  if (raw === undefined) throw new Error(`missing column '${column}'`);
  const value = Number(raw);
  if (Number.isNaN(value) && raw.toLowerCase() !== "nan") {
    throw new Error(`bad number '${raw}' in column '${column}'`);
  }
  return value;
}
