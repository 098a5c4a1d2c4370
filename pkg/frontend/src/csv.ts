import { readFileSync } from "fs";

export class SchemaError extends Error {}

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `row ${i + 2} has ${cells.length} columns, expected ${header.length}`,
      );
    }
    return cells;
  });
  return { header, rows };
}

export function readCsvFile(path: string): CsvTable {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  try {
    return parseCsv(text);
  } catch (err) {
    throw new SchemaError(`${path}: ${(err as Error).message}`);
  }
}

/** Column indices for the required names, with a diagnostic listing what is missing. */
export function requireColumns(table: CsvTable, required: string[], source: string): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of required) {
    const i = table.header.indexOf(name);
    if (i < 0) {
      const missing = required.filter((c) => !table.header.includes(c));
      throw new SchemaError(
        `${source}: missing column(s) ${missing.join(", ")}; found ${table.header.join(", ")}`,
      );
    }
    index.set(name, i);
  }
  return index;
}

export function toNumber(raw: string, column: string, source: string): number {
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`${source}: column ${column} has non-numeric value ${JSON.stringify(raw)}`);
  }
  return value;
}
