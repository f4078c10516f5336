import { readFileSync } from "fs";

export interface CsvTable {
  path: string;
  header: string[];
  /** column name -> numeric values, in file order */
  columns: Map<string, number[]>;
}

/** Read a small numeric CSV with a header row. */
export function readCsv(path: string): CsvTable {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const columns = new Map<string, number[]>(header.map((h) => [h, []]));
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `${path}:${i + 1}: expected ${header.length} cells, got ${cells.length}`,
      );
    }
    for (let c = 0; c < header.length; c++) {
      const value = Number(cells[c]);
      if (!Number.isFinite(value)) {
        throw new Error(
          `${path}:${i + 1}: column '${header[c]}' is not numeric: ${cells[c]}`,
        );
      }
      columns.get(header[c])!.push(value);
    }
  }
  return { path, header, columns };
}

/** Fetch named columns, failing with a diagnostic naming the missing one. */
export function requireColumns(table: CsvTable, names: string[]): number[][] {
  return names.map((name) => {
    const column = table.columns.get(name);
    if (column === undefined) {
      throw new Error(
        `${table.path}: missing column '${name}' (has: ${table.header.join(", ")})`,
      );
    }
    return column;
  });
}
