import { EmptySeries, MissingColumn } from "./errors.js";

/** Parsed CSV: a header plus string rows (harness CSVs never quote fields). */
export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new EmptySeries("CSV has no content");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  return { header, rows };
}

export function columnIndex(table: Table, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new MissingColumn(name, table.header);
  }
  return idx;
}

export function stringColumn(table: Table, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => row[idx] ?? "");
}

export function numberColumn(table: Table, name: string): number[] {
  return stringColumn(table, name).map((value) => Number(value));
}

/** Rows for which `column` equals `value`, as a new table. */
export function filterRows(table: Table, name: string, value: string): Table {
  const idx = columnIndex(table, name);
  return { header: table.header, rows: table.rows.filter((row) => row[idx] === value) };
}
