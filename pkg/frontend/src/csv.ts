/**
 * Reader for the fixed-column report.csv contract emitted by the simulation
 * package.  Empty cells are unused columns and come back as null; numeric
 * cells round-trip exactly (the writer uses shortest-representation floats).
 */

export interface ReportTable {
  header: string[];
  rows: Record<string, number | null>[];
}

export class MissingColumnError extends Error {
  constructor(public readonly column: string, header: string[]) {
    super(`column '${column}' not found; CSV has: ${header.join(", ")}`);
  }
}

export function parseReportCsv(text: string): ReportTable {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length === 0 || lines[0].trim() === "") {
    throw new Error("empty CSV");
  }
  const header = lines[0].split(",");
  const rows: Record<string, number | null>[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `row ${i} has ${cells.length} cells, header has ${header.length}`,
      );
    }
    const row: Record<string, number | null> = {};
    header.forEach((name, j) => {
      const cell = cells[j];
      if (cell === "") {
        row[name] = null;
        return;
      }
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        throw new Error(`row ${i}, column '${name}': bad number '${cell}'`);
      }
      row[name] = value;
    });
    rows.push(row);
  }
  return { header, rows };
}

/** Pull one numeric column, skipping rows where it is empty. */
export function numericColumn(table: ReportTable, column: string): number[] {
  if (!table.header.includes(column)) {
    throw new MissingColumnError(column, table.header);
  }
  return table.rows
    .map((row) => row[column])
    .filter((v): v is number => v !== null);
}
