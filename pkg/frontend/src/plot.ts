/**
 * The plotting pipeline: read a report.csv, fit a slope, emit an SVG figure.
 * This tool never recomputes physics; the CSV is the single source of truth
 * and the only computation beyond drawing is the least-squares fit.
 */

import { readFileSync, writeFileSync } from "fs";

import { MissingColumnError, parseReportCsv } from "./csv.js";
import { LineFit, leastSquares, logLogFit } from "./fit.js";
import { renderScatterSvg } from "./svg.js";

export interface PlotSpec {
  inputCsv: string;
  xColumn: string;
  yColumn: string;
  logLog: boolean;
  output: string;
  annotateSlope: boolean;
}

export interface PlotResult {
  slope: number | null;
  output: string;
  points: number;
}

export function render(spec: PlotSpec): PlotResult {
  const table = parseReportCsv(readFileSync(spec.inputCsv, "utf8"));
  for (const column of [spec.xColumn, spec.yColumn]) {
    if (!table.header.includes(column)) {
      throw new MissingColumnError(column, table.header);
    }
  }

  // keep rows where both cells are present
  const pairs: [number, number][] = [];
  for (const row of table.rows) {
    const x = row[spec.xColumn];
    const y = row[spec.yColumn];
    if (x !== null && y !== null) {
      pairs.push([x, y]);
    }
  }
  if (pairs.length < 2) {
    throw new Error(
      `need at least 2 rows with both '${spec.xColumn}' and '${spec.yColumn}', got ${pairs.length}`,
    );
  }
  const x = pairs.map((p) => p[0]);
  const y = pairs.map((p) => p[1]);

  let fit: LineFit | undefined;
  if (spec.annotateSlope) {
    fit = spec.logLog ? logLogFit(x, y) : leastSquares(x, y);
  }
  const caption = fit
    ? `${spec.yColumn} vs ${spec.xColumn}: fitted slope ${fit.slope}`
    : `${spec.yColumn} vs ${spec.xColumn}`;

  const svg = renderScatterSvg({
    x,
    y,
    logLog: spec.logLog,
    xLabel: spec.xColumn,
    yLabel: spec.yColumn,
    caption,
    fit,
  });
  writeFileSync(spec.output, svg);
  return { slope: fit ? fit.slope : null, output: spec.output, points: pairs.length };
}
