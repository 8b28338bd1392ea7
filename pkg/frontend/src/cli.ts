#!/usr/bin/env node
/**
 * dmnls-plot --input-csv runs/report.csv --x-column lambda --y-column err_linf_l2 \
 *            --log-log --annotate-slope --output figure.svg
 *
 * Prints the fitted slope to stdout; exits nonzero on a missing column, a
 * short CSV, or an unreadable file.
 */

import { MissingColumnError } from "./csv.js";
import { PlotSpec, render } from "./plot.js";

function usage(): string {
  return [
    "usage: dmnls-plot --input-csv FILE --x-column NAME --y-column NAME --output FILE",
    "                  [--log-log] [--annotate-slope]",
  ].join("\n");
}

export function parseArgs(argv: string[]): PlotSpec {
  const spec: Partial<PlotSpec> = { logLog: false, annotateSlope: false };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    switch (flag) {
      case "--log-log":
        spec.logLog = true;
        break;
      case "--annotate-slope":
        spec.annotateSlope = true;
        break;
      case "--input-csv":
      case "--x-column":
      case "--y-column":
      case "--output": {
        const value = argv[++i];
        if (value === undefined) {
          throw new Error(`flag ${flag} needs a value\n${usage()}`);
        }
        if (flag === "--input-csv") spec.inputCsv = value;
        if (flag === "--x-column") spec.xColumn = value;
        if (flag === "--y-column") spec.yColumn = value;
        if (flag === "--output") spec.output = value;
        break;
      }
      default:
        throw new Error(`unknown flag ${flag}\n${usage()}`);
    }
  }
  for (const key of ["inputCsv", "xColumn", "yColumn", "output"] as const) {
    if (spec[key] === undefined) {
      throw new Error(`missing --${key.replace(/[A-Z]/g, (c) => "-" + c.toLowerCase())}\n${usage()}`);
    }
  }
  return spec as PlotSpec;
}

export function main(argv: string[]): number {
  let spec: PlotSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const result = render(spec);
    if (result.slope !== null) {
      console.log(`slope ${result.slope}`);
    }
    console.log(`wrote ${result.output} (${result.points} points)`);
    return 0;
  } catch (err) {
    if (err instanceof MissingColumnError) {
      console.error(err.message);
      return 3;
    }
    console.error((err as Error).message);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
