import { readFileSync } from "fs";
import { describe, expect, it } from "vitest";

import { MissingColumnError, numericColumn, parseReportCsv } from "../src/csv.js";

const limitCsv = readFileSync(
  new URL("./fixtures/limit-study/report.csv", import.meta.url),
  "utf8",
);

describe("parseReportCsv", () => {
  it("reads the fixed header and one row per lambda", () => {
    const table = parseReportCsv(limitCsv);
    expect(table.header[0]).toBe("lambda");
    expect(table.header).toContain("err_linf_l2");
    expect(table.rows.length).toBe(3);
  });

  it("returns empty cells as null", () => {
    const table = parseReportCsv(limitCsv);
    expect(table.rows[0].eta).toBeNull();
    expect(table.rows[0].low_term).toBeNull();
  });

  it("round-trips float cells exactly", () => {
    const table = parseReportCsv(limitCsv);
    const line = limitCsv.split("\n")[1];
    const rawLambda = line.split(",")[0];
    expect(table.rows[0].lambda).toBe(Number(rawLambda));
    expect(String(table.rows[0].lambda)).toBe(rawLambda.replace(/\.0$/, ""));
  });

  it("rejects ragged rows", () => {
    expect(() => parseReportCsv("a,b\n1,2,3")).toThrow(/cells/);
  });

  it("rejects junk numbers", () => {
    expect(() => parseReportCsv("a,b\n1,zap")).toThrow(/bad number/);
  });
});

describe("numericColumn", () => {
  it("names the missing column", () => {
    const table = parseReportCsv(limitCsv);
    expect(() => numericColumn(table, "no_such_column")).toThrow(MissingColumnError);
    expect(() => numericColumn(table, "no_such_column")).toThrow(/no_such_column/);
  });

  it("skips empty cells", () => {
    const table = parseReportCsv(limitCsv);
    expect(numericColumn(table, "defect_rel").length).toBe(0);
    expect(numericColumn(table, "lambda").length).toBe(3);
  });
});
