import { describe, expect, it } from "vitest";

import { numericColumn, parseCsv } from "../src/csv.js";

describe("parseCsv", () => {
  it("splits header and rows", () => {
    const t = parseCsv("a,b\n1,2\n3,4\n");
    expect(t.header).toEqual(["a", "b"]);
    expect(t.rows).toEqual([
      ["1", "2"],
      ["3", "4"],
    ]);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1\n")).toThrow(/row 2/);
  });

  it("rejects header-only input", () => {
    expect(() => parseCsv("a,b\n")).toThrow(/at least one data row/);
  });
});

describe("numericColumn", () => {
  it("coerces values and keeps nan as NaN", () => {
    const t = parseCsv("k,regret\n0,0.15\n1,nan\n");
    expect(numericColumn(t, 1)[0]).toBeCloseTo(0.15, 12);
    expect(Number.isNaN(numericColumn(t, 1)[1])).toBe(true);
  });
});
