import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

const FIXTURES = join(__dirname, "fixtures");
const SHAPES = join(FIXTURES, "aggregator_shapes.csv");

function tmpOut(name: string): string {
  return join(mkdtempSync(join(tmpdir(), "figs-")), name);
}

describe("cli", () => {
  it("writes an svg file and exits zero", () => {
    const out = tmpOut("shapes.svg");
    expect(main(["--kind", "aggregator_shapes", "--out", out, SHAPES])).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("</svg>");
  });

  it("produces byte-identical output across runs", () => {
    const a = tmpOut("a.svg");
    const b = tmpOut("b.svg");
    const argv = (out: string) => [
      "--kind",
      "simulation",
      "--out",
      out,
      join(FIXTURES, "simulation_k5.csv"),
      join(FIXTURES, "simulation_k20.csv"),
    ];
    expect(main(argv(a))).toBe(0);
    expect(main(argv(b))).toBe(0);
    expect(readFileSync(a)).toEqual(readFileSync(b));
  });

  it("rejects bad flags with a usage error", () => {
    expect(main(["--kind", "pie_chart", "--out", "x.svg", SHAPES])).toBe(2);
    expect(main(["--kind", "regret_curve", SHAPES])).toBe(2);
    expect(main(["--wat"])).toBe(2);
  });

  it("fails cleanly on unreadable input or extra files", () => {
    const out = tmpOut("x.svg");
    expect(main(["--kind", "regret_curve", "--out", out, "missing.csv"])).toBe(1);
    expect(
      main(["--kind", "regret_curve", "--out", out, SHAPES, SHAPES]),
    ).toBe(1);
  });
});
