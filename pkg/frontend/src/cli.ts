import { readFileSync, writeFileSync } from "node:fs";
import { basename, extname } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { parseCsv } from "./csv.js";
import {
  renderAggregatorShapes,
  renderRegretCurve,
  renderSimulation,
} from "./figures.js";

export const KINDS = ["aggregator_shapes", "regret_curve", "simulation"] as const;
export type Kind = (typeof KINDS)[number];

const USAGE =
  "usage: robustagg-figures --kind <aggregator_shapes|regret_curve|simulation> --out <file.svg> <input.csv> [more.csv ...]";

export function render(kind: Kind, paths: string[]): string {
  const tables = paths.map((p) => ({
    label: basename(p, extname(p)),
    table: parseCsv(readFileSync(p, "utf8")),
  }));
  if (kind === "simulation") return renderSimulation(tables);
  if (tables.length !== 1) {
    throw new Error(`${kind} takes exactly one input csv`);
  }
  const table = tables[0]!.table;
  return kind === "aggregator_shapes"
    ? renderAggregatorShapes(table)
    : renderRegretCurve(table);
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        out: { type: "string", short: "o" },
      },
      allowPositionals: true,
    });
  } catch (err) {
    console.error(String(err));
    console.error(USAGE);
    return 2;
  }
  const { kind, out } = parsed.values;
  const inputs = parsed.positionals;
  if (!kind || !(KINDS as readonly string[]).includes(kind) || !out || inputs.length === 0) {
    console.error(USAGE);
    return 2;
  }
  try {
    writeFileSync(out, render(kind as Kind, inputs));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
