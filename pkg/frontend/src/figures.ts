import { Table, numericColumn } from "./csv.js";
import { LinearScale, linearScale, niceTicks } from "./scale.js";
import {
  AXIS_COLOR,
  BAR_FILL_RATIO,
  DASH,
  FONT_FAMILY,
  FONT_SIZE,
  GRID_COLOR,
  HEIGHT,
  MARGIN,
  MARKER_RADIUS,
  PALETTE,
  STROKE_WIDTH,
  WIDTH,
} from "./style.js";
import { polyline, tag, text } from "./svg.js";

export interface Series {
  name: string;
  color: string;
  dashed: boolean;
  points: Array<[number, number]>;
}

export interface LabeledTable {
  label: string;
  table: Table;
}

const AREA = {
  left: MARGIN.left,
  right: WIDTH - MARGIN.right,
  bottom: HEIGHT - MARGIN.bottom,
  top: MARGIN.top,
};

function tickLabel(v: number): string {
  return Number(v.toFixed(6)).toString();
}

function svgDocument(children: string[]): string {
  const body = [
    tag("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#ffffff" }),
    ...children,
  ];
  return tag(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width: WIDTH,
      height: HEIGHT,
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
      "font-family": FONT_FAMILY,
      "font-size": FONT_SIZE,
    },
    body,
  );
}

function frame(
  xLabel: string,
  yLabel: string,
  ys: LinearScale,
  yTicks: number[],
): string[] {
  const out: string[] = [];
  for (const t of yTicks) {
    const y = ys.map(t);
    out.push(tag("line", { x1: AREA.left, y1: y, x2: AREA.right, y2: y, stroke: GRID_COLOR }));
    out.push(text(AREA.left - 7, y + 3.5, tickLabel(t), { "text-anchor": "end", fill: AXIS_COLOR }));
  }
  out.push(tag("line", { x1: AREA.left, y1: AREA.bottom, x2: AREA.right, y2: AREA.bottom, stroke: AXIS_COLOR }));
  out.push(tag("line", { x1: AREA.left, y1: AREA.top, x2: AREA.left, y2: AREA.bottom, stroke: AXIS_COLOR }));
  out.push(
    text((AREA.left + AREA.right) / 2, HEIGHT - 10, xLabel, { "text-anchor": "middle", fill: AXIS_COLOR }),
  );
  out.push(
    text(16, (AREA.top + AREA.bottom) / 2, yLabel, {
      "text-anchor": "middle",
      fill: AXIS_COLOR,
      transform: `rotate(-90 16 ${(AREA.top + AREA.bottom) / 2})`,
    }),
  );
  return out;
}

function xTickMarks(xs: LinearScale, ticks: number[], labels?: string[]): string[] {
  return ticks.flatMap((t, i) => {
    const x = xs.map(t);
    return [
      tag("line", { x1: x, y1: AREA.bottom, x2: x, y2: AREA.bottom + 5, stroke: AXIS_COLOR }),
      text(x, AREA.bottom + 17, labels ? (labels[i] ?? "") : tickLabel(t), {
        "text-anchor": "middle",
        fill: AXIS_COLOR,
      }),
    ];
  });
}

function seriesPath(s: Series, xs: LinearScale, ys: LinearScale, markers: boolean): string[] {
  const mapped: Array<[number, number]> = s.points.map(([x, y]) => [xs.map(x), ys.map(y)]);
  const out = [
    tag("polyline", {
      class: "series",
      "data-name": s.name,
      points: polyline(mapped),
      fill: "none",
      stroke: s.color,
      "stroke-width": STROKE_WIDTH,
      ...(s.dashed ? { "stroke-dasharray": DASH } : {}),
    }),
  ];
  if (markers) {
    for (const [cx, cy] of mapped) {
      out.push(tag("circle", { cx, cy, r: MARKER_RADIUS, fill: s.color }));
    }
  }
  return out;
}

function legend(series: Series[], x: number, y: number): string[] {
  return series.flatMap((s, i) => {
    const ly = y + i * 16;
    return [
      tag("line", {
        x1: x,
        y1: ly - 3.5,
        x2: x + 22,
        y2: ly - 3.5,
        stroke: s.color,
        "stroke-width": STROKE_WIDTH,
        ...(s.dashed ? { "stroke-dasharray": DASH } : {}),
      }),
      text(x + 28, ly, s.name, { fill: AXIS_COLOR }),
    ];
  });
}

/** Line chart of every value column against the first column.  Columns
 * whose names mark the no-adversary variant ("non...") are dashed. */
export function renderAggregatorShapes(table: Table): string {
  const xVals = numericColumn(table, 0);
  const series: Series[] = table.header.slice(1).map((name, i) => ({
    name,
    color: PALETTE[i % PALETTE.length]!,
    dashed: /non/.test(name),
    points: numericColumn(table, i + 1).map((y, r) => [xVals[r]!, y]),
  }));
  const xs = linearScale([Math.min(...xVals), Math.max(...xVals)], [AREA.left, AREA.right]);
  const ys = linearScale([0, 1], [AREA.bottom, AREA.top]);
  return svgDocument([
    ...frame(table.header[0]!, "f(x)", ys, niceTicks(0, 1)),
    ...xTickMarks(xs, niceTicks(xs.domain[0], xs.domain[1])),
    ...series.flatMap((s) => seriesPath(s, xs, ys, false)),
    ...legend(series, AREA.left + 10, AREA.top + 14),
  ]);
}

/** Single regret-vs-k line with markers; rows flagged invalid (or with a
 * non-finite regret) are excluded. */
export function renderRegretCurve(table: Table): string {
  const validIdx = table.header.indexOf("valid");
  const kVals = numericColumn(table, 0);
  const rVals = numericColumn(table, 1);
  const points: Array<[number, number]> = [];
  table.rows.forEach((row, i) => {
    const ok = validIdx < 0 || row[validIdx] !== "0";
    if (ok && Number.isFinite(rVals[i])) points.push([kVals[i]!, rVals[i]!]);
  });
  if (points.length === 0) throw new Error("no valid rows to draw");
  const series: Series = {
    name: table.header[1]!,
    color: PALETTE[0]!,
    dashed: false,
    points,
  };
  const maxY = Math.max(...points.map(([, y]) => y));
  const xs = linearScale(
    [Math.min(...points.map(([x]) => x)), Math.max(...points.map(([x]) => x))],
    [AREA.left, AREA.right],
  );
  const ys = linearScale([0, maxY * 1.08], [AREA.bottom, AREA.top]);
  return svgDocument([
    ...frame(table.header[0]!, table.header[1]!, ys, niceTicks(0, maxY * 1.08)),
    ...xTickMarks(xs, niceTicks(xs.domain[0], xs.domain[1])),
    ...seriesPath(series, xs, ys, true),
  ]);
}

const REGRET_COLUMN = "mean_regret";

function regretByAggregator(table: Table): Array<[string, number]> {
  const col = table.header.indexOf(REGRET_COLUMN);
  if (col < 0) throw new Error(`missing ${REGRET_COLUMN} column`);
  return table.rows.map((row) => [row[0]!, Number(row[col])]);
}

/** One input: bar chart of mean regret per aggregator.  Several inputs:
 * one line per aggregator across the inputs, in file order. */
export function renderSimulation(inputs: LabeledTable[]): string {
  if (inputs.length === 0) throw new Error("no input tables");
  if (inputs.length === 1) return simulationBars(inputs[0]!.table);
  return simulationLines(inputs);
}

function simulationBars(table: Table): string {
  const entries = regretByAggregator(table);
  const maxY = Math.max(...entries.map(([, v]) => v));
  const ys = linearScale([0, maxY * 1.15], [AREA.bottom, AREA.top]);
  const slot = (AREA.right - AREA.left) / entries.length;
  const bars = entries.flatMap(([name, value], i) => {
    const cx = AREA.left + slot * (i + 0.5);
    const w = slot * BAR_FILL_RATIO;
    const y = ys.map(value);
    return [
      tag("rect", {
        class: "bar",
        "data-name": name,
        x: cx - w / 2,
        y,
        width: w,
        height: AREA.bottom - y,
        fill: PALETTE[i % PALETTE.length]!,
      }),
      text(cx, y - 5, value.toFixed(4), { "text-anchor": "middle", fill: AXIS_COLOR }),
      text(cx, AREA.bottom + 17, name, { "text-anchor": "middle", fill: AXIS_COLOR }),
    ];
  });
  return svgDocument([
    ...frame(table.header[0]!, REGRET_COLUMN, ys, niceTicks(0, maxY * 1.15)),
    ...bars,
  ]);
}

function simulationLines(inputs: LabeledTable[]): string {
  const names: string[] = [];
  for (const { table } of inputs) {
    for (const [name] of regretByAggregator(table)) {
      if (!names.includes(name)) names.push(name);
    }
  }
  const series: Series[] = names.map((name, i) => ({
    name,
    color: PALETTE[i % PALETTE.length]!,
    dashed: false,
    points: inputs.flatMap((input, xi) => {
      const hit = regretByAggregator(input.table).find(([n]) => n === name);
      return hit ? [[xi, hit[1]] as [number, number]] : [];
    }),
  }));
  const maxY = Math.max(...series.flatMap((s) => s.points.map(([, y]) => y)));
  const xs = linearScale([0, inputs.length - 1], [AREA.left, AREA.right]);
  const ys = linearScale([0, maxY * 1.08], [AREA.bottom, AREA.top]);
  return svgDocument([
    ...frame("", REGRET_COLUMN, ys, niceTicks(0, maxY * 1.08)),
    ...xTickMarks(xs, inputs.map((_, i) => i), inputs.map((input) => input.label)),
    ...series.flatMap((s) => seriesPath(s, xs, ys, true)),
    ...legend(series, AREA.left + 10, AREA.top + 14),
  ]);
}
