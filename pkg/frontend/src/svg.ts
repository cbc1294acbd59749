// Minimal SVG string building. Coordinates are rounded to two decimals so
// output is byte-stable across platforms.

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function fmt(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export type Attrs = Record<string, string | number>;

export function tag(name: string, attrs: Attrs, children: string[] = []): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join("");
  if (children.length === 0) return `<${name}${parts}/>`;
  return `<${name}${parts}>${children.join("")}</${name}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return tag("text", { x, y, ...attrs }, [esc(content)]);
}

export function polyline(points: Array<[number, number]>): string {
  return points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
}
