import Papa from "papaparse";

export interface Table {
  header: string[];
  rows: string[][];
}

/** Strict rectangular CSV: first line is the header, all rows same width. */
export function parseCsv(text: string): Table {
  const res = Papa.parse<string[]>(text.trim(), {
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (res.errors.length > 0) {
    throw new Error(`csv parse: ${res.errors[0]!.message}`);
  }
  const data = res.data;
  if (data.length < 2) {
    throw new Error("csv needs a header line and at least one data row");
  }
  const width = data[0]!.length;
  data.forEach((row, i) => {
    if (row.length !== width) {
      throw new Error(`row ${i + 1}: expected ${width} fields, got ${row.length}`);
    }
  });
  return { header: data[0]!, rows: data.slice(1) };
}

/** Column values as numbers; "nan" and malformed cells become NaN. */
export function numericColumn(table: Table, index: number): number[] {
  return table.rows.map((row) => Number(row[index]));
}
