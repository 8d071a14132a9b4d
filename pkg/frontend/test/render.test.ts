import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { parseResultsCsv } from "../src/csv.js";
import { buildOption, figureSeries, renderFigure, FIGURE_KINDS } from "../src/render.js";

const FIXDIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const FIXTURE = join(FIXDIR, "results.csv");
const SUMMARY = join(FIXDIR, "results_summary.csv");

// --- independent recomputation: own row reader, own median ------------------
// Everything here is recomputed from the raw CSV text without touching the
// library code under test: a minimal field splitter and a rank-selection
// median (counting, not sorting).

interface RawRow {
  method: string;
  size: number;
  ratio: number;
  reduceMs: number;
  totalMs: number;
}

function readRawRows(path: string): RawRow[] {
  const lines = readFileSync(path, "utf8").trim().split("\n");
  return lines.slice(1).map((line) => {
    const f = line.split(",");
    return {
      method: f[1]!,
      size: Number(f[2]),
      ratio: Number(f[4]),
      reduceMs: Number(f[5]),
      totalMs: Number(f[6]),
    };
  });
}

function rankSelect(values: readonly number[], rank: number): number {
  for (const v of values) {
    let smaller = 0;
    let equal = 0;
    for (const w of values) {
      if (w < v) smaller += 1;
      else if (w === v) equal += 1;
    }
    if (smaller <= rank && rank < smaller + equal) return v;
  }
  throw new Error("unreachable");
}

function independentMedian(values: readonly number[]): number {
  const n = values.length;
  if (n === 0) throw new Error("no values");
  if (n % 2 === 1) return rankSelect(values, (n - 1) / 2);
  return (rankSelect(values, n / 2 - 1) + rankSelect(values, n / 2)) / 2;
}

/** method|size -> independently recomputed median of one raw column. */
function independentCellMedians(
  rows: readonly RawRow[],
  column: "ratio" | "reduceMs" | "totalMs",
): Map<string, number> {
  const cells = new Map<string, number[]>();
  for (const row of rows) {
    if (column === "ratio" && Number.isNaN(row.ratio)) continue;
    const key = `${row.method}|${row.size}`;
    if (!cells.has(key)) cells.set(key, []);
    cells.get(key)!.push(row[column]);
  }
  const out = new Map<string, number>();
  for (const [key, values] of cells) out.set(key, independentMedian(values));
  return out;
}

/** Series name -> the (method, size-0?) cell key it plots. */
function cellKeyOf(name: string, x: number, flat: boolean): string {
  return flat ? `${name.replace(" (one pass)", "")}|0` : `${name}|${x}`;
}

const records = parseResultsCsv(readFileSync(FIXTURE, "utf8"));
const rawRows = readRawRows(FIXTURE);
const COLUMN = { ratio: "ratio", "reduce-time": "reduceMs", "total-time": "totalMs" } as const;

describe("figureSeries", () => {
  for (const kind of FIGURE_KINDS) {
    it(`plots exactly the independently recomputed ${kind} medians`, () => {
      const expected = independentCellMedians(rawRows, COLUMN[kind]);
      const series = figureSeries(records, kind);
      expect(series.length).toBeGreaterThan(0);
      let checked = 0;
      for (const s of series) {
        for (const [x, y] of s.points) {
          const key = cellKeyOf(s.name, x, s.flat);
          expect(expected.has(key), `missing cell ${key}`).toBe(true);
          expect(y, `median mismatch at ${key}`).toBe(expected.get(key)!); // exact
          checked += 1;
        }
      }
      // 4 sized methods x 3 sizes + a 2-point flat line = 14 plotted points
      expect(checked).toBe(14);
      expect(new Set([...expected.keys()]).size).toBe(13); // every cell appears
    });
  }

  it("draws one-pass methods as flat lines spanning the sized x-range", () => {
    const series = figureSeries(records, "ratio");
    const flat = series.filter((s) => s.flat);
    expect(flat.length).toBe(1);
    expect(flat[0]!.name).toBe("sgd (one pass)");
    const sizedXs = series.filter((s) => !s.flat).flatMap((s) => s.points.map((p) => p[0]));
    const [lo, hi] = [Math.min(...sizedXs), Math.max(...sizedXs)];
    expect(flat[0]!.points.map((p) => p[0])).toEqual([lo, hi]);
    const ys = flat[0]!.points.map((p) => p[1]);
    expect(ys[0]).toBe(ys[1]); // flat
  });

  it("agrees with the harness's own summary file", () => {
    // Cross-implementation check: the summary medians were computed by the
    // harness (numpy) from the same results; ratios are written at full
    // precision, timings rounded to 3 decimals.
    const lines = readFileSync(SUMMARY, "utf8").trim().split("\n");
    expect(lines[0]).toBe("dataset,method,size,median_ratio,median_reduce_ms,median_total_ms,reps");
    const byKind = Object.fromEntries(
      FIGURE_KINDS.map((kind) => {
        const out = new Map<string, number>();
        for (const s of figureSeries(records, kind)) {
          for (const [x, y] of s.points) out.set(cellKeyOf(s.name, x, s.flat), y);
        }
        return [kind, out];
      }),
    );
    let rowsChecked = 0;
    for (const line of lines.slice(1)) {
      const f = line.split(",");
      const key = `${f[1]}|${f[2]}`;
      expect(byKind["ratio"]!.get(key)).toBe(Number(f[3])); // exact
      expect(byKind["reduce-time"]!.get(key)).toBeCloseTo(Number(f[4]), 3);
      expect(byKind["total-time"]!.get(key)).toBeCloseTo(Number(f[5]), 3);
      rowsChecked += 1;
    }
    expect(rowsChecked).toBe(13);
  });

  it("fails loudly when every repetition of the metric failed", () => {
    const allFailed = records.map((r) => ({ ...r, ratio: NaN }));
    expect(() => figureSeries(allFailed, "ratio")).toThrow(/no plottable cells/);
  });
});

describe("buildOption", () => {
  it("embeds exactly the figureSeries data with one legend entry per series", () => {
    for (const kind of FIGURE_KINDS) {
      const expected = figureSeries(records, kind);
      const option = buildOption(records, kind) as {
        legend: { data: string[] };
        series: Array<{ name: string; data: Array<[number, number]> }>;
        yAxis: { type: string };
      };
      expect(option.series.map((s) => s.name)).toEqual(expected.map((s) => s.name));
      expect(option.series.map((s) => s.data)).toEqual(expected.map((s) => s.points));
      expect(option.legend.data).toEqual(expected.map((s) => s.name));
      expect(option.yAxis.type).toBe(kind === "ratio" ? "log" : "value");
    }
  });
});

describe("renderFigure", () => {
  it("renders all three kinds to SVG without touching the input file", () => {
    const before = readFileSync(FIXTURE);
    for (const kind of FIGURE_KINDS) {
      const svg = renderFigure(records, kind, { title: `fixture ${kind}` });
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg).toContain("</svg>");
      expect(svg).toContain("<path"); // series actually drawn
      expect(svg).toContain(`fixture ${kind}`);
      expect(svg.length).toBeGreaterThan(2000);
    }
    const after = readFileSync(FIXTURE);
    expect(after.equals(before)).toBe(true);
  });

  it("honors custom dimensions", () => {
    const svg = renderFigure(records, "ratio", { width: 400, height: 300 });
    expect(svg).toContain('width="400"');
    expect(svg).toContain('height="300"');
  });
});
