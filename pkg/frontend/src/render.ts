/** Figure construction: median-aggregated series rendered to SVG.
 *
 * Three kinds, one per results-CSV metric: `ratio` (full-data loss at the
 * summary-trained model over the full-data optimum), `reduce-time`
 * (summary construction, ms), `total-time` (construction + solve, ms).
 * Methods that keep no summary (size 0 rows) are drawn as flat dashed
 * reference lines spanning the sized methods' x-range.
 */

import { LineChart, type LineSeriesOption } from "echarts/charts";
import {
  GridComponent,
  LegendComponent,
  TitleComponent,
  type GridComponentOption,
  type LegendComponentOption,
  type TitleComponentOption,
} from "echarts/components";
import { init, use, type ComposeOption } from "echarts/core";
import { SVGRenderer } from "echarts/renderers";

import type { ResultRecord } from "./csv.js";
import { cellMedians, type CellMedian, type MetricField } from "./medians.js";

use([LineChart, GridComponent, LegendComponent, TitleComponent, SVGRenderer]);

export type FigureOption = ComposeOption<
  LineSeriesOption | GridComponentOption | LegendComponentOption | TitleComponentOption
>;

export const FIGURE_KINDS = ["ratio", "reduce-time", "total-time"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export const KIND_FIELD: Record<FigureKind, MetricField> = {
  ratio: "ratio",
  "reduce-time": "reduceMs",
  "total-time": "totalMs",
};

const KIND_AXIS: Record<FigureKind, { yName: string; yType: "log" | "value" }> = {
  ratio: { yName: "median approximation ratio", yType: "log" },
  "reduce-time": { yName: "median reduce time (ms)", yType: "value" },
  "total-time": { yName: "median total time (ms)", yType: "value" },
};

export interface FigureOptions {
  width?: number;
  height?: number;
  title?: string;
}

export interface FigureSeries {
  name: string;
  flat: boolean; // true for a size-0 (one-pass) reference line
  points: Array<[number, number]>;
}

/** The data actually plotted: one series per method (flat for size-0). */
export function figureSeries(records: readonly ResultRecord[], kind: FigureKind): FigureSeries[] {
  const medians = cellMedians(records, KIND_FIELD[kind]);
  if (medians.length === 0) {
    throw new Error(`no plottable cells for kind ${kind} (all repetitions failed?)`);
  }
  const sized = medians.filter((m) => m.size > 0);
  const flat = medians.filter((m) => m.size === 0);
  const sizes = sized.map((m) => m.size);
  // Flat reference lines need an x-extent; without sized series fall back to [0, 1].
  const xMin = sizes.length > 0 ? Math.min(...sizes) : 0;
  const xMax = sizes.length > 0 ? Math.max(...sizes) : 1;

  const byMethod = new Map<string, CellMedian[]>();
  for (const m of sized) {
    const rows = byMethod.get(m.method);
    if (rows === undefined) byMethod.set(m.method, [m]);
    else rows.push(m);
  }

  const series: FigureSeries[] = [];
  for (const [method, rows] of byMethod) {
    rows.sort((a, b) => a.size - b.size);
    series.push({ name: method, flat: false, points: rows.map((m) => [m.size, m.value]) });
  }
  for (const m of flat) {
    series.push({
      name: `${m.method} (one pass)`,
      flat: true,
      points: [
        [xMin, m.value],
        [xMax, m.value],
      ],
    });
  }
  series.sort((a, b) => (a.name < b.name ? -1 : a.name > b.name ? 1 : 0));
  return series;
}

/** Full echarts option for one figure kind. */
export function buildOption(
  records: readonly ResultRecord[],
  kind: FigureKind,
  opts: FigureOptions = {},
): FigureOption {
  const series = figureSeries(records, kind);
  const axis = KIND_AXIS[kind];
  const datasets = [...new Set(records.map((r) => r.dataset))];
  const title = opts.title ?? `${kind} — ${datasets.join(", ")}`;
  return {
    animation: false,
    title: { text: title, left: "center" },
    legend: { bottom: 0, data: series.map((s) => s.name) },
    grid: { left: 70, right: 30, top: 50, bottom: 60 },
    xAxis: {
      type: "value",
      name: "summary size",
      nameLocation: "middle",
      nameGap: 28,
    },
    yAxis: {
      type: axis.yType,
      name: axis.yName,
      nameLocation: "middle",
      nameGap: 52,
    },
    series: series.map((s) => ({
      type: "line" as const,
      name: s.name,
      data: s.points,
      symbolSize: s.flat ? 0 : 6,
      lineStyle: s.flat ? { type: "dashed" as const, width: 1.5 } : { width: 2 },
    })),
  };
}

/** Render one figure kind to an SVG string (server-side, no DOM). */
export function renderFigure(
  records: readonly ResultRecord[],
  kind: FigureKind,
  opts: FigureOptions = {},
): string {
  const chart = init(null, null, {
    renderer: "svg",
    ssr: true,
    width: opts.width ?? 800,
    height: opts.height ?? 520,
  });
  try {
    chart.setOption(buildOption(records, kind, opts));
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}
