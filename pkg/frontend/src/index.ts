export { parseResultsCsv, RESULT_COLUMNS, type ResultRecord } from "./csv.js";
export { median, cellMedians, type CellMedian, type MetricField } from "./medians.js";
export {
  buildOption,
  figureSeries,
  renderFigure,
  FIGURE_KINDS,
  KIND_FIELD,
  type FigureKind,
  type FigureOptions,
  type FigureSeries,
} from "./render.js";
