/** Reader for the results CSV written by the experiment harness.
 *
 * Format: header `dataset,method,size,rep,ratio,reduce_ms,total_ms`, one
 * row per experiment cell. `ratio` may be `nan` (a failed cell); sizes and
 * reps are non-negative integers; timings are milliseconds. One-pass
 * methods that keep no summary report size 0.
 */

export interface ResultRecord {
  dataset: string;
  method: string;
  size: number;
  rep: number;
  ratio: number; // NaN marks a failed cell
  reduceMs: number;
  totalMs: number;
}

export const RESULT_COLUMNS = [
  "dataset",
  "method",
  "size",
  "rep",
  "ratio",
  "reduce_ms",
  "total_ms",
] as const;

function parseNumber(field: string, raw: string, line: number): number {
  const v = Number(raw);
  if (raw.trim() === "" || (Number.isNaN(v) && raw.trim().toLowerCase() !== "nan")) {
    throw new Error(`line ${line}: bad ${field} value ${JSON.stringify(raw)}`);
  }
  return v;
}

function parseCount(field: string, raw: string, line: number): number {
  const v = parseNumber(field, raw, line);
  if (!Number.isInteger(v) || v < 0) {
    throw new Error(`line ${line}: ${field} must be a non-negative integer, got ${raw}`);
  }
  return v;
}

/** Parse results CSV text; throws on a malformed header or row. */
export function parseResultsCsv(text: string): ResultRecord[] {
  const lines = text.split(/\r?\n/);
  if (lines.length === 0 || lines[0] === undefined || lines[0].trim() === "") {
    throw new Error("empty results CSV");
  }
  const header = lines[0].trim();
  const expected = RESULT_COLUMNS.join(",");
  if (header !== expected) {
    throw new Error(`bad header ${JSON.stringify(header)}; expected ${JSON.stringify(expected)}`);
  }
  const records: ResultRecord[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === undefined || line.trim() === "") continue;
    const parts = line.split(",");
    if (parts.length !== RESULT_COLUMNS.length) {
      throw new Error(`line ${i + 1}: expected ${RESULT_COLUMNS.length} fields, got ${parts.length}`);
    }
    const [dataset, method, size, rep, ratio, reduceMs, totalMs] = parts as [
      string, string, string, string, string, string, string,
    ];
    if (method.trim() === "") {
      throw new Error(`line ${i + 1}: empty method name`);
    }
    const ratioV = parseNumber("ratio", ratio, i + 1);
    const reduceV = parseNumber("reduce_ms", reduceMs, i + 1);
    const totalV = parseNumber("total_ms", totalMs, i + 1);
    if (!Number.isFinite(reduceV) || !Number.isFinite(totalV)) {
      throw new Error(`line ${i + 1}: timings must be finite`);
    }
    records.push({
      dataset,
      method,
      size: parseCount("size", size, i + 1),
      rep: parseCount("rep", rep, i + 1),
      ratio: ratioV,
      reduceMs: reduceV,
      totalMs: totalV,
    });
  }
  if (records.length === 0) {
    throw new Error("results CSV has a header but no rows");
  }
  return records;
}
