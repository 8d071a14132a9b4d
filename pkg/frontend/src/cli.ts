#!/usr/bin/env node
/** CLI: render one figure from a results CSV.
 *
 *   logsketch-plot --csv results.csv --kind ratio --out ratio.svg
 *
 * Kinds: ratio, reduce-time, total-time. The CSV is only ever read.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { resolve } from "node:path";

import { parseResultsCsv } from "./csv.js";
import { FIGURE_KINDS, renderFigure, type FigureKind } from "./render.js";

export interface CliArgs {
  csv: string;
  kind: FigureKind;
  out: string;
  width: number;
  height: number;
  title?: string;
}

export function parseArgs(argv: readonly string[]): CliArgs {
  const opts = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (key === undefined || !key.startsWith("--") || value === undefined) {
      throw new Error(`expected --key value pairs, got ${JSON.stringify(argv[i])}`);
    }
    opts.set(key.slice(2), value);
  }
  const need = (k: string): string => {
    const v = opts.get(k);
    if (v === undefined) throw new Error(`missing required --${k}`);
    opts.delete(k);
    return v;
  };
  const csv = need("csv");
  const kindRaw = need("kind");
  const out = need("out");
  if (!(FIGURE_KINDS as readonly string[]).includes(kindRaw)) {
    throw new Error(`unknown kind ${JSON.stringify(kindRaw)}; pick one of ${FIGURE_KINDS.join(", ")}`);
  }
  if (resolve(csv) === resolve(out)) {
    throw new Error("--out must differ from --csv (the results file is read-only input)");
  }
  const width = Number(opts.get("width") ?? "800");
  const height = Number(opts.get("height") ?? "520");
  const title = opts.get("title");
  opts.delete("width");
  opts.delete("height");
  opts.delete("title");
  if (opts.size > 0) {
    throw new Error(`unknown options: ${[...opts.keys()].map((k) => `--${k}`).join(", ")}`);
  }
  if (!Number.isFinite(width) || !Number.isFinite(height) || width < 100 || height < 100) {
    throw new Error("--width/--height must be numbers >= 100");
  }
  return { csv, kind: kindRaw as FigureKind, out, width, height, ...(title !== undefined ? { title } : {}) };
}

export function main(argv: readonly string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (exc) {
    process.stderr.write(`error: ${(exc as Error).message}\n`);
    return 2;
  }
  try {
    const records = parseResultsCsv(readFileSync(args.csv, "utf8"));
    const svg = renderFigure(records, args.kind, {
      width: args.width,
      height: args.height,
      ...(args.title !== undefined ? { title: args.title } : {}),
    });
    writeFileSync(args.out, svg);
    process.stdout.write(`wrote ${args.kind} figure (${records.length} records) to ${args.out}\n`);
    return 0;
  } catch (exc) {
    process.stderr.write(`error: ${(exc as Error).message}\n`);
    return 1;
  }
}

// Run only when invoked as a script, not when imported by tests.
const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === new URL(`file://${resolve(process.argv[1])}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
