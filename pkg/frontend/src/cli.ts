#!/usr/bin/env node
/**
 * cuntzmc-plot --in bars.csv --out chart.svg [--title TEXT] [--no-theory]
 *
 * Reads a plotdata CSV and writes one SVG bar chart.  Exits nonzero on
 * malformed input, naming the missing column.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { CsvFormatError, parseCsv, renderSvg } from "./render.js";

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        title: { type: "string" },
        theory: { type: "boolean", default: true },
        "no-theory": { type: "boolean", default: false },
      },
    });
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  const opts = args.values;
  if (!opts.in || !opts.out) {
    console.error("usage: cuntzmc-plot --in bars.csv --out chart.svg [--title TEXT] [--no-theory]");
    return 2;
  }
  let text: string;
  try {
    text = readFileSync(opts.in, "utf8");
  } catch (err) {
    console.error(`cannot read ${opts.in}: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
  try {
    const rows = parseCsv(text);
    const svg = renderSvg(rows, {
      title: opts.title,
      showTheory: opts.theory && !opts["no-theory"],
    });
    writeFileSync(opts.out, svg);
  } catch (err) {
    if (err instanceof CsvFormatError) {
      console.error(`bad input: ${err.message}`);
      return 2;
    }
    throw err;
  }
  console.log(`wrote ${opts.out}`);
  return 0;
}

process.exit(main(process.argv.slice(2)));
