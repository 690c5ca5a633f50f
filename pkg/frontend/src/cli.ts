#!/usr/bin/env node
/**
 * plot-sweep: render sweep CSVs as SVG (or PNG) panels.
 *
 *   plot-sweep --style fig1|fig2|fig3 --out figure.svg data/*.csv
 *
 * Inputs are opened read-only; PNG output requires @resvg/resvg-js.
 * Exit codes: 0 success, 1 usage/schema/IO error.
 */

import * as fs from "fs";
import { renderFigure } from "./render";
import { SchemaError, parseSweepCsv } from "./schema";
import { STYLES, StyleName, buildPanels } from "./styles";

interface Args {
  style: StyleName;
  out: string;
  inputs: string[];
}

function usage(): string {
  return "usage: plot-sweep --style fig1|fig2|fig3 --out <file.svg|file.png> <sweep.csv>...";
}

export function parseArgs(argv: string[]): Args {
  let style: string | undefined;
  let out: string | undefined;
  const inputs: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--style") style = argv[++i];
    else if (arg === "--out") out = argv[++i];
    else if (arg === "--help" || arg === "-h") throw new Error(usage());
    else if (arg.startsWith("--")) throw new Error(`unknown option ${arg}\n${usage()}`);
    else inputs.push(arg);
  }
  if (!style || !(STYLES as readonly string[]).includes(style)) {
    throw new Error(`--style must be one of ${STYLES.join(", ")}\n${usage()}`);
  }
  if (!out) throw new Error(`--out is required\n${usage()}`);
  if (inputs.length === 0) throw new Error(`no input CSV files given\n${usage()}`);
  return { style: style as StyleName, out, inputs };
}

function toPng(svg: string): Buffer {
  let resvg;
  try {
    // eslint-disable-next-line @typescript-eslint/no-var-requires
    resvg = require("@resvg/resvg-js");
  } catch {
    throw new Error(
      "PNG output needs the optional dependency @resvg/resvg-js "
      + "(npm install @resvg/resvg-js), or use an .svg output path");
  }
  return new resvg.Resvg(svg, { fitTo: { mode: "zoom", value: 2 } })
    .render()
    .asPng();
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  try {
    const tables = args.inputs.map((file) =>
      parseSweepCsv(fs.readFileSync(file, { encoding: "utf8", flag: "r" }), file));
    const panels = buildPanels(args.style, tables);
    const svg = renderFigure(panels);
    if (args.out.toLowerCase().endsWith(".png")) {
      fs.writeFileSync(args.out, toPng(svg));
    } else {
      fs.writeFileSync(args.out, svg + "\n");
    }
    console.log(`wrote ${panels.length} panel(s) to ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error((err as Error).message);
    }
    return 1;
  }
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
