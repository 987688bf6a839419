#!/usr/bin/env node
/** pseudoq-plot <kind> <csv> -o <out.svg> [--width W] [--height H]
 *
 * Kinds: gap-plateau | mixing-scaling | convergence | bound-overlay.
 * Exit codes: 0 ok, 2 usage, 3 schema violation, 1 other error.
 */

import { render } from "./render.js";
import { FIGURE_KINDS, FigureKind, SchemaError } from "./schemas.js";

function usage(): never {
  console.error(
    `usage: pseudoq-plot <kind> <csv> -o <out.svg> [--width W] [--height H]\n` +
      `kinds: ${FIGURE_KINDS.join(" | ")}`
  );
  process.exit(2);
}

export function main(argv: string[]): void {
  const args = [...argv];
  if (args.length < 2) usage();
  const kind = args.shift() as string;
  const csvPath = args.shift() as string;
  let outPath = "";
  let width: number | undefined;
  let height: number | undefined;
  while (args.length > 0) {
    const flag = args.shift() as string;
    if (flag === "-o" || flag === "--out") outPath = args.shift() ?? "";
    else if (flag === "--width") width = Number(args.shift());
    else if (flag === "--height") height = Number(args.shift());
    else usage();
  }
  if (!outPath) usage();
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    console.error(`unknown figure kind '${kind}'; expected one of ${FIGURE_KINDS.join(", ")}`);
    process.exit(2);
  }
  try {
    render({ kind: kind as FigureKind, csvPath, outPath, width, height });
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(err.message);
      process.exit(3);
    }
    console.error(String(err));
    process.exit(1);
  }
}

main(process.argv.slice(2));
