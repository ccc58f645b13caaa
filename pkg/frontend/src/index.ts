#!/usr/bin/env node
/** plotgen: render SVG figures from harness CSV outputs.
 *
 * Usage: plotgen --spec spec.json
 * The spec file holds one figure spec or an array of them:
 *   { "kind": "err1d" | "err2d-panel" | "contrast" | "heatmap",
 *     "input": "curves1d.csv", "output": "fig.svg" }
 * Paths are resolved relative to the spec file. Rendering is deterministic:
 * the same inputs produce byte-identical SVG.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";

import { FigureSpec, RENDERERS } from "./figures.js";

export function renderSpec(spec: FigureSpec, baseDir: string): string {
  const renderer = RENDERERS[spec.kind];
  if (!renderer) {
    throw new Error(`unknown figure kind ${JSON.stringify(spec.kind)}`);
  }
  const csvText = readFileSync(resolve(baseDir, spec.input), "utf8");
  const svg = renderer(csvText);
  const outPath = resolve(baseDir, spec.output);
  writeFileSync(outPath, svg);
  return outPath;
}

export function run(argv: string[]): number {
  const specIdx = argv.indexOf("--spec");
  if (specIdx < 0 || specIdx + 1 >= argv.length) {
    process.stderr.write("usage: plotgen --spec spec.json\n");
    return 2;
  }
  const specPath = resolve(argv[specIdx + 1]);
  let specs: FigureSpec[];
  try {
    const parsed = JSON.parse(readFileSync(specPath, "utf8"));
    specs = Array.isArray(parsed) ? parsed : [parsed];
  } catch (err) {
    process.stderr.write(`error reading spec: ${(err as Error).message}\n`);
    return 1;
  }
  const baseDir = dirname(specPath);
  for (const spec of specs) {
    try {
      const out = renderSpec(spec, baseDir);
      process.stdout.write(`wrote ${out}\n`);
    } catch (err) {
      process.stderr.write(`error rendering ${spec.output}: ${(err as Error).message}\n`);
      return 1;
    }
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
