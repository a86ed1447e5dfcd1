/**
 * Shared command-line handling for the figure scripts: --in, --out,
 * --dpi. Each script parses its flags, renders, and writes one PNG;
 * any input problem exits nonzero without writing an image.
 */
import { parseArgs } from "node:util";
import { writeFileSync } from "node:fs";
import { Canvas } from "./raster.js";
import { SchemaError } from "./csv.js";

export interface CommonOptions {
  input: string;
  output: string;
  /** pixel scale factor: 96 dpi = 1x */
  scale: number;
}

export function parseCommon(argv: string[]): CommonOptions {
  const { values } = parseArgs({
    args: argv,
    options: {
      in: { type: "string" },
      out: { type: "string" },
      dpi: { type: "string", default: "96" },
    },
  });
  if (!values.in) throw new SchemaError("--in is required");
  if (!values.out) throw new SchemaError("--out is required");
  const dpi = Number(values.dpi);
  if (!Number.isFinite(dpi) || dpi <= 0) {
    throw new SchemaError(`--dpi must be a positive number, got "${values.dpi}"`);
  }
  return { input: values.in, output: values.out, scale: Math.max(1, Math.round(dpi / 96)) };
}

/** Run a renderer as a script: errors go to stderr with exit code 1. */
export function runFigure(render: (opts: CommonOptions) => Canvas): void {
  try {
    const opts = parseCommon(process.argv.slice(2));
    const canvas = render(opts);
    writeFileSync(opts.output, canvas.toPng());
    console.log(opts.output);
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exitCode = 1;
  }
}
