/**
 * Offspring-placement sweep figure from sweep.csv: final cooperation
 * fraction of every replicate against the placement locality nu, with
 * the per-nu mean drawn as a line.
 */
import { pathToFileURL } from "node:url";
import { Axes, linspace } from "../chart.js";
import { num, readTable } from "../csv.js";
import { Canvas, GRAY, GREEN } from "../raster.js";
import { CommonOptions, runFigure } from "../cli.js";

export const SWEEP_COLUMNS = ["nu", "replicate", "final_coop", "final_rho"];

export function render(opts: CommonOptions): Canvas {
  const table = readTable(opts.input, SWEEP_COLUMNS);
  const points = table.rows.map(
    (row) => [num(row, "nu"), num(row, "final_coop")] as const,
  );
  const byNu = new Map<number, number[]>();
  for (const [nu, coop] of points) {
    const list = byNu.get(nu) ?? [];
    list.push(coop);
    byNu.set(nu, list);
  }
  const means = [...byNu.entries()]
    .map(([nu, list]) => [nu, list.reduce((a, b) => a + b, 0) / list.length] as const)
    .sort((a, b) => a[0] - b[0]);

  const s = opts.scale;
  const canvas = new Canvas(560 * s, 420 * s);
  const axes = new Axes(canvas, { x: 70 * s, y: 40 * s, w: 440 * s, h: 300 * s }, 0, 1, 0, 1, s);
  axes.frame();
  axes.title("FINAL COOPERATION VS PLACEMENT LOCALITY");
  axes.xTicks(linspace(0, 1, 6), 1);
  axes.yTicks(linspace(0, 1, 6), 1);
  axes.xLabel("NU");
  axes.markers(points, GRAY);
  if (means.length > 1) {
    axes.series(means, GREEN);
  }
  axes.markers(means, GREEN);
  axes.legend([
    ["REPLICATE", GRAY],
    ["MEAN", GREEN],
  ]);
  return canvas;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  runFigure(render);
}
