/**
 * Hysteresis-loop figure from hysteresis.csv: cooperation fraction of
 * the ascending and descending friendliness sweeps; the gap between the
 * two legs is the bistable band.
 */
import { pathToFileURL } from "node:url";
import { Axes, linspace } from "../chart.js";
import { num, readTable, SchemaError } from "../csv.js";
import { BLUE, Canvas, RED } from "../raster.js";
import { CommonOptions, runFigure } from "../cli.js";

export const HYSTERESIS_COLUMNS = ["rho", "direction", "coop_fraction", "status"];

export function render(opts: CommonOptions): Canvas {
  const table = readTable(opts.input, HYSTERESIS_COLUMNS);
  const legs: Record<string, Array<readonly [number, number]>> = {
    ascending: [],
    descending: [],
  };
  for (const row of table.rows) {
    const leg = legs[row["direction"]];
    if (leg === undefined) {
      throw new SchemaError(
        `column "direction" has unknown value "${row["direction"]}"`,
      );
    }
    leg.push([num(row, "rho"), num(row, "coop_fraction")]);
  }
  for (const leg of Object.values(legs)) {
    leg.sort((a, b) => a[0] - b[0]);
  }

  const rhoMax = Math.max(...legs.ascending.map(([r]) => r), ...legs.descending.map(([r]) => r), 0.5);
  const s = opts.scale;
  const canvas = new Canvas(560 * s, 420 * s);
  const axes = new Axes(canvas, { x: 70 * s, y: 40 * s, w: 440 * s, h: 300 * s }, 0, rhoMax, 0, 1, s);
  axes.frame();
  axes.title("BISTABILITY OF COOPERATION");
  axes.xTicks(linspace(0, rhoMax, 6), 2);
  axes.yTicks([0, 0.5, 1], 1);
  axes.xLabel("FRIENDLINESS RHO");
  axes.series(legs.ascending, RED);
  axes.markers(legs.ascending, RED);
  axes.series(legs.descending, BLUE);
  axes.markers(legs.descending, BLUE);
  axes.legend([
    ["ASCENDING", RED],
    ["DESCENDING", BLUE],
  ]);
  return canvas;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  runFigure(render);
}
