/**
 * Traffic comparison figure from traffic.csv: median time-averaged total
 * queue per strategy against utilization.
 */
import { pathToFileURL } from "node:url";
import { Axes, niceMax } from "../chart.js";
import { num, readTable } from "../csv.js";
import { BLACK, BLUE, Canvas, GREEN, PURPLE, RED, Rgb } from "../raster.js";
import { CommonOptions, runFigure } from "../cli.js";

export const TRAFFIC_COLUMNS = [
  "strategy",
  "utilization",
  "seed",
  "avg_total_queue",
  "avg_wait",
  "blocked_count",
];

const STRATEGY_COLORS: Array<[string, Rgb]> = [
  ["fixed_cycle", BLACK],
  ["longest_queue_first", PURPLE],
  ["local_wait_min", RED],
  ["self_regulating", GREEN],
];

function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}

export function render(opts: CommonOptions): Canvas {
  const table = readTable(opts.input, TRAFFIC_COLUMNS);
  const cells = new Map<string, number[]>();
  for (const row of table.rows) {
    const key = `${row["strategy"]}@${num(row, "utilization")}`;
    const list = cells.get(key) ?? [];
    list.push(num(row, "avg_total_queue"));
    cells.set(key, list);
  }
  const strategies = [...new Set(table.rows.map((r) => r["strategy"]))];
  const utils = [...new Set(table.rows.map((r) => num(r, "utilization")))].sort(
    (a, b) => a - b,
  );

  const allMedians = [...cells.values()].map(median);
  const ymax = niceMax(Math.max(...allMedians));
  const s = opts.scale;
  const canvas = new Canvas(560 * s, 420 * s);
  const axes = new Axes(
    canvas,
    { x: 70 * s, y: 40 * s, w: 440 * s, h: 300 * s },
    0,
    Math.max(1, ...utils),
    0,
    ymax,
    s,
  );
  axes.frame();
  axes.title("MEDIAN QUEUE VS UTILIZATION");
  axes.xTicks(utils, 2);
  axes.yTicks([0, ymax / 2, ymax], 0);
  axes.xLabel("UTILIZATION");

  const legend: Array<[string, Rgb]> = [];
  for (const strategy of strategies) {
    const known = STRATEGY_COLORS.find(([name]) => name === strategy);
    const color = known ? known[1] : BLUE;
    const points = utils
      .filter((u) => cells.has(`${strategy}@${u}`))
      .map((u) => [u, median(cells.get(`${strategy}@${u}`)!)] as const);
    if (points.length > 1) {
      axes.series(points, color);
    }
    axes.markers(points, color);
    legend.push([strategy.replaceAll("_", " ").toUpperCase(), color]);
  }
  axes.legend(legend);
  return canvas;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  runFigure(render);
}
