/**
 * Time-series figure from a run's stats.csv: cooperation fraction and
 * mean friendliness on a shared [0, 1] axis, mean payoff by current
 * action below, with a vertical marker at the payoff crossover (the first
 * step from which cooperators persistently out-earn defectors).
 */
import { pathToFileURL } from "node:url";
import { Axes, linspace, niceMax } from "../chart.js";
import { num, readTable } from "../csv.js";
import { BLUE, Canvas, GRAY, PURPLE, RED, TURQUOISE } from "../raster.js";
import { CommonOptions, runFigure } from "../cli.js";

export const STATS_COLUMNS = [
  "step",
  "mean_rho",
  "coop_fraction",
  "mean_payoff_coop",
  "mean_payoff_def",
  "n_coop",
  "n_def",
];

export const CROSSOVER_WINDOW = 50;

interface StatsRow {
  step: number;
  rho: number;
  coop: number;
  payC: number | null;
  payD: number | null;
}

export function readStats(path: string): StatsRow[] {
  const table = readTable(path, STATS_COLUMNS);
  return table.rows.map((row) => ({
    step: num(row, "step"),
    rho: num(row, "mean_rho"),
    coop: num(row, "coop_fraction"),
    payC: row["mean_payoff_coop"] === "" ? null : num(row, "mean_payoff_coop"),
    payD: row["mean_payoff_def"] === "" ? null : num(row, "mean_payoff_def"),
  }));
}

/** First step from which payC > payD holds for `window` consecutive rows. */
export function crossoverStep(rows: StatsRow[], window = CROSSOVER_WINDOW): number | null {
  let start: number | null = null;
  let streak = 0;
  for (const row of rows) {
    const ahead = row.payC !== null && row.payD !== null && row.payC > row.payD;
    if (ahead) {
      if (streak === 0) start = row.step;
      streak += 1;
      if (streak >= window) return start;
    } else {
      streak = 0;
      start = null;
    }
  }
  return null;
}

export function render(opts: CommonOptions): Canvas {
  const rows = readStats(opts.input);
  const s = opts.scale;
  const canvas = new Canvas(640 * s, 520 * s);
  const x0 = rows[0].step;
  const x1 = rows[rows.length - 1].step;
  const xspan = x1 > x0 ? x1 : x0 + 1;

  const top = new Axes(canvas, { x: 60 * s, y: 30 * s, w: 540 * s, h: 180 * s }, x0, xspan, 0, 1, s);
  top.frame();
  top.title("COOPERATION AND FRIENDLINESS");
  top.yTicks([0, 0.5, 1], 1);
  top.series(rows.map((r) => [r.step, r.coop] as const), TURQUOISE);
  top.series(rows.map((r) => [r.step, r.rho] as const), PURPLE);
  top.legend([
    ["COOP FRACTION", TURQUOISE],
    ["MEAN RHO", PURPLE],
  ]);

  const payoffs = rows.flatMap((r) => [r.payC, r.payD]).filter((v): v is number => v !== null);
  const ymax = niceMax(Math.max(1, ...payoffs));
  const ymin = Math.min(0, ...payoffs);
  const bottom = new Axes(
    canvas,
    { x: 60 * s, y: 280 * s, w: 540 * s, h: 180 * s },
    x0,
    xspan,
    ymin,
    ymax,
    s,
  );
  bottom.frame();
  bottom.title("MEAN PAYOFF BY ACTION");
  bottom.yTicks([ymin, 0, ymax], 1);
  bottom.xTicks(linspace(x0, xspan, 6), 0);
  bottom.xLabel("STEP");
  bottom.series(
    rows.filter((r) => r.payC !== null).map((r) => [r.step, r.payC as number] as const),
    BLUE,
  );
  bottom.series(
    rows.filter((r) => r.payD !== null).map((r) => [r.step, r.payD as number] as const),
    RED,
  );
  bottom.legend([
    ["COOPERATORS", BLUE],
    ["DEFECTORS", RED],
  ]);

  const crossover = crossoverStep(rows);
  if (crossover !== null) {
    top.vline(crossover, GRAY);
    bottom.vline(crossover, GRAY);
    canvas.text(bottom.px(crossover) + 4 * s, 285 * s, `CROSSOVER ${crossover}`, GRAY, s);
  }
  return canvas;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  runFigure(render);
}
