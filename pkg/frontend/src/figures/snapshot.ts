/**
 * Lattice snapshot figure from a grid-code CSV. Cell codes follow the
 * four-color convention: family 1 defecting/cooperating = orange /
 * turquoise, family 2 defecting/cooperating = red / blue, empty = white.
 */
import { pathToFileURL } from "node:url";
import { readGrid, SchemaError } from "../csv.js";
import { BLACK, BLUE, Canvas, ORANGE, RED, Rgb, TURQUOISE, WHITE } from "../raster.js";
import { CommonOptions, runFigure } from "../cli.js";

export const CODE_COLORS: Record<number, Rgb> = {
  [-1]: WHITE,
  0: ORANGE, // family 1, defecting
  1: TURQUOISE, // family 1, cooperating
  2: RED, // family 2, defecting
  3: BLUE, // family 2, cooperating
};

const CELL = 8;
const MARGIN = 10;

export function render(opts: CommonOptions): Canvas {
  const grid = readGrid(opts.input);
  const height = grid.length;
  const width = grid[0].length;
  const s = opts.scale;
  const cell = CELL * s;
  const margin = MARGIN * s;
  const canvas = new Canvas(width * cell + 2 * margin, height * cell + 2 * margin);

  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const code = grid[y][x];
      const color = CODE_COLORS[code];
      if (color === undefined) {
        throw new SchemaError(
          `cell (${x}, ${y}) has unknown code ${code}; expected -1..3`,
        );
      }
      canvas.fillRect(margin + x * cell, margin + y * cell, cell, cell, color);
    }
  }
  // frame around the lattice
  canvas.line(margin - 1, margin - 1, margin + width * cell, margin - 1, BLACK);
  canvas.line(margin - 1, margin + height * cell, margin + width * cell, margin + height * cell, BLACK);
  canvas.line(margin - 1, margin - 1, margin - 1, margin + height * cell, BLACK);
  canvas.line(margin + width * cell, margin - 1, margin + width * cell, margin + height * cell, BLACK);
  return canvas;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  runFigure(render);
}
