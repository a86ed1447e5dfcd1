/**
 * Shared plotting scaffolding: a framed axes area with linear scales,
 * ticks, series polylines, markers, and a legend, drawn on the software
 * rasterizer.
 */
import { BLACK, Canvas, GRAY, Rgb } from "./raster.js";

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export function fmt(value: number, decimals: number): string {
  return value.toFixed(decimals);
}

export function linspace(lo: number, hi: number, n: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < n; i++) {
    out.push(lo + ((hi - lo) * i) / (n - 1));
  }
  return out;
}

export class Axes {
  constructor(
    readonly canvas: Canvas,
    readonly rect: Rect,
    readonly xmin: number,
    readonly xmax: number,
    readonly ymin: number,
    readonly ymax: number,
    readonly scale: number = 1,
  ) {}

  px(x: number): number {
    return this.rect.x + ((x - this.xmin) / (this.xmax - this.xmin)) * this.rect.w;
  }

  py(y: number): number {
    return this.rect.y + this.rect.h - ((y - this.ymin) / (this.ymax - this.ymin)) * this.rect.h;
  }

  frame(): void {
    const { x, y, w, h } = this.rect;
    this.canvas.line(x, y, x + w, y, BLACK);
    this.canvas.line(x, y + h, x + w, y + h, BLACK);
    this.canvas.line(x, y, x, y + h, BLACK);
    this.canvas.line(x + w, y, x + w, y + h, BLACK);
  }

  xTicks(values: number[], decimals: number): void {
    const s = this.scale;
    for (const v of values) {
      const px = this.px(v);
      this.canvas.line(px, this.rect.y + this.rect.h, px, this.rect.y + this.rect.h + 4 * s, BLACK);
      const label = fmt(v, decimals);
      this.canvas.text(
        px - Canvas.textWidth(label, s) / 2,
        this.rect.y + this.rect.h + 6 * s,
        label,
        BLACK,
        s,
      );
    }
  }

  yTicks(values: number[], decimals: number): void {
    const s = this.scale;
    for (const v of values) {
      const py = this.py(v);
      this.canvas.line(this.rect.x - 4 * s, py, this.rect.x, py, BLACK);
      const label = fmt(v, decimals);
      this.canvas.text(
        this.rect.x - 6 * s - Canvas.textWidth(label, s),
        py - 3 * s,
        label,
        BLACK,
        s,
      );
    }
  }

  series(points: Array<readonly [number, number]>, color: Rgb): void {
    this.canvas.polyline(
      points.map(([x, y]) => [this.px(x), this.py(y)] as const),
      color,
      Math.max(1, this.scale),
    );
  }

  markers(points: Array<readonly [number, number]>, color: Rgb): void {
    const r = 2 * this.scale;
    for (const [x, y] of points) {
      this.canvas.fillRect(this.px(x) - r, this.py(y) - r, 2 * r + 1, 2 * r + 1, color);
    }
  }

  vline(x: number, color: Rgb = GRAY): void {
    const px = this.px(x);
    this.canvas.line(px, this.rect.y, px, this.rect.y + this.rect.h, color);
  }

  xLabel(label: string): void {
    const s = this.scale;
    this.canvas.text(
      this.rect.x + this.rect.w / 2 - Canvas.textWidth(label, s) / 2,
      this.rect.y + this.rect.h + 16 * s,
      label,
      BLACK,
      s,
    );
  }

  title(label: string): void {
    const s = this.scale;
    this.canvas.text(
      this.rect.x + this.rect.w / 2 - Canvas.textWidth(label, s) / 2,
      this.rect.y - 12 * s,
      label,
      BLACK,
      s,
    );
  }

  legend(entries: Array<[string, Rgb]>): void {
    const s = this.scale;
    let y = this.rect.y + 4 * s;
    const x = this.rect.x + this.rect.w - 4 * s;
    for (const [label, color] of entries) {
      const width = Canvas.textWidth(label, s);
      this.canvas.fillRect(x - width - 14 * s, y + 2 * s, 10 * s, 3 * s, color);
      this.canvas.text(x - width, y, label, BLACK, s);
      y += 10 * s;
    }
  }
}

/** Round a value range up to friendly tick bounds. */
export function niceMax(value: number): number {
  if (value <= 0) return 1;
  const mag = Math.pow(10, Math.floor(Math.log10(value)));
  for (const m of [1, 2, 2.5, 5, 10]) {
    if (value <= m * mag) return m * mag;
  }
  return 10 * mag;
}
