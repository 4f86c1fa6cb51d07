#!/usr/bin/env node
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import { num, readCsv, requireColumns, type Row } from "./csv.js";
import { linearScale, writeFigure, type Figure, type Shape } from "./figure.js";
import { PALETTE } from "./plot_potentials.js";

const PANEL_W = 280;
const PANEL_H = 210;
const PAD_L = 52;
const PAD_T = 34;
const GAP_X = 36;
const PAD_B = 30;
const CAP = 3;

/** True-label test error versus training-set size: one panel per noise rate,
 * one series per algorithm, with min-to-max whiskers around each mean. */
export function buildSweepFigure(rows: Row[]): Figure {
  requireColumns(rows, [
    "algorithm", "eta", "n_train",
    "test_err_true_mean", "test_err_true_min", "test_err_true_max",
  ], "summary");
  const etas = [...new Set(rows.map((r) => num(r, "eta")))].sort((a, b) => a - b);
  const algorithms = [...new Set(rows.map((r) => r.algorithm!))].sort();
  const sizes = [...new Set(rows.map((r) => num(r, "n_train")))].sort((a, b) => a - b);
  const yHi = Math.max(...rows.map((r) => num(r, "test_err_true_max")), 0.05);
  const shapes: Shape[] = [];
  etas.forEach((eta, panelIndex) => {
    const x0 = PAD_L + panelIndex * (PANEL_W + GAP_X + PAD_L);
    const y0 = PAD_T;
    const sx = linearScale(Math.min(...sizes), Math.max(...sizes), x0, x0 + PANEL_W);
    const sy = linearScale(0, yHi, y0 + PANEL_H, y0);
    shapes.push({ kind: "text", x: x0 + PANEL_W / 2, y: y0 - 8, text: `noise rate ${eta}`, anchor: "middle" });
    shapes.push({ kind: "line", x1: x0, y1: y0 + PANEL_H, x2: x0 + PANEL_W, y2: y0 + PANEL_H, stroke: "#444444" });
    shapes.push({ kind: "line", x1: x0, y1: y0, x2: x0, y2: y0 + PANEL_H, stroke: "#444444" });
    for (const size of sizes) {
      shapes.push({ kind: "text", x: sx(size), y: y0 + PANEL_H + 14, text: String(size), anchor: "middle" });
    }
    shapes.push({ kind: "text", x: x0 - 6, y: y0 + 4, text: yHi.toFixed(2), anchor: "end" });
    shapes.push({ kind: "text", x: x0 - 6, y: y0 + PANEL_H, text: "0", anchor: "end" });
    algorithms.forEach((algorithm, seriesIndex) => {
      const stroke = PALETTE[seriesIndex % PALETTE.length]!;
      const series = rows
        .filter((r) => r.algorithm === algorithm && num(r, "eta") === eta)
        .map((r) => ({
          n: num(r, "n_train"),
          mean: num(r, "test_err_true_mean"),
          lo: num(r, "test_err_true_min"),
          hi: num(r, "test_err_true_max"),
        }))
        .filter((p) => Number.isFinite(p.mean))
        .sort((a, b) => a.n - b.n);
      if (series.length === 0) return;
      for (const p of series) {
        const px = sx(p.n);
        shapes.push({ kind: "line", x1: px, y1: sy(p.lo), x2: px, y2: sy(p.hi), stroke });
        shapes.push({ kind: "line", x1: px - CAP, y1: sy(p.lo), x2: px + CAP, y2: sy(p.lo), stroke });
        shapes.push({ kind: "line", x1: px - CAP, y1: sy(p.hi), x2: px + CAP, y2: sy(p.hi), stroke });
      }
      if (series.length > 1) {
        shapes.push({
          kind: "polyline",
          points: series.map((p) => [sx(p.n), sy(p.mean)] as [number, number]),
          stroke,
          width: 1.5,
        });
      }
    });
  });
  // shared legend in the top-left panel area
  algorithms.forEach((algorithm, i) => {
    const lx = PAD_L + 10;
    const ly = PAD_T + 14 + i * 15;
    shapes.push({ kind: "line", x1: lx, y1: ly - 4, x2: lx + 18, y2: ly - 4, stroke: PALETTE[i % PALETTE.length]!, width: 2 });
    shapes.push({ kind: "text", x: lx + 24, y: ly, text: algorithm });
  });
  return {
    width: etas.length * (PANEL_W + GAP_X + PAD_L) + 20,
    height: PAD_T + PANEL_H + PAD_B,
    shapes,
  };
}

export function main(argv: string[]): number {
  try {
    const { values } = parseArgs({
      args: argv,
      options: {
        in: { type: "string", multiple: true },
        out: { type: "string" },
        format: { type: "string", default: "svg" },
      },
    });
    const paths = values.in ?? [];
    if (paths.length !== 1 || !values.out) {
      throw new Error("usage: plot-sweep --in summary.csv --out fig.svg [--format png|svg]");
    }
    const fig = buildSweepFigure(readCsv(paths[0]!));
    writeFigure(fig, values.out, values.format!);
    console.log(`wrote ${values.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
