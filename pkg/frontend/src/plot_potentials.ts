#!/usr/bin/env node
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import { num, readCsv, requireColumns, type Row } from "./csv.js";
import { linearScale, writeFigure, type Figure, type Shape } from "./figure.js";

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

const PANEL_W = 300;
const PANEL_H = 220;
const PAD_L = 48;
const PAD_T = 34;
const GAP_X = 40;
const PAD_B = 28;

/** Two panels per input file: potential value and example weight, each as a
 * curve over margin s with one polyline per snapshot time t. */
export function buildPotentialsFigure(rowsets: Row[][]): Figure {
  if (rowsets.length === 0) throw new Error("no input files");
  const shapes: Shape[] = [];
  rowsets.forEach((rows, fileIndex) => {
    requireColumns(rows, ["kind", "s", "t", "phi", "weight"], `input ${fileIndex + 1}`);
    const kind = rows[0]!.kind;
    const y0 = PAD_T + fileIndex * (PANEL_H + PAD_T + PAD_B);
    const times = [...new Set(rows.map((r) => num(r, "t")))].sort((a, b) => a - b);
    drawCurves(shapes, rows, times, "phi", PAD_L, y0, `${kind} potential`);
    drawCurves(shapes, rows, times, "weight", PAD_L + PANEL_W + GAP_X + PAD_L, y0, `${kind} weight`);
    times.forEach((t, i) => {
      const lx = PAD_L + 2 * PANEL_W + GAP_X + PAD_L + 16;
      const ly = y0 + 12 + i * 16;
      shapes.push({ kind: "line", x1: lx, y1: ly - 4, x2: lx + 18, y2: ly - 4, stroke: PALETTE[i % PALETTE.length]!, width: 2 });
      shapes.push({ kind: "text", x: lx + 24, y: ly, text: `t = ${t}` });
    });
  });
  return {
    width: PAD_L * 2 + 2 * PANEL_W + GAP_X + 110,
    height: rowsets.length * (PANEL_H + PAD_T + PAD_B),
    shapes,
  };
}

function drawCurves(shapes: Shape[], rows: Row[], times: number[], column: "phi" | "weight",
                    x0: number, y0: number, title: string): void {
  const sVals = rows.map((r) => num(r, "s"));
  const yVals = rows.map((r) => num(r, column)).filter((v) => Number.isFinite(v));
  const sLo = Math.min(...sVals);
  const sHi = Math.max(...sVals);
  const yLo = Math.min(...yVals, 0);
  const yHi = Math.max(...yVals, 1e-12);
  const sx = linearScale(sLo, sHi, x0, x0 + PANEL_W);
  const sy = linearScale(yLo, yHi, y0 + PANEL_H, y0);
  shapes.push({ kind: "text", x: x0 + PANEL_W / 2, y: y0 - 8, text: title, anchor: "middle" });
  shapes.push({ kind: "line", x1: x0, y1: y0 + PANEL_H, x2: x0 + PANEL_W, y2: y0 + PANEL_H, stroke: "#444444" });
  shapes.push({ kind: "line", x1: x0, y1: y0, x2: x0, y2: y0 + PANEL_H, stroke: "#444444" });
  for (const tick of [sLo, 0, sHi]) {
    shapes.push({ kind: "text", x: sx(tick), y: y0 + PANEL_H + 14, text: trim(tick), anchor: "middle" });
  }
  shapes.push({ kind: "text", x: x0 - 6, y: y0 + 4, text: trim(yHi), anchor: "end" });
  shapes.push({ kind: "text", x: x0 - 6, y: y0 + PANEL_H, text: trim(yLo), anchor: "end" });
  times.forEach((t, i) => {
    const curve = rows
      .filter((r) => num(r, "t") === t)
      .map((r) => ({ s: num(r, "s"), y: num(r, column) }))
      .filter((p) => Number.isFinite(p.y))
      .sort((a, b) => a.s - b.s);
    if (curve.length < 2) return;
    shapes.push({
      kind: "polyline",
      points: curve.map((p) => [sx(p.s), sy(p.y)] as [number, number]),
      stroke: PALETTE[i % PALETTE.length]!,
      width: 1.5,
    });
  });
}

function trim(v: number): string {
  return Number(v.toFixed(3)).toString();
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
    if (paths.length === 0 || !values.out) {
      throw new Error("usage: plot-potentials --in potentials.csv [--in more.csv] --out fig.svg [--format png|svg]");
    }
    const fig = buildPotentialsFigure(paths.map((p) => readCsv(p)));
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
