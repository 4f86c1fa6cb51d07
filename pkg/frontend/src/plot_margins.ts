#!/usr/bin/env node
import { basename } from "node:path";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import { num, readCsv, requireColumns, type Row } from "./csv.js";
import { binCounts } from "./histogram.js";
import { linearScale, writeFigure, type Figure, type Shape } from "./figure.js";

export const CLEAN_COLOR = "#1f77b4";
export const NOISY_COLOR = "#d62728";

const BINS = 40;
const PANEL_W = 240;
const PANEL_H = 150;
const PAD_L = 20;
const PAD_T = 34;
const GAP_X = 18;
const GAP_Y = 34;

export interface MarginsInput {
  label: string;
  rows: Row[];
}

export function labelFromPath(path: string): string {
  let stem = basename(path).replace(/\.csv$/, "");
  if (stem.startsWith("margins_")) stem = stem.slice("margins_".length);
  return stem;
}

/** Histogram grid: one row per input file (algorithm run), one column per
 * snapshot iteration; clean examples blue, noisy examples red. */
export function buildMarginsFigure(inputs: MarginsInput[], bins = BINS): Figure {
  if (inputs.length === 0) throw new Error("no input files");
  const iterations = new Set<number>();
  for (const input of inputs) {
    requireColumns(
      input.rows,
      ["iteration", "example_id", "normalized_margin", "is_noisy"],
      input.label,
    );
    for (const row of input.rows) iterations.add(num(row, "iteration"));
  }
  const columns = [...iterations].sort((a, b) => a - b);
  const shapes: Shape[] = [];
  inputs.forEach((input, rowIndex) => {
    columns.forEach((iteration, colIndex) => {
      const panelRows = input.rows.filter((r) => num(r, "iteration") === iteration);
      const x0 = PAD_L + colIndex * (PANEL_W + GAP_X);
      const y0 = PAD_T + rowIndex * (PANEL_H + GAP_Y);
      shapes.push({
        kind: "text",
        x: x0 + PANEL_W / 2,
        y: y0 - 6,
        text: `${input.label} — iteration ${iteration}`,
        anchor: "middle",
      });
      drawPanel(shapes, panelRows, x0, y0, bins);
    });
  });
  return {
    width: PAD_L + columns.length * (PANEL_W + GAP_X),
    height: PAD_T + inputs.length * (PANEL_H + GAP_Y),
    shapes,
  };
}

function drawPanel(shapes: Shape[], rows: Row[], x0: number, y0: number, bins: number): void {
  const clean = rows.filter((r) => r.is_noisy === "0").map((r) => num(r, "normalized_margin"));
  const noisy = rows.filter((r) => r.is_noisy === "1").map((r) => num(r, "normalized_margin"));
  const cleanCounts = binCounts(clean, -1, 1, bins);
  const noisyCounts = binCounts(noisy, -1, 1, bins);
  const yMax = Math.max(...cleanCounts, ...noisyCounts, 1);
  const sx = linearScale(-1, 1, x0, x0 + PANEL_W);
  const sy = linearScale(0, yMax, y0 + PANEL_H, y0);
  const barW = PANEL_W / bins;
  const bars = (counts: number[], fill: string) => {
    counts.forEach((count, i) => {
      if (count === 0) return;
      const top = sy(count);
      shapes.push({
        kind: "rect",
        x: sx(-1 + (2 * i) / bins),
        y: top,
        w: barW,
        h: y0 + PANEL_H - top,
        fill,
        opacity: 0.75,
      });
    });
  };
  bars(cleanCounts, CLEAN_COLOR);
  bars(noisyCounts, NOISY_COLOR);
  // baseline and x ticks at the margin landmarks
  shapes.push({
    kind: "line",
    x1: x0, y1: y0 + PANEL_H, x2: x0 + PANEL_W, y2: y0 + PANEL_H,
    stroke: "#444444",
  });
  for (const tick of [-1, 0, 1]) {
    shapes.push({
      kind: "line",
      x1: sx(tick), y1: y0 + PANEL_H, x2: sx(tick), y2: y0 + PANEL_H + 4,
      stroke: "#444444",
    });
    shapes.push({
      kind: "text",
      x: sx(tick), y: y0 + PANEL_H + 16, text: String(tick), anchor: "middle",
    });
  }
}

export function main(argv: string[]): number {
  try {
    const { values } = parseArgs({
      args: argv,
      options: {
        in: { type: "string", multiple: true },
        out: { type: "string" },
        format: { type: "string", default: "svg" },
        bins: { type: "string", default: String(BINS) },
      },
    });
    const paths = values.in ?? [];
    if (paths.length === 0 || !values.out) {
      throw new Error("usage: plot-margins --in margins.csv [--in more.csv] --out fig.svg [--format png|svg]");
    }
    const inputs = paths.map((p) => ({ label: labelFromPath(p), rows: readCsv(p) }));
    const fig = buildMarginsFigure(inputs, Number(values.bins));
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
