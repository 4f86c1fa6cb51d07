import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { num, readCsv } from "../src/csv.js";
import { buildPotentialsFigure, main } from "../src/plot_potentials.js";

const POTENTIALS = fileURLToPath(new URL("./golden/potentials.csv", import.meta.url));
const dir = mkdtempSync(join(tmpdir(), "potentials-"));

describe("buildPotentialsFigure", () => {
  const rows = readCsv(POTENTIALS);
  const times = new Set(rows.map((r) => num(r, "t")));
  const fig = buildPotentialsFigure([rows]);

  it("draws one value curve and one weight curve per snapshot time", () => {
    const polylines = fig.shapes.filter((s) => s.kind === "polyline");
    expect(times.size).toBeGreaterThan(1);
    expect(polylines.length).toBe(2 * times.size);
  });

  it("gives each time its own color", () => {
    const strokes = new Set(
      fig.shapes.flatMap((s) => (s.kind === "polyline" ? [s.stroke] : [])),
    );
    expect(strokes.size).toBe(times.size);
  });

  it("titles the panels by potential kind and legends the times", () => {
    const texts = fig.shapes.flatMap((s) => (s.kind === "text" ? [s.text] : []));
    expect(texts).toContain("brown potential");
    expect(texts).toContain("brown weight");
    expect(texts.filter((t) => t.startsWith("t = ")).length).toBe(times.size);
  });

  it("rejects an empty input list", () => {
    expect(() => buildPotentialsFigure([])).toThrow(/no input files/);
  });
});

describe("cli", () => {
  it("writes an svg and returns 0", () => {
    const out = join(dir, "fig.svg");
    expect(main(["--in", POTENTIALS, "--out", out])).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("<polyline");
  });

  it("writes a png and returns 0", () => {
    const out = join(dir, "fig.png");
    expect(main(["--in", POTENTIALS, "--out", out, "--format", "png"])).toBe(0);
    expect([...readFileSync(out).subarray(0, 8)]).toEqual([137, 80, 78, 71, 13, 10, 26, 10]);
  });

  it("returns 2 without arguments", () => {
    expect(main([])).toBe(2);
  });

  it("returns 2 for a csv without the potential columns", () => {
    expect(main(["--in", fileURLToPath(new URL("./golden/summary.csv", import.meta.url)),
                 "--out", join(dir, "f.svg")])).toBe(2);
  });
});
