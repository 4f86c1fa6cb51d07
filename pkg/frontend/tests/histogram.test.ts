import { describe, expect, it } from "vitest";
import { binCounts } from "../src/histogram.js";

describe("binCounts", () => {
  it("bins values over a fixed range", () => {
    expect(binCounts([-1, 0, 0.999, 1], -1, 1, 4)).toEqual([1, 0, 1, 2]);
  });

  it("clamps out-of-range values to the edge bins", () => {
    expect(binCounts([-5, 5], 0, 1, 2)).toEqual([1, 1]);
  });

  it("returns all zeros for no values", () => {
    expect(binCounts([], 0, 1, 3)).toEqual([0, 0, 0]);
  });

  it("rejects a non-positive bin count", () => {
    expect(() => binCounts([0.5], 0, 1, 0)).toThrow(/bins must be >= 1/);
  });

  it("rejects an empty range", () => {
    expect(() => binCounts([0.5], 1, 1, 4)).toThrow(/empty bin range/);
  });
});
