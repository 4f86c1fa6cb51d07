/** Fixed-range equal-width binning; values outside [lo, hi] clamp to the
 * edge bins so normalized margins at exactly +/-1 are kept. */
export function binCounts(
  values: number[],
  lo: number,
  hi: number,
  bins: number,
): number[] {
  if (bins < 1) throw new Error(`bins must be >= 1, got ${bins}`);
  if (!(lo < hi)) throw new Error(`empty bin range [${lo}, ${hi}]`);
  const counts = new Array<number>(bins).fill(0);
  const width = (hi - lo) / bins;
  for (const v of values) {
    let index = Math.floor((v - lo) / width);
    if (index < 0) index = 0;
    if (index >= bins) index = bins - 1;
    counts[index] += 1;
  }
  return counts;
}
