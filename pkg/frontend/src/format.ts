/** Display formatting.  The UI never computes probabilities — these helpers
 * only round server-supplied values for rendering. */

/** Probabilities below this are shown as the tiny-mark instead of "0.0". */
export const TINY_PROBABILITY = 5e-7;
export const TINY_MARK = "∗"; // ∗

/** Probability -> percent string with one decimal; positive-but-tiny values
 * render as the tiny-mark so they are not mistaken for exact zeros. */
export function formatPercent(p: number): string {
  if (p > 0 && p < TINY_PROBABILITY) {
    return TINY_MARK;
  }
  return (100 * p).toFixed(1);
}

/** Signed percent badge for a delta; empty when the delta is zero or rounds
 * to 0.0 at one decimal (no badge rather than a misleading "+0.0"). */
export function formatDelta(delta: number): string {
  const magnitude = (100 * Math.abs(delta)).toFixed(1);
  if (delta === 0 || magnitude === "0.0") {
    return "";
  }
  return (delta > 0 ? "+" : "−") + magnitude;
}
