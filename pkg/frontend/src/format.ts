/**
 * Display rounding. The only arithmetic this client performs: every value
 * below arrives from the service and is merely formatted for the screen.
 */

/** Normalized weight (0..1) as a percentage with one decimal: 0.165 -> "16.5%". */
export function formatWeightPercent(weight: number): string {
  return `${(weight * 100).toFixed(1)}%`;
}

/** Priority score with three decimals: 0.285 -> "0.285". */
export function formatScore(score: number): string {
  return score.toFixed(3);
}

/** Probe ratio with two decimals plus pass/flag styling text. */
export function formatRatio(ratio: number): string {
  return ratio.toFixed(2);
}

/** Gauge label for the total weighted support: 0.36793 -> "36.8%". */
export function formatGaugePercent(value: number): string {
  return `${(value * 100).toFixed(1)}%`;
}

/**
 * Parse a card's percent input. Plain mode accepts whole numbers 1..100
 * (how participants use physical cards); advanced mode allows decimals in
 * (0, 100]. Returns null when the text is not acceptable in that mode.
 */
export function parsePercent(text: string, allowDecimals: boolean): number | null {
  const trimmed = text.trim();
  if (trimmed === "") return null;
  if (!allowDecimals && !/^\d+$/.test(trimmed)) return null;
  const value = Number(trimmed);
  if (!Number.isFinite(value)) return null;
  if (value <= 0 || value > 100) return null;
  if (!allowDecimals && !Number.isInteger(value)) return null;
  return value;
}
