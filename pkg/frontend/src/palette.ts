/** One categorical palette keyed by cluster id, shared by every view.
 * Scatter, parallel, and bar plots all call `colorFor`, so cluster k looks
 * the same wherever it appears in a session. */

export const PALETTE = [
  "#4269d0",
  "#efb118",
  "#ff725c",
  "#6cc5b0",
  "#3ca951",
  "#ff8ab7",
  "#a463f2",
  "#97bbf5",
  "#9c6b4e",
  "#9498a0",
] as const;

/** Gray for de-emphasized marks (non-highlighted clusters, filtered points). */
export const DIM = "#cccccc";

/** Accent for the load-tab sub-domain highlight (not a cluster color). */
export const SUBDOMAIN_ACCENT = "#d1342f";

/** Neutral fill for marks that carry no cluster identity. */
export const NEUTRAL = "#6b7280";

export function colorFor(cluster: number): string {
  const n = PALETTE.length;
  return PALETTE[((cluster % n) + n) % n];
}
