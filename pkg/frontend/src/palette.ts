/** Shared color and escaping helpers.
 *
 * The named color roles are fixed by the design (green for real sources,
 * red for suspicious ones; blue/purple/orange for person/place/organization
 * entities; orange mean and blue median ticks). The exact hex values are our
 * choice and live here so every view agrees.
 */

import type { EntityType, PartitionLabel } from "./types.js";

export const LABEL_COLORS: Record<PartitionLabel, string> = {
  real: "#2f855a",
  suspicious: "#c53030",
};

export const ENTITY_COLORS: Record<EntityType, string> = {
  person: "#2b6cb0",
  place: "#6b46c1",
  organization: "#dd6b20",
};

export const MEAN_TICK_COLOR = "#ed8936";
export const MEDIAN_TICK_COLOR = "#3182ce";

// Alternating community backdrop shades on the network circle.
export const ARC_SHADES = ["#e2e8f0", "#a0aec0"];

export const EDGE_IN_COLOR = "#dd6b20";
export const EDGE_OUT_COLOR = "#319795";

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

export function esc(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => ESCAPES[ch] ?? ch);
}

/** Term size in px for cloud rendering: square root of the count scaled
 * into a fixed band so one huge count cannot drown the rest. */
export function cloudSize(count: number, maxCount: number): number {
  if (maxCount <= 0) return 12;
  const t = Math.sqrt(Math.max(count, 0)) / Math.sqrt(maxCount);
  return Math.round((12 + 26 * Math.min(t, 1)) * 10) / 10;
}
