/** Pure formatting for the queue progress line in the page header. */

import { QueueStats } from "./api.js";

export function formatPct(pct: number | null): string {
  if (pct === null) {
    return "no verdicts yet";
  }
  const rounded = Math.round(pct * 100) / 100;
  return `${rounded}% correct`;
}

export function formatStats(stats: QueueStats): string {
  const judged = `${stats.judged}/${stats.total} judged`;
  const detail =
    `${stats.accepted} accepted, ${stats.corrected} corrected, ` +
    `${stats.rejected} rejected`;
  return `${judged} · ${formatPct(stats.pct_correct)} (${detail})`;
}
