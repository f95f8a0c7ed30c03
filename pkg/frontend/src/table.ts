// Row models for the technique views. Highlight flags come straight from the
// server (they mirror the fan-in/grouped intersection); this layer only
// decides whether to show them, it never recomputes membership.

import type { CandidateSummary } from "./types.js";

export interface Row {
  id: string;
  headline: string;
  magnitude: string;
  verdict: string;
  quality: string;
  highlighted: boolean;
  isSeed: boolean;
}

export function magnitudeOf(candidate: CandidateSummary): string {
  if (candidate.pair_count !== undefined) {
    const pct =
      candidate.redirector_percentage !== undefined
        ? ` (${Math.round(candidate.redirector_percentage * 100)}% of class)`
        : "";
    return `${candidate.pair_count} pairs${pct}`;
  }
  if (candidate.callee_count !== undefined) {
    return `${candidate.callee_count} callees x ${candidate.caller_count ?? 0} callers`;
  }
  if (candidate.caller_count !== undefined) {
    const sites =
      candidate.call_site_count !== undefined ? ` / ${candidate.call_site_count} sites` : "";
    return `${candidate.caller_count} callers${sites}`;
  }
  return "";
}

export function buildRows(
  candidates: CandidateSummary[],
  highlightSync: boolean,
): Row[] {
  return candidates.map((candidate) => ({
    id: candidate.id,
    headline: candidate.headline,
    magnitude: magnitudeOf(candidate),
    verdict: candidate.verdict,
    // display string is server-provided; absence renders as a dash
    quality: candidate.quality ? candidate.quality.display : "-",
    highlighted: highlightSync && candidate.highlighted,
    isSeed: candidate.verdict === "seed",
  }));
}

export const SORT_COLUMNS: Record<string, { key: string; label: string }[]> = {
  fanin: [
    { key: "callers", label: "Callers" },
    { key: "id", label: "Id" },
  ],
  grouped: [
    { key: "size", label: "Group size" },
    { key: "callers", label: "Callers" },
    { key: "id", label: "Id" },
  ],
  redirect: [
    { key: "pairs", label: "Pairs" },
    { key: "id", label: "Id" },
  ],
};

export function sortColumnsFor(technique: string): { key: string; label: string }[] {
  return SORT_COLUMNS[technique] ?? [{ key: "size", label: "Size" }, { key: "id", label: "Id" }];
}
