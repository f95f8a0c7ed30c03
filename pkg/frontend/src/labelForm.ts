// Builds label submissions from the current toggles and validates them
// before they go to the server. The server enforces the same rules; the
// client check only saves a round trip.

import type { ElementToggles } from "./state.js";
import type { LabelPayload, SortName, Verdict } from "./types.js";

export interface FormInput {
  verdict: Verdict;
  sort: SortName | "" | null;
  note: string;
}

export function validateLabel(input: FormInput): string | null {
  if (input.verdict === "seed" && !input.sort) {
    return "a seed needs a sort: pick the kind of concern this candidate is";
  }
  return null;
}

export function buildPayload(input: FormInput, toggles: ElementToggles): LabelPayload {
  return {
    verdict: input.verdict,
    sort: input.sort || null,
    valid_callers: [...toggles.validCallers].sort(),
    relevant_callees: [...toggles.relevantCallees].sort(),
    valid_pairs: [...toggles.validPairs]
      .sort()
      .map((key) => key.split("->") as [string, string]),
    note: input.note,
  };
}
