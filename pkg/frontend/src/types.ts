// Payload shapes of the triage service. Quality and metric percentages are
// preformatted server-side; the UI never computes them.

export type Verdict = "seed" | "non_seed" | "undecided";

export type SortName =
  | "consistent_behavior"
  | "contract_enforcement"
  | "redirection_layer"
  | "role_superimposition";

export const SORT_LABELS: Record<SortName, string> = {
  consistent_behavior: "Consistent behavior",
  contract_enforcement: "Contract enforcement",
  redirection_layer: "Redirection layer",
  role_superimposition: "Role superimposition",
};

export interface QualityInfo {
  numerator: number;
  denominator: number;
  display: string;
}

export interface TechniqueInfo {
  technique: string;
  candidate_count: number;
}

export interface CandidateSummary {
  id: string;
  technique: string;
  verdict: Verdict;
  quality: QualityInfo | null;
  highlighted: boolean;
  headline: string;
  caller_count?: number;
  call_site_count?: number;
  callee_count?: number;
  pair_count?: number;
  redirector_percentage?: number;
  sort?: SortName | null;
  note?: string;
}

export interface CandidatePage {
  technique: string;
  total: number;
  page: number;
  page_size: number;
  candidates: CandidateSummary[];
}

export interface PairDoc {
  redirector: string;
  target: string;
  name_match?: boolean;
}

export interface CandidateDoc {
  id: string;
  callee?: string;
  callers?: string[];
  call_site_count?: number;
  caller_count?: number;
  callees?: string[];
  extended_callees?: string[];
  extended_callers?: string[];
  callee_count?: number;
  pairs?: PairDoc[];
  pair_count?: number;
  redirector_class?: string;
  target_class?: string;
  class_method_count?: number;
  declared_method_count?: number;
  redirector_percentage?: number;
  origin?: string;
  callee_set?: string[];
  provenance?: string[];
}

export interface ValiditySets {
  valid_callers: string[];
  relevant_callees: string[];
  valid_pairs: string[][];
}

export interface CandidateDetail {
  technique: string;
  candidate: CandidateDoc;
  verdict: Verdict;
  sort: SortName | null;
  note: string;
  validity: ValiditySets;
  quality: QualityInfo | null;
  acceptance_bar: number;
  highlighted: boolean;
}

export interface LabelPayload {
  verdict: Verdict;
  sort?: SortName | null;
  valid_callers: string[];
  relevant_callees: string[];
  valid_pairs: string[][];
  note: string;
}

export interface LabelResponse {
  label: {
    candidate_id: string;
    verdict: Verdict;
    sort: SortName | null;
    note: string;
    timestamp: string;
  };
  quality: QualityInfo | null;
}

export interface PrecisionInfo {
  seeds: number;
  candidates: number;
  display: string;
  summary: string;
}

export interface MetricsDoc {
  technique: string;
  precision: PrecisionInfo | null;
  absolute_recall: number;
  groups?: UnionGroupDoc[];
  merge_trace?: string[][][];
}

export interface UnionGroupDoc {
  sort_family: string;
  members: string[][];
  callees: string[];
  pair?: string[];
}
