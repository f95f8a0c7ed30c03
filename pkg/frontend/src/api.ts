// Thin typed client over the triage HTTP API.

import type {
  CandidateDetail,
  CandidatePage,
  CandidateSummary,
  LabelPayload,
  LabelResponse,
  MetricsDoc,
  TechniqueInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: unknown };
      if (typeof body.detail === "string") detail = body.detail;
      else if (body.detail !== undefined) detail = JSON.stringify(body.detail);
    } catch {
      // leave the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export function fetchTechniques(): Promise<TechniqueInfo[]> {
  return request("/techniques");
}

export function fetchCandidates(
  technique: string,
  sortKey: string,
  page = 1,
  pageSize = 500,
): Promise<CandidatePage> {
  const params = new URLSearchParams({
    sort_key: sortKey,
    page: String(page),
    page_size: String(pageSize),
  });
  return request(`/candidates/${encodeURIComponent(technique)}?${params}`);
}

export function fetchCandidate(id: string): Promise<CandidateDetail> {
  return request(`/candidate/${encodeURIComponent(id)}`);
}

export function putLabel(id: string, payload: LabelPayload): Promise<LabelResponse> {
  return request(`/candidate/${encodeURIComponent(id)}/label`, {
    method: "PUT",
    body: JSON.stringify(payload),
  });
}

export function fetchSeeds(): Promise<CandidateSummary[]> {
  return request("/seeds");
}

export function fetchMetrics(scope: string): Promise<MetricsDoc> {
  return request(`/metrics/${encodeURIComponent(scope)}`);
}

export function combine(mode: "intersect" | "refine" | "union"): Promise<unknown> {
  return request(`/combine/${mode}`, { method: "POST" });
}
