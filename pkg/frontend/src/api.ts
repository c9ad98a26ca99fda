import type {
  DimensionInfo,
  ProfileDoc,
  RunSummary,
  ScoreResponse,
} from "./types.js";

export interface WhatIfBody {
  run_ids: string[];
  profile: { name: string; description?: string; weights?: Record<string, number> };
  relax_sum?: boolean;
  caps?: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
    readonly violations: { code: string; message: string }[] = [],
  ) {
    super(detail);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    let violations: { code: string; message: string }[] = [];
    try {
      const body = await response.json();
      detail = body.detail ?? detail;
      violations = body.violations ?? [];
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail, violations);
  }
  return response.json() as Promise<T>;
}

export class ApiClient {
  constructor(readonly base: string) {}

  runs(): Promise<RunSummary[]> {
    return fetch(`${this.base}/api/v1/runs`).then((r) => unwrap<RunSummary[]>(r));
  }

  profiles(): Promise<ProfileDoc[]> {
    return fetch(`${this.base}/api/v1/profiles`).then((r) => unwrap<ProfileDoc[]>(r));
  }

  dimensions(): Promise<DimensionInfo[]> {
    return fetch(`${this.base}/api/v1/dimensions`).then((r) =>
      unwrap<DimensionInfo[]>(r),
    );
  }

  score(body: WhatIfBody, signal?: AbortSignal): Promise<ScoreResponse> {
    return fetch(`${this.base}/api/v1/score`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    }).then((r) => unwrap<ScoreResponse>(r));
  }
}

export function apiBaseFromLocation(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? "http://localhost:8080";
}
