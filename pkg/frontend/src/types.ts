// Shapes of the scoring service's JSON responses.

export interface DimensionInfo {
  id: string;
  name: string;
  category: string;
  category_name: string;
  strategy: string;
  cap: number | null;
}

export interface ProfileDoc {
  name: string;
  description: string;
  weights: Record<string, number>;
  category_subtotals?: Record<string, number>;
}

export interface RunSummary {
  run_id: string;
  model_name: string;
  layer: string;
  task_count: number;
  benchmark_pct: number;
  cost_tracked: boolean;
  severity_present: boolean;
  has_sast_fp: boolean;
}

export interface Contribution {
  id: string;
  weight: number;
  score: number;
  weighted: number;
}

export interface Exclusion {
  id: string;
  weight: number;
  reason: string;
}

export interface DecisionReport {
  run_id: string;
  profile_name: string;
  score: number;
  grade: string;
  available_weight: number;
  contributions: Contribution[];
  exclusions: Exclusion[];
  category_subtotals_scored: Record<string, { weight: number; score: number }>;
}

export interface ScoreResponse {
  reports: DecisionReport[];
  ranking: string[];
}

export interface Violation {
  code: string;
  message: string;
}
