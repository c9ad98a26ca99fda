import type { ProfileDoc, ScoreResponse, Violation } from "./types.js";

export const WEIGHT_SUM = 80;
export const MIN_DIMS = 12;
export const MAX_DIMS = 16;

export interface EditorState {
  profileName: string;
  description: string;
  weights: Record<string, number>; // enabled dimensions only
  baseline: ProfileDoc | null; // profile the editor started from
  selectedRuns: string[];
  response: ScoreResponse | null;
  stale: boolean; // an edit happened after the shown response
}

// Mirrors the backend's profile validation one violation code at a time, so
// the editor can show the same messages the registry would raise.
export function validateWeights(weights: Record<string, number>): Violation[] {
  const violations: Violation[] = [];
  const entries = Object.entries(weights);
  const total = entries.reduce((acc, [, w]) => acc + w, 0);
  if (total !== WEIGHT_SUM) {
    violations.push({ code: "sum", message: `sum ${total} != ${WEIGHT_SUM}` });
  }
  if (entries.length < MIN_DIMS || entries.length > MAX_DIMS) {
    violations.push({
      code: "count",
      message: `${entries.length} dims outside [${MIN_DIMS}, ${MAX_DIMS}]`,
    });
  }
  for (const [dim, weight] of entries) {
    if (!Number.isInteger(weight) || weight < 1) {
      violations.push({
        code: "weight",
        message: `weight for ${dim} must be a positive integer, got ${weight}`,
      });
    }
  }
  return violations;
}

export function isPublishable(weights: Record<string, number>): boolean {
  return validateWeights(weights).length === 0;
}

// Weights are editable with any sum mid-edit, but a what-if request only
// makes sense while every enabled weight is a positive integer.
export function isScoreable(weights: Record<string, number>): boolean {
  const entries = Object.entries(weights);
  return (
    entries.length > 0 &&
    entries.every(([, w]) => Number.isInteger(w) && w >= 1)
  );
}

export function categorySubtotals(
  weights: Record<string, number>,
  categoryOf: (dim: string) => string,
): Record<string, number> {
  const totals: Record<string, number> = {};
  for (const [dim, weight] of Object.entries(weights)) {
    const category = categoryOf(dim);
    totals[category] = (totals[category] ?? 0) + weight;
  }
  return totals;
}

type Listener = (state: EditorState) => void;

export class Store {
  private listeners: Listener[] = [];

  constructor(public state: EditorState) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<EditorState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  loadProfile(profile: ProfileDoc): void {
    // Edits operate on a copy; the loaded profile is never mutated.
    this.update({
      profileName: profile.name,
      description: profile.description,
      weights: { ...profile.weights },
      baseline: profile,
      stale: true,
    });
  }

  setWeight(dim: string, weight: number): void {
    this.update({ weights: { ...this.state.weights, [dim]: weight }, stale: true });
  }

  toggleDim(dim: string, enabled: boolean, defaultWeight = 1): void {
    const weights = { ...this.state.weights };
    if (enabled) {
      weights[dim] = weights[dim] ?? defaultWeight;
    } else {
      delete weights[dim];
    }
    this.update({ weights, stale: true });
  }
}

export function initialState(): EditorState {
  return {
    profileName: "",
    description: "",
    weights: {},
    baseline: null,
    selectedRuns: [],
    response: null,
    stale: true,
  };
}
