// Wires the editor together: profile selection, per-category weight
// controls with a live subtotal radar, run selection, and a ranked model
// list that re-sorts from the scoring service's responses.
//
// Every score, grade, rank, and exclusion shown here comes verbatim from
// the service; the client never re-derives scoring arithmetic.

import { ApiClient } from "./api.js";
import { radarSvg } from "./radar.js";
import { WhatIfScheduler } from "./scheduler.js";
import {
  Store,
  categorySubtotals,
  initialState,
  isScoreable,
  validateWeights,
  WEIGHT_SUM,
} from "./state.js";
import type { DimensionInfo, ProfileDoc, RunSummary } from "./types.js";
import { emitProfile, parseProfile } from "./yaml.js";

const GRADE_CLASSES: Record<string, string> = {
  A: "grade-a", B: "grade-b", C: "grade-c", D: "grade-d", F: "grade-f",
};

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export class App {
  store = new Store(initialState());
  scheduler: WhatIfScheduler;
  catalog: DimensionInfo[] = [];
  profiles: ProfileDoc[] = [];
  runs: RunSummary[] = [];
  lastError = "";

  constructor(
    readonly api: ApiClient,
    readonly root: HTMLElement,
  ) {
    this.scheduler = new WhatIfScheduler((signal) => this.rescore(signal));
  }

  categoryOf = (dim: string): string =>
    this.catalog.find((d) => d.id === dim)?.category ?? "Detection";

  async load(): Promise<void> {
    [this.catalog, this.profiles, this.runs] = await Promise.all([
      this.api.dimensions(),
      this.api.profiles(),
      this.api.runs(),
    ]);
    this.renderShell();
    this.store.subscribe(() => this.renderDynamic());
    const first = this.profiles.find((p) => p.name === "ciso") ?? this.profiles[0];
    this.store.update({ selectedRuns: this.runs.map((r) => r.run_id) });
    if (first) this.store.loadProfile(first);
    await this.scheduler.fireNow();
  }

  async rescore(signal: AbortSignal): Promise<void> {
    const { weights, selectedRuns, profileName, description } = this.store.state;
    if (selectedRuns.length === 0 || !isScoreable(weights)) {
      this.store.update({ response: null, stale: false });
      return;
    }
    try {
      const response = await this.api.score(
        {
          run_ids: selectedRuns,
          profile: { name: profileName || "draft", description, weights },
          relax_sum: true,
        },
        signal,
      );
      this.lastError = "";
      this.store.update({ response, stale: false });
    } catch (err) {
      if ((err as Error)?.name === "AbortError") throw err;
      this.lastError = (err as Error).message ?? String(err);
      this.store.update({ response: null, stale: false });
    }
  }

  exportText(): string {
    const { profileName, description, weights } = this.store.state;
    const violations = validateWeights(weights);
    if (violations.length > 0) {
      throw new Error(
        "profile not publishable: " + violations.map((v) => v.message).join("; "),
      );
    }
    return emitProfile({ name: profileName, description, weights });
  }

  importText(text: string): void {
    const doc = parseProfile(text);
    this.store.loadProfile({
      name: doc.name,
      description: doc.description,
      weights: doc.weights,
    });
    this.scheduler.schedule();
  }

  dispose(): void {
    this.scheduler.cancel();
  }

  // --- rendering ---

  private renderShell(): void {
    const options = this.profiles
      .map((p) => `<option value="${esc(p.name)}">${esc(p.name)}</option>`)
      .join("");
    this.root.innerHTML = `
      <header>
        <h1>Decision-score what-if editor</h1>
        <span class="api-base">${esc(this.api.base)}</span>
      </header>
      <main>
        <section class="panel" id="editor-panel">
          <div class="profile-bar">
            <select id="profile-select">${options}</select>
            <input id="profile-name" type="text" placeholder="profile name"/>
            <button id="export-btn">Export YAML</button>
            <label class="import-label">Import
              <input id="import-file" type="file" accept=".yaml,.yml"/>
            </label>
          </div>
          <div id="validity"></div>
          <div id="radar"></div>
          <div id="weight-groups"></div>
        </section>
        <section class="panel" id="results-panel">
          <h2>Runs</h2>
          <div id="runs"></div>
          <h2>Ranking</h2>
          <div id="error-bar"></div>
          <div id="ranks" data-updated="0"></div>
        </section>
      </main>`;
    this.renderRunList();
    this.wireEvents();
  }

  private renderRunList(): void {
    const selected = new Set(this.store.state.selectedRuns);
    const rows = this.runs
      .map(
        (run) => `
        <label class="run-row">
          <input type="checkbox" class="run-check" data-run="${esc(run.run_id)}"
            ${selected.has(run.run_id) ? "checked" : ""}/>
          <span class="run-id">${esc(run.run_id)}</span>
          <span class="run-meta">${esc(run.model_name)} · ${esc(run.layer)} ·
            ${run.task_count} tasks · ${run.benchmark_pct.toFixed(1)}%</span>
        </label>`,
      )
      .join("");
    const el = this.root.querySelector("#runs");
    if (el) el.innerHTML = rows || "<p>No runs loaded.</p>";
  }

  private renderDynamic(): void {
    this.renderValidity();
    this.renderRadar();
    this.renderWeights();
    this.renderRanks();
  }

  private renderValidity(): void {
    const { weights } = this.store.state;
    const violations = validateWeights(weights);
    const total = Object.values(weights).reduce((a, b) => a + b, 0);
    const count = Object.keys(weights).length;
    const publishable = violations.length === 0;
    const chips =
      `<span class="chip ${total === WEIGHT_SUM ? "ok" : "bad"}">sum ${total}/${WEIGHT_SUM}</span>` +
      `<span class="chip ${count >= 12 && count <= 16 ? "ok" : "bad"}">${count} dims</span>` +
      `<span class="chip ${publishable ? "ok" : "bad"}">${publishable ? "publishable" : "draft"}</span>`;
    const messages = violations
      .map((v) => `<div class="violation" data-code="${esc(v.code)}">${esc(v.message)}</div>`)
      .join("");
    const el = this.root.querySelector("#validity");
    if (el) el.innerHTML = chips + messages;
  }

  private renderRadar(): void {
    const { weights, baseline } = this.store.state;
    const totals = categorySubtotals(weights, this.categoryOf);
    const base = baseline
      ? categorySubtotals(baseline.weights, this.categoryOf)
      : null;
    const el = this.root.querySelector("#radar");
    if (el) el.innerHTML = radarSvg(totals, base);
  }

  private inertDims(): Set<string> {
    // A dimension excluded from every selected run cannot move any score.
    const response = this.store.state.response;
    if (!response || response.reports.length === 0) return new Set();
    let inert: Set<string> | null = null;
    for (const report of response.reports) {
      const ids = new Set(report.exclusions.map((e) => e.id));
      if (inert === null) {
        inert = ids;
      } else {
        const previous: Set<string> = inert;
        inert = new Set([...previous].filter((d) => ids.has(d)));
      }
    }
    return inert ?? new Set();
  }

  private renderWeights(): void {
    const { weights } = this.store.state;
    const inert = this.inertDims();
    const byCategory = new Map<string, DimensionInfo[]>();
    for (const dim of this.catalog) {
      const list = byCategory.get(dim.category) ?? [];
      list.push(dim);
      byCategory.set(dim.category, list);
    }
    const totals = categorySubtotals(weights, this.categoryOf);
    const groups: string[] = [];
    for (const [category, dims] of byCategory) {
      const longName = dims[0]?.category_name ?? category;
      const rows = dims
        .map((dim) => {
          const enabled = dim.id in weights;
          const weight = weights[dim.id] ?? "";
          const inertClass = enabled && inert.has(dim.id) ? " inert" : "";
          return `
          <div class="dim-row${inertClass}" data-dim="${dim.id}"
               title="${inert.has(dim.id) ? "excluded for every selected run" : esc(dim.name)}">
            <input type="checkbox" class="dim-check" data-dim="${dim.id}"
              ${enabled ? "checked" : ""}/>
            <span class="dim-id">${dim.id}</span>
            <span class="dim-name">${esc(dim.name)}</span>
            <input type="range" class="dim-slider" data-dim="${dim.id}"
              min="1" max="20" value="${weight || 1}" ${enabled ? "" : "disabled"}/>
            <input type="number" class="dim-weight" data-dim="${dim.id}"
              min="1" max="${WEIGHT_SUM}" value="${weight}" ${enabled ? "" : "disabled"}/>
          </div>`;
        })
        .join("");
      groups.push(`
        <details class="category-group" open>
          <summary>${esc(longName)} <span class="subtotal">${totals[category] ?? 0}</span></summary>
          ${rows}
        </details>`);
    }
    const el = this.root.querySelector("#weight-groups");
    if (el) el.innerHTML = groups.join("");
    const nameInput = this.root.querySelector<HTMLInputElement>("#profile-name");
    if (nameInput && nameInput.value !== this.store.state.profileName) {
      nameInput.value = this.store.state.profileName;
    }
  }

  private renderRanks(): void {
    const { response, stale } = this.store.state;
    const el = this.root.querySelector<HTMLElement>("#ranks");
    const errorBar = this.root.querySelector("#error-bar");
    if (errorBar) {
      errorBar.innerHTML = this.lastError
        ? `<div class="violation">${esc(this.lastError)}</div>`
        : "";
    }
    if (!el) return;
    if (!response) {
      el.innerHTML = "<p class=\"hint\">No scores yet.</p>";
      el.dataset.updated = String(Number(el.dataset.updated ?? 0) + 1);
      return;
    }
    const byRun = new Map(response.reports.map((r) => [r.run_id, r]));
    const rows = response.ranking
      .map((runId, i) => {
        const report = byRun.get(runId);
        if (!report) return "";
        const exclusions = report.exclusions
          .map(
            (e) =>
              `<span class="excluded" title="${esc(e.reason)}">${e.id} (${e.weight})</span>`,
          )
          .join(" ");
        return `
        <div class="rank-row" data-run="${esc(runId)}" data-score="${report.score}"
             data-grade="${report.grade}">
          <span class="rank-pos">#${i + 1}</span>
          <span class="rank-run">${esc(runId)}</span>
          <span class="badge ${GRADE_CLASSES[report.grade] ?? ""}">${report.grade}</span>
          <span class="rank-score" title="${report.score}">${report.score.toFixed(1)}</span>
          <span class="rank-aw">/ wt ${report.available_weight}</span>
          <span class="rank-exclusions">${exclusions}</span>
        </div>`;
      })
      .join("");
    el.innerHTML = `<div class="ranks-list${stale ? " stale" : ""}">${rows}</div>`;
    el.dataset.updated = String(Number(el.dataset.updated ?? 0) + 1);
  }

  // --- events ---

  private wireEvents(): void {
    const select = this.root.querySelector<HTMLSelectElement>("#profile-select");
    select?.addEventListener("change", () => {
      const profile = this.profiles.find((p) => p.name === select.value);
      if (profile) {
        this.store.loadProfile(profile);
        this.scheduler.schedule();
      }
    });

    const nameInput = this.root.querySelector<HTMLInputElement>("#profile-name");
    nameInput?.addEventListener("input", () => {
      this.store.state.profileName = nameInput.value; // no re-render mid-typing
    });

    const groups = this.root.querySelector("#weight-groups");
    groups?.addEventListener("input", (event) => {
      const target = event.target as HTMLInputElement;
      const dim = target.dataset.dim;
      if (!dim) return;
      if (target.classList.contains("dim-weight") ||
          target.classList.contains("dim-slider")) {
        this.store.setWeight(dim, Number(target.value));
        this.scheduler.schedule();
      }
    });
    groups?.addEventListener("change", (event) => {
      const target = event.target as HTMLInputElement;
      const dim = target.dataset.dim;
      if (dim && target.classList.contains("dim-check")) {
        this.store.toggleDim(dim, target.checked);
        this.scheduler.schedule();
      }
    });

    const runs = this.root.querySelector("#runs");
    runs?.addEventListener("change", (event) => {
      const target = event.target as HTMLInputElement;
      if (!target.classList.contains("run-check")) return;
      const selected = new Set(this.store.state.selectedRuns);
      if (target.checked) selected.add(target.dataset.run ?? "");
      else selected.delete(target.dataset.run ?? "");
      this.store.update({
        selectedRuns: this.runs
          .map((r) => r.run_id)
          .filter((id) => selected.has(id)),
        stale: true,
      });
      this.scheduler.schedule();
    });

    this.root.querySelector("#export-btn")?.addEventListener("click", () => {
      try {
        download(`${this.store.state.profileName || "profile"}.yaml`, this.exportText());
      } catch (err) {
        this.lastError = (err as Error).message;
        this.renderRanks();
        this.renderValidity();
      }
    });

    const importInput = this.root.querySelector<HTMLInputElement>("#import-file");
    importInput?.addEventListener("change", async () => {
      const file = importInput.files?.[0];
      if (!file) return;
      try {
        this.importText(await file.text());
      } catch (err) {
        this.lastError = (err as Error).message;
        this.renderRanks();
      }
    });
  }
}

function download(filename: string, text: string): void {
  if (typeof URL.createObjectURL !== "function") return; // test environments
  const blob = new Blob([text], { type: "application/yaml" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

export async function boot(api: ApiClient, root: HTMLElement): Promise<App> {
  const app = new App(api, root);
  await app.load();
  return app;
}
