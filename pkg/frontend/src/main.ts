// Application controller: wires server data, view state, and the DOM.

import * as api from "./api.js";
import { buildPayload, validateLabel } from "./labelForm.js";
import {
  headlineOf,
  renderDetail,
  renderSeeds,
  renderTable,
  renderTabs,
  showBanner,
} from "./render.js";
import {
  emptyToggles,
  initialState,
  markSaved,
  selectCandidate,
  setHighlightSync,
  setSortColumn,
  switchTechnique,
  toggleCallee,
  toggleCaller,
  togglePair,
  togglesFromValidity,
  type ViewState,
} from "./state.js";
import { buildRows, sortColumnsFor } from "./table.js";
import type { CandidateDetail, QualityInfo, SortName, Verdict } from "./types.js";

interface AppNodes {
  banner: HTMLElement;
  tabs: HTMLElement;
  controls: HTMLElement;
  table: HTMLElement;
  detail: HTMLElement;
}

class App {
  state: ViewState = initialState();
  techniques: string[] = [];
  detail: CandidateDetail | null = null;
  liveQuality: QualityInfo | null = null;
  formError: string | null = null;

  constructor(private nodes: AppNodes) {}

  async start(): Promise<void> {
    try {
      const infos = await api.fetchTechniques();
      this.techniques = infos.map((info) => info.technique);
      showBanner(this.nodes.banner, null);
    } catch (error) {
      // one visible banner, no background retry loop
      showBanner(
        this.nodes.banner,
        `The triage service is unreachable (${String(error)}). Start it with: concernmine serve`,
      );
      return;
    }
    const first = this.techniques[0] ?? null;
    if (first) {
      await this.openTechnique(first);
    }
    this.renderChrome();
  }

  renderChrome(): void {
    renderTabs(
      this.nodes.tabs,
      this.techniques,
      this.state.technique,
      (technique) => void this.openTechnique(technique),
    );
    this.renderControls();
  }

  renderControls(): void {
    const { controls } = this.nodes;
    controls.textContent = "";
    if (this.state.technique === null || this.state.technique === "seeds") return;
    const syncLabel = document.createElement("label");
    syncLabel.className = "sync-toggle";
    const sync = document.createElement("input");
    sync.type = "checkbox";
    sync.checked = this.state.highlightSync;
    sync.addEventListener("change", () => {
      this.state = setHighlightSync(this.state, sync.checked);
      void this.refreshTable();
    });
    syncLabel.appendChild(sync);
    syncLabel.appendChild(
      document.createTextNode(" highlight findings shared with the other analysis"),
    );
    controls.appendChild(syncLabel);

    const sortSelect = document.createElement("select");
    for (const column of sortColumnsFor(this.state.technique)) {
      const option = document.createElement("option");
      option.value = column.key;
      option.textContent = `sort by ${column.label}`;
      sortSelect.appendChild(option);
    }
    sortSelect.value = this.state.sortColumn;
    sortSelect.addEventListener("change", () => {
      this.state = setSortColumn(this.state, sortSelect.value);
      void this.refreshTable();
    });
    controls.appendChild(sortSelect);
  }

  async openTechnique(technique: string): Promise<void> {
    this.state = switchTechnique(this.state, technique);
    const columns = sortColumnsFor(technique);
    if (!columns.some((column) => column.key === this.state.sortColumn)) {
      this.state = setSortColumn(this.state, columns[0].key);
    }
    this.detail = null;
    this.liveQuality = null;
    this.formError = null;
    this.renderChrome();
    if (technique === "seeds") {
      await this.refreshSeeds();
    } else {
      this.nodes.detail.textContent = "";
      await this.refreshTable();
    }
  }

  async refreshTable(): Promise<void> {
    const technique = this.state.technique;
    if (!technique || technique === "seeds") return;
    try {
      const page = await api.fetchCandidates(technique, this.state.sortColumn);
      showBanner(this.nodes.banner, null);
      renderTable(
        this.nodes.table,
        buildRows(page.candidates, this.state.highlightSync),
        this.state.selectedId,
        (id) => void this.openCandidate(id),
      );
    } catch (error) {
      showBanner(this.nodes.banner, `Could not load candidates: ${String(error)}`);
    }
  }

  async openCandidate(id: string): Promise<void> {
    try {
      const detail = await api.fetchCandidate(id);
      this.detail = detail;
      this.liveQuality = detail.quality;
      this.formError = null;
      this.state = selectCandidate(this.state, id, togglesFromValidity(detail.validity));
      this.renderDetailPanel();
      await this.refreshTable();
    } catch (error) {
      showBanner(this.nodes.banner, `Could not load the candidate: ${String(error)}`);
    }
  }

  renderDetailPanel(): void {
    if (!this.detail) return;
    renderDetail(
      this.nodes.detail,
      {
        detail: this.detail,
        validCallers: this.state.toggles.validCallers,
        relevantCallees: this.state.toggles.relevantCallees,
        validPairs: this.state.toggles.validPairs,
        liveQuality: this.liveQuality,
        formError: this.formError,
      },
      {
        onToggleCaller: (caller) => {
          this.state = toggleCaller(this.state, caller);
          this.renderDetailPanel();
        },
        onToggleCallee: (callee) => {
          this.state = toggleCallee(this.state, callee);
          this.renderDetailPanel();
        },
        onTogglePair: (redirector, target) => {
          this.state = togglePair(this.state, redirector, target);
          this.renderDetailPanel();
        },
        onSave: (verdict, sort, note) => void this.saveLabel(verdict, sort, note),
      },
    );
  }

  async saveLabel(verdict: Verdict, sort: SortName | "", note: string): Promise<void> {
    if (!this.detail || !this.state.selectedId) return;
    const candidateId = this.state.selectedId;
    const input = { verdict, sort, note };
    const clientError = validateLabel(input);
    if (clientError) {
      this.formError = clientError;
      this.renderDetailPanel();
      return;
    }
    try {
      const response = await api.putLabel(
        candidateId,
        buildPayload(input, this.state.toggles),
      );
      // the displayed percentage is whatever the server computed, verbatim
      this.liveQuality = response.quality;
      this.formError = null;
      this.state = markSaved(this.state);
      this.detail = await api.fetchCandidate(candidateId);
      this.renderDetailPanel();
      await this.refreshTable();
    } catch (error) {
      this.formError =
        error instanceof api.ApiError ? error.detail : `save failed: ${String(error)}`;
      this.renderDetailPanel();
    }
  }

  async refreshSeeds(): Promise<void> {
    try {
      const seeds = await api.fetchSeeds();
      const scopes = [...this.techniques];
      if (
        this.techniques.includes("fanin") &&
        this.techniques.includes("grouped") &&
        !scopes.includes("fanin+grouped")
      ) {
        try {
          await api.combine("intersect");
          scopes.push("fanin+grouped");
        } catch {
          // combination unavailable; per-technique metrics still render
        }
      }
      const metrics = [];
      for (const scope of [...scopes, "union"]) {
        try {
          metrics.push(await api.fetchMetrics(scope));
        } catch {
          // a scope without a report is fine to skip
        }
      }
      showBanner(this.nodes.banner, null);
      this.nodes.table.textContent = "";
      renderSeeds(this.nodes.detail, seeds, metrics, (technique, id) => {
        void this.openTechnique(technique).then(() => this.openCandidate(id));
      });
    } catch (error) {
      showBanner(this.nodes.banner, `Could not load seeds: ${String(error)}`);
    }
  }
}

export function mount(root: Document = document): App {
  const nodes: AppNodes = {
    banner: root.getElementById("banner") as HTMLElement,
    tabs: root.getElementById("tabs") as HTMLElement,
    controls: root.getElementById("controls") as HTMLElement,
    table: root.getElementById("table") as HTMLElement,
    detail: root.getElementById("detail") as HTMLElement,
  };
  const app = new App(nodes);
  void app.start();
  return app;
}

declare global {
  interface Window {
    __concernmineApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("tabs")) {
  window.__concernmineApp = mount();
}

export { App, emptyToggles, headlineOf };
