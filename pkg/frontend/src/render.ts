// DOM construction. Everything here is a dumb projection of server payloads
// and view state; event decisions are delegated back through callbacks.

import type { Row } from "./table.js";
import type {
  CandidateDetail,
  CandidateSummary,
  MetricsDoc,
  QualityInfo,
  SortName,
  Verdict,
} from "./types.js";
import { SORT_LABELS } from "./types.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function renderTabs(
  container: HTMLElement,
  techniques: string[],
  active: string | null,
  onSelect: (technique: string) => void,
): void {
  clear(container);
  for (const technique of [...techniques, "seeds"]) {
    const button = el("button", technique === active ? "tab active" : "tab", technique);
    button.addEventListener("click", () => onSelect(technique));
    container.appendChild(button);
  }
}

export function renderTable(
  container: HTMLElement,
  rows: Row[],
  selectedId: string | null,
  onSelect: (id: string) => void,
): void {
  clear(container);
  if (rows.length === 0) {
    container.appendChild(
      el("p", "empty-state", "No candidates in this report at the current thresholds."),
    );
    return;
  }
  const table = el("table", "candidates");
  const head = el("thead");
  const headRow = el("tr");
  for (const title of ["Candidate", "Size", "Verdict", "Quality"]) {
    headRow.appendChild(el("th", undefined, title));
  }
  head.appendChild(headRow);
  table.appendChild(head);
  const body = el("tbody");
  for (const row of rows) {
    const tr = el("tr");
    tr.dataset.id = row.id;
    const classes = ["row"];
    if (row.highlighted) classes.push("highlighted");
    if (row.isSeed) classes.push("seed");
    if (row.id === selectedId) classes.push("selected");
    tr.className = classes.join(" ");
    tr.appendChild(el("td", "headline", row.headline));
    tr.appendChild(el("td", undefined, row.magnitude));
    tr.appendChild(el("td", `verdict ${row.verdict}`, row.verdict));
    tr.appendChild(el("td", "quality", row.quality));
    tr.addEventListener("click", () => onSelect(row.id));
    body.appendChild(tr);
  }
  table.appendChild(body);
  container.appendChild(table);
}

function qualityText(quality: QualityInfo | null): string {
  return quality ? quality.display : "not yet rated";
}

export interface DetailCallbacks {
  onToggleCaller: (caller: string) => void;
  onToggleCallee: (callee: string) => void;
  onTogglePair: (redirector: string, target: string) => void;
  onSave: (verdict: Verdict, sort: SortName | "", note: string) => void;
}

export interface DetailViewModel {
  detail: CandidateDetail;
  validCallers: Set<string>;
  relevantCallees: Set<string>;
  validPairs: Set<string>;
  liveQuality: QualityInfo | null;
  formError: string | null;
}

function elementList(
  title: string,
  items: { key: string; label: string; extended?: boolean }[],
  marked: Set<string>,
  onToggle: (key: string) => void,
): HTMLElement {
  const section = el("section", "elements");
  section.appendChild(el("h3", undefined, title));
  const list = el("ul");
  for (const item of items) {
    const li = el("li", item.extended ? "extended-only" : undefined);
    const label = el("label");
    const box = el("input") as HTMLInputElement;
    box.type = "checkbox";
    box.checked = marked.has(item.key);
    box.addEventListener("change", () => onToggle(item.key));
    label.appendChild(box);
    label.appendChild(
      el("span", undefined, item.extended ? `${item.label} (extended)` : item.label),
    );
    li.appendChild(label);
    list.appendChild(li);
  }
  section.appendChild(list);
  return section;
}

export function renderDetail(
  container: HTMLElement,
  model: DetailViewModel,
  callbacks: DetailCallbacks,
): void {
  clear(container);
  const { detail } = model;
  const doc = detail.candidate;
  container.appendChild(el("h2", undefined, headlineOf(detail)));
  const meta = el("p", "meta");
  meta.textContent = `${detail.technique} candidate ${doc.id}` + (detail.highlighted ? " | also grouped by the other analysis" : "");
  container.appendChild(meta);

  // live quality readout with the acceptance bar it is judged against
  const gauge = el("div", "quality-gauge");
  gauge.appendChild(el("span", "quality-value", qualityText(model.liveQuality)));
  gauge.appendChild(
    el("span", "quality-bar", `accept above ${detail.acceptance_bar}%`),
  );
  const meter = el("div", "meter");
  const fill = el("div", "meter-fill");
  const pct = model.liveQuality
    ? Math.min(100, (100 * model.liveQuality.numerator) / model.liveQuality.denominator)
    : 0;
  fill.style.width = `${pct}%`;
  const bar = el("div", "meter-threshold");
  bar.style.left = `${detail.acceptance_bar}%`;
  meter.appendChild(fill);
  meter.appendChild(bar);
  gauge.appendChild(meter);
  container.appendChild(gauge);

  if (doc.callers && doc.callers.length) {
    container.appendChild(
      elementList(
        `Callers (${doc.callers.length})`,
        doc.callers.map((caller) => ({ key: caller, label: caller })),
        model.validCallers,
        callbacks.onToggleCaller,
      ),
    );
  }
  if (doc.callees || doc.extended_callees) {
    const shown = new Set(doc.callees ?? []);
    const all = doc.extended_callees ?? doc.callees ?? [];
    container.appendChild(
      elementList(
        `Grouped callees (${shown.size} shown, ${all.length} extended)`,
        all.map((callee) => ({
          key: callee,
          label: callee,
          extended: !shown.has(callee),
        })),
        model.relevantCallees,
        callbacks.onToggleCallee,
      ),
    );
  }
  if (doc.pairs && doc.pairs.length) {
    container.appendChild(
      elementList(
        `Forwarding pairs (${doc.pairs.length})`,
        doc.pairs.map((pair) => ({
          key: `${pair.redirector}->${pair.target}`,
          label:
            `${pair.redirector} -> ${pair.target}` +
            (pair.name_match ? " (names match)" : ""),
        })),
        model.validPairs,
        (key) => {
          const [redirector, target] = key.split("->");
          callbacks.onTogglePair(redirector, target);
        },
      ),
    );
  }

  const form = el("form", "label-form");
  form.addEventListener("submit", (event) => event.preventDefault());
  const verdictSelect = el("select") as HTMLSelectElement;
  verdictSelect.name = "verdict";
  for (const v of ["undecided", "seed", "non_seed"]) {
    const option = el("option", undefined, v) as HTMLOptionElement;
    option.value = v;
    verdictSelect.appendChild(option);
  }
  verdictSelect.value = detail.verdict;
  const sortSelect = el("select") as HTMLSelectElement;
  sortSelect.name = "sort";
  const none = el("option", undefined, "(no sort)") as HTMLOptionElement;
  none.value = "";
  sortSelect.appendChild(none);
  for (const [value, label] of Object.entries(SORT_LABELS)) {
    const option = el("option", undefined, label) as HTMLOptionElement;
    option.value = value;
    sortSelect.appendChild(option);
  }
  sortSelect.value = detail.sort ?? "";
  const note = el("input") as HTMLInputElement;
  note.type = "text";
  note.name = "note";
  note.placeholder = "note";
  note.value = detail.note;
  const save = el("button", "save", "Save label") as HTMLButtonElement;
  save.type = "submit";
  save.addEventListener("click", () => {
    callbacks.onSave(
      verdictSelect.value as Verdict,
      sortSelect.value as SortName | "",
      note.value,
    );
  });
  form.appendChild(verdictSelect);
  form.appendChild(sortSelect);
  form.appendChild(note);
  form.appendChild(save);
  if (model.formError) {
    form.appendChild(el("p", "form-error", model.formError));
  }
  container.appendChild(form);
}

export function headlineOf(detail: CandidateDetail): string {
  const doc = detail.candidate;
  if (doc.callee) return doc.callee;
  if (doc.callees) return doc.callees.join(" + ");
  if (doc.redirector_class) return `${doc.redirector_class} -> ${doc.target_class}`;
  if (doc.callee_set) return doc.callee_set.join(" + ");
  return doc.id;
}

export function renderSeeds(
  container: HTMLElement,
  seeds: CandidateSummary[],
  metrics: MetricsDoc[],
  onOpen: (technique: string, id: string) => void,
): void {
  clear(container);
  container.appendChild(el("h2", undefined, "Seeds"));
  if (seeds.length === 0) {
    container.appendChild(el("p", "empty-state", "Nothing marked as a seed yet."));
  }
  const bySort = new Map<string, CandidateSummary[]>();
  for (const seed of seeds) {
    const key = seed.sort ?? "unsorted";
    const bucket = bySort.get(key) ?? [];
    bucket.push(seed);
    bySort.set(key, bucket);
  }
  for (const [sort, bucket] of [...bySort.entries()].sort()) {
    const section = el("section", "seed-group");
    section.appendChild(
      el("h3", undefined, SORT_LABELS[sort as SortName] ?? sort),
    );
    const list = el("ul");
    for (const seed of bucket) {
      const li = el("li", "seed-row");
      const link = el("a", undefined, `${seed.headline} [${seed.technique}]`);
      link.href = "#";
      link.addEventListener("click", (event) => {
        event.preventDefault();
        onOpen(seed.technique, seed.id);
      });
      li.appendChild(link);
      li.appendChild(el("span", "quality", seed.quality ? ` ${seed.quality.display}` : ""));
      if (seed.note) li.appendChild(el("span", "note", ` ${seed.note}`));
      list.appendChild(li);
    }
    section.appendChild(list);
    container.appendChild(section);
  }

  const panel = el("section", "metrics-panel");
  panel.appendChild(el("h3", undefined, "Metrics"));
  const table = el("table", "metrics");
  const head = el("tr");
  for (const title of ["Scope", "Precision", "Absolute recall"]) {
    head.appendChild(el("th", undefined, title));
  }
  table.appendChild(head);
  for (const doc of metrics) {
    const tr = el("tr");
    tr.appendChild(el("td", undefined, doc.technique));
    tr.appendChild(
      el("td", undefined, doc.precision ? doc.precision.summary : "-"),
    );
    tr.appendChild(el("td", undefined, String(doc.absolute_recall)));
    table.appendChild(tr);
    if (doc.merge_trace && doc.merge_trace.length) {
      const traceRow = el("tr", "merge-trace");
      const cell = el("td");
      cell.colSpan = 3;
      cell.textContent =
        "merged into one concern: " +
        doc.merge_trace
          .map((group) => group.map(([technique, id]) => `${technique}:${id.slice(0, 8)}`).join(" = "))
          .join("; ");
      traceRow.appendChild(cell);
      table.appendChild(traceRow);
    }
  }
  panel.appendChild(table);
  container.appendChild(panel);
}

export function showBanner(container: HTMLElement, message: string | null): void {
  clear(container);
  if (message !== null) {
    container.appendChild(el("div", "banner error", message));
  }
}
