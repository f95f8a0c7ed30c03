// View state and its transitions, kept pure so they are directly testable.
// Element toggles are the analyst's unsaved validity marks; they reset when
// the selection moves to another candidate, unless they were saved first.

export interface ElementToggles {
  validCallers: Set<string>;
  relevantCallees: Set<string>;
  validPairs: Set<string>; // "redirector->target"
}

export interface ViewState {
  technique: string | null;
  sortColumn: string;
  highlightSync: boolean;
  selectedId: string | null;
  toggles: ElementToggles;
  dirty: boolean;
}

export function emptyToggles(): ElementToggles {
  return {
    validCallers: new Set(),
    relevantCallees: new Set(),
    validPairs: new Set(),
  };
}

export function initialState(): ViewState {
  return {
    technique: null,
    sortColumn: "size",
    highlightSync: true,
    selectedId: null,
    toggles: emptyToggles(),
    dirty: false,
  };
}

export function pairKey(redirector: string, target: string): string {
  return `${redirector}->${target}`;
}

export function switchTechnique(state: ViewState, technique: string): ViewState {
  if (technique === state.technique) return state;
  return {
    ...state,
    technique,
    selectedId: null,
    toggles: emptyToggles(),
    dirty: false,
  };
}

export function setSortColumn(state: ViewState, column: string): ViewState {
  return { ...state, sortColumn: column };
}

export function setHighlightSync(state: ViewState, on: boolean): ViewState {
  return { ...state, highlightSync: on };
}

export function selectCandidate(
  state: ViewState,
  id: string | null,
  savedToggles: ElementToggles,
): ViewState {
  if (id === state.selectedId) return state;
  // unsaved toggles never travel between candidates
  return { ...state, selectedId: id, toggles: savedToggles, dirty: false };
}

function toggled(set: Set<string>, value: string): Set<string> {
  const next = new Set(set);
  if (next.has(value)) next.delete(value);
  else next.add(value);
  return next;
}

export function toggleCaller(state: ViewState, caller: string): ViewState {
  return {
    ...state,
    dirty: true,
    toggles: { ...state.toggles, validCallers: toggled(state.toggles.validCallers, caller) },
  };
}

export function toggleCallee(state: ViewState, callee: string): ViewState {
  return {
    ...state,
    dirty: true,
    toggles: {
      ...state.toggles,
      relevantCallees: toggled(state.toggles.relevantCallees, callee),
    },
  };
}

export function togglePair(state: ViewState, redirector: string, target: string): ViewState {
  return {
    ...state,
    dirty: true,
    toggles: {
      ...state.toggles,
      validPairs: toggled(state.toggles.validPairs, pairKey(redirector, target)),
    },
  };
}

export function markSaved(state: ViewState): ViewState {
  return { ...state, dirty: false };
}

export function togglesFromValidity(validity: {
  valid_callers: string[];
  relevant_callees: string[];
  valid_pairs: string[][];
}): ElementToggles {
  return {
    validCallers: new Set(validity.valid_callers),
    relevantCallees: new Set(validity.relevant_callees),
    validPairs: new Set(validity.valid_pairs.map(([m, n]) => pairKey(m, n))),
  };
}
