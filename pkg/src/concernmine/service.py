"""HTTP API for the triage workflow.

Serves the loaded analysis reports and the seed registry: browse candidates
per technique, inspect one candidate with its element lists, store labels,
and read seeds and metrics. All percentages are computed here, never in the
UI, so every client sees the same arithmetic. A static UI bundle can be
mounted at the root.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Any, Literal

from fastapi import FastAPI, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import assessment, combine, reports
from .assessment import SeedLabel, SeedRegistry, Verdict, format_percent
from .combine import CombinedCandidate
from .concepts import ConceptCandidate
from .errors import ConfigMismatchError, LabelValidationError, MiningError, UnknownElementError
from .facts import Sort
from .fanin import FanInCandidate
from .redirection import RedirectionCandidate, RedirectionPair
from .reports import (
    TECHNIQUE_FANIN,
    TECHNIQUE_GROUPED,
    TECHNIQUE_INTERSECT,
    TECHNIQUE_REFINED,
    TechniqueReport,
)

REGISTRY_FILENAME = "seeds.json"

SortKey = Literal["size", "callers", "callees", "pairs", "id"]


class TriageSession:
    """Reports plus registry over one state directory; one writer at a time."""

    def __init__(self, state_dir: str | Path):
        self.state_dir = Path(state_dir)
        if not self.state_dir.is_dir():
            raise MiningError(f"state directory does not exist: {self.state_dir}")
        self.reports: dict[str, TechniqueReport] = {}
        for path in sorted(self.state_dir.glob("*.json")):
            if path.name == REGISTRY_FILENAME:
                continue
            try:
                doc = reports.load_document(path)
            except ValueError:
                continue
            if isinstance(doc, dict) and doc.get("schema") == reports.REPORT_SCHEMA:
                report = TechniqueReport.from_doc(doc)
                self.reports[report.technique] = report
        reports.check_same_fingerprint(
            *(r.facts_fingerprint for r in self.reports.values())
        )
        self.fingerprint = next(
            (r.facts_fingerprint for r in self.reports.values()), ""
        )
        self.registry = SeedRegistry(self.state_dir / REGISTRY_FILENAME)
        self._write_lock = threading.Lock()
        self._reindex()

    def _reindex(self) -> None:
        self._candidates: dict[str, tuple[str, Any]] = {}
        for technique, report in self.reports.items():
            for c in report.candidates:
                self._candidates[c.candidate_id] = (technique, c)

    def candidate(self, candidate_id: str) -> tuple[str, Any]:
        try:
            return self._candidates[candidate_id]
        except KeyError:
            raise UnknownElementError(f"unknown candidate id: {candidate_id!r}") from None

    def highlight_callees(self) -> frozenset[str]:
        """Callees reported by both fan-in and grouped-calls analyses."""
        fi = self.reports.get(TECHNIQUE_FANIN)
        gc = self.reports.get(TECHNIQUE_GROUPED)
        if fi is None or gc is None:
            return frozenset()
        fanin_callees = {c.callee for c in fi.candidates}
        return frozenset(fanin_callees & combine.grouped_callee_union(gc.candidates))

    def is_highlighted(self, candidate: Any) -> bool:
        common = self.highlight_callees()
        if isinstance(candidate, FanInCandidate):
            return candidate.callee in common
        if isinstance(candidate, ConceptCandidate):
            return bool(common & set(candidate.callees))
        return False

    def put_label(self, candidate_id: str, label: SeedLabel) -> SeedLabel:
        technique, candidate = self.candidate(candidate_id)
        with self._write_lock:
            return assessment.label(
                self.registry, {candidate_id: candidate}, candidate_id, label
            )

    def combine(self, mode: str) -> dict[str, Any]:
        fi = self.reports.get(TECHNIQUE_FANIN)
        gc = self.reports.get(TECHNIQUE_GROUPED)
        if mode in ("intersect", "refine"):
            if fi is None or gc is None:
                raise MiningError("intersect/refine need fan-in and grouped reports loaded")
            fn = (
                combine.intersect_fanin_grouped
                if mode == "intersect"
                else combine.refine_all
            )
            combined = fn(fi.candidates, gc.candidates)
            technique = TECHNIQUE_INTERSECT if mode == "intersect" else TECHNIQUE_REFINED
            report = TechniqueReport(
                technique=technique,
                facts_fingerprint=self.fingerprint,
                config={"mode": mode},
                candidates=tuple(combined),
            )
            self.reports[technique] = report
            self._reindex()
            return report.to_doc()
        if mode == "union":
            return self.union_doc()
        raise MiningError(f"unknown combination mode: {mode!r}")

    def union_doc(self) -> dict[str, Any]:
        seed_sets = [
            (technique, assessment.seed_entries(report, self.registry))
            for technique, report in sorted(self.reports.items())
            if technique in (TECHNIQUE_FANIN, TECHNIQUE_GROUPED, reports.TECHNIQUE_REDIRECT)
        ]
        return combine.union_seeds(seed_sets).to_doc()


def _quality_doc(candidate: Any, label: SeedLabel | None) -> dict[str, Any] | None:
    if label is None:
        return None
    q = assessment.quality_of(candidate, label)
    return {
        "numerator": q.numerator,
        "denominator": q.denominator,
        "display": format_percent(q),
    }


def _summary(session: TriageSession, technique: str, candidate: Any) -> dict[str, Any]:
    label = session.registry.current(candidate.candidate_id)
    doc: dict[str, Any] = {
        "id": candidate.candidate_id,
        "technique": technique,
        "verdict": label.verdict.value if label else Verdict.UNDECIDED.value,
        "quality": _quality_doc(candidate, label),
        "highlighted": session.is_highlighted(candidate),
    }
    if isinstance(candidate, FanInCandidate):
        doc.update(
            headline=candidate.callee,
            caller_count=candidate.caller_count,
            call_site_count=candidate.call_site_count,
        )
    elif isinstance(candidate, ConceptCandidate):
        doc.update(
            headline=" + ".join(candidate.callees),
            caller_count=candidate.caller_count,
            callee_count=candidate.callee_count,
        )
    elif isinstance(candidate, RedirectionCandidate):
        doc.update(
            headline=f"{candidate.redirector_class} -> {candidate.target_class}",
            pair_count=candidate.pair_count,
            redirector_percentage=candidate.redirector_percentage,
        )
    elif isinstance(candidate, CombinedCandidate):
        doc.update(
            headline=" + ".join(candidate.callee_set),
            caller_count=candidate.caller_count,
        )
    return doc


def _sort_value(candidate: Any, key: SortKey) -> tuple:
    if key == "id":
        return (candidate.candidate_id,)
    if key == "callers":
        return (-getattr(candidate, "caller_count", 0), candidate.candidate_id)
    if key == "callees":
        return (-getattr(candidate, "callee_count", 0), candidate.candidate_id)
    if key == "pairs":
        return (-getattr(candidate, "pair_count", 0), candidate.candidate_id)
    # "size": each technique's natural magnitude
    if isinstance(candidate, RedirectionCandidate):
        return (-candidate.pair_count, candidate.candidate_id)
    if isinstance(candidate, ConceptCandidate):
        return (-candidate.callee_count, -candidate.caller_count, candidate.candidate_id)
    return (-getattr(candidate, "caller_count", 0), candidate.candidate_id)


class LabelPayload(BaseModel):
    verdict: str
    sort: str | None = None
    valid_callers: list[str] = Field(default_factory=list)
    relevant_callees: list[str] = Field(default_factory=list)
    valid_pairs: list[list[str]] = Field(default_factory=list)
    note: str = ""

    def to_label(self, candidate_id: str) -> SeedLabel:
        try:
            verdict = Verdict(self.verdict)
        except ValueError:
            raise LabelValidationError(f"unknown verdict: {self.verdict!r}") from None
        sort = None
        if self.sort:
            try:
                sort = Sort(self.sort)
            except ValueError:
                raise LabelValidationError(f"unknown sort: {self.sort!r}") from None
        for pair in self.valid_pairs:
            if len(pair) != 2:
                raise LabelValidationError("valid_pairs entries must be [redirector, target]")
        return SeedLabel(
            candidate_id=candidate_id,
            verdict=verdict,
            sort=sort,
            valid_callers=frozenset(self.valid_callers),
            relevant_callees=frozenset(self.relevant_callees),
            valid_pairs=frozenset(RedirectionPair(p[0], p[1]) for p in self.valid_pairs),
            note=self.note,
        )


def create_app(state_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    session = TriageSession(state_dir)
    app = FastAPI(title="concernmine triage", version="0.1.0")
    app.state.session = session

    @app.get("/techniques")
    def techniques() -> list[dict[str, Any]]:
        return [
            {"technique": t, "candidate_count": len(r.candidates)}
            for t, r in sorted(session.reports.items())
        ]

    @app.get("/candidates/{technique}")
    def list_candidates(
        technique: str,
        sort_key: SortKey = "size",
        page: int = Query(default=1, ge=1),
        page_size: int = Query(default=50, ge=1, le=500),
    ) -> dict[str, Any]:
        report = session.reports.get(technique)
        if report is None:
            raise HTTPException(status_code=404, detail=f"no report for {technique!r}")
        ordered = sorted(report.candidates, key=lambda c: _sort_value(c, sort_key))
        start = (page - 1) * page_size
        return {
            "technique": technique,
            "total": len(ordered),
            "page": page,
            "page_size": page_size,
            "candidates": [
                _summary(session, technique, c) for c in ordered[start : start + page_size]
            ],
        }

    @app.get("/candidate/{candidate_id}")
    def get_candidate(candidate_id: str) -> dict[str, Any]:
        try:
            technique, candidate = session.candidate(candidate_id)
        except UnknownElementError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        label = session.registry.current(candidate_id)
        return {
            "technique": technique,
            "candidate": candidate.to_doc(),
            "verdict": label.verdict.value if label else Verdict.UNDECIDED.value,
            "sort": label.sort.value if label and label.sort else None,
            "note": label.note if label else "",
            "validity": {
                "valid_callers": sorted(label.valid_callers) if label else [],
                "relevant_callees": sorted(label.relevant_callees) if label else [],
                "valid_pairs": sorted(
                    [p.redirector, p.target] for p in label.valid_pairs
                )
                if label
                else [],
            },
            "quality": _quality_doc(candidate, label),
            "acceptance_bar": float(assessment.ACCEPTANCE_BAR),
            "highlighted": session.is_highlighted(candidate),
        }

    @app.put("/candidate/{candidate_id}/label")
    def put_label(candidate_id: str, payload: LabelPayload) -> dict[str, Any]:
        try:
            stored = session.put_label(candidate_id, payload.to_label(candidate_id))
        except UnknownElementError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except LabelValidationError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        _, candidate = session.candidate(candidate_id)
        return {"label": stored.to_doc(), "quality": _quality_doc(candidate, stored)}

    @app.get("/seeds")
    def get_seeds() -> list[dict[str, Any]]:
        out = []
        for cid, label in session.registry.seeds().items():
            if cid not in session._candidates:
                continue
            technique, candidate = session.candidate(cid)
            summary = _summary(session, technique, candidate)
            summary.update(
                sort=label.sort.value if label.sort else None, note=label.note
            )
            out.append(summary)
        out.sort(key=lambda s: (s["technique"], s["id"]))
        return out

    @app.get("/metrics/{scope}")
    def get_metrics(scope: str) -> dict[str, Any]:
        if scope == "union":
            doc = session.union_doc()
            return {
                "schema": "metrics/1",
                "technique": "union",
                "precision": None,  # undefined for a cross-sort union
                "absolute_recall": doc["distinct_seeds"],
                "groups": doc["groups"],
                "merge_trace": doc["merge_trace"],
            }
        report = session.reports.get(scope)
        if report is None:
            raise HTTPException(status_code=404, detail=f"no report for {scope!r}")
        return assessment.compute_metrics(report, session.registry).to_doc()

    @app.post("/combine/{mode}")
    def post_combine(mode: str) -> dict[str, Any]:
        try:
            return session.combine(mode)
        except (MiningError, ConfigMismatchError) as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
