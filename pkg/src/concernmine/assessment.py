"""Seed registry and the three assessment metrics.

Labels come either from a human triaging candidates or from a corpus ground
truth acting as the oracle. Precision divides validated seeds by the full
candidate list (an uninspected candidate counts against the technique),
absolute recall is the plain seed count, and per-candidate quality uses each
technique's own formula. All arithmetic is exact; rounding happens only when
a percentage is displayed, half up to a whole percent.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .combine import CombinedCandidate, SeedEntry
from .concepts import ConceptCandidate, grouped_seed_quality
from .corpus import GroundTruth, PlantedConcern
from .errors import ConfigMismatchError, LabelValidationError, UnknownElementError
from .facts import Sort
from .fanin import FanInCandidate, fanin_seed_quality
from .redirection import RedirectionCandidate, RedirectionPair, redirection_seed_quality
from .reports import TechniqueReport

SEEDS_SCHEMA = "seeds/1"

ACCEPTANCE_BAR = Fraction(50)


class Verdict(str, Enum):
    SEED = "seed"
    NON_SEED = "non_seed"
    UNDECIDED = "undecided"


def round_half_up_percent(p: Fraction) -> int:
    return math.floor(p + Fraction(1, 2))


def format_percent(p: Fraction) -> str:
    return f"{round_half_up_percent(p)}%"


@dataclass(frozen=True)
class SeedLabel:
    """One verdict on one candidate, with per-element validity marks."""

    candidate_id: str
    verdict: Verdict
    sort: Sort | None = None
    valid_callers: frozenset[str] = frozenset()
    relevant_callees: frozenset[str] = frozenset()
    valid_pairs: frozenset[RedirectionPair] = frozenset()
    note: str = ""
    timestamp: str = ""

    def __post_init__(self) -> None:
        if self.verdict is Verdict.SEED and self.sort is None:
            raise LabelValidationError("a seed verdict requires a sort")

    def content_equals(self, other: "SeedLabel") -> bool:
        return replace(self, timestamp="") == replace(other, timestamp="")

    def to_doc(self) -> dict[str, Any]:
        return {
            "candidate_id": self.candidate_id,
            "verdict": self.verdict.value,
            "sort": self.sort.value if self.sort else None,
            "valid_callers": sorted(self.valid_callers),
            "relevant_callees": sorted(self.relevant_callees),
            "valid_pairs": sorted([p.redirector, p.target] for p in self.valid_pairs),
            "note": self.note,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "SeedLabel":
        return cls(
            candidate_id=doc["candidate_id"],
            verdict=Verdict(doc["verdict"]),
            sort=Sort(doc["sort"]) if doc.get("sort") else None,
            valid_callers=frozenset(doc.get("valid_callers", ())),
            relevant_callees=frozenset(doc.get("relevant_callees", ())),
            valid_pairs=frozenset(
                RedirectionPair(p[0], p[1]) for p in doc.get("valid_pairs", ())
            ),
            note=doc.get("note", ""),
            timestamp=doc.get("timestamp", ""),
        )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class SeedRegistry:
    """Persistent label store; relabeling appends, history is never dropped.

    Writes are atomic (temp file plus rename), so a crash mid-save cannot
    corrupt a previously saved registry.
    """

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._history: dict[str, list[SeedLabel]] = {}
        if self._path is not None and self._path.exists():
            self._load()

    def _load(self) -> None:
        import json

        doc = json.loads(self._path.read_text(encoding="utf-8"))
        if doc.get("schema") != SEEDS_SCHEMA:
            raise LabelValidationError(
                f"seed registry: schema must be {SEEDS_SCHEMA!r}, got {doc.get('schema')!r}"
            )
        for cid, entries in doc.get("labels", {}).items():
            self._history[cid] = [SeedLabel.from_doc(e) for e in entries]

    def save(self) -> None:
        if self._path is None:
            return
        import json

        doc = {
            "schema": SEEDS_SCHEMA,
            "labels": {
                cid: [label.to_doc() for label in entries]
                for cid, entries in sorted(self._history.items())
            },
        }
        tmp = self._path.with_suffix(self._path.suffix + ".tmp")
        tmp.write_text(
            json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        os.replace(tmp, self._path)

    def record(self, label: SeedLabel) -> SeedLabel:
        """Store a label, stamping it if needed; identical relabels are no-ops."""
        if not label.timestamp:
            label = replace(label, timestamp=_now())
        current = self.current(label.candidate_id)
        if current is not None and current.content_equals(label):
            return current
        self._history.setdefault(label.candidate_id, []).append(label)
        self.save()
        return label

    def current(self, candidate_id: str) -> SeedLabel | None:
        entries = self._history.get(candidate_id)
        return entries[-1] if entries else None

    def history(self, candidate_id: str) -> tuple[SeedLabel, ...]:
        return tuple(self._history.get(candidate_id, ()))

    def verdict(self, candidate_id: str) -> Verdict:
        current = self.current(candidate_id)
        return current.verdict if current else Verdict.UNDECIDED

    def seeds(self) -> dict[str, SeedLabel]:
        return {
            cid: entries[-1]
            for cid, entries in sorted(self._history.items())
            if entries and entries[-1].verdict is Verdict.SEED
        }

    def __len__(self) -> int:
        return len(self._history)


def candidate_elements(candidate: Any) -> dict[str, frozenset]:
    """The element universes a label may mark on this candidate."""
    if isinstance(candidate, FanInCandidate):
        return {"valid_callers": frozenset(candidate.callers)}
    if isinstance(candidate, ConceptCandidate):
        return {
            "valid_callers": frozenset(candidate.extended_callers),
            "relevant_callees": frozenset(candidate.extended_callees),
        }
    if isinstance(candidate, RedirectionCandidate):
        return {"valid_pairs": frozenset(candidate.pairs)}
    if isinstance(candidate, CombinedCandidate):
        return {"valid_callers": frozenset(candidate.callers)}
    raise TypeError(f"not a candidate: {type(candidate).__name__}")


def validate_label_elements(label: SeedLabel, candidate: Any) -> None:
    """Reject labels marking elements the candidate does not contain."""
    universes = candidate_elements(candidate)
    marked = {
        "valid_callers": {c for c in label.valid_callers},
        "relevant_callees": {c for c in label.relevant_callees},
        "valid_pairs": set(label.valid_pairs),
    }
    for field_name, values in marked.items():
        if not values:
            continue
        universe = universes.get(field_name)
        if universe is None:
            raise LabelValidationError(
                f"{field_name} cannot be marked on this candidate kind"
            )
        stray = values - universe
        if stray:
            shown = sorted(str(s) for s in stray)[:3]
            raise LabelValidationError(
                f"{field_name} references element(s) outside the candidate: {shown}"
            )


def label(
    registry: SeedRegistry,
    candidates_by_id: Mapping[str, Any],
    candidate_id: str,
    seed_label: SeedLabel,
) -> SeedLabel:
    """Validate against the candidate and store; the registry op of the triage flow."""
    if candidate_id not in candidates_by_id:
        raise UnknownElementError(f"unknown candidate id: {candidate_id!r}")
    if seed_label.candidate_id != candidate_id:
        raise LabelValidationError("label candidate_id does not match the target candidate")
    validate_label_elements(seed_label, candidates_by_id[candidate_id])
    return registry.record(seed_label)


def quality_of(candidate: Any, seed_label: SeedLabel) -> Fraction:
    """Per-candidate seed quality under the technique-specific formula."""
    if isinstance(candidate, FanInCandidate):
        return fanin_seed_quality(candidate, seed_label.valid_callers)
    if isinstance(candidate, ConceptCandidate):
        return grouped_seed_quality(
            candidate, seed_label.valid_callers, seed_label.relevant_callees
        )
    if isinstance(candidate, RedirectionCandidate):
        return redirection_seed_quality(candidate, seed_label.valid_pairs)
    if isinstance(candidate, CombinedCandidate):
        # caller-based, like fan-in: the callee set names the concern
        valid = set(seed_label.valid_callers) & set(candidate.callers)
        return Fraction(100) * Fraction(len(valid), len(candidate.callers))
    raise TypeError(f"not a candidate: {type(candidate).__name__}")


def _matching_concerns(candidate: Any, truth: GroundTruth) -> list[PlantedConcern]:
    out = []
    for concern in truth.concerns:
        if isinstance(candidate, RedirectionCandidate):
            if (
                concern.sort is Sort.REDIRECTION_LAYER
                and concern.redirector_class == candidate.redirector_class
                and concern.target_class == candidate.target_class
            ):
                out.append(concern)
        elif isinstance(candidate, (FanInCandidate,)):
            if candidate.callee in concern.callees:
                out.append(concern)
        elif isinstance(candidate, ConceptCandidate):
            if set(candidate.callees) & set(concern.callees):
                out.append(concern)
        elif isinstance(candidate, CombinedCandidate):
            if set(candidate.callee_set) & set(concern.callees):
                out.append(concern)
    return out


def _oracle_label(candidate: Any, concern: PlantedConcern) -> SeedLabel:
    planted_callers = set(concern.callers)
    if isinstance(candidate, RedirectionCandidate):
        valid_pairs = frozenset(
            p for p in candidate.pairs if (p.redirector, p.target) in set(concern.pairs)
        )
        return SeedLabel(
            candidate_id=candidate.candidate_id,
            verdict=Verdict.SEED,
            sort=concern.sort,
            valid_pairs=valid_pairs,
            note="oracle",
        )
    if isinstance(candidate, ConceptCandidate):
        return SeedLabel(
            candidate_id=candidate.candidate_id,
            verdict=Verdict.SEED,
            sort=concern.sort,
            valid_callers=frozenset(set(candidate.callers) & planted_callers),
            relevant_callees=frozenset(set(candidate.callees) & set(concern.callees)),
            note="oracle",
        )
    callers = set(candidate.callers)
    return SeedLabel(
        candidate_id=candidate.candidate_id,
        verdict=Verdict.SEED,
        sort=concern.sort,
        valid_callers=frozenset(callers & planted_callers),
        note="oracle",
    )


def auto_label_from_ground_truth(
    report: TechniqueReport,
    truth: GroundTruth,
    registry: SeedRegistry | None = None,
    acceptance_bar: Fraction = ACCEPTANCE_BAR,
) -> SeedRegistry:
    """Label every reported candidate from the planted truth.

    A candidate matching a planted concern is a seed when its quality strictly
    exceeds the acceptance bar; everything else, including matches of poor
    quality, is a non-seed. When several plants match, the best-scoring one
    wins.
    """
    if report.facts_fingerprint and truth.facts_fingerprint != report.facts_fingerprint:
        raise ConfigMismatchError(
            "report and ground truth come from different corpora: "
            f"{report.facts_fingerprint[:12]} vs {truth.facts_fingerprint[:12]}"
        )
    if registry is None:
        registry = SeedRegistry()
    for candidate in report.candidates:
        best: tuple[Fraction, SeedLabel] | None = None
        for concern in _matching_concerns(candidate, truth):
            proposed = _oracle_label(candidate, concern)
            q = quality_of(candidate, proposed)
            if best is None or q > best[0]:
                best = (q, proposed)
        if best is not None and best[0] > acceptance_bar:
            registry.record(best[1])
        elif best is not None:
            registry.record(
                replace(best[1], verdict=Verdict.NON_SEED, sort=None, note="oracle: below bar")
            )
        else:
            registry.record(
                SeedLabel(
                    candidate_id=candidate.candidate_id,
                    verdict=Verdict.NON_SEED,
                    note="oracle: no planted concern matches",
                )
            )
    return registry


@dataclass(frozen=True)
class MetricsReport:
    technique: str
    seed_count: int
    candidate_count: int
    per_candidate_quality: Mapping[str, Fraction]
    acceptance_bar: Fraction = ACCEPTANCE_BAR

    @property
    def precision(self) -> Fraction | None:
        if self.candidate_count == 0:
            return None
        return Fraction(100) * Fraction(self.seed_count, self.candidate_count)

    @property
    def absolute_recall(self) -> int:
        return self.seed_count

    @property
    def precision_summary(self) -> str:
        if self.precision is None:
            return "n/a (no candidates)"
        return f"{format_percent(self.precision)} ({self.seed_count}/{self.candidate_count})"

    def to_doc(self) -> dict[str, Any]:
        return {
            "schema": "metrics/1",
            "technique": self.technique,
            "precision": None
            if self.precision is None
            else {
                "seeds": self.seed_count,
                "candidates": self.candidate_count,
                "display": format_percent(self.precision),
                "summary": self.precision_summary,
            },
            "absolute_recall": self.absolute_recall,
            "acceptance_bar": float(self.acceptance_bar),
            "per_candidate_quality": {
                cid: {
                    "numerator": q.numerator,
                    "denominator": q.denominator,
                    "display": format_percent(q),
                }
                for cid, q in sorted(self.per_candidate_quality.items())
            },
        }

    def to_csv(self, registry: SeedRegistry) -> str:
        import csv
        import io

        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["technique", "candidate_id", "verdict", "sort", "quality"])
        for cid in sorted(self.per_candidate_quality):
            current = registry.current(cid)
            writer.writerow(
                [
                    self.technique,
                    cid,
                    current.verdict.value if current else Verdict.UNDECIDED.value,
                    current.sort.value if current and current.sort else "",
                    format_percent(self.per_candidate_quality[cid]),
                ]
            )
        return buf.getvalue()


def _label_for(candidate: Any, registry: SeedRegistry) -> SeedLabel | None:
    current = registry.current(candidate.candidate_id)
    if current is not None:
        return current
    # Combined candidates inherit the verdict of the raw candidate they came
    # from, so labeling the fan-in view once also scores the combinations.
    if isinstance(candidate, CombinedCandidate) and candidate.provenance:
        return registry.current(candidate.provenance[0])
    return None


def compute_metrics(report: TechniqueReport, registry: SeedRegistry) -> MetricsReport:
    """Precision, absolute recall, and per-candidate quality for one report."""
    seed_count = 0
    quality: dict[str, Fraction] = {}
    for candidate in report.candidates:
        current = _label_for(candidate, registry)
        if current is None:
            continue
        if current.verdict is Verdict.SEED:
            seed_count += 1
        quality[candidate.candidate_id] = quality_of(candidate, current)
    return MetricsReport(
        technique=report.technique,
        seed_count=seed_count,
        candidate_count=len(report.candidates),
        per_candidate_quality=quality,
    )


def seed_entries(report: TechniqueReport, registry: SeedRegistry) -> list[SeedEntry]:
    """Labeled seeds of a report in the form the union combiner consumes.

    The identity key is the relevant callee set when the label marks one, the
    candidate's own callees otherwise; redirection seeds key on their class
    pair.
    """
    entries: list[SeedEntry] = []
    for candidate in report.candidates:
        current = registry.current(candidate.candidate_id)
        if current is None or current.verdict is not Verdict.SEED:
            continue
        assert current.sort is not None
        if isinstance(candidate, RedirectionCandidate):
            entries.append(
                SeedEntry(
                    technique=report.technique,
                    candidate_id=candidate.candidate_id,
                    sort=current.sort,
                    pair_key=(candidate.redirector_class, candidate.target_class),
                )
            )
            continue
        if isinstance(candidate, FanInCandidate):
            callees = {candidate.callee}
        elif isinstance(candidate, ConceptCandidate):
            callees = set(current.relevant_callees) or set(candidate.callees)
        else:
            callees = set(candidate.callee_set)
        entries.append(
            SeedEntry(
                technique=report.technique,
                candidate_id=candidate.candidate_id,
                sort=current.sort,
                callees=frozenset(callees),
            )
        )
    return entries
