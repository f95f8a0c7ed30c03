"""Report documents shared by the CLI, the triage service, and combinations.

Every analysis result is wrapped in a ``report/1`` document carrying the full
effective configuration and the fingerprint of the facts it was computed
from, so downstream steps can refuse mismatched inputs. Candidate ids are
content hashes: re-running an analysis with identical configuration yields
identical ids, which is what lets stored labels survive re-runs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .errors import FactsSchemaError
from .facts import canonical_json

REPORT_SCHEMA = "report/1"

TECHNIQUE_FANIN = "fanin"
TECHNIQUE_GROUPED = "grouped"
TECHNIQUE_REDIRECT = "redirect"
TECHNIQUE_INTERSECT = "fanin+grouped"
TECHNIQUE_REFINED = "refined"


def content_id(kind: str, payload: Mapping[str, Any]) -> str:
    digest = hashlib.sha256(
        canonical_json({"kind": kind, **payload}).encode("utf-8")
    ).hexdigest()
    return digest[:16]


@dataclass(frozen=True)
class TechniqueReport:
    technique: str
    facts_fingerprint: str
    config: Mapping[str, Any]
    candidates: tuple[Any, ...]

    def candidate_index(self) -> dict[str, Any]:
        return {c.candidate_id: c for c in self.candidates}

    def to_doc(self) -> dict[str, Any]:
        docs = []
        for c in self.candidates:
            docs.append(c.to_doc())
        return {
            "schema": REPORT_SCHEMA,
            "technique": self.technique,
            "facts_fingerprint": self.facts_fingerprint,
            "config": dict(self.config),
            "candidates": docs,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "TechniqueReport":
        from .combine import CombinedCandidate
        from .concepts import ConceptCandidate
        from .fanin import FanInCandidate
        from .redirection import RedirectionCandidate

        if doc.get("schema") != REPORT_SCHEMA:
            raise FactsSchemaError(
                f"report document: schema must be {REPORT_SCHEMA!r}, got {doc.get('schema')!r}"
            )
        technique = doc.get("technique")
        parsers = {
            TECHNIQUE_FANIN: FanInCandidate.from_doc,
            TECHNIQUE_GROUPED: ConceptCandidate.from_doc,
            TECHNIQUE_REDIRECT: RedirectionCandidate.from_doc,
            TECHNIQUE_INTERSECT: CombinedCandidate.from_doc,
            TECHNIQUE_REFINED: CombinedCandidate.from_doc,
        }
        if technique not in parsers:
            raise FactsSchemaError(f"report document: unknown technique {technique!r}")
        parse = parsers[technique]
        return cls(
            technique=technique,
            facts_fingerprint=doc.get("facts_fingerprint", ""),
            config=dict(doc.get("config", {})),
            candidates=tuple(parse(c) for c in doc.get("candidates", ())),
        )


def dump_document(doc: Mapping[str, Any], path: str | Path) -> None:
    """Write a document deterministically: sorted keys, two-space indent."""
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load_document(path: str | Path) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_report(path: str | Path) -> TechniqueReport:
    return TechniqueReport.from_doc(load_document(path))


def dump_report(report: TechniqueReport, path: str | Path) -> None:
    dump_document(report.to_doc(), path)


def check_same_fingerprint(*fingerprints: str | None) -> str | None:
    """Raise when two known fingerprints differ; returns the common one."""
    from .errors import ConfigMismatchError

    known = [f for f in fingerprints if f]
    for f in known[1:]:
        if f != known[0]:
            raise ConfigMismatchError(
                f"inputs come from different facts: {known[0][:12]} vs {f[:12]}"
            )
    return known[0] if known else None
