"""Fan-in analysis: report widely-called methods as candidate-seeds.

A candidate is a callee together with its distinct callers in the filtered
call relation. Self-recursive edges never count: a method calling itself is
not a scattered invocation site.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .errors import DegenerateCandidateError
from .facts import (
    CallRelation,
    FilterConfig,
    ProgramFacts,
    accessor_method_ids,
    effective_call_relation,
    is_utility,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FanInConfig:
    min_callers: int = 10

    def __post_init__(self) -> None:
        if self.min_callers < 1:
            raise ValueError("min_callers must be >= 1")


@dataclass(frozen=True)
class FanInCandidate:
    callee: str
    callers: tuple[str, ...]
    call_site_count: int

    @property
    def caller_count(self) -> int:
        return len(self.callers)

    @property
    def candidate_id(self) -> str:
        from .reports import content_id

        return content_id("fanin", {"callee": self.callee, "callers": list(self.callers)})

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.candidate_id,
            "callee": self.callee,
            "callers": list(self.callers),
            "call_site_count": self.call_site_count,
            "caller_count": self.caller_count,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "FanInCandidate":
        return cls(
            callee=doc["callee"],
            callers=tuple(doc["callers"]),
            call_site_count=doc["call_site_count"],
        )


def _counts(relation: CallRelation, method_id: str) -> tuple[int, int]:
    incoming = [e for e in relation.incoming(method_id) if e.caller != method_id]
    callers = {e.caller for e in incoming}
    return len(incoming), len(callers)


def fan_in(facts: ProgramFacts, cfg: FilterConfig, method_id: str) -> tuple[int, int]:
    """(distinct call sites, distinct callers) for one method, self-calls excluded.

    Raises :class:`UnknownElementError` for an id outside the model.
    """
    facts.method(method_id)
    return _counts(effective_call_relation(facts, cfg), method_id)


def mine_fanin(
    facts: ProgramFacts, filter_cfg: FilterConfig, fanin_cfg: FanInConfig
) -> list[FanInCandidate]:
    """All methods whose distinct-caller count meets the threshold.

    Utility and accessor callees are suppressed entirely. Output is sorted by
    caller count descending, then callee id, so runs are reproducible.
    """
    relation = effective_call_relation(facts, filter_cfg)
    accessors = accessor_method_ids(facts, filter_cfg)
    candidates: list[FanInCandidate] = []
    for callee in relation.callee_ids():
        if callee in accessors or is_utility(facts, callee, filter_cfg):
            continue
        site_count, caller_count = _counts(relation, callee)
        if caller_count < fanin_cfg.min_callers:
            continue
        callers = tuple(sorted(c for c in relation.callers_of(callee) if c != callee))
        candidates.append(
            FanInCandidate(callee=callee, callers=callers, call_site_count=site_count)
        )
    candidates.sort(key=lambda c: (-c.caller_count, c.callee))
    return candidates


def fanin_seed_quality(c: FanInCandidate, valid_callers: Iterable[str]) -> Fraction:
    """Percentage of the candidate's callers validated as crosscut elements.

    Entries outside the candidate's caller set are ignored with a warning.
    Returns an exact fraction in [0, 100].
    """
    callers = set(c.callers)
    if not callers:
        raise DegenerateCandidateError(f"candidate for {c.callee} has no callers")
    valid = set(valid_callers)
    stray = valid - callers
    if stray:
        logger.warning(
            "ignoring %d validated caller(s) not part of candidate %s", len(stray), c.callee
        )
    return Fraction(100) * Fraction(len(valid & callers), len(callers))
