"""Grouped-calls analysis via formal concept analysis of the call relation.

Callers are the objects of the context and callees the attributes; a formal
concept is then a maximal group of callees invoked by the same group of
callers. Enumeration uses Close-by-One over bitmask rows, pruning branches
whose extent already fell below the caller threshold (extents only shrink as
intents grow, so no qualifying concept is lost). Accessor callees are kept
through enumeration and only removed at display time; the unfiltered sets
stay available on each candidate as the extended result.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .errors import ContextSizeError, DegenerateCandidateError
from .facts import (
    FilterConfig,
    ProgramFacts,
    accessor_method_ids,
    effective_call_relation,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupedCallsConfig:
    min_callers: int = 10
    min_callees: int = 2
    max_objects: int = 10_000
    max_attributes: int = 10_000

    def __post_init__(self) -> None:
        if self.min_callers < 1:
            raise ValueError("min_callers must be >= 1")
        if self.min_callees < 1:
            raise ValueError("min_callees must be >= 1")


@dataclass(frozen=True)
class FormalContext:
    """Binary caller-invokes-callee relation over the filtered call graph."""

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    incidence: frozenset[tuple[str, str]]


@dataclass(frozen=True)
class ConceptCandidate:
    """A formal concept, possibly narrowed for display.

    ``extended_callees``/``extended_callers`` always hold the full concept
    (intent and extent as enumerated); ``callees`` may be a subset after the
    display-time accessor filter.
    """

    callees: tuple[str, ...]
    callers: tuple[str, ...]
    extended_callees: tuple[str, ...]
    extended_callers: tuple[str, ...]

    @property
    def callee_count(self) -> int:
        return len(self.callees)

    @property
    def caller_count(self) -> int:
        return len(self.callers)

    @property
    def candidate_id(self) -> str:
        from .reports import content_id

        return content_id(
            "grouped",
            {
                "callees": list(self.extended_callees),
                "callers": list(self.extended_callers),
            },
        )

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.candidate_id,
            "callees": list(self.callees),
            "callers": list(self.callers),
            "extended_callees": list(self.extended_callees),
            "extended_callers": list(self.extended_callers),
            "callee_count": self.callee_count,
            "caller_count": self.caller_count,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "ConceptCandidate":
        return cls(
            callees=tuple(doc["callees"]),
            callers=tuple(doc["callers"]),
            extended_callees=tuple(doc["extended_callees"]),
            extended_callers=tuple(doc["extended_callers"]),
        )


def build_context(facts: ProgramFacts, filter_cfg: FilterConfig) -> FormalContext:
    """Context over the utility-filtered relation; accessors are retained."""
    relation = effective_call_relation(facts, filter_cfg)
    return FormalContext(
        objects=relation.caller_ids(),
        attributes=relation.callee_ids(),
        incidence=frozenset((e.caller, e.callee) for e in relation.edges),
    )


def _bit_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def enumerate_concepts(
    ctx: FormalContext, cfg: GroupedCallsConfig
) -> list[ConceptCandidate]:
    """All formal concepts meeting both size thresholds, canonically ordered.

    Ordering is extent size descending, then intent ids ascending, so results
    do not depend on enumeration order. Raises :class:`ContextSizeError` when
    the context exceeds the configured guardrail.
    """
    n, m = len(ctx.objects), len(ctx.attributes)
    if n > cfg.max_objects or m > cfg.max_attributes:
        raise ContextSizeError(
            f"context is {n}x{m}; guardrail is "
            f"{cfg.max_objects}x{cfg.max_attributes} (raise the cap to proceed)"
        )
    if n == 0 or m == 0 or n < cfg.min_callers:
        return []

    obj_index = {o: i for i, o in enumerate(ctx.objects)}
    attr_index = {a: j for j, a in enumerate(ctx.attributes)}
    obj_rows = [0] * n
    attr_cols = [0] * m
    for obj, attr in ctx.incidence:
        i, j = obj_index[obj], attr_index[attr]
        obj_rows[i] |= 1 << j
        attr_cols[j] |= 1 << i

    full_extent = (1 << n) - 1
    full_intent = (1 << m) - 1

    def intent_of(extent: int) -> int:
        if extent == 0:
            return full_intent
        result = full_intent
        while extent and result:
            low = extent & -extent
            result &= obj_rows[low.bit_length() - 1]
            extent ^= low
        return result

    concepts: list[tuple[int, int]] = []
    top_intent = intent_of(full_extent)
    concepts.append((full_extent, top_intent))
    # Close-by-One, iteratively: each frame retries attributes from next_j on.
    stack: list[tuple[int, int, int]] = [(full_extent, top_intent, 0)]
    while stack:
        extent, intent, j = stack.pop()
        if j >= m:
            continue
        stack.append((extent, intent, j + 1))
        if (intent >> j) & 1:
            continue
        new_extent = extent & attr_cols[j]
        if new_extent.bit_count() < cfg.min_callers:
            continue
        new_intent = intent_of(new_extent)
        below = (1 << j) - 1
        if (new_intent & below) == (intent & below):
            concepts.append((new_extent, new_intent))
            stack.append((new_extent, new_intent, j + 1))

    out: list[ConceptCandidate] = []
    for extent, intent in concepts:
        if intent.bit_count() < cfg.min_callees or extent.bit_count() < cfg.min_callers:
            continue
        callers = tuple(ctx.objects[i] for i in _bit_indices(extent))
        callees = tuple(ctx.attributes[j] for j in _bit_indices(intent))
        out.append(
            ConceptCandidate(
                callees=callees,
                callers=callers,
                extended_callees=callees,
                extended_callers=callers,
            )
        )
    out.sort(key=lambda c: (-c.caller_count, c.callees))
    return out


def display_filter(
    facts: ProgramFacts,
    c: ConceptCandidate,
    filter_cfg: FilterConfig,
    cfg: GroupedCallsConfig,
) -> ConceptCandidate | None:
    """Drop accessor callees from the displayed group, keeping the extended sets.

    Returns ``None`` when the remaining group falls below the callee threshold.
    Callers are never touched here.
    """
    accessors = accessor_method_ids(facts, filter_cfg)
    kept = tuple(a for a in c.callees if a not in accessors)
    if len(kept) < cfg.min_callees:
        return None
    return ConceptCandidate(
        callees=kept,
        callers=c.callers,
        extended_callees=c.extended_callees,
        extended_callers=c.extended_callers,
    )


def mine_grouped(
    facts: ProgramFacts, filter_cfg: FilterConfig, cfg: GroupedCallsConfig
) -> list[ConceptCandidate]:
    """Full pipeline: build context, enumerate, apply the display filter."""
    ctx = build_context(facts, filter_cfg)
    out = []
    for c in enumerate_concepts(ctx, cfg):
        filtered = display_filter(facts, c, filter_cfg, cfg)
        if filtered is not None:
            out.append(filtered)
    return out


def grouped_seed_quality(
    c: ConceptCandidate,
    valid_callers: Iterable[str],
    relevant_callees: Iterable[str],
) -> Fraction:
    """Product of the validated-caller ratio and the relevant-callee ratio.

    Entries outside the candidate are ignored with a warning; an empty caller
    or callee set on the candidate itself is an error.
    """
    callers = set(c.callers)
    callees = set(c.callees)
    if not callers or not callees:
        raise DegenerateCandidateError("concept candidate has an empty element set")
    valid = set(valid_callers)
    relevant = set(relevant_callees)
    stray = (valid - callers) | (relevant - set(c.extended_callees))
    if stray:
        logger.warning("ignoring %d element(s) not part of the candidate", len(stray))
    return (
        Fraction(100)
        * Fraction(len(valid & callers), len(callers))
        * Fraction(len(relevant & callees), len(callees))
    )
