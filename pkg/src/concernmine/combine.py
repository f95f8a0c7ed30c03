"""Combinations of technique outputs.

Three combination modes, each improving a different metric: intersecting
fan-in with grouped-calls results raises precision, taking the union of
labeled seeds across techniques raises absolute recall, and replacing a
fan-in candidate's callers with the best-overlapping concept extent raises
per-candidate seed quality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .concepts import ConceptCandidate
from .errors import NotRefinableError
from .facts import Sort
from .fanin import FanInCandidate
from .reports import check_same_fingerprint, content_id

ORIGIN_FANIN = "fanin"
ORIGIN_GROUPED = "grouped"
ORIGIN_REDIRECTION = "redirection"
ORIGIN_INTERSECT = "fanin+grouped"
ORIGIN_REFINED = "refined"

# Consistent behavior and contract enforcement share their implementation
# idiom and are told apart only by human intent-reading, so seed identity
# treats them as one family.
_FAMILY_OF_SORT = {
    Sort.CONSISTENT_BEHAVIOR: "cb_ce",
    Sort.CONTRACT_ENFORCEMENT: "cb_ce",
    Sort.REDIRECTION_LAYER: "redirection",
    Sort.ROLE_SUPERIMPOSITION: "role",
}


@dataclass(frozen=True)
class CombinedCandidate:
    origin: str
    callee_set: tuple[str, ...]
    callers: tuple[str, ...]
    provenance: tuple[str, ...]

    @property
    def caller_count(self) -> int:
        return len(self.callers)

    @property
    def candidate_id(self) -> str:
        return content_id(
            "combined",
            {
                "origin": self.origin,
                "callee_set": list(self.callee_set),
                "callers": list(self.callers),
            },
        )

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.candidate_id,
            "origin": self.origin,
            "callee_set": list(self.callee_set),
            "callers": list(self.callers),
            "caller_count": self.caller_count,
            "provenance": list(self.provenance),
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "CombinedCandidate":
        return cls(
            origin=doc["origin"],
            callee_set=tuple(doc["callee_set"]),
            callers=tuple(doc["callers"]),
            provenance=tuple(doc["provenance"]),
        )


def grouped_callee_union(concept_candidates: Sequence[ConceptCandidate]) -> frozenset[str]:
    """All callees grouped by at least one concept; the intersection membership test."""
    out: set[str] = set()
    for gc in concept_candidates:
        out.update(gc.callees)
    return frozenset(out)


def intersect_fanin_grouped(
    fi: Sequence[FanInCandidate],
    gc: Sequence[ConceptCandidate],
    *,
    fi_fingerprint: str | None = None,
    gc_fingerprint: str | None = None,
) -> list[CombinedCandidate]:
    """Fan-in candidates whose callee is grouped by at least one concept.

    A pure filter over the fan-in list: callers come from the fan-in side,
    provenance records the fan-in candidate and every concept grouping the
    callee.
    """
    check_same_fingerprint(fi_fingerprint, gc_fingerprint)
    member_callees = grouped_callee_union(gc)
    out: list[CombinedCandidate] = []
    for cand in fi:
        if cand.callee not in member_callees:
            continue
        witnesses = sorted(
            g.candidate_id for g in gc if cand.callee in g.callees
        )
        out.append(
            CombinedCandidate(
                origin=ORIGIN_INTERSECT,
                callee_set=(cand.callee,),
                callers=cand.callers,
                provenance=(cand.candidate_id, *witnesses),
            )
        )
    return out


def refine_callers(
    fi_candidate: FanInCandidate, gc: Sequence[ConceptCandidate]
) -> CombinedCandidate:
    """Adopt the callers of the concept overlapping the candidate's callers most.

    Ties go to the smaller extent, then to canonical id order. Raises
    :class:`NotRefinableError` when no concept groups the callee; callers of
    the raw candidate are the fallback in that case.
    """
    fi_callers = set(fi_candidate.callers)
    containing = [g for g in gc if fi_candidate.callee in g.callees]
    if not containing:
        raise NotRefinableError(
            f"callee {fi_candidate.callee} occurs in no grouped-calls candidate"
        )
    best = min(
        containing,
        key=lambda g: (
            -len(fi_callers & set(g.callers)),
            len(g.callers),
            g.callees,
            g.callers,
        ),
    )
    return CombinedCandidate(
        origin=ORIGIN_REFINED,
        callee_set=(fi_candidate.callee,),
        callers=best.callers,
        provenance=(fi_candidate.candidate_id, best.candidate_id),
    )


def refine_all(
    fi: Sequence[FanInCandidate],
    gc: Sequence[ConceptCandidate],
    *,
    fi_fingerprint: str | None = None,
    gc_fingerprint: str | None = None,
) -> list[CombinedCandidate]:
    """Refine every fan-in candidate, falling back to its own callers when not refinable."""
    check_same_fingerprint(fi_fingerprint, gc_fingerprint)
    out: list[CombinedCandidate] = []
    for cand in fi:
        try:
            out.append(refine_callers(cand, gc))
        except NotRefinableError:
            out.append(
                CombinedCandidate(
                    origin=ORIGIN_FANIN,
                    callee_set=(cand.callee,),
                    callers=cand.callers,
                    provenance=(cand.candidate_id,),
                )
            )
    return out


@dataclass(frozen=True)
class SeedEntry:
    """One labeled seed as fed into a union: identity data plus provenance."""

    technique: str
    candidate_id: str
    sort: Sort
    callees: frozenset[str] = frozenset()
    pair_key: tuple[str, str] | None = None


@dataclass(frozen=True)
class SeedIdentity:
    sort_family: str
    callees: frozenset[str] = frozenset()
    pair_key: tuple[str, str] | None = None

    @classmethod
    def of(cls, seed: SeedEntry) -> "SeedIdentity":
        return cls(
            sort_family=_FAMILY_OF_SORT[seed.sort],
            callees=seed.callees,
            pair_key=seed.pair_key,
        )

    def same_concern(self, other: "SeedIdentity") -> bool:
        if self.sort_family != other.sort_family:
            return False
        if self.pair_key is not None or other.pair_key is not None:
            return self.pair_key == other.pair_key
        return bool(self.callees & other.callees)


@dataclass(frozen=True)
class UnionGroup:
    sort_family: str
    members: tuple[tuple[str, str], ...]  # (technique, candidate_id)
    callees: tuple[str, ...]
    pair_key: tuple[str, str] | None = None


@dataclass(frozen=True)
class UnionResult:
    groups: tuple[UnionGroup, ...]

    @property
    def count(self) -> int:
        return len(self.groups)

    @property
    def merge_trace(self) -> tuple[UnionGroup, ...]:
        return tuple(g for g in self.groups if len(g.members) > 1)

    def to_doc(self) -> dict[str, Any]:
        return {
            "schema": "report/1",
            "technique": "union",
            "distinct_seeds": self.count,
            "groups": [
                {
                    "sort_family": g.sort_family,
                    "members": [list(m) for m in g.members],
                    "callees": list(g.callees),
                    **({"pair": list(g.pair_key)} if g.pair_key else {}),
                }
                for g in self.groups
            ],
            "merge_trace": [
                [list(m) for m in g.members] for g in self.merge_trace
            ],
        }


def union_seeds(seed_sets: Sequence[tuple[str, Sequence[SeedEntry]]]) -> UnionResult:
    """Union labeled seeds across techniques, merging those naming one concern.

    Identity is transitive by design: seeds whose callee sets chain together
    through shared members end up in a single group. The group count is the
    absolute recall of the combination and does not depend on input order.
    """
    entries: list[SeedEntry] = []
    for technique, seeds in seed_sets:
        for seed in seeds:
            entries.append(seed)
    entries.sort(key=lambda s: (s.technique, s.candidate_id))

    parent = list(range(len(entries)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    identities = [SeedIdentity.of(s) for s in entries]
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if identities[i].same_concern(identities[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri

    clusters: dict[int, list[int]] = {}
    for i in range(len(entries)):
        clusters.setdefault(find(i), []).append(i)

    groups: list[UnionGroup] = []
    for member_ids in clusters.values():
        members = tuple(
            sorted((entries[i].technique, entries[i].candidate_id) for i in member_ids)
        )
        callees: set[str] = set()
        pair_key = None
        for i in member_ids:
            callees.update(entries[i].callees)
            if entries[i].pair_key is not None:
                pair_key = entries[i].pair_key
        groups.append(
            UnionGroup(
                sort_family=identities[member_ids[0]].sort_family,
                members=members,
                callees=tuple(sorted(callees)),
                pair_key=pair_key,
            )
        )
    groups.sort(key=lambda g: (g.sort_family, g.members))
    return UnionResult(groups=tuple(groups))
