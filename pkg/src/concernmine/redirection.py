"""Redirection-layer detection: classes that one-to-one forward calls to another class.

A pair (m in C, n in D) qualifies when m calls n and nothing else in D, and no
other method of C calls n. Classes with enough such pairs, both absolutely
and as a share of their eligible methods, are reported as candidates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .errors import DegenerateCandidateError
from .facts import (
    FilterConfig,
    ProgramFacts,
    accessor_method_ids,
    effective_call_relation,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RedirectionConfig:
    min_redirectors: int = 3
    min_percentage: float = 0.50
    require_name_match: bool = False

    def __post_init__(self) -> None:
        if self.min_redirectors < 1:
            raise ValueError("min_redirectors must be >= 1")
        if not (0 < self.min_percentage <= 1):
            raise ValueError("min_percentage must be in (0, 1]")


@dataclass(frozen=True, order=True)
class RedirectionPair:
    redirector: str
    target: str


@dataclass(frozen=True)
class RedirectionCandidate:
    redirector_class: str
    target_class: str
    pairs: tuple[RedirectionPair, ...]
    name_matches: tuple[bool, ...]  # parallel to pairs
    class_method_count: int
    declared_method_count: int

    @property
    def pair_count(self) -> int:
        return len(self.pairs)

    @property
    def redirector_percentage(self) -> float:
        return len(self.pairs) / self.class_method_count

    @property
    def candidate_id(self) -> str:
        from .reports import content_id

        return content_id(
            "redirect",
            {
                "redirector_class": self.redirector_class,
                "target_class": self.target_class,
                "pairs": [[p.redirector, p.target] for p in self.pairs],
            },
        )

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.candidate_id,
            "redirector_class": self.redirector_class,
            "target_class": self.target_class,
            "pairs": [
                {"redirector": p.redirector, "target": p.target, "name_match": match}
                for p, match in zip(self.pairs, self.name_matches)
            ],
            "pair_count": self.pair_count,
            "class_method_count": self.class_method_count,
            "declared_method_count": self.declared_method_count,
            "redirector_percentage": self.redirector_percentage,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "RedirectionCandidate":
        return cls(
            redirector_class=doc["redirector_class"],
            target_class=doc["target_class"],
            pairs=tuple(
                RedirectionPair(p["redirector"], p["target"]) for p in doc["pairs"]
            ),
            name_matches=tuple(p.get("name_match", False) for p in doc["pairs"]),
            class_method_count=doc["class_method_count"],
            declared_method_count=doc["declared_method_count"],
        )


def mine_redirections(
    facts: ProgramFacts, filter_cfg: FilterConfig, cfg: RedirectionConfig
) -> list[RedirectionCandidate]:
    """Report every ordered class pair whose one-to-one forwards pass both thresholds.

    The percentage denominator counts the redirector class's declared methods
    minus constructors, and minus accessors when accessor filtering is on;
    redirector methods themselves are held to the same eligibility rule so
    the percentage can never exceed one. The raw declared count is kept on
    the candidate for transparency.
    """
    relation = effective_call_relation(facts, filter_cfg)
    accessors = accessor_method_ids(facts, filter_cfg)

    def eligible(mid: str) -> bool:
        return not facts.method(mid).is_constructor and mid not in accessors

    # callee sets per (caller method, callee class) and caller sets per callee method
    targets_by_class: dict[tuple[str, str], set[str]] = {}
    for e in relation.edges:
        callee_class = facts.method(e.callee).declaring_type
        targets_by_class.setdefault((e.caller, callee_class), set()).add(e.callee)

    candidates: list[RedirectionCandidate] = []
    class_pairs = sorted(
        {
            (facts.method(m).declaring_type, d)
            for (m, d) in targets_by_class
            if facts.method(m).declaring_type != d
        }
    )
    for c_class, d_class in class_pairs:
        c_methods = facts.methods_of_type(c_class)
        pairs: list[RedirectionPair] = []
        for m in c_methods:
            targets = targets_by_class.get((m, d_class))
            if targets is None or len(targets) != 1 or not eligible(m):
                continue
            n = next(iter(targets))
            callers_in_c = {
                caller
                for caller in relation.callers_of(n)
                if facts.method(caller).declaring_type == c_class
            }
            if callers_in_c != {m}:
                continue
            if cfg.require_name_match and facts.method(m).name != facts.method(n).name:
                continue
            pairs.append(RedirectionPair(redirector=m, target=n))
        if len(pairs) < cfg.min_redirectors:
            continue
        eligible_count = sum(1 for m in c_methods if eligible(m))
        if len(pairs) / eligible_count < cfg.min_percentage:
            continue
        pairs.sort()
        candidates.append(
            RedirectionCandidate(
                redirector_class=c_class,
                target_class=d_class,
                pairs=tuple(pairs),
                name_matches=tuple(
                    facts.method(p.redirector).name == facts.method(p.target).name
                    for p in pairs
                ),
                class_method_count=eligible_count,
                declared_method_count=len(c_methods),
            )
        )
    candidates.sort(key=lambda c: (-c.pair_count, c.redirector_class, c.target_class))
    return candidates


def redirection_seed_quality(
    c: RedirectionCandidate, valid_pairs: Iterable[RedirectionPair]
) -> Fraction:
    """Percentage of reported pairs validated as part of the redirection concern."""
    pairs = set(c.pairs)
    if not pairs:
        raise DegenerateCandidateError(
            f"candidate {c.redirector_class}->{c.target_class} has no pairs"
        )
    valid = set(valid_pairs)
    stray = valid - pairs
    if stray:
        logger.warning("ignoring %d pair(s) not part of the candidate", len(stray))
    return Fraction(100) * Fraction(len(valid & pairs), len(pairs))
