"""Crosscutting-concern mining over language-agnostic program facts.

Three generative miners (fan-in, grouped-calls, redirections) share one fact
model and one assessment vocabulary, so their results can be intersected,
unioned, and refined, and scored with the same precision / absolute-recall /
seed-quality metrics.
"""

from .facts import (
    CallEdge,
    FilterConfig,
    MethodRef,
    ProgramFacts,
    Sort,
    TypeRef,
    effective_call_relation,
    is_accessor,
    is_utility,
    load_facts,
)
from .fanin import FanInCandidate, FanInConfig, fan_in, fanin_seed_quality, mine_fanin
from .concepts import (
    ConceptCandidate,
    FormalContext,
    GroupedCallsConfig,
    build_context,
    display_filter,
    enumerate_concepts,
    grouped_seed_quality,
    mine_grouped,
)
from .redirection import (
    RedirectionCandidate,
    RedirectionConfig,
    RedirectionPair,
    mine_redirections,
    redirection_seed_quality,
)
from .combine import (
    CombinedCandidate,
    SeedEntry,
    SeedIdentity,
    UnionResult,
    intersect_fanin_grouped,
    refine_all,
    refine_callers,
    union_seeds,
)
from .assessment import (
    MetricsReport,
    SeedLabel,
    SeedRegistry,
    Verdict,
    auto_label_from_ground_truth,
    compute_metrics,
    label,
)
from .corpus import BackgroundSpec, GroundTruth, PlantSpec, generate

__version__ = "0.1.0"

__all__ = [
    "BackgroundSpec",
    "CallEdge",
    "CombinedCandidate",
    "ConceptCandidate",
    "FanInCandidate",
    "FanInConfig",
    "FilterConfig",
    "FormalContext",
    "GroundTruth",
    "GroupedCallsConfig",
    "MethodRef",
    "MetricsReport",
    "PlantSpec",
    "ProgramFacts",
    "RedirectionCandidate",
    "RedirectionConfig",
    "RedirectionPair",
    "SeedEntry",
    "SeedIdentity",
    "SeedLabel",
    "SeedRegistry",
    "Sort",
    "TypeRef",
    "UnionResult",
    "Verdict",
    "auto_label_from_ground_truth",
    "build_context",
    "compute_metrics",
    "display_filter",
    "effective_call_relation",
    "enumerate_concepts",
    "fan_in",
    "fanin_seed_quality",
    "generate",
    "grouped_seed_quality",
    "intersect_fanin_grouped",
    "is_accessor",
    "is_utility",
    "label",
    "load_facts",
    "mine_fanin",
    "mine_grouped",
    "mine_redirections",
    "redirection_seed_quality",
    "refine_all",
    "refine_callers",
    "union_seeds",
]
