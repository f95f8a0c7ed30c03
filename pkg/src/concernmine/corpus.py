"""Synthetic fact corpora with planted concerns and a machine-readable truth.

The generator weaves concern structures into a random background call graph:
consistent-behavior and contract-enforcement plants are k callers invoking a
shared target group, redirection plants are a wrapper class forwarding
one-to-one into a core class. The emitted truth file stands in for the human
analyst, letting every miner and combination be scored automatically.

Background noise deliberately never touches planted elements, so a plant's
caller counts are exact by construction. Random "hub" callees can be added
as realistic false-positive bait for the fan-in miner: their callers invoke
nothing else in common, so grouped-calls analysis will not confirm them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .errors import GenerationError
from .facts import CallEdge, FilterConfig, MethodRef, ProgramFacts, Sort, TypeRef

TRUTH_SCHEMA = "truth/1"

UTILITY_CONTAINER = "corpus.util"
TEST_CONTAINER = "corpus.test"


def default_filter_config() -> FilterConfig:
    """Filters matching the generator's utility and test packages, accessors on."""
    return FilterConfig(
        utility_patterns=(f"{UTILITY_CONTAINER}.**", f"{TEST_CONTAINER}.**"),
        accessor_by_name=True,
        accessor_by_impl=True,
    )


@dataclass(frozen=True)
class PlantSpec:
    """One concern to weave into the corpus.

    ``name_seed`` stems the generated element names; it must not collide with
    the accessor naming convention, so ``get``/``set`` prefixes are rejected.
    For consistent-behavior and contract-enforcement plants the caller and
    callee counts apply; for redirection plants the pair counts do.
    """

    sort: Sort
    concern_callers: int = 0
    noise_callers: int = 0
    callee_count: int = 1
    pair_count: int = 0
    eligible_methods: int = 0
    name_match_fraction: float = 1.0
    name_seed: str = ""

    def to_doc(self) -> dict[str, Any]:
        return {
            "sort": self.sort.value,
            "concern_callers": self.concern_callers,
            "noise_callers": self.noise_callers,
            "callee_count": self.callee_count,
            "pair_count": self.pair_count,
            "eligible_methods": self.eligible_methods,
            "name_match_fraction": self.name_match_fraction,
            "name_seed": self.name_seed,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "PlantSpec":
        return cls(
            sort=Sort(doc["sort"]),
            concern_callers=int(doc.get("concern_callers", 0)),
            noise_callers=int(doc.get("noise_callers", 0)),
            callee_count=int(doc.get("callee_count", 1)),
            pair_count=int(doc.get("pair_count", 0)),
            eligible_methods=int(doc.get("eligible_methods", 0)),
            name_match_fraction=float(doc.get("name_match_fraction", 1.0)),
            name_seed=doc.get("name_seed", ""),
        )


@dataclass(frozen=True)
class BackgroundSpec:
    """Size and density of the random call graph around the plants."""

    classes: int = 0
    methods_per_class: int = 6
    call_density: float = 1.0
    accessor_fraction: float = 0.2
    utility_classes: int = 0
    test_classes: int = 0
    utility_methods: int = 4
    hub_count: int = 0
    hub_callers: int = 12

    def to_doc(self) -> dict[str, Any]:
        return {
            "classes": self.classes,
            "methods_per_class": self.methods_per_class,
            "call_density": self.call_density,
            "accessor_fraction": self.accessor_fraction,
            "utility_classes": self.utility_classes,
            "test_classes": self.test_classes,
            "utility_methods": self.utility_methods,
            "hub_count": self.hub_count,
            "hub_callers": self.hub_callers,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "BackgroundSpec":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise GenerationError(f"background spec: unknown field(s) {sorted(unknown)}")
        return cls(**{k: doc[k] for k in doc})


@dataclass(frozen=True)
class PlantedConcern:
    sort: Sort
    callees: tuple[str, ...]
    callers: tuple[str, ...]
    pairs: tuple[tuple[str, str], ...] = ()
    noise: tuple[str, ...] = ()
    redirector_class: str = ""
    target_class: str = ""

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "sort": self.sort.value,
            "callees": list(self.callees),
            "callers": list(self.callers),
            "pairs": [list(p) for p in self.pairs],
            "noise": list(self.noise),
        }
        if self.redirector_class:
            doc["redirector_class"] = self.redirector_class
            doc["target_class"] = self.target_class
        return doc

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "PlantedConcern":
        return cls(
            sort=Sort(doc["sort"]),
            callees=tuple(doc.get("callees", ())),
            callers=tuple(doc.get("callers", ())),
            pairs=tuple((p[0], p[1]) for p in doc.get("pairs", ())),
            noise=tuple(doc.get("noise", ())),
            redirector_class=doc.get("redirector_class", ""),
            target_class=doc.get("target_class", ""),
        )


@dataclass(frozen=True)
class GroundTruth:
    facts_fingerprint: str
    concerns: tuple[PlantedConcern, ...]
    utility_types: tuple[str, ...] = ()
    hub_callees: tuple[str, ...] = ()

    def to_doc(self) -> dict[str, Any]:
        return {
            "schema": TRUTH_SCHEMA,
            "facts_fingerprint": self.facts_fingerprint,
            "concerns": [c.to_doc() for c in self.concerns],
            "background": {
                "utility_types": list(self.utility_types),
                "hub_callees": list(self.hub_callees),
            },
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "GroundTruth":
        if doc.get("schema") != TRUTH_SCHEMA:
            raise GenerationError(
                f"truth document: schema must be {TRUTH_SCHEMA!r}, got {doc.get('schema')!r}"
            )
        background = doc.get("background", {})
        return cls(
            facts_fingerprint=doc["facts_fingerprint"],
            concerns=tuple(PlantedConcern.from_doc(c) for c in doc.get("concerns", ())),
            utility_types=tuple(background.get("utility_types", ())),
            hub_callees=tuple(background.get("hub_callees", ())),
        )


class _Builder:
    def __init__(self) -> None:
        self.types: list[TypeRef] = []
        self.methods: list[MethodRef] = []
        self.calls: list[CallEdge] = []
        self._sites: dict[tuple[str, str], int] = {}

    def add_type(self, qualified_name: str, container: str, kind: str = "class") -> str:
        tid = f"T{len(self.types) + 1:04d}"
        self.types.append(
            TypeRef(id=tid, qualified_name=qualified_name, kind=kind, container=container)
        )
        return tid

    def add_method(self, type_id: str, name: str, **flags: bool) -> str:
        mid = f"M{len(self.methods) + 1:06d}"
        self.methods.append(
            MethodRef(id=mid, declaring_type=type_id, name=name, signature="()", **flags)
        )
        return mid

    def add_call(self, caller: str, callee: str) -> None:
        key = (caller, callee)
        ordinal = self._sites.get(key, 0)
        self._sites[key] = ordinal + 1
        self.calls.append(CallEdge(caller=caller, callee=callee, site_ordinal=ordinal))


def _stem(spec: PlantSpec, index: int) -> str:
    stem = spec.name_seed or f"concern{index}"
    if stem.startswith("get") or stem.startswith("set"):
        raise GenerationError(
            f"plant {index}: name_seed {stem!r} collides with accessor naming"
        )
    return stem


def _plant_behavior(b: _Builder, spec: PlantSpec, index: int) -> PlantedConcern:
    stem = _stem(spec, index)
    if spec.callee_count < 1:
        raise GenerationError(f"plant {index}: callee_count must be >= 1")
    target_type = b.add_type(f"corpus.app.{stem.capitalize()}Target{index}", "corpus.app")
    callees = [
        b.add_method(target_type, f"{stem}_{k}") for k in range(spec.callee_count)
    ]

    callers: list[str] = []
    for j in range(spec.concern_callers):
        if j % 8 == 0:
            caller_type = b.add_type(
                f"corpus.app.{stem.capitalize()}Callers{index}_{j // 8}", "corpus.app"
            )
        caller = b.add_method(caller_type, f"{stem}User{j}")
        for callee in callees:
            b.add_call(caller, callee)
        if spec.sort is Sort.CONTRACT_ENFORCEMENT:
            # work specific to each guarded method, called after the check
            work = b.add_method(caller_type, f"{stem}Body{j}")
            b.add_call(caller, work)
        callers.append(caller)

    noise: list[str] = []
    for j in range(spec.noise_callers):
        if j % 8 == 0:
            noise_type = b.add_type(
                f"corpus.app.{stem.capitalize()}Outside{index}_{j // 8}", "corpus.app"
            )
        outsider = b.add_method(noise_type, f"{stem}Unrelated{j}")
        b.add_call(outsider, callees[0])
        noise.append(outsider)

    return PlantedConcern(
        sort=spec.sort,
        callees=tuple(callees),
        callers=tuple(callers),
        noise=tuple(noise),
    )


def _plant_redirection(b: _Builder, spec: PlantSpec, index: int) -> PlantedConcern:
    stem = _stem(spec, index)
    if spec.pair_count < 1:
        raise GenerationError(f"plant {index}: pair_count must be >= 1")
    if spec.eligible_methods < spec.pair_count:
        raise GenerationError(
            f"plant {index}: eligible_methods ({spec.eligible_methods}) is below "
            f"pair_count ({spec.pair_count})"
        )
    wrapper = b.add_type(f"corpus.app.{stem.capitalize()}Wrapper{index}", "corpus.app")
    core = b.add_type(f"corpus.app.{stem.capitalize()}Core{index}", "corpus.app")
    b.add_method(wrapper, f"{stem.capitalize()}Wrapper{index}", is_constructor=True)
    b.add_method(core, f"{stem.capitalize()}Core{index}", is_constructor=True)

    matched = round(spec.name_match_fraction * spec.pair_count)
    pairs: list[tuple[str, str]] = []
    redirectors: list[str] = []
    targets: list[str] = []
    for k in range(spec.pair_count):
        if k < matched:
            m = b.add_method(wrapper, f"{stem}Fwd{k}")
            n = b.add_method(core, f"{stem}Fwd{k}")
        else:
            m = b.add_method(wrapper, f"{stem}Send{k}")
            n = b.add_method(core, f"{stem}Recv{k}")
        b.add_call(m, n)
        pairs.append((m, n))
        redirectors.append(m)
        targets.append(n)

    extras = [
        b.add_method(wrapper, f"{stem}Local{k}")
        for k in range(spec.eligible_methods - spec.pair_count)
    ]
    return PlantedConcern(
        sort=Sort.REDIRECTION_LAYER,
        callees=tuple(targets),
        callers=tuple(redirectors),
        pairs=tuple(pairs),
        noise=tuple(extras),
        redirector_class=wrapper,
        target_class=core,
    )


def generate(
    plants: Iterable[PlantSpec],
    background: BackgroundSpec,
    rng_seed: int,
) -> tuple[dict[str, Any], GroundTruth]:
    """Emit a ``facts/1`` document and its ground truth, deterministically.

    The same plants, background, and seed always produce byte-identical
    documents. Raises :class:`GenerationError` for unsatisfiable plants.
    """
    rng = random.Random(rng_seed)
    b = _Builder()

    concerns: list[PlantedConcern] = []
    for index, spec in enumerate(plants):
        if spec.sort in (Sort.CONSISTENT_BEHAVIOR, Sort.CONTRACT_ENFORCEMENT):
            concerns.append(_plant_behavior(b, spec, index))
        elif spec.sort is Sort.REDIRECTION_LAYER:
            concerns.append(_plant_redirection(b, spec, index))
        else:
            raise GenerationError(f"plant {index}: no generator for sort {spec.sort.value}")

    hub_callees: list[str] = []
    for h in range(background.hub_count):
        hub_type = b.add_type(f"corpus.app.HubHost{h}", "corpus.app")
        hub = b.add_method(hub_type, f"hubOp{h}")
        hub_callees.append(hub)
        for j in range(background.hub_callers):
            if j % 8 == 0:
                caller_type = b.add_type(f"corpus.app.HubCallers{h}_{j // 8}", "corpus.app")
            b.add_call(b.add_method(caller_type, f"hubUser{h}_{j}"), hub)

    # Plain background: random calls stay inside this pool so planted counts
    # are exact by construction.
    pool: list[str] = []
    for i in range(background.classes):
        tid = b.add_type(f"corpus.app.Background{i}", "corpus.app")
        b.add_method(tid, f"Background{i}", is_constructor=True)
        for j in range(background.methods_per_class):
            if rng.random() < background.accessor_fraction:
                style = rng.randrange(3)
                if style == 0:
                    mid = b.add_method(tid, f"getValue{i}_{j}", returns_single_field=True)
                elif style == 1:
                    mid = b.add_method(tid, f"setValue{i}_{j}", sets_single_field=True)
                else:
                    # accessor only by implementation, name gives nothing away
                    mid = b.add_method(tid, f"current{i}_{j}", returns_single_field=True)
            else:
                mid = b.add_method(tid, f"run{i}_{j}")
            pool.append(mid)

    max_out = max(1, round(2 * background.call_density))
    for caller in list(pool):
        for _ in range(rng.randint(0, max_out)):
            callee = rng.choice(pool)
            if callee != caller:
                b.add_call(caller, callee)

    utility_types: list[str] = []
    for i in range(background.utility_classes):
        tid = b.add_type(f"{UTILITY_CONTAINER}.CollectionWrapper{i}", UTILITY_CONTAINER)
        utility_types.append(tid)
        for j in range(background.utility_methods):
            mid = b.add_method(tid, f"wrap{i}_{j}")
            if pool:
                b.add_call(mid, rng.choice(pool))
                b.add_call(rng.choice(pool), mid)
    for i in range(background.test_classes):
        tid = b.add_type(f"{TEST_CONTAINER}.Case{i}", TEST_CONTAINER)
        utility_types.append(tid)
        for j in range(background.utility_methods):
            mid = b.add_method(tid, f"check{i}_{j}")
            if pool:
                b.add_call(mid, rng.choice(pool))

    model = ProgramFacts(b.types, b.methods, b.calls)
    truth = GroundTruth(
        facts_fingerprint=model.fingerprint,
        concerns=tuple(concerns),
        utility_types=tuple(utility_types),
        hub_callees=tuple(hub_callees),
    )
    return model.canonical_doc(), truth
