"""Program-fact model: types, methods, call edges, and filtered call relations.

Facts are ingested from a JSON document (schema ``facts/1``) emitted by an
external fact extractor; no source language is parsed here. The loaded model
is immutable and canonically ordered, so any two documents describing the
same system produce byte-identical serializations and fingerprints no matter
how their records were ordered on disk.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import (
    FactsResolutionError,
    FactsSchemaError,
    UnknownElementError,
)

FACTS_SCHEMA = "facts/1"

TYPE_KIND_CLASS = "class"
TYPE_KIND_INTERFACE = "interface"


class Sort(str, Enum):
    """Closed vocabulary of crosscutting-concern sorts used when labeling seeds."""

    CONSISTENT_BEHAVIOR = "consistent_behavior"
    CONTRACT_ENFORCEMENT = "contract_enforcement"
    REDIRECTION_LAYER = "redirection_layer"
    ROLE_SUPERIMPOSITION = "role_superimposition"


@dataclass(frozen=True)
class TypeRef:
    id: str
    qualified_name: str
    kind: str
    container: str = ""


@dataclass(frozen=True)
class MethodRef:
    id: str
    declaring_type: str
    name: str
    signature: str = ""
    is_constructor: bool = False
    sets_single_field: bool = False
    returns_single_field: bool = False


@dataclass(frozen=True, order=True)
class CallEdge:
    caller: str
    callee: str
    site_ordinal: int = 0
    location: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class FilterConfig:
    """Utility and accessor filter settings.

    Utility patterns are globs over dotted qualified names: ``*`` matches any
    run of characters within one segment, ``**`` matches across segments. An
    empty pattern list disables utility filtering entirely.
    """

    utility_patterns: tuple[str, ...] = ()
    accessor_by_name: bool = False
    accessor_by_impl: bool = False

    @property
    def accessor_filtering(self) -> bool:
        return self.accessor_by_name or self.accessor_by_impl

    def to_doc(self) -> dict[str, Any]:
        return {
            "utility_patterns": list(self.utility_patterns),
            "accessor_by_name": self.accessor_by_name,
            "accessor_by_impl": self.accessor_by_impl,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "FilterConfig":
        return cls(
            utility_patterns=tuple(doc.get("utility_patterns", ())),
            accessor_by_name=bool(doc.get("accessor_by_name", False)),
            accessor_by_impl=bool(doc.get("accessor_by_impl", False)),
        )


@lru_cache(maxsize=1024)
def _compile_pattern(pattern: str) -> re.Pattern[str]:
    out: list[str] = []
    i = 0
    while i < len(pattern):
        if pattern.startswith("**", i):
            out.append(".*")
            i += 2
        elif pattern[i] == "*":
            out.append("[^.]*")
            i += 1
        else:
            out.append(re.escape(pattern[i]))
            i += 1
    return re.compile("^" + "".join(out) + "$")


def _matches_any(name: str, patterns: Iterable[str]) -> bool:
    return any(_compile_pattern(p).match(name) for p in patterns)


class CallRelation:
    """An immutable set of call edges with caller/callee indexes.

    The indexes are exact inversions of the edge set; ``incoming`` keeps the
    raw edges per callee so distinct call sites can be counted.
    """

    def __init__(self, edges: Iterable[CallEdge]):
        self._edge_set = frozenset(edges)
        self._edges = tuple(
            sorted(self._edge_set, key=lambda e: (e.caller, e.callee, e.site_ordinal))
        )
        callers: dict[str, set[str]] = {}
        callees: dict[str, set[str]] = {}
        incoming: dict[str, list[CallEdge]] = {}
        for e in self._edges:
            callees.setdefault(e.caller, set()).add(e.callee)
            callers.setdefault(e.callee, set()).add(e.caller)
            incoming.setdefault(e.callee, []).append(e)
        self._callers_of = {m: frozenset(s) for m, s in callers.items()}
        self._callees_of = {m: frozenset(s) for m, s in callees.items()}
        self._incoming = {m: tuple(es) for m, es in incoming.items()}

    @property
    def edges(self) -> tuple[CallEdge, ...]:
        return self._edges

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, edge: CallEdge) -> bool:
        return edge in self._edge_set

    def callers_of(self, method_id: str) -> frozenset[str]:
        return self._callers_of.get(method_id, frozenset())

    def callees_of(self, method_id: str) -> frozenset[str]:
        return self._callees_of.get(method_id, frozenset())

    def incoming(self, method_id: str) -> tuple[CallEdge, ...]:
        return self._incoming.get(method_id, ())

    def caller_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._callees_of))

    def callee_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._callers_of))


class ProgramFacts:
    """Immutable model of an analyzed system.

    Construct through :func:`load_facts`; the constructor assumes records are
    already validated and resolved.
    """

    def __init__(
        self,
        types: Iterable[TypeRef],
        methods: Iterable[MethodRef],
        calls: Iterable[CallEdge],
    ):
        self._types = {t.id: t for t in sorted(types, key=lambda t: t.id)}
        self._methods = {m.id: m for m in sorted(methods, key=lambda m: m.id)}
        self._relation = CallRelation(calls)
        by_type: dict[str, list[str]] = {t: [] for t in self._types}
        for m in self._methods.values():
            by_type[m.declaring_type].append(m.id)
        self._methods_of_type = {t: tuple(ms) for t, ms in by_type.items()}
        self._fingerprint: str | None = None

    @property
    def types(self) -> Mapping[str, TypeRef]:
        return self._types

    @property
    def methods(self) -> Mapping[str, MethodRef]:
        return self._methods

    @property
    def calls(self) -> tuple[CallEdge, ...]:
        return self._relation.edges

    @property
    def relation(self) -> CallRelation:
        return self._relation

    def type(self, type_id: str) -> TypeRef:
        try:
            return self._types[type_id]
        except KeyError:
            raise UnknownElementError(f"unknown type id: {type_id!r}") from None

    def method(self, method_id: str) -> MethodRef:
        try:
            return self._methods[method_id]
        except KeyError:
            raise UnknownElementError(f"unknown method id: {method_id!r}") from None

    def methods_of_type(self, type_id: str) -> tuple[str, ...]:
        self.type(type_id)
        return self._methods_of_type.get(type_id, ())

    def callers_of(self, method_id: str) -> frozenset[str]:
        return self._relation.callers_of(method_id)

    def callees_of(self, method_id: str) -> frozenset[str]:
        return self._relation.callees_of(method_id)

    def qualified_method_name(self, method_id: str) -> str:
        m = self.method(method_id)
        return f"{self.type(m.declaring_type).qualified_name}.{m.name}"

    def canonical_doc(self) -> dict[str, Any]:
        """Canonical document form: records sorted by id, defaults materialized."""
        return {
            "schema": FACTS_SCHEMA,
            "types": [
                {
                    "id": t.id,
                    "qualified_name": t.qualified_name,
                    "kind": t.kind,
                    "container": t.container,
                }
                for t in self._types.values()
            ],
            "methods": [
                {
                    "id": m.id,
                    "declaring_type": m.declaring_type,
                    "name": m.name,
                    "signature": m.signature,
                    "is_constructor": m.is_constructor,
                    "sets_single_field": m.sets_single_field,
                    "returns_single_field": m.returns_single_field,
                }
                for m in self._methods.values()
            ],
            "calls": [
                {
                    "caller": e.caller,
                    "callee": e.callee,
                    "site_ordinal": e.site_ordinal,
                    **({"location": e.location} if e.location is not None else {}),
                }
                for e in self._relation.edges
            ],
        }

    @property
    def fingerprint(self) -> str:
        """SHA-256 over the canonical serialization; identifies the fact base."""
        if self._fingerprint is None:
            payload = canonical_json(self.canonical_doc()).encode("utf-8")
            self._fingerprint = hashlib.sha256(payload).hexdigest()
        return self._fingerprint


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


_TYPE_FIELDS = {"id", "qualified_name", "kind", "container"}
_TYPE_REQUIRED = {"id", "qualified_name", "kind"}
_METHOD_FIELDS = {
    "id",
    "declaring_type",
    "name",
    "signature",
    "is_constructor",
    "sets_single_field",
    "returns_single_field",
}
_METHOD_REQUIRED = {"id", "declaring_type", "name"}
_CALL_FIELDS = {"caller", "callee", "site_ordinal", "location"}
_CALL_REQUIRED = {"caller", "callee"}


def _check_record(
    record: Any, where: str, allowed: set[str], required: set[str]
) -> Mapping[str, Any]:
    if not isinstance(record, Mapping):
        raise FactsSchemaError(f"{where}: expected an object, got {type(record).__name__}")
    unknown = set(record) - allowed
    if unknown:
        raise FactsSchemaError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(record)
    if missing:
        raise FactsSchemaError(f"{where}: missing field(s) {sorted(missing)}")
    return record


def _require_str(record: Mapping[str, Any], key: str, where: str, allow_empty: bool = False) -> str:
    value = record.get(key, "")
    if not isinstance(value, str) or (not allow_empty and not value):
        raise FactsSchemaError(f"{where}: field {key!r} must be a non-empty string")
    return value


def _require_bool(record: Mapping[str, Any], key: str, where: str) -> bool:
    value = record.get(key, False)
    if not isinstance(value, bool):
        raise FactsSchemaError(f"{where}: field {key!r} must be a boolean")
    return value


def load_facts(source: Mapping[str, Any] | str | Path) -> ProgramFacts:
    """Load and validate a ``facts/1`` document from a mapping or a file path.

    Raises :class:`FactsSchemaError` for structural problems (the message
    names the offending record) and :class:`FactsResolutionError` when a call
    or method references an id that does not exist.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = source
    if not isinstance(doc, Mapping):
        raise FactsSchemaError("facts document must be a JSON object")
    unknown = set(doc) - {"schema", "types", "methods", "calls"}
    if unknown:
        raise FactsSchemaError(f"facts document: unknown top-level field(s) {sorted(unknown)}")
    if doc.get("schema") != FACTS_SCHEMA:
        raise FactsSchemaError(
            f"facts document: schema must be {FACTS_SCHEMA!r}, got {doc.get('schema')!r}"
        )

    types: dict[str, TypeRef] = {}
    for i, raw in enumerate(doc.get("types", [])):
        where = f"types[{i}]"
        rec = _check_record(raw, where, _TYPE_FIELDS, _TYPE_REQUIRED)
        tid = _require_str(rec, "id", where)
        where = f"types[{i}] (id={tid})"
        if tid in types:
            raise FactsSchemaError(f"{where}: duplicate type id")
        qname = _require_str(rec, "qualified_name", where)
        kind = _require_str(rec, "kind", where)
        if kind not in (TYPE_KIND_CLASS, TYPE_KIND_INTERFACE):
            raise FactsSchemaError(f"{where}: kind must be 'class' or 'interface'")
        container = rec.get("container", "")
        if not isinstance(container, str):
            raise FactsSchemaError(f"{where}: field 'container' must be a string")
        if container and not qname.startswith(container + "."):
            raise FactsSchemaError(
                f"{where}: container {container!r} is not a prefix of {qname!r}"
            )
        types[tid] = TypeRef(id=tid, qualified_name=qname, kind=kind, container=container)

    methods: dict[str, MethodRef] = {}
    for i, raw in enumerate(doc.get("methods", [])):
        where = f"methods[{i}]"
        rec = _check_record(raw, where, _METHOD_FIELDS, _METHOD_REQUIRED)
        mid = _require_str(rec, "id", where)
        where = f"methods[{i}] (id={mid})"
        if mid in methods:
            raise FactsSchemaError(f"{where}: duplicate method id")
        declaring = _require_str(rec, "declaring_type", where)
        if declaring not in types:
            raise FactsResolutionError(f"{where}: declaring_type {declaring!r} not found")
        signature = rec.get("signature", "")
        if not isinstance(signature, str):
            raise FactsSchemaError(f"{where}: field 'signature' must be a string")
        methods[mid] = MethodRef(
            id=mid,
            declaring_type=declaring,
            name=_require_str(rec, "name", where),
            signature=signature,
            is_constructor=_require_bool(rec, "is_constructor", where),
            sets_single_field=_require_bool(rec, "sets_single_field", where),
            returns_single_field=_require_bool(rec, "returns_single_field", where),
        )

    calls: list[CallEdge] = []
    seen: set[tuple[str, str, int]] = set()
    for i, raw in enumerate(doc.get("calls", [])):
        where = f"calls[{i}]"
        rec = _check_record(raw, where, _CALL_FIELDS, _CALL_REQUIRED)
        caller = _require_str(rec, "caller", where)
        callee = _require_str(rec, "callee", where)
        where = f"calls[{i}] ({caller}->{callee})"
        ordinal = rec.get("site_ordinal", 0)
        if not isinstance(ordinal, int) or isinstance(ordinal, bool) or ordinal < 0:
            raise FactsSchemaError(f"{where}: site_ordinal must be a non-negative integer")
        for endpoint, role in ((caller, "caller"), (callee, "callee")):
            if endpoint not in methods:
                raise FactsResolutionError(f"{where}: {role} {endpoint!r} not found")
        key = (caller, callee, ordinal)
        if key in seen:
            raise FactsSchemaError(f"{where}: duplicate call site ordinal {ordinal}")
        seen.add(key)
        location = rec.get("location")
        if location is not None and not isinstance(location, str):
            raise FactsSchemaError(f"{where}: field 'location' must be a string")
        calls.append(CallEdge(caller=caller, callee=callee, site_ordinal=ordinal, location=location))

    return ProgramFacts(types.values(), methods.values(), calls)


def is_utility(facts: ProgramFacts, element: TypeRef | MethodRef | str, cfg: FilterConfig) -> bool:
    """True when the element or its enclosing type/package matches a utility pattern."""
    if not cfg.utility_patterns:
        return False
    if isinstance(element, str):
        if element in facts.methods:
            element = facts.method(element)
        else:
            element = facts.type(element)
    if isinstance(element, TypeRef):
        names = [element.qualified_name]
        if element.container:
            names.append(element.container)
    else:
        declaring = facts.type(element.declaring_type)
        names = [f"{declaring.qualified_name}.{element.name}", declaring.qualified_name]
        if declaring.container:
            names.append(declaring.container)
    return any(_matches_any(name, cfg.utility_patterns) for name in names)


def is_accessor(m: MethodRef, cfg: FilterConfig) -> bool:
    """Accessor test by name (get*/set*, never constructors) or by body summary."""
    if cfg.accessor_by_name and not m.is_constructor:
        if m.name.startswith("get") or m.name.startswith("set"):
            return True
    if cfg.accessor_by_impl and (m.sets_single_field or m.returns_single_field):
        return True
    return False


def utility_method_ids(facts: ProgramFacts, cfg: FilterConfig) -> frozenset[str]:
    """Ids of all methods filtered as utilities under ``cfg``."""
    if not cfg.utility_patterns:
        return frozenset()
    utility_types = {
        tid for tid, t in facts.types.items() if is_utility(facts, t, cfg)
    }
    out: set[str] = set()
    for mid, m in facts.methods.items():
        if m.declaring_type in utility_types:
            out.add(mid)
        elif _matches_any(facts.qualified_method_name(mid), cfg.utility_patterns):
            out.add(mid)
    return frozenset(out)


def accessor_method_ids(facts: ProgramFacts, cfg: FilterConfig) -> frozenset[str]:
    """Ids of all methods the accessor filters would drop from candidate sets."""
    if not cfg.accessor_filtering:
        return frozenset()
    return frozenset(mid for mid, m in facts.methods.items() if is_accessor(m, cfg))


def effective_call_relation(facts: ProgramFacts, cfg: FilterConfig) -> CallRelation:
    """The call relation with every edge touching a utility element removed.

    Accessor methods stay in the relation; accessor filtering is applied to
    candidate sets by the individual miners, not to the calls themselves.
    """
    utilities = utility_method_ids(facts, cfg)
    if not utilities:
        return facts.relation
    return CallRelation(
        e for e in facts.relation.edges if e.caller not in utilities and e.callee not in utilities
    )
