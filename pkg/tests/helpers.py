"""Builders for small facts documents used across the test suite."""

from __future__ import annotations

from typing import Any, Iterable, Mapping


def type_rec(
    tid: str, qname: str, kind: str = "class", container: str | None = None
) -> dict[str, Any]:
    if container is None:
        container = qname.rsplit(".", 1)[0] if "." in qname else ""
    return {"id": tid, "qualified_name": qname, "kind": kind, "container": container}


def method_rec(mid: str, tid: str, name: str, **flags: Any) -> dict[str, Any]:
    return {"id": mid, "declaring_type": tid, "name": name, **flags}


def call_rec(caller: str, callee: str, ordinal: int = 0) -> dict[str, Any]:
    return {"caller": caller, "callee": callee, "site_ordinal": ordinal}


def doc_of(types: list, methods: list, calls: list) -> dict[str, Any]:
    return {"schema": "facts/1", "types": types, "methods": methods, "calls": calls}


def graph_doc(
    edges: Iterable[tuple[str, str] | tuple[str, str, int]],
    names: Mapping[str, str] | None = None,
    flags: Mapping[str, Mapping[str, Any]] | None = None,
    type_of: Mapping[str, str] | None = None,
    extra_types: Iterable[dict] = (),
    extra_methods: Iterable[str] = (),
) -> dict[str, Any]:
    """Facts document from an edge list; methods are created on first mention.

    By default every method lands in one class ``app.Main``; ``type_of`` maps
    method ids onto other type ids, which must be given via ``extra_types``.
    """
    names = dict(names or {})
    flags = dict(flags or {})
    type_of = dict(type_of or {})
    types = [type_rec("Tmain", "app.Main")] + list(extra_types)
    seen: dict[str, dict] = {}

    def ensure(mid: str) -> None:
        if mid in seen:
            return
        seen[mid] = method_rec(
            mid,
            type_of.get(mid, "Tmain"),
            names.get(mid, mid),
            **flags.get(mid, {}),
        )

    calls = []
    site: dict[tuple[str, str], int] = {}
    for edge in edges:
        caller, callee = edge[0], edge[1]
        ensure(caller)
        ensure(callee)
        if len(edge) > 2:
            ordinal = edge[2]
        else:
            ordinal = site.get((caller, callee), 0)
            site[(caller, callee)] = ordinal + 1
        calls.append(call_rec(caller, callee, ordinal))
    for mid in extra_methods:
        ensure(mid)
    return doc_of(types, sorted(seen.values(), key=lambda m: m["id"]), calls)


def star_edges(callers: Iterable[str], callee: str) -> list[tuple[str, str]]:
    return [(caller, callee) for caller in callers]
