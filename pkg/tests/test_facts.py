import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concernmine.errors import (
    FactsResolutionError,
    FactsSchemaError,
    UnknownElementError,
)
from concernmine.facts import (
    FilterConfig,
    canonical_json,
    effective_call_relation,
    is_accessor,
    is_utility,
    load_facts,
    utility_method_ids,
)

from helpers import call_rec, doc_of, graph_doc, method_rec, type_rec


def test_empty_document_loads_to_empty_model():
    facts = load_facts(doc_of([], [], []))
    assert not facts.types and not facts.methods and not facts.calls


def test_single_edge_inversion():
    doc = graph_doc([("Ma", "Mb")])
    facts = load_facts(doc)
    assert facts.callers_of("Mb") == frozenset({"Ma"})
    assert facts.callees_of("Ma") == frozenset({"Mb"})
    assert facts.callers_of("Ma") == frozenset()


def test_indexes_invert_calls_exactly():
    doc = graph_doc([("Ma", "Mb"), ("Ma", "Mc"), ("Mb", "Mc"), ("Mc", "Mc")])
    facts = load_facts(doc)
    for e in facts.calls:
        assert e.caller in facts.callers_of(e.callee)
        assert e.callee in facts.callees_of(e.caller)
    pairs = {(e.caller, e.callee) for e in facts.calls}
    for mid in facts.methods:
        for caller in facts.callers_of(mid):
            assert (caller, mid) in pairs


def test_schema_violations_name_the_record():
    doc = doc_of([type_rec("T1", "a.B")], [], [])
    doc["types"][0]["bogus"] = 1
    with pytest.raises(FactsSchemaError, match=r"types\[0\].*bogus"):
        load_facts(doc)

    with pytest.raises(FactsSchemaError, match="schema"):
        load_facts({"schema": "facts/0", "types": [], "methods": [], "calls": []})

    with pytest.raises(FactsSchemaError, match="top-level"):
        load_facts({**doc_of([], [], []), "extra": True})


def test_duplicate_ids_rejected():
    doc = doc_of([type_rec("T1", "a.B"), type_rec("T1", "a.C")], [], [])
    with pytest.raises(FactsSchemaError, match="duplicate type id"):
        load_facts(doc)


def test_dangling_references_are_resolution_errors():
    doc = doc_of([], [method_rec("M1", "Tmissing", "run")], [])
    with pytest.raises(FactsResolutionError, match="Tmissing"):
        load_facts(doc)

    doc = doc_of(
        [type_rec("T1", "a.B")],
        [method_rec("M1", "T1", "run")],
        [call_rec("M1", "M2")],
    )
    with pytest.raises(FactsResolutionError, match="M2"):
        load_facts(doc)


def test_container_must_prefix_qualified_name():
    doc = doc_of([type_rec("T1", "a.b.C", container="x.y")], [], [])
    with pytest.raises(FactsSchemaError, match="container"):
        load_facts(doc)


def test_duplicate_call_site_rejected():
    doc = graph_doc([("Ma", "Mb", 0), ("Ma", "Mb", 0)])
    with pytest.raises(FactsSchemaError, match="duplicate call site"):
        load_facts(doc)


def test_unknown_method_lookup():
    facts = load_facts(doc_of([], [], []))
    with pytest.raises(UnknownElementError):
        facts.method("M404")


def _shuffled(doc, rng):
    shuffled = json.loads(json.dumps(doc))
    for key in ("types", "methods", "calls"):
        rng.shuffle(shuffled[key])
    return shuffled


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(0, 10**6))
def test_load_is_order_independent(rng, _salt):
    import random

    gen = random.Random(rng.randint(0, 2**32))
    n = gen.randint(2, 30)
    methods = [f"M{i}" for i in range(n)]
    edges = []
    for _ in range(gen.randint(0, 60)):
        edges.append((gen.choice(methods), gen.choice(methods)))
    doc = graph_doc(edges, extra_methods=methods)
    first = load_facts(doc)
    second = load_facts(_shuffled(doc, gen))
    assert canonical_json(first.canonical_doc()) == canonical_json(second.canonical_doc())
    assert first.fingerprint == second.fingerprint


def test_500_method_document_loads_identically_when_shuffled():
    import random

    gen = random.Random(500)
    methods = [f"M{i:03d}" for i in range(500)]
    edges = [(gen.choice(methods), gen.choice(methods)) for _ in range(1500)]
    doc = graph_doc(edges, extra_methods=methods)
    first = load_facts(doc)
    second = load_facts(_shuffled(doc, gen))
    assert canonical_json(first.canonical_doc()) == canonical_json(second.canonical_doc())


def test_utility_match_on_test_package():
    doc = doc_of(
        [type_rec("T1", "org.test.FooTest"), type_rec("T2", "org.main.App")],
        [method_rec("M1", "T1", "checkIt"), method_rec("M2", "T2", "run")],
        [],
    )
    facts = load_facts(doc)
    cfg = FilterConfig(utility_patterns=("*.test.*",))
    assert is_utility(facts, facts.method("M1"), cfg)
    assert not is_utility(facts, facts.method("M2"), cfg)


def test_utility_empty_patterns_never_match():
    facts = load_facts(graph_doc([("Ma", "Mb")]))
    assert not is_utility(facts, facts.method("Ma"), FilterConfig())


def test_utility_wrapper_package_match():
    doc = doc_of(
        [type_rec("T1", "util.collections.SetWrapper")],
        [method_rec("M1", "T1", "add")],
        [],
    )
    facts = load_facts(doc)
    cfg = FilterConfig(utility_patterns=("util.collections.*",))
    assert is_utility(facts, facts.type("T1"), cfg)
    assert is_utility(facts, facts.method("M1"), cfg)


def test_single_star_does_not_cross_segments():
    doc = doc_of([type_rec("T1", "a.b.c.D")], [], [])
    facts = load_facts(doc)
    assert not is_utility(facts, facts.type("T1"), FilterConfig(utility_patterns=("a.*",)))
    assert is_utility(facts, facts.type("T1"), FilterConfig(utility_patterns=("a.**",)))


def test_accessor_by_name():
    cfg = FilterConfig(accessor_by_name=True)
    doc = doc_of(
        [type_rec("T1", "a.B")],
        [
            method_rec("M1", "T1", "getTextHolder"),
            method_rec("M2", "T1", "execute"),
            method_rec("M3", "T1", "setName", is_constructor=True),
        ],
        [],
    )
    facts = load_facts(doc)
    assert is_accessor(facts.method("M1"), cfg)
    assert not is_accessor(facts.method("M2"), cfg)
    # constructors never pass the name test, whatever they are called
    assert not is_accessor(facts.method("M3"), cfg)


def test_accessor_by_implementation():
    cfg = FilterConfig(accessor_by_impl=True)
    doc = doc_of(
        [type_rec("T1", "a.B")],
        [
            method_rec("M1", "T1", "view", returns_single_field=True),
            method_rec("M2", "T1", "execute"),
        ],
        [],
    )
    facts = load_facts(doc)
    assert is_accessor(facts.method("M1"), cfg)
    assert not is_accessor(facts.method("M2"), cfg)
    assert not is_accessor(facts.method("M1"), FilterConfig(accessor_by_name=True))


def test_effective_relation_without_patterns_is_identity():
    facts = load_facts(graph_doc([("Ma", "Mb"), ("Mb", "Mc")]))
    relation = effective_call_relation(facts, FilterConfig())
    assert relation.edges == facts.calls


def test_effective_relation_removes_utility_endpoints():
    doc = doc_of(
        [type_rec("T1", "app.Main"), type_rec("T2", "app.test.Suite")],
        [
            method_rec("M1", "T1", "run"),
            method_rec("M2", "T1", "notifyAll"),
            method_rec("Mt", "T2", "testRun"),
        ],
        [call_rec("M1", "M2"), call_rec("Mt", "M2"), call_rec("M1", "Mt")],
    )
    facts = load_facts(doc)
    cfg = FilterConfig(utility_patterns=("*.test.*",))
    relation = effective_call_relation(facts, cfg)
    assert [(e.caller, e.callee) for e in relation.edges] == [("M1", "M2")]
    assert utility_method_ids(facts, cfg) == frozenset({"Mt"})


def test_effective_relation_is_monotone_and_subset():
    facts = load_facts(
        doc_of(
            [type_rec("T1", "app.Main"), type_rec("T2", "app.util.Wrap")],
            [
                method_rec("M1", "T1", "run"),
                method_rec("M2", "T1", "stop"),
                method_rec("Mu", "T2", "wrap"),
            ],
            [call_rec("M1", "M2"), call_rec("M1", "Mu"), call_rec("Mu", "M2")],
        )
    )
    base = effective_call_relation(facts, FilterConfig())
    narrowed = effective_call_relation(
        facts, FilterConfig(utility_patterns=("app.util.*",))
    )
    assert set(narrowed.edges) <= set(base.edges)
    more = effective_call_relation(
        facts, FilterConfig(utility_patterns=("app.util.*", "app.Main"))
    )
    assert set(more.edges) <= set(narrowed.edges)
