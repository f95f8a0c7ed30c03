from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concernmine.errors import DegenerateCandidateError, UnknownElementError
from concernmine.facts import FilterConfig, load_facts
from concernmine.fanin import FanInCandidate, FanInConfig, fan_in, fanin_seed_quality, mine_fanin

from helpers import call_rec, doc_of, graph_doc, method_rec, star_edges, type_rec


def test_no_incoming_edges_is_zero():
    facts = load_facts(graph_doc([("Ma", "Mb")]))
    assert fan_in(facts, FilterConfig(), "Ma") == (0, 0)


def test_sites_and_callers_counted_separately():
    # one caller twice, another once: three sites, two callers
    facts = load_facts(graph_doc([("Ma", "Mx", 0), ("Ma", "Mx", 1), ("Mb", "Mx", 0)]))
    assert fan_in(facts, FilterConfig(), "Mx") == (3, 2)


def test_self_recursion_not_counted():
    facts = load_facts(graph_doc([("Mx", "Mx"), ("Ma", "Mx")]))
    assert fan_in(facts, FilterConfig(), "Mx") == (1, 1)


def test_unknown_method_is_lookup_error():
    facts = load_facts(graph_doc([("Ma", "Mb")]))
    with pytest.raises(UnknownElementError):
        fan_in(facts, FilterConfig(), "Mzzz")


def test_mine_reports_only_methods_at_threshold():
    callers = [f"Mc{i:02d}" for i in range(12)]
    edges = star_edges(callers, "Mhot") + star_edges(callers[:9], "Mwarm")
    facts = load_facts(graph_doc(edges))
    found = mine_fanin(facts, FilterConfig(), FanInConfig(min_callers=10))
    assert [c.callee for c in found] == ["Mhot"]
    assert found[0].caller_count == 12
    assert found[0].callers == tuple(sorted(callers))


def test_mine_empty_when_all_below_threshold():
    facts = load_facts(graph_doc(star_edges(["Ma", "Mb"], "Mx")))
    assert mine_fanin(facts, FilterConfig(), FanInConfig(min_callers=10)) == []


def test_accessor_callees_suppressed_entirely():
    callers = [f"Mc{i:02d}" for i in range(12)]
    doc = graph_doc(
        star_edges(callers, "Mget"),
        names={"Mget": "getState"},
    )
    facts = load_facts(doc)
    with_filter = FilterConfig(accessor_by_name=True)
    assert mine_fanin(facts, with_filter, FanInConfig(min_callers=10)) == []
    without = mine_fanin(facts, FilterConfig(), FanInConfig(min_callers=10))
    assert [c.callee for c in without] == ["Mget"]


def test_utility_callers_do_not_count():
    doc = doc_of(
        [type_rec("T1", "app.Main"), type_rec("T2", "app.test.Suite")],
        [method_rec("Mx", "T1", "notifyAll")]
        + [method_rec(f"Mc{i}", "T1", f"caller{i}") for i in range(3)]
        + [method_rec("Mt", "T2", "testIt")],
        [call_rec(f"Mc{i}", "Mx") for i in range(3)] + [call_rec("Mt", "Mx")],
    )
    facts = load_facts(doc)
    assert fan_in(facts, FilterConfig(), "Mx") == (4, 4)
    filtered = FilterConfig(utility_patterns=("*.test.*",))
    assert fan_in(facts, filtered, "Mx") == (3, 3)
    found = mine_fanin(facts, filtered, FanInConfig(min_callers=3))
    assert found[0].callers == ("Mc0", "Mc1", "Mc2")


def test_output_order_is_deterministic():
    callers = [f"Mc{i:02d}" for i in range(11)]
    edges = (
        star_edges(callers, "Mbbb")
        + star_edges(callers, "Maaa")
        + star_edges(callers + ["Mzz"], "Mccc")
    )
    facts = load_facts(graph_doc(edges))
    found = mine_fanin(facts, FilterConfig(), FanInConfig(min_callers=10))
    assert [c.callee for c in found] == ["Mccc", "Maaa", "Mbbb"]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_raising_threshold_never_adds_candidates(threshold, seed):
    import random

    gen = random.Random(seed)
    methods = [f"M{i:02d}" for i in range(gen.randint(2, 25))]
    edges = [
        (gen.choice(methods), gen.choice(methods)) for _ in range(gen.randint(0, 80))
    ]
    facts = load_facts(graph_doc(edges, extra_methods=methods))
    low = {c.callee for c in mine_fanin(facts, FilterConfig(), FanInConfig(threshold))}
    high = {
        c.callee for c in mine_fanin(facts, FilterConfig(), FanInConfig(threshold + 1))
    }
    assert high <= low


def test_removing_a_pattern_never_decreases_caller_counts():
    doc = doc_of(
        [type_rec("T1", "app.Main"), type_rec("T2", "app.util.Wrap")],
        [method_rec("Mx", "T1", "notifyAll"), method_rec("Ma", "T1", "a"),
         method_rec("Mu", "T2", "wrap")],
        [call_rec("Ma", "Mx"), call_rec("Mu", "Mx")],
    )
    facts = load_facts(doc)
    narrowed = FilterConfig(utility_patterns=("app.util.*",))
    for mid in facts.methods:
        _, with_filter = fan_in(facts, narrowed, mid)
        _, without = fan_in(facts, FilterConfig(), mid)
        assert without >= with_filter


def test_candidates_are_backed_by_effective_edges():
    import random

    from concernmine.facts import effective_call_relation

    gen = random.Random(17)
    methods = [f"M{i:02d}" for i in range(25)]
    edges = [(gen.choice(methods), gen.choice(methods)) for _ in range(150)]
    facts = load_facts(graph_doc(edges, extra_methods=methods))
    relation = effective_call_relation(facts, FilterConfig())
    for candidate in mine_fanin(facts, FilterConfig(), FanInConfig(min_callers=3)):
        assert candidate.callers
        for caller in candidate.callers:
            assert caller in relation.callers_of(candidate.callee)


def test_quality_mirror_of_command_execute_case():
    callers = tuple(f"Mc{i:02d}" for i in range(24))
    candidate = FanInCandidate(callee="Mexec", callers=callers, call_site_count=24)
    assert fanin_seed_quality(candidate, set(callers[:18])) == Fraction(75)


def test_quality_bounds():
    candidate = FanInCandidate(callee="Mx", callers=("Ma", "Mb"), call_site_count=2)
    assert fanin_seed_quality(candidate, {"Ma", "Mb"}) == Fraction(100)
    assert fanin_seed_quality(candidate, {"Mzz"}) == Fraction(0)


def test_quality_warns_on_stray_entries(caplog):
    candidate = FanInCandidate(callee="Mx", callers=("Ma", "Mb"), call_site_count=2)
    with caplog.at_level("WARNING"):
        q = fanin_seed_quality(candidate, {"Ma", "Mstray"})
    assert q == Fraction(50)
    assert any("ignoring" in r.message for r in caplog.records)


def test_quality_empty_candidate_is_degenerate():
    candidate = FanInCandidate(callee="Mx", callers=(), call_site_count=0)
    with pytest.raises(DegenerateCandidateError):
        fanin_seed_quality(candidate, set())


def test_config_rejects_bad_threshold():
    with pytest.raises(ValueError):
        FanInConfig(min_callers=0)
