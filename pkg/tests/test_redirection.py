from fractions import Fraction

import pytest

from concernmine.errors import DegenerateCandidateError
from concernmine.facts import FilterConfig, effective_call_relation, load_facts
from concernmine.redirection import (
    RedirectionCandidate,
    RedirectionConfig,
    RedirectionPair,
    mine_redirections,
    redirection_seed_quality,
)

from helpers import call_rec, doc_of, method_rec, type_rec


def forwarding_doc(
    pair_count: int,
    extra_methods: int = 0,
    matched_names: bool = True,
    with_constructor: bool = True,
    leaks: list | None = None,
):
    """Wrapper class C forwarding one-to-one into core class D."""
    types = [type_rec("TC", "app.Wrapper"), type_rec("TD", "app.Core")]
    methods = []
    calls = []
    if with_constructor:
        methods.append(method_rec("MCinit", "TC", "Wrapper", is_constructor=True))
    for k in range(pair_count):
        m, n = f"MC{k:02d}", f"MD{k:02d}"
        name = f"draw{k}"
        methods.append(method_rec(m, "TC", name))
        methods.append(method_rec(n, "TD", name if matched_names else f"paint{k}"))
        calls.append(call_rec(m, n))
    for k in range(extra_methods):
        methods.append(method_rec(f"MCx{k:02d}", "TC", f"local{k}"))
    for caller, callee in leaks or []:
        calls.append(call_rec(caller, callee))
    return doc_of(types, methods, calls)


def verify_exclusivity(facts, filter_cfg, candidate: RedirectionCandidate):
    """Oracle for the one-to-one rule, checked straight off the edge set."""
    relation = effective_call_relation(facts, filter_cfg)
    for pair in candidate.pairs:
        to_target_class = {
            callee
            for callee in relation.callees_of(pair.redirector)
            if facts.method(callee).declaring_type == candidate.target_class
        }
        assert to_target_class == {pair.target}
        from_redirector_class = {
            caller
            for caller in relation.callers_of(pair.target)
            if facts.method(caller).declaring_type == candidate.redirector_class
        }
        assert from_redirector_class == {pair.redirector}


def test_decorator_like_class_fully_reported():
    facts = load_facts(forwarding_doc(pair_count=22))
    found = mine_redirections(facts, FilterConfig(), RedirectionConfig())
    assert len(found) == 1
    candidate = found[0]
    assert candidate.pair_count == 22
    assert candidate.class_method_count == 22
    assert candidate.declared_method_count == 23  # constructor only adds to the raw count
    assert candidate.redirector_percentage == 1.0
    assert all(candidate.name_matches)
    verify_exclusivity(facts, FilterConfig(), candidate)


def test_below_redirector_count_threshold():
    facts = load_facts(forwarding_doc(pair_count=2))
    assert mine_redirections(facts, FilterConfig(), RedirectionConfig()) == []


def test_below_percentage_threshold():
    facts = load_facts(forwarding_doc(pair_count=4, extra_methods=6))
    assert mine_redirections(facts, FilterConfig(), RedirectionConfig()) == []
    # 4 of 10 passes once the bar drops to 40%
    relaxed = RedirectionConfig(min_percentage=0.4)
    assert len(mine_redirections(facts, FilterConfig(), relaxed)) == 1


def test_exclusivity_leak_breaks_both_pairs():
    # MC00 now calls two methods of D, and MD01 gains a second caller in C,
    # so both pairs fall and 3 of 5 remain (still at the count threshold).
    facts = load_facts(forwarding_doc(pair_count=5, leaks=[("MC00", "MD01")]))
    found = mine_redirections(facts, FilterConfig(), RedirectionConfig())
    assert len(found) == 1
    reported = {p.redirector for p in found[0].pairs}
    assert reported == {"MC02", "MC03", "MC04"}
    verify_exclusivity(facts, FilterConfig(), found[0])
    # one break more and the count threshold ends the candidate
    fewer = load_facts(forwarding_doc(pair_count=4, leaks=[("MC00", "MD01")]))
    assert mine_redirections(fewer, FilterConfig(), RedirectionConfig()) == []


def test_name_match_filter_never_adds_pairs():
    facts = load_facts(forwarding_doc(pair_count=6, matched_names=False))
    base = mine_redirections(facts, FilterConfig(), RedirectionConfig())
    assert len(base) == 1 and not any(base[0].name_matches)
    strict = mine_redirections(
        facts, FilterConfig(), RedirectionConfig(require_name_match=True)
    )
    assert strict == []


def test_accessor_redirectors_excluded_when_filtering():
    types = [type_rec("TC", "app.Wrapper"), type_rec("TD", "app.Core")]
    methods = []
    calls = []
    for k in range(4):
        m, n = f"MC{k}", f"MD{k}"
        methods.append(method_rec(m, "TC", f"forward{k}"))
        methods.append(method_rec(n, "TD", f"forward{k}"))
        calls.append(call_rec(m, n))
    methods.append(method_rec("MCget", "TC", "getCore"))
    methods.append(method_rec("MDget", "TD", "core"))
    calls.append(call_rec("MCget", "MDget"))
    facts = load_facts(doc_of(types, methods, calls))

    plain = mine_redirections(facts, FilterConfig(), RedirectionConfig())[0]
    assert plain.pair_count == 5 and plain.class_method_count == 5

    filtered = mine_redirections(
        facts, FilterConfig(accessor_by_name=True), RedirectionConfig()
    )[0]
    assert filtered.pair_count == 4 and filtered.class_method_count == 4
    assert {p.redirector for p in filtered.pairs} == {"MC0", "MC1", "MC2", "MC3"}


def test_two_targets_give_two_candidates():
    types = [
        type_rec("TC", "app.Hub"),
        type_rec("TD1", "app.Left"),
        type_rec("TD2", "app.Right"),
    ]
    methods, calls = [], []
    for k in range(3):
        methods += [
            method_rec(f"MCl{k}", "TC", f"left{k}"),
            method_rec(f"MCr{k}", "TC", f"right{k}"),
            method_rec(f"MDl{k}", "TD1", f"left{k}"),
            method_rec(f"MDr{k}", "TD2", f"right{k}"),
        ]
        calls += [call_rec(f"MCl{k}", f"MDl{k}"), call_rec(f"MCr{k}", f"MDr{k}")]
    facts = load_facts(doc_of(types, methods, calls))
    found = mine_redirections(facts, FilterConfig(), RedirectionConfig())
    assert [(c.redirector_class, c.target_class) for c in found] == [
        ("TC", "TD1"),
        ("TC", "TD2"),
    ]


def test_thresholds_anti_monotone():
    facts = load_facts(forwarding_doc(pair_count=5, extra_methods=3))
    loose = mine_redirections(
        facts, FilterConfig(), RedirectionConfig(min_redirectors=1, min_percentage=0.1)
    )
    tight = mine_redirections(
        facts, FilterConfig(), RedirectionConfig(min_redirectors=6, min_percentage=0.1)
    )
    tighter = mine_redirections(
        facts, FilterConfig(), RedirectionConfig(min_redirectors=1, min_percentage=0.9)
    )
    loose_keys = {(c.redirector_class, c.target_class) for c in loose}
    assert {(c.redirector_class, c.target_class) for c in tight} <= loose_keys
    assert {(c.redirector_class, c.target_class) for c in tighter} <= loose_keys


def test_quality_examples():
    candidate = RedirectionCandidate(
        redirector_class="TC",
        target_class="TD",
        pairs=tuple(RedirectionPair(f"MC{k}", f"MD{k}") for k in range(22)),
        name_matches=(True,) * 22,
        class_method_count=22,
        declared_method_count=22,
    )
    assert redirection_seed_quality(candidate, set(candidate.pairs)) == Fraction(100)
    assert redirection_seed_quality(candidate, set(candidate.pairs[:11])) == Fraction(50)
    assert redirection_seed_quality(candidate, set()) == Fraction(0)


def test_quality_degenerate():
    candidate = RedirectionCandidate(
        redirector_class="TC",
        target_class="TD",
        pairs=(),
        name_matches=(),
        class_method_count=1,
        declared_method_count=1,
    )
    with pytest.raises(DegenerateCandidateError):
        redirection_seed_quality(candidate, set())


def test_config_validation():
    with pytest.raises(ValueError):
        RedirectionConfig(min_redirectors=0)
    with pytest.raises(ValueError):
        RedirectionConfig(min_percentage=0.0)
    with pytest.raises(ValueError):
        RedirectionConfig(min_percentage=1.5)
