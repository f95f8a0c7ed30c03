import json

import pytest

from concernmine.concepts import GroupedCallsConfig, mine_grouped
from concernmine.corpus import (
    BackgroundSpec,
    GroundTruth,
    PlantSpec,
    default_filter_config,
    generate,
)
from concernmine.errors import GenerationError
from concernmine.facts import FilterConfig, Sort, effective_call_relation, load_facts
from concernmine.fanin import FanInConfig, mine_fanin
from concernmine.redirection import RedirectionConfig, mine_redirections


def cb_plant(callers=18, noise=6, callees=3, stem="notify"):
    return PlantSpec(
        sort=Sort.CONSISTENT_BEHAVIOR,
        concern_callers=callers,
        noise_callers=noise,
        callee_count=callees,
        name_seed=stem,
    )


def rl_plant(pairs=22, eligible=22, match=1.0, stem="wrap"):
    return PlantSpec(
        sort=Sort.REDIRECTION_LAYER,
        pair_count=pairs,
        eligible_methods=eligible,
        name_match_fraction=match,
        name_seed=stem,
    )


def test_empty_spec_zero_background():
    doc, truth = generate([], BackgroundSpec(), rng_seed=1)
    assert doc["types"] == [] and doc["methods"] == [] and doc["calls"] == []
    assert truth.concerns == ()


def test_same_seed_is_byte_identical():
    plants = [cb_plant(), rl_plant()]
    background = BackgroundSpec(classes=15, utility_classes=2, test_classes=1, hub_count=2)
    first_doc, first_truth = generate(plants, background, rng_seed=42)
    second_doc, second_truth = generate(plants, background, rng_seed=42)
    assert json.dumps(first_doc, sort_keys=True) == json.dumps(second_doc, sort_keys=True)
    assert first_truth == second_truth
    third_doc, _ = generate(plants, background, rng_seed=43)
    assert json.dumps(third_doc, sort_keys=True) != json.dumps(first_doc, sort_keys=True)


def test_truth_fingerprint_matches_loaded_model():
    doc, truth = generate([cb_plant()], BackgroundSpec(classes=5), rng_seed=7)
    assert load_facts(doc).fingerprint == truth.facts_fingerprint


def test_behavior_plant_recovered_with_exact_counts():
    doc, truth = generate(
        [cb_plant(callers=18, noise=6, callees=3)],
        BackgroundSpec(classes=12, utility_classes=2, test_classes=1, hub_count=1),
        rng_seed=42,
    )
    facts = load_facts(doc)
    concern = truth.concerns[0]
    found = mine_fanin(facts, default_filter_config(), FanInConfig(min_callers=10))
    by_callee = {c.callee: c for c in found}
    primary = concern.callees[0]
    assert primary in by_callee
    assert by_callee[primary].caller_count == 24
    assert set(by_callee[primary].callers) == set(concern.callers) | set(concern.noise)


def test_planted_recall_above_threshold_holds_across_seeds():
    for seed in range(5):
        doc, truth = generate(
            [cb_plant(callers=12, noise=0, callees=2, stem="audit")],
            BackgroundSpec(classes=20, call_density=1.0),
            rng_seed=seed,
        )
        facts = load_facts(doc)
        found = {
            c.callee
            for c in mine_fanin(facts, default_filter_config(), FanInConfig(min_callers=10))
        }
        assert truth.concerns[0].callees[0] in found


def test_contract_plant_callers_have_own_work():
    doc, truth = generate(
        [
            PlantSpec(
                sort=Sort.CONTRACT_ENFORCEMENT,
                concern_callers=11,
                callee_count=1,
                name_seed="assertState",
            )
        ],
        BackgroundSpec(),
        rng_seed=3,
    )
    facts = load_facts(doc)
    concern = truth.concerns[0]
    assert concern.sort is Sort.CONTRACT_ENFORCEMENT
    for caller in concern.callers:
        work = facts.callees_of(caller) - set(concern.callees)
        assert work, "a guarded method should do its own work too"


def test_grouped_finds_planted_group_without_noise_callers():
    doc, truth = generate(
        [cb_plant(callers=18, noise=6, callees=3)],
        BackgroundSpec(classes=10),
        rng_seed=42,
    )
    facts = load_facts(doc)
    concern = truth.concerns[0]
    found = mine_grouped(
        facts, default_filter_config(), GroupedCallsConfig(min_callers=10, min_callees=2)
    )
    groups = {g.callees: set(g.callers) for g in found}
    assert tuple(sorted(concern.callees)) in groups
    assert groups[tuple(sorted(concern.callees))] == set(concern.callers)


def test_redirection_plant_recovered_exactly():
    doc, truth = generate(
        [rl_plant(pairs=22, eligible=22)],
        BackgroundSpec(classes=10, utility_classes=1),
        rng_seed=42,
    )
    facts = load_facts(doc)
    found = mine_redirections(facts, default_filter_config(), RedirectionConfig())
    assert len(found) == 1
    candidate = found[0]
    concern = truth.concerns[0]
    assert candidate.redirector_class == concern.redirector_class
    assert candidate.pair_count == 22
    assert candidate.redirector_percentage == 1.0
    assert {(p.redirector, p.target) for p in candidate.pairs} == set(concern.pairs)


def test_redirection_name_match_fraction():
    doc, _ = generate([rl_plant(pairs=10, eligible=10, match=0.5)], BackgroundSpec(), 1)
    facts = load_facts(doc)
    found = mine_redirections(facts, FilterConfig(), RedirectionConfig())
    assert sum(found[0].name_matches) == 5
    strict = mine_redirections(
        facts, FilterConfig(), RedirectionConfig(require_name_match=True)
    )
    assert strict[0].pair_count == 5


def test_rl_plant_validation():
    with pytest.raises(GenerationError, match="eligible_methods"):
        generate([rl_plant(pairs=5, eligible=3)], BackgroundSpec(), 1)
    with pytest.raises(GenerationError, match="pair_count"):
        generate([rl_plant(pairs=0, eligible=3)], BackgroundSpec(), 1)


def test_accessor_name_seed_rejected():
    with pytest.raises(GenerationError, match="accessor"):
        generate([cb_plant(stem="getLucky")], BackgroundSpec(), 1)


def test_role_superimposition_has_no_generator():
    with pytest.raises(GenerationError, match="role_superimposition"):
        generate([PlantSpec(sort=Sort.ROLE_SUPERIMPOSITION)], BackgroundSpec(), 1)


def test_utility_edges_counted_via_truth():
    doc, truth = generate(
        [cb_plant()],
        BackgroundSpec(classes=10, utility_classes=3, test_classes=2),
        rng_seed=9,
    )
    facts = load_facts(doc)
    utility_types = set(truth.utility_types)
    # independent count straight from the generator's knowledge of who is utility
    utility_methods = {
        mid for mid, m in facts.methods.items() if m.declaring_type in utility_types
    }
    expected_removed = sum(
        1
        for e in facts.calls
        if e.caller in utility_methods or e.callee in utility_methods
    )
    assert expected_removed > 0
    relation = effective_call_relation(facts, default_filter_config())
    assert len(facts.calls) - len(relation.edges) == expected_removed


def test_noise_disjoint_from_concern():
    _, truth = generate([cb_plant()], BackgroundSpec(classes=5), rng_seed=2)
    concern = truth.concerns[0]
    assert not (set(concern.callers) & set(concern.noise))
    assert not (set(concern.callees) & set(concern.noise))


def test_truth_round_trips_through_doc():
    _, truth = generate([cb_plant(), rl_plant()], BackgroundSpec(classes=4), rng_seed=5)
    assert GroundTruth.from_doc(truth.to_doc()) == truth
