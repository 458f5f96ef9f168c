from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solp.autonomous import classical_fixpoints, enumerate_afp, self_supporting
from solp.caps import Caps
from solp.errors import CapExceeded
from solp.model import msc_at_depth
from solp.parser import parse_collection
from solp.random_gen import random_collection
from solp.social import (
    DEFAULT,
    LITERAL,
    Semantics,
    candidate_parts,
    enumerate_social_models,
    is_social_model,
    is_supported,
    join,
    sc_truth,
    split,
    st_step,
    violated_constraints,
)

from conftest import VALID_GOLDEN, golden, model

M1 = model()
M2 = model("go_wedding@p1", "go_wedding@p2", "drive@p2")
M3 = model("go_wedding@p1", "go_wedding@p2", "go_wedding@p3")


def test_wedding_three_models(wedding):
    assert enumerate_social_models(wedding) == [M1, M2, M3]


def test_wedding_literal_reading_keeps_only_m3(wedding):
    assert enumerate_social_models(wedding, LITERAL) == [M3]


def test_party_unique_model():
    assert enumerate_social_models(golden("party")) == [
        model("go_party@p1", "go_party@p2", "guitar@p2", "go_party@p3")]


def test_constraint_examples():
    assert enumerate_social_models(golden("constraint")) == [M1]
    assert enumerate_social_models(golden("constraint_primed")) == [model("c@p2")]


def test_empty_programs():
    c = parse_collection("#program a. #program b.")
    assert enumerate_social_models(c) == [frozenset()]


def test_supportedness_examples():
    assert is_supported(golden("constraint_primed"), model("c@p2"))
    c = parse_collection("#program p1. a :- b.")
    assert not is_supported(c, model("a@p1"))
    assert is_supported(c, frozenset())


def test_wedding_sc_truth(wedding):
    s_p1 = wedding.program("p1").rules[0].social[0].sc
    s_p3 = wedding.program("p3").rules[0].social[0].sc
    assert sc_truth(wedding, s_p1, M3, "p1")
    assert not sc_truth(wedding, s_p1, M1, "p1")
    assert not sc_truth(wedding, s_p3, M2, "p3")
    assert sc_truth(wedding, s_p3, M3, "p3")


def test_member_sc_may_target_self():
    c = parse_collection("#program p. okay(a). b :- [p]{a}.")
    assert enumerate_social_models(c) == [frozenset(), model("a@p", "b@p")]


def test_st_step_and_constraint_report(wedding):
    assert st_step(wedding, M3) == M3
    assert violated_constraints(golden("constraint"), model("a@p1")) == []
    assert violated_constraints(golden("constraint"), model("c@p2")) == [("p2", 1)]


def test_split_join_inverse(wedding):
    v = split(wedding, M2)
    assert join(wedding, [v[pid] for pid in wedding.ids]) == M2


def test_semantics_rejects_unknown_modes():
    with pytest.raises(ValueError):
        Semantics("some")
    with pytest.raises(ValueError):
        Semantics("all", "fuzzy")


def test_candidate_cap(wedding):
    with pytest.raises(CapExceeded) as e:
        candidate_parts(wedding, caps=Caps(20, 3, 22))
    assert e.value.cap == "candidate cap"


@pytest.mark.parametrize("name", VALID_GOLDEN)
@pytest.mark.parametrize("sem", [DEFAULT, LITERAL])
def test_golden_models_are_supported(name, sem):
    c = golden(name)
    for m in enumerate_social_models(c, sem):
        assert is_supported(c, m, sem)


seeds = st.integers(0, 10**6)


@settings(max_examples=120, deadline=None)
@given(seeds, st.sampled_from([DEFAULT, LITERAL, Semantics("afp", "exact"), Semantics("all", "witness")]))
def test_models_are_supported_and_recheck(seed, sem):
    c = random_collection(seed)
    parts = [set(x) for x in candidate_parts(c, sem)]
    for m in enumerate_social_models(c, sem):
        assert is_supported(c, m, sem)
        assert is_social_model(c, m, sem)
        v = split(c, m)
        assert all(v[pid] in part for pid, part in zip(c.ids, parts))


@settings(max_examples=120, deadline=None)
@given(seeds)
def test_afp_models_are_among_all_models(seed):
    # any AFP slice is self-supporting, and the model check does not depend on the candidate set
    c = random_collection(seed)
    for card in ("exact", "witness"):
        narrow = set(enumerate_social_models(c, Semantics("afp", card)))
        assert narrow <= set(enumerate_social_models(c, Semantics("all", card)))


@settings(max_examples=150, deadline=None)
@given(seeds, st.data())
def test_negation_is_complement(seed, data):
    c = random_collection(seed, max_depth=2)
    scs = [s for p in c.programs for r in p.rules for sl in r.social for s in [sl.sc]]
    if not scs:
        return
    s = data.draw(st.sampled_from(scs))
    parts = candidate_parts(c, DEFAULT)
    if not all(parts):
        return
    m = join(c, [data.draw(st.sampled_from(x)) for x in parts])
    pj = data.draw(st.sampled_from(c.ids))
    for sem in (DEFAULT, LITERAL):
        assert sc_truth(c, s, m, pj, semantics=sem, negated=True) == (not sc_truth(c, s, m, pj, semantics=sem))


@settings(max_examples=150, deadline=None)
@given(seeds, st.data())
def test_witness_reading_monotone_in_active_set(seed, data):
    c = random_collection(seed, max_depth=2)
    scs = [sl.sc for p in c.programs for r in p.rules for sl in r.social]
    if not scs:
        return
    s = data.draw(st.sampled_from(scs))
    parts = candidate_parts(c, DEFAULT)
    if not all(parts):
        return
    m = join(c, [data.draw(st.sampled_from(x)) for x in parts])
    pj = data.draw(st.sampled_from(c.ids))
    small = frozenset(data.draw(st.sets(st.sampled_from(c.ids))))
    big = small | frozenset(data.draw(st.sets(st.sampled_from(c.ids))))
    if sc_truth(c, s, m, pj, small, LITERAL):
        assert sc_truth(c, s, m, pj, big, LITERAL)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_sc_free_collection_is_product_of_fixpoints(seed):
    c = random_collection(seed, max_scs=0, okay=False, constraints=False)
    assert all(not r.social for p in c.programs for r in p.rules)
    expected = {join(c, combo) for combo in product(*(classical_fixpoints(p) for p in c.programs))}
    for sem in (DEFAULT, LITERAL):
        assert set(enumerate_social_models(c, sem)) == expected


def test_depth_helper_used_by_random_generator():
    c = random_collection(7, max_depth=2)
    for p in c.programs:
        for r in p.rules:
            for sl in r.social:
                assert msc_at_depth(sl.sc, 3) == []


def test_afp_candidates_are_fixpoints(wedding):
    for pid, part in zip(wedding.ids, candidate_parts(wedding, LITERAL)):
        assert part == enumerate_afp(wedding.program(pid))
    for pid, part in zip(wedding.ids, candidate_parts(wedding, DEFAULT)):
        assert part == self_supporting(wedding.program(pid))
