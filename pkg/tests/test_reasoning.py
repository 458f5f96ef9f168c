import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solp.autonomous import classical_fixpoints, enumerate_afp, hat_transform
from solp.model import Atom, Cardinal, num
from solp.parser import parse_collection
from solp.random_gen import random_collection, random_colp
from solp.reasoning import (
    MODES,
    check_joint_fixpoints,
    decide,
    joint_fixpoints,
    query,
    sigma_collection,
    sigma_translate,
    witness_valid,
)
from solp.social import Semantics, enumerate_social_models

from conftest import golden, model

GO = Atom("go_wedding")
AFP_EXACT = Semantics("afp", "exact")


@pytest.mark.parametrize("mode,answer", [("ic", True), ("sc", False), ("is", False), ("ss", False)])
def test_wedding_verdicts(wedding, mode, answer):
    v = query(wedding, GO, mode)
    assert v.answer is answer and not v.vacuous
    assert witness_valid(wedding, v)


def test_is_refuted_by_empty_model(wedding):
    v = query(wedding, GO, "is")
    assert v.witnesses[0][0] == model()


def test_ic_witness_names_holders(wedding):
    v = query(wedding, GO, "ic")
    m, progs = v.witnesses[0]
    assert progs == ("p1", "p2") and m == model("go_wedding@p1", "go_wedding@p2", "drive@p2")


def test_no_models_is_vacuous():
    c = parse_collection("#program p. a :- not a.")
    assert enumerate_social_models(c) == []
    for mode in MODES:
        v = query(c, Atom("a"), mode)
        assert v.vacuous and v.answer is (mode in ("ss", "is"))


def test_unknown_mode(wedding):
    with pytest.raises(ValueError):
        query(wedding, GO, "xx")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["a", "b", "c"]))
def test_query_matches_quantifiers_and_implications(seed, name):
    c = random_collection(seed)
    models = enumerate_social_models(c)
    x = Atom(name)
    v = {mode: query(c, x, mode, models) for mode in MODES}
    for mode in MODES:
        assert v[mode].answer == decide(c, x, mode, models)
        assert witness_valid(c, v[mode])
    assert not v["ss"].answer or v["is"].answer
    assert not v["sc"].answer or v["ic"].answer


def test_sigma_shape():
    p = golden("compromise").program("q1")
    s = sigma_translate(p, 3)
    (r,) = s.rules
    (sl,) = r.social
    assert r.okay and sl.sc.cond == Cardinal(num(2), num(2))
    assert [str(l) for l in sl.sc.content] == ["a"]


def test_sigma_rejects_social_programs(wedding):
    with pytest.raises(ValueError):
        sigma_translate(wedding.program("p1"), 4)
    with pytest.raises(ValueError):
        sigma_translate(golden("compromise").program("q1"), 0)


def test_compromise_joint_fixpoints():
    ps = list(golden("compromise").programs)
    assert joint_fixpoints(ps) == [frozenset(), frozenset({Atom("a")})]
    r = check_joint_fixpoints(ps)
    assert r.ok
    assert r.social == [model(), model("a@q1", "a@q2")]


def test_joint_fixpoints_disagreeing_agents():
    ps = list(parse_collection("#program q1. a. #program q2. okay(a). b :- a.").programs)
    # q1 forces a; q2 then forces b, which q1 cannot produce
    assert joint_fixpoints(ps) == []
    assert check_joint_fixpoints(ps).ok


def test_single_agent_sigma_is_plain_fixpoints():
    p = parse_collection("#program q1. okay(a). b :- not a.").programs[0]
    assert set(enumerate_afp(sigma_translate(p, 1))) == set(classical_fixpoints(hat_transform(p)))
    assert check_joint_fixpoints([p]).ok


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_joint_fixpoint_correspondence_random(seed):
    r = check_joint_fixpoints(random_colp(seed))
    assert r.ok, r.notes


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_sigma_collection_models_are_uniform(seed):
    ps = random_colp(seed)
    c = sigma_collection(ps)
    for m in enumerate_social_models(c, AFP_EXACT):
        slices = {frozenset(la.atom for la in m if la.program == p.id) for p in ps}
        assert len(slices) == 1
