from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solp.autonomous import (
    autonomous_reduction,
    at_step,
    classical_fixpoints,
    enumerate_afp,
    hat_transform,
    self_supporting,
    var_star,
)
from solp.caps import Caps
from solp.errors import CapExceeded
from solp.model import Atom, Program
from solp.parser import parse_collection
from solp.random_gen import random_collection, random_colp

from conftest import golden

A, B = Atom("a"), Atom("b")


def sets(*xs):
    return [frozenset(Atom(c) for c in x) for x in xs]


def test_reduction_drops_social_elements_only():
    p = golden("afp_example").program("p")
    red = autonomous_reduction(p)
    assert len(red.rules) == 2
    assert [str(l) for l in red.rules[0].body] == ["b"]
    assert red.rules[1].body == () and red.rules[0].okay


def test_afp_example():
    assert enumerate_afp(golden("afp_example").program("p")) == sets("b", "ab")


def test_afp_is_a_fixpoint_of_the_autonomous_operator():
    p = golden("afp_example").program("p")
    for i in enumerate_afp(p):
        assert at_step(p, i) == i


def test_tolerance_fact_has_two_fixpoints():
    p = parse_collection("#program p. okay(a).").programs[0]
    assert enumerate_afp(p) == sets("", "a")


def test_constraint_example_has_empty_fixpoint_only():
    c = golden("constraint")
    assert enumerate_afp(c.program("p1")) == sets("")
    assert enumerate_afp(c.program("p2")) == sets("")
    assert enumerate_afp(golden("constraint_primed").program("p2")) == [frozenset({Atom("c")})]


def test_hat_transform_shape():
    p = parse_collection("#program p. okay(a) :- not b. b.").programs[0]
    h = hat_transform(p)
    assert not any(r.okay for r in h.rules)
    assert [str(x) for x in h.rules[0].body] == ["a", "not b"]
    assert h.rules[1] == p.rules[1]


def test_var_star_strips_okay():
    p = parse_collection("#program p. okay(a) :- [1,]{z}, b. #program q.").programs[0]
    assert var_star(p) == [A, B]


def _brute_afp(p):
    atoms = var_star(p)
    out = []
    for k in range(len(atoms) + 1):
        for combo in combinations(atoms, k):
            i = frozenset(combo)
            if at_step(p, i) == i:
                out.append(i)
    return out


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_afp_matches_brute_force_without_constraints(seed):
    c = random_collection(seed, constraints=False)
    for p in c.programs:
        assert set(enumerate_afp(p)) == set(_brute_afp(p))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_afp_backends_agree(seed):
    c = random_collection(seed)
    for p in c.programs:
        assert enumerate_afp(p, backend="numba") == enumerate_afp(p, backend="numpy")
        assert self_supporting(p, backend="numba") == self_supporting(p, backend="numpy")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_afp_inside_self_supporting(seed):
    for p in random_collection(seed).programs:
        ss = set(self_supporting(p))
        assert set(enumerate_afp(p)) <= ss
        assert all(i <= at_step(p, i) for i in ss)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_operator_is_idempotent_on_its_fixpoints(seed):
    for p in random_collection(seed).programs:
        for i in enumerate_afp(p):
            assert at_step(p, at_step(p, i)) == i


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_classical_program_fixpoints_agree(seed):
    # for okay-free, SC-free programs the autonomous and classical operators coincide
    for p in random_colp(seed):
        p = Program(p.id, tuple(r for r in p.rules if not r.okay))
        assert set(enumerate_afp(p)) == set(classical_fixpoints(p))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_hat_fixpoints_equal_afp(seed):
    for p in random_colp(seed):
        assert set(classical_fixpoints(hat_transform(p))) == set(enumerate_afp(p))


def test_afp_cap():
    text = "#program p. " + " ".join(f"a{i}." for i in range(6))
    p = parse_collection(text).programs[0]
    with pytest.raises(CapExceeded) as e:
        enumerate_afp(p, Caps(5, 10, 10))
    assert e.value.size == 6


def test_classical_fixpoints_rejects_social():
    with pytest.raises(ValueError):
        classical_fixpoints(golden("afp_example").program("p"))
