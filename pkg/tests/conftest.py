from decimal import Decimal
from pathlib import Path

import pytest
from hypothesis import strategies as st

from solp.model import (
    AgentCount,
    Atom,
    BinOp,
    Cardinal,
    Collection,
    Literal,
    Member,
    Neg,
    Num,
    Program,
    Rule,
    SocialCondition,
    SocialLiteral,
)
from solp.parser import load_sources, parse_collection

GOLDEN = Path(__file__).parent / "golden"
VALID_GOLDEN = ["wedding", "afp_example", "constraint", "constraint_primed", "party",
                "sharing", "example4_good", "compromise"]


def golden(name: str) -> Collection:
    return parse_collection(load_sources([GOLDEN / f"{name}.solp"]))


@pytest.fixture(scope="session")
def wedding() -> Collection:
    return golden("wedding")


def la(text: str):
    """'go_wedding@p1' -> LabeledAtom"""
    from solp.model import LabeledAtom
    from solp.parser import parse_atom

    atom, pid = text.split("@")
    return LabeledAtom(parse_atom(atom), pid)


def model(*items) -> frozenset:
    return frozenset(la(x) for x in items)


# -- hypothesis strategies for arbitrary (not necessarily valid) ASTs -----------

ATOMS = st.sampled_from([Atom("a"), Atom("b"), Atom("go"), Atom("share", ("x",)), Atom("f", (1, "y"))])
literals = st.builds(Literal, ATOMS, st.booleans())

decimals = st.one_of(
    st.integers(0, 20).map(Decimal),
    st.decimals(min_value=0, max_value=10, places=2, allow_nan=False, allow_infinity=False),
)
bound_exprs = st.recursive(
    st.one_of(decimals.map(Num), st.just(AgentCount())),
    lambda inner: st.one_of(
        st.builds(BinOp, st.sampled_from("+-*/"), inner, inner),
        st.builds(Neg, inner),
    ),
    max_leaves=5,
)
selections = st.one_of(
    st.sampled_from(["p1", "p2", "p3"]).map(Member),
    st.builds(Cardinal, st.none() | bound_exprs, st.none() | bound_exprs),
)
social_conditions = st.recursive(
    st.builds(SocialCondition, selections, st.lists(literals, min_size=1, max_size=3).map(tuple)),
    lambda inner: st.builds(
        SocialCondition, selections, st.lists(literals, min_size=1, max_size=2).map(tuple),
        st.lists(inner, min_size=1, max_size=2).map(tuple),
    ),
    max_leaves=4,
)
body_elements = st.one_of(literals, st.builds(SocialLiteral, social_conditions, st.booleans()))


@st.composite
def rules(draw):
    body = tuple(draw(st.lists(body_elements, max_size=3)))
    kind = draw(st.sampled_from(["plain", "okay", "constraint"]))
    if kind == "constraint" and body:
        return Rule(None, body)
    return Rule(draw(ATOMS), body, kind == "okay")


@st.composite
def collections(draw):
    k = draw(st.integers(1, 3))
    return Collection(tuple(
        Program(f"p{i}", tuple(draw(st.lists(rules(), max_size=3)))) for i in range(1, k + 1)
    ))
