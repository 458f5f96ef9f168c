"""Seeded generators of small random collections for property checks."""

from __future__ import annotations

import random

from .model import (
    Atom,
    Cardinal,
    Collection,
    Literal,
    Member,
    Program,
    Rule,
    SocialCondition,
    SocialLiteral,
    num,
    validate_collection,
)

POOL = tuple(Atom(x) for x in "abcd")


def _literal(rng: random.Random, atoms, neg_p: float = 0.3) -> Literal:
    return Literal(rng.choice(atoms), rng.random() < neg_p)


def _cardinal(rng: random.Random, n: int, cap: int | None = None) -> Cardinal:
    top = n - 1 if cap is None else cap
    h = rng.randint(0, top)
    l = rng.randint(0, h)
    lower = None if l == 0 and rng.random() < 0.5 else num(l)
    upper = None if h == n - 1 and rng.random() < 0.5 else num(h)
    return Cardinal(lower, upper)


def _sc(rng: random.Random, ids, atoms, depth: int, budget: list[int], cap: int | None = None) -> SocialCondition:
    budget[0] -= 1
    n = len(ids)
    content = tuple(dict.fromkeys(_literal(rng, atoms) for _ in range(rng.randint(1, 2))))
    if rng.random() < 0.35:
        return SocialCondition(Member(rng.choice(ids)), content)
    cond = _cardinal(rng, n, cap)
    h = n - 1 if cond.upper is None else int(cond.upper.value)
    skel = []
    while depth > 0 and budget[0] > 0 and rng.random() < 0.5:
        skel.append(_sc(rng, ids, atoms, depth - 1, budget, h))
    return SocialCondition(cond, content, tuple(skel))


def random_collection(seed: int, max_programs: int = 3, max_atoms: int = 3, max_scs: int = 2,
                      max_depth: int = 1, okay: bool = True, constraints: bool = True,
                      max_rules: int = 3) -> Collection:
    """A valid ground collection; atom names are shared so SCs can interact."""
    rng = random.Random(seed)
    pool = POOL[:max_atoms]
    while True:
        n = rng.randint(1, max_programs)
        ids = tuple(f"p{i}" for i in range(1, n + 1))
        programs = []
        for pid in ids:
            atoms = rng.sample(pool, rng.randint(1, len(pool)))
            budget = [max_scs]
            rules = []
            for _ in range(rng.randint(0, max_rules)):
                body = [_literal(rng, atoms) for _ in range(rng.randint(0, 2))]
                if budget[0] > 0 and rng.random() < 0.6:
                    sc = _sc(rng, ids, pool, max_depth, budget)
                    body.insert(rng.randint(0, len(body)), SocialLiteral(sc, rng.random() < 0.15))
                body = list(dict.fromkeys(body))
                if constraints and body and rng.random() < 0.12:
                    rules.append(Rule(None, tuple(body)))
                    continue
                head = rng.choice(atoms)
                rules.append(Rule(head, tuple(body), okay and rng.random() < 0.25))
            programs.append(Program(pid, tuple(rules)))
        c = Collection(tuple(programs))
        if not validate_collection(c):
            return c


def random_colp(seed: int, max_programs: int = 3, max_atoms: int = 4, max_rules: int = 4,
                min_programs: int = 1) -> list[Program]:
    """Programs with classical and okay rules only."""
    rng = random.Random(seed)
    pool = POOL[:max_atoms]
    n = rng.randint(min_programs, max_programs)
    out = []
    for i in range(1, n + 1):
        rules = []
        for _ in range(rng.randint(0, max_rules)):
            body = tuple(dict.fromkeys(_literal(rng, pool) for _ in range(rng.randint(0, 2))))
            rules.append(Rule(rng.choice(pool), body, rng.random() < 0.3))
        out.append(Program(f"q{i}", tuple(rules)))
    return out
