"""Collection-level semantics: SC truth, the social consequence operator, social models.

Two switches select how the definitions are read (see ``Semantics``):

* ``candidates`` -- which per-program interpretations are tried. ``"all"``
  tries every interpretation that A(P) could support; ``"afp"`` only tries
  autonomous fixpoints.
* ``cardinality`` -- how a cardinal range ``[l,h]`` is judged. ``"exact"``
  counts every other agent satisfying the content and requires the count to
  lie in ``[l,h]`` (nested conditions are judged for the evaluating agent
  against the whole collection). ``"witness"`` asks for some group D of
  other agents with ``l <= |D| <= h``, each satisfying the content, and for
  every nested condition some sub-group of D satisfying it.

The defaults (``all`` + ``exact``) coincide with the aggregate translation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

from .autonomous import enumerate_afp, self_supporting, var_star
from .caps import Caps
from .errors import CapExceeded
from .model import (
    Collection,
    LabeledAtom,
    Literal,
    Member,
    Program,
    Rule,
    SocialCondition,
    resolve_bounds,
    sort_models,
)

CANDIDATE_MODES = ("all", "afp")
CARDINALITY_MODES = ("exact", "witness")


@dataclass(frozen=True)
class Semantics:
    candidates: str = "all"
    cardinality: str = "exact"

    def __post_init__(self):
        if self.candidates not in CANDIDATE_MODES:
            raise ValueError(f"candidates must be one of {CANDIDATE_MODES}")
        if self.cardinality not in CARDINALITY_MODES:
            raise ValueError(f"cardinality must be one of {CARDINALITY_MODES}")


DEFAULT = Semantics()
LITERAL = Semantics("afp", "witness")


def split(c: Collection, m) -> dict[str, frozenset]:
    """Per-program view of a social interpretation."""
    out: dict[str, set] = {pid: set() for pid in c.ids}
    for la in m:
        out.setdefault(la.program, set()).add(la.atom)
    return {k: frozenset(v) for k, v in out.items()}


def join(c: Collection, parts) -> frozenset:
    return frozenset(LabeledAtom(a, pid) for pid, atoms in zip(c.ids, parts) for a in atoms)


class Evaluator:
    """Truth of literals, SCs and rule bodies w.r.t. one social interpretation."""

    def __init__(self, c: Collection, m, semantics: Semantics = DEFAULT):
        self.c = c
        self.sem = semantics
        self.view = split(c, m)
        self.everyone = frozenset(c.ids)
        self._cache: dict = {}

    def literal(self, lit: Literal, pid: str) -> bool:
        return (lit.atom in self.view.get(pid, ())) != lit.negated

    def content(self, s: SocialCondition, pid: str) -> bool:
        return all(self.literal(lit, pid) for lit in s.content)

    def sc(self, s: SocialCondition, pj: str, active: frozenset | None = None) -> bool:
        active = self.everyone if active is None else active
        key = (s, pj, active)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self._sc(s, pj, active)
        return hit

    def _sc(self, s: SocialCondition, pj: str, active: frozenset) -> bool:
        if isinstance(s.cond, Member):
            pk = s.cond.program_id
            return pk in active and self.content(s, pk)
        rb = resolve_bounds(s.cond, self.c.n)
        support = [pid for pid in self.c.ids if pid in active and pid != pj and self.content(s, pid)]
        if self.sem.cardinality == "exact":
            nested = all(self.sc(s2, pj) for s2 in s.skel)
            count = len(support) if nested else 0
            return rb.l <= count <= rb.h
        for size in range(rb.l, min(rb.h, len(support)) + 1):
            for group in combinations(support, size):
                if all(self._some_subgroup(s2, pj, group) for s2 in s.skel):
                    return True
        return False

    def _some_subgroup(self, s: SocialCondition, pj: str, group) -> bool:
        for size in range(len(group) + 1):
            for sub in combinations(group, size):
                if self.sc(s, pj, frozenset(sub)):
                    return True
        return False

    def body(self, r: Rule, pid: str) -> bool:
        for b in r.body:
            if isinstance(b, Literal):
                if not self.literal(b, pid):
                    return False
            elif self.sc(b.sc, pid) == b.negated:
                return False
        return True

    def fires(self, r: Rule, pid: str) -> bool:
        """Head would be produced by the consequence operator."""
        if r.head is None or not self.body(r, pid):
            return False
        return not r.okay or r.head in self.view.get(pid, ())


def sc_truth(c: Collection, s: SocialCondition, m, pj: str, active=None,
             semantics: Semantics = DEFAULT, negated: bool = False) -> bool:
    """Is ``s`` (or ``not s``) true for program ``pj`` within ``active``?"""
    value = Evaluator(c, m, semantics).sc(s, pj, None if active is None else frozenset(active))
    return value != negated


def st_step(c: Collection, m, semantics: Semantics = DEFAULT) -> frozenset:
    ev = Evaluator(c, m, semantics)
    return frozenset(
        LabeledAtom(r.head, p.id) for p in c.programs for r in p.rules if ev.fires(r, p.id)
    )


def violated_constraints(c: Collection, m, semantics: Semantics = DEFAULT) -> list[tuple[str, int]]:
    ev = Evaluator(c, m, semantics)
    return [
        (p.id, i) for p in c.programs for i, r in enumerate(p.rules, 1)
        if r.is_constraint and ev.body(r, p.id)
    ]


def is_social_model(c: Collection, m, semantics: Semantics = DEFAULT) -> bool:
    m = frozenset(m)
    ev = Evaluator(c, m, semantics)
    produced = frozenset(
        LabeledAtom(r.head, p.id) for p in c.programs for r in p.rules if ev.fires(r, p.id)
    )
    if produced != m:
        return False
    return not any(r.is_constraint and ev.body(r, p.id) for p in c.programs for r in p.rules)


def candidate_parts(c: Collection, semantics: Semantics = DEFAULT, caps: Caps | None = None,
                    backend: str | None = None) -> list[list[frozenset]]:
    caps = caps or Caps.from_env()
    pick = enumerate_afp if semantics.candidates == "afp" else self_supporting
    parts = [pick(p, caps, backend) for p in c.programs]
    size = math.prod(len(x) for x in parts)
    if size > caps.candidates:
        raise CapExceeded("candidate cap", size, caps.candidates,
                          "product of per-program candidate interpretations")
    return parts


def enumerate_social_models(c: Collection, semantics: Semantics = DEFAULT, caps: Caps | None = None,
                            backend: str | None = None) -> list[frozenset]:
    """All social models, in canonical order."""
    parts = candidate_parts(c, semantics, caps, backend)
    found = [m for m in map(lambda ps: join(c, ps), product(*parts)) if is_social_model(c, m, semantics)]
    return sort_models(c, found)


def is_supported(c: Collection, m, semantics: Semantics = DEFAULT) -> bool:
    """Every labelled atom has a rule of its own program that justifies it."""
    ev = Evaluator(c, m, semantics)
    for la in m:
        try:
            p: Program = c.program(la.program)
        except ValueError:
            return False
        if not any(r.head == la.atom and ev.fires(r, p.id) for r in p.rules):
            return False
    return True


def interpretation_space(c: Collection) -> list[list]:
    """Var* of every program, the universe any social interpretation draws from."""
    return [var_star(p) for p in c.programs]
