"""Agents in isolation: SC removal, the tolerance rewrite, and autonomous fixpoints."""

from __future__ import annotations

from dataclasses import replace
from itertools import combinations

import numpy as np

from .caps import Caps
from .errors import CapExceeded
from .kernels import RuleArrays, consequence_scan
from .model import Atom, Literal, Program, Rule, ordered_atoms


def autonomous_reduction(p: Program) -> Program:
    """Drop every social body element; heads, literals and rule count are kept."""
    return Program(p.id, tuple(replace(r, body=r.literals) for r in p.rules))


def hat_transform(p: Program) -> Program:
    """Rewrite each ``okay(a) :- body`` as ``a :- a, body``."""
    out = []
    for r in p.rules:
        if r.okay:
            out.append(Rule(r.head, (Literal(r.head),) + r.body, False, r.span))
        else:
            out.append(r)
    return Program(p.id, tuple(out))


def var_star(p: Program) -> list[Atom]:
    """Atoms of A(P) with okay-wrappers stripped, in first-occurrence order."""
    return ordered_atoms(autonomous_reduction(p).rules)


def at_step(p: Program, i) -> frozenset:
    """One application of the autonomous consequence operator."""
    i = frozenset(i)
    out = set()
    for r in autonomous_reduction(p).rules:
        if r.head is None:
            continue
        if all((lit.atom in i) != lit.negated for lit in r.literals):
            if not r.okay or r.head in i:
                out.add(r.head)
    return frozenset(out)


def literal_constraints(p: Program) -> list[Rule]:
    """Constraints with no social element; only these can restrict AFP."""
    return [r for r in p.rules if r.is_constraint and not r.social]


def violates(constraints, i) -> bool:
    return any(all((lit.atom in i) != lit.negated for lit in r.literals) for r in constraints)


class AutonomousTable:
    """A(P) packed for the kernels over the atom order of ``var_star``."""

    def __init__(self, p: Program):
        self.program = p
        self.atoms = var_star(p)
        self.index = {a: k for k, a in enumerate(self.atoms)}
        rows = []
        for r in autonomous_reduction(p).rules:
            if r.head is None:
                continue
            pos, neg = self._masks(r)
            head = self.index[r.head]
            if r.okay:
                pos |= 1 << head
            rows.append((head, pos, neg))
        # constraints are packed separately so callers choose which apply
        for r in literal_constraints(p):
            rows.append((-1, *self._masks(r)))
        self.rules = RuleArrays(rows)

    def _masks(self, r: Rule) -> tuple[int, int]:
        pos = neg = 0
        for lit in r.literals:
            bit = 1 << self.index[lit.atom]
            if lit.negated:
                neg |= bit
            else:
                pos |= bit
        return pos, neg

    @property
    def k(self) -> int:
        return len(self.atoms)

    def decode(self, mask: int) -> frozenset:
        return frozenset(a for b, a in enumerate(self.atoms) if (mask >> b) & 1)

    def scan(self, caps: Caps | None = None, backend: str | None = None):
        limit = (caps or Caps.from_env()).afp_atoms
        if self.k > limit:
            raise CapExceeded("afp-atom limit", self.k, limit,
                              f"program {self.program.id} has {self.k} atoms")
        return consequence_scan(self.rules, self.k, backend)


def enumerate_afp(p: Program, caps: Caps | None = None, backend: str | None = None) -> list[frozenset]:
    """All autonomous fixpoints, restricted to interpretations that violate
    no SC-free constraint. Ordered by size, then by atom order."""
    table = AutonomousTable(p)
    t, viol = table.scan(caps, backend)
    x = np.arange(t.shape[0], dtype=np.int64)
    masks = x[(t == x) & ~viol]
    return [table.decode(int(m)) for m in _mask_order(masks)]


def self_supporting(p: Program, caps: Caps | None = None, backend: str | None = None) -> list[frozenset]:
    """Interpretations I with I ⊆ AT_P(I) and no SC-free constraint violated.

    Any per-program slice of a social fixpoint has this property, because
    social conditions can only remove derivations that A(P) would allow."""
    table = AutonomousTable(p)
    t, viol = table.scan(caps, backend)
    x = np.arange(t.shape[0], dtype=np.int64)
    masks = x[((t & x) == x) & ~viol]
    return [table.decode(int(m)) for m in _mask_order(masks)]


def _mask_order(masks):
    return sorted((int(m) for m in masks), key=lambda m: (m.bit_count(), m))


# -- classical consequence operator, kept independent of the kernels ------------


def tp_step(rules, i) -> frozenset:
    """Classical T_P over SC-free, okay-free rules; constraints are ignored."""
    return frozenset(
        r.head for r in rules
        if r.head is not None and all((lit.atom in i) != lit.negated for lit in r.literals)
    )


def classical_fixpoints(p: Program) -> list[frozenset]:
    """Fixpoints of T_P by direct subset enumeration (no bit tricks)."""
    if any(r.social or r.okay for r in p.rules):
        raise ValueError("classical_fixpoints takes SC-free, okay-free programs")
    atoms = ordered_atoms(p.rules)
    constraints = [r for r in p.rules if r.is_constraint]
    out = []
    for size in range(len(atoms) + 1):
        for combo in combinations(atoms, size):
            i = frozenset(combo)
            if tp_step(p.rules, i) == i and not violates(constraints, i):
                out.append(i)
    return out
