"""Cross-checks between direct social semantics and the compiled program."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import chain, combinations

from .caps import Caps
from .model import Collection, LabeledAtom, sort_models
from .oracle import answer_sets, project_to_social, satisfies
from .social import DEFAULT, Semantics, enumerate_social_models, interpretation_space, sc_truth
from .translate import LpaProgram, LpaRule, base, program_scs, rho, translate_all, translate_collection_scs


@dataclass
class Equivalence:
    ok: bool
    direct: list[frozenset]
    projected: list[frozenset]
    answer_sets: int
    problems: list[str] = field(default_factory=list)

    @property
    def missing(self) -> list[frozenset]:
        return [m for m in self.direct if m not in set(self.projected)]

    @property
    def extra(self) -> list[frozenset]:
        return [m for m in self.projected if m not in set(self.direct)]


def verify_collection(c: Collection, semantics: Semantics = DEFAULT, method: str = "structured",
                      caps: Caps | None = None, backend: str | None = None) -> Equivalence:
    """Projected answer sets of the translation against directly computed social models."""
    direct = enumerate_social_models(c, semantics, caps, backend)
    prog = translate_all(c)
    found = answer_sets(prog, method, caps, backend)
    problems = [f"answer set violates a rule: {sorted(a.render() for a in x)}" for x in found if not satisfies(x, prog)]
    projections = [project_to_social(x, c) for x in found]
    dup = [m for m, k in Counter(projections).items() if k > 1]
    if dup:
        problems.append(f"{len(dup)} social interpretation(s) reached by several answer sets")
    projected = sort_models(c, set(projections))
    ok = not problems and set(projected) == set(direct)
    return Equivalence(ok, direct, projected, len(found), problems)


def facts(m) -> LpaProgram:
    rules = tuple(LpaRule(base(la.atom, la.program), (), "fact") for la in sorted(m, key=str))
    return rules


def sc_atom_check(c: Collection, m, semantics: Semantics = DEFAULT, caps: Caps | None = None,
                  method: str = "structured") -> list[str]:
    """For one social interpretation, every ρ atom derived from the SC rules
    plus facts must agree with direct SC truth. Returns disagreements."""
    sc_prog = translate_collection_scs(c)
    prog = LpaProgram(facts(m) + sc_prog.rules, c.n, c.ids)
    if method == "structured":
        # no guess layer: the program is stratified, so its unique answer set
        # is the derived closure; reuse the generic checker when small enough
        method = "generic"
    found = answer_sets(prog, method, caps)
    if len(found) != 1:
        return [f"expected exactly one answer set, got {len(found)}"]
    answer = found[0]
    out = []
    for p in c.programs:
        for ns in program_scs(p):
            want = sc_truth(c, ns.sc, m, p.id, semantics=semantics)
            got = rho(p.id, ns.rule, ns.index) in answer
            if want != got:
                out.append(f"{p.id} SC {ns.rule}.{ns.index}: direct={want} translated={got}")
    return out


def all_interpretations(c: Collection, limit: int = 1 << 12):
    """Every social interpretation over Var* of each program, up to ``limit``."""
    atoms = [LabeledAtom(a, p.id) for p, vs in zip(c.programs, interpretation_space(c)) for a in vs]
    if (1 << len(atoms)) > limit:
        return None
    return [frozenset(s) for s in chain.from_iterable(combinations(atoms, k) for k in range(len(atoms) + 1))]
