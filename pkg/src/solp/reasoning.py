"""Decision problems over social models, and the bridge to joint fixpoints."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .autonomous import classical_fixpoints, enumerate_afp, hat_transform, tp_step
from .caps import Caps
from .errors import CapExceeded
from .model import (
    Atom,
    Cardinal,
    Collection,
    LabeledAtom,
    Literal,
    Program,
    Rule,
    SocialCondition,
    SocialLiteral,
    is_colp,
    label,
    num,
    ordered_atoms,
    sort_models,
)
from .social import Semantics, enumerate_social_models, split

MODES = ("ss", "is", "sc", "ic")


@dataclass(frozen=True)
class QueryVerdict:
    mode: str
    atom: Atom
    answer: bool
    # (model, programs): the satisfying model for credulous modes, the
    # refuting model for a failed skeptical mode; programs holding the atom
    witnesses: tuple[tuple[frozenset, tuple[str, ...]], ...] = ()
    vacuous: bool = False


def holders(c: Collection, m, x: Atom) -> tuple[str, ...]:
    return tuple(pid for pid in c.ids if LabeledAtom(x, pid) in m)


def query(c: Collection, x: Atom, mode: str, models=None, semantics: Semantics = Semantics(),
          caps: Caps | None = None) -> QueryVerdict:
    mode = mode.lower()
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if models is None:
        models = enumerate_social_models(c, semantics, caps)
    if not models:
        return QueryVerdict(mode, x, mode in ("ss", "is"), (), True)
    n = c.n
    for m in models:
        h = holders(c, m, x)
        everyone, someone = len(h) == n, bool(h)
        if mode == "ss" and not everyone or mode == "is" and not someone:
            return QueryVerdict(mode, x, False, ((m, h),))
        if mode == "sc" and everyone or mode == "ic" and someone:
            return QueryVerdict(mode, x, True, ((m, h),))
    if mode in ("ss", "is"):
        return QueryVerdict(mode, x, True, tuple((m, holders(c, m, x)) for m in models))
    return QueryVerdict(mode, x, False)


def decide(c: Collection, x: Atom, mode: str, models) -> bool:
    """The four problems written directly as quantifiers over models and programs."""
    labelled = [LabeledAtom(x, pid) for pid in c.ids]
    return {
        "ss": all(all(a in m for a in labelled) for m in models),
        "is": all(any(a in m for a in labelled) for m in models),
        "sc": any(all(a in m for a in labelled) for m in models),
        "ic": any(any(a in m for a in labelled) for m in models),
    }[mode.lower()]


def witness_valid(c: Collection, v: QueryVerdict) -> bool:
    """A reported witness really justifies (or refutes) the verdict."""
    for m, progs in v.witnesses:
        if progs != holders(c, m, v.atom):
            return False
        full = len(progs) == c.n
        if v.mode == "sc" and v.answer and not full:
            return False
        if v.mode == "ic" and v.answer and not progs:
            return False
        if v.mode == "ss" and not v.answer and full:
            return False
        if v.mode == "is" and not v.answer and progs:
            return False
    return True


# -- compromise programs --------------------------------------------------------


def sigma_translate(p: Program, n: int) -> Program:
    """Each rule also demands its head from all n-1 other agents."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not is_colp(p):
        raise ValueError(f"program {p.id} is not a compromise program (SCs or constraints present)")
    bound = num(n - 1)
    out = []
    for r in p.rules:
        sc = SocialCondition(Cardinal(bound, bound), (Literal(r.head),))
        out.append(Rule(r.head, (SocialLiteral(sc),) + r.body, r.okay, r.span))
    return Program(p.id, tuple(out))


def sigma_collection(ps: list[Program]) -> Collection:
    return Collection(tuple(sigma_translate(p, len(ps)) for p in ps))


def fixpoints_over(p: Program, vocabulary) -> list[frozenset]:
    """Fixpoints of T_P̂ among subsets of ``vocabulary`` (plain enumeration)."""
    rules = hat_transform(p).rules
    vocab = list(vocabulary)
    out = []
    for size in range(len(vocab) + 1):
        for combo in combinations(vocab, size):
            i = frozenset(combo)
            if tp_step(rules, i) == i:
                out.append(i)
    return out


def joint_fixpoints(ps: list[Program], caps: Caps | None = None) -> list[frozenset]:
    caps = caps or Caps.from_env()
    vocab: dict[Atom, None] = {}
    for p in ps:
        vocab.update(dict.fromkeys(ordered_atoms(hat_transform(p).rules)))
    if len(vocab) > caps.afp_atoms:
        raise CapExceeded("afp-atom limit", len(vocab), caps.afp_atoms, "joint vocabulary")
    shared = None
    for p in ps:
        fps = set(fixpoints_over(p, vocab))
        shared = fps if shared is None else shared & fps
    return sorted(shared or [], key=lambda s: (len(s), sorted(a.sort_key() for a in s)))


@dataclass
class JfpReport:
    ok: bool
    social: list[frozenset]
    joint: list[frozenset]
    expected: list[frozenset]
    sigma_ok: bool
    uniform: bool
    notes: list[str] = field(default_factory=list)


def check_joint_fixpoints(ps: list[Program], semantics: Semantics = Semantics("afp", "exact"),
                      caps: Caps | None = None, sigma_range=range(1, 5)) -> JfpReport:
    """Compare social models of the σ-translated collection with joint fixpoints."""
    c = sigma_collection(ps)
    social = enumerate_social_models(c, semantics, caps)
    joint = joint_fixpoints(ps, caps)
    expected = sort_models(c, [frozenset().union(*(label(f, p.id) for p in ps)) for f in joint])
    notes: list[str] = []
    sigma_ok = True
    for p in ps:
        fp = set(classical_fixpoints(hat_transform(p)))
        for k in sigma_range:
            afp = set(enumerate_afp(sigma_translate(p, k), caps))
            if fp != afp:
                sigma_ok = False
                notes.append(f"FP(P̂) != AFP(σ^{k}(P)) for {p.id}")
    uniform = all(len(set(split(c, m).values())) <= 1 for m in social)
    if not uniform:
        notes.append("a social model has differing per-program projections")
    ok = set(social) == set(expected) and sigma_ok and uniform
    if set(social) != set(expected):
        notes.append(f"social models {len(social)} vs joint fixpoints {len(expected)}")
    return JfpReport(ok, social, joint, expected, sigma_ok, uniform, notes)
