"""Answer sets of translated programs, by exhaustive search.

``generic`` checks every subset of the head atoms against the FLP reduct and
works for any ground program with single-range count literals, up to a small
universe. ``structured`` only accepts output of ``translate_all``: it guesses
the base atoms, derives everything else in dependency order and keeps the
results that satisfy every rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from .caps import Caps
from .errors import CapExceeded, MalformedProgram
from .kernels import MAX_BITS, RuleArrays, answer_set_masks, guess_and_derive
from .model import Collection, LabeledAtom
from .translate import Aux, Count, Lit, LpaProgram, LpaRule


@dataclass(frozen=True)
class GroundLpa:
    """Rules over a fixed universe; count literals expanded to g-atom masks."""

    universe: tuple[Aux, ...]
    n: int
    rules: tuple[tuple, ...]  # (head bit | -1, pos mask, neg mask, (cmask, lo, hi) | None)
    source: tuple[LpaRule, ...]

    def decode(self, mask: int) -> frozenset:
        return frozenset(a for i, a in enumerate(self.universe) if (mask >> i) & 1)

    def arrays(self) -> RuleArrays:
        return RuleArrays(self.rules)


def ground(prog: LpaProgram) -> GroundLpa:
    """Universe = head atoms. Body atoms outside it are false forever: a rule
    needing one positively is dropped, a negative occurrence is dropped."""
    universe: dict[Aux, int] = {}
    for r in prog.rules:
        if r.head is not None:
            universe.setdefault(r.head, len(universe))
    rows = []
    kept = []
    for r in prog.rules:
        pos = neg = 0
        count = None
        dead = False
        for b in r.body:
            if isinstance(b, Lit):
                bit = universe.get(b.atom)
                if bit is None:
                    dead = dead or not b.negated
                elif b.negated:
                    neg |= 1 << bit
                else:
                    pos |= 1 << bit
            else:
                if count is not None:
                    raise MalformedProgram("at most one count literal per rule is supported")
                cmask = 0
                for k in range(1, prog.n + 1):
                    if k != b.exclude and b.g(k) in universe:
                        cmask |= 1 << universe[b.g(k)]
                count = (cmask, b.lower, b.upper)
        if dead:
            continue
        head = -1 if r.head is None else universe[r.head]
        rows.append((head, pos, neg, count))
        kept.append(r)
    return GroundLpa(tuple(universe), prog.n, tuple(rows), tuple(kept))


def _sorted_sets(sets) -> list[frozenset]:
    return sorted(sets, key=lambda s: (len(s), sorted(a.render() for a in s)))


def answer_sets_generic(prog: LpaProgram, caps: Caps | None = None, backend: str | None = None) -> list[frozenset]:
    caps = caps or Caps.from_env()
    g = ground(prog)
    u = len(g.universe)
    if u > caps.oracle_universe:
        raise CapExceeded("oracle universe cap", u, caps.oracle_universe, "generic answer-set backend")
    masks = answer_set_masks(g.arrays(), u, backend)
    return _sorted_sets(g.decode(int(m)) for m in masks)


def _layers(g: GroundLpa):
    """Split a translated program into guess pairs and derivation order."""
    index = {a: i for i, a in enumerate(g.universe)}
    guess_pairs = []
    for a, i in index.items():
        if a.kind == "base":
            prime = Aux("neg", a.program, a.atom)
            if prime not in index:
                raise MalformedProgram(f"{a.render()} has no complementary guess atom")
            guess_pairs.append((i, index[prime]))
    derived = {}
    graph: dict[int, set[int]] = {}
    for r_idx, (r, src) in enumerate(zip(g.rules, g.source)):
        head = src.head
        if head is None or head.kind in ("fail", "base", "neg"):
            if head is not None and head.kind in ("base", "neg") and not _is_guess_rule(src):
                raise MalformedProgram(f"unexpected rule for guessed atom: {src.render()}")
            continue
        if head.kind not in ("sup", "rho", "g"):
            raise MalformedProgram(f"foreign atom kind {head.kind!r}")
        derived.setdefault(r[0], []).append(r_idx)
        deps = set()
        for b in src.body:
            if isinstance(b, Lit) and b.atom in index and b.atom.kind in ("sup", "rho", "g"):
                deps.add(index[b.atom])
            elif isinstance(b, Count):
                deps.update(index[b.g(k)] for k in range(1, g.n + 1) if b.g(k) in index)
        graph.setdefault(r[0], set()).update(deps)
    try:
        order = list(TopologicalSorter(graph).static_order())
    except CycleError as e:
        raise MalformedProgram(f"derived atoms depend on each other cyclically: {e.args[1]}") from e
    rule_order = [ri for atom in order for ri in derived.get(atom, [])]
    return guess_pairs, rule_order


def _is_guess_rule(r: LpaRule) -> bool:
    if len(r.body) != 1 or not isinstance(r.body[0], Lit) or not r.body[0].negated:
        return False
    other = r.body[0].atom
    return {r.head.kind, other.kind} == {"base", "neg"} and r.head.atom == other.atom and r.head.program == other.program


def answer_sets_structured(prog: LpaProgram, backend: str | None = None) -> list[frozenset]:
    g = ground(prog)
    guess_pairs, order = _layers(g)
    if len(g.universe) <= MAX_BITS and backend != "python":
        ra = g.arrays()
        masks = guess_and_derive([a for a, _ in guess_pairs], [b for _, b in guess_pairs], ra, order, ra, backend)
        return _sorted_sets(g.decode(int(m)) for m in masks)
    return _sorted_sets(g.decode(m) for m in _structured_python(g, guess_pairs, order))


def _body_true(x: int, row) -> bool:
    _, pos, neg, count = row
    if x & pos != pos or x & neg:
        return False
    if count is not None:
        c = (x & count[0]).bit_count()
        return count[1] <= c <= count[2]
    return True


def _structured_python(g: GroundLpa, guess_pairs, order):
    # arbitrary-width ints; used for wide universes and as an independent path
    for guess in range(1 << len(guess_pairs)):
        x = 0
        for i, (a, b) in enumerate(guess_pairs):
            x |= 1 << (a if (guess >> i) & 1 else b)
        for ri in order:
            row = g.rules[ri]
            if _body_true(x, row):
                x |= 1 << row[0]
        if all(not _body_true(x, row) or (row[0] >= 0 and (x >> row[0]) & 1) for row in g.rules):
            yield x


def answer_sets(prog: LpaProgram, method: str = "structured", caps: Caps | None = None,
                backend: str | None = None) -> list[frozenset]:
    if method == "generic":
        return answer_sets_generic(prog, caps, backend)
    if method == "structured":
        return answer_sets_structured(prog, backend)
    raise ValueError(f"unknown oracle method {method!r}")


def satisfies(answer: frozenset, prog: LpaProgram) -> bool:
    """Clause-by-clause model check on the structured program, no bitmasks."""
    def lit_true(b) -> bool:
        if isinstance(b, Lit):
            return (b.atom in answer) != b.negated
        c = sum(1 for k in range(1, prog.n + 1) if k != b.exclude and b.g(k) in answer)
        return b.lower <= c <= b.upper

    for r in prog.rules:
        if all(lit_true(b) for b in r.body) and (r.head is None or r.head not in answer):
            return False
    return True


def project_to_social(answer, c: Collection | None = None) -> frozenset:
    """Keep base atoms only, as labelled atoms."""
    out = frozenset(LabeledAtom(a.atom, a.program) for a in answer if a.kind == "base")
    if c is not None:
        unknown = {la.program for la in out} - set(c.ids)
        if unknown:
            raise MalformedProgram(f"answer set mentions unknown programs {sorted(unknown)}")
    return out
