"""Compilation of a collection into one normal program with #count aggregates.

Each program contributes a guess/derive/fail block (every atom guessed true
or false, a support atom derived from each rule, and a failing rule when guess
and support disagree). Each social condition contributes guess rules over
``g`` atoms that record which agents satisfy it, plus a check rule deriving
its ``rho`` atom. Target atoms are kept structured (``Aux``) and rendered to
text only at emission.

Guess rules for an agent whose vocabulary lacks a positive content atom can
never fire; they are omitted by default (``prune=True``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .autonomous import autonomous_reduction, hat_transform
from .errors import TranslationError
from .model import (
    SEPARATOR,
    Atom,
    Collection,
    LabeledAtom,
    Member,
    Program,
    SocialCondition,
    ordered_atoms,
    resolve_bounds,
)

KINDS = ("base", "neg", "sup", "fail", "rho", "g")


@dataclass(frozen=True)
class Aux:
    """A ground atom of the target program."""

    kind: str
    program: str
    atom: Atom | None = None  # base / neg / sup
    rule: int = 0  # rho / g
    index: int = 0
    arg: int | None = None  # g only

    def render(self) -> str:
        pid = self.program
        if self.kind in ("base", "neg", "sup"):
            prefix = {"base": "", "neg": "n", "sup": "s_"}[self.kind]
            name = f"{prefix}{self.atom.predicate}{SEPARATOR}{pid}"
            if self.atom.args:
                name += "(" + ",".join(str(a) for a in self.atom.args) + ")"
            return name
        if self.kind == "fail":
            return f"fail{SEPARATOR}{pid}"
        if self.kind == "rho":
            return f"rho_{self.rule}_{self.index}{SEPARATOR}{pid}"
        return f"g_{self.rule}_{self.index}{SEPARATOR}{pid}({self.arg})"


def base(a: Atom, pid: str) -> Aux:
    return Aux("base", pid, a)


def rho(pid: str, rule: int, index: int) -> Aux:
    return Aux("rho", pid, rule=rule, index=index)


def g_atom(pid: str, rule: int, index: int, k: int) -> Aux:
    return Aux("g", pid, rule=rule, index=index, arg=k)


@dataclass(frozen=True)
class Lit:
    atom: Aux
    negated: bool = False

    def render(self) -> str:
        return ("not " if self.negated else "") + self.atom.render()


@dataclass(frozen=True)
class Count:
    """``lower <= #count{K : g_rule_index@program(K), K != exclude} <= upper``"""

    lower: int
    upper: int
    program: str
    rule: int
    index: int
    exclude: int

    def g(self, k: int) -> Aux:
        return g_atom(self.program, self.rule, self.index, k)

    def render(self) -> str:
        gname = f"g_{self.rule}_{self.index}{SEPARATOR}{self.program}"
        return f"{self.lower} <= #count{{K : {gname}(K), K != {self.exclude}}} <= {self.upper}"


LpaLiteral = Union[Lit, Count]


@dataclass(frozen=True)
class LpaRule:
    head: Aux | None
    body: tuple[LpaLiteral, ...] = ()
    role: str = field(default="", compare=False)  # guess-atom, support, fail, constraint, sc-guess, sc-check

    def render(self) -> str:
        body = ", ".join(b.render() for b in self.body)
        if self.head is None:
            return f":- {body}."
        if not self.body:
            return f"{self.head.render()}."
        return f"{self.head.render()} :- {body}."


@dataclass(frozen=True)
class LpaProgram:
    rules: tuple[LpaRule, ...]
    n: int
    ids: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.rules)

    def __add__(self, other: "LpaProgram") -> "LpaProgram":
        return LpaProgram(self.rules + other.rules, self.n, self.ids)


# -- social conditions -----------------------------------------------------------


@dataclass(frozen=True)
class NumberedSc:
    rule: int
    index: int
    sc: SocialCondition
    children: tuple["NumberedSc", ...]


def number_rule_scs(rule_index: int, top: list[SocialCondition]) -> list[NumberedSc]:
    """Preorder numbering of every SC in a rule, nested ones included."""
    counter = 0

    def visit(s: SocialCondition) -> NumberedSc:
        nonlocal counter
        counter += 1
        idx = counter
        kids = tuple(visit(s2) for s2 in s.skel)
        return NumberedSc(rule_index, idx, s, kids)

    return [visit(s) for s in top]


def vocabularies(c: Collection) -> dict[str, frozenset]:
    """Atoms each program can ever make true: Var(A(P̂))."""
    return {p.id: frozenset(ordered_atoms(autonomous_reduction(hat_transform(p)).rules)) for p in c.programs}


def _content_body(s: SocialCondition, pid: str) -> list[Lit]:
    return [Lit(base(lit.atom, pid), lit.negated) for lit in s.content]


def _guess_possible(s: SocialCondition, vocab: frozenset) -> bool:
    return all(lit.negated or lit.atom in vocab for lit in s.content)


def _guess(ns: NumberedSc, owner: str, c: Collection, vocab, prune: bool) -> list[LpaRule]:
    s, j = ns.sc, c.index(owner)
    out: list[LpaRule] = []
    if isinstance(s.cond, Member):
        pk = s.cond.program_id
        if not prune or _guess_possible(s, vocab[pk]):
            k = c.index(pk)
            out.append(LpaRule(g_atom(owner, ns.rule, ns.index, k), tuple(_content_body(s, pk)), "sc-guess"))
    else:
        nested = [Lit(rho(owner, ch.rule, ch.index)) for ch in ns.children]
        for i, pid in enumerate(c.ids, start=1):
            if i == j or (prune and not _guess_possible(s, vocab[pid])):
                continue
            body = tuple(_content_body(s, pid) + nested)
            out.append(LpaRule(g_atom(owner, ns.rule, ns.index, i), body, "sc-guess"))
    for ch in ns.children:
        out.extend(_guess(ch, owner, c, vocab, prune))
    return out


def _check(ns: NumberedSc, owner: str, c: Collection) -> list[LpaRule]:
    s = ns.sc
    head = rho(owner, ns.rule, ns.index)
    if isinstance(s.cond, Member):
        k = c.index(s.cond.program_id)
        out = [LpaRule(head, (Lit(g_atom(owner, ns.rule, ns.index, k)),), "sc-check")]
    else:
        rb = resolve_bounds(s.cond, c.n)
        cnt = Count(rb.l, rb.h, owner, ns.rule, ns.index, c.index(owner))
        out = [LpaRule(head, (cnt,), "sc-check")]
    for ch in ns.children:
        out.extend(_check(ch, owner, c))
    return out


def translate_sc(ns: NumberedSc, owner: str, c: Collection, prune: bool = True) -> LpaProgram:
    """Guess rules of ``ns`` and its nested SCs, then their check rules."""
    vocab = vocabularies(c)
    rules = _guess(ns, owner, c, vocab, prune) + _check(ns, owner, c)
    return LpaProgram(tuple(rules), c.n, c.ids)


def program_scs(p: Program) -> list[NumberedSc]:
    out: list[NumberedSc] = []
    for ri, r in enumerate(p.rules, start=1):
        out.extend(number_rule_scs(ri, [b.sc for b in r.social]))
    return out


def translate_collection_scs(c: Collection, prune: bool = True) -> LpaProgram:
    vocab = vocabularies(c)
    rules: list[LpaRule] = []
    for p in c.programs:
        for ns in program_scs(p):
            rules.extend(_guess(ns, p.id, c, vocab, prune))
            rules.extend(_check(ns, p.id, c))
    return LpaProgram(tuple(rules), c.n, c.ids)


# -- per-program guess / support / fail -----------------------------------------------


def gamma_prime(p: Program, c: Collection) -> LpaProgram:
    hat = hat_transform(p)
    pid = p.id
    atoms = ordered_atoms(autonomous_reduction(hat).rules)
    guesses: list[LpaRule] = []
    for a in atoms:
        guesses.append(LpaRule(base(a, pid), (Lit(Aux("neg", pid, a), True),), "guess-atom"))
        guesses.append(LpaRule(Aux("neg", pid, a), (Lit(base(a, pid), True),), "guess-atom"))
    supports: list[LpaRule] = []
    for ri, r in enumerate(hat.rules, start=1):
        top = number_rule_scs(ri, [b.sc for b in r.social])
        body = [Lit(base(lit.atom, pid), lit.negated) for lit in r.literals]
        body += [Lit(rho(pid, ns.rule, ns.index), sl.negated) for ns, sl in zip(top, r.social)]
        if r.head is None:
            supports.append(LpaRule(None, tuple(body), "constraint"))
        else:
            supports.append(LpaRule(Aux("sup", pid, r.head), tuple(body), "support"))
    fails: list[LpaRule] = []
    fail = Aux("fail", pid)
    for a in atoms:
        sa, ba = Aux("sup", pid, a), base(a, pid)
        fails.append(LpaRule(fail, (Lit(fail, True), Lit(sa), Lit(ba, True)), "fail"))
        fails.append(LpaRule(fail, (Lit(fail, True), Lit(ba), Lit(sa, True)), "fail"))
    return LpaProgram(tuple(guesses + supports + fails), c.n, c.ids)


def translate_all(c: Collection, prune: bool = True) -> LpaProgram:
    rules: list[LpaRule] = []
    for p in c.programs:
        rules.extend(gamma_prime(p, c).rules)
    return LpaProgram(tuple(rules), c.n, c.ids) + translate_collection_scs(c, prune)


# -- text -------------------------------------------------------------------------


def atoms_of(prog: LpaProgram):
    for r in prog.rules:
        if r.head is not None:
            yield r.head
        for b in r.body:
            if isinstance(b, Lit):
                yield b.atom
            else:
                for k in range(1, prog.n + 1):
                    yield b.g(k)


def check_names(prog: LpaProgram) -> None:
    seen: dict[str, Aux] = {}
    for a in atoms_of(prog):
        name = a.render()
        other = seen.setdefault(name, a)
        if other != a:
            raise TranslationError(f"emitted name '{name}' is shared by two different atoms ({other.kind}, {a.kind}); rename a predicate")


def emit_text(prog: LpaProgram) -> str:
    check_names(prog)
    return "".join(r.render() + "\n" for r in prog.rules)


_COUNT_RE = re.compile(
    r"^(-?\d+) <= #count\{K : (g_\d+_\d+__[a-z][A-Za-z0-9_]*)\(K\), K != (\d+)\} <= (-?\d+)$"
)


def _split_body(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur).strip())
    return parts


def read_text(text: str) -> list[tuple]:
    """Parse emitted text into ``(head, body)`` tuples of plain strings.

    Body items are ``("lit", name, negated)`` or
    ``("count", lower, g_name, exclude, upper)``; ``head`` is None for a
    constraint. Used to check emission against the structured program."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if not line.endswith("."):
            raise TranslationError(f"line {lineno}: missing '.'")
        line = line[:-1]
        head, sep, body = line.partition(":-")
        head = head.strip() or None
        items = []
        if sep:
            for part in _split_body(body.strip()):
                m = _COUNT_RE.match(part)
                if m:
                    items.append(("count", int(m[1]), m[2], int(m[3]), int(m[4])))
                elif part.startswith("not "):
                    items.append(("lit", part[4:].strip(), True))
                else:
                    items.append(("lit", part, False))
        out.append((head, tuple(items)))
    return out


def as_text_tuples(prog: LpaProgram) -> list[tuple]:
    """The structured program in the same shape ``read_text`` produces."""
    out = []
    for r in prog.rules:
        items = []
        for b in r.body:
            if isinstance(b, Lit):
                items.append(("lit", b.atom.render(), b.negated))
            else:
                items.append(("count", b.lower, f"g_{b.rule}_{b.index}{SEPARATOR}{b.program}", b.exclude, b.upper))
        out.append((None if r.head is None else r.head.render(), tuple(items)))
    return out


_ARGS_RE = re.compile(r"^([^()]*)(?:\((.*)\))?$")


def unmangle_base(name: str, c: Collection) -> LabeledAtom:
    """Recover ``a@P`` from a rendered base-atom name."""
    m = _ARGS_RE.match(name)
    stem = m[1] if m else ""
    for pid in c.ids:
        suffix = SEPARATOR + pid
        if stem.endswith(suffix) and len(stem) > len(suffix):
            pred = stem[: -len(suffix)]
            args = ()
            if m[2]:
                args = tuple(int(x) if x.lstrip("-").isdigit() else x for x in m[2].split(","))
            return LabeledAtom(Atom(pred, args), pid)
    raise TranslationError(f"cannot un-mangle '{name}'")
