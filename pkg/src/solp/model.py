"""SOLP abstract syntax, labelled interpretations and structural queries.

Everything here is an immutable value. Source spans ride along on rules and
social conditions for diagnostics but never take part in equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterator, Union

from .errors import BoundsError, Diagnostic

SEPARATOR = "__"
RESERVED_WORDS = frozenset({"okay", "not"})

Const = Union[str, int]


def _const_key(c: Const):
    return (0, c, "") if isinstance(c, int) else (1, 0, c)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Const, ...] = ()

    def sort_key(self):
        return (self.predicate, len(self.args), tuple(_const_key(a) for a in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else str(self.atom)


# -- bound expressions -------------------------------------------------------


class BoundExpr:
    """Arithmetic over the agent count ``n``; evaluated exactly with Fractions."""

    def evaluate(self, n: int) -> Fraction:
        raise NotImplementedError


@dataclass(frozen=True)
class Num(BoundExpr):
    value: Decimal

    def evaluate(self, n: int) -> Fraction:
        return Fraction(self.value)


@dataclass(frozen=True)
class AgentCount(BoundExpr):
    def evaluate(self, n: int) -> Fraction:
        return Fraction(n)


@dataclass(frozen=True)
class Neg(BoundExpr):
    operand: BoundExpr

    def evaluate(self, n: int) -> Fraction:
        return -self.operand.evaluate(n)


@dataclass(frozen=True)
class BinOp(BoundExpr):
    op: str
    left: BoundExpr
    right: BoundExpr

    def evaluate(self, n: int) -> Fraction:
        a, b = self.left.evaluate(n), self.right.evaluate(n)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if b == 0:
            raise BoundsError("division by zero in selection bound")
        return a / b


def num(value) -> Num:
    return Num(Decimal(str(value)))


# -- selection and social conditions ------------------------------------------


@dataclass(frozen=True)
class Member:
    program_id: str


@dataclass(frozen=True)
class Cardinal:
    lower: BoundExpr | None = None
    upper: BoundExpr | None = None


SelectionCondition = Union[Member, Cardinal]


@dataclass(frozen=True)
class ResolvedBounds:
    l: int
    h: int


@dataclass(frozen=True)
class SocialCondition:
    cond: SelectionCondition
    content: tuple[Literal, ...]
    skel: tuple["SocialCondition", ...] = ()
    span: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    @property
    def simple(self) -> bool:
        return not self.skel

    def walk(self) -> Iterator["SocialCondition"]:
        """Preorder traversal: self first, then each nested SC in order."""
        yield self
        for s in self.skel:
            yield from s.walk()


@dataclass(frozen=True)
class SocialLiteral:
    sc: SocialCondition
    negated: bool = False


BodyElement = Union[Literal, SocialLiteral]


@dataclass(frozen=True)
class Rule:
    head: Atom | None
    body: tuple[BodyElement, ...] = ()
    okay: bool = False
    span: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def literals(self) -> tuple[Literal, ...]:
        return tuple(b for b in self.body if isinstance(b, Literal))

    @property
    def social(self) -> tuple[SocialLiteral, ...]:
        return tuple(b for b in self.body if isinstance(b, SocialLiteral))


@dataclass(frozen=True)
class Program:
    id: str
    rules: tuple[Rule, ...] = ()


@dataclass(frozen=True)
class Collection:
    programs: tuple[Program, ...]

    @property
    def n(self) -> int:
        return len(self.programs)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.programs)

    def index(self, program_id: str) -> int:
        """1-based position of a program, as used in g-arguments."""
        return self.ids.index(program_id) + 1

    def program(self, program_id: str) -> Program:
        return self.programs[self.index(program_id) - 1]


@dataclass(frozen=True)
class LabeledAtom:
    atom: Atom
    program: str

    def __str__(self) -> str:
        return f"{self.atom}@{self.program}"


Interpretation = frozenset  # of Atom
SocialInterpretation = frozenset  # of LabeledAtom


def label(atoms, program_id: str) -> frozenset:
    return frozenset(LabeledAtom(a, program_id) for a in atoms)


def social_sort_key(c: Collection):
    order = {pid: i for i, pid in enumerate(c.ids)}

    def key(la: LabeledAtom):
        return (order.get(la.program, len(order)), la.program, la.atom.sort_key())

    return key


def canonical_model(c: Collection, m) -> tuple[LabeledAtom, ...]:
    return tuple(sorted(m, key=social_sort_key(c)))


def sort_models(c: Collection, models) -> list[frozenset]:
    key = social_sort_key(c)
    return sorted(
        (frozenset(m) for m in models),
        key=lambda m: (len(m), [key(a) for a in sorted(m, key=key)]),
    )


# -- structural queries ------------------------------------------------------


def vars_of(p: Program) -> frozenset[Atom]:
    """Var(P): every atom in heads (okay-arguments included), bodies and SCs."""
    out: set[Atom] = set()
    for r in p.rules:
        if r.head is not None:
            out.add(r.head)
        for b in r.body:
            if isinstance(b, Literal):
                out.add(b.atom)
            else:
                for s in b.sc.walk():
                    out.update(lit.atom for lit in s.content)
    return frozenset(out)


def ordered_atoms(rules) -> list[Atom]:
    """Atoms of SC-free rules in first-occurrence order (head before body)."""
    seen: dict[Atom, None] = {}
    for r in rules:
        if r.head is not None:
            seen.setdefault(r.head)
        for lit in r.literals:
            seen.setdefault(lit.atom)
    return list(seen)


def msc_at_depth(r: Rule, k: int) -> list[SocialCondition]:
    level = [b.sc for b in r.social]
    for _ in range(k):
        level = [s2 for s in level for s2 in s.skel]
    return level


@dataclass(frozen=True)
class ScRef:
    """Position of an SC inside its program: (rule, preorder) numbering."""

    rule: int  # 1-based rule index
    index: int  # 1-based preorder index within the rule
    depth: int
    sc: SocialCondition


def usc_of(p: Program) -> list[ScRef]:
    out: list[ScRef] = []
    for ri, r in enumerate(p.rules, start=1):
        counter = 0

        def visit(s: SocialCondition, depth: int):
            nonlocal counter
            counter += 1
            out.append(ScRef(ri, counter, depth, s))
            for s2 in s.skel:
                visit(s2, depth + 1)

        for b in r.social:
            visit(b.sc, 0)
    return out


# -- bounds and well-formedness ----------------------------------------------


def _floor_upper(c: Cardinal, n: int) -> int:
    return n - 1 if c.upper is None else math.floor(c.upper.evaluate(n))


def resolve_bounds(c: Cardinal, n: int) -> ResolvedBounds:
    if n < 1:
        raise BoundsError("a collection has at least one program")
    lo = 0 if c.lower is None else math.ceil(c.lower.evaluate(n))
    hi = _floor_upper(c, n)
    lo, hi = max(lo, 0), min(hi, n - 1)
    if lo > hi:
        raise BoundsError(f"unsatisfiable selection bounds [{lo},{hi}] for n={n}")
    return ResolvedBounds(lo, hi)


def check_well_formed(s: SocialCondition, n: int) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def err(node: SocialCondition, msg: str):
        line, col = node.span or (None, None)
        diags.append(Diagnostic("error", msg, line, col))

    if s.simple:
        return diags
    if isinstance(s.cond, Member):
        err(s, f"member social condition [{s.cond.program_id}] must be simple")
        return diags
    h = _floor_upper(s.cond, n)
    for child in s.skel:
        if isinstance(child.cond, Member):
            if not child.simple:
                err(child, f"nested member condition [{child.cond.program_id}] must be simple")
        else:
            h2 = _floor_upper(child.cond, n)
            if h2 > h:
                err(child, f"nested upper bound {h2} exceeds enclosing upper bound {h}")
            diags.extend(check_well_formed(child, n))
    return diags


def validate_collection(c: Collection, sources: dict[str, str] | None = None) -> list[Diagnostic]:
    """Collect every validation problem; an empty list means the collection is valid.

    ``sources`` maps program ids to the file they came from, for diagnostics."""
    diags: list[Diagnostic] = []
    sources = sources or {}
    current: list[str | None] = [None]

    def err(msg, span=None):
        line, col = span or (None, None)
        diags.append(Diagnostic("error", msg, line, col, current[0]))

    if c.n < 1:
        err("a collection needs at least one program")
        return diags
    seen: set[str] = set()
    for p in c.programs:
        current[0] = sources.get(p.id)
        if p.id in seen:
            err(f"duplicate program id '{p.id}'")
        seen.add(p.id)
        if SEPARATOR in p.id:
            err(f"program id '{p.id}' contains reserved separator '{SEPARATOR}'")
    ids = set(c.ids)
    for p in c.programs:
        current[0] = sources.get(p.id)
        for r in p.rules:
            if r.is_constraint and not r.body:
                err(f"{p.id}: integrity constraint with empty body", r.span)
            for a in _atoms_of_rule(r):
                if SEPARATOR in a.predicate:
                    err(f"{p.id}: predicate '{a.predicate}' contains reserved separator", r.span)
                if a.predicate in RESERVED_WORDS:
                    err(f"{p.id}: '{a.predicate}' is reserved", r.span)
                for arg in a.args:
                    if isinstance(arg, str) and (not arg or not arg[0].islower()):
                        err(f"{p.id}: variables unsupported (found '{arg}')", r.span)
            for b in r.social:
                for s in b.sc.walk():
                    if not s.content:
                        err(f"{p.id}: social condition with empty content", s.span)
                    if isinstance(s.cond, Member):
                        if s.cond.program_id not in ids:
                            err(f"{p.id}: unknown program '{s.cond.program_id}' in member condition", s.span)
                    else:
                        try:
                            resolve_bounds(s.cond, c.n)
                        except BoundsError as e:
                            err(f"{p.id}: {e}", s.span)
                for d in check_well_formed(b.sc, c.n):
                    diags.append(Diagnostic(d.severity, f"{p.id}: {d.message}", d.line, d.column, current[0]))
    return diags


def _atoms_of_rule(r: Rule) -> Iterator[Atom]:
    if r.head is not None:
        yield r.head
    for b in r.body:
        if isinstance(b, Literal):
            yield b.atom
        else:
            for s in b.sc.walk():
                for lit in s.content:
                    yield lit.atom


def is_colp(p: Program) -> bool:
    return all(not r.social and not r.is_constraint for r in p.rules)
