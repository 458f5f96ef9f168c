"""Reader and canonical printer for the ``.solp`` text format.

A file holds one or more ``#program id.`` sections, each followed by rules::

    #program p1.
    go_wedding :- [n/2 - 1, ]{go_wedding}.
    okay(drive) :- go_wedding.
    :- c, not [p2]{d}.       % integrity constraint

Selection conditions: ``[ident]`` selects a member program; anything with a
comma (or nothing at all) is a cardinal range whose bounds are arithmetic
over ``n``. A simple SC with a single content literal may drop its braces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

from .errors import BoundsError, Diagnostic, ParseError, ValidationError
from .model import (
    AgentCount,
    Atom,
    BinOp,
    BoundExpr,
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
    resolve_bounds,
    validate_collection,
)


@dataclass(frozen=True)
class SourceUnit:
    name: str
    text: str


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<directive>\#[A-Za-z_]+)
  | (?P<decimal>\d+\.\d+)
  | (?P<int>\d+)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<arrow>:-)
  | (?P<punct>[.,()\[\]{}+\-*/])
    """,
    re.VERBOSE,
)


def tokenize(text: str, source: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError([Diagnostic("error", f"unexpected character {text[pos]!r}",
                                         line, pos - line_start + 1, source)])
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], source: str):
        self.toks = tokens
        self.i = 0
        self.source = source

    # -- helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError([Diagnostic("error", msg, tok.line, tok.col, self.source)])

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "arrow") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            got = self.tok.text or "end of input"
            self.fail(f"expected '{text}', found '{got}'")
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    # -- grammar
    def programs(self) -> list[Program]:
        out: list[Program] = []
        while self.tok.kind != "eof":
            if self.tok.kind != "directive" or self.tok.text != "#program":
                self.fail("expected '#program <id>.' before rules")
            self.i += 1
            if self.tok.kind != "ident":
                self.fail("expected a lowercase program identifier")
            pid = self.tok.text
            self.i += 1
            self.expect(".")
            rules = []
            while self.tok.kind not in ("eof", "directive"):
                rules.append(self.rule())
            out.append(Program(pid, tuple(rules)))
        return out

    def rule(self) -> Rule:
        start = self.tok
        head, okay = None, False
        if not self.at(":-"):
            if self.tok.kind == "ident" and self.tok.text == "okay" and self.peek().text == "(":
                self.i += 2
                head = self.atom()
                self.expect(")")
                okay = True
            else:
                head = self.atom()
        body: list = []
        if self.accept(":-"):
            body.append(self.body_element())
            while self.accept(","):
                body.append(self.body_element())
        elif head is None:
            self.fail("expected a rule")
        self.expect(".")
        if head is None and not body:
            self.fail("integrity constraint needs a body", start)
        return Rule(head, tuple(body), okay, span=(start.line, start.col))

    def body_element(self):
        negated = False
        if self.tok.kind == "ident" and self.tok.text == "not":
            negated = True
            self.i += 1
        if self.at("["):
            return SocialLiteral(self.social_condition(), negated)
        return Literal(self.atom(), negated)

    def literal(self) -> Literal:
        negated = False
        if self.tok.kind == "ident" and self.tok.text == "not":
            negated = True
            self.i += 1
            if self.at("["):
                self.fail("negated social conditions are not allowed inside a social condition")
        return Literal(self.atom(), negated)

    def atom(self) -> Atom:
        t = self.tok
        if t.kind == "var":
            self.fail("variables unsupported: only ground programs are accepted")
        if t.kind != "ident":
            self.fail(f"expected an atom, found '{t.text or 'end of input'}'")
        if t.text in ("not", "okay"):
            self.fail(f"'{t.text}' is reserved")
        if "__" in t.text:
            self.fail("identifiers may not contain the reserved separator '__'")
        self.i += 1
        args: list = []
        if self.accept("("):
            args.append(self.constant())
            while self.accept(","):
                args.append(self.constant())
            self.expect(")")
        return Atom(t.text, tuple(args))

    def constant(self):
        t = self.tok
        if t.kind == "var":
            self.fail("variables unsupported: only ground programs are accepted")
        if t.kind == "int":
            self.i += 1
            return int(t.text)
        if t.kind == "ident":
            if "__" in t.text:
                self.fail("identifiers may not contain the reserved separator '__'")
            self.i += 1
            return t.text
        self.fail(f"expected a constant, found '{t.text or 'end of input'}'")

    def social_condition(self) -> SocialCondition:
        open_tok = self.expect("[")
        cond = self.selection()
        self.expect("]")
        span = (open_tok.line, open_tok.col)
        if self.accept("{"):
            content: list[Literal] = []
            skel: list[SocialCondition] = []
            while True:
                if self.at("["):
                    skel.append(self.social_condition())
                else:
                    content.append(self.literal())
                if not self.accept(","):
                    break
            self.expect("}")
            if not content:
                self.fail("social condition content must hold at least one literal", open_tok)
            return SocialCondition(cond, tuple(content), tuple(skel), span=span)
        return SocialCondition(cond, (self.literal(),), (), span=span)

    def selection(self):
        # scan to the matching ']' to classify before committing
        depth, j, comma = 0, self.i, False
        while True:
            t = self.toks[j]
            if t.kind == "eof":
                self.fail("unterminated selection condition")
            if t.text in ("(",):
                depth += 1
            elif t.text == ")":
                depth -= 1
            elif t.text == "]" and depth == 0:
                break
            elif t.text == "," and depth == 0:
                comma = True
            j += 1
        if j == self.i:
            return Cardinal()
        if not comma:
            if j == self.i + 1 and self.tok.kind == "ident":
                pid = self.tok.text
                self.i += 1
                return Member(pid)
            self.fail("a bare bound is ambiguous: write '[e, ]' for a lower or '[ , e]' for an upper bound")
        lower = None if self.at(",") else self.expr()
        self.expect(",")
        upper = None if self.at("]") else self.expr()
        return Cardinal(lower, upper)

    def expr(self) -> BoundExpr:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> BoundExpr:
        node = self.factor()
        while self.at("*") or self.at("/"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> BoundExpr:
        t = self.tok
        if self.accept("-"):
            return Neg(self.factor())
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if t.kind in ("int", "decimal"):
            self.i += 1
            return Num(Decimal(t.text))
        if t.kind == "ident" and t.text == "n":
            self.i += 1
            return AgentCount()
        if t.kind == "var":
            self.fail("variables unsupported: only ground programs are accepted")
        self.fail(f"unknown symbol '{t.text}' in selection bound (only n and numbers are allowed)")


def parse_programs(text: str, source: str = "<input>") -> list[Program]:
    return _Parser(tokenize(text, source), source).programs()


def parse_collection(sources, validate: bool = True) -> Collection:
    """Parse one or more source units into a collection, in source order."""
    if isinstance(sources, (str, SourceUnit)):
        sources = [sources]
    programs: list[Program] = []
    origin: dict[str, str] = {}
    errors: list[Diagnostic] = []
    for src in sources:
        unit = src if isinstance(src, SourceUnit) else SourceUnit("<input>", src)
        try:
            parsed = parse_programs(unit.text, unit.name)
            programs.extend(parsed)
            for p in parsed:
                origin.setdefault(p.id, unit.name)
        except ParseError as e:
            errors.extend(e.diagnostics)
    if errors:
        raise ParseError(errors)
    c = Collection(tuple(programs))
    if validate:
        diags = validate_collection(c, origin)
        if diags:
            raise ValidationError(diags)
    return c


def load_sources(paths) -> list[SourceUnit]:
    """Read files; a directory contributes its ``.solp`` files alphabetically."""
    units: list[SourceUnit] = []
    for p in map(Path, paths):
        files = sorted(p.glob("*.solp")) if p.is_dir() else [p]
        for f in files:
            units.append(SourceUnit(str(f), f.read_text(encoding="utf-8")))
    return units


# -- printing -----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expr(e: BoundExpr, parent: int = 0, right: bool = False) -> str:
    if isinstance(e, Num):
        return format(e.value, "f")
    if isinstance(e, AgentCount):
        return "n"
    if isinstance(e, Neg):
        return "-" + format_expr(e.operand, 3)
    p = _PREC[e.op]
    s = f"{format_expr(e.left, p)} {e.op} {format_expr(e.right, p, True)}"
    if p < parent or (right and p == parent):
        s = f"({s})"
    return s


def format_selection(cond) -> str:
    if isinstance(cond, Member):
        return f"[{cond.program_id}]"
    lo = "" if cond.lower is None else format_expr(cond.lower)
    hi = "" if cond.upper is None else " " + format_expr(cond.upper)
    if cond.lower is None and cond.upper is None:
        return "[]"
    return f"[{lo},{hi or ' '}]"


def format_sc(s: SocialCondition) -> str:
    items = [str(lit) for lit in s.content] + [format_sc(x) for x in s.skel]
    return f"{format_selection(s.cond)}{{{', '.join(items)}}}"


def format_rule(r: Rule) -> str:
    head = ""
    if r.head is not None:
        head = f"okay({r.head})" if r.okay else str(r.head)
    if not r.body:
        return f"{head}."
    parts = []
    for b in r.body:
        if isinstance(b, Literal):
            parts.append(str(b))
        else:
            parts.append(("not " if b.negated else "") + format_sc(b.sc))
    sep = " :- " if head else ":- "
    return f"{head}{sep}{', '.join(parts)}."


def _bounds_note(r: Rule, n: int) -> str:
    notes = []
    for b in r.social:
        for s in b.sc.walk():
            if isinstance(s.cond, Cardinal):
                try:
                    rb = resolve_bounds(s.cond, n)
                    notes.append(f"{format_selection(s.cond)}=[{rb.l},{rb.h}]")
                except BoundsError:
                    notes.append(f"{format_selection(s.cond)}=unsatisfiable")
    return f"  % n={n}: " + " ".join(notes) if notes else ""


def print_collection(c: Collection) -> str:
    lines: list[str] = []
    for p in c.programs:
        lines.append(f"#program {p.id}.")
        for r in p.rules:
            lines.append(format_rule(r) + _bounds_note(r, c.n))
        lines.append("")
    return "\n".join(lines)


def parse_atom(text: str) -> Atom:
    """A single ground atom such as ``go_wedding`` or ``share(song)``."""
    p = _Parser(tokenize(text, "<atom>"), "<atom>")
    a = p.atom()
    if p.tok.kind != "eof":
        p.fail("trailing input after atom")
    return a
