"""The ``.acct`` scenario format: parser, resolver and canonical serializer.

One statement per line; ``cps NAME { ... }`` and ``structural { ... }``
blocks hold one item per line. ``#`` starts a comment. A malformed line is
reported and skipped, so a single pass reports every recoverable error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .causality import RESERVED_WORDS, And, Expr, Not, Or, StructuralModel, Var, format_expr
from .model import (
    AccountDecl,
    AccountsDecl,
    ActionDecl,
    BeingDecl,
    BeingKind,
    CausedDecl,
    ComponentDecl,
    CorrectionDecl,
    CpsBlock,
    Declaration,
    EgoDecl,
    EventDecl,
    EventKind,
    HasAccountDecl,
    MissedByEgoDecl,
    Model,
    Observation,
    ObservationDecl,
    PrincipalDecl,
    PrincipalKind,
    ScenarioDecl,
    StructuralDecl,
    StsPrincipalsDecl,
    build_model,
    declarations_of,
)

# -- errors and AST ---------------------------------------------------------


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    expected: str
    found: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: expected {self.expected}, found {self.found}"


@dataclass(frozen=True)
class UnterminatedBlock(ParseError):
    """A ``cps`` or ``structural`` block still open at end of input.

    The position is that of the block's header keyword.
    """


class ScenarioSyntaxError(Exception):
    def __init__(self, errors: list[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(map(str, self.errors)))


@dataclass(frozen=True)
class ScenarioAst:
    scenario_name: str
    statements: tuple[Declaration, ...] = field(default_factory=tuple)


# -- tokens -----------------------------------------------------------------

IDENT, STRING, SYM, NL, EOF, BAD = "ident", "string", "sym", "newline", "eof", "bad"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<sym>->|:=|[()\[\]{},=])
    """,
    re.VERBOSE,
)
_UNESCAPE = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}
_ESCAPE = {v: "\\" + k for k, v in _UNESCAPE.items()}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        if self.kind == NL:
            return "end of line"
        return repr(self.text) if self.kind == BAD else self.text


def _unquote(raw: str) -> str:
    return re.sub(r"\\(.)", lambda m: _UNESCAPE.get(m.group(1), m.group(1)), raw[1:-1])


def _quote(s: str) -> str:
    return '"' + "".join(_ESCAPE.get(ch, ch) for ch in s) + '"'


def tokenize(text: str) -> Iterator[Token]:
    line, line_start, pos = 1, 0, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            if text[pos] == '"':
                end = text.find("\n", pos)
                end = n if end < 0 else end
                yield Token(BAD, text[pos:end], line, col)
                pos = end
            else:
                yield Token(BAD, text[pos], line, col)
                pos += 1
            continue
        kind = m.lastgroup
        if kind == "nl":
            yield Token(NL, "\n", line, col)
            line += 1
            line_start = m.end()
        elif kind == "ident":
            yield Token(IDENT, m.group(), line, col)
        elif kind == "string":
            yield Token(STRING, m.group(), line, col)
        elif kind == "sym":
            yield Token(SYM, m.group(), line, col)
        pos = m.end()
    yield Token(EOF, "", line, n - line_start + 1)


# -- parser -----------------------------------------------------------------


class _Fail(Exception):
    def __init__(self, error: ParseError):
        self.error = error


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.errors: list[ParseError] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != EOF:
            self.i += 1
        return t

    def fail(self, expected: str, tok: Token | None = None):
        tok = tok or self.tok
        raise _Fail(ParseError(tok.line, tok.column, expected, tok.describe()))

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def sym(self, s: str) -> Token:
        if not self.at(SYM, s):
            self.fail(repr(s))
        return self.advance()

    def keyword(self, word: str) -> Token:
        if not self.at(IDENT, word):
            self.fail(repr(word))
        return self.advance()

    def ident(self, what: str = "identifier") -> str:
        if not self.at(IDENT):
            self.fail(what)
        return self.advance().text

    def choice(self, options: tuple[str, ...]) -> str:
        if not (self.at(IDENT) and self.tok.text in options):
            self.fail("|".join(options))
        return self.advance().text

    def skip_newlines(self) -> None:
        while self.at(NL):
            self.advance()

    def end_of_line(self, in_block: bool = False) -> None:
        if self.at(NL) or self.at(EOF):
            return
        if in_block and self.at(SYM, "}"):
            return
        self.fail("end of line")

    def resync(self) -> None:
        while not (self.at(NL) or self.at(EOF)):
            self.advance()

    def ident_list(self, min_items: int = 0) -> tuple[str, ...]:
        self.sym("[")
        items: list[str] = []
        if not self.at(SYM, "]") or min_items:
            items.append(self.ident())
            while self.at(SYM, ","):
                self.advance()
                items.append(self.ident())
        self.sym("]")
        return tuple(items)

    def arrow_triple(self) -> tuple[str, str, str]:
        self.sym("(")
        a = self.ident()
        self.sym(",")
        b = self.ident()
        self.sym(")")
        self.sym("->")
        return a, b, self.ident()

    # grammar
    def parse_file(self) -> list[Declaration]:
        out: list[Declaration] = []
        while True:
            self.skip_newlines()
            if self.at(EOF):
                return out
            try:
                stmt = self.statement()
                if stmt is not None:
                    out.append(stmt)
                    self.end_of_line()
            except _Fail as f:
                self.errors.append(f.error)
                self.resync()

    _KINDED = {
        "principal": (PrincipalDecl, PrincipalKind, ("person", "legal_entity")),
        "being": (BeingDecl, BeingKind, ("human", "animal")),
        "event": (EventDecl, EventKind, ("system", "environment")),
    }
    _PLAIN = {"component": ComponentDecl, "account": AccountDecl, "action": ActionDecl, "ego": EgoDecl}
    _LISTS = {"sts_principals": StsPrincipalsDecl, "accounts": AccountsDecl, "missed_by_ego": MissedByEgoDecl}

    def statement(self) -> Declaration | None:
        t = self.tok
        if t.kind != IDENT:
            self.fail("statement keyword")
        kw = t.text
        pos = dict(line=t.line, column=t.column)
        if kw == "scenario":
            self.advance()
            if not self.at(STRING):
                self.fail("quoted string")
            return ScenarioDecl(_unquote(self.advance().text), **pos)
        if kw in self._PLAIN:
            self.advance()
            return self._PLAIN[kw](self.ident(), **pos)
        if kw in self._KINDED:
            cls, enum_cls, options = self._KINDED[kw]
            self.advance()
            name = self.ident()
            self.keyword("kind")
            self.sym("=")
            return cls(name, enum_cls(self.choice(options)), **pos)
        if kw in self._LISTS:
            self.advance()
            self.sym("=")
            return self._LISTS[kw](self.ident_list(), **pos)
        if kw == "observation":
            self.advance()
            return ObservationDecl(*self.arrow_triple(), **pos)
        if kw == "correction":
            self.advance()
            return CorrectionDecl(*self.arrow_triple(), **pos)
        if kw == "has_account":
            self.advance()
            account = self.ident()
            self.keyword("by")
            return HasAccountDecl(account, self.ident(), **pos)
        if kw == "caused":
            self.advance()
            event = self.ident()
            self.sym("=")
            return CausedDecl(event, self.ident_list(min_items=1), **pos)
        if kw == "cps":
            self.advance()
            return self.cps_block(self.ident(), pos)
        if kw == "structural":
            self.advance()
            return self.structural_block(pos)
        self.fail("statement keyword")

    def open_block(self, pos) -> None:
        self.skip_newlines()
        self.sym("{")

    def block_items(self, pos, item) -> bool:
        """Parse items until ``}``; returns False if input ended first."""
        while True:
            self.skip_newlines()
            if self.at(SYM, "}"):
                self.advance()
                return True
            if self.at(EOF):
                self.errors.append(UnterminatedBlock(pos["line"], pos["column"], "'}'", "end of input"))
                return False
            try:
                item()
                self.end_of_line(in_block=True)
            except _Fail as f:
                self.errors.append(f.error)
                self.resync()

    def cps_block(self, name: str, pos) -> CpsBlock | None:
        self.open_block(pos)
        comps: list[str] = []
        princs: list[str] = []
        setups: list[tuple[str, str]] = []
        logs: list[Observation] = []

        def item():
            kw = self.choice(("components", "principals", "setup", "log"))
            if kw in ("components", "principals"):
                self.sym("=")
                (comps if kw == "components" else princs).extend(self.ident_list())
            elif kw == "setup":
                c = self.ident()
                self.keyword("by")
                setups.append((c, self.ident()))
            else:
                logs.append(Observation(*self.arrow_triple()))

        if not self.block_items(pos, item):
            return None
        return CpsBlock(name, tuple(comps), tuple(princs), tuple(setups), tuple(logs), **pos)

    def structural_block(self, pos) -> StructuralDecl | None:
        self.open_block(pos)
        exo: dict[str, bool] = {}
        eqs: dict[str, Expr] = {}
        events: dict[str, str] = {}
        comps: dict[str, str] = {}

        def define(name_tok: Token, table: dict, value) -> None:
            if name_tok.text in exo or name_tok.text in eqs or name_tok.text in RESERVED_WORDS:
                self.fail("new variable name", name_tok)
            table[name_tok.text] = value

        def item():
            kw = self.choice(("exo", "eq", "map"))
            if kw == "exo":
                name = self.tok
                self.ident("variable name")
                self.sym("=")
                define(name, exo, self.choice(("true", "false")) == "true")
            elif kw == "eq":
                name = self.tok
                self.ident("variable name")
                self.sym(":=")
                define(name, eqs, self.expr())
            else:
                var_tok = self.tok
                var = self.ident("variable name")
                self.sym("->")
                target_kind = self.choice(("event", "component"))
                table = events if target_kind == "event" else comps
                if var in table:
                    self.fail(f"variable not yet mapped to a {target_kind}", var_tok)
                table[var] = self.ident()

        if not self.block_items(pos, item):
            return None
        return StructuralDecl(StructuralModel(exo, eqs, events, comps), **pos)

    # boolean expressions: not > and > or
    def expr(self) -> Expr:
        parts = [self.conj()]
        while self.at(IDENT, "or"):
            self.advance()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Expr:
        parts = [self.neg()]
        while self.at(IDENT, "and"):
            self.advance()
            parts.append(self.neg())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def neg(self) -> Expr:
        if self.at(IDENT, "not"):
            self.advance()
            return Not(self.neg())
        if self.at(SYM, "("):
            self.advance()
            e = self.expr()
            self.sym(")")
            return e
        if self.at(IDENT) and self.tok.text not in RESERVED_WORDS:
            return Var(self.advance().text)
        self.fail("variable, 'not' or '('")


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        before = data[: exc.start]
        line = before.count(b"\n") + 1
        col_bytes = before[before.rfind(b"\n") + 1:]
        column = len(col_bytes.decode("utf-8", errors="replace")) + 1
        raise ScenarioSyntaxError(
            [ParseError(line, column, "valid UTF-8", f"byte 0x{data[exc.start]:02x}")]
        ) from None


def parse_scenario(text: str | bytes) -> ScenarioAst:
    """Parse scenario text (``str`` or UTF-8 ``bytes``).

    Raises ``ScenarioSyntaxError`` holding every error found.
    """
    if isinstance(text, (bytes, bytearray)):
        text = _decode(bytes(text))
    text = text.replace("\r\n", "\n")
    p = _Parser(list(tokenize(text)))
    stmts = p.parse_file()
    if p.errors:
        raise ScenarioSyntaxError(p.errors)
    names = [s.name for s in stmts if isinstance(s, ScenarioDecl)]
    return ScenarioAst(names[0] if names else "", tuple(stmts))


def resolve(ast: ScenarioAst) -> Model:
    """Build the model for a parsed scenario (raises ``ModelError``)."""
    return build_model(ast.statements)


def load(path) -> Model:
    with open(path, "rb") as fh:
        return resolve(parse_scenario(fh.read()))


# -- serializer -------------------------------------------------------------


def _ids(xs) -> str:
    return "[" + ", ".join(xs) + "]"


def _format(d: Declaration) -> list[str]:
    if isinstance(d, ScenarioDecl):
        return [f"scenario {_quote(d.name)}"]
    if isinstance(d, ComponentDecl):
        return [f"component {d.name}"]
    if isinstance(d, (PrincipalDecl, BeingDecl, EventDecl)):
        kw = {PrincipalDecl: "principal", BeingDecl: "being", EventDecl: "event"}[type(d)]
        return [f"{kw} {d.name} kind={d.kind.value}"]
    if isinstance(d, AccountDecl):
        return [f"account {d.name}"]
    if isinstance(d, ActionDecl):
        return [f"action {d.name}"]
    if isinstance(d, EgoDecl):
        return [f"ego {d.name}"]
    if isinstance(d, StsPrincipalsDecl):
        return [f"sts_principals = {_ids(d.principals)}"]
    if isinstance(d, AccountsDecl):
        return [f"accounts = {_ids(d.accounts)}"]
    if isinstance(d, MissedByEgoDecl):
        return [f"missed_by_ego = {_ids(d.events)}"]
    if isinstance(d, ObservationDecl):
        return [f"observation ({d.event}, {d.component}) -> {d.account}"]
    if isinstance(d, HasAccountDecl):
        return [f"has_account {d.account} by {d.principal}"]
    if isinstance(d, CorrectionDecl):
        return [f"correction ({d.principal}, {d.component}) -> {d.action}"]
    if isinstance(d, CausedDecl):
        return [f"caused {d.event} = {_ids(d.components)}"]
    if isinstance(d, CpsBlock):
        lines = [f"cps {d.name} {{",
                 f"  components = {_ids(d.components)}",
                 f"  principals = {_ids(d.principals)}"]
        lines += [f"  setup {c} by {p}" for c, p in d.setups]
        lines += [f"  log ({o.event}, {o.component}) -> {o.account}" for o in d.logs]
        return lines + ["}"]
    if isinstance(d, StructuralDecl):
        sm = d.model
        lines = ["structural {"]
        lines += [f"  exo {v} = {'true' if b else 'false'}" for v, b in sm.exogenous.items()]
        lines += [f"  eq {v} := {format_expr(e)}" for v, e in sm.equations.items()]
        lines += [f"  map {v} -> event {e}" for v, e in sm.event_map.items()]
        lines += [f"  map {v} -> component {c}" for v, c in sm.component_map.items()]
        return lines + ["}"]
    raise TypeError(f"cannot serialize {type(d).__name__}")


def serialize(model: Model) -> str:
    """Canonical text for ``model``; parsing and resolving it gives ``model`` back."""
    lines: list[str] = []
    for d in declarations_of(model):
        lines += _format(d)
    return "\n".join(lines) + "\n"
