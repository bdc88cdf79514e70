"""Recursive-descent parser for the supported SPARQL subset.

Covers SELECT (DISTINCT), basic graph patterns with ``;``/``,`` abbreviation,
blank-node property lists (desugared to fresh variables here), BIND, FILTER,
UNION, GROUP BY with COUNT, and ORDER BY. Recognized SPARQL constructs outside
the subset raise UnsupportedFeatureError; everything else malformed raises
QuerySyntaxError with a position.
"""

from __future__ import annotations

import re

from ..namespaces import DEFAULT_PREFIXES, RDF_TYPE, XSD_INTEGER
from ..store import Term, iri, literal
from .ast import (
    Bind,
    BoolOp,
    Call,
    Comparison,
    CountAgg,
    Filter,
    NotOp,
    OrderKey,
    QueryAst,
    TermExpr,
    TriplePattern,
    Union,
    Var,
    VarExpr,
    group_variables,
)
from .errors import QuerySyntaxError, UnsupportedFeatureError

_TOKEN_RE = re.compile(
    r"""
      (?P<WS>\s+|\#[^\n]*)
    | (?P<VAR>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<IRIREF><[^<>"{}|^`\\\s]*>)
    | (?P<STRING>"(?:[^"\\\n]|\\.)*")
    | (?P<PNAME>[A-Za-z][A-Za-z0-9_-]*:(?:[A-Za-z0-9_][A-Za-z0-9_-]*)?)
    | (?P<INTEGER>[+-]?\d+)
    | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<OP>\^\^|&&|\|\||!=|<=|>=|[{}()\[\].;,=<>!*])
    """,
    re.X,
)

_KEYWORDS = {
    "SELECT",
    "DISTINCT",
    "WHERE",
    "BIND",
    "AS",
    "UNION",
    "FILTER",
    "GROUP",
    "ORDER",
    "BY",
    "ASC",
    "DESC",
    "COUNT",
}

# Constructs we recognize and refuse, by SPARQL keyword.
_UNSUPPORTED = {
    "OPTIONAL",
    "CONSTRUCT",
    "ASK",
    "DESCRIBE",
    "PREFIX",
    "BASE",
    "LIMIT",
    "OFFSET",
    "HAVING",
    "VALUES",
    "MINUS",
    "GRAPH",
    "SERVICE",
    "EXISTS",
    "NOT",
    "REDUCED",
    "FROM",
    "NAMED",
    "UNDEF",
    "SUM",
    "AVG",
    "MIN",
    "MAX",
    "SAMPLE",
    "GROUP_CONCAT",
    "REGEX",
    "BOUND",
    "STR",
    "LANG",
    "DATATYPE",
    "IN",
    "COALESCE",
    "IF",
}

_SUPPORTED_FUNCTIONS = {"ofn:weeksBetween", "spif:parseDate"}

_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\", "'": "'"}


def _unescape(raw: str, line: int, col: int) -> str:
    out = []
    i = 0
    while i < len(raw):
        c = raw[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        esc = raw[i + 1]
        if esc in _ESCAPES:
            out.append(_ESCAPES[esc])
            i += 2
        elif esc in ("u", "U"):
            width = 4 if esc == "u" else 8
            try:
                out.append(chr(int(raw[i + 2 : i + 2 + width], 16)))
            except ValueError:
                raise QuerySyntaxError(f"bad unicode escape in string", line, col)
            i += 2 + width
        else:
            raise QuerySyntaxError(f"unknown escape \\{esc} in string", line, col)
    return "".join(out)


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}:{self.value!r}"


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "WS":
            tokens.append(_Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, prefixes: dict[str, str]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.prefixes = prefixes
        self.fresh_counter = 0

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: _Token | None = None, expected: tuple[str, ...] = ()):
        tok = tok or self.peek()
        raise QuerySyntaxError(message, tok.line, tok.col, expected)

    def _check_unsupported(self, tok: _Token):
        if tok.kind == "NAME" and tok.value.upper() in _UNSUPPORTED:
            raise UnsupportedFeatureError(tok.value.upper(), tok.line, tok.col)

    def keyword(self, word: str) -> bool:
        tok = self.peek()
        if tok.kind == "NAME" and tok.value.upper() == word:
            self.next()
            return True
        return False

    def expect_keyword(self, word: str):
        if not self.keyword(word):
            self._check_unsupported(self.peek())
            self.error(f"expected {word}", expected=(word,))

    def take_op(self, op: str) -> bool:
        tok = self.peek()
        if tok.kind == "OP" and tok.value == op:
            self.next()
            return True
        return False

    def expect_op(self, op: str):
        if not self.take_op(op):
            self._check_unsupported(self.peek())
            self.error(f"expected {op!r}, found {self.peek().value!r}", expected=(op,))

    def fresh_var(self) -> Var:
        v = Var(f"_b{self.fresh_counter}")
        self.fresh_counter += 1
        return v

    # -- terms -------------------------------------------------------------

    def _pname_term(self, tok: _Token) -> Term:
        label, local = tok.value.split(":", 1)
        if label not in self.prefixes:
            self.error(f"unknown prefix {label!r}", tok)
        return iri(self.prefixes[label] + local)

    def _literal(self, tok: _Token) -> Term:
        lex = _unescape(tok.value[1:-1], tok.line, tok.col)
        if self.take_op("^^"):
            dt = self.next()
            if dt.kind == "IRIREF":
                return literal(lex, dt.value[1:-1])
            if dt.kind == "PNAME":
                return literal(lex, self._pname_term(dt).value)
            self.error("expected datatype IRI after ^^", dt)
        return literal(lex)

    def node(self, *, verb: bool = False):
        """A single subject/predicate/object position (no property lists)."""
        tok = self.peek()
        if tok.kind == "VAR":
            self.next()
            return Var(tok.value[1:])
        if tok.kind == "IRIREF":
            self.next()
            return iri(tok.value[1:-1])
        if tok.kind == "PNAME":
            self.next()
            return self._pname_term(tok)
        if tok.kind == "STRING" and not verb:
            self.next()
            return self._literal(tok)
        if tok.kind == "INTEGER" and not verb:
            self.next()
            return literal(tok.value, XSD_INTEGER)
        if verb and tok.kind == "NAME" and tok.value == "a":
            self.next()
            return iri(RDF_TYPE)
        self._check_unsupported(tok)
        self.error(f"expected {'predicate' if verb else 'term or variable'}, found {tok.value!r}", tok)

    # -- group pattern -------------------------------------------------------

    def group(self) -> tuple:
        self.expect_op("{")
        elements: list = []
        scope: set[Var] = set()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value == "}":
                self.next()
                return tuple(elements)
            if tok.kind == "EOF":
                self.error("unexpected end of query inside group pattern")
            if tok.kind == "OP" and tok.value == "{":
                el = self._union()
            elif tok.kind == "NAME" and tok.value.upper() == "BIND":
                el = self._bind(scope)
            elif tok.kind == "NAME" and tok.value.upper() == "FILTER":
                el = self._filter()
            else:
                self._check_unsupported(tok)
                for pattern in self._triples_block():
                    elements.append(pattern)
                scope |= group_variables(elements)
                self.take_op(".")
                continue
            elements.append(el)
            scope |= group_variables([el])
            self.take_op(".")

    def _union(self) -> Union:
        branches = [self.group()]
        while self.keyword("UNION"):
            branches.append(self.group())
        return Union(tuple(branches))

    def _bind(self, scope: set[Var]) -> Bind:
        self.expect_keyword("BIND")
        self.expect_op("(")
        expr = self.expression()
        self.expect_keyword("AS")
        tok = self.peek()
        target = self.node()
        if not isinstance(target, Var):
            self.error("BIND target must be a variable", tok)
        if target in scope:
            self.error(f"BIND would rebind in-scope variable ?{target.name}", tok)
        self.expect_op(")")
        return Bind(expr, target)

    def _filter(self) -> Filter:
        self.expect_keyword("FILTER")
        self.expect_op("(")
        expr = self.expression()
        self.expect_op(")")
        return Filter(expr)

    def _triples_block(self) -> list[TriplePattern]:
        patterns: list[TriplePattern] = []
        if self.peek().kind == "OP" and self.peek().value == "[":
            subject, inner = self._property_list()
            patterns.extend(inner)
            tok = self.peek()
            if tok.kind == "OP" and tok.value in (".", "}"):
                return patterns
        else:
            subject = self.node()
            if isinstance(subject, Term) and subject.is_literal:
                self.error("literal cannot be a pattern subject")
        self._predicate_object_list(subject, patterns)
        return patterns

    def _predicate_object_list(self, subject, patterns: list[TriplePattern]):
        while True:
            verb = self.node(verb=True)
            while True:
                obj, extra = self._object()
                patterns.append(TriplePattern(subject, verb, obj))
                patterns.extend(extra)
                if not self.take_op(","):
                    break
            if self.take_op(";"):
                tok = self.peek()
                if tok.kind == "OP" and tok.value in (".", "}", "]"):
                    return  # trailing semicolon
                continue
            return

    def _object(self):
        tok = self.peek()
        if tok.kind == "OP" and tok.value == "[":
            node, inner = self._property_list()
            return node, inner
        return self.node(), []

    def _property_list(self):
        """``[p o; ...]`` desugared to a fresh variable plus its patterns."""
        self.expect_op("[")
        fresh = self.fresh_var()
        patterns: list[TriplePattern] = []
        self._predicate_object_list(fresh, patterns)
        self.expect_op("]")
        return fresh, patterns

    # -- expressions -----------------------------------------------------------

    def expression(self):
        return self._or_expr()

    def _or_expr(self):
        left = self._and_expr()
        while self.take_op("||"):
            left = BoolOp("||", left, self._and_expr())
        return left

    def _and_expr(self):
        left = self._not_expr()
        while self.take_op("&&"):
            left = BoolOp("&&", left, self._not_expr())
        return left

    def _not_expr(self):
        if self.take_op("!"):
            return NotOp(self._not_expr())
        return self._comparison()

    def _comparison(self):
        left = self._primary()
        tok = self.peek()
        if tok.kind == "OP" and tok.value in ("=", "!=", "<", "<=", ">", ">="):
            self.next()
            return Comparison(tok.value, left, self._primary())
        return left

    def _primary(self):
        tok = self.peek()
        if tok.kind == "OP" and tok.value == "(":
            self.next()
            expr = self.expression()
            self.expect_op(")")
            return expr
        if tok.kind == "VAR":
            self.next()
            return VarExpr(Var(tok.value[1:]))
        if tok.kind == "STRING":
            self.next()
            return TermExpr(self._literal(tok))
        if tok.kind == "INTEGER":
            self.next()
            return TermExpr(literal(tok.value, XSD_INTEGER))
        if tok.kind == "IRIREF":
            self.next()
            return TermExpr(iri(tok.value[1:-1]))
        if tok.kind == "PNAME":
            self.next()
            if self.peek().kind == "OP" and self.peek().value == "(":
                return self._call(tok)
            return TermExpr(self._pname_term(tok))
        self._check_unsupported(tok)
        self.error(f"expected expression, found {tok.value!r}", tok)

    def _call(self, name_tok: _Token) -> Call:
        if name_tok.value not in _SUPPORTED_FUNCTIONS:
            raise UnsupportedFeatureError(
                f"function {name_tok.value}", name_tok.line, name_tok.col
            )
        self.expect_op("(")
        args = [self.expression()]
        while self.take_op(","):
            args.append(self.expression())
        self.expect_op(")")
        return Call(name_tok.value, tuple(args))

    # -- query form --------------------------------------------------------------

    def query(self) -> QueryAst:
        tok = self.peek()
        self._check_unsupported(tok)
        self.expect_keyword("SELECT")
        distinct = self.keyword("DISTINCT")
        select: list = []
        while True:
            tok = self.peek()
            if tok.kind == "VAR":
                self.next()
                select.append(Var(tok.value[1:]))
            elif tok.kind == "OP" and tok.value == "(":
                select.append(self._aggregate_projection())
            elif tok.kind == "OP" and tok.value == "*":
                raise UnsupportedFeatureError("SELECT *", tok.line, tok.col)
            else:
                break
        if not select:
            self._check_unsupported(self.peek())
            self.error("SELECT needs at least one projection")
        self.keyword("WHERE")
        pattern = self.group()
        group_by: list[Var] = []
        if self.keyword("GROUP"):
            self.expect_keyword("BY")
            while self.peek().kind == "VAR":
                tok = self.next()
                group_by.append(Var(tok.value[1:]))
            if not group_by:
                self.error("GROUP BY needs at least one variable")
        order_by: list[OrderKey] = []
        if self.keyword("ORDER"):
            self.expect_keyword("BY")
            while True:
                tok = self.peek()
                if tok.kind == "NAME" and tok.value.upper() in ("ASC", "DESC"):
                    self.next()
                    descending = tok.value.upper() == "DESC"
                    self.expect_op("(")
                    expr = self.expression()
                    self.expect_op(")")
                    order_by.append(OrderKey(expr, descending))
                elif tok.kind == "VAR":
                    self.next()
                    order_by.append(OrderKey(VarExpr(Var(tok.value[1:]))))
                elif tok.kind == "OP" and tok.value == "(":
                    self.next()
                    expr = self.expression()
                    self.expect_op(")")
                    order_by.append(OrderKey(expr))
                else:
                    break
            if not order_by:
                self.error("ORDER BY needs at least one key")
        tok = self.peek()
        if tok.kind != "EOF":
            self._check_unsupported(tok)
            self.error(f"unexpected trailing input {tok.value!r}")
        ast = QueryAst(tuple(select), distinct, pattern, tuple(group_by), tuple(order_by))
        self._validate(ast)
        return ast

    def _aggregate_projection(self) -> CountAgg:
        self.expect_op("(")
        tok = self.peek()
        if not self.keyword("COUNT"):
            self._check_unsupported(tok)
            self.error("expected COUNT in aggregate projection", tok)
        self.expect_op("(")
        arg: Var | None
        if self.take_op("*"):
            arg = None
        else:
            tok = self.peek()
            node = self.node()
            if not isinstance(node, Var):
                self.error("COUNT takes a variable or *", tok)
            arg = node
        self.expect_op(")")
        self.expect_keyword("AS")
        tok = self.peek()
        alias = self.node()
        if not isinstance(alias, Var):
            self.error("aggregate alias must be a variable", tok)
        self.expect_op(")")
        return CountAgg(arg, alias)

    def _validate(self, ast: QueryAst):
        pattern_vars = group_variables(ast.pattern)
        aliases = {item.alias for item in ast.select if isinstance(item, CountAgg)}
        for item in ast.select:
            if isinstance(item, CountAgg):
                if item.arg is not None and item.arg not in pattern_vars:
                    self.error(f"COUNT argument ?{item.arg.name} never appears in the pattern")
                if item.alias in pattern_vars:
                    self.error(f"aggregate alias ?{item.alias.name} already bound in the pattern")
            else:
                if ast.group_by:
                    if item not in ast.group_by:
                        self.error(f"projected variable ?{item.name} is not a GROUP BY key")
                elif item not in pattern_vars:
                    self.error(f"projected variable ?{item.name} never appears in the pattern")
        if aliases and not ast.group_by:
            plain = [i for i in ast.select if isinstance(i, Var)]
            if plain:
                self.error("aggregates without GROUP BY require an all-aggregate projection")
        for v in ast.group_by:
            if v not in pattern_vars:
                self.error(f"GROUP BY variable ?{v.name} never appears in the pattern")


def parse_query(text: str, prefixes: dict[str, str] | None = None) -> QueryAst:
    """Parse query text against a prefix table (defaults cover cp:, cids:, ...)."""
    table = dict(DEFAULT_PREFIXES)
    if prefixes:
        table.update(prefixes)
    return _Parser(text, table).query()
