"""Reader and writer for the Turtle subset used by the engine.

Accepted syntax: ``@prefix`` declarations, prefixed names, absolute IRIs in
angle brackets, plain and typed literals, ``a`` for rdf:type, comma and
semicolon abbreviation, ``.`` terminators, ``#`` comments, and ``_:label``
blank nodes. Everything else (collections, ``[]`` property lists, langtags,
bare numerics) is a parse error.

Emission is the same subset fully expanded: one triple per line, no comma or
semicolon abbreviation, sorted by subject, predicate, object. Blank labels are
canonicalized from content so serialization is a pure function of the graph.
"""

from __future__ import annotations

import re

from .namespaces import RDF_TYPE, XSD_STRING
from .store import Term, Triple, TripleStore, blank, iri, literal


class TurtleParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UndefinedPrefixError(TurtleParseError):
    pass


_PNAME_RE = re.compile(r"([A-Za-z][A-Za-z0-9_-]*)?:([A-Za-z0-9_][A-Za-z0-9_-]*|)")
_BLANK_RE = re.compile(r"_:([A-Za-z0-9_][A-Za-z0-9_-]*)")
_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\"}


class _Tokenizer:
    """Hand-rolled scanner that tracks line/column for error reporting."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str):
        raise TurtleParseError(message, self.line, self.col)

    def _advance(self, n: int):
        chunk = self.text[self.pos : self.pos + n]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = n - chunk.rfind("\n")
        else:
            self.col += n
        self.pos += n

    def skip_ws(self):
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "#":
                end = self.text.find("\n", self.pos)
                self._advance(len(self.text) - self.pos if end < 0 else end - self.pos)
            elif c.isspace():
                self._advance(1)
            else:
                return

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, token: str) -> bool:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self._advance(len(token))
            return True
        return False

    def expect(self, token: str):
        if not self.take(token):
            got = self.text[self.pos : self.pos + 12] or "<end of input>"
            self.error(f"expected {token!r}, found {got!r}")

    def iriref(self) -> str:
        end = self.text.find(">", self.pos)
        if end < 0:
            self.error("unterminated IRI (missing '>')")
        raw = self.text[self.pos + 1 : end]
        if not raw or any(c.isspace() for c in raw):
            self.error(f"malformed IRI <{raw}>")
        self._advance(end + 1 - self.pos)
        return raw

    def string(self) -> str:
        # Opening quote already peeked; scan with escape handling.
        assert self.text[self.pos] == '"'
        out = []
        i = self.pos + 1
        while i < len(self.text):
            c = self.text[i]
            if c == "\\":
                esc = self.text[i + 1 : i + 2]
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                    i += 2
                elif esc == "u" or esc == "U":
                    width = 4 if esc == "u" else 8
                    hexpart = self.text[i + 2 : i + 2 + width]
                    if len(hexpart) < width:
                        self.error("truncated unicode escape")
                    try:
                        out.append(chr(int(hexpart, 16)))
                    except ValueError:
                        self.error(f"bad unicode escape \\{esc}{hexpart}")
                    i += 2 + width
                else:
                    self.error(f"unknown escape \\{esc}")
            elif c == '"':
                consumed = i + 1 - self.pos
                self._advance(consumed)
                return "".join(out)
            elif c == "\n":
                self.error("newline inside string literal (use \\n)")
            else:
                out.append(c)
                i += 1
        self.error("unterminated string literal")

    def pname(self) -> tuple[str, str]:
        self.skip_ws()
        m = _PNAME_RE.match(self.text, self.pos)
        if not m:
            got = self.text[self.pos : self.pos + 12]
            self.error(f"expected prefixed name, found {got!r}")
        self._advance(m.end() - self.pos)
        return m.group(1) or "", m.group(2)

    def blank_label(self) -> str:
        self.skip_ws()
        m = _BLANK_RE.match(self.text, self.pos)
        if not m:
            self.error("malformed blank node label")
        self._advance(m.end() - self.pos)
        return m.group(1)


class _Parser:
    def __init__(self, text: str, prefixes: dict[str, str]):
        self.tok = _Tokenizer(text)
        self.prefixes = dict(prefixes)
        self.declared: dict[str, str] = {}
        self.triples: list[Triple] = []

    def parse(self):
        while not self.tok.at_end():
            if self.tok.peek() == "@":
                self._directive()
            else:
                self._statement()
        return self.declared, self.triples

    def _directive(self):
        self.tok.expect("@prefix")
        label, local = self.tok.pname()
        if local:
            self.tok.error("prefix declaration must end with ':'")
        self.tok.skip_ws()
        if self.tok.peek() != "<":
            self.tok.error("expected IRI in prefix declaration")
        base = self.tok.iriref()
        self.tok.expect(".")
        self.prefixes[label] = base
        self.declared[label] = base

    def _resolve(self, label: str, local: str) -> Term:
        if label not in self.prefixes:
            raise UndefinedPrefixError(
                f"undefined prefix {label!r}:", self.tok.line, self.tok.col
            )
        return iri(self.prefixes[label] + local)

    def _node(self, *, as_verb: bool = False) -> Term:
        c = self.tok.peek()
        if c == "<":
            return iri(self.tok.iriref())
        if c == "_" and not as_verb:
            return blank(self.tok.blank_label())
        if c == '"' and not as_verb:
            lex = self.tok.string()
            if self.tok.take("^^"):
                if self.tok.peek() == "<":
                    return literal(lex, self.tok.iriref())
                label, local = self.tok.pname()
                dt = self._resolve(label, local)
                return literal(lex, dt.value)
            return literal(lex)
        # 'a' shorthand, only in verb position
        if as_verb and re.match(r"a(?![A-Za-z0-9_:-])", self.tok.text[self.tok.pos :]):
            self.tok.expect("a")
            return iri(RDF_TYPE)
        label, local = self.tok.pname()
        return self._resolve(label, local)

    def _statement(self):
        subject = self._node()
        if subject.is_literal:
            self.tok.error("literal cannot be a statement subject")
        while True:
            verb = self._node(as_verb=True)
            while True:
                obj = self._node()
                self.triples.append(Triple(subject, verb, obj))
                if not self.tok.take(","):
                    break
            if self.tok.take(";"):
                if self.tok.peek() == ".":  # trailing semicolon
                    self.tok.expect(".")
                    return
                continue
            self.tok.expect(".")
            return


def parse(document: str, prefixes: dict[str, str] | None = None):
    """Parse a document. Returns (declared prefixes, triples)."""
    return _Parser(document, prefixes or {}).parse()


def load_text(store: TripleStore, document: str) -> int:
    """Parse ``document`` into ``store``; returns the count of new triples.

    Blank node labels are document-scoped: each distinct label is renamed to a
    fresh store-scoped label, so loading two documents that both use ``_:b0``
    never conflates their nodes.
    """
    declared, triples = parse(document, store.prefixes)
    for label, base in declared.items():
        store.register_prefix(label, base)
    relabel: dict[str, Term] = {}

    def fresh(term: Term) -> Term:
        if not term.is_blank:
            return term
        if term.value not in relabel:
            relabel[term.value] = store.fresh_blank()
        return relabel[term.value]

    added = 0
    for t in triples:
        if store.insert(Triple(fresh(t.subject), fresh(t.predicate), fresh(t.object))):
            added += 1
    return added


# -- emission ---------------------------------------------------------------


def _full(term: Term, blank_label: str | None = None) -> str:
    """Prefix-independent rendering; blanks can be forced to a placeholder."""
    if term.is_blank:
        return f"_:{blank_label if blank_label is not None else term.value}"
    if term.is_iri:
        return f"<{term.value}>"
    lex = term.n3({})  # no prefixes: quotes + <datatype>
    return lex


def _canonical_triples(store: TripleStore) -> list[Triple]:
    """Relabel blank nodes in a content-derived order.

    Triples are sorted on a rendering where every blank label is masked, so the
    resulting label assignment depends only on graph content (original labels
    break exact ties, which only arise between structurally identical rows).
    """
    rows = []
    for t in store:
        masked = (
            _full(t.subject, "?" if t.subject.is_blank else None),
            _full(t.predicate),
            _full(t.object, "?" if t.object.is_blank else None),
        )
        current = (_full(t.subject), _full(t.predicate), _full(t.object))
        rows.append((masked, current, t))
    rows.sort(key=lambda r: (r[0], r[1]))

    labels: dict[str, str] = {}

    def canon(term: Term) -> Term:
        if not term.is_blank:
            return term
        if term.value not in labels:
            labels[term.value] = f"b{len(labels)}"
        return blank(labels[term.value])

    return [Triple(canon(t.subject), t.predicate, canon(t.object)) for _, _, t in rows]


def canonical_lines(store: TripleStore) -> list[str]:
    """Sorted, prefix-free statement lines with canonical blank labels."""
    lines = [
        f"{_full(t.subject)} {_full(t.predicate)} {_full(t.object)} ."
        for t in _canonical_triples(store)
    ]
    lines.sort()
    return lines


def serialize(store: TripleStore) -> str:
    """Emit the store, sorted and unabbreviated, as a pure function of content."""
    out = [f"@prefix {label}: <{base}> ." for label, base in sorted(store.prefixes.items())]
    rendered = [
        (t.subject.n3(store.prefixes), t.predicate.n3(store.prefixes), t.object.n3(store.prefixes))
        for t in _canonical_triples(store)
    ]
    rendered.sort()
    if rendered:
        out.append("")
    out.extend(f"{s} {p} {o} ." for s, p, o in rendered)
    out.append("")
    return "\n".join(out)
