"""In-memory triple store indexed three ways (subject-, predicate-, object-first).

Terms are IRIs, literals (lexical form + datatype), or blank nodes. Equality is
strictly lexical: ``"01"^^xsd:integer`` and ``"1"^^xsd:integer`` are different
terms at storage level. Value-space comparison happens only inside query
builtins.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .namespaces import DEFAULT_PREFIXES, XSD_STRING, shrink_iri


class StoreError(Exception):
    """Base class for storage-level failures."""


class MalformedTermError(StoreError):
    """A term violates its structural invariants (e.g. non-IRI predicate)."""


@dataclass(frozen=True, slots=True)
class Term:
    """An RDF term. ``kind`` is one of ``iri``, ``literal``, ``blank``."""

    kind: str
    value: str
    datatype: Optional[str] = None

    @property
    def is_iri(self) -> bool:
        return self.kind == "iri"

    @property
    def is_literal(self) -> bool:
        return self.kind == "literal"

    @property
    def is_blank(self) -> bool:
        return self.kind == "blank"

    def n3(self, prefixes: dict | None = None) -> str:
        """Render in Turtle syntax, abbreviating IRIs through ``prefixes``.

        ``None`` means the default prefix table; pass ``{}`` for full IRIs.
        """
        table = DEFAULT_PREFIXES if prefixes is None else prefixes
        if self.kind == "iri":
            return shrink_iri(self.value, table)
        if self.kind == "blank":
            return f"_:{self.value}"
        lex = escape_literal(self.value)
        if self.datatype and self.datatype != XSD_STRING:
            return f'"{lex}"^^{shrink_iri(self.datatype, table)}'
        return f'"{lex}"'

    def __repr__(self) -> str:  # keeps pytest diffs readable
        return self.n3()


def iri(text: str) -> Term:
    if not text or any(c.isspace() for c in text):
        raise MalformedTermError(f"IRI must be non-empty without whitespace: {text!r}")
    return Term("iri", text)


def literal(lexical: str, datatype: str | None = None) -> Term:
    return Term("literal", lexical, datatype or XSD_STRING)


def blank(label: str) -> Term:
    if not label:
        raise MalformedTermError("blank node label must be non-empty")
    return Term("blank", label)


def escape_literal(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


# Sort rank per term kind; blank < iri < literal keeps serializations tidy.
_KIND_RANK = {"blank": 0, "iri": 1, "literal": 2}


def term_key(t: Term) -> tuple:
    """Total lexical order over terms, used for deterministic output."""
    return (_KIND_RANK[t.kind], t.value, t.datatype or "")


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if self.subject.kind not in ("iri", "blank"):
            raise MalformedTermError(f"subject must be an IRI or blank node: {self.subject!r}")
        if self.predicate.kind != "iri":
            raise MalformedTermError(f"predicate must be an IRI: {self.predicate!r}")

    def __repr__(self) -> str:
        return f"({self.subject!r} {self.predicate!r} {self.object!r})"


def triple_key(t: Triple) -> tuple:
    return term_key(t.subject) + term_key(t.predicate) + term_key(t.object)


class TripleStore:
    """Set of triples reachable through SPO, POS, and OSP orderings.

    The store is insert-only; after a load/build phase it is treated as an
    immutable snapshot that any number of readers may share. None of the read
    paths mutate state.
    """

    def __init__(self, prefixes: dict | None = None):
        # Insertion-ordered set; dict keys give deterministic iteration.
        self._triples: dict[Triple, None] = {}
        self._spo: dict[Term, dict[Term, dict[Term, None]]] = {}
        self._pos: dict[Term, dict[Term, dict[Term, None]]] = {}
        self._osp: dict[Term, dict[Term, dict[Term, None]]] = {}
        self.prefixes: dict[str, str] = dict(DEFAULT_PREFIXES)
        if prefixes:
            self.prefixes.update(prefixes)
        self._blank_counter = 0

    # -- mutation -------------------------------------------------------

    def insert(self, t: Triple) -> bool:
        """Add a triple. Returns True iff it was not already present."""
        if not isinstance(t, Triple):
            raise TypeError(f"expected Triple, got {type(t).__name__}")
        if t in self._triples:
            return False
        self._triples[t] = None
        self._spo.setdefault(t.subject, {}).setdefault(t.predicate, {})[t.object] = None
        self._pos.setdefault(t.predicate, {}).setdefault(t.object, {})[t.subject] = None
        self._osp.setdefault(t.object, {}).setdefault(t.subject, {})[t.predicate] = None
        return True

    def add(self, s: Term, p: Term, o: Term) -> bool:
        return self.insert(Triple(s, p, o))

    def register_prefix(self, label: str, base: str) -> None:
        self.prefixes[label] = base

    def fresh_blank(self) -> Term:
        """Store-scoped blank node; labels never collide across loads."""
        t = blank(f"b{self._blank_counter}")
        self._blank_counter += 1
        return t

    # -- reads ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def match(
        self,
        s: Optional[Term] = None,
        p: Optional[Term] = None,
        o: Optional[Term] = None,
    ) -> Iterator[Triple]:
        """Stream triples matching every bound position.

        The index whose key prefix covers the most bound positions drives the
        scan, so a fully-bound call is a dictionary lookup and a single bound
        position scans one bucket.
        """
        if s is not None and p is not None and o is not None:
            if o in self._spo.get(s, {}).get(p, {}):
                yield Triple(s, p, o)
            return
        if s is not None and p is not None:
            for obj in self._spo.get(s, {}).get(p, {}):
                yield Triple(s, p, obj)
            return
        if p is not None and o is not None:
            for subj in self._pos.get(p, {}).get(o, {}):
                yield Triple(subj, p, o)
            return
        if s is not None and o is not None:
            for pred in self._osp.get(o, {}).get(s, {}):
                yield Triple(s, pred, o)
            return
        if s is not None:
            for pred, objs in self._spo.get(s, {}).items():
                for obj in objs:
                    yield Triple(s, pred, obj)
            return
        if p is not None:
            for obj, subjs in self._pos.get(p, {}).items():
                for subj in subjs:
                    yield Triple(subj, p, obj)
            return
        if o is not None:
            for subj, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield Triple(subj, pred, o)
            return
        yield from self._triples

    def objects(self, s: Term, p: Term) -> list[Term]:
        return [t.object for t in self.match(s, p, None)]

    def subjects(self, p: Term, o: Term) -> list[Term]:
        return [t.subject for t in self.match(None, p, o)]

    def value(self, s: Term, p: Term) -> Optional[Term]:
        """First object for (s, p), or None."""
        for t in self.match(s, p, None):
            return t.object
        return None

    # -- serialization (delegates to the turtle module) ------------------

    def load_text(self, document: str) -> int:
        from . import turtle

        return turtle.load_text(self, document)

    def serialize(self) -> str:
        from . import turtle

        return turtle.serialize(self)

    # -- equality ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        """Content equality, insensitive to blank node labels.

        Compares canonical statement lines, which relabel blanks in a
        content-derived order. Insertion order and prefix tables do not
        participate.
        """
        if not isinstance(other, TripleStore):
            return NotImplemented
        if len(self) != len(other):
            return False
        from . import turtle

        return turtle.canonical_lines(self) == turtle.canonical_lines(other)

    def __repr__(self) -> str:
        return f"<TripleStore {len(self)} triples>"


def store_from_triples(triples: Iterable[Triple], prefixes: dict | None = None) -> TripleStore:
    store = TripleStore(prefixes)
    for t in triples:
        store.insert(t)
    return store
