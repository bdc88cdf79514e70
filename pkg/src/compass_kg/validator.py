"""Schema validation: checks a store against the declared Compass constraints.

Validation is open-world. Undeclared predicates are ignored, optional links
may be absent, and subjects without type information are skipped for range
checks (there is no declaration to resolve them against). Violations are data,
never exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .namespaces import RDF_TYPE, XSD_DATETIME, XSD_INTEGER, cp, shrink_iri, time_ns
from .ontology import PropertyDecl, Schema
from .query.builtins import UnparseableDateError, parse_date
from .store import Term, TripleStore, iri

CODED_RANGE = "coded-range"
ENUMERATION_RANGE = "enumeration-range"
DATATYPE = "datatype"
MISSING_REQUIRED_LINK = "missing-required-link"
EVENT_CHAIN_BROKEN = "event-chain-broken"
EVENT_ORDER = "event-order"
DOMAIN_MISMATCH = "domain-mismatch"

VIOLATION_KINDS = (
    CODED_RANGE,
    ENUMERATION_RANGE,
    DATATYPE,
    MISSING_REQUIRED_LINK,
    EVENT_CHAIN_BROKEN,
    EVENT_ORDER,
    DOMAIN_MISMATCH,
)

# ServiceFailureEvent is defined by these three links; everything else is optional.
_FAILURE_REQUIRED = (cp("forClient"), cp("forService"), cp("hasCharacteristic"))


@dataclass(frozen=True)
class Violation:
    kind: str
    focus: Term
    property: str | None
    message: str


def explain(v: Violation) -> str:
    """One-line human rendering: kind, focus, property, and the message."""
    prop = f" {shrink_iri(v.property)}" if v.property else ""
    return f"{v.kind}: {v.focus.n3()}{prop}: {v.message}"


def validate(store: TripleStore, schema: Schema) -> list[Violation]:
    """Check every declared constraint; returns violations in a stable order."""
    out: list[Violation] = []
    rdf_type = iri(RDF_TYPE)

    types: dict[Term, set[str]] = {}
    for t in store.match(None, rdf_type, None):
        if t.object.is_iri:
            types.setdefault(t.subject, set()).add(t.object.value)

    def closed_types(node: Term) -> set[str]:
        out_types: set[str] = set()
        for c in types.get(node, ()):
            out_types |= schema.superclasses(c) if c in schema.classes else {c}
        return out_types

    for t in store:
        if t.predicate.value == RDF_TYPE:
            continue
        decls = schema.declarations(t.predicate.value)
        if not decls:
            continue  # open world: undeclared predicates are fine
        subject_types = types.get(t.subject)
        if not subject_types:
            continue  # untyped subject: no declaration can be resolved
        decl = schema.declaration_for(t.predicate.value, subject_types)
        if decl is None:
            expected = sorted({shrink_iri(d) for dd in decls for d in dd.domain})
            out.append(
                Violation(
                    DOMAIN_MISMATCH,
                    t.subject,
                    t.predicate.value,
                    f"subject typed {sorted(shrink_iri(c) for c in subject_types)} "
                    f"but the property expects {expected}",
                )
            )
            continue
        out.extend(_check_range(t, decl, closed_types))

    out.extend(_check_failure_links(store, schema, types))
    out.extend(_check_event_order(store, schema, types))
    out.extend(_check_event_chains(store))

    out.sort(key=lambda v: (v.kind, v.focus.n3({}), v.property or "", v.message))
    return out


def _check_range(t, decl: PropertyDecl, closed_types) -> list[Violation]:
    rng = decl.range
    if rng.kind == "code":
        if not t.object.is_iri or rng.class_iri not in closed_types(t.object):
            return [
                Violation(
                    CODED_RANGE,
                    t.subject,
                    t.predicate.value,
                    f"expected an instance of {shrink_iri(rng.class_iri)}, got {t.object.n3()}",
                )
            ]
    elif rng.kind == "enum":
        if not t.object.is_literal or t.object.value not in rng.values:
            allowed = ", ".join(rng.values)
            return [
                Violation(
                    ENUMERATION_RANGE,
                    t.subject,
                    t.predicate.value,
                    f"expected one of {{{allowed}}}, got {t.object.n3()}",
                )
            ]
    elif rng.kind == "datatype":
        return _check_datatype(t, rng.class_iri)
    return []


def _check_datatype(t, datatype_iri) -> list[Violation]:
    if not t.object.is_literal:
        return [
            Violation(
                DATATYPE,
                t.subject,
                t.predicate.value,
                f"expected a literal, got {t.object.n3()}",
            )
        ]
    if datatype_iri == XSD_INTEGER:
        text = t.object.value.strip()
        if not text.isdigit():
            # hasNumber must be a non-negative integer
            return [
                Violation(
                    DATATYPE,
                    t.subject,
                    t.predicate.value,
                    f"expected a non-negative integer, got {t.object.n3()}",
                )
            ]
    elif datatype_iri == XSD_DATETIME:
        try:
            parse_date(t.object.value)
        except UnparseableDateError:
            return [
                Violation(
                    DATATYPE,
                    t.subject,
                    t.predicate.value,
                    f"expected a dateTime matching the millisecond pattern, got {t.object.n3()}",
                )
            ]
    return []


def _instances(store, schema, types, class_iri: str):
    for node, asserted in types.items():
        for c in asserted:
            if c in schema.classes and schema.is_subclass(c, class_iri):
                yield node
                break


def _check_failure_links(store, schema, types) -> list[Violation]:
    out = []
    for node in _instances(store, schema, types, cp("ServiceFailureEvent")):
        for prop in _FAILURE_REQUIRED:
            if store.value(node, iri(prop)) is None:
                out.append(
                    Violation(
                        MISSING_REQUIRED_LINK,
                        node,
                        prop,
                        f"a service failure event requires {shrink_iri(prop)}",
                    )
                )
    return out


def _check_event_order(store, schema, types) -> list[Violation]:
    begin_p, end_p = iri(time_ns("hasBeginning")), iri(time_ns("hasEnd"))
    out = []
    for node in _instances(store, schema, types, cp("ServiceEvent")):
        begins, ends = store.objects(node, begin_p), store.objects(node, end_p)
        for b in begins:
            for e in ends:
                try:
                    if parse_date(b.value) > parse_date(e.value):
                        out.append(
                            Violation(
                                EVENT_ORDER,
                                node,
                                time_ns("hasEnd"),
                                f"event ends {e.n3()} before it begins {b.n3()}",
                            )
                        )
                        break
                except UnparseableDateError:
                    continue  # already a datatype violation
            else:
                continue
            break
    return out


def _check_event_chains(store) -> list[Violation]:
    """previousEvent/nextEvent must be mutual inverses where both sides are
    asserted, and chains must be acyclic in chain direction."""
    next_p, prev_p = iri(cp("nextEvent")), iri(cp("previousEvent"))
    out = []
    next_of: dict[Term, list[Term]] = {}
    prev_of: dict[Term, list[Term]] = {}
    for t in store.match(None, next_p, None):
        next_of.setdefault(t.subject, []).append(t.object)
    for t in store.match(None, prev_p, None):
        prev_of.setdefault(t.subject, []).append(t.object)

    for a, nexts in next_of.items():
        for b in nexts:
            if b in prev_of and a not in prev_of[b]:
                out.append(
                    Violation(
                        EVENT_CHAIN_BROKEN,
                        a,
                        cp("nextEvent"),
                        f"{a.n3()} names {b.n3()} as next, but {b.n3()} asserts a different previous event",
                    )
                )
    for b, prevs in prev_of.items():
        for a in prevs:
            if a in next_of and b not in next_of[a]:
                out.append(
                    Violation(
                        EVENT_CHAIN_BROKEN,
                        b,
                        cp("previousEvent"),
                        f"{b.n3()} names {a.n3()} as previous, but {a.n3()} asserts a different next event",
                    )
                )

    # Chain-direction edges: next edges forward, previous edges reversed.
    edges: dict[Term, set[Term]] = {}
    for a, nexts in next_of.items():
        edges.setdefault(a, set()).update(nexts)
    for b, prevs in prev_of.items():
        for a in prevs:
            edges.setdefault(a, set()).add(b)
    for cycle in _find_cycles(edges):
        focus = min(cycle, key=lambda t: t.n3({}))
        members = ", ".join(sorted(t.n3() for t in cycle))
        out.append(
            Violation(
                EVENT_CHAIN_BROKEN,
                focus,
                cp("nextEvent"),
                f"event chain forms a cycle through {members}",
            )
        )
    return out


def _find_cycles(edges: dict[Term, set[Term]]) -> list[set[Term]]:
    """Strongly connected components with more than one node, plus self-loops."""
    index: dict[Term, int] = {}
    low: dict[Term, int] = {}
    on_stack: set[Term] = set()
    stack: list[Term] = []
    counter = [0]
    cycles: list[set[Term]] = []

    def strongconnect(v: Term):
        work = [(v, iter(sorted(edges.get(v, ()), key=lambda t: t.n3({}))))]
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(edges.get(w, ()), key=lambda t: t.n3({})))))
                    advanced = True
                    break
                if w in on_stack:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.add(w)
                    if w == node:
                        break
                if len(component) > 1 or node in edges.get(node, ()):
                    cycles.append(component)

    for v in sorted(edges, key=lambda t: t.n3({})):
        if v not in index:
            strongconnect(v)
    return cycles
