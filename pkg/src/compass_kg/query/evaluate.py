"""Query evaluation over a store snapshot.

Semantics, in pipeline order: basic graph pattern joins under bag semantics,
then GROUP BY, aggregation, ORDER BY, projection, and DISTINCT. Patterns whose
predicate is rdf:type (after substitution) match through the schema's subclass
closure; a flag turns that off for strict-match debugging.

Value rules shared with any independent checker:

* A literal is *numeric* when its lexical form is an integer or decimal,
  whatever its datatype tag.
* ``=`` is numeric equality when both sides are numeric, structural term
  equality otherwise.
* ``<``-family operators compare numerics by value and everything else by
  (kind, value, datatype); unbound sorts before everything.
* Expression errors make a FILTER drop the row and a BIND leave its variable
  unbound; the row itself survives.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..namespaces import RDF_TYPE, XSD_BOOLEAN, XSD_DATETIME, XSD_INTEGER, XSD_STRING
from ..ontology import Schema, TypeIndex
from ..store import Term, TripleStore, iri, literal
from .ast import (
    Bind,
    BoolOp,
    Call,
    Comparison,
    CountAgg,
    Filter,
    NotOp,
    QueryAst,
    TermExpr,
    TriplePattern,
    Union,
    Var,
    VarExpr,
)
from .builtins import UnparseableDateError, format_date, parse_date, weeks_between

_RDF_TYPE = iri(RDF_TYPE)
_NUMERIC_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)$")

_TRUE = literal("true", XSD_BOOLEAN)
_FALSE = literal("false", XSD_BOOLEAN)


class EvaluationError(Exception):
    """Raised internally for expression errors; never escapes evaluate()."""


def numeric_value(term):
    """The numeric value of a literal with a numeric lexical form, else None."""
    if term is None or not term.is_literal:
        return None
    if not _NUMERIC_RE.match(term.value.strip()):
        return None
    text = term.value.strip()
    if "." in text:
        return float(text)
    return int(text)


def order_key(term) -> tuple:
    """Total order for ORDER BY: unbound < blank < iri < literal.

    Numeric literals sort by value ahead of other literals; lexical form and
    datatype break exact ties so sorting is deterministic.
    """
    if term is None:
        return (0,)
    if term.is_blank:
        return (1, term.value)
    if term.is_iri:
        return (2, term.value)
    num = numeric_value(term)
    if num is not None:
        return (3, 0, num, term.value, term.datatype or "")
    return (3, 1, term.value, term.datatype or "")


def compare_terms(op: str, a: Term, b: Term) -> bool:
    an, bn = numeric_value(a), numeric_value(b)
    if op == "=":
        if an is not None and bn is not None:
            return an == bn
        return a == b
    if op == "!=":
        return not compare_terms("=", a, b)
    if an is not None and bn is not None:
        ka, kb = an, bn
    else:
        ka = (_kind_rank(a), a.value, a.datatype or "")
        kb = (_kind_rank(b), b.value, b.datatype or "")
    if op == "<":
        return ka < kb
    if op == "<=":
        return ka <= kb
    if op == ">":
        return ka > kb
    if op == ">=":
        return ka >= kb
    raise EvaluationError(f"unknown comparison {op}")


def _kind_rank(t: Term) -> int:
    return {"blank": 1, "iri": 2, "literal": 3}[t.kind]


def effective_boolean(term: Term) -> bool:
    if not term.is_literal:
        raise EvaluationError(f"no boolean value for {term!r}")
    if term.datatype == XSD_BOOLEAN:
        return term.value == "true"
    num = numeric_value(term)
    if num is not None:
        return num != 0
    if term.datatype in (None, XSD_STRING):
        return len(term.value) > 0
    raise EvaluationError(f"no boolean value for {term!r}")


def eval_expression(expr, row: dict) -> Term:
    """Evaluate an expression against one solution row. Raises EvaluationError."""
    if isinstance(expr, TermExpr):
        return expr.term
    if isinstance(expr, VarExpr):
        value = row.get(expr.var.name)
        if value is None:
            raise EvaluationError(f"unbound variable ?{expr.var.name}")
        return value
    if isinstance(expr, Comparison):
        left = eval_expression(expr.left, row)
        right = eval_expression(expr.right, row)
        return _TRUE if compare_terms(expr.op, left, right) else _FALSE
    if isinstance(expr, BoolOp):
        left = effective_boolean(eval_expression(expr.left, row))
        if expr.op == "&&" and not left:
            return _FALSE
        if expr.op == "||" and left:
            return _TRUE
        right = effective_boolean(eval_expression(expr.right, row))
        return _TRUE if right else _FALSE
    if isinstance(expr, NotOp):
        return _FALSE if effective_boolean(eval_expression(expr.expr, row)) else _TRUE
    if isinstance(expr, Call):
        return _eval_call(expr, row)
    raise EvaluationError(f"unknown expression node {expr!r}")


def _eval_call(call: Call, row: dict) -> Term:
    args = [eval_expression(a, row) for a in call.args]
    if call.func == "spif:parseDate":
        if len(args) != 2 or not args[0].is_literal or not args[1].is_literal:
            raise EvaluationError("spif:parseDate takes a value literal and a pattern literal")
        try:
            parsed = parse_date(args[0].value, args[1].value)
        except (UnparseableDateError, ValueError) as exc:
            raise EvaluationError(str(exc)) from None
        return literal(format_date(parsed), XSD_DATETIME)
    if call.func == "ofn:weeksBetween":
        if len(args) != 2:
            raise EvaluationError("ofn:weeksBetween takes two dateTime arguments")
        instants = []
        for arg in args:
            if not arg.is_literal:
                raise EvaluationError(f"not a dateTime literal: {arg!r}")
            try:
                instants.append(parse_date(arg.value))
            except UnparseableDateError as exc:
                raise EvaluationError(str(exc)) from None
        return literal(str(weeks_between(instants[0], instants[1])), XSD_INTEGER)
    raise EvaluationError(f"unknown function {call.func}")


@dataclass
class SolutionTable:
    """Projected query result: ordered columns, rows of Terms (None = unbound)."""

    columns: tuple
    rows: list

    def __len__(self):
        return len(self.rows)

    def to_dicts(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]

    def row_multiset(self):
        out: dict[tuple, int] = {}
        for row in self.rows:
            out[row] = out.get(row, 0) + 1
        return out

    def row_set(self) -> set:
        return set(self.rows)


class _Evaluator:
    def __init__(self, store: TripleStore, schema: Schema, subclass_closure: bool):
        self.store = store
        self.types = TypeIndex(store, schema, closure=subclass_closure)

    # -- pattern matching ---------------------------------------------------

    def _match_pattern(self, tp: TriplePattern, row: dict) -> list[dict]:
        def resolve(node):
            if isinstance(node, Var):
                return row.get(node.name)
            return node

        s, p, o = resolve(tp.subject), resolve(tp.predicate), resolve(tp.object)
        if p == _RDF_TYPE:
            candidates = self._type_candidates(s, o)
        else:
            candidates = ((t.subject, t.predicate, t.object) for t in self.store.match(s, p, o))
        out = []
        for subj, pred, obj in candidates:
            extended = self._bind_row(tp, row, subj, pred, obj)
            if extended is not None:
                out.append(extended)
        return out

    def _type_candidates(self, s, o):
        """(instance, rdf:type, class) rows for a type pattern, closure included."""
        if o is not None:
            for inst in self.types.instances_of(o):
                if s is None or inst == s:
                    yield inst, _RDF_TYPE, o
        elif s is not None:
            for cls in self.types.types_of(s):
                yield s, _RDF_TYPE, cls
        else:
            for inst, cls in self.types.pairs():
                yield inst, _RDF_TYPE, cls

    def _bind_row(self, tp: TriplePattern, row: dict, subj: Term, pred: Term, obj: Term):
        new = dict(row)
        for node, value in ((tp.subject, subj), (tp.predicate, pred), (tp.object, obj)):
            if isinstance(node, Var):
                current = new.get(node.name)
                if current is None:
                    new[node.name] = value
                elif current != value:
                    return None
        return new

    # -- group evaluation -----------------------------------------------------

    def eval_group(self, elements, rows: list[dict]) -> list[dict]:
        for el in elements:
            if isinstance(el, TriplePattern):
                rows = [m for row in rows for m in self._match_pattern(el, row)]
            elif isinstance(el, Bind):
                rows = [self._apply_bind(el, row) for row in rows]
            elif isinstance(el, Filter):
                rows = [row for row in rows if self._filter_keeps(el, row)]
            elif isinstance(el, Union):
                rows = [
                    m
                    for row in rows
                    for branch in el.branches
                    for m in self.eval_group(branch, [row])
                ]
            else:
                raise TypeError(f"unknown pattern element {el!r}")
            if not rows:
                return []
        return rows

    def _apply_bind(self, bind: Bind, row: dict) -> dict:
        new = dict(row)
        try:
            new[bind.var.name] = eval_expression(bind.expr, row)
        except EvaluationError:
            pass  # error-as-unbound
        return new

    def _filter_keeps(self, flt: Filter, row: dict) -> bool:
        try:
            return effective_boolean(eval_expression(flt.expr, row))
        except EvaluationError:
            return False


def evaluate(
    store: TripleStore,
    schema: Schema,
    q: QueryAst,
    *,
    subclass_closure: bool = True,
) -> SolutionTable:
    """Run a parsed query and return its solution table."""
    ev = _Evaluator(store, schema, subclass_closure)
    rows = ev.eval_group(q.pattern, [{}])

    if q.group_by or q.has_aggregates:
        rows = _group_and_aggregate(q, rows)

    if q.order_by:
        rows = _order(q.order_by, rows)

    columns = tuple(
        item.alias.name if isinstance(item, CountAgg) else item.name for item in q.select
    )
    projected = [tuple(row.get(c) for c in columns) for row in rows]

    if q.distinct:
        seen = set()
        deduped = []
        for row in projected:
            if row not in seen:
                seen.add(row)
                deduped.append(row)
        projected = deduped

    return SolutionTable(columns, projected)


def _group_and_aggregate(q: QueryAst, rows: list[dict]) -> list[dict]:
    if q.group_by:
        groups: dict[tuple, list[dict]] = {}
        for row in rows:
            key = tuple(row.get(v.name) for v in q.group_by)
            groups.setdefault(key, []).append(row)
    else:
        # all-aggregate projection: a single group, present even when empty
        groups = {(): rows}
    out = []
    for key, members in groups.items():
        new: dict = {v.name: value for v, value in zip(q.group_by, key)}
        for item in q.select:
            if isinstance(item, CountAgg):
                if item.arg is None:
                    count = len(members)
                else:
                    count = sum(1 for m in members if m.get(item.arg.name) is not None)
                new[item.alias.name] = literal(str(count), XSD_INTEGER)
        out.append(new)
    return out


def _order(order_by, rows: list[dict]) -> list[dict]:
    # Deterministic base: lexicographic term order over the row's variables.
    def row_tiebreak(row: dict):
        return sorted((name, order_key(value)) for name, value in row.items())

    rows = sorted(rows, key=row_tiebreak)
    # Stable multi-pass sort applies keys from last to first.
    for key in reversed(order_by):

        def sort_key(row, key=key):
            try:
                return order_key(eval_expression(key.expr, row))
            except EvaluationError:
                return order_key(None)

        rows.sort(key=sort_key, reverse=key.descending)
    return rows
