"""Query AST for the supported SPARQL subset.

A query is SELECT (optionally DISTINCT) over a group pattern of triple
patterns, BINDs, FILTERs, and UNIONs, with optional GROUP BY / COUNT and
ORDER BY. Blank-node property lists are desugared into fresh-variable triple
patterns by the parser, so they never appear here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union as TUnion

from ..store import Term


@dataclass(frozen=True, slots=True)
class Var:
    name: str  # without the leading '?'

    def __repr__(self):
        return f"?{self.name}"


Node = TUnion[Var, Term]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: Node
    predicate: Node
    object: Node


# -- expressions --------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class VarExpr:
    var: Var


@dataclass(frozen=True, slots=True)
class TermExpr:
    term: Term


@dataclass(frozen=True, slots=True)
class Call:
    func: str  # prefixed name as written, e.g. "ofn:weeksBetween"
    args: tuple


@dataclass(frozen=True, slots=True)
class Comparison:
    op: str  # = != < <= > >=
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class BoolOp:
    op: str  # && ||
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class NotOp:
    expr: object


Expr = TUnion[VarExpr, TermExpr, Call, Comparison, BoolOp, NotOp]


# -- group pattern elements ----------------------------------------------------


@dataclass(frozen=True, slots=True)
class Bind:
    expr: Expr
    var: Var


@dataclass(frozen=True, slots=True)
class Filter:
    expr: Expr


@dataclass(frozen=True, slots=True)
class Union:
    branches: tuple  # tuple of groups; a group is a tuple of elements


Element = TUnion[TriplePattern, Bind, Filter, Union]


@dataclass(frozen=True, slots=True)
class CountAgg:
    arg: Var | None  # None means COUNT(*)
    alias: Var


SelectItem = TUnion[Var, CountAgg]


@dataclass(frozen=True, slots=True)
class OrderKey:
    expr: Expr
    descending: bool = False


@dataclass(frozen=True, slots=True)
class QueryAst:
    select: tuple
    distinct: bool
    pattern: tuple
    group_by: tuple = ()
    order_by: tuple = ()

    @property
    def has_aggregates(self) -> bool:
        return any(isinstance(item, CountAgg) for item in self.select)


def group_variables(elements) -> set[Var]:
    """All variables bound by a group: pattern positions and BIND targets."""
    out: set[Var] = set()
    for el in elements:
        if isinstance(el, TriplePattern):
            for pos in (el.subject, el.predicate, el.object):
                if isinstance(pos, Var):
                    out.add(pos)
        elif isinstance(el, Bind):
            out.add(el.var)
        elif isinstance(el, Union):
            for branch in el.branches:
                out |= group_variables(branch)
    return out
