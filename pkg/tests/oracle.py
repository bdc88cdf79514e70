"""Independent reference evaluator and random-case generators.

The oracle re-derives everything the engine computes, on purpose: it scans the
full triple list per pattern instead of using indexes, walks subclass edges by
fixpoint instead of the schema's cached closure, and re-implements the
documented expression and ordering rules. It consumes the parsed AST only.
"""

from __future__ import annotations

import random
import re

from compass_kg.namespaces import (
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DATETIME,
    XSD_INTEGER,
    XSD_STRING,
    cp,
)
from compass_kg.query.ast import (
    Bind,
    BoolOp,
    Call,
    Comparison,
    CountAgg,
    Filter,
    NotOp,
    TermExpr,
    TriplePattern,
    Union,
    Var,
    VarExpr,
)
from compass_kg.query.builtins import UnparseableDateError, format_date, parse_date, weeks_between
from compass_kg.store import Term, Triple, TripleStore, iri, literal


class OracleError(Exception):
    pass


# -- independent subclass closure ------------------------------------------------


def _closure_table(schema) -> dict[str, set[str]]:
    parents: dict[str, set[str]] = {}
    for child, parent in schema.subclass_pairs():
        parents.setdefault(child, set()).add(parent)
    closed: dict[str, set[str]] = {}
    for c in schema.classes:
        seen = {c}
        frontier = [c]
        while frontier:
            nxt = []
            for x in frontier:
                for p in parents.get(x, ()):
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
        closed[c] = seen
    return closed


def _materialized_types(triples, schema, closure: bool):
    table = _closure_table(schema) if closure else {}
    pairs = []
    seen = set()
    for t in triples:
        if t.predicate.value != RDF_TYPE:
            continue
        if closure and t.object.is_iri and t.object.value in table:
            expanded = [iri(c) for c in sorted(table[t.object.value])]
        else:
            expanded = [t.object]
        for c in expanded:
            if (t.subject, c) not in seen:
                seen.add((t.subject, c))
                pairs.append((t.subject, c))
    return pairs


# -- documented value rules, re-implemented -------------------------------------


_NUMERIC_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)$")


def _num_strict(term):
    if term is None or not term.is_literal:
        return None
    text = term.value.strip()
    if not _NUMERIC_RE.match(text):
        return None
    return float(text) if "." in text else int(text)


def order_key(term):
    if term is None:
        return (0,)
    if term.is_blank:
        return (1, term.value)
    if term.is_iri:
        return (2, term.value)
    num = _num_strict(term)
    if num is not None:
        return (3, 0, num, term.value, term.datatype or "")
    return (3, 1, term.value, term.datatype or "")


def _compare(op, a, b):
    an, bn = _num_strict(a), _num_strict(b)
    if op == "=":
        return an == bn if (an is not None and bn is not None) else a == b
    if op == "!=":
        return not _compare("=", a, b)
    if an is not None and bn is not None:
        ka, kb = an, bn
    else:
        rank = {"blank": 1, "iri": 2, "literal": 3}
        ka = (rank[a.kind], a.value, a.datatype or "")
        kb = (rank[b.kind], b.value, b.datatype or "")
    return {"<": ka < kb, "<=": ka <= kb, ">": ka > kb, ">=": ka >= kb}[op]


def _ebv(term):
    if not term.is_literal:
        raise OracleError("no boolean value")
    if term.datatype == XSD_BOOLEAN:
        return term.value == "true"
    num = _num_strict(term)
    if num is not None:
        return num != 0
    if term.datatype in (None, XSD_STRING):
        return bool(term.value)
    raise OracleError("no boolean value")


def _eval_expr(expr, row):
    if isinstance(expr, TermExpr):
        return expr.term
    if isinstance(expr, VarExpr):
        if expr.var.name not in row or row[expr.var.name] is None:
            raise OracleError("unbound")
        return row[expr.var.name]
    if isinstance(expr, Comparison):
        ok = _compare(expr.op, _eval_expr(expr.left, row), _eval_expr(expr.right, row))
        return literal("true" if ok else "false", XSD_BOOLEAN)
    if isinstance(expr, BoolOp):
        left = _ebv(_eval_expr(expr.left, row))
        if expr.op == "&&" and not left:
            return literal("false", XSD_BOOLEAN)
        if expr.op == "||" and left:
            return literal("true", XSD_BOOLEAN)
        right = _ebv(_eval_expr(expr.right, row))
        return literal("true" if right else "false", XSD_BOOLEAN)
    if isinstance(expr, NotOp):
        return literal("false" if _ebv(_eval_expr(expr.expr, row)) else "true", XSD_BOOLEAN)
    if isinstance(expr, Call):
        args = [_eval_expr(a, row) for a in expr.args]
        try:
            if expr.func == "spif:parseDate":
                return literal(format_date(parse_date(args[0].value, args[1].value)), XSD_DATETIME)
            if expr.func == "ofn:weeksBetween":
                return literal(
                    str(weeks_between(parse_date(args[0].value), parse_date(args[1].value))),
                    XSD_INTEGER,
                )
        except (UnparseableDateError, ValueError, AttributeError, IndexError):
            raise OracleError("builtin error")
        raise OracleError(f"unknown function {expr.func}")
    raise OracleError("unknown expression")


def brute_force(store: TripleStore, schema, ast, closure: bool = True):
    """Reference evaluation; returns projected rows as a list of tuples."""
    triples = list(store)
    type_pairs = _materialized_types(triples, schema, closure)

    def match_one(tp: TriplePattern, row):
        def resolved(node):
            return row.get(node.name) if isinstance(node, Var) else node

        s, p, o = resolved(tp.subject), resolved(tp.predicate), resolved(tp.object)
        if p is not None and p.is_iri and p.value == RDF_TYPE:
            candidates = [(i, iri(RDF_TYPE), c) for i, c in type_pairs]
        else:
            candidates = [(t.subject, t.predicate, t.object) for t in triples]
        for cs, cp_, co in candidates:
            if s is not None and cs != s:
                continue
            if p is not None and cp_ != p:
                continue
            if o is not None and co != o:
                continue
            new = dict(row)
            ok = True
            for node, value in ((tp.subject, cs), (tp.predicate, cp_), (tp.object, co)):
                if isinstance(node, Var):
                    if node.name in new and new[node.name] != value:
                        ok = False
                        break
                    new[node.name] = value
            if ok:
                yield new

    def eval_elements(elements, rows):
        for el in elements:
            if isinstance(el, TriplePattern):
                rows = [m for row in rows for m in match_one(el, row)]
            elif isinstance(el, Bind):
                new_rows = []
                for row in rows:
                    row = dict(row)
                    try:
                        row[el.var.name] = _eval_expr(el.expr, row)
                    except OracleError:
                        pass
                    new_rows.append(row)
                rows = new_rows
            elif isinstance(el, Filter):
                kept = []
                for row in rows:
                    try:
                        if _ebv(_eval_expr(el.expr, row)):
                            kept.append(row)
                    except OracleError:
                        pass
                rows = kept
            elif isinstance(el, Union):
                rows = [
                    m for row in rows for branch in el.branches for m in eval_elements(branch, [row])
                ]
        return rows

    rows = eval_elements(list(ast.pattern), [{}])

    if ast.group_by or any(isinstance(i, CountAgg) for i in ast.select):
        groups: dict[tuple, list] = {}
        if ast.group_by:
            for row in rows:
                key = tuple(row.get(v.name) for v in ast.group_by)
                groups.setdefault(key, []).append(row)
        else:
            groups[()] = rows
        rows = []
        for key, members in groups.items():
            new = {v.name: value for v, value in zip(ast.group_by, key)}
            for item in ast.select:
                if isinstance(item, CountAgg):
                    if item.arg is None:
                        n = len(members)
                    else:
                        n = sum(1 for m in members if m.get(item.arg.name) is not None)
                    new[item.alias.name] = literal(str(n), XSD_INTEGER)
            rows.append(new)

    if ast.order_by:
        rows = sorted(rows, key=lambda r: sorted((k, order_key(v)) for k, v in r.items()))
        for key in reversed(ast.order_by):

            def k(row, key=key):
                try:
                    return order_key(_eval_expr(key.expr, row))
                except OracleError:
                    return order_key(None)

            rows.sort(key=k, reverse=key.descending)

    columns = [i.alias.name if isinstance(i, CountAgg) else i.name for i in ast.select]
    projected = [tuple(row.get(c) for c in columns) for row in rows]
    if ast.distinct:
        seen = set()
        out = []
        for row in projected:
            if row not in seen:
                seen.add(row)
                out.append(row)
        projected = out
    return projected


# -- random case generation -------------------------------------------------------

# Vocabulary for random stores: a few event classes so the subclass closure has
# real work to do, plus plain nodes, predicates, and literals.
_CLASSES = [
    cp("Event"),
    cp("ClientEvent"),
    cp("ServiceEvent"),
    cp("MedicalEvent"),
    cp("HousingEvent"),
    cp("Client"),
    "http://example.org/unknown#Thing",
]
_SUBJECTS = [cp(f"n{i}") for i in range(12)]
_PREDICATES = [cp(f"p{i}") for i in range(5)]
_LITERALS = (
    [literal(str(i), XSD_INTEGER) for i in (0, 1, 2, 7, 18)]
    + [literal(s) for s in ("x", "y", "alpha")]
    + [literal("2021-01-01T00:00:00.000"), literal("2021-03-05T10:30:00.000")]
)


def random_store(rng: random.Random, max_triples: int = 200) -> TripleStore:
    store = TripleStore()
    n = rng.randint(0, max_triples)
    for _ in range(n):
        if rng.random() < 0.25:
            s = iri(rng.choice(_SUBJECTS))
            store.add(s, iri(RDF_TYPE), iri(rng.choice(_CLASSES)))
        else:
            s = iri(rng.choice(_SUBJECTS))
            p = iri(rng.choice(_PREDICATES))
            o = (
                literal(rng.choice(_LITERALS).value, rng.choice(_LITERALS).datatype)
                if rng.random() < 0.4
                else iri(rng.choice(_SUBJECTS + _CLASSES))
            )
            store.add(s, p, o)
    return store


def _pattern_text(rng, vars_in_use: list[str], force_shared: bool, allow_pred_var: bool) -> str:
    existing = list(vars_in_use)

    def var():
        if vars_in_use and rng.random() < 0.6:
            return "?" + rng.choice(vars_in_use)
        name = f"v{len(vars_in_use)}"
        vars_in_use.append(name)
        return "?" + name

    def subject():
        return var() if rng.random() < 0.7 else _short(rng.choice(_SUBJECTS))

    def predicate():
        r = rng.random()
        if r < 0.15 and allow_pred_var:
            return var()
        if r < 0.35:
            return "rdf:type" if rng.random() < 0.5 else "a"
        return _short(rng.choice(_PREDICATES))

    def obj():
        r = rng.random()
        if r < 0.45:
            return var()
        if r < 0.65:
            lit = rng.choice(_LITERALS)
            return f'"{lit.value}"'
        return _short(rng.choice(_SUBJECTS + _CLASSES))

    parts = [subject(), predicate(), obj()]
    # Keep joins connected so intermediate results stay bounded.
    if force_shared and existing and not any(p[1:] in existing for p in parts if p.startswith("?")):
        parts[rng.randrange(3) if rng.random() < 0.5 else 0] = "?" + rng.choice(existing)
    return f"{parts[0]} {parts[1]} {parts[2]} ."


def _short(full_iri: str) -> str:
    if full_iri.startswith(cp("")):
        return "cp:" + full_iri[len(cp("")):]
    return f"<{full_iri}>"


def random_query_text(rng: random.Random, max_patterns: int = 5) -> str:
    vars_in_use: list[str] = []
    lines = []
    n_patterns = rng.randint(1, max_patterns)
    pred_vars = 1  # at most one predicate variable keeps join fan-out sane
    for idx in range(n_patterns):
        lines.append(
            "  " + _pattern_text(rng, vars_in_use, force_shared=idx > 0, allow_pred_var=pred_vars > 0)
        )
        if lines[-1].split()[1].startswith("?"):
            pred_vars -= 1
    if not vars_in_use:
        lines.append("  ?v0 ?v1 ?v2 .")
        vars_in_use.extend(["v0", "v1", "v2"])

    use_union = rng.random() < 0.25 and 2 <= len(lines) <= 3
    if use_union:
        split = rng.randint(1, len(lines) - 1)
        left, right = lines[:split], lines[split:]
        body = "  {\n" + "\n".join(left) + "\n  } UNION {\n" + "\n".join(right) + "\n  }"
    else:
        body = "\n".join(lines)

    # The shared-slot rewrite can orphan a freshly minted variable, so read the
    # usable variables back out of the final text.
    used_vars = sorted(set(re.findall(r"\?(\w+)", body)))
    if not used_vars:
        body += "\n  ?v0 ?v1 ?v2 ."
        used_vars = ["v0", "v1", "v2"]
    vars_in_use = used_vars

    if rng.random() < 0.3:
        v = rng.choice(vars_in_use)
        lit = rng.choice(_LITERALS)
        op = rng.choice(["=", "!=", "<", "<=", ">", ">="])
        body += f'\n  FILTER(?{v} {op} "{lit.value}")'

    projected = sorted(set(rng.sample(vars_in_use, k=min(len(vars_in_use), rng.randint(1, 3)))))
    distinct = "DISTINCT " if rng.random() < 0.5 else ""

    group = rng.random() < 0.25
    suffix = ""
    select_items = " ".join(f"?{v}" for v in projected)
    if group:
        counted = rng.choice(vars_in_use)
        select_items = " ".join(f"?{v}" for v in projected) + f" (COUNT(?{counted}) AS ?agg)"
        suffix += "\nGROUP BY " + " ".join(f"?{v}" for v in projected)
        distinct = ""
        if rng.random() < 0.6:
            suffix += "\nORDER BY DESC(?agg)"
    elif rng.random() < 0.35:
        keys = rng.sample(projected, k=min(len(projected), rng.randint(1, 2)))
        rendered = [
            (f"DESC(?{k})" if rng.random() < 0.5 else f"ASC(?{k})") for k in keys
        ]
        suffix += "\nORDER BY " + " ".join(rendered)

    return f"SELECT {distinct}{select_items} WHERE {{\n{body}\n}}{suffix}\n"
