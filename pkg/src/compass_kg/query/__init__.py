from .ast import Bind, CountAgg, Filter, OrderKey, QueryAst, TriplePattern, Union, Var
from .builtins import DATE_PATTERN, UnparseableDateError, format_date, parse_date, weeks_between
from .errors import QueryError, QuerySyntaxError, UnsupportedFeatureError
from .evaluate import SolutionTable, evaluate
from .parser import parse_query

__all__ = [
    "Bind",
    "CountAgg",
    "DATE_PATTERN",
    "Filter",
    "OrderKey",
    "QueryAst",
    "QueryError",
    "QuerySyntaxError",
    "SolutionTable",
    "TriplePattern",
    "Union",
    "UnparseableDateError",
    "UnsupportedFeatureError",
    "Var",
    "evaluate",
    "format_date",
    "parse_date",
    "parse_query",
    "weeks_between",
]
