"""compass_kg: knowledge-graph engine and coverage decision support.

A triple store with a Turtle-subset loader, the Compass schema and validator,
a SPARQL-subset query engine, typed coverage operations, a deterministic data
generator, and an HTTP/CLI shell around all of it.
"""

from .competency import (
    Barrier,
    CoverageReport,
    DemographicRow,
    Duplicate,
    DurationReport,
    Gap,
    ServiceMatch,
    UnknownEntityError,
    alternative_services,
    barrier_aggregate,
    eligibility_and_barriers,
    gaps_and_duplicates,
    list_services,
    priority_demographics,
    privacy_requirements,
    referral_options,
    service_duration_detail,
    service_duration_weeks,
    services_matching_needs,
)
from .fixture import fixture, fixture_document
from .namespaces import DEFAULT_PREFIXES, expand_name, shrink_iri
from .ontology import (
    PropertyDecl,
    Range,
    Schema,
    TaxonomyCode,
    TypeIndex,
    apply_taxonomy,
    build_compass_schema,
    is_instance_of,
    load_taxonomy,
)
from .query import (
    QueryAst,
    SolutionTable,
    evaluate,
    parse_query,
    parse_date,
    weeks_between,
)
from .store import Term, Triple, TripleStore, blank, iri, literal
from .synth import GenConfig, SplitMix64, generate
from .validator import Violation, explain, validate

__version__ = "0.1.0"

__all__ = [
    "Barrier",
    "CoverageReport",
    "DEFAULT_PREFIXES",
    "DemographicRow",
    "Duplicate",
    "DurationReport",
    "Gap",
    "GenConfig",
    "PropertyDecl",
    "QueryAst",
    "Range",
    "Schema",
    "ServiceMatch",
    "SolutionTable",
    "SplitMix64",
    "TaxonomyCode",
    "Term",
    "Triple",
    "TripleStore",
    "TypeIndex",
    "UnknownEntityError",
    "Violation",
    "alternative_services",
    "apply_taxonomy",
    "barrier_aggregate",
    "blank",
    "build_compass_schema",
    "eligibility_and_barriers",
    "evaluate",
    "expand_name",
    "explain",
    "fixture",
    "fixture_document",
    "gaps_and_duplicates",
    "generate",
    "iri",
    "is_instance_of",
    "list_services",
    "literal",
    "load_taxonomy",
    "parse_date",
    "parse_query",
    "priority_demographics",
    "privacy_requirements",
    "referral_options",
    "service_duration_detail",
    "service_duration_weeks",
    "services_matching_needs",
    "shrink_iri",
    "validate",
    "weeks_between",
]
