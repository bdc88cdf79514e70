"""Compass schema: class inventory, property declarations, taxonomy codes.

The schema is code-defined and immutable. It covers the client, service, need,
and event patterns plus the minimal CIDS scaffold (organization, program,
service, outcome, stakeholder) that Compass extends.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .namespaces import (
    DEFAULT_PREFIXES,
    RDF_TYPE,
    RDFS_LABEL,
    XSD_DATETIME,
    XSD_INTEGER,
    XSD_STRING,
    cids,
    cp,
    expand_name,
    i72,
    ic,
    iso5087,
    oep,
    schema_org,
    time_ns,
)
from .store import Term, Triple, TripleStore, iri, literal, term_key


class SchemaError(Exception):
    pass


class UnknownClassError(SchemaError):
    pass


class UnknownCodeClassError(SchemaError):
    pass


class DuplicateInstanceError(SchemaError):
    pass


# Closed value sets. Modes and event statuses come from the service and event
# patterns; acuity admits both published vocabularies.
SERVICE_MODES = ("in-person", "phone", "online", "offline")
SERVICE_EVENT_STATUSES = ("scheduled", "inProgress", "completed")
OPEN_EVENT_STATUSES = ("scheduled", "inProgress")
ACUITY_VALUES = ("Low", "Medium", "High", "1", "2", "3")


@dataclass(frozen=True)
class Range:
    """Range constraint of a property: class link, coded link, enum, or datatype."""

    kind: str  # "class" | "code" | "enum" | "datatype"
    class_iri: str | None = None
    values: tuple[str, ...] = ()

    @staticmethod
    def cls(class_iri: str) -> "Range":
        return Range("class", class_iri)

    @staticmethod
    def code(code_class_iri: str) -> "Range":
        return Range("code", code_class_iri)

    @staticmethod
    def enum(*values: str) -> "Range":
        if not values:
            raise SchemaError("enumeration range must be non-empty")
        if len(set(values)) != len(values):
            raise SchemaError(f"duplicate enumeration values: {values}")
        return Range("enum", values=tuple(values))

    @staticmethod
    def datatype(datatype_iri: str) -> "Range":
        return Range("datatype", datatype_iri)


@dataclass(frozen=True)
class PropertyDecl:
    iri: str
    domain: frozenset[str]
    range: Range
    functional: bool = False

    @property
    def coded(self) -> bool:
        # coded holds exactly when the range is a code class
        return self.range.kind == "code"


@dataclass(frozen=True)
class TaxonomyCode:
    instance: str
    code_class: str
    label: str
    external_ref: str | None = None


def _decl(prop: str, domain: tuple[str, ...], rng: Range, functional: bool = False) -> PropertyDecl:
    return PropertyDecl(prop, frozenset(domain), rng, functional)


class Schema:
    """Immutable class/property inventory with a subclass closure."""

    def __init__(self, classes, subclass_of, properties):
        self.classes: frozenset[str] = frozenset(classes)
        self._parents: dict[str, tuple[str, ...]] = {
            c: tuple(sorted(ps)) for c, ps in subclass_of.items()
        }
        self.properties: tuple[PropertyDecl, ...] = tuple(properties)
        self._by_iri: dict[str, tuple[PropertyDecl, ...]] = {}
        for decl in self.properties:
            self._by_iri.setdefault(decl.iri, ())
            self._by_iri[decl.iri] += (decl,)
        self._check_acyclic()
        self._super_cache: dict[str, frozenset[str]] = {}

    def _check_acyclic(self):
        seen_done: dict[str, bool] = {}

        def visit(c, trail):
            if c in trail:
                raise SchemaError(f"subclass cycle through {c}")
            if seen_done.get(c):
                return
            for p in self._parents.get(c, ()):
                visit(p, trail | {c})
            seen_done[c] = True

        for c in self._parents:
            visit(c, frozenset())

    def superclasses(self, class_iri: str) -> frozenset[str]:
        """Reflexive-transitive superclasses of ``class_iri``."""
        cached = self._super_cache.get(class_iri)
        if cached is not None:
            return cached
        out = {class_iri}
        stack = list(self._parents.get(class_iri, ()))
        while stack:
            c = stack.pop()
            if c not in out:
                out.add(c)
                stack.extend(self._parents.get(c, ()))
        result = frozenset(out)
        self._super_cache[class_iri] = result
        return result

    def is_subclass(self, class_iri: str, ancestor_iri: str) -> bool:
        return ancestor_iri in self.superclasses(class_iri)

    def subclasses(self, class_iri: str) -> frozenset[str]:
        return frozenset(c for c in self.classes if class_iri in self.superclasses(c))

    def declarations(self, prop_iri: str) -> tuple[PropertyDecl, ...]:
        return self._by_iri.get(prop_iri, ())

    def declaration_for(self, prop_iri: str, subject_types: set[str]) -> PropertyDecl | None:
        """Pick the declaration whose domain covers any of ``subject_types``.

        Types are taken with closure, so a ServiceEvent subject satisfies a
        domain of Event. Unrestricted declarations (empty domain) match last.
        """
        fallback = None
        closed = set()
        for t in subject_types:
            closed |= self.superclasses(t) if t in self.classes else {t}
        for decl in self.declarations(prop_iri):
            if not decl.domain:
                fallback = decl
            elif closed & decl.domain:
                return decl
        return fallback

    def subclass_pairs(self):
        for child, parents in sorted(self._parents.items()):
            for parent in parents:
                yield child, parent

    def __eq__(self, other):
        if not isinstance(other, Schema):
            return NotImplemented
        return (
            self.classes == other.classes
            and self._parents == other._parents
            and self.properties == other.properties
        )


# The 13 life-event specializations of ClientEvent.
CLIENT_EVENT_KINDS = (
    "EducationEvent",
    "EmploymentEvent",
    "MedicalEvent",
    "MilitaryEvent",
    "ImmigrationEvent",
    "HousingEvent",
    "NameEvent",
    "GenderEvent",
    "BirthEvent",
    "DeathEvent",
    "MaritalEvent",
    "HomelessEvent",
    "JusticeSystemEvent",
)

CLIENT_CODE_CLASSES = (
    "CL-Age",
    "CL-Gender",
    "CL-Ethnicity",
    "CL-Religion",
    "CL-Sexuality",
    "CL-FamilyStatus",
    "CL-AboriginalGroup",
    "CL-Citizenship",
    "CL-Homelessness",
    "CL-ShelterType",
    "CL-Safety",
    "CL-HealthStatus",
    "CL-Constraint",
    "CL-Rank",
    "CL-Temporality",
    "CL-Info_Privacy",
    "CL-Area",
    "CL-Demographic",
)

SERVICE_CODE_CLASSES = (
    "CL-Health",
    "CL-Cost",
    "CL-Personal",
    "Shelter",
    "CL-Advocacy",
    "CL-Referral",
    "CL-Education",
    "CL-Employment",
    "CL-Relationships",
    "CL-Finance",
    "CL-Goods",
    "CL-Food",
)

NEED_CODE_CLASSES = ("CL-SatisfierType",)


def build_compass_schema() -> Schema:
    """Construct the fixed Compass schema. Pure; repeated calls are equal."""
    classes: set[str] = set()
    sub: dict[str, set[str]] = {}

    def cls(c: str, *parents: str) -> str:
        classes.add(c)
        if parents:
            sub.setdefault(c, set()).update(parents)
        return c

    # CIDS scaffold
    organization = cls(cids("Organization"))
    program = cls(cids("Program"))
    cids_service = cls(cids("Service"))
    stakeholder = cls(cids("Stakeholder"))
    cls(cids("BeneficialStakeholder"), stakeholder)
    cls(cids("ContributingStakeholder"), stakeholder)
    outcome = cls(cids("Outcome"))
    cls(cp("StakeholderOutcome"), outcome)
    characteristic = cls(cids("Characteristic"))
    composite = cls(cids("CompositeCharacteristic"), characteristic)
    cls(cp("CommunityCharacteristic"), characteristic)
    code = cls(cids("Code"))
    cls(cids("Activity"))  # link target only
    cls(time_ns("Interval"))  # link target only

    # Code taxonomy roots and their published subclasses
    client_code = cls(cp("ClientCode"), code)
    service_code = cls(cp("ServiceCode"), code)
    need_code = cls(cp("NeedCode"), code)
    for name in CLIENT_CODE_CLASSES:
        cls(cp(name), client_code)
    for name in SERVICE_CODE_CLASSES:
        cls(cp(name), service_code)
    for name in NEED_CODE_CLASSES:
        cls(cp(name), need_code)

    # Client pattern
    person = cls(iso5087("Person"))
    client = cls(cp("Client"), person)
    language = cls(cp("LanguageAbility"))
    community = cls(cp("Community"))
    city_division = cls(iso5087("CityDivision"))

    # Service pattern
    service = cls(cp("Service"), cids_service)
    application = cls(cp("Application"), service)

    # Needs pattern
    client_state = cls(cp("ClientState"))
    client_problem = cls(cp("ClientProblem"))
    client_goal = cls(cp("ClientGoal"))
    client_need = cls(cp("ClientNeed"))
    satisfier = cls(cp("NeedSatisfier"))
    status = cls(cp("Status"))

    # Event pattern
    event = cls(cp("Event"))
    client_event = cls(cp("ClientEvent"), event)
    stakeholder_event = cls(cp("StakeholderEvent"), event)
    failure_event = cls(cp("ServiceFailureEvent"), client_event)
    service_event = cls(cp("ServiceEvent"), event)
    application_event = cls(cp("ApplicationEvent"), event)
    for name in CLIENT_EVENT_KINDS:
        cls(cp(name), client_event)

    properties = [
        # client
        _decl(cp("satisfiesStakeholder"), (client,), Range.cls(stakeholder)),
        _decl(cids("hasOutcome"), (stakeholder,), Range.cls(cp("StakeholderOutcome"))),
        _decl(cp("hasGender"), (client,), Range.code(cp("CL-Gender")), functional=True),
        _decl(cp("hasEthnicity"), (client,), Range.code(cp("CL-Ethnicity"))),
        _decl(cp("memberOfAboriginalGroup"), (client,), Range.code(cp("CL-AboriginalGroup"))),
        _decl(cp("hasReligion"), (client,), Range.code(cp("CL-Religion"))),
        _decl(cp("hasDependent"), (client,), Range.cls(person)),
        _decl(schema_org("knowsLanguage"), (client,), Range.cls(language)),
        # service
        _decl(cp("hasRequirement"), (service,), Range.cls(characteristic)),
        _decl(cp("providesService"), (service,), Range.code(service_code)),
        _decl(cp("hasFocus"), (service,), Range.cls(characteristic)),
        _decl(cp("hasMode"), (service,), Range.enum(*SERVICE_MODES)),
        _decl(cp("providesSatisfier"), (service,), Range.cls(satisfier)),
        _decl(ic("hasAddress"), (program,), Range.cls(city_division)),
        _decl(cp("hasSource"), (application, application_event), Range.datatype(XSD_STRING)),
        _decl(cp("hasCommunityCharacteristic"), (community,), Range.cls(cp("CommunityCharacteristic"))),
        _decl(cp("hasNumber"), (community,), Range.datatype(XSD_INTEGER)),
        # needs
        _decl(cp("hasClientState"), (client,), Range.cls(client_state)),
        _decl(cp("hasProblem"), (client,), Range.cls(client_problem)),
        _decl(cp("hasGoal"), (client,), Range.cls(client_goal)),
        _decl(cp("hasNeed"), (client,), Range.cls(client_need)),
        _decl(cp("hasAcquityScore"), (client, client_need), Range.enum(*ACUITY_VALUES)),
        _decl(cp("hasStatus"), (client,), Range.cls(status)),
        _decl(cp("hasNeedSatisfier"), (client_need,), Range.cls(satisfier)),
        _decl(cp("hasType"), (satisfier,), Range.code(cp("CL-SatisfierType"))),
        _decl(cp("forNeed"), (satisfier,), Range.cls(client_need)),
        _decl(cp("changes"), (satisfier,), Range.cls(client_state)),
        # events
        _decl(cp("occursAt"), (event,), Range.cls(time_ns("Interval"))),
        _decl(cp("hasLocation"), (event,), Range.datatype(XSD_STRING)),
        _decl(cp("previousEvent"), (event,), Range.cls(event)),
        _decl(cp("nextEvent"), (event,), Range.cls(event)),
        _decl(cp("forClient"), (client_event, service_event), Range.cls(client)),
        _decl(cp("forStakeholder"), (stakeholder_event,), Range.cls(stakeholder)),
        _decl(cp("forService"), (failure_event, service_event), Range.cls(service)),
        _decl(cp("hasCharacteristic"), (failure_event,), Range.cls(characteristic)),
        _decl(cp("hasFailureType"), (failure_event,), Range.code(service_code)),
        _decl(cp("hasStatus"), (service_event,), Range.enum(*SERVICE_EVENT_STATUSES)),
        _decl(cp("atOrganization"), (service_event,), Range.cls(organization)),
        _decl(cp("hasReferral"), (service_event,), Range.cls(event)),
        _decl(cp("hasApplication"), (application_event,), Range.cls(application)),
        _decl(cp("hasUserStakeholder"), (application_event,), Range.cls(stakeholder)),
        _decl(cp("hasMetaData"), (application_event,), Range.datatype(XSD_STRING)),
        # characteristic qualifiers
        _decl(cp("hasRank"), (characteristic,), Range.code(cp("CL-Rank"))),
        _decl(cp("hasTemporality"), (characteristic,), Range.code(cp("CL-Temporality"))),
        # cross-cutting links used by the canned queries
        _decl(cids("hasCharacteristic"), (stakeholder, client), Range.cls(characteristic)),
        _decl(cids("hasCode"), (characteristic, service, service_event), Range.code(code)),
        _decl(oep("hasPart"), (composite,), Range.cls(characteristic)),
        _decl(i72("located_in"), (stakeholder,), Range.cls(city_division)),
        _decl(time_ns("hasBeginning"), (event,), Range.datatype(XSD_DATETIME)),
        _decl(time_ns("hasEnd"), (event,), Range.datatype(XSD_DATETIME)),
        # organizational scaffold links
        _decl(cids("hasProgram"), (organization,), Range.cls(program)),
        _decl(cids("hasService"), (program,), Range.cls(cids_service)),
        _decl(cids("hasActivity"), (cids_service,), Range.cls(cids("Activity"))),
        # unrestricted annotation
        _decl(RDFS_LABEL, (), Range.datatype(XSD_STRING)),
    ]

    return Schema(classes, sub, properties)


# -- taxonomy loading ---------------------------------------------------------

_TAXONOMY_COLUMNS = ("instance", "codeClass", "label")


def _expand_taxonomy_name(name: str) -> str:
    name = name.strip()
    if ":" in name or "://" in name:
        return expand_name(name, DEFAULT_PREFIXES)
    return cp(name)


def load_taxonomy(schema: Schema, table: str) -> list[TaxonomyCode]:
    """Parse a taxonomy CSV (UTF-8, header required) into code records.

    Columns: instance, codeClass, label, externalRef (last one optional). Bare
    names resolve in the cp: namespace; prefixed names and IRIs pass through
    expansion. Every codeClass must be a schema class under cids:Code.
    """
    reader = csv.reader(io.StringIO(table))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("taxonomy CSV is empty (header row required)")
    names = [h.strip() for h in header]
    if tuple(names[:3]) != _TAXONOMY_COLUMNS:
        raise SchemaError(
            f"taxonomy CSV header must start with {','.join(_TAXONOMY_COLUMNS)}, got {','.join(names)}"
        )
    # code classes hang off cids:Code through one of the three taxonomy roots
    taxonomy_roots = (cp("ClientCode"), cp("ServiceCode"), cp("NeedCode"))
    out: list[TaxonomyCode] = []
    seen: set[str] = set()
    for lineno, row in enumerate(reader, start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) < 3:
            raise SchemaError(f"taxonomy row {lineno} has fewer than 3 columns")
        instance = _expand_taxonomy_name(row[0])
        code_class = _expand_taxonomy_name(row[1])
        label = row[2].strip()
        external = row[3].strip() if len(row) > 3 and row[3].strip() else None
        if code_class not in schema.classes or not any(
            schema.is_subclass(code_class, root) for root in taxonomy_roots
        ):
            raise UnknownCodeClassError(
                f"row {lineno}: {row[1].strip()!r} is not a code class in the schema"
            )
        if instance in seen:
            raise DuplicateInstanceError(f"row {lineno}: duplicate instance {row[0].strip()!r}")
        seen.add(instance)
        out.append(TaxonomyCode(instance, code_class, label, external))
    return out


def apply_taxonomy(store: TripleStore, codes: list[TaxonomyCode]) -> int:
    """Assert each code as typed, labeled triples. Returns new-triple count."""
    added = 0
    for code in codes:
        added += store.insert(Triple(iri(code.instance), iri(RDF_TYPE), iri(code.code_class)))
        added += store.insert(Triple(iri(code.instance), iri(RDFS_LABEL), literal(code.label)))
    return added


# -- type queries with closure -------------------------------------------------


def is_instance_of(store: TripleStore, schema: Schema, node: Term, class_iri: Term) -> bool:
    """True iff the store types ``node`` as ``class_iri`` or any subclass."""
    if class_iri.value not in schema.classes:
        raise UnknownClassError(f"not a schema class: {class_iri.value}")
    rdf_type = iri(RDF_TYPE)
    for t in store.match(node, rdf_type, None):
        asserted = t.object
        if asserted.is_iri and schema.is_subclass(asserted.value, class_iri.value):
            return True
    return False


class TypeIndex:
    """Materialized rdf:type view of a store under the subclass closure.

    Every asserted type triple contributes its object plus, for schema
    classes, all superclasses. With closure disabled the index reflects
    asserted types only. Instance lists preserve store iteration order and
    are deduplicated, so evaluation stays deterministic.
    """

    def __init__(self, store: TripleStore, schema: Schema, closure: bool = True):
        self._instances: dict[Term, list[Term]] = {}
        self._types: dict[Term, list[Term]] = {}
        seen_pairs: set[tuple[Term, Term]] = set()
        rdf_type = iri(RDF_TYPE)
        for t in store.match(None, rdf_type, None):
            if closure and t.object.is_iri and t.object.value in schema.classes:
                closed = [iri(c) for c in sorted(schema.superclasses(t.object.value))]
            else:
                closed = [t.object]
            for c in closed:
                if (t.subject, c) in seen_pairs:
                    continue
                seen_pairs.add((t.subject, c))
                self._instances.setdefault(c, []).append(t.subject)
                self._types.setdefault(t.subject, []).append(c)

    def instances_of(self, class_term: Term) -> list[Term]:
        return self._instances.get(class_term, [])

    def types_of(self, node: Term) -> list[Term]:
        return self._types.get(node, [])

    def has_type(self, node: Term, class_term: Term) -> bool:
        return class_term in self._types.get(node, [])

    def pairs(self):
        for node, types in self._types.items():
            for c in types:
                yield node, c
