"""Typed coverage operations: the decision-support layer behind the CLI and API.

Each operation reads a store snapshot through the same subclass-closure lens
the query engine uses, so a typed operation and its canned-query counterpart
agree row for row. Requirement satisfaction is evidence-based: a client meets
a coded requirement exactly when a matching code instance is asserted for the
client or their stakeholder; absence means barrier, not unknown.
"""

from __future__ import annotations

from dataclasses import dataclass

from .namespaces import cids, cp, i72, ic, oep, time_ns
from .ontology import OPEN_EVENT_STATUSES, Schema, TypeIndex
from .query.builtins import UnparseableDateError, parse_date, weeks_between
from .store import Term, TripleStore, iri


class UnknownEntityError(LookupError):
    """A competency operation was pointed at a node of the wrong type."""

    def __init__(self, code: str, term: Term):
        super().__init__(f"{code}: {term.n3()}")
        self.code = code
        self.term = term


@dataclass(frozen=True)
class ServiceMatch:
    service: Term
    codes: frozenset = frozenset()
    matched_satisfiers: frozenset = frozenset()


@dataclass(frozen=True)
class Barrier:
    client: Term
    service: Term
    unmet_characteristic: Term
    removal_service_type: Term | None = None


@dataclass(frozen=True)
class Gap:
    location: Term
    satisfier: Term
    demanding_clients: int


@dataclass(frozen=True)
class Duplicate:
    location: Term
    service_code: Term
    services: frozenset


@dataclass(frozen=True)
class CoverageReport:
    gaps: list
    duplicates: list


@dataclass(frozen=True)
class DemographicRow:
    location: Term
    stakeholder: Term
    service_code: Term | None
    count: int


@dataclass(frozen=True)
class DurationReport:
    weeks: int
    spans: tuple = ()  # (event, weeks) pairs that contributed
    skipped_events: tuple = ()


_P = {
    "type_client": iri(cp("Client")),
    "type_service": iri(cp("Service")),
    "type_need": iri(cp("ClientNeed")),
    "type_satisfier": iri(cp("NeedSatisfier")),
    "type_stakeholder": iri(cids("Stakeholder")),
    "type_composite": iri(cids("CompositeCharacteristic")),
    "type_service_event": iri(cp("ServiceEvent")),
    "type_failure_event": iri(cp("ServiceFailureEvent")),
    "has_need": iri(cp("hasNeed")),
    "has_need_satisfier": iri(cp("hasNeedSatisfier")),
    "provides_satisfier": iri(cp("providesSatisfier")),
    "provides_service": iri(cp("providesService")),
    "has_code": iri(cids("hasCode")),
    "has_requirement": iri(cp("hasRequirement")),
    "has_focus": iri(cp("hasFocus")),
    "has_characteristic": iri(cids("hasCharacteristic")),
    "failure_characteristic": iri(cp("hasCharacteristic")),
    "has_failure_type": iri(cp("hasFailureType")),
    "has_part": iri(oep("hasPart")),
    "satisfies_stakeholder": iri(cp("satisfiesStakeholder")),
    "located_in": iri(i72("located_in")),
    "has_address": iri(ic("hasAddress")),
    "program_service": iri(cids("hasService")),
    "for_client": iri(cp("forClient")),
    "for_service": iri(cp("forService")),
    "has_status": iri(cp("hasStatus")),
    "has_beginning": iri(time_ns("hasBeginning")),
    "has_end": iri(time_ns("hasEnd")),
}


def _sorted_terms(terms) -> list[Term]:
    return sorted(terms, key=lambda t: t.n3({}))


def _dedup(terms) -> list[Term]:
    seen = set()
    out = []
    for t in terms:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


class _Ctx:
    """Shared per-call machinery: one TypeIndex over one snapshot."""

    def __init__(self, store: TripleStore, schema: Schema):
        self.store = store
        self.schema = schema
        self.types = TypeIndex(store, schema, closure=True)

    def require(self, node: Term, class_term: Term, code: str):
        if not self.types.has_type(node, class_term):
            raise UnknownEntityError(code, node)

    def service_codes(self, service: Term) -> list[Term]:
        codes = self.store.objects(service, _P["has_code"])
        codes += self.store.objects(service, _P["provides_service"])
        return _dedup(c for c in codes if c.is_iri)

    def service_match(self, service: Term, satisfiers=()) -> ServiceMatch:
        return ServiceMatch(
            service,
            frozenset(self.service_codes(service)),
            frozenset(satisfiers),
        )

    def client_needs(self, client: Term) -> list[Term]:
        return [
            n
            for n in self.store.objects(client, _P["has_need"])
            if self.types.has_type(n, _P["type_need"])
        ]

    def need_satisfiers(self, need: Term) -> list[Term]:
        return [
            s
            for s in self.store.objects(need, _P["has_need_satisfier"])
            if self.types.has_type(s, _P["type_satisfier"])
        ]

    def characteristic_codes(self, characteristic: Term, include_parts: bool = True) -> list[Term]:
        codes = list(self.store.objects(characteristic, _P["has_code"]))
        if include_parts and self.types.has_type(characteristic, _P["type_composite"]):
            for part in self.store.objects(characteristic, _P["has_part"]):
                codes.extend(self.store.objects(part, _P["has_code"]))
        return _dedup(codes)

    def evidence_codes(self, client: Term) -> set[Term]:
        """Code instances asserted for a client: own characteristics, the
        satisfied stakeholders' characteristics, and coded property values."""
        evidence: set[Term] = set()
        holders = [client] + self.store.objects(client, _P["satisfies_stakeholder"])
        for holder in holders:
            for ch in self.store.objects(holder, _P["has_characteristic"]):
                evidence.update(self.characteristic_codes(ch))
        for decl in self.schema.properties:
            if decl.coded and cp("Client") in decl.domain:
                for value in self.store.objects(client, iri(decl.iri)):
                    if value.is_iri:
                        evidence.add(value)
        return evidence

    def requirement_satisfied(self, requirement: Term, evidence: set[Term]) -> bool:
        direct = self.store.objects(requirement, _P["has_code"])
        if any(c in evidence for c in direct):
            return True
        if self.types.has_type(requirement, _P["type_composite"]):
            parts = self.store.objects(requirement, _P["has_part"])
            if parts and all(
                any(c in evidence for c in self.store.objects(part, _P["has_code"]))
                for part in parts
            ):
                return True
        return False

    def removal_hint(self, requirement: Term) -> Term | None:
        """A failure-type hint from any recorded failure event that cites the
        same characteristic node or a characteristic sharing a code with it."""
        req_codes = set(self.characteristic_codes(requirement))
        hints = []
        for ev in self.types.instances_of(_P["type_failure_event"]):
            for cited in self.store.objects(ev, _P["failure_characteristic"]):
                if cited == requirement or (
                    req_codes and set(self.characteristic_codes(cited)) & req_codes
                ):
                    hints.extend(self.store.objects(ev, _P["has_failure_type"]))
        return _sorted_terms(hints)[0] if hints else None

    def service_locations(self, service: Term) -> list[Term]:
        locations = []
        for program in self.store.subjects(_P["program_service"], service):
            locations.extend(self.store.objects(program, _P["has_address"]))
        return _dedup(locations)

    def client_locations(self, client: Term) -> list[Term]:
        locations = []
        for sh in self.store.objects(client, _P["satisfies_stakeholder"]):
            locations.extend(self.store.objects(sh, _P["located_in"]))
        return _dedup(locations)


def services_matching_needs(store: TripleStore, schema: Schema, client: Term) -> list[ServiceMatch]:
    """Services providing a satisfier for at least one of the client's needs."""
    ctx = _Ctx(store, schema)
    ctx.require(client, _P["type_client"], "unknown-client")
    wanted = _dedup(s for n in ctx.client_needs(client) for s in ctx.need_satisfiers(n))
    by_service: dict[Term, list[Term]] = {}
    for satisfier in wanted:
        for service in store.subjects(_P["provides_satisfier"], satisfier):
            if ctx.types.has_type(service, _P["type_service"]):
                by_service.setdefault(service, []).append(satisfier)
    return [
        ctx.service_match(service, by_service[service])
        for service in _sorted_terms(by_service)
    ]


def eligibility_and_barriers(store: TripleStore, schema: Schema, client: Term):
    """Partition the need-matching services into eligible and barrier-blocked."""
    ctx = _Ctx(store, schema)
    ctx.require(client, _P["type_client"], "unknown-client")
    matches = services_matching_needs(store, schema, client)
    evidence = ctx.evidence_codes(client)
    eligible: list[ServiceMatch] = []
    barriers: list[Barrier] = []
    for match in matches:
        unmet = [
            req
            for req in ctx.store.objects(match.service, _P["has_requirement"])
            if not ctx.requirement_satisfied(req, evidence)
        ]
        if not unmet:
            eligible.append(match)
        else:
            for req in _sorted_terms(unmet):
                barriers.append(Barrier(client, match.service, req, ctx.removal_hint(req)))
    return eligible, barriers


def alternative_services(
    store: TripleStore,
    schema: Schema,
    satisfier: Term,
    requirement_profile: Term,
    exclude: set[Term] = frozenset(),
) -> list[ServiceMatch]:
    """Other services that provide a satisfier under the same requirement profile."""
    ctx = _Ctx(store, schema)
    ctx.require(satisfier, _P["type_satisfier"], "unknown-satisfier")
    out = []
    for service in store.subjects(_P["provides_satisfier"], satisfier):
        if service in exclude or not ctx.types.has_type(service, _P["type_service"]):
            continue
        if requirement_profile in store.objects(service, _P["has_requirement"]):
            out.append(ctx.service_match(service, [satisfier]))
    return sorted(out, key=lambda m: m.service.n3({}))


def privacy_requirements(store: TripleStore, schema: Schema, service: Term) -> list[Term]:
    """Data-privacy requirement codes of a service, direct or via composite parts."""
    ctx = _Ctx(store, schema)
    ctx.require(service, _P["type_service"], "unknown-service")
    privacy_class = iri(cp("CL-Info_Privacy"))
    found = []
    for req in store.objects(service, _P["has_requirement"]):
        for code in store.objects(req, _P["has_code"]):
            if ctx.types.has_type(code, privacy_class):
                found.append(code)
        if ctx.types.has_type(req, _P["type_composite"]):
            for part in store.objects(req, _P["has_part"]):
                for code in store.objects(part, _P["has_code"]):
                    if ctx.types.has_type(code, privacy_class):
                        found.append(code)
    return _sorted_terms(_dedup(found))


def service_duration_detail(
    store: TripleStore, schema: Schema, client: Term, service_code: Term
) -> DurationReport:
    """Week spans of the client's service events carrying the given code.

    Events without a parseable begin and end are skipped and reported.
    """
    ctx = _Ctx(store, schema)
    ctx.require(client, _P["type_client"], "unknown-client")
    total = 0
    skipped = []
    spans = []
    for ev in _sorted_terms(store.subjects(_P["for_client"], client)):
        if not ctx.types.has_type(ev, _P["type_service_event"]):
            continue
        if service_code not in store.objects(ev, _P["has_code"]):
            continue
        begin = store.value(ev, _P["has_beginning"])
        end = store.value(ev, _P["has_end"])
        if begin is None or end is None:
            skipped.append(ev)
            continue
        try:
            weeks = weeks_between(parse_date(end.value), parse_date(begin.value))
        except UnparseableDateError:
            skipped.append(ev)
            continue
        spans.append((ev, weeks))
        total += weeks
    return DurationReport(total, tuple(spans), tuple(skipped))


def service_duration_weeks(
    store: TripleStore, schema: Schema, client: Term, service_code: Term
) -> int:
    """Total weeks the client spent in services carrying the given code."""
    return service_duration_detail(store, schema, client, service_code).weeks


def priority_demographics(store: TripleStore, schema: Schema) -> list[DemographicRow]:
    """Service usage counted by satisfied stakeholder and location, largest first.

    Counting follows the canned demographics query: each service event
    contributes one row per demographic code binding of the stakeholder, so a
    stakeholder described by a single coded characteristic counts clients
    exactly.
    """
    ctx = _Ctx(store, schema)
    counts: dict[tuple[Term, Term], int] = {}
    group_codes: dict[tuple[Term, Term], list[Term]] = {}
    for ev in ctx.types.instances_of(_P["type_service_event"]):
        ev_codes = [c for c in store.objects(ev, _P["has_code"]) if c.is_iri]
        for client in store.objects(ev, _P["for_client"]):
            for sh in store.objects(client, _P["satisfies_stakeholder"]):
                if not ctx.types.has_type(sh, _P["type_stakeholder"]):
                    continue
                demo_rows = 0
                for ch in store.objects(sh, _P["has_characteristic"]):
                    demo_rows += len(store.objects(ch, _P["has_code"]))
                    if ctx.types.has_type(ch, _P["type_composite"]):
                        for part in store.objects(ch, _P["has_part"]):
                            demo_rows += len(store.objects(part, _P["has_code"]))
                if demo_rows == 0:
                    continue
                for loc in store.objects(sh, _P["located_in"]):
                    key = (sh, loc)
                    counts[key] = counts.get(key, 0) + demo_rows
                    group_codes.setdefault(key, []).extend(ev_codes)
    rows: list[DemographicRow] = []
    for (sh, loc), count in counts.items():
        codes = _dedup(group_codes.get((sh, loc), []))
        if codes:
            for code in _sorted_terms(codes):
                rows.append(DemographicRow(loc, sh, code, count))
        else:
            rows.append(DemographicRow(loc, sh, None, count))
    rows.sort(
        key=lambda r: (
            -r.count,
            r.location.n3({}),
            r.stakeholder.n3({}),
            r.service_code.n3({}) if r.service_code else "",
        )
    )
    return rows


def list_services(
    store: TripleStore,
    schema: Schema,
    code_class: Term | None = None,
    location: Term | None = None,
    group_by_focus: bool = False,
):
    """Services filtered by taxonomy code class and program location.

    With ``group_by_focus`` the result is an ordered mapping from focus code
    (None for services without a focus) to matches.
    """
    ctx = _Ctx(store, schema)
    if code_class is not None and code_class.value not in schema.classes:
        raise UnknownEntityError("unknown-code-class", code_class)
    matches = []
    for service in _sorted_terms(ctx.types.instances_of(_P["type_service"])):
        codes = ctx.service_codes(service)
        if code_class is not None and not any(
            ctx.types.has_type(c, code_class) for c in codes
        ):
            continue
        if location is not None and location not in ctx.service_locations(service):
            continue
        matches.append(ctx.service_match(service, store.objects(service, _P["provides_satisfier"])))
    if not group_by_focus:
        return matches
    grouped: dict[Term | None, list[ServiceMatch]] = {}
    for match in matches:
        focus_codes = []
        for focus in store.objects(match.service, _P["has_focus"]):
            focus_codes.extend(ctx.characteristic_codes(focus))
        for key in _dedup(focus_codes) or [None]:
            grouped.setdefault(key, []).append(match)
    return dict(
        sorted(grouped.items(), key=lambda kv: kv[0].n3({}) if kv[0] else "")
    )


def barrier_aggregate(store: TripleStore, schema: Schema, service_code: Term):
    """Barrier characteristics blocking a service category, most frequent first."""
    ctx = _Ctx(store, schema)
    counts: dict[Term, int] = {}
    for ev in ctx.types.instances_of(_P["type_failure_event"]):
        hit = False
        for service in store.objects(ev, _P["for_service"]):
            codes = ctx.service_codes(service)
            if service_code in codes or any(
                ctx.types.has_type(c, service_code) for c in codes
            ):
                hit = True
                break
        if not hit:
            continue
        for ch in store.objects(ev, _P["failure_characteristic"]):
            counts[ch] = counts.get(ch, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0].n3({})))


def gaps_and_duplicates(store: TripleStore, schema: Schema) -> CoverageReport:
    """Coverage gaps (demanded satisfier unprovided at a location) and
    duplicates (same code and focus offered more than once at a location)."""
    ctx = _Ctx(store, schema)

    demand: dict[tuple[Term, Term], set[Term]] = {}
    for client in ctx.types.instances_of(_P["type_client"]):
        locations = ctx.client_locations(client)
        if not locations:
            continue
        for need in ctx.client_needs(client):
            for satisfier in ctx.need_satisfiers(need):
                for loc in locations:
                    demand.setdefault((loc, satisfier), set()).add(client)

    provided: set[tuple[Term, Term]] = set()
    by_group: dict[tuple[Term, Term, frozenset], set[Term]] = {}
    for service in ctx.types.instances_of(_P["type_service"]):
        locations = ctx.service_locations(service)
        satisfiers = store.objects(service, _P["provides_satisfier"])
        focus = frozenset(store.objects(service, _P["has_focus"]))
        for loc in locations:
            for satisfier in satisfiers:
                provided.add((loc, satisfier))
            for code in ctx.service_codes(service):
                by_group.setdefault((loc, code, focus), set()).add(service)

    gaps = [
        Gap(loc, satisfier, len(clients))
        for (loc, satisfier), clients in demand.items()
        if (loc, satisfier) not in provided
    ]
    gaps.sort(key=lambda g: (g.location.n3({}), g.satisfier.n3({})))

    duplicates = [
        Duplicate(loc, code, frozenset(services))
        for (loc, code, _focus), services in by_group.items()
        if len(services) >= 2
    ]
    duplicates.sort(key=lambda d: (d.location.n3({}), d.service_code.n3({})))
    return CoverageReport(gaps, duplicates)


def referral_options(store: TripleStore, schema: Schema, client: Term) -> list[ServiceMatch]:
    """Eligible services the client is not already using (open service events)."""
    ctx = _Ctx(store, schema)
    ctx.require(client, _P["type_client"], "unknown-client")
    eligible, _ = eligibility_and_barriers(store, schema, client)
    in_use: set[Term] = set()
    for ev in store.subjects(_P["for_client"], client):
        if not ctx.types.has_type(ev, _P["type_service_event"]):
            continue
        status = store.value(ev, _P["has_status"])
        if status is not None and status.value in OPEN_EVENT_STATUSES:
            in_use.update(store.objects(ev, _P["for_service"]))
    return [m for m in eligible if m.service not in in_use]
