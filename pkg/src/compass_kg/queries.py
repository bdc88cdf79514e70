"""Canned coverage queries, one per shipped competency question.

These texts are the raw-query counterparts of the typed operations in
:mod:`compass_kg.competency`; the test suite holds the two routes to identical
results. The builder functions swap the bound constants for other nodes.
"""

from .namespaces import DEFAULT_PREFIXES, shrink_iri
from .store import Term

CLIENT_NEED_MATCHES = """\
SELECT DISTINCT ?service ?code WHERE {
    BIND(cp:Client16 AS ?client).
    ?client  cp:hasNeed  ?need.
    ?need  rdf:type  cp:ClientNeed.
    ?needSatisfier  rdf:type  cp:NeedSatisfier.
    ?need  cp:hasNeedSatisfier  ?needSatisfier.
    ?service  rdf:type  cp:Service ; cids:hasCode ?code ;
        cp:providesSatisfier ?needSatisfier.
}
"""

HOUSING_ALTERNATIVES = """\
SELECT DISTINCT ?service ?code WHERE {
    BIND(cp:NS-Housing AS ?needSatisfier).
    BIND(cp:Comp-Inst-Female-Homeless-Area0 AS ?compChar)
    ?service  rdf:type  cp:Service ;
        cids:hasCode ?code ; cp:hasRequirement ?compChar ;
        cp:providesSatisfier  ?needSatisfier.
}
"""

PRIVACY_REQUIREMENTS = """\
SELECT DISTINCT ?service ?dataReq WHERE {
    BIND(cp:S06-1-Counseling AS ?service).
    ?dataReq rdf:type cp:CL-Info_Privacy.
    {?service cp:hasRequirement [cids:hasCode ?dataReq].
    } UNION {
        ?service cp:hasRequirement [
            rdf:type cids:CompositeCharacteristic   ;
            oep:hasPart [cids:hasCode ?dataReq]]. }}
"""

COUNSELING_DURATION = """\
SELECT DISTINCT ?client ?weeks WHERE {
    BIND(cp:Client2 AS ?client).
    ?serviceEvent rdf:type cp:ServiceEvent ;
        cp:forClient ?client ;
        time:hasBeginning ?beg; time:hasEnd ?end;
        cids:hasCode cp:INST-Counseling.
    BIND((ofn:weeksBetween(
        spif:parseDate(?end, "yyyy-MM-dd'T'HH:mm:ss.SSS"),
        spif:parseDate(?beg, "yyyy-MM-dd'T'HH:mm:ss.SSS")))
        AS ?weeks). }
"""

PRIORITY_DEMOGRAPHICS = """\
SELECT ?loc ?sh (COUNT(?sh) AS ?count) WHERE {
    ?serviceEvent rdf:type cp:ServiceEvent ;
                  cp:forClient [cp:satisfiesStakeholder ?sh].
    ?sh a cids:Stakeholder ;
                 i72:located_in ?loc.
    { ?sh cids:hasCharacteristic [cids:hasCode ?demo].
    } UNION {
        ?sh cids:hasCharacteristic
            [ a cids:CompositeCharacteristic;
                oep:hasPart [cids:hasCode ?demo]]
}} GROUP BY ?sh ?loc
ORDER BY DESC(?count)
"""

ALL_QUERIES = {
    "client-need-matches": CLIENT_NEED_MATCHES,
    "housing-alternatives": HOUSING_ALTERNATIVES,
    "privacy-requirements": PRIVACY_REQUIREMENTS,
    "counseling-duration": COUNSELING_DURATION,
    "priority-demographics": PRIORITY_DEMOGRAPHICS,
}


def _name(term: Term) -> str:
    short = shrink_iri(term.value, DEFAULT_PREFIXES)
    return short if not short.startswith("<") else short


def need_matches_for(client: Term) -> str:
    return CLIENT_NEED_MATCHES.replace("cp:Client16", _name(client))


def alternatives_for(satisfier: Term, requirement_profile: Term) -> str:
    return HOUSING_ALTERNATIVES.replace("cp:NS-Housing", _name(satisfier)).replace(
        "cp:Comp-Inst-Female-Homeless-Area0", _name(requirement_profile)
    )


def privacy_for(service: Term) -> str:
    return PRIVACY_REQUIREMENTS.replace("cp:S06-1-Counseling", _name(service))


def duration_for(client: Term, service_code: Term) -> str:
    return COUNSELING_DURATION.replace("cp:Client2", _name(client)).replace(
        "cp:INST-Counseling", _name(service_code)
    )
