"""Bundled demonstration dataset.

A minimal Area0 service landscape: five services covering housing, addiction,
and counseling satisfiers; a fully profiled client (Client16) with housing and
addiction needs; a long-running counseling client (Client2); and four
demographic stakeholder groups whose service usage drives the coverage
dashboard. The canned queries return their published tables against exactly
this data, and the validator reports it clean.
"""

from __future__ import annotations

from .namespaces import RDF_TYPE, RDFS_LABEL, cids, cp, i72, ic, iso5087, oep, schema_org, time_ns
from .store import TripleStore, iri, literal

# (group stakeholder, demographic bundle code, label, client count,
#  service used, service-event code)
_DEMOGRAPHIC_GROUPS = (
    ("sh-Female-Housed-Youth-in_Area0", "INST-Female_Housed_Youth", "Female housed youth", 18,
     "S06-1-Counseling", "INST-Counseling", "NS-Counseling"),
    ("sh-Male-Youth-Addicted-in_Area0", "INST-Male_Youth_Addicted", "Male youth with addictions", 15,
     "S15-A0-Addiction-Services", "INST-Addiction_Services", "NS-Addiction_Services"),
    ("sh-Female-Adult-Addicted-in_Area0", "INST-Female_Adult_Addicted", "Female adults with addictions", 9,
     "S15-A0-Addiction-Services", "INST-Addiction_Services", "NS-Addiction_Services"),
    ("sh-Homeless-Male-Youth-in_Area0", "INST-Homeless_Male_Youth", "Homeless male youth", 6,
     "S14-Housing-For-Homeless", "INST-Housing", "NS-Housing"),
)

# code instance -> (code class, label)
_CODES = {
    "INST-Temporary_Shelter": ("Shelter", "Temporary shelter"),
    "INST-Shelter": ("Shelter", "Shelter"),
    "INST-Housing": ("Shelter", "Housing"),
    "INST-Addiction_Services": ("CL-Health", "Addiction services"),
    "INST-Counseling": ("CL-Health", "Counseling"),
    "INST-Female": ("CL-Gender", "Female"),
    "INST-Male": ("CL-Gender", "Male"),
    "INST-Youth": ("CL-Age", "Youth"),
    "INST-Adult": ("CL-Age", "Adult"),
    "INST-Homeless": ("CL-Homelessness", "Experiencing homelessness"),
    "INST-Housed": ("CL-Homelessness", "Housed"),
    "INST-Area0": ("CL-Area", "Resides in Area0"),
    "INST-Addicted": ("CL-HealthStatus", "Struggles with addictions"),
    "INST-Doctor_Yes": ("CL-Info_Privacy", "A medical doctor accesses the client's data"),
    "INST-Service_Used_Yes": ("CL-Info_Privacy", "The service accesses the client's data"),
    "INST-Female_Housed_Youth": ("CL-Demographic", "Female housed youth"),
    "INST-Male_Youth_Addicted": ("CL-Demographic", "Male youth with addictions"),
    "INST-Female_Adult_Addicted": ("CL-Demographic", "Female adults with addictions"),
    "INST-Homeless_Male_Youth": ("CL-Demographic", "Homeless male youth"),
}

# plain characteristic -> carried code
_CHARACTERISTICS = {
    "Char-Female": "INST-Female",
    "Char-Homeless": "INST-Homeless",
    "Char-Area0": "INST-Area0",
    "Char-Addicted": "INST-Addicted",
    "Char-Priv-Doctor": "INST-Doctor_Yes",
    "Char-Priv-Service-Used": "INST-Service_Used_Yes",
    "Char-Female-Housed-Youth": "INST-Female_Housed_Youth",
    "Char-Male-Youth-Addicted": "INST-Male_Youth_Addicted",
    "Char-Female-Adult-Addicted": "INST-Female_Adult_Addicted",
    "Char-Homeless-Male-Youth": "INST-Homeless_Male_Youth",
}

# service -> (label, code, satisfier, mode, focus, requirements)
_SERVICES = {
    "S17-Female-Shelter": (
        "Female shelter", "INST-Temporary_Shelter", "NS-Housing", "in-person",
        "Char-Female", ("Comp-Inst-Female-Homeless-Area0",),
    ),
    "S10-1-Shelter": (
        "Shelter 10-1", "INST-Shelter", "NS-Housing", "in-person",
        "Char-Female", ("Comp-Inst-Female-Homeless-Area0",),
    ),
    "S14-Housing-For-Homeless": (
        "Housing for the homeless", "INST-Housing", "NS-Housing", "in-person",
        "Char-Homeless", ("Char-Homeless",),
    ),
    "S15-A0-Addiction-Services": (
        "Area0 addiction services", "INST-Addiction_Services", "NS-Addiction_Services",
        "phone", "Char-Addicted", (),
    ),
    "S06-1-Counseling": (
        "Counseling 06-1", "INST-Counseling", "NS-Counseling", "online",
        "Char-Addicted", ("Char-Priv-Doctor", "Comp-Priv-Service-Used"),
    ),
}

_SATISFIERS = {
    "NS-Housing": "Housing",
    "NS-Addiction_Services": "Addiction treatment",
    "NS-Counseling": "Counseling",
}


def fixture() -> TripleStore:
    """Build the bundled dataset. Constant across runs and platforms."""
    store = TripleStore()
    rdf_type = iri(RDF_TYPE)
    label_p = iri(RDFS_LABEL)

    def node(local: str):
        return iri(cp(local))

    def typed(local: str, class_iri: str, label: str | None = None):
        n = node(local)
        store.add(n, rdf_type, iri(class_iri))
        if label:
            store.add(n, label_p, literal(label))
        return n

    # --- taxonomy codes ---------------------------------------------------
    for inst, (code_class, label) in _CODES.items():
        typed(inst, cp(code_class), label)

    # --- characteristics ----------------------------------------------------
    for char, code in _CHARACTERISTICS.items():
        c = typed(char, cids("Characteristic"))
        store.add(c, iri(cids("hasCode")), node(code))

    comp_eligibility = typed(
        "Comp-Inst-Female-Homeless-Area0",
        cids("CompositeCharacteristic"),
        "Female, experiencing homelessness, residing in Area0",
    )
    for part in ("Char-Female", "Char-Homeless", "Char-Area0"):
        store.add(comp_eligibility, iri(oep("hasPart")), node(part))

    comp_privacy = typed(
        "Comp-Priv-Service-Used", cids("CompositeCharacteristic"), "Service data access bundle"
    )
    store.add(comp_privacy, iri(oep("hasPart")), node("Char-Priv-Service-Used"))

    # --- locations and satisfiers ------------------------------------------
    area0 = typed("Area0_Location", iso5087("CityDivision"), "Area0")
    for ns, label in _SATISFIERS.items():
        typed(ns, cp("NeedSatisfier"), label)

    # --- services, programs, organization -----------------------------------
    for svc, (label, code, satisfier, mode, focus, requirements) in _SERVICES.items():
        s = typed(svc, cp("Service"), label)
        store.add(s, iri(cids("hasCode")), node(code))
        store.add(s, iri(cp("providesSatisfier")), node(satisfier))
        store.add(s, iri(cp("hasMode")), literal(mode))
        store.add(s, iri(cp("hasFocus")), node(focus))
        for req in requirements:
            store.add(s, iri(cp("hasRequirement")), node(req))

    org = typed("O-Compass-A0", cids("Organization"), "Area0 community services")
    housing_program = typed("P-A0-Housing", cids("Program"), "Area0 housing program")
    wellness_program = typed("P-A0-Wellness", cids("Program"), "Area0 wellness program")
    store.add(org, iri(cids("hasProgram")), housing_program)
    store.add(org, iri(cids("hasProgram")), wellness_program)
    for program, services in (
        (housing_program, ("S17-Female-Shelter", "S10-1-Shelter", "S14-Housing-For-Homeless")),
        (wellness_program, ("S15-A0-Addiction-Services", "S06-1-Counseling")),
    ):
        store.add(program, iri(ic("hasAddress")), area0)
        for svc in services:
            store.add(program, iri(cids("hasService")), node(svc))

    # --- Client16: homeless, struggling with addictions ----------------------
    client16 = typed("Client16", cp("Client"), "Client 16")
    sh16 = typed("sh-Client16", cids("BeneficialStakeholder"))
    store.add(sh16, iri(i72("located_in")), area0)
    store.add(client16, iri(cp("satisfiesStakeholder")), sh16)
    store.add(client16, iri(cp("hasGender")), node("INST-Female"))
    for char in ("Char-Homeless", "Char-Area0", "Char-Addicted", "Char-Priv-Doctor",
                 "Char-Priv-Service-Used"):
        store.add(client16, iri(cids("hasCharacteristic")), node(char))

    need_addiction = typed("Need-Client16-Addiction", cp("ClientNeed"),
                           "Reduce suffering from addiction")
    need_housing = typed("Need-Client16-Housing", cp("ClientNeed"),
                         "Improve housing situation")
    store.add(client16, iri(cp("hasNeed")), need_addiction)
    store.add(client16, iri(cp("hasNeed")), need_housing)
    store.add(need_addiction, iri(cp("hasAcquityScore")), literal("High"))
    store.add(need_housing, iri(cp("hasAcquityScore")), literal("High"))
    store.add(need_addiction, iri(cp("hasNeedSatisfier")), node("NS-Addiction_Services"))
    store.add(need_addiction, iri(cp("hasNeedSatisfier")), node("NS-Counseling"))
    store.add(need_housing, iri(cp("hasNeedSatisfier")), node("NS-Housing"))

    state = typed("State-Client16-Homeless", cp("ClientState"), "Couch surfing")
    problem = typed("Problem-Client16-Homelessness", cp("ClientProblem"),
                    "Experiencing homelessness")
    goal = typed("Goal-Client16-Housed", cp("ClientGoal"), "Stably housed")
    store.add(client16, iri(cp("hasClientState")), state)
    store.add(client16, iri(cp("hasProblem")), problem)
    store.add(client16, iri(cp("hasGoal")), goal)
    store.add(node("NS-Housing"), iri(cp("changes")), state)
    status_active = typed("Status-Active", cp("Status"), "Active")
    store.add(client16, iri(cp("hasStatus")), status_active)
    lang = typed("LA-Client16-English", cp("LanguageAbility"), "English, fluent")
    store.add(client16, iri(schema_org("knowsLanguage")), lang)

    # Client16 is mid-counseling: an open service event, no end date yet.
    ev16 = typed("Event-Client16-Counseling", cp("ServiceEvent"))
    store.add(ev16, iri(cp("forClient")), client16)
    store.add(ev16, iri(cp("forService")), node("S06-1-Counseling"))
    store.add(ev16, iri(cids("hasCode")), node("INST-Counseling"))
    store.add(ev16, iri(cp("hasStatus")), literal("inProgress"))

    # --- Client2: one counseling span of 301 days = 43 whole weeks -----------
    client2 = typed("Client2", cp("Client"), "Client 2")
    sh2 = typed("sh-Client2", cids("BeneficialStakeholder"))
    store.add(sh2, iri(i72("located_in")), area0)
    store.add(client2, iri(cp("satisfiesStakeholder")), sh2)
    need2 = typed("Need-Client2-Counseling", cp("ClientNeed"), "Sustain counseling support")
    store.add(client2, iri(cp("hasNeed")), need2)
    store.add(need2, iri(cp("hasNeedSatisfier")), node("NS-Counseling"))
    ev2 = typed("Event-Client2-Counseling", cp("ServiceEvent"))
    store.add(ev2, iri(cp("forClient")), client2)
    store.add(ev2, iri(cp("forService")), node("S06-1-Counseling"))
    store.add(ev2, iri(cids("hasCode")), node("INST-Counseling"))
    store.add(ev2, iri(cp("hasStatus")), literal("completed"))
    store.add(ev2, iri(cp("atOrganization")), org)
    store.add(ev2, iri(time_ns("hasBeginning")), literal("2021-01-01T00:00:00.000"))
    store.add(ev2, iri(time_ns("hasEnd")), literal("2021-10-29T00:00:00.000"))

    # --- demographic groups and their service usage ---------------------------
    counter = 101
    for sh_name, bundle_code, label, size, service, event_code, satisfier in _DEMOGRAPHIC_GROUPS:
        sh = typed(sh_name, cids("BeneficialStakeholder"), label)
        store.add(sh, iri(i72("located_in")), area0)
        bundle_char = "Char-" + sh_name[3:].rsplit("-in_", 1)[0]
        store.add(sh, iri(cids("hasCharacteristic")), node(bundle_char))
        for _ in range(size):
            client = typed(f"Client{counter}", cp("Client"))
            store.add(client, iri(cp("satisfiesStakeholder")), sh)
            need = typed(f"Need-Client{counter}", cp("ClientNeed"))
            store.add(client, iri(cp("hasNeed")), need)
            store.add(need, iri(cp("hasNeedSatisfier")), node(satisfier))
            ev = typed(f"Event-Client{counter}", cp("ServiceEvent"))
            store.add(ev, iri(cp("forClient")), client)
            store.add(ev, iri(cp("forService")), node(service))
            store.add(ev, iri(cids("hasCode")), node(event_code))
            store.add(ev, iri(cp("hasStatus")), literal("completed"))
            counter += 1

    return store


def fixture_document() -> str:
    return fixture().serialize()
