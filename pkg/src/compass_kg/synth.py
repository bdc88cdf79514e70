"""Seeded synthetic dataset generator.

Randomness comes from SplitMix64 (Steele, Lea, Flood 2014), implemented inline
so identical seeds produce identical graphs on any platform or runtime. Every
generated store validates clean by construction: coded values come from the
right code classes, enumerations from their closed sets, and event spans are
ordered.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta

from .namespaces import RDF_TYPE, RDFS_LABEL, cids, cp, i72, ic, iso5087, time_ns
from .query.builtins import format_date
from .store import TripleStore, iri, literal

_MASK = (1 << 64) - 1


class SplitMix64:
    """64-bit SplitMix64 sequence; tiny, fast, and exactly reproducible."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, low: int, high: int) -> int:
        """Uniform in [low, high]."""
        if high < low:
            raise ValueError("empty range")
        return low + self.next_u64() % (high - low + 1)

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.next_u64() % len(seq)]

    def weighted_choice(self, items, weights):
        total = sum(weights)
        pick = self.next_u64() % total
        acc = 0
        for item, w in zip(items, weights):
            acc += w
            if pick < acc:
                return item
        return items[-1]

    def chance(self, percent: int) -> bool:
        return self.next_u64() % 100 < percent


_DEFAULT_CODE_MIX = {
    cp("CL-Gender"): 2,
    cp("CL-Age"): 2,
    cp("CL-Homelessness"): 1,
    cp("CL-HealthStatus"): 1,
}


@dataclass(frozen=True)
class GenConfig:
    seed: int = 1
    client_count: int = 20
    service_count: int = 6
    event_count: int = 30
    location_names: tuple = ("Area0", "Area1")
    code_mix: dict = field(default_factory=lambda: dict(_DEFAULT_CODE_MIX))

    def __post_init__(self):
        for name, value in (
            ("client_count", self.client_count),
            ("service_count", self.service_count),
            ("event_count", self.event_count),
        ):
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")
        if not self.location_names:
            raise ValueError("at least one location name is required")
        if not self.code_mix or any(w <= 0 for w in self.code_mix.values()):
            raise ValueError("code_mix weights must be positive")


def generate(config: GenConfig) -> TripleStore:
    """Generate a deterministic, schema-clean store for the given config."""
    rng = SplitMix64(config.seed)
    store = TripleStore()
    rdf_type = iri(RDF_TYPE)
    label_p = iri(RDFS_LABEL)

    def typed(local, class_iri, label=None):
        n = iri(cp(local))
        store.add(n, rdf_type, iri(class_iri))
        if label:
            store.add(n, label_p, literal(label))
        return n

    # Locations
    locations = [
        typed(f"Loc-{name}", iso5087("CityDivision"), name) for name in config.location_names
    ]

    # A small taxonomy: a few instances per mixed-in code class.
    mix_classes = sorted(config.code_mix)
    mix_weights = [config.code_mix[c] for c in mix_classes]
    codes_by_class: dict[str, list] = {}
    for class_iri in mix_classes:
        short = class_iri.rsplit("#", 1)[-1].replace("CL-", "")
        for k in range(rng.randint(2, 4)):
            code = typed(f"GenCode-{short}-{k}", class_iri, f"{short} {k}")
            codes_by_class.setdefault(class_iri, []).append(code)
    service_codes = [
        typed(f"GenCode-Service-{k}", cp(rng.choice(("Shelter", "CL-Health", "CL-Personal", "CL-Food"))),
              f"Service category {k}")
        for k in range(max(2, config.service_count // 2))
    ]
    satisfier_types = [typed("GenCode-Satisfier-Full", cp("CL-SatisfierType"), "Full satisfier")]

    # One coded characteristic per demographic stakeholder group.
    group_count = max(2, min(len(locations) * 2, config.client_count))
    stakeholders = []
    for g in range(group_count):
        class_iri = rng.weighted_choice(mix_classes, mix_weights)
        code = rng.choice(codes_by_class[class_iri])
        char = typed(f"GenChar-{g}", cids("Characteristic"))
        store.add(char, iri(cids("hasCode")), code)
        sh = typed(f"GenStakeholder-{g}", cids("BeneficialStakeholder"), f"Group {g}")
        store.add(sh, iri(cids("hasCharacteristic")), char)
        store.add(sh, iri(i72("located_in")), rng.choice(locations))
        stakeholders.append(sh)

    # Satisfiers
    satisfiers = [
        typed(f"GenSatisfier-{k}", cp("NeedSatisfier"), f"Satisfier {k}")
        for k in range(max(3, config.service_count))
    ]
    for s in satisfiers:
        if rng.chance(50):
            store.add(s, iri(cp("hasType")), rng.choice(satisfier_types))

    # Services under one organization, one program per location.
    org = typed("GenOrg-0", cids("Organization"), "Generated org")
    programs = []
    for idx, loc in enumerate(locations):
        program = typed(f"GenProgram-{idx}", cids("Program"), f"Program {idx}")
        store.add(org, iri(cids("hasProgram")), program)
        store.add(program, iri(ic("hasAddress")), loc)
        programs.append(program)

    requirement_pool = []
    for k in range(3):
        class_iri = rng.weighted_choice(mix_classes, mix_weights)
        code = rng.choice(codes_by_class[class_iri])
        char = typed(f"GenReq-{k}", cids("Characteristic"))
        store.add(char, iri(cids("hasCode")), code)
        requirement_pool.append(char)

    services = []
    for k in range(config.service_count):
        svc = typed(f"GenService-{k}", cp("Service"), f"Service {k}")
        store.add(svc, iri(cids("hasCode")), rng.choice(service_codes))
        store.add(svc, iri(cp("providesSatisfier")), rng.choice(satisfiers))
        if rng.chance(30):
            store.add(svc, iri(cp("providesSatisfier")), rng.choice(satisfiers))
        store.add(svc, iri(cp("hasMode")), literal(rng.choice(("in-person", "phone", "online", "offline"))))
        if rng.chance(50):
            store.add(svc, iri(cp("hasRequirement")), rng.choice(requirement_pool))
        store.add(rng.choice(programs), iri(cids("hasService")), svc)
        services.append(svc)

    # Clients with needs; every need keeps at least one satisfier.
    clients = []
    gender_codes = codes_by_class.get(cp("CL-Gender"), [])
    for k in range(config.client_count):
        client = typed(f"GenClient-{k}", cp("Client"), f"Client {k}")
        store.add(client, iri(cp("satisfiesStakeholder")), rng.choice(stakeholders))
        if gender_codes and rng.chance(70):
            store.add(client, iri(cp("hasGender")), rng.choice(gender_codes))
        for n in range(rng.randint(1, 2)):
            need = typed(f"GenNeed-{k}-{n}", cp("ClientNeed"))
            store.add(client, iri(cp("hasNeed")), need)
            store.add(need, iri(cp("hasNeedSatisfier")), rng.choice(satisfiers))
            store.add(need, iri(cp("hasAcquityScore")), literal(rng.choice(("Low", "Medium", "High"))))
        clients.append(client)

    # Service events with ordered, unique spans.
    base = datetime(2021, 1, 1)
    for k in range(config.event_count):
        ev = typed(f"GenEvent-{k}", cp("ServiceEvent"))
        svc = rng.choice(services)
        store.add(ev, iri(cp("forClient")), rng.choice(clients))
        store.add(ev, iri(cp("forService")), svc)
        for code in store.objects(svc, iri(cids("hasCode"))):
            store.add(ev, iri(cids("hasCode")), code)
        store.add(ev, iri(cp("hasStatus")), literal(rng.choice(("scheduled", "inProgress", "completed"))))
        begin = base + timedelta(days=rng.randint(0, 200), hours=k)
        end = begin + timedelta(days=rng.randint(0, 120))
        store.add(ev, iri(time_ns("hasBeginning")), literal(format_date(begin)))
        store.add(ev, iri(time_ns("hasEnd")), literal(format_date(end)))

    # A few recorded failure events tie barriers to removal hints.
    for k in range(min(3, config.event_count)):
        if not rng.chance(60):
            continue
        ev = typed(f"GenFailure-{k}", cp("ServiceFailureEvent"))
        store.add(ev, iri(cp("forClient")), rng.choice(clients))
        store.add(ev, iri(cp("forService")), rng.choice(services))
        store.add(ev, iri(cp("hasCharacteristic")), rng.choice(requirement_pool))
        store.add(ev, iri(cp("hasFailureType")), rng.choice(service_codes))

    return store
