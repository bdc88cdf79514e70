import pytest

from compass_kg.fixture import fixture
from compass_kg.namespaces import RDF_TYPE, cids, cp, time_ns
from compass_kg.store import iri, literal
from compass_kg.validator import (
    CODED_RANGE,
    DATATYPE,
    DOMAIN_MISMATCH,
    ENUMERATION_RANGE,
    EVENT_CHAIN_BROKEN,
    EVENT_ORDER,
    MISSING_REQUIRED_LINK,
    VIOLATION_KINDS,
    explain,
    validate,
)

RDF_TYPE_T = iri(RDF_TYPE)


def kinds(violations):
    return [v.kind for v in violations]


def test_fixture_is_clean(fixture_store, schema):
    assert validate(fixture_store, schema) == []


def test_validate_is_pure(fixture_store, schema):
    assert validate(fixture_store, schema) == validate(fixture_store, schema)


# Each injector adds exactly one fault of its kind into a clean store.
def _inject_coded_range(store):
    store.load_text("cp:INST-Toddler a cp:CL-Age .")
    store.load_text("cp:Client16 cp:hasGender cp:INST-Toddler .")


def _inject_enumeration_range(store):
    store.load_text('cp:S99 a cp:Service . cp:S99 cp:hasMode "telepathy" .')


def _inject_datatype(store):
    store.load_text('cp:Comm1 a cp:Community . cp:Comm1 cp:hasNumber "-5" .')


def _inject_missing_required_link(store):
    store.load_text(
        "cp:F99 a cp:ServiceFailureEvent . "
        "cp:F99 cp:forClient cp:Client16 . "
        "cp:F99 cp:forService cp:S17-Female-Shelter ."
    )


def _inject_event_chain_broken(store):
    store.load_text(
        "cp:E-a a cp:ServiceEvent . cp:E-b a cp:ServiceEvent . cp:E-c a cp:ServiceEvent . "
        "cp:E-a cp:nextEvent cp:E-b . cp:E-b cp:previousEvent cp:E-c ."
    )


def _inject_event_order(store):
    store.load_text(
        "cp:E-rev a cp:ServiceEvent . "
        'cp:E-rev time:hasBeginning "2021-02-01T00:00:00.000" . '
        'cp:E-rev time:hasEnd "2021-01-01T00:00:00.000" .'
    )


def _inject_domain_mismatch(store):
    store.load_text("cp:S17-Female-Shelter cp:hasNeed cp:Need-Client16-Housing .")


_INJECTORS = {
    CODED_RANGE: _inject_coded_range,
    ENUMERATION_RANGE: _inject_enumeration_range,
    DATATYPE: _inject_datatype,
    MISSING_REQUIRED_LINK: _inject_missing_required_link,
    EVENT_CHAIN_BROKEN: _inject_event_chain_broken,
    EVENT_ORDER: _inject_event_order,
    DOMAIN_MISMATCH: _inject_domain_mismatch,
}


@pytest.mark.parametrize("kind", VIOLATION_KINDS)
def test_fault_injection_yields_exactly_one(kind, schema):
    store = fixture()
    _INJECTORS[kind](store)
    violations = validate(store, schema)
    assert kinds(violations) == [kind], [explain(v) for v in violations]


def test_event_chain_cycle_detected(schema):
    store = fixture()
    store.load_text(
        "cp:E-x a cp:ServiceEvent . cp:E-y a cp:ServiceEvent . "
        "cp:E-x cp:nextEvent cp:E-y . cp:E-y cp:nextEvent cp:E-x . "
        "cp:E-y cp:previousEvent cp:E-x . cp:E-x cp:previousEvent cp:E-y ."
    )
    violations = validate(store, schema)
    assert kinds(violations) == [EVENT_CHAIN_BROKEN]
    # the smallest IRI of the cycle is the focus
    assert violations[0].focus == iri(cp("E-x"))
    assert "cp:E-x" in violations[0].message and "cp:E-y" in violations[0].message


def test_well_formed_chain_is_clean(schema):
    store = fixture()
    store.load_text(
        "cp:E-1 a cp:ServiceEvent . cp:E-2 a cp:ServiceEvent . "
        "cp:E-1 cp:nextEvent cp:E-2 . cp:E-2 cp:previousEvent cp:E-1 ."
    )
    assert validate(store, schema) == []


def test_unparseable_date_is_datatype_violation(schema):
    store = fixture()
    store.load_text('cp:E-bad a cp:ServiceEvent . cp:E-bad time:hasBeginning "yesterday" .')
    violations = validate(store, schema)
    assert kinds(violations) == [DATATYPE]


def test_undeclared_predicates_ignored(schema):
    store = fixture()
    store.load_text("cp:Client16 cp:totallyUndeclared cp:whatever .")
    assert validate(store, schema) == []


def test_untyped_subjects_skipped(schema):
    store = fixture()
    store.load_text('cp:mystery cp:hasMode "telepathy" .')
    assert validate(store, schema) == []


def test_monotone_under_clean_additions(fixture_store, schema):
    baseline = len(validate(fixture_store, schema))
    grown = fixture()
    grown.load_text(
        "cp:S77 a cp:Service . "
        'cp:S77 cp:hasMode "phone" . '
        "cp:S77 cp:providesSatisfier cp:NS-Housing . "
        "cp:S77 cids:hasCode cp:INST-Shelter ."
    )
    assert len(validate(grown, schema)) == baseline == 0


class TestExplain:
    def test_enumeration_line(self, schema):
        store = fixture()
        _inject_enumeration_range(store)
        (v,) = validate(store, schema)
        line = explain(v)
        assert "hasMode" in line and "telepathy" in line

    def test_coded_line_names_code_class(self, schema):
        store = fixture()
        _inject_coded_range(store)
        (v,) = validate(store, schema)
        line = explain(v)
        assert "CL-Gender" in line

    def test_chain_line_names_both_events(self, schema):
        store = fixture()
        _inject_event_chain_broken(store)
        (v,) = validate(store, schema)
        line = explain(v)
        assert "cp:E-a" in line and "cp:E-b" in line
