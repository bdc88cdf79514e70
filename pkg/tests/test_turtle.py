import pytest

from compass_kg import turtle
from compass_kg.namespaces import RDF_TYPE, XSD_DATETIME, cp
from compass_kg.store import Triple, TripleStore, iri, literal


def test_empty_document_loads_nothing(empty_store):
    assert empty_store.load_text("") == 0
    assert len(empty_store) == 0


def test_one_line_document(empty_store):
    n = empty_store.load_text("cp:Client2 rdf:type cp:Client .")
    assert n == 1
    assert Triple(iri(cp("Client2")), iri(RDF_TYPE), iri(cp("Client"))) in empty_store


def test_prefix_declaration_registers(empty_store):
    doc = '@prefix ex: <http://example.org/x#> .\nex:a ex:b "v" .'
    assert empty_store.load_text(doc) == 1
    assert empty_store.prefixes["ex"] == "http://example.org/x#"


def test_a_shorthand_and_semicolons(empty_store):
    doc = """
    cp:S1 a cp:Service ;
        cp:hasMode "online" , "phone" ;
        cids:hasCode cp:INST-Shelter .
    """
    assert empty_store.load_text(doc) == 4


def test_comments_and_typed_literals(empty_store):
    doc = (
        "# header comment\n"
        'cp:E1 time:hasBeginning "2021-01-01T00:00:00.000"^^xsd:dateTime . # trailing\n'
    )
    assert empty_store.load_text(doc) == 1
    obj = next(iter(empty_store)).object
    assert obj == literal("2021-01-01T00:00:00.000", XSD_DATETIME)


def test_absolute_iris(empty_store):
    doc = "<http://a.example/s> <http://a.example/p> <http://a.example/o> ."
    assert empty_store.load_text(doc) == 1


def test_parse_error_carries_position():
    store = TripleStore()
    with pytest.raises(turtle.TurtleParseError) as err:
        store.load_text("cp:a cp:b\ncp:c")  # missing object/terminator
    assert err.value.line >= 1
    assert err.value.col >= 1


def test_undefined_prefix():
    store = TripleStore()
    with pytest.raises(turtle.UndefinedPrefixError):
        store.load_text("nope:a cp:b nope:c .")


def test_blank_nodes_get_fresh_labels():
    store = TripleStore()
    store.load_text("_:x cp:hasNeed cp:N1 .")
    store.load_text("_:x cp:hasNeed cp:N2 .")
    # same document label twice, but two distinct nodes
    subjects = {t.subject for t in store}
    assert len(subjects) == 2


def test_string_escapes_round_trip(empty_store):
    doc = r'cp:a rdfs:label "line\nbreak and \"quote\" and tab\t." .'
    empty_store.load_text(doc)
    value = next(iter(empty_store)).object.value
    assert value == 'line\nbreak and "quote" and tab\t.'
    reloaded = TripleStore()
    reloaded.load_text(empty_store.serialize())
    assert reloaded == empty_store


def test_serialize_empty_store_is_prefixes_only(empty_store):
    doc = empty_store.serialize()
    lines = [l for l in doc.splitlines() if l.strip()]
    assert lines
    assert all(l.startswith("@prefix") for l in lines)


def test_serialize_single_triple_prefixed(empty_store):
    empty_store.add(iri(cp("Client2")), iri(RDF_TYPE), iri(cp("Client")))
    assert "cp:Client2 rdf:type cp:Client ." in empty_store.serialize()


def test_serialize_sorted_and_unabbreviated(empty_store):
    empty_store.load_text(
        "cp:b cp:p cp:o2 . cp:a cp:p cp:o1 . cp:a cp:p cp:o0 ."
    )
    body = [l for l in empty_store.serialize().splitlines() if l and not l.startswith("@prefix")]
    assert body == sorted(body)
    assert not any(";" in l or "," in l for l in body)


def test_fixture_serialization_idempotent(fixture_store):
    doc = fixture_store.serialize()
    loaded = TripleStore()
    loaded.load_text(doc)
    assert loaded.serialize() == doc
    assert loaded == fixture_store


def test_property_list_syntax_is_rejected(empty_store):
    with pytest.raises(turtle.TurtleParseError):
        empty_store.load_text("cp:a cp:b [ cp:c cp:d ] .")
