"""Prefix registry and well-known IRIs shared by every layer of the engine."""

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
TIME = "http://www.w3.org/2006/time#"
SCHEMA_ORG = "http://schema.org/"

# Domain namespaces. The bases are placeholders owned by this project; data
# files may rebind any of them with their own @prefix declarations.
CP = "http://example.org/compass#"
CIDS = "http://example.org/cids#"
IC = "http://example.org/icontact#"
I72 = "http://example.org/iso21972#"
OEP = "http://example.org/oep#"
ISO5087 = "http://example.org/iso5087-2#"

DEFAULT_PREFIXES = {
    "cp": CP,
    "cids": CIDS,
    "ic": IC,
    "i72": I72,
    "oep": OEP,
    "iso5087": ISO5087,
    "rdf": RDF,
    "rdfs": RDFS,
    "xsd": XSD,
    "time": TIME,
    "schema": SCHEMA_ORG,
}

RDF_TYPE = RDF + "type"
RDFS_LABEL = RDFS + "label"
RDFS_SUBCLASS_OF = RDFS + "subClassOf"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_BOOLEAN = XSD + "boolean"
XSD_DATETIME = XSD + "dateTime"


def cp(local: str) -> str:
    return CP + local


def cids(local: str) -> str:
    return CIDS + local


def ic(local: str) -> str:
    return IC + local


def i72(local: str) -> str:
    return I72 + local


def oep(local: str) -> str:
    return OEP + local


def iso5087(local: str) -> str:
    return ISO5087 + local


def time_ns(local: str) -> str:
    return TIME + local


def schema_org(local: str) -> str:
    return SCHEMA_ORG + local


def expand_name(name: str, prefixes: dict | None = None) -> str:
    """Expand a prefixed name like ``cp:Client16`` to a full IRI.

    Full IRIs (detected by the presence of ``://`` or an ``urn:`` scheme) and
    ``<...>``-wrapped IRIs pass through unchanged.
    """
    prefixes = prefixes if prefixes is not None else DEFAULT_PREFIXES
    if name.startswith("<") and name.endswith(">"):
        return name[1:-1]
    if "://" in name or name.startswith("urn:"):
        return name
    if ":" not in name:
        raise ValueError(f"not a prefixed name or IRI: {name!r}")
    label, local = name.split(":", 1)
    if label not in prefixes:
        raise KeyError(f"unknown prefix {label!r} in {name!r}")
    return prefixes[label] + local


def shrink_iri(iri: str, prefixes: dict | None = None) -> str:
    """Render an IRI as a prefixed name when a prefix base matches.

    Longest matching base wins; unmatched IRIs come back in ``<...>`` form.
    """
    prefixes = prefixes if prefixes is not None else DEFAULT_PREFIXES
    best = None
    for label, base in prefixes.items():
        if iri.startswith(base) and (best is None or len(base) > len(best[1])):
            best = (label, base)
    if best is None:
        return f"<{iri}>"
    label, base = best
    return f"{label}:{iri[len(base):]}"
