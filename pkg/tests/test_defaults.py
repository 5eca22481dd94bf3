from __future__ import annotations

import pytest

from conftest import load_fixture
from xsd2jsonschema.defaults import DEFAULT_RULES, inject_defaults
from xsd2jsonschema.facts import Source, dump_facts, flatten
from xsd2jsonschema.xmlingest import XSD_NAMESPACE, parse_document


def defaulted(name: str):
    return inject_defaults(flatten(parse_document(load_fixture(name))))


def test_rule_table_keys_unique():
    seen = {(r.namespace, r.element_name, r.context, r.key) for r in DEFAULT_RULES}
    assert len(seen) == len(DEFAULT_RULES)


def test_inner_element_gains_min_occurs_but_not_max_occurs():
    store = defaulted("percentages.xsd")
    inner = store.nodes_named(XSD_NAMESPACE, "element")[-1]
    assert store.attribute_of(inner.id, "minOccurs") == ("1", Source.DEFAULT)
    # the explicit maxOccurs shadows its default, which is removed
    assert store.attribute_of(inner.id, "maxOccurs") == ("5", Source.EXPLICIT)


def test_attribute_node_gains_use_optional():
    data = b"""<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
      <xs:element name="e"><xs:complexType>
        <xs:attribute name="plain" type="xs:string"/>
        <xs:attribute name="req" type="xs:string" use="required"/>
      </xs:complexType></xs:element>
    </xs:schema>"""
    store = inject_defaults(flatten(parse_document(data)))
    plain, req = store.nodes_named(XSD_NAMESPACE, "attribute")
    assert store.attribute_of(plain.id, "use") == ("optional", Source.DEFAULT)
    assert store.attribute_of(req.id, "use") == ("required", Source.EXPLICIT)


def test_explicit_min_occurs_zero_is_kept():
    data = b"""<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
      <xs:element name="e" minOccurs="0"/>
    </xs:schema>"""
    store = inject_defaults(flatten(parse_document(data)))
    element = store.nodes_named(XSD_NAMESPACE, "element")[0]
    facts = [f for f in store.attributes_of(element.id) if f.key == "minOccurs"]
    assert len(facts) == 1
    assert facts[0].value == "0" and facts[0].source == Source.EXPLICIT


@pytest.mark.parametrize(
    "fixture",
    ["percentages.xsd", "money.xsd", "attributes.xsd", "occurrences.xsd", "empty.xsd"],
)
def test_at_most_one_fact_per_node_and_key(fixture):
    store = defaulted(fixture)
    for node_id, facts in store.attributes.items():
        keys = [f.key for f in facts]
        assert len(keys) == len(set(keys)), f"duplicate keys on node {node_id}"


def test_explicit_dominance():
    store = defaulted("percentages.xsd")
    inner = store.nodes_named(XSD_NAMESPACE, "element")[-1]
    for fact in store.attributes_of(inner.id):
        if fact.key in ("maxOccurs", "name", "type"):
            assert fact.source == Source.EXPLICIT


@pytest.mark.parametrize(
    "fixture",
    [
        "percentages.xsd",
        "money.xsd",
        "attributes.xsd",
        "attribute_conflict.xsd",
        "choice.xsd",
        "grades.xsd",
        "occurrences.xsd",
        "multiple_globals.xsd",
        "empty.xsd",
        "unresolved.xsd",
        "bounds.xsd",
    ],
)
def test_idempotence(fixture):
    store = defaulted(fixture)
    once = dump_facts(store)
    inject_defaults(store)
    assert dump_facts(store) == once


def test_non_xsd_nodes_get_no_defaults():
    store = inject_defaults(flatten(parse_document(b'<element name="e"/>')))
    assert store.attributes_of(store.root().id) == [
        f for f in store.attributes_of(store.root().id) if f.source == Source.EXPLICIT
    ]
