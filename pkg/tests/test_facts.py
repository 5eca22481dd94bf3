from __future__ import annotations

import pytest

from conftest import load_fixture
from xsd2jsonschema.defaults import inject_defaults
from xsd2jsonschema.errors import AmbiguousAttribute, UnknownId
from xsd2jsonschema.facts import Source, dump_facts, flatten
from xsd2jsonschema.xmlingest import (
    QualifiedName,
    RawText,
    XSD_NAMESPACE,
    XmlElement,
    parse_document,
)


def store_of(name: str):
    return flatten(parse_document(load_fixture(name)))


def test_percentages_fact_counts():
    store = store_of("percentages.xsd")
    assert [n.name for n in store.nodes.values()] == [
        "schema",
        "element",
        "complexType",
        "sequence",
        "element",
    ]
    explicit = [
        (f.key, f.value)
        for facts in store.attributes.values()
        for f in facts
        if f.source == Source.EXPLICIT
    ]
    assert sorted(explicit) == [
        ("maxOccurs", "5"),
        ("name", "percentages"),
        ("name", "value"),
        ("type", "xs:nonNegativeInteger"),
    ]
    assert store.texts == {}


def test_single_node_tree():
    store = flatten(parse_document(b"<a/>"))
    assert len(store.nodes) == 1
    root = store.root()
    assert root.child_ids == () and root.parent_id is None
    assert store.attributes == {} and store.texts == {}


def test_text_fact_linkage():
    store = flatten(parse_document(b"<a><b>t</b></a>"))
    a = store.root()
    (b,) = store.children_of(a.id)
    assert a.child_ids == (b.id,)
    (text,) = store.text_children(b.id)
    assert b.child_ids == (text.id,)
    assert text.text == "t" and text.parent_id == b.id


def test_ids_are_preorder():
    store = store_of("percentages.xsd")
    for node in store.nodes.values():
        if node.parent_id is not None:
            assert node.parent_id < node.id
        assert list(node.child_ids) == sorted(node.child_ids)


def test_children_of():
    store = store_of("percentages.xsd")
    (complex_type,) = store.nodes_named(XSD_NAMESPACE, "complexType")
    children = store.children_of(complex_type.id)
    assert [c.name for c in children] == ["sequence"]
    leaf = store.nodes_named(XSD_NAMESPACE, "element")[-1]
    assert store.children_of(leaf.id) == []
    with pytest.raises(UnknownId):
        store.children_of(9999)


def test_children_of_excludes_text():
    store = flatten(parse_document(b"<a>x<b/>y</a>"))
    children = store.children_of(store.root().id)
    assert [c.name for c in children] == ["b"]


def test_attribute_of():
    store = inject_defaults(store_of("percentages.xsd"))
    inner = store.nodes_named(XSD_NAMESPACE, "element")[-1]
    assert store.attribute_of(inner.id, "maxOccurs") == ("5", Source.EXPLICIT)
    assert store.attribute_of(inner.id, "minOccurs") == ("1", Source.DEFAULT)
    assert store.attribute_of(inner.id, "nosuch") is None
    with pytest.raises(UnknownId):
        store.attribute_of(9999, "name")


def test_duplicate_attribute_facts_are_detected():
    store = flatten(parse_document(b"<a/>"))
    root_id = store.root().id
    store.add_attribute(root_id, "k", "1", Source.EXPLICIT)
    store.add_attribute(root_id, "k", "2", Source.EXPLICIT)
    with pytest.raises(AmbiguousAttribute):
        store.attribute_of(root_id, "k")


def test_xmlns_never_becomes_attribute_fact():
    store = store_of("percentages.xsd")
    keys = {f.key for facts in store.attributes.values() for f in facts}
    assert not any(k.startswith("xmlns") for k in keys)


def _count_elements(element) -> int:
    return 1 + sum(
        _count_elements(c) for c in element.children if isinstance(c, XmlElement)
    )


def _count_texts(element) -> int:
    own = sum(1 for c in element.children if isinstance(c, RawText))
    return own + sum(
        _count_texts(c) for c in element.children if isinstance(c, XmlElement)
    )


@pytest.mark.parametrize(
    "fixture",
    ["percentages.xsd", "grades.xsd", "money.xsd", "attributes.xsd", "choice.xsd"],
)
def test_fact_count_law(fixture):
    root = parse_document(load_fixture(fixture))
    store = flatten(root)
    assert len(store.nodes) == _count_elements(root)
    assert len(store.texts) == _count_texts(root)


def _rebuild(store, node_id) -> XmlElement:
    node = store.nodes[node_id]
    children = []
    for cid in node.child_ids:
        if cid in store.texts:
            children.append(RawText(store.texts[cid].text))
        else:
            children.append(_rebuild(store, cid))
    return XmlElement(
        name=QualifiedName(node.namespace, node.name),
        attributes=tuple((f.key, f.value) for f in store.attributes_of(node_id)),
        children=tuple(children),
    )


@pytest.mark.parametrize("fixture", ["percentages.xsd", "grades.xsd", "money.xsd"])
def test_tree_reconstructible_from_store(fixture):
    root = parse_document(load_fixture(fixture))
    store = flatten(root)
    rebuilt = _rebuild(store, store.root().id)

    def strip_decls(element):
        return XmlElement(
            name=element.name,
            attributes=element.attributes,
            children=tuple(
                strip_decls(c) if isinstance(c, XmlElement) else c
                for c in element.children
            ),
        )

    assert rebuilt == strip_decls(root)


@pytest.mark.parametrize(
    "fixture",
    ["percentages.xsd", "grades.xsd", "money.xsd", "attributes.xsd", "empty.xsd"],
)
def test_audit_clean(fixture):
    store = inject_defaults(store_of(fixture))
    assert store.audit() == []


def test_path_of():
    store = store_of("percentages.xsd")
    inner = store.nodes_named(XSD_NAMESPACE, "element")[-1]
    assert store.path_of(inner.id) == "/schema/element/complexType/sequence/element"


def test_resolve_qname_uses_scoped_prefixes():
    store = flatten(
        parse_document(
            b'<a xmlns:p="urn:one"><b xmlns:p="urn:two"/><c xmlns="urn:d"/></a>'
        )
    )
    a = store.root()
    b, c = store.children_of(a.id)
    assert store.resolve_qname(a.id, "p:x") == QualifiedName("urn:one", "x")
    assert store.resolve_qname(b.id, "p:x") == QualifiedName("urn:two", "x")
    assert store.resolve_qname(a.id, "x") == QualifiedName("", "x")
    assert store.resolve_qname(c.id, "x") == QualifiedName("urn:d", "x")
    assert store.resolve_qname(a.id, " p:x ") == QualifiedName("urn:one", "x")
    assert store.resolve_qname(a.id, "bad name") is None
    assert store.resolve_qname(a.id, "") is None


def test_dump_facts_format():
    store = inject_defaults(store_of("percentages.xsd"))
    lines = dump_facts(store).splitlines()
    assert lines[0].split("\t") == [
        "node",
        "1",
        XSD_NAMESPACE,
        "schema",
        "-",
        "2",
    ]
    kinds = {line.split("\t")[0] for line in lines}
    assert kinds == {"node", "attr"}
