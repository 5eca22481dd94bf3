"""Flattened fact representation of the XSD element tree.

The tree is decomposed into three fact kinds: one node fact per
element, one attribute fact per XML attribute and one text fact per
non-whitespace text child. Identifiers are allocated in document
(pre-order) sequence, so comparing two identifiers recovers document
order. Rules later query the store through its indexes instead of
re-walking the tree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType

from .errors import AmbiguousAttribute, UnknownId
from .xmlingest import QualifiedName, RawText, XmlElement, XML_NAMESPACE

NodeId = int


class Source(enum.Enum):
    """Provenance of an attribute fact."""

    EXPLICIT = "explicit"
    DEFAULT = "default"


@dataclass(frozen=True)
class NodeFact:
    namespace: str
    name: str
    id: NodeId
    child_ids: tuple[NodeId, ...]
    parent_id: NodeId | None


@dataclass(frozen=True)
class AttributeFact:
    node_id: NodeId
    key: str
    value: str
    source: Source


@dataclass(frozen=True)
class TextFact:
    id: NodeId
    text: str
    parent_id: NodeId


@dataclass
class FactStore:
    """Indexed collections of node, attribute and text facts.

    Built single-threaded by :func:`flatten`; after the defaults stage
    it is treated as immutable and safe for concurrent reads.
    """

    nodes: dict[NodeId, NodeFact] = field(default_factory=dict)
    attributes: dict[NodeId, list[AttributeFact]] = field(default_factory=dict)
    texts: dict[NodeId, TextFact] = field(default_factory=dict)
    _by_name: dict[tuple[str, str], list[NodeId]] = field(default_factory=dict)
    _scopes: dict[NodeId, MappingProxyType] = field(default_factory=dict)
    _paths: dict[NodeId, str] = field(default_factory=dict)
    _next_id: NodeId = 1

    # -- construction ---------------------------------------------------

    def _allocate_id(self) -> NodeId:
        nid = self._next_id
        self._next_id += 1
        return nid

    def _add_node(self, fact: NodeFact, scope: dict[str, str]) -> None:
        self.nodes[fact.id] = fact
        self._by_name.setdefault((fact.namespace, fact.name), []).append(fact.id)
        self._scopes[fact.id] = MappingProxyType(scope)

    def add_attribute(self, node_id: NodeId, key: str, value: str, source: Source) -> None:
        self.attributes.setdefault(node_id, []).append(
            AttributeFact(node_id, key, value, source)
        )

    def remove_attribute(self, node_id: NodeId, key: str, source: Source) -> None:
        facts = self.attributes.get(node_id, [])
        self.attributes[node_id] = [
            f for f in facts if not (f.key == key and f.source == source)
        ]

    # -- queries ---------------------------------------------------------

    @property
    def max_id(self) -> NodeId:
        return self._next_id - 1

    def root(self) -> NodeFact:
        for fact in self.nodes.values():
            if fact.parent_id is None:
                return fact
        raise UnknownId("store has no root node")

    def node(self, node_id: NodeId) -> NodeFact:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownId(f"no node with id {node_id}") from None

    def children_of(self, parent: NodeId) -> list[NodeFact]:
        """Element children of ``parent`` in document order, text excluded."""
        if parent not in self.nodes and parent not in self.texts:
            raise UnknownId(f"no node with id {parent}")
        if parent in self.texts:
            return []
        return [
            self.nodes[cid]
            for cid in self.nodes[parent].child_ids
            if cid in self.nodes
        ]

    def text_children(self, parent: NodeId) -> list[TextFact]:
        node = self.node(parent)
        return [self.texts[cid] for cid in node.child_ids if cid in self.texts]

    def attributes_of(self, node_id: NodeId) -> list[AttributeFact]:
        return list(self.attributes.get(node_id, ()))

    def attribute_of(self, node_id: NodeId, key: str) -> tuple[str, Source] | None:
        """The unique attribute fact for ``(node_id, key)``, or ``None``."""
        if node_id not in self.nodes:
            raise UnknownId(f"no node with id {node_id}")
        found = [f for f in self.attributes.get(node_id, ()) if f.key == key]
        if not found:
            return None
        if len(found) > 1:
            raise AmbiguousAttribute(
                f"{len(found)} attribute facts for (node {node_id}, {key!r})"
            )
        return found[0].value, found[0].source

    def nodes_named(self, namespace: str, name: str) -> list[NodeFact]:
        """All nodes with the given qualified name, in document order."""
        return [self.nodes[nid] for nid in self._by_name.get((namespace, name), ())]

    def path_of(self, node_id: NodeId) -> str:
        """Human-readable element path from the root, e.g. ``/schema/element``."""
        cached = self._paths.get(node_id)
        if cached is not None:
            return cached
        fact = self.node(node_id)
        if fact.parent_id is None:
            path = "/" + fact.name
        else:
            path = self.path_of(fact.parent_id) + "/" + fact.name
        self._paths[node_id] = path
        return path

    def resolve_qname(self, node_id: NodeId, raw: str) -> QualifiedName | None:
        """Resolve a prefixed name in an attribute value (e.g. ``xs:string``)
        against the namespace bindings in scope at ``node_id``.

        Unprefixed names resolve against the default namespace. Returns
        ``None`` when ``raw`` is not a well-formed name; an unbound prefix
        resolves to the empty namespace.
        """
        scope = self._scopes.get(node_id, {})
        raw = raw.strip()
        if ":" in raw:
            prefix, local = raw.split(":", 1)
            uri = scope.get(prefix, "")
        else:
            local = raw
            uri = scope.get("", "")
        try:
            return QualifiedName(uri, local)
        except ValueError:
            return None

    # -- integrity -------------------------------------------------------

    def audit(self) -> list[str]:
        """Check that indexes and links agree with the base collections.

        Returns a list of problem descriptions; empty means consistent.
        """
        problems: list[str] = []
        roots = [f for f in self.nodes.values() if f.parent_id is None]
        if len(roots) != 1:
            problems.append(f"expected exactly one root, found {len(roots)}")
        all_ids = set(self.nodes) | set(self.texts)
        if set(self.nodes) & set(self.texts):
            problems.append("node and text facts share identifiers")
        for fact in self.nodes.values():
            for cid in fact.child_ids:
                if cid not in all_ids:
                    problems.append(f"node {fact.id} lists unknown child {cid}")
            if fact.parent_id is not None:
                parent = self.nodes.get(fact.parent_id)
                if parent is None:
                    problems.append(f"node {fact.id} has unknown parent {fact.parent_id}")
                elif parent.child_ids.count(fact.id) != 1:
                    problems.append(
                        f"node {fact.id} appears {parent.child_ids.count(fact.id)} "
                        f"times in parent {parent.id}"
                    )
        for text in self.texts.values():
            if not text.text.strip():
                problems.append(f"text fact {text.id} is all-whitespace")
            parent = self.nodes.get(text.parent_id)
            if parent is None or text.id not in parent.child_ids:
                problems.append(f"text fact {text.id} not linked from its parent")
        for (namespace, name), ids in self._by_name.items():
            for nid in ids:
                fact = self.nodes.get(nid)
                if fact is None or (fact.namespace, fact.name) != (namespace, name):
                    problems.append(f"name index entry ({namespace!r}, {name!r}) -> {nid} is stale")
        for node_id, facts in self.attributes.items():
            if node_id not in self.nodes:
                problems.append(f"attribute facts attached to unknown node {node_id}")
            for fact in facts:
                if fact.node_id != node_id:
                    problems.append(f"attribute fact {fact} filed under node {node_id}")
        return problems


def flatten(root: XmlElement) -> FactStore:
    """Decompose a parsed element tree into a fresh fact store.

    Identifiers are allocated in pre-order; every attribute fact is
    created with source=explicit (defaults are injected in a later
    stage). Namespace declarations never become attribute facts.
    """
    store = FactStore()

    def walk(element: XmlElement, parent_id: NodeId | None, scope: dict[str, str]) -> NodeId:
        if element.namespace_decls:
            scope = dict(scope)
            scope.update(element.namespace_decls)
        node_id = store._allocate_id()
        for key, value in element.attributes:
            store.add_attribute(node_id, key, value, Source.EXPLICIT)
        child_ids: list[NodeId] = []
        for child in element.children:
            if isinstance(child, RawText):
                text_id = store._allocate_id()
                store.texts[text_id] = TextFact(text_id, child.text, node_id)
                child_ids.append(text_id)
            else:
                child_ids.append(walk(child, node_id, scope))
        store._add_node(
            NodeFact(
                namespace=element.name.namespace_uri,
                name=element.name.local_name,
                id=node_id,
                child_ids=tuple(child_ids),
                parent_id=parent_id,
            ),
            scope,
        )
        return node_id

    walk(root, None, {"xml": XML_NAMESPACE})
    # walk() registers a node after its children; re-establish id order
    store.nodes = dict(sorted(store.nodes.items()))
    for ids in store._by_name.values():
        ids.sort()
    return store


def _escape_dump_text(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def dump_facts(store: FactStore) -> str:
    """Debug dump: one fact per line, tab-separated.

    Lines are ``node <id> <namespace> <name> <parent|-> <child,ids>``,
    ``attr <node-id> <key> <value> <source>`` (sorted by key under their
    node) and ``text <id> <parent-id> <text>``, in identifier order.
    """
    lines: list[str] = []
    for fact_id in range(1, store.max_id + 1):
        if fact_id in store.nodes:
            node = store.nodes[fact_id]
            parent = "-" if node.parent_id is None else str(node.parent_id)
            children = ",".join(str(c) for c in node.child_ids)
            lines.append(f"node\t{node.id}\t{node.namespace}\t{node.name}\t{parent}\t{children}")
            for attr in sorted(store.attributes.get(fact_id, ()), key=lambda f: f.key):
                lines.append(
                    f"attr\t{attr.node_id}\t{attr.key}\t{attr.value}\t{attr.source.value}"
                )
        elif fact_id in store.texts:
            text = store.texts[fact_id]
            lines.append(f"text\t{text.id}\t{text.parent_id}\t{_escape_dump_text(text.text)}")
    return "\n".join(lines)
