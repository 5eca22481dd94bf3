"""Translation rules and the fixpoint engine.

Each rule pattern-matches over the fact store and over already-emitted
schema fragments, and emits new fragments. Fragments are kept as
individual facts (several per node); a rule that consumes a fragment
fires once per fragment fact, so fragments arriving late re-trigger the
consumers and everything a child contributes eventually reaches its
ancestors. The per-node results are merged only at the end.

A firing history keyed by (rule, matched fact ids) guarantees each rule
fires at most once per head combination, which bounds the number of
firings and makes the fixpoint iteration terminate on every input.
"""

from __future__ import annotations

import re
from copy import deepcopy
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

from .errors import (
    InvalidOccurs,
    MergeConflict,
    NonNumericFacetValue,
    TranslationError,
    TranslationWarning,
)
from .facts import FactStore, NodeFact, NodeId
from .schema_ast import SchemaValue, merge_schemas, serialize
from .xmlingest import QualifiedName, XSD_NAMESPACE

# JSON equivalents of the XSD primitive data types. Facet translation
# can narrow these further; see FACET_KEYS below.
PRIMITIVE_TYPE_TABLE: dict[str, SchemaValue] = {
    "string": {"type": "string"},
    "float": {"type": "number"},
    "double": {"type": "number"},
    "decimal": {"type": "number"},
    "nonNegativeInteger": {"type": "integer", "minimum": 0, "exclusiveMinimum": False},
    "positiveInteger": {"type": "integer", "minimum": 0, "exclusiveMinimum": True},
    "nonPositiveInteger": {"type": "integer", "maximum": 0, "exclusiveMaximum": False},
    "negativeInteger": {"type": "integer", "maximum": 0, "exclusiveMaximum": True},
    "integer": {"type": "integer"},
    "long": {"type": "integer"},
    "int": {"type": "integer"},
    "short": {"type": "integer"},
    "byte": {"type": "integer"},
    "boolean": {"type": "boolean"},
    "anyURI": {"type": "string"},
    "date": {"type": "string"},
    "dateTime": {"type": "string"},
    "time": {"type": "string"},
}


def convert_primitive_type(type_name: QualifiedName) -> SchemaValue | None:
    """The JSON Schema fragment for an XSD primitive type name, or
    ``None`` when the name is not in the XSD namespace or not mapped."""
    if type_name.namespace_uri != XSD_NAMESPACE:
        return None
    fragment = PRIMITIVE_TYPE_TABLE.get(type_name.local_name)
    return deepcopy(fragment) if fragment is not None else None


@dataclass(frozen=True)
class FiringRecord:
    """One rule firing; a rule never fires twice for the same head ids."""

    rule: str
    head_ids: tuple[int, ...]


@dataclass(frozen=True)
class _FragmentFact:
    """A single emitted schema fragment. Fact ids continue the node-id
    sequence so a firing that matched a fragment is distinguishable from
    one that matched only the node."""

    fact_id: int
    node_id: NodeId
    value: SchemaValue
    fingerprint: str


@dataclass(frozen=True)
class _Proposal:
    head_ids: tuple[int, ...]
    target: NodeId
    value: SchemaValue
    consumed: tuple[int, ...] = ()
    warnings: tuple[TranslationWarning, ...] = ()
    # set when `value` is an existing fact's value passed through verbatim
    fingerprint: str | None = None


@dataclass
class FixpointResult:
    fragments: dict[NodeId, SchemaValue]
    warnings: list[TranslationWarning]
    history: tuple[FiringRecord, ...] = ()


_INT_RE = re.compile(r"^[+-]?[0-9]+$")

# facet local name -> JSON Schema keys it sets
FACET_KEYS = {
    "minLength": "minLength",
    "maxLength": "maxLength",
    "length": ("minLength", "maxLength"),
    "pattern": "pattern",
    "enumeration": "enum",
    "minInclusive": ("minimum", ("exclusiveMinimum", False)),
    "maxInclusive": ("maximum", ("exclusiveMaximum", False)),
    "minExclusive": ("minimum", ("exclusiveMinimum", True)),
    "maxExclusive": ("maximum", ("exclusiveMaximum", True)),
}

_LENGTH_FACETS = {"minLength", "maxLength", "length"}
_BOUND_FACETS = {"minInclusive", "maxInclusive", "minExclusive", "maxExclusive"}


def _parse_number(facet: str, raw: str, path: str):
    text = raw.strip()
    if _INT_RE.match(text):
        return int(text)
    try:
        value = Decimal(text)
    except InvalidOperation:
        value = None
    if value is None or not value.is_finite():
        raise NonNumericFacetValue(f"facet {facet} has non-numeric value {raw!r} at {path}")
    return value


def _parse_int(facet: str, raw: str, path: str) -> int:
    if not _INT_RE.match(raw.strip()):
        raise NonNumericFacetValue(f"facet {facet} needs an integer, got {raw!r} at {path}")
    return int(raw.strip())


def _parse_occurs(raw: str, unbounded_ok: bool, key: str, path: str) -> int | None:
    """A nonnegative occurrence count; ``None`` means unbounded."""
    if raw == "unbounded" and unbounded_ok:
        return None
    if _INT_RE.match(raw) and int(raw) >= 0:
        return int(raw)
    raise InvalidOccurs(f"invalid {key} value {raw!r} at {path}")


class _Engine:
    def __init__(self, store: FactStore, always_array: bool = False):
        self.store = store
        self.always_array = always_array
        self.frag_facts: dict[NodeId, list[_FragmentFact]] = {}
        self.history: list[FiringRecord] = []
        self._seen: set[FiringRecord] = set()
        self._fingerprints: dict[NodeId, set[str]] = {}
        self._current_rule = ""
        self.consumed: set[int] = set()
        self.warnings: list[TranslationWarning] = []
        self._next_fact_id = store.max_id + 1
        self._global_types = self._collect_global_types()

    # -- helpers ----------------------------------------------------------

    def _collect_global_types(self) -> dict[str, NodeId]:
        root = self.store.root()
        if (root.namespace, root.name) != (XSD_NAMESPACE, "schema"):
            return {}
        types: dict[str, NodeId] = {}
        for child in self.store.children_of(root.id):
            if child.namespace != XSD_NAMESPACE:
                continue
            if child.name not in ("simpleType", "complexType"):
                continue
            name = self.store.attribute_of(child.id, "name")
            if name is not None and name[0] not in types:
                types[name[0]] = child.id
        return types

    def _xsd_children(self, parent: NodeId, name: str) -> list[NodeFact]:
        return [
            c
            for c in self.store.children_of(parent)
            if c.namespace == XSD_NAMESPACE and c.name == name
        ]

    def _elements_and_attributes(self) -> list[NodeFact]:
        nodes = self.store.nodes_named(XSD_NAMESPACE, "element") + self.store.nodes_named(
            XSD_NAMESPACE, "attribute"
        )
        return sorted(nodes, key=lambda n: n.id)

    def _attr(self, node_id: NodeId, key: str) -> str | None:
        found = self.store.attribute_of(node_id, key)
        return None if found is None else found[0]

    def _facts_of(self, node_id: NodeId) -> list[_FragmentFact]:
        return list(self.frag_facts.get(node_id, ()))

    def _fired(self, *head_ids: int) -> bool:
        """True when the current rule already fired for these head ids;
        lets rules skip re-proposing without rebuilding emission values."""
        return FiringRecord(self._current_rule, head_ids) in self._seen

    def _emit(self, node_id: NodeId, value: SchemaValue) -> None:
        # deduplicate by serialized form: identical re-emissions are
        # common (a consumer re-fires per incoming fragment fact) and a
        # string set is far cheaper than pairwise deep comparison
        fingerprint = serialize(value, pretty=False)
        seen = self._fingerprints.setdefault(node_id, set())
        if fingerprint in seen:
            return
        seen.add(fingerprint)
        facts = self.frag_facts.setdefault(node_id, [])
        facts.append(_FragmentFact(self._next_fact_id, node_id, value))
        self._next_fact_id += 1

    # -- rules ------------------------------------------------------------
    # Catalog order is fixed; candidate order within a rule follows node
    # ids, then fragment fact ids. Both together make the run
    # deterministic.

    def _rule_primitive_typed_element(self):
        for node in self._elements_and_attributes():
            raw = self._attr(node.id, "type")
            if raw is None:
                continue
            qname = self.store.resolve_qname(node.id, raw)
            if qname is None:
                continue
            fragment = convert_primitive_type(qname)
            if fragment is not None:
                yield _Proposal((node.id,), node.id, fragment)

    def _rule_named_type_reference(self):
        for node in self._elements_and_attributes():
            raw = self._attr(node.id, "type")
            if raw is None:
                continue
            qname = self.store.resolve_qname(node.id, raw)
            if qname is not None and convert_primitive_type(qname) is not None:
                continue
            local = qname.local_name if qname is not None else None
            if local is not None and local in self._global_types:
                yield _Proposal(
                    (node.id,), node.id, {"$ref": f"#/definitions/{local}"}
                )
            else:
                warning = TranslationWarning(
                    "unresolved-type-reference",
                    f"type {raw!r} does not resolve to a primitive or a global"
                    f" type at {self.store.path_of(node.id)}",
                    node.id,
                )
                yield _Proposal((node.id,), node.id, {}, warnings=(warning,))

    def _rule_restriction_facets(self):
        for node in self.store.nodes_named(XSD_NAMESPACE, "restriction"):
            base = self._attr(node.id, "base")
            if base is None:
                continue
            path = self.store.path_of(node.id)
            qname = self.store.resolve_qname(node.id, base)
            fragment = convert_primitive_type(qname) if qname is not None else None
            if fragment is None:
                fragment = {}
            warnings = []
            consumed = []
            enum_values: list[str] = []
            for child in self.store.children_of(node.id):
                if child.namespace != XSD_NAMESPACE or child.name == "annotation":
                    continue
                consumed.append(child.id)
                facet = child.name
                value = self._attr(child.id, "value")
                if facet not in FACET_KEYS or value is None:
                    warnings.append(
                        TranslationWarning(
                            "unsupported-facet",
                            f"facet {facet} skipped at {path}",
                            child.id,
                        )
                    )
                    continue
                if facet == "enumeration":
                    if value not in enum_values:
                        enum_values.append(value)
                elif facet == "pattern":
                    fragment["pattern"] = value
                elif facet in _LENGTH_FACETS:
                    n = _parse_int(facet, value, path)
                    keys = FACET_KEYS[facet]
                    for key in keys if isinstance(keys, tuple) else (keys,):
                        fragment[key] = n
                elif facet in _BOUND_FACETS:
                    bound_key, (flag_key, flag) = FACET_KEYS[facet]
                    fragment[bound_key] = _parse_number(facet, value, path)
                    fragment[flag_key] = flag
            if enum_values:
                fragment["enum"] = enum_values
            yield _Proposal(
                (node.id,), node.id, fragment, tuple(consumed), tuple(warnings)
            )

    def _rule_simpletype_restriction(self):
        for node in self.store.nodes_named(XSD_NAMESPACE, "simpleType"):
            for child in self._xsd_children(node.id, "restriction"):
                for fact in self._facts_of(child.id):
                    if not self._fired(node.id, child.id, fact.fact_id):
                        yield _Proposal(
                            (node.id, child.id, fact.fact_id), node.id, fact.value
                        )

    def _rule_annotation_description(self):
        for node in self.store.nodes_named(XSD_NAMESPACE, "annotation"):
            if node.parent_id is None:
                continue
            parent = self.store.node(node.parent_id)
            if parent.namespace != XSD_NAMESPACE:
                continue
            texts = []
            consumed = [node.id]
            for doc in self._xsd_children(node.id, "documentation"):
                consumed.append(doc.id)
                text_facts = self.store.text_children(doc.id)
                consumed.extend(t.id for t in text_facts)
                chunk = " ".join(" ".join(t.text.split()) for t in text_facts)
                if chunk:
                    texts.append(chunk)
            if texts:
                yield _Proposal(
                    (parent.id, node.id),
                    parent.id,
                    {"description": "\n".join(texts)},
                    tuple(consumed),
                )

    def _rule_complextype_base(self):
        # every complex type is at least the empty object schema, so
        # elements with a vacuous inline type still translate to {}
        for node in self.store.nodes_named(XSD_NAMESPACE, "complexType"):
            yield _Proposal((node.id,), node.id, {})

    def _rule_sequence_element(self):
        for seq in self.store.nodes_named(XSD_NAMESPACE, "sequence"):
            for element in self._xsd_children(seq.id, "element"):
                name = self._attr(element.id, "name")
                min_raw = self._attr(element.id, "minOccurs")
                max_raw = self._attr(element.id, "maxOccurs")
                if name is None or min_raw is None or max_raw is None:
                    continue
                for fact in self._facts_of(element.id):
                    if self._fired(seq.id, element.id, fact.fact_id):
                        continue
                    path = self.store.path_of(element.id)
                    min_n = _parse_occurs(min_raw, False, "minOccurs", path)
                    max_n = _parse_occurs(max_raw, True, "maxOccurs", path)
                    if self.always_array or max_n != 1:
                        wrapped: SchemaValue = {
                            "type": "array",
                            "items": fact.value,
                            "minItems": min_n,
                        }
                        if max_n is not None:
                            wrapped["maxItems"] = max_n
                    else:
                        wrapped = fact.value
                    emission: SchemaValue = {
                        "type": "object",
                        "properties": {name: wrapped},
                    }
                    if min_n >= 1:
                        emission["required"] = [name]
                    yield _Proposal(
                        (seq.id, element.id, fact.fact_id), seq.id, emission
                    )

    def _rule_complextype_sequence(self):
        for node in self.store.nodes_named(XSD_NAMESPACE, "complexType"):
            for child in self._xsd_children(node.id, "sequence"):
                for fact in self._facts_of(child.id):
                    if not self._fired(node.id, child.id, fact.fact_id):
                        yield _Proposal(
                            (node.id, child.id, fact.fact_id), node.id, fact.value
                        )

    def _rule_complextype_attributes(self):
        for node in self.store.nodes_named(XSD_NAMESPACE, "complexType"):
            for attribute in self._xsd_children(node.id, "attribute"):
                name = self._attr(attribute.id, "name")
                if name is None:
                    continue
                required = self._attr(attribute.id, "use") == "required"

                def emission(value: SchemaValue) -> SchemaValue:
                    out: SchemaValue = {
                        "type": "object",
                        "properties": {"@" + name: value},
                    }
                    if required:
                        out["required"] = ["@" + name]
                    return out

                if not self._fired(node.id, attribute.id):
                    yield _Proposal((node.id, attribute.id), node.id, emission({}))
                for fact in self._facts_of(attribute.id):
                    if not self._fired(node.id, attribute.id, fact.fact_id):
                        yield _Proposal(
                            (node.id, attribute.id, fact.fact_id),
                            node.id,
                            emission(fact.value),
                        )

    def _rule_inline_complextype(self):
        for element in self.store.nodes_named(XSD_NAMESPACE, "element"):
            if self._attr(element.id, "type") is not None:
                continue
            for child in self._xsd_children(element.id, "complexType"):
                for fact in self._facts_of(child.id):
                    if not self._fired(element.id, child.id, fact.fact_id):
                        yield _Proposal(
                            (element.id, child.id, fact.fact_id),
                            element.id,
                            fact.value,
                        )

    def _rule_inline_simpletype(self):
        for node in self._elements_and_attributes():
            if self._attr(node.id, "type") is not None:
                continue
            for child in self._xsd_children(node.id, "simpleType"):
                for fact in self._facts_of(child.id):
                    if not self._fired(node.id, child.id, fact.fact_id):
                        yield _Proposal(
                            (node.id, child.id, fact.fact_id), node.id, fact.value
                        )

    CATALOG = (
        ("primitive-typed-element", _rule_primitive_typed_element),
        ("named-type-reference", _rule_named_type_reference),
        ("restriction-facets", _rule_restriction_facets),
        ("simpleType-restriction", _rule_simpletype_restriction),
        ("annotation-description", _rule_annotation_description),
        ("complexType-base", _rule_complextype_base),
        ("sequence-element", _rule_sequence_element),
        ("complexType-sequence", _rule_complextype_sequence),
        ("complexType-attributes", _rule_complextype_attributes),
        ("inline-complexType", _rule_inline_complextype),
        ("inline-simpleType", _rule_inline_simpletype),
    )

    # -- driver -----------------------------------------------------------

    def run(self) -> FixpointResult:
        while True:
            fired = False
            for rule_name, rule_fn in self.CATALOG:
                self._current_rule = rule_name
                try:
                    proposals = list(rule_fn(self))
                except TranslationError as exc:
                    if exc.rule is None:
                        exc.rule = rule_name
                    raise
                for proposal in proposals:
                    record = FiringRecord(rule_name, proposal.head_ids)
                    if record in self._seen:
                        continue
                    self._seen.add(record)
                    self.history.append(record)
                    self.consumed.update(proposal.head_ids)
                    self.consumed.update(proposal.consumed)
                    self.warnings.extend(proposal.warnings)
                    self._emit(proposal.target, proposal.value)
                    fired = True
            if not fired:
                break
        return FixpointResult(
            fragments=self._merge_fragments(),
            warnings=self.warnings + self._untranslated_warnings(),
            history=tuple(self.history),
        )

    def _merge_fragments(self) -> dict[NodeId, SchemaValue]:
        merged: dict[NodeId, SchemaValue] = {}
        for node_id in sorted(self.frag_facts):
            value: SchemaValue = {}
            for fact in self.frag_facts[node_id]:
                try:
                    value = merge_schemas(value, fact.value)
                except MergeConflict as exc:
                    exc.node_ids = (node_id,)
                    exc.args = (
                        f"{exc.args[0]} (merging fragments of"
                        f" {self.store.path_of(node_id)})",
                    )
                    raise
            merged[node_id] = value
        return merged

    def _untranslated_warnings(self) -> list[TranslationWarning]:
        skip_names = {"schema", "annotation", "documentation"}
        warnings = []
        for node in self.store.nodes.values():
            if node.namespace != XSD_NAMESPACE or node.name in skip_names:
                continue
            if node.id in self.frag_facts or node.id in self.consumed:
                continue
            warnings.append(
                TranslationWarning(
                    "unsupported-construct",
                    f"no translation rule matched {node.name}"
                    f" at {self.store.path_of(node.id)}",
                    node.id,
                )
            )
        return warnings


def run_to_fixpoint(store: FactStore, always_array: bool = False) -> FixpointResult:
    """Run the rule catalog to fixpoint over ``store``.

    Returns the merged fragment per node plus any warnings. The scan
    order is fixed, so the result is a pure function of the store and
    the ``always_array`` flag.
    """
    return _Engine(store, always_array=always_array).run()
