"""Injection of XSD-mandated default attribute values.

Runs in two phases, mirroring how the attribute facts are meant to
coexist: first a source=default fact is added for every rule key on
every matching node, then each default fact that is shadowed by an
explicit fact for the same (node, key) is removed. The result has at
most one attribute fact per (node, key), with explicit values winning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .facts import FactStore, Source
from .xmlingest import XSD_NAMESPACE


@dataclass(frozen=True)
class DefaultRule:
    """Declares one default attribute value for one element kind.

    ``context`` optionally restricts the rule to nodes whose parent has
    the given local name; the built-in table does not use it.
    """

    namespace: str
    element_name: str
    key: str
    value: str
    context: str | None = None


# XSD 1.0 occurrence and use defaults. Kept as data so the table can
# grow without engine changes; documented in the README.
DEFAULT_RULES: tuple[DefaultRule, ...] = (
    DefaultRule(XSD_NAMESPACE, "element", "minOccurs", "1"),
    DefaultRule(XSD_NAMESPACE, "element", "maxOccurs", "1"),
    DefaultRule(XSD_NAMESPACE, "attribute", "use", "optional"),
)


def inject_defaults(store: FactStore, rules: tuple[DefaultRule, ...] = DEFAULT_RULES) -> FactStore:
    """Add default attribute facts, then drop the ones an explicit
    attribute shadows. Mutates and returns ``store``; idempotent."""
    for rule in rules:
        for node in store.nodes_named(rule.namespace, rule.element_name):
            if rule.context is not None:
                parent = store.nodes.get(node.parent_id) if node.parent_id else None
                if parent is None or parent.name != rule.context:
                    continue
            already = any(
                f.key == rule.key and f.source == Source.DEFAULT
                for f in store.attributes_of(node.id)
            )
            if not already:
                store.add_attribute(node.id, rule.key, rule.value, Source.DEFAULT)

    for node_id in list(store.attributes):
        explicit_keys = {
            f.key for f in store.attributes_of(node_id) if f.source == Source.EXPLICIT
        }
        for key in explicit_keys:
            store.remove_attribute(node_id, key, Source.DEFAULT)
    return store
