"""Root schema assembly: definitions wrapping and @-prefix cleanup."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TranslationWarning
from .facts import FactStore, NodeId
from .schema_ast import SchemaValue
from .xmlingest import XSD_NAMESPACE


@dataclass
class RootSchema:
    value: SchemaValue
    warnings: list[TranslationWarning] = field(default_factory=list)


def wrap_definitions(store: FactStore, fragments: dict[NodeId, SchemaValue]) -> RootSchema:
    """Build the document schema from the per-node fragments.

    The first global element of the schema becomes the root schema;
    every global named simple or complex type is inserted under
    ``definitions``. Missing pieces degrade to ``{}`` with a warning
    instead of failing.
    """
    warnings: list[TranslationWarning] = []
    root = store.root()
    globals_: list = []
    named_types: list = []
    if (root.namespace, root.name) == (XSD_NAMESPACE, "schema"):
        for child in store.children_of(root.id):
            if child.namespace != XSD_NAMESPACE:
                continue
            if child.name == "element":
                globals_.append(child)
            elif child.name in ("simpleType", "complexType"):
                named_types.append(child)

    if not globals_:
        value: SchemaValue = {}
        warnings.append(
            TranslationWarning(
                "missing-root-element",
                "the schema declares no global element; emitting an empty schema",
            )
        )
    else:
        if len(globals_) > 1:
            names = ", ".join(
                (store.attribute_of(g.id, "name") or ("?",))[0] for g in globals_
            )
            warnings.append(
                TranslationWarning(
                    "multiple-global-elements",
                    f"schema declares {len(globals_)} global elements ({names});"
                    " using the first in document order",
                    globals_[0].id,
                )
            )
        value = fragments.get(globals_[0].id, {})

    definitions: dict[str, SchemaValue] = {}
    has_named_type = False
    for node in named_types:
        name = store.attribute_of(node.id, "name")
        if name is None:
            continue
        has_named_type = True
        if node.id in fragments:
            definitions[name[0]] = fragments[node.id]
    if has_named_type:
        value = dict(value)
        value["definitions"] = definitions

    return RootSchema(value, warnings)


def cleanup_at_prefix(root: RootSchema, keep: bool = False) -> RootSchema:
    """Drop the ``@`` marker from attribute-derived property names.

    A property ``@n`` is renamed to ``n`` iff no sibling property ``n``
    exists in the same properties object; matching entries in the
    sibling ``required`` array follow the rename. With ``keep`` the
    schema is returned unchanged. Idempotent either way.
    """
    if keep:
        return root
    return RootSchema(_cleanup(root.value), root.warnings)


def _cleanup(value: SchemaValue) -> SchemaValue:
    if isinstance(value, list):
        return [_cleanup(item) for item in value]
    if not isinstance(value, dict):
        return value

    renames: dict[str, str] = {}
    properties = value.get("properties")
    if isinstance(properties, dict):
        for key in properties:
            if key.startswith("@") and len(key) > 1 and key[1:] not in properties:
                renames[key] = key[1:]

    out: SchemaValue = {}
    for key, member in value.items():
        if key == "properties" and isinstance(member, dict):
            out[key] = {renames.get(k, k): _cleanup(v) for k, v in member.items()}
        elif key == "required" and renames and isinstance(member, list):
            out[key] = [
                renames.get(item, item) if isinstance(item, str) else _cleanup(item)
                for item in member
            ]
        else:
            out[key] = _cleanup(member)
    return out
