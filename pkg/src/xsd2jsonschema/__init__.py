"""xsd2jsonschema: translate XML Schema (XSD 1.0) documents into JSON
Schema Draft-04.

The pipeline runs in six stages: parse the XSD as XML, flatten it into
a fact store, inject XSD default attributes, run the translation rules
to fixpoint, wrap global type definitions, and clean up attribute-name
prefixes. :func:`translate` wires them together; the stages are also
usable individually from their modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .defaults import inject_defaults
from .errors import (
    EncodingError,
    InputError,
    InvalidOccurs,
    MalformedXml,
    MergeConflict,
    NonNumericFacetValue,
    StrictModeViolation,
    TranslationError,
    TranslationWarning,
    Xsd2JsonSchemaError,
)
from .facts import FactStore, flatten
from .finalize import cleanup_at_prefix, wrap_definitions
from .rules import convert_primitive_type, run_to_fixpoint
from .schema_ast import SchemaValue, canonical_key_order, merge_schemas, serialize
from .xmlingest import QualifiedName, RawText, XmlElement, XSD_NAMESPACE, parse_document

__version__ = "0.1.0"

DRAFT04_SCHEMA_URI = "http://json-schema.org/draft-04/schema#"

__all__ = [
    "DRAFT04_SCHEMA_URI",
    "EncodingError",
    "FactStore",
    "InputError",
    "InvalidOccurs",
    "MalformedXml",
    "MergeConflict",
    "NonNumericFacetValue",
    "QualifiedName",
    "RawText",
    "SchemaValue",
    "StrictModeViolation",
    "TranslationError",
    "TranslationReport",
    "TranslationWarning",
    "XSD_NAMESPACE",
    "XmlElement",
    "Xsd2JsonSchemaError",
    "canonical_key_order",
    "cleanup_at_prefix",
    "convert_primitive_type",
    "flatten",
    "inject_defaults",
    "merge_schemas",
    "parse_document",
    "run_to_fixpoint",
    "serialize",
    "translate",
    "wrap_definitions",
]


@dataclass
class TranslationReport:
    """The produced root schema plus any warnings collected on the way."""

    schema: SchemaValue
    warnings: list[TranslationWarning] = field(default_factory=list)


def translate(
    data: bytes,
    *,
    always_array: bool = False,
    keep_at_prefix: bool = False,
    emit_schema_key: bool = False,
    strict: bool = False,
) -> TranslationReport:
    """Translate one XSD document (as bytes) into a JSON Schema value.

    Raises :class:`InputError` for unreadable XML and
    :class:`TranslationError` when a rule fails; unsupported constructs
    merely produce warnings in the report, unless ``strict`` upgrades
    them to a :class:`StrictModeViolation`.
    """
    store = inject_defaults(flatten(parse_document(data)))
    result = run_to_fixpoint(store, always_array=always_array)
    root = wrap_definitions(store, result.fragments)
    root = cleanup_at_prefix(root, keep=keep_at_prefix)
    warnings = result.warnings + root.warnings
    if strict and warnings:
        raise StrictModeViolation(warnings)
    value = root.value
    if emit_schema_key:
        value = {"$schema": DRAFT04_SCHEMA_URI, **value}
    return TranslationReport(schema=canonical_key_order(value), warnings=warnings)
