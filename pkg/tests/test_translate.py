"""Library-level API tests for the end-to-end translate() entry point."""

from __future__ import annotations

import pytest

from conftest import load_fixture
from xsd2jsonschema import (
    DRAFT04_SCHEMA_URI,
    MalformedXml,
    StrictModeViolation,
    TranslationReport,
    translate,
)


def test_returns_report_with_schema_and_warnings():
    report = translate(load_fixture("percentages.xsd"))
    assert isinstance(report, TranslationReport)
    assert report.schema["type"] == "object"
    assert report.warnings == []


def test_warnings_are_collected_not_raised():
    report = translate(load_fixture("choice.xsd"))
    assert [w.code for w in report.warnings] == ["unsupported-construct"]
    assert report.warnings[0].node_id is not None


def test_strict_raises_with_the_warnings_attached():
    with pytest.raises(StrictModeViolation) as info:
        translate(load_fixture("choice.xsd"), strict=True)
    assert [w.code for w in info.value.warnings] == ["unsupported-construct"]


def test_emit_schema_key_is_first():
    report = translate(load_fixture("percentages.xsd"), emit_schema_key=True)
    assert next(iter(report.schema)) == "$schema"
    assert report.schema["$schema"] == DRAFT04_SCHEMA_URI


def test_keep_at_prefix():
    report = translate(load_fixture("attributes.xsd"), keep_at_prefix=True)
    assert "@id" in report.schema["properties"]


def test_always_array():
    report = translate(load_fixture("occurrences.xsd"), always_array=True)
    assert report.schema["properties"]["opt"]["maxItems"] == 1


def test_input_errors_propagate():
    with pytest.raises(MalformedXml):
        translate(b"<broken")


def test_canonical_key_order_in_output():
    report = translate(load_fixture("percentages.xsd"))
    assert list(report.schema) == ["type", "properties", "required"]
    wrapper = report.schema["properties"]["value"]
    assert list(wrapper) == ["type", "items", "minItems", "maxItems"]
