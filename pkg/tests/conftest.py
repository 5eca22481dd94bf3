from __future__ import annotations

import json
import sys
from decimal import Decimal
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> bytes:
    return (FIXTURES / name).read_bytes()


def parse_json(text: str):
    """Reparse serialized output without float corruption."""
    return json.loads(text, parse_float=Decimal)


def eq_ignoring_order(a, b) -> bool:
    """Structural equality ignoring object key order and array order."""
    from xsd2jsonschema.schema_ast import schema_equal

    if isinstance(a, dict) and isinstance(b, dict):
        return set(a) == set(b) and all(eq_ignoring_order(a[k], b[k]) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return all(any(eq_ignoring_order(x, y) for y in b) for x in a) and all(
            any(eq_ignoring_order(x, y) for x in a) for y in b
        )
    return schema_equal(a, b)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        outcome = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        sys.stderr.write(f"[acceptance] {name}: {outcome}\n")
