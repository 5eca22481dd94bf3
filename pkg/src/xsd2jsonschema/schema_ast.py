"""JSON Schema value model, fragment merging and serialization.

Schema values are plain Python data: ``dict`` (key order preserved),
``list``, ``str``, ``int``/``Decimal`` (never ``float``, so numeric
values survive round-trips exactly), ``bool`` and ``None``. Everything
here treats values as immutable.
"""

from __future__ import annotations

from decimal import Decimal
from typing import Union

from .errors import MergeConflict

SchemaValue = Union[dict, list, str, int, Decimal, bool, None]

# Key order used for emitted schema documents; remaining keys keep
# their insertion order after these. "$schema" leads when present.
CANONICAL_KEY_ORDER: tuple[str, ...] = (
    "$schema",
    "type",
    "properties",
    "items",
    "minItems",
    "maxItems",
    "minimum",
    "maximum",
    "exclusiveMinimum",
    "exclusiveMaximum",
    "enum",
    "pattern",
    "minLength",
    "maxLength",
    "required",
    "definitions",
)

_CANONICAL_RANK = {key: i for i, key in enumerate(CANONICAL_KEY_ORDER)}


def _kind(value: SchemaValue) -> str:
    if isinstance(value, dict):
        return "object"
    if isinstance(value, list):
        return "array"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, Decimal)):
        return "number"
    if isinstance(value, str):
        return "string"
    if value is None:
        return "null"
    raise TypeError(f"not a schema value: {value!r}")


def schema_equal(a: SchemaValue, b: SchemaValue) -> bool:
    """Structural equality: object key order is ignored, array order is
    significant, booleans never equal numbers."""
    kind = _kind(a)
    if kind != _kind(b):
        return False
    if kind == "object":
        if set(a) != set(b):
            return False
        return all(schema_equal(a[k], b[k]) for k in a)
    if kind == "array":
        return len(a) == len(b) and all(schema_equal(x, y) for x, y in zip(a, b))
    return a == b


def merge_schemas(a: SchemaValue, b: SchemaValue) -> SchemaValue:
    """Deep-merge two schema objects into a new object.

    Disjoint keys are unioned (a's keys first, then b's new keys in
    order); objects merge recursively; arrays concatenate with
    duplicates removed (first occurrence wins); equal scalars collapse.
    Anything else raises :class:`MergeConflict` — in this pipeline two
    fragments disagreeing on a scalar always means a buggy rule pair,
    so the conflict is a hard error rather than last-wins.
    """
    if not isinstance(a, dict) or not isinstance(b, dict):
        raise TypeError("merge_schemas expects two objects at the top level")
    return _merge(a, b, ())


def _merge(a: SchemaValue, b: SchemaValue, path: tuple[str, ...]) -> SchemaValue:
    a_kind, b_kind = _kind(a), _kind(b)
    if a_kind == "object" and b_kind == "object":
        out = {}
        for key, value in a.items():
            out[key] = _merge(value, b[key], path + (key,)) if key in b else value
        for key, value in b.items():
            if key not in a:
                out[key] = value
        return out
    if a_kind == "array" and b_kind == "array":
        out = list(a)
        for item in b:
            if not any(schema_equal(item, seen) for seen in out):
                out.append(item)
        return out
    if a_kind == b_kind and a_kind not in ("object", "array") and schema_equal(a, b):
        return a
    raise MergeConflict(path, a, b)


def canonical_key_order(value: SchemaValue) -> SchemaValue:
    """Recursively reorder object keys into the canonical emission order."""
    if isinstance(value, dict):
        keys = sorted(value, key=lambda k: _CANONICAL_RANK.get(k, len(_CANONICAL_RANK)))
        return {k: canonical_key_order(value[k]) for k in keys}
    if isinstance(value, list):
        return [canonical_key_order(item) for item in value]
    return value


_STRING_ESCAPES = {
    '"': '\\"',
    "\\": "\\\\",
    "\b": "\\b",
    "\f": "\\f",
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def _escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[ch])
        elif ch < "\x20":
            out.append(f"\\u{ord(ch):04x}")
        else:
            # non-ASCII passes through; output is UTF-8
            out.append(ch)
    return "".join(out)


def _format_number(value) -> str:
    if isinstance(value, int):
        return str(value)
    if value == value.to_integral_value():
        return str(int(value))
    return format(value, "f")


def serialize(value: SchemaValue, pretty: bool = True, indent: int = 2) -> str:
    """Render a schema value as JSON text.

    Object key order equals insertion order. Pretty mode puts each
    member on its own line with the given indent; compact mode has no
    insignificant whitespace. Integral numbers print without exponent
    or fraction.
    """
    pieces: list[str] = []
    _write(value, pieces, 0, pretty, indent)
    return "".join(pieces)


def _write(value: SchemaValue, out: list[str], level: int, pretty: bool, indent: int) -> None:
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        open_, close, sep, colon, pad, endpad = _punct("{", "}", level, pretty, indent)
        out.append(open_)
        for i, (key, member) in enumerate(value.items()):
            if i:
                out.append(sep)
            out.append(f'{pad}"{_escape_string(key)}"{colon}')
            _write(member, out, level + 1, pretty, indent)
        out.append(endpad + close)
    elif isinstance(value, list):
        if not value:
            out.append("[]")
            return
        open_, close, sep, _, pad, endpad = _punct("[", "]", level, pretty, indent)
        out.append(open_)
        for i, item in enumerate(value):
            if i:
                out.append(sep)
            out.append(pad)
            _write(item, out, level + 1, pretty, indent)
        out.append(endpad + close)
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, (int, Decimal)):
        out.append(_format_number(value))
    elif isinstance(value, str):
        out.append(f'"{_escape_string(value)}"')
    elif value is None:
        out.append("null")
    else:
        raise TypeError(f"not a schema value: {value!r}")


def _punct(open_: str, close: str, level: int, pretty: bool, indent: int):
    if pretty:
        pad = "\n" + " " * (indent * (level + 1))
        endpad = "\n" + " " * (indent * level)
        return open_, close, ",", ": ", pad, endpad
    return open_, close, ",", ":", "", ""
