"""Exception hierarchy and warning records shared across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass


class Xsd2JsonSchemaError(Exception):
    """Base class for all errors raised by this package."""


class InputError(Xsd2JsonSchemaError):
    """The XSD input could not be read (CLI exit code 1)."""


class MalformedXml(InputError):
    """Ill-formed XML input.

    ``position`` is a ``(line, column)`` pair, 1-based line numbers.
    """

    def __init__(self, position: tuple[int, int], message: str):
        self.position = position
        self.message = message
        super().__init__(f"{message} at line {position[0]}, column {position[1]}")


class EncodingError(InputError):
    """Input is not valid UTF-8, or declares a non-UTF-8 encoding."""


class TranslationError(Xsd2JsonSchemaError):
    """Translation failed on valid XML input (CLI exit code 2).

    ``rule`` and ``node_ids`` identify the firing that raised, when known.
    """

    rule: str | None = None
    node_ids: tuple[int, ...] = ()


class MergeConflict(TranslationError):
    """Two schema fragments disagree on the same key."""

    def __init__(self, path: tuple[str, ...], a, b):
        self.path = path
        self.a = a
        self.b = b
        joined = "/".join(path) or "(root)"
        super().__init__(f"conflicting values at {joined!r}: {a!r} vs {b!r}")


class InvalidOccurs(TranslationError):
    """minOccurs/maxOccurs is neither a nonnegative integer nor 'unbounded'."""


class NonNumericFacetValue(TranslationError):
    """A numeric constraining facet carries a non-numeric value."""


class StrictModeViolation(TranslationError):
    """Warnings were produced while running in strict mode."""

    def __init__(self, warnings):
        self.warnings = list(warnings)
        noun = "warning" if len(self.warnings) == 1 else "warnings"
        super().__init__(f"{len(self.warnings)} {noun} upgraded to errors in strict mode")


class UnknownId(Xsd2JsonSchemaError):
    """A node identifier does not exist in the fact store."""


class AmbiguousAttribute(Xsd2JsonSchemaError):
    """Two attribute facts for the same (node, key) survived the defaults
    stage; indicates an engine bug."""


@dataclass(frozen=True)
class TranslationWarning:
    """A non-fatal diagnostic: a skipped or unsupported construct."""

    code: str
    message: str
    node_id: int | None = None

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"
