"""Namespace-aware XML ingestion.

Parses an XSD document (which is itself XML) into an immutable element
tree. Namespace prefixes are resolved away at parse time: every element
name becomes a :class:`QualifiedName` carrying the full namespace URI,
and ``xmlns``/``xmlns:*`` declarations are consumed (they are kept on
the element as ``namespace_decls`` so that prefixed attribute *values*
such as ``type="xs:string"`` can be resolved later, but they never
appear as ordinary attributes).
"""

from __future__ import annotations

import xml.parsers.expat as expat
from dataclasses import dataclass, field

from .errors import EncodingError, MalformedXml

XSD_NAMESPACE = "http://www.w3.org/2001/XMLSchema"
XML_NAMESPACE = "http://www.w3.org/XML/1998/namespace"


@dataclass(frozen=True)
class QualifiedName:
    """An XML name paired with its namespace URI.

    An empty ``namespace_uri`` means "no namespace". Prefixes are
    resolved away before construction and never stored.
    """

    namespace_uri: str
    local_name: str

    def __post_init__(self):
        if not self.local_name:
            raise ValueError("local name must be non-empty")
        if ":" in self.local_name or any(c.isspace() for c in self.local_name):
            raise ValueError(f"invalid local name: {self.local_name!r}")

    def __str__(self) -> str:
        if self.namespace_uri:
            return f"{{{self.namespace_uri}}}{self.local_name}"
        return self.local_name


@dataclass(frozen=True)
class RawText:
    """A non-whitespace text child, surrounding whitespace trimmed."""

    text: str


@dataclass(frozen=True)
class XmlElement:
    """One element of the parsed tree.

    ``attributes`` preserves document order and excludes namespace
    declarations; keys of foreign-namespaced attributes use Clark
    notation (``{uri}local``). ``namespace_decls`` lists the prefix
    bindings declared lexically on this element (prefix ``""`` is the
    default namespace; URI ``""`` undeclares).
    """

    name: QualifiedName
    attributes: tuple[tuple[str, str], ...] = ()
    children: tuple["XmlElement | RawText", ...] = ()
    namespace_decls: tuple[tuple[str, str], ...] = ()


@dataclass
class _Frame:
    name: QualifiedName
    attributes: tuple[tuple[str, str], ...]
    namespace_decls: tuple[tuple[str, str], ...]
    children: list = field(default_factory=list)


_ACCEPTED_ENCODINGS = {"utf-8", "utf8"}


def _split_expat_name(name: str) -> tuple[str, str]:
    # expat reports namespaced names as "uri local" (separator is a space)
    if " " in name:
        uri, local = name.rsplit(" ", 1)
        return uri, local
    return "", name


class _TreeBuilder:
    def __init__(self):
        self.root: XmlElement | None = None
        self._stack: list[_Frame] = []
        self._text: list[str] = []
        self._pending_decls: list[tuple[str, str]] = []

    def xml_decl(self, version, encoding, standalone):
        if encoding is not None and encoding.lower() not in _ACCEPTED_ENCODINGS:
            raise EncodingError(f"unsupported declared encoding: {encoding}")

    def namespace_decl(self, prefix, uri):
        self._pending_decls.append((prefix or "", uri or ""))

    def start_element(self, name, ordered_attrs):
        self._flush_text()
        uri, local = _split_expat_name(name)
        attrs = []
        for i in range(0, len(ordered_attrs), 2):
            key = ordered_attrs[i]
            if " " in key:
                auri, alocal = key.rsplit(" ", 1)
                key = f"{{{auri}}}{alocal}"
            attrs.append((key, ordered_attrs[i + 1]))
        self._stack.append(
            _Frame(
                name=QualifiedName(uri, local),
                attributes=tuple(attrs),
                namespace_decls=tuple(self._pending_decls),
            )
        )
        self._pending_decls = []

    def end_element(self, name):
        self._flush_text()
        frame = self._stack.pop()
        element = XmlElement(
            name=frame.name,
            attributes=frame.attributes,
            children=tuple(frame.children),
            namespace_decls=frame.namespace_decls,
        )
        if self._stack:
            self._stack[-1].children.append(element)
        else:
            self.root = element

    def character_data(self, data):
        # expat may deliver one text node in several chunks
        self._text.append(data)

    def _flush_text(self):
        if not self._text:
            return
        text = "".join(self._text).strip()
        self._text = []
        if text and self._stack:
            self._stack[-1].children.append(RawText(text))


def parse_document(data: bytes) -> XmlElement:
    """Parse a UTF-8 XML document into its root :class:`XmlElement`.

    The XML declaration, comments and processing instructions are
    discarded; whitespace-only text is dropped and remaining text is
    kept verbatim (minus surrounding whitespace) as :class:`RawText`.

    Raises :class:`MalformedXml` for ill-formed input and
    :class:`EncodingError` for invalid UTF-8 or a declared non-UTF-8
    encoding.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"input is not valid UTF-8: {exc}") from None
    text = text.removeprefix("﻿")

    builder = _TreeBuilder()
    parser = expat.ParserCreate(namespace_separator=" ")
    parser.ordered_attributes = True
    parser.buffer_text = True
    parser.XmlDeclHandler = builder.xml_decl
    parser.StartNamespaceDeclHandler = builder.namespace_decl
    parser.StartElementHandler = builder.start_element
    parser.EndElementHandler = builder.end_element
    parser.CharacterDataHandler = builder.character_data

    try:
        parser.Parse(text, True)
    except expat.ExpatError as exc:
        raise MalformedXml(
            (exc.lineno, exc.offset + 1), expat.errors.messages[exc.code]
        ) from None

    if builder.root is None:
        raise MalformedXml((1, 1), "no element found")
    return builder.root
