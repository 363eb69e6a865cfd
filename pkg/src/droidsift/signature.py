"""Dalvik field/method descriptors and API-call signature lists.

Grammar for a single field descriptor::

    FD := 'Z' | 'B' | 'S' | 'C' | 'I' | 'J' | 'F' | 'D' | 'L' name ';' | '[' FD

An API signature is ``<classFD>-><method>`` optionally followed by
``(<FD>*)<FD|V>``.  Without the parenthesised part the signature is a
wildcard matching every overload of the method.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from .errors import DescriptorError, SignatureError, SignatureListError

if TYPE_CHECKING:
    from .logparse import ApiCallRecord

PRIMITIVE_CODES = "ZBSCIJFD"
PRIMITIVE_NAMES = {
    "Z": "boolean",
    "B": "byte",
    "S": "short",
    "C": "char",
    "I": "int",
    "J": "long",
    "F": "float",
    "D": "double",
}
_FORBIDDEN_IN_NAME = re.compile(r"[;()\s]")
_METHOD_RE = re.compile(r"(?:<init>|<clinit>|[A-Za-z_$][\w$]*)\Z")


@dataclass(frozen=True)
class FieldDescriptor:
    """A parsed field type.

    ``element`` holds the primitive code or the slash-separated binary class
    name; ``depth`` counts array dimensions, so ``[[I`` is ``("I", 2)``.
    """

    element: str
    is_class: bool = False
    depth: int = 0

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise DescriptorError("array depth must be non-negative")
        if self.is_class:
            if not self.element or _FORBIDDEN_IN_NAME.search(self.element):
                raise DescriptorError(f"invalid binary class name {self.element!r}")
        elif self.element == "V":
            if self.depth:
                raise DescriptorError("void cannot be an array element")
        elif len(self.element) != 1 or self.element not in PRIMITIVE_CODES:
            raise DescriptorError(f"unknown primitive code {self.element!r}")

    @classmethod
    def primitive(cls, code: str) -> FieldDescriptor:
        return cls(code)

    @classmethod
    def of_class(cls, name: str) -> FieldDescriptor:
        return cls(name, is_class=True)

    def array_of(self, depth: int = 1) -> FieldDescriptor:
        return FieldDescriptor(self.element, self.is_class, self.depth + depth)

    @property
    def kind(self) -> str:
        if self.depth:
            return "array"
        if self.is_class:
            return "class"
        return "void" if self.element == "V" else "primitive"

    @property
    def is_void(self) -> bool:
        return self.element == "V" and not self.is_class

    @property
    def component(self) -> FieldDescriptor:
        """The non-array element type."""
        return FieldDescriptor(self.element, self.is_class)

    def __str__(self) -> str:
        return render_field_descriptor(self)


VOID = FieldDescriptor("V")


def render_field_descriptor(fd: FieldDescriptor) -> str:
    base = f"L{fd.element};" if fd.is_class else fd.element
    return "[" * fd.depth + base


def _read_descriptor(text: str, pos: int) -> tuple[FieldDescriptor, int]:
    depth = 0
    n = len(text)
    while pos < n and text[pos] == "[":
        depth += 1
        pos += 1
    if pos >= n:
        raise DescriptorError("descriptor ends before element type" if depth else "empty descriptor")
    ch = text[pos]
    if ch == "L":
        end = text.find(";", pos + 1)
        if end < 0:
            raise DescriptorError(f"unterminated class descriptor in {text!r}")
        return FieldDescriptor(text[pos + 1 : end], True, depth), end + 1
    if ch in PRIMITIVE_CODES:
        return FieldDescriptor(ch, False, depth), pos + 1
    raise DescriptorError(f"unknown primitive code {ch!r} at offset {pos}")


def parse_field_descriptor(text: str) -> FieldDescriptor:
    """Parse one complete descriptor token; any trailing text is an error."""
    if not text:
        raise DescriptorError("empty descriptor")
    fd, end = _read_descriptor(text, 0)
    if end != len(text):
        raise DescriptorError(f"trailing garbage {text[end:]!r} after descriptor")
    return fd


def parse_return_descriptor(text: str) -> FieldDescriptor:
    if text == "V":
        return VOID
    return parse_field_descriptor(text)


def parse_descriptor_list(text: str) -> tuple[FieldDescriptor, ...]:
    out = []
    pos = 0
    while pos < len(text):
        fd, pos = _read_descriptor(text, pos)
        out.append(fd)
    return tuple(out)


@dataclass(frozen=True)
class ApiSignature:
    owner: FieldDescriptor
    method: str
    params: tuple[FieldDescriptor, ...] | None = None
    returns: FieldDescriptor | None = None

    def __post_init__(self) -> None:
        if self.owner.kind != "class":
            raise SignatureError("signature owner must be a class descriptor")
        if not _METHOD_RE.match(self.method):
            raise SignatureError(f"invalid method name {self.method!r}")
        if (self.params is None) != (self.returns is None):
            raise SignatureError("params and return must be both present or both absent")
        if self.params is not None:
            object.__setattr__(self, "params", tuple(self.params))
            if any(p.is_void for p in self.params):
                raise SignatureError("void is not a parameter type")

    @property
    def is_wildcard(self) -> bool:
        return self.params is None

    @property
    def key(self) -> tuple[str, str]:
        return (self.owner.element, self.method)

    def __str__(self) -> str:
        return render_api_signature(self)


def parse_api_signature(text: str) -> ApiSignature:
    text = text.strip()
    if not text.startswith("L"):
        raise SignatureError(f"expected class descriptor at start of {text!r}")
    semi = text.find(";")
    if semi < 0:
        raise SignatureError(f"unterminated class descriptor in {text!r}")
    if text[semi + 1 : semi + 3] != "->":
        raise SignatureError(f"missing '->' in {text!r}")
    try:
        owner = parse_field_descriptor(text[: semi + 1])
    except DescriptorError as exc:
        raise SignatureError(str(exc)) from exc
    rest = text[semi + 3 :]
    paren = rest.find("(")
    if paren < 0:
        method, params, returns = rest, None, None
    else:
        method = rest[:paren]
        close = rest.find(")", paren)
        if close < 0:
            raise SignatureError(f"unbalanced parentheses in {text!r}")
        try:
            params = parse_descriptor_list(rest[paren + 1 : close])
            returns = parse_return_descriptor(rest[close + 1 :])
        except DescriptorError as exc:
            raise SignatureError(f"malformed descriptor: {exc}") from exc
    if not method:
        raise SignatureError("empty method name")
    return ApiSignature(owner, method, params, returns)


def render_api_signature(sig: ApiSignature) -> str:
    head = f"{render_field_descriptor(sig.owner)}->{sig.method}"
    if sig.params is None:
        return head
    params = "".join(render_field_descriptor(p) for p in sig.params)
    return f"{head}({params}){render_field_descriptor(sig.returns)}"


@dataclass(frozen=True)
class SignatureSet:
    """Signatures with dense ids in insertion order, indexed by (class, method)."""

    entries: tuple[ApiSignature, ...] = ()
    _by_key: dict[tuple[str, str], tuple[int, ...]] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if len(set(entries)) != len(entries):
            raise SignatureError("duplicate signature in set")
        index: dict[tuple[str, str], list[int]] = {}
        for i, sig in enumerate(entries):
            index.setdefault(sig.key, []).append(i)
        self._by_key.update({k: tuple(v) for k, v in index.items()})

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, sid: int) -> ApiSignature:
        return self.entries[sid]

    def __iter__(self):
        return iter(enumerate(self.entries))

    def ids_for(self, owner: str, method: str) -> tuple[int, ...]:
        return self._by_key.get((owner, method), ())

    def extended(self, more: Iterable[ApiSignature]) -> SignatureSet:
        return SignatureSet(self.entries + tuple(more))

    def match(self, call: ApiCallRecord) -> int | None:
        candidates = self._by_key.get((call.owner.element, call.method))
        if not candidates:
            return None
        wildcard = None
        params = call.param_types
        for sid in candidates:
            sig = self.entries[sid]
            if sig.is_wildcard:
                if wildcard is None:
                    wildcard = sid
            elif call.returns is not None and sig.params == params and sig.returns == call.returns:
                return sid
        return wildcard


def match_call(signatures: SignatureSet, call: ApiCallRecord) -> int | None:
    """Id of the signature a logged call maps to, exact entries taking precedence."""
    return signatures.match(call)


def load_signature_list(source: str) -> SignatureSet:
    """Parse a line-oriented signature list (``#`` comments, blank lines ignored)."""
    if source.startswith("\ufeff"):
        source = source[1:]
    entries: list[ApiSignature] = []
    seen: dict[ApiSignature, int] = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            sig = parse_api_signature(line)
        except SignatureError as exc:
            raise SignatureListError(str(exc), lineno) from exc
        if sig in seen:
            first = seen[sig]
            raise SignatureListError(
                f"duplicate signature (first listed at line {first})", lineno, first
            )
        seen[sig] = lineno
        entries.append(sig)
    return SignatureSet(tuple(entries))


def load_signature_file(path: str | Path) -> SignatureSet:
    return load_signature_list(Path(path).read_text(encoding="utf-8"))


def default_signature_text() -> str:
    return resources.files("droidsift").joinpath("data/default_signatures.txt").read_text("utf-8")


def default_signatures() -> SignatureSet:
    return load_signature_list(default_signature_text())
