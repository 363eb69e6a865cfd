"""Parsers for session log streams, API-call payloads and behaviour reports.

Session log lines follow ``<t_ms> <TAG>: <payload>``.  Two tags are
reserved: ``ApiMonitor`` lines carry instrumented API-call payloads and
``DroidBox`` lines carry JSON fragments merged into the behaviour report.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import DescriptorError, LogStreamError, PayloadError, ReportError
from .signature import (
    FieldDescriptor,
    parse_field_descriptor,
    parse_return_descriptor,
    render_field_descriptor,
)
from .taxonomy import INTENT_EVENTS, REPORT_KEYS, canonical_event

API_TAG = "ApiMonitor"
REPORT_TAG = "DroidBox"

_LINE_RE = re.compile(r"(\d+) ([^\s:]+):(?: (.*))?\Z", re.DOTALL)
_METHOD_RE = re.compile(r"(?:<init>|<clinit>|[A-Za-z_$][\w$]*)\Z")


@dataclass(frozen=True)
class LogEntry:
    timestamp: int
    tag: str
    payload: str

    def render(self) -> str:
        return f"{self.timestamp} {self.tag}: {self.payload}"


def parse_logcat_line(line: str) -> LogEntry | None:
    m = _LINE_RE.match(line.rstrip("\r\n"))
    if m is None:
        return None
    return LogEntry(int(m.group(1)), m.group(2), m.group(3) or "")


def parse_log_stream(lines: Iterable[str]) -> list[LogEntry]:
    """Parse one session's lines in order, skipping lines outside the grammar."""
    entries: list[LogEntry] = []
    for lineno, line in enumerate(lines, start=1):
        entry = parse_logcat_line(line)
        if entry is None:
            continue
        if entries and entry.timestamp < entries[-1].timestamp:
            raise LogStreamError(
                f"line {lineno}: timestamp {entry.timestamp} precedes {entries[-1].timestamp}"
            )
        entries.append(entry)
    return entries


@dataclass(frozen=True)
class CallArg:
    descriptor: FieldDescriptor
    value: str


@dataclass(frozen=True)
class ApiCallRecord:
    owner: FieldDescriptor
    method: str
    args: tuple[CallArg, ...] = ()
    returns: FieldDescriptor | None = None
    return_value: str | None = None

    @property
    def param_types(self) -> tuple[FieldDescriptor, ...]:
        return tuple(a.descriptor for a in self.args)

    def render(self) -> str:
        return render_api_call(self)


def _squash(text: str) -> str:
    return "".join(text.split())


def _descriptor(text: str, what: str) -> FieldDescriptor:
    try:
        return parse_field_descriptor(_squash(text))
    except DescriptorError as exc:
        raise PayloadError(f"malformed {what} descriptor: {exc}") from exc


def parse_api_call_payload(payload: str) -> ApiCallRecord:
    """Parse ``<classFD>-><method>(<FD>:=<value>|...)<retFD|V>[:=<value>]``.

    Whitespace around tokens is tolerated; argument and return values are
    kept verbatim apart from trimming.  Argument values may not contain
    ``|`` and their parentheses must balance.
    """
    text = payload.strip()
    arrow = text.find("->")
    if arrow < 0:
        raise PayloadError("missing '->' between class and method")
    owner = _descriptor(text[:arrow], "class")
    if owner.kind != "class":
        raise PayloadError(f"call owner {render_field_descriptor(owner)!r} is not a class")
    rest = text[arrow + 2 :]
    open_at = rest.find("(")
    if open_at < 0:
        raise PayloadError("missing argument list")
    method = rest[:open_at].strip()
    if not _METHOD_RE.match(method):
        raise PayloadError(f"invalid method name {method!r}")

    depth = 0
    close_at = -1
    for i in range(open_at, len(rest)):
        ch = rest[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                close_at = i
                break
    if close_at < 0:
        raise PayloadError("unbalanced parentheses in argument list")

    inner = rest[open_at + 1 : close_at]
    args: list[CallArg] = []
    if inner.strip():
        for position, piece in enumerate(inner.split("|"), start=1):
            fd_text, sep, value = piece.partition(":=")
            if not sep:
                raise PayloadError(
                    f"argument {position} has no ':=' binding (values containing '|' are unsupported)"
                )
            args.append(CallArg(_descriptor(fd_text, f"argument {position}"), value.strip()))

    tail = rest[close_at + 1 :]
    ret_text, sep, ret_value = tail.partition(":=")
    ret_text = _squash(ret_text)
    if not ret_text:
        raise PayloadError("missing return descriptor")
    try:
        returns = parse_return_descriptor(ret_text)
    except DescriptorError as exc:
        raise PayloadError(f"malformed return descriptor: {exc}") from exc
    if sep and returns.is_void:
        raise PayloadError("void return cannot carry a value")
    return ApiCallRecord(owner, method, tuple(args), returns, ret_value.strip() if sep else None)


def render_api_call(record: ApiCallRecord) -> str:
    args = "|".join(f"{render_field_descriptor(a.descriptor)}:={a.value}" for a in record.args)
    out = f"{render_field_descriptor(record.owner)}->{record.method}({args})"
    if record.returns is not None:
        out += render_field_descriptor(record.returns)
        if record.return_value is not None:
            out += f":={record.return_value}"
    return out


@dataclass(frozen=True)
class Hashes:
    md5: str | None = None
    sha1: str | None = None
    sha256: str | None = None

    def to_json(self) -> dict[str, str]:
        return {k: v for k, v in (("md5", self.md5), ("sha1", self.sha1), ("sha256", self.sha256)) if v}


@dataclass
class BehaviorReport:
    """Per-session sandbox report.

    ``sections`` maps each recognised report key to its entries; the
    ``recvaction`` section holds ``(receiver, action)`` pairs.  Keys present
    in the input are kept even when empty, and unrecognised top-level keys
    land in ``extras``.
    """

    hashes: Hashes | None = None
    sections: dict[str, list[Any]] = field(default_factory=dict)
    extras: dict[str, Any] = field(default_factory=dict)

    def section(self, key: str) -> list[Any]:
        return self.sections.get(key, [])

    @property
    def recvaction(self) -> list[tuple[str, str]]:
        return self.sections.get("recvaction", [])

    def is_empty(self) -> bool:
        return self.hashes is None and not self.extras and not any(self.sections.values())

    def merged(self, other: BehaviorReport) -> BehaviorReport:
        sections = {k: list(v) for k, v in self.sections.items()}
        for key, entries in other.sections.items():
            sections.setdefault(key, []).extend(entries)
        return BehaviorReport(self.hashes or other.hashes, sections, {**self.extras, **other.extras})

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {}
        if self.hashes is not None:
            doc["hashes"] = self.hashes.to_json()
        for key in REPORT_KEYS:
            if key not in self.sections:
                continue
            entries = self.sections[key]
            if key == "recvaction":
                receivers = [r for r, _ in entries]
                if len(set(receivers)) == len(receivers):
                    doc[key] = {r: a for r, a in entries}
                else:
                    doc[key] = [[r, a] for r, a in entries]
            else:
                doc[key] = list(entries)
        doc.update(self.extras)
        return doc


def _parse_hashes(value: Any) -> Hashes:
    if isinstance(value, list):
        if len(value) > 3 or not all(isinstance(v, str) for v in value):
            raise ReportError("hashes list must hold up to three strings (md5, sha1, sha256)")
        return Hashes(*value)
    if isinstance(value, dict):
        unknown = set(value) - {"md5", "sha1", "sha256"}
        if unknown or not all(isinstance(v, str) for v in value.values()):
            raise ReportError("hashes object must map md5/sha1/sha256 to strings")
        return Hashes(value.get("md5"), value.get("sha1"), value.get("sha256"))
    raise ReportError("hashes must be a list or an object")


def _parse_recvaction(value: Any) -> list[tuple[str, str]]:
    if isinstance(value, dict):
        if not all(isinstance(v, str) for v in value.values()):
            raise ReportError("recvaction must map receiver classes to action strings")
        return list(value.items())
    if isinstance(value, list):
        pairs = []
        for item in value:
            if not (isinstance(item, list) and len(item) == 2 and all(isinstance(s, str) for s in item)):
                raise ReportError("recvaction array entries must be [receiver, action] string pairs")
            pairs.append((item[0], item[1]))
        return pairs
    raise ReportError("recvaction must be an object or an array of pairs")


def report_from_object(doc: Any) -> BehaviorReport:
    if not isinstance(doc, dict):
        raise ReportError("behaviour report must be a JSON object")
    report = BehaviorReport()
    for raw_key, value in doc.items():
        lowered = raw_key.lower()
        key = lowered if lowered in REPORT_KEYS else None
        if lowered == "hashes":
            report.hashes = _parse_hashes(value)
        elif key == "recvaction":
            report.sections.setdefault(key, []).extend(_parse_recvaction(value))
        elif key is not None:
            if isinstance(value, dict):
                # sandbox reports key entries by timestamp
                entries = list(value.values())
            elif isinstance(value, list):
                entries = list(value)
            else:
                raise ReportError(f"section {raw_key!r} must be a list or an object")
            report.sections.setdefault(key, []).extend(entries)
        else:
            report.extras[raw_key] = value
    return report


def parse_behavior_report(doc: str | bytes) -> BehaviorReport:
    try:
        obj = json.loads(doc)
    except (ValueError, RecursionError) as exc:
        raise ReportError(f"malformed JSON: {exc}") from exc
    return report_from_object(obj)


@dataclass(frozen=True)
class IntentAction:
    raw: str
    receiver: str | None = None
    canonical: str | None = None
    group: str | None = None


def classify_action(raw: str, receiver: str | None = None) -> IntentAction:
    event = canonical_event(raw)
    return IntentAction(raw, receiver, event, INTENT_EVENTS[event] if event else None)


def extract_intent_actions(report: BehaviorReport) -> list[IntentAction]:
    return [classify_action(action, receiver) for receiver, action in report.recvaction]
