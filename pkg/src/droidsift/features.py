"""Feature catalog and per-app feature vectors.

A catalog unifies three feature sources: behaviour-report sections,
broadcast events extracted from ``recvaction``, and API calls matched
against a signature set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Sequence

from .errors import CatalogError
from .logparse import ApiCallRecord, BehaviorReport, extract_intent_actions
from .signature import SignatureSet, render_api_signature
from .taxonomy import API_FEATURE_BINDINGS, FEATURE_ALIASES, INTENT_EVENTS, REPORT_KEYS


class FeatureKind(str, Enum):
    REPORT_KEY = "report-key"
    INTENT_ACTION = "intent-action"
    API_CALL = "api-call"


@dataclass(frozen=True)
class FeatureDef:
    name: str
    kind: FeatureKind
    matcher: str | tuple[int, ...]

    def to_json(self, signatures: SignatureSet | None = None) -> dict[str, Any]:
        doc: dict[str, Any] = {"name": self.name, "kind": self.kind.value}
        if self.kind is FeatureKind.API_CALL:
            doc["matcher"] = list(self.matcher)
            if signatures is not None:
                doc["signatures"] = [render_api_signature(signatures[i]) for i in self.matcher]
        else:
            doc["matcher"] = self.matcher
        return doc


@dataclass(frozen=True)
class FeatureCatalog:
    defs: tuple[FeatureDef, ...]
    signature_set: SignatureSet
    _index: dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)
    _by_report_key: dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)
    _by_event: dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)
    _by_signature: dict[int, tuple[int, ...]] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "defs", tuple(self.defs))
        sig_map: dict[int, list[int]] = {}
        for i, d in enumerate(self.defs):
            folded = d.name.casefold()
            if not d.name or "," in d.name or any(c.isspace() for c in d.name):
                raise CatalogError(f"feature name {d.name!r} must be non-empty, without commas or spaces")
            if folded in self._index:
                raise CatalogError(f"duplicate feature name {d.name!r}")
            self._index[folded] = i
            if d.kind is FeatureKind.REPORT_KEY:
                if d.matcher not in REPORT_KEYS:
                    raise CatalogError(f"{d.name}: unknown report key {d.matcher!r}")
                self._by_report_key[d.matcher] = i
            elif d.kind is FeatureKind.INTENT_ACTION:
                if d.matcher not in INTENT_EVENTS:
                    raise CatalogError(f"{d.name}: unknown broadcast event {d.matcher!r}")
                self._by_event[d.matcher] = i
            else:
                if not d.matcher:
                    raise CatalogError(f"{d.name}: api-call feature needs at least one signature")
                for sid in d.matcher:
                    if not 0 <= sid < len(self.signature_set):
                        raise CatalogError(f"{d.name}: signature id {sid} not in signature set")
                    sig_map.setdefault(sid, []).append(i)
        self._by_signature.update({k: tuple(v) for k, v in sig_map.items()})

    def __len__(self) -> int:
        return len(self.defs)

    def __iter__(self):
        return iter(self.defs)

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.defs]

    def index(self, name: str) -> int:
        """Position of a feature by name (case-insensitive; alternate spellings accepted)."""
        name = FEATURE_ALIASES.get(name, name)
        try:
            return self._index[name.casefold()]
        except KeyError:
            raise KeyError(f"unknown feature {name!r}") from None

    def __contains__(self, name: str) -> bool:
        try:
            self.index(name)
        except KeyError:
            return False
        return True

    def feature_for_report_key(self, key: str) -> int | None:
        return self._by_report_key.get(key)

    def feature_for_event(self, event: str) -> int | None:
        return self._by_event.get(event)

    def features_for_signature(self, sid: int) -> tuple[int, ...]:
        return self._by_signature.get(sid, ())

    def to_json(self) -> list[dict[str, Any]]:
        return [d.to_json(self.signature_set) for d in self.defs]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def catalog_from_json(doc: Sequence[dict[str, Any]], signature_set: SignatureSet) -> FeatureCatalog:
    """Rebuild a pinned catalog, checking any recorded signature texts still line up."""
    defs = []
    for item in doc:
        try:
            kind = FeatureKind(item["kind"])
            name = item["name"]
            matcher = item["matcher"]
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogError(f"malformed catalog entry {item!r}") from exc
        if kind is FeatureKind.API_CALL:
            matcher = tuple(int(i) for i in matcher)
            for sid, text in zip(matcher, item.get("signatures", ())):
                if sid < len(signature_set) and render_api_signature(signature_set[sid]) != text:
                    raise CatalogError(f"{name}: signature id {sid} no longer denotes {text}")
        defs.append(FeatureDef(name, kind, matcher))
    return FeatureCatalog(tuple(defs), signature_set)


def load_catalog(text: str, signature_set: SignatureSet) -> FeatureCatalog:
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise CatalogError(f"malformed catalog JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise CatalogError("catalog must be a JSON array")
    return catalog_from_json(doc, signature_set)


def default_catalog(signature_set: SignatureSet) -> FeatureCatalog:
    defs = [FeatureDef(k, FeatureKind.REPORT_KEY, k) for k in REPORT_KEYS]
    defs += [FeatureDef(e, FeatureKind.INTENT_ACTION, e) for e in INTENT_EVENTS]
    missing = []
    for name, keys in API_FEATURE_BINDINGS:
        ids = tuple(sorted(sid for owner, method in keys for sid in signature_set.ids_for(owner, method)))
        if not ids:
            missing.append(name)
            continue
        defs.append(FeatureDef(name, FeatureKind.API_CALL, ids))
    if missing:
        raise CatalogError("no signatures for api-call features: " + ", ".join(missing))
    return FeatureCatalog(tuple(defs), signature_set)


@dataclass(frozen=True)
class FeatureVector:
    counts: tuple[int, ...]
    app_id: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError("feature counts must be non-negative")

    def __len__(self) -> int:
        return len(self.counts)

    def __getitem__(self, i: int) -> int:
        return self.counts[i]

    def __add__(self, other: FeatureVector) -> FeatureVector:
        if len(other) != len(self):
            raise ValueError("vector lengths differ")
        return FeatureVector(tuple(a + b for a, b in zip(self.counts, other.counts)), self.app_id)

    def as_dict(self, catalog: FeatureCatalog, nonzero: bool = True) -> dict[str, int]:
        return {d.name: c for d, c in zip(catalog.defs, self.counts) if c or not nonzero}


def extract_features(
    report: BehaviorReport,
    calls: Iterable[ApiCallRecord],
    catalog: FeatureCatalog,
    app_id: str = "",
) -> FeatureVector:
    counts = [0] * len(catalog)
    for key, entries in report.sections.items():
        idx = catalog.feature_for_report_key(key)
        if idx is not None:
            counts[idx] += len(entries)
    for action in extract_intent_actions(report):
        if action.canonical is not None:
            idx = catalog.feature_for_event(action.canonical)
            if idx is not None:
                counts[idx] += 1
    sigs = catalog.signature_set
    for call in calls:
        sid = sigs.match(call)
        if sid is not None:
            for idx in catalog.features_for_signature(sid):
                counts[idx] += 1
    return FeatureVector(tuple(counts), app_id)


def binarize(v: FeatureVector) -> FeatureVector:
    return FeatureVector(tuple(min(c, 1) for c in v.counts), v.app_id)
