"""Per-app reports, labelled-corpus comparisons and classifier matrices."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import Any, Iterable

from .errors import AggregationError
from .features import FeatureCatalog, FeatureKind, FeatureVector, binarize
from .sandbox import SessionResult

_ID_RE = re.compile(r"[A-Za-z0-9._-]+\Z")
_KIND_KEYS = {
    FeatureKind.REPORT_KEY: "report_key",
    FeatureKind.INTENT_ACTION: "intent_action",
    FeatureKind.API_CALL: "api_call",
}


def format_percentage(count: int, total: int) -> str:
    """``count/total`` as a percentage truncated (not rounded) to two decimals.

    >>> format_percentage(905, 970)
    '93.29'
    >>> format_percentage(0, 970)
    '0'
    """
    if total <= 0:
        raise ValueError("total must be positive")
    if not 0 <= count <= total:
        raise ValueError(f"count {count} outside 0..{total}")
    if count == 0:
        return "0"
    hundredths = count * 10_000 // total
    return f"{hundredths // 100}.{hundredths % 100:02d}"


@dataclass(frozen=True)
class ComparisonRow:
    feature: str
    counts: dict[str, int]
    percentages: dict[str, str]


@dataclass(frozen=True)
class CorpusComparison:
    labels: tuple[str, ...]
    class_sizes: dict[str, int]
    primary_label: str
    rows: tuple[ComparisonRow, ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "primary_label": self.primary_label,
            "class_sizes": dict(self.class_sizes),
            "rows": [
                {"rank": i, "feature": r.feature, "counts": r.counts, "percentages": r.percentages}
                for i, r in enumerate(self.rows, start=1)
            ],
        }

    def render_text(self, nonzero_only: bool = True) -> str:
        rows = [r for r in self.rows if not nonzero_only or any(r.counts.values())]
        header = ["#", "Feature"] + [l.capitalize() for l in self.labels] + [f"% {l.capitalize()}" for l in self.labels]
        body = [
            [str(i), r.feature]
            + [str(r.counts[l]) for l in self.labels]
            + [r.percentages[l] for l in self.labels]
            for i, r in enumerate(rows, start=1)
        ]
        widths = [max(len(row[c]) for row in [header] + body) for c in range(len(header))]
        lines = []
        for row in [header] + body:
            cells = [row[0].rjust(widths[0]), row[1].ljust(widths[1])]
            cells += [cell.rjust(w) for cell, w in zip(row[2:], widths[2:])]
            lines.append("  ".join(cells).rstrip())
        sizes = ", ".join(f"{l}={self.class_sizes[l]}" for l in self.labels)
        return f"class sizes: {sizes}\n" + "\n".join(lines) + "\n"


def aggregate_comparison(
    results: Iterable[SessionResult],
    catalog: FeatureCatalog,
    primary_label: str = "malware",
) -> CorpusComparison:
    """Per-label incidence of every feature over Completed sessions.

    Rows are ordered by the primary label's count, descending; the sort is
    stable so ties keep catalog order.
    """
    sizes: dict[str, int] = {}
    counts: dict[str, list[int]] = {}
    for r in results:
        if not r.completed:
            continue
        if r.label is None:
            raise AggregationError(f"{r.app_id}: completed result has no label")
        if r.features is None or len(r.features) != len(catalog):
            raise AggregationError(f"{r.app_id}: missing feature vector for this catalog")
        sizes[r.label] = sizes.get(r.label, 0) + 1
        totals = counts.setdefault(r.label, [0] * len(catalog))
        for i, c in enumerate(binarize(r.features).counts):
            totals[i] += c
    if not sizes:
        raise AggregationError("no completed results to aggregate")
    if primary_label not in sizes:
        raise AggregationError(f"unknown primary label {primary_label!r}; have {sorted(sizes)}")
    labels = tuple(sorted(sizes))
    rows = [
        ComparisonRow(
            name,
            {l: counts[l][i] for l in labels},
            {l: format_percentage(counts[l][i], sizes[l]) for l in labels},
        )
        for i, name in enumerate(catalog.names)
    ]
    rows.sort(key=lambda row: -row.counts[primary_label])
    return CorpusComparison(labels, sizes, primary_label, tuple(rows))


def status_stub(result: SessionResult) -> dict[str, Any]:
    doc: dict[str, Any] = {"app_id": result.app_id, "status": result.status.value}
    if result.reason is not None:
        doc["reason"] = result.reason.value
    if result.detail:
        doc["detail"] = result.detail
    return doc


def per_app_report(result: SessionResult, catalog: FeatureCatalog) -> dict[str, Any]:
    if not result.completed:
        raise ValueError(f"{result.app_id}: failed sessions only get a status stub")
    report = result.artifacts.report
    doc: dict[str, Any] = {"app_id": result.app_id, "status": result.status.value}
    if report.hashes is not None:
        doc["hashes"] = report.hashes.to_json()
    groups: dict[str, dict[str, int]] = {key: {} for key in _KIND_KEYS.values()}
    if result.features is not None:
        for d, count in zip(catalog.defs, result.features.counts):
            if count:
                groups[_KIND_KEYS[d.kind]][d.name] = count
    doc["features"] = groups
    doc["raw"] = report.to_json()
    return doc


def export_matrix(results: Iterable[SessionResult], catalog: FeatureCatalog, mode: str = "binary") -> str:
    if mode not in ("binary", "counts"):
        raise ValueError("mode must be 'binary' or 'counts'")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["app_id", "label"] + catalog.names)
    for r in results:
        if not r.completed:
            continue
        if r.features is None:
            raise AggregationError(f"{r.app_id}: missing feature vector")
        label = r.label or ""
        if not _ID_RE.match(r.app_id) or (label and not _ID_RE.match(label)):
            raise ValueError(f"{r.app_id!r}/{label!r}: ids and labels must match [A-Za-z0-9._-]+")
        vector = binarize(r.features) if mode == "binary" else r.features
        writer.writerow([r.app_id, label] + [str(c) for c in vector.counts])
    return buf.getvalue()


def import_matrix(text: str) -> tuple[list[str], list[tuple[str, str, FeatureVector]]]:
    """Read an exported matrix back as (feature names, [(app_id, label, vector)])."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or header[:2] != ["app_id", "label"]:
        raise ValueError("matrix header must start with app_id,label")
    rows = []
    for row in reader:
        if len(row) != len(header):
            raise ValueError(f"row for {row[:1]} has {len(row)} cells, expected {len(header)}")
        rows.append((row[0], row[1], FeatureVector(tuple(int(c) for c in row[2:]), row[0])))
    return header[2:], rows

