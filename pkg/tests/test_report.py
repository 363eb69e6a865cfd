import json
import random

import pytest
from hypothesis import given, strategies as st

from droidsift.errors import AggregationError
from droidsift.exerciser import AppDescriptor
from droidsift.features import FeatureVector, binarize
from droidsift.logparse import BehaviorReport
from droidsift.report import (
    aggregate_comparison,
    export_matrix,
    format_percentage,
    import_matrix,
    per_app_report,
    status_stub,
)
from droidsift.sandbox import (
    AppScript,
    BatchConfig,
    FailureReason,
    SessionArtifacts,
    SessionResult,
    SimulatedDevice,
    Status,
    run_batch,
)
from droidsift.synthetic import random_app

RECVACTION_SAMPLE = {
    "hashes": ["d41d8cd98f00b204e9800998ecf8427e", "da39a3ee5e6b4b0d3255bfef95601890afd80709", "e3b0c442"],
    "recvaction": {
        "com.google.search.Receiver": "Android.intent.action.BOOT_COMPLETED",
        "com.Android.view.custom.BaseABroadcastReceiver": "Android.intent.action.UMS_DISCONNECTED",
    },
}


def _completed(app_id, label, counts, catalog, report=None):
    artifacts = SessionArtifacts((), (), report or BehaviorReport(), 0)
    vector = [0] * len(catalog)
    for name, c in counts.items():
        vector[catalog.index(name)] = c
    return SessionResult(app_id, Status.COMPLETED, None, artifacts, FeatureVector(tuple(vector), app_id), label)


def _failed(app_id, label):
    return SessionResult(app_id, Status.FAILED, FailureReason.INSTALL_ERROR, label=label)


@pytest.mark.parametrize(
    "count,total,text",
    [(905, 970, "93.29"), (840, 970, "86.59"), (0, 970, "0"), (970, 970, "100.00"), (1, 3, "33.33"), (2, 3, "66.66")],
)
def test_format_percentage(count, total, text):
    assert format_percentage(count, total) == text


def test_format_percentage_errors():
    with pytest.raises(ValueError):
        format_percentage(1, 0)
    with pytest.raises(ValueError):
        format_percentage(5, 4)


@given(st.integers(1, 10_000).flatmap(lambda t: st.tuples(st.integers(0, t), st.just(t))))
def test_percentage_truncates(pair):
    count, total = pair
    text = format_percentage(count, total)
    value = float(text)
    assert value <= count * 100 / total + 1e-9
    assert count * 100 / total - value < 0.01 + 1e-9


def test_single_app_comparison(catalog):
    comparison = aggregate_comparison([_completed("a", "malware", {"deviceId": 3}, catalog)], catalog)
    nonzero = [r for r in comparison.rows if any(r.counts.values())]
    assert [(r.feature, r.counts, r.percentages) for r in nonzero] == [("deviceId", {"malware": 1}, {"malware": "100.00"})]
    assert comparison.class_sizes == {"malware": 1}


def test_failed_results_are_excluded(catalog):
    results = [
        _completed("a", "malware", {"deviceId": 1}, catalog),
        _failed("b", "malware"),
        _completed("c", "benign", {}, catalog),
        _failed("d", "benign"),
    ]
    comparison = aggregate_comparison(results, catalog)
    assert comparison.class_sizes == {"benign": 1, "malware": 1}
    assert comparison.rows[0].feature == "deviceId"


def test_aggregation_errors(catalog):
    with pytest.raises(AggregationError):
        aggregate_comparison([], catalog)
    with pytest.raises(AggregationError):
        aggregate_comparison([_failed("x", "malware")], catalog)
    with pytest.raises(AggregationError, match="unknown primary label"):
        aggregate_comparison([_completed("a", "benign", {}, catalog)], catalog, "malware")


def test_sort_is_stable_and_permutation_invariant(catalog):
    rng = random.Random(11)
    names = catalog.names
    results = [
        _completed(f"a{i}", rng.choice(["benign", "malware"]), {n: 1 for n in rng.sample(names, 6)}, catalog)
        for i in range(60)
    ]
    results.append(_completed("m", "malware", {}, catalog))
    comparison = aggregate_comparison(results, catalog)
    order = {n: i for i, n in enumerate(names)}
    for prev, row in zip(comparison.rows, comparison.rows[1:]):
        assert prev.counts["malware"] >= row.counts["malware"]
        if prev.counts["malware"] == row.counts["malware"]:
            assert order[prev.feature] < order[row.feature]
    for row in comparison.rows:
        for label, size in comparison.class_sizes.items():
            assert 0 <= row.counts[label] <= size
            assert row.percentages[label] == format_percentage(row.counts[label], size)
    rng.shuffle(results)
    assert aggregate_comparison(results, catalog) == comparison


def test_render_text_and_json(catalog):
    results = [_completed("a", "malware", {"PHONE_STATE": 1}, catalog), _completed("b", "benign", {}, catalog)]
    comparison = aggregate_comparison(results, catalog)
    text = comparison.render_text()
    lines = text.splitlines()
    assert lines[0] == "class sizes: benign=1, malware=1"
    assert lines[1].split() == ["#", "Feature", "Benign", "Malware", "%", "Benign", "%", "Malware"]
    assert lines[2].split() == ["1", "PHONE_STATE", "0", "1", "0", "100.00"]
    assert len(lines) == 3
    assert len(comparison.render_text(nonzero_only=False).splitlines()) == 2 + len(catalog)
    doc = comparison.to_json()
    assert doc["rows"][0] == {"rank": 1, "feature": "PHONE_STATE", "counts": {"benign": 0, "malware": 1}, "percentages": {"benign": "0", "malware": "100.00"}}


def test_per_app_report_groups_and_hashes(catalog):
    app = AppDescriptor("p", "p.Main", ("p.Main",))
    [result] = run_batch(SimulatedDevice({"p": AppScript(behavior_report=RECVACTION_SAMPLE)}), [(app, "x")], BatchConfig(event_count=0, catalog=catalog))
    doc = per_app_report(result, catalog)
    assert doc["features"]["intent_action"] == {"BOOT_COMPLETED": 1, "UMS_DISCONNECTED": 1}
    assert doc["features"]["report_key"] == {"recvaction": 2}
    assert doc["features"]["api_call"] == {}
    assert doc["hashes"] == {"md5": RECVACTION_SAMPLE["hashes"][0], "sha1": RECVACTION_SAMPLE["hashes"][1], "sha256": RECVACTION_SAMPLE["hashes"][2]}
    assert doc["raw"]["recvaction"] == RECVACTION_SAMPLE["recvaction"]
    json.dumps(doc)


def test_per_app_report_empty_and_failed(catalog):
    doc = per_app_report(_completed("e", None, {}, catalog), catalog)
    assert doc["features"] == {"report_key": {}, "intent_action": {}, "api_call": {}}
    assert "hashes" not in doc
    with pytest.raises(ValueError):
        per_app_report(_failed("f", None), catalog)
    assert status_stub(_failed("f", None)) == {"app_id": "f", "status": "failed", "reason": "install-error"}


def test_export_matrix_shapes(catalog):
    results = [
        _completed("a", "malware", {"deviceId": 4}, catalog),
        _failed("b", "malware"),
        _completed("c", "benign", {"opennet": 1}, catalog),
    ]
    text = export_matrix(results, catalog, "binary")
    lines = text.split("\n")
    assert lines[-1] == "" and len(lines) == 4
    assert lines[0] == ",".join(["app_id", "label"] + catalog.names)
    assert "\r" not in text
    for line in lines[1:-1]:
        assert set(line.split(",")[2:]) <= {"0", "1"}
    assert "4" in export_matrix(results, catalog, "counts").split("\n")[1].split(",")


def test_export_rejects_bad_ids(catalog):
    with pytest.raises(ValueError):
        export_matrix([_completed("a b", "x", {}, catalog)], catalog)
    with pytest.raises(ValueError):
        export_matrix([_completed("a", "x,y", {}, catalog)], catalog)


def test_matrix_round_trip(catalog):
    rng = random.Random(12)
    pairs = [random_app(rng, i) for i in range(12)]
    results = run_batch(
        SimulatedDevice({e.app.package: s for e, s in pairs}), [e for e, _ in pairs], BatchConfig(event_count=50, catalog=catalog)
    )
    names, rows = import_matrix(export_matrix(results, catalog))
    assert names == catalog.names
    assert [(a, l, v.counts) for a, l, v in rows] == [(r.app_id, r.label, binarize(r.features).counts) for r in results]


def test_docstring_examples():
    import doctest

    from droidsift import report

    assert doctest.testmod(report).failed == 0
