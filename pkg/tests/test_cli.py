import json
import subprocess
import sys

import pytest

from droidsift.cli import UsageError, main, parse_args
from droidsift.exerciser import AppDescriptor
from droidsift.sandbox import AppScript, CorpusEntry, write_corpus_dir
from droidsift.synthetic import SAMPLE_CALLS


@pytest.fixture
def corpus(tmp_path):
    root = tmp_path / "corpus"
    entries, scripts = [], {}
    for i, (label, script) in enumerate(
        [
            ("malware", AppScript(on_launch=(f"0 ApiMonitor: {SAMPLE_CALLS['deviceId']}",))),
            ("benign", AppScript(behavior_report={"servicestart": [{"name": "S"}]})),
            ("malware", AppScript(install="fail")),
        ]
    ):
        package = f"org.t.app{i}"
        entries.append(CorpusEntry(f"app{i}", AppDescriptor(package, f"{package}.Main", (f"{package}.Main",)), label))
        scripts[package] = script
    write_corpus_dir(root, entries, scripts)
    return root


def test_parse_args_defaults(corpus, tmp_path):
    sigs = tmp_path / "sigs.txt"
    sigs.write_text("Landroid/telephony/TelephonyManager;->getDeviceId\n")
    cmd = parse_args(["batch", "--corpus", str(corpus), "--signatures", str(sigs), "--out", str(tmp_path / "o")])
    assert cmd.verb == "batch"
    assert (cmd.options.timeout, cmd.options.events, cmd.options.seed) == (180_000, 3000, 0)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["batch"],
        ["batch", "--corpus", "{corpus}", "--out", "o", "--events", "3001"],
        ["batch", "--corpus", "{corpus}", "--out", "o", "--timeout", "0"],
        ["batch", "--corpus", "/no/such/dir", "--out", "o"],
        ["export", "{corpus}", "--mode", "weird"],
    ],
)
def test_usage_errors(argv, corpus):
    argv = [a.format(corpus=corpus) for a in argv]
    with pytest.raises(UsageError):
        parse_args(argv)


def test_usage_error_exit_code_and_single_line(capsys):
    assert main(["batch"]) == 2
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and "--corpus" in err


def test_batch_aggregate_export(corpus, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["batch", "--corpus", str(corpus), "--out", str(out), "--events", "100"]) == 0
    assert "3 apps: 2 completed, 1 failed" in capsys.readouterr().out
    assert sorted(p.name for p in out.iterdir()) == [
        "app0.json", "app1.json", "app2.json", "catalog.json", "comparison.json", "comparison.txt", "results.jsonl",
    ]
    assert json.loads((out / "app2.json").read_text())["reason"] == "install-error"
    assert json.loads((out / "app0.json").read_text())["features"]["api_call"] == {"deviceId": 1}
    comparison = json.loads((out / "comparison.json").read_text())
    assert comparison["class_sizes"] == {"benign": 1, "malware": 1}

    assert main(["aggregate", str(out), "--label", "benign"]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[2].split()[:2] == ["1", "servicestart"]

    assert main(["export", str(out / "results.jsonl"), "--mode", "counts", "--catalog", str(out / "catalog.json")]) == 0
    csv_lines = capsys.readouterr().out.splitlines()
    assert [line.split(",")[0] for line in csv_lines] == ["app_id", "app0", "app1"]


def test_batch_is_deterministic(corpus, tmp_path):
    for name in ("a", "b"):
        assert main(["batch", "--corpus", str(corpus), "--out", str(tmp_path / name), "--events", "50", "--seed", "3"]) == 0

    def stable(path):
        return [{k: v for k, v in json.loads(l).items() if k != "duration_ms"} for l in path.read_text().splitlines()]

    assert stable(tmp_path / "a" / "results.jsonl") == stable(tmp_path / "b" / "results.jsonl")
    assert (tmp_path / "a" / "comparison.txt").read_text() == (tmp_path / "b" / "comparison.txt").read_text()


def test_analyze_with_profile(tmp_path, capsys):
    app_dir = tmp_path / "prober"
    app_dir.mkdir()
    (app_dir / "app.json").write_text(json.dumps({"package": "k", "main_activity": "k.M", "activities": ["k.M"]}))
    script = {"profile_conditional": [{"requires": "has_contacts", "lines": [f"0 ApiMonitor: {SAMPLE_CALLS['runtime.exec']}"]}]}
    (app_dir / "script.json").write_text(json.dumps(script))
    profile = tmp_path / "profile.json"
    (tmp_path / "contacts.vcf").write_text("BEGIN:VCARD\nEND:VCARD\n")
    profile.write_text(json.dumps({"imei": "122345627895532", "imsi": "1", "sim_serial": "2", "phone_number": "3", "contacts_path": "contacts.vcf"}))

    assert main(["analyze", str(app_dir), "--events", "10"]) == 0
    assert json.loads(capsys.readouterr().out)["features"]["api_call"] == {}
    assert main(["analyze", str(app_dir), "--events", "10", "--profile", str(profile)]) == 0
    assert json.loads(capsys.readouterr().out)["features"]["api_call"] == {"runtime.exec": 1}


def test_catalog_and_parse_verbs(tmp_path, capsys):
    assert main(["catalog"]) == 0
    catalog = json.loads(capsys.readouterr().out)
    assert catalog[0] == {"name": "opennet", "kind": "report-key", "matcher": "opennet"}

    assert main(["parse", "payload", SAMPLE_CALLS["SEND_MESSAGE"]]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [a["value"] for a in doc["args"]] == ["1782", "null", "532711", "null", "null"]

    log = tmp_path / "log.txt"
    log.write_text(f"1 ApiMonitor: {SAMPLE_CALLS['deviceId']}\nnoise\n2 ApiMonitor: broken\n")
    assert main(["parse", "log", str(log)]) == 0
    rows = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert "call" in rows[0] and "error" in rows[1]

    sigs = tmp_path / "s.txt"
    sigs.write_text("La/B;->c\nLa/B;->d(I)V\n")
    assert main(["parse", "signatures", str(sigs)]) == 0
    assert capsys.readouterr().out.splitlines() == ["0\twildcard\tLa/B;->c", "1\texact\tLa/B;->d(I)V"]


def test_runtime_errors_exit_one(tmp_path, capsys):
    bad = tmp_path / "r.json"
    bad.write_text("{nope")
    assert main(["parse", "report", str(bad)]) == 1
    assert capsys.readouterr().err.startswith("droidsift: error:")
    assert main(["parse", "payload", "La/B;m"]) == 1


def test_synth_writes_corpus(tmp_path, capsys):
    assert main(["synth", "sensitivity", "--out", str(tmp_path / "s")]) == 0
    assert len([p for p in (tmp_path / "s").iterdir() if p.is_dir()]) == 31


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "droidsift", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "analyze" in proc.stdout
