"""Command-line entry point.

    droidsift batch --corpus DIR --out DIR [--signatures FILE] [--profile FILE]
    droidsift aggregate OUT_DIR_OR_RESULTS [--label malware]
    droidsift export OUT_DIR_OR_RESULTS [--mode binary|counts]
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import DroidSiftError
from .exerciser import DEFAULT_EVENTS, MAX_EVENTS, ExercisePlan, build_plan, load_app_descriptor
from .features import FeatureCatalog, default_catalog, load_catalog
from .logparse import (
    API_TAG,
    parse_api_call_payload,
    parse_behavior_report,
    parse_log_stream,
    render_api_call,
)
from .report import aggregate_comparison, export_matrix, per_app_report, status_stub
from .sandbox import (
    DEFAULT_TIMEOUT_MS,
    AppScript,
    BatchConfig,
    DeviceProfile,
    SimulatedDevice,
    apply_profile,
    dump_results,
    load_corpus_dir,
    load_results,
    run_batch,
    run_session,
    write_corpus_dir,
)
from .signature import default_signatures, load_signature_file, render_api_signature

VERBS = ("analyze", "batch", "aggregate", "export", "catalog", "parse", "synth")


class UsageError(DroidSiftError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit; callers want an exception
        raise UsageError(message)


@dataclass(frozen=True)
class Command:
    verb: str
    options: argparse.Namespace


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _event_count(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_EVENTS:
        raise argparse.ArgumentTypeError(f"must be within 0..{MAX_EVENTS}")
    return value


def _build_parser() -> _Parser:
    parser = _Parser(prog="droidsift", description="Dynamic-analysis pipeline for scripted Android app sessions")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser, metavar="VERB")
    sub.required = True

    def catalog_opts(p):
        p.add_argument("--signatures", type=Path, help="API signature list (default: bundled list)")
        p.add_argument("--catalog", type=Path, help="pinned catalog JSON")

    def session_opts(p):
        catalog_opts(p)
        p.add_argument("--profile", type=Path, help="device identity profile JSON")
        p.add_argument("--timeout", type=_positive, default=DEFAULT_TIMEOUT_MS, metavar="MS")
        p.add_argument("--events", type=_event_count, default=DEFAULT_EVENTS, metavar="N")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("analyze", help="run one app directory")
    p.add_argument("app", type=Path, help="directory holding app.json and script.json")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    session_opts(p)

    p = sub.add_parser("batch", help="analyse a corpus directory")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--label", default="malware", help="primary label for the comparison")
    session_opts(p)

    p = sub.add_parser("aggregate", help="compare labels over stored results")
    p.add_argument("results", type=Path, help="results.jsonl or a batch output directory")
    p.add_argument("--label", default="malware", help="primary label (sort key)")
    p.add_argument("--out", type=Path, help="directory for comparison.json/.txt")
    catalog_opts(p)

    p = sub.add_parser("export", help="write a feature matrix CSV")
    p.add_argument("results", type=Path, help="results.jsonl or a batch output directory")
    p.add_argument("--mode", choices=("counts", "binary"), default="binary")
    p.add_argument("--out", type=Path)
    catalog_opts(p)

    p = sub.add_parser("catalog", help="print or pin the feature catalog")
    p.add_argument("--out", type=Path)
    catalog_opts(p)

    p = sub.add_parser("parse", help="debug-parse one input")
    p.add_argument("kind", choices=("log", "payload", "report", "signatures"))
    p.add_argument("input", help="file path ('-' for stdin); for payload, the payload text itself")

    p = sub.add_parser("synth", help="write a synthetic corpus directory")
    p.add_argument("which", choices=("reference", "sensitivity"))
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int)
    return parser


def parse_args(argv: Sequence[str]) -> Command:
    ns = _build_parser().parse_args(list(argv))
    for name in ("corpus", "signatures", "catalog", "profile", "results", "app"):
        path = getattr(ns, name, None)
        if path is not None and not path.exists():
            raise UsageError(f"--{name}: {path} does not exist")
    return Command(ns.verb, ns)


# --- verb implementations ---------------------------------------------------


def _catalog(opts) -> FeatureCatalog:
    sigs = load_signature_file(opts.signatures) if opts.signatures else default_signatures()
    if opts.catalog:
        return load_catalog(opts.catalog.read_text(encoding="utf-8"), sigs)
    return default_catalog(sigs)


def _profile(opts) -> DeviceProfile | None:
    if not opts.profile:
        return None
    profile = DeviceProfile.from_json(json.loads(opts.profile.read_text(encoding="utf-8")))
    if profile.contacts_path and not Path(profile.contacts_path).is_absolute():
        contacts = opts.profile.parent / profile.contacts_path
        profile = DeviceProfile(profile.imei, profile.imsi, profile.sim_serial, profile.phone_number, str(contacts))
    return profile


def _results_file(path: Path) -> Path:
    return path / "results.jsonl" if path.is_dir() else path


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def _analyze(opts) -> int:
    catalog = _catalog(opts)
    app = load_app_descriptor(opts.app / "app.json")
    script = AppScript.from_json(json.loads((opts.app / "script.json").read_text(encoding="utf-8")))
    device = SimulatedDevice({app.package: script})
    device.reset()
    profile = _profile(opts)
    if profile is not None:
        apply_profile(device, profile)
    plan = build_plan(app, opts.seed, opts.events)
    result = run_session(device, app, plan, opts.timeout, app_id=opts.app.name, catalog=catalog)
    doc = per_app_report(result, catalog) if result.completed else status_stub(result)
    _emit(json.dumps(doc, indent=2) + "\n", opts.out)
    return 0


def _write_comparison(results, catalog, label, out: Path) -> bool:
    try:
        comparison = aggregate_comparison(results, catalog, label)
    except DroidSiftError as exc:
        logging.getLogger(__name__).warning("no comparison written: %s", exc)
        return False
    (out / "comparison.json").write_text(json.dumps(comparison.to_json(), indent=2) + "\n", encoding="utf-8")
    (out / "comparison.txt").write_text(comparison.render_text(), encoding="utf-8")
    return True


def _batch(opts) -> int:
    catalog = _catalog(opts)
    entries, scripts = load_corpus_dir(opts.corpus)
    device = SimulatedDevice(scripts)
    config = BatchConfig(
        seed=opts.seed,
        event_count=opts.events,
        timeout_ms=opts.timeout,
        catalog=catalog,
        profile=_profile(opts),
    )
    results = run_batch(device, entries, config)
    out: Path = opts.out
    out.mkdir(parents=True, exist_ok=True)
    for r in results:
        doc = per_app_report(r, catalog) if r.completed else status_stub(r)
        (out / f"{r.app_id}.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    (out / "results.jsonl").write_text(dump_results(results, catalog), encoding="utf-8")
    (out / "catalog.json").write_text(catalog.dumps(), encoding="utf-8")
    _write_comparison(results, catalog, opts.label, out)
    completed = sum(r.completed for r in results)
    print(f"analysed {len(results)} apps: {completed} completed, {len(results) - completed} failed")
    return 0


def _aggregate(opts) -> int:
    catalog = _catalog(opts)
    results = load_results(_results_file(opts.results).read_text(encoding="utf-8"), catalog)
    comparison = aggregate_comparison(results, catalog, opts.label)
    if opts.out:
        opts.out.mkdir(parents=True, exist_ok=True)
        _write_comparison(results, catalog, opts.label, opts.out)
    sys.stdout.write(comparison.render_text())
    return 0


def _export(opts) -> int:
    catalog = _catalog(opts)
    results = load_results(_results_file(opts.results).read_text(encoding="utf-8"), catalog)
    _emit(export_matrix(results, catalog, opts.mode), opts.out)
    return 0


def _catalog_verb(opts) -> int:
    _emit(_catalog(opts).dumps(), opts.out)
    return 0


def _read_input(arg: str) -> str:
    return sys.stdin.read() if arg == "-" else Path(arg).read_text(encoding="utf-8")


def _parse(opts) -> int:
    if opts.kind == "payload":
        record = parse_api_call_payload(opts.input)
        doc = {
            "class": record.owner.element,
            "method": record.method,
            "args": [{"descriptor": str(a.descriptor), "value": a.value} for a in record.args],
            "return": str(record.returns) if record.returns else None,
            "return_value": record.return_value,
            "canonical": render_api_call(record),
        }
        print(json.dumps(doc, indent=2))
    elif opts.kind == "log":
        for entry in parse_log_stream(_read_input(opts.input).splitlines()):
            doc = {"t": entry.timestamp, "tag": entry.tag, "payload": entry.payload}
            if entry.tag == API_TAG:
                try:
                    doc["call"] = render_api_call(parse_api_call_payload(entry.payload))
                except DroidSiftError as exc:
                    doc["error"] = str(exc)
            print(json.dumps(doc))
    elif opts.kind == "report":
        print(json.dumps(parse_behavior_report(_read_input(opts.input)).to_json(), indent=2))
    else:
        from .signature import load_signature_list

        for sid, sig in load_signature_list(_read_input(opts.input)):
            print(f"{sid}\t{'wildcard' if sig.is_wildcard else 'exact'}\t{render_api_signature(sig)}")
    return 0


def _synth(opts) -> int:
    from . import synthetic

    if opts.which == "reference":
        entries, scripts = synthetic.reference_corpus(*(() if opts.seed is None else (opts.seed,)))
    else:
        entries, scripts = synthetic.sensitivity_corpus(*(() if opts.seed is None else (opts.seed,)))
    write_corpus_dir(opts.out, entries, scripts)
    print(f"wrote {len(entries)} apps to {opts.out}")
    return 0


_DISPATCH = {
    "analyze": _analyze,
    "batch": _batch,
    "aggregate": _aggregate,
    "export": _export,
    "catalog": _catalog_verb,
    "parse": _parse,
    "synth": _synth,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        command = parse_args(argv)
    except UsageError as exc:
        print(f"droidsift: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(
        level=logging.INFO if command.options.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _DISPATCH[command.verb](command.options)
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return 0
    except (DroidSiftError, OSError, json.JSONDecodeError) as exc:
        print(f"droidsift: error: {exc}", file=sys.stderr)
        return 1
