"""Serial analysis sessions against an abstract device.

The repository ships one device implementation, :class:`SimulatedDevice`,
which replays per-app behaviour scripts.  Anything providing the
:class:`DeviceEndpoint` methods can stand in for it.
"""

from __future__ import annotations

import csv
import json
import logging
import re
import threading
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Protocol, Sequence

from .errors import (
    DeviceError,
    DroidSiftError,
    InstallError,
    LaunchError,
    ProfileError,
    PushError,
    ScriptError,
)
from .exerciser import (
    DEFAULT_EVENTS,
    DEFAULT_MIX,
    DEFAULT_SCREEN,
    AppDescriptor,
    EventMix,
    ExercisePlan,
    Screen,
    UiEvent,
    enumerate_components,
    generate_event_stream,
    load_app_descriptor,
)
from .features import FeatureCatalog, FeatureVector, binarize, extract_features
from .logparse import (
    API_TAG,
    REPORT_TAG,
    ApiCallRecord,
    BehaviorReport,
    LogEntry,
    parse_api_call_payload,
    parse_behavior_report,
    parse_logcat_line,
    report_from_object,
)

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT_MS = 180_000
CONTACTS_REMOTE_PATH = "/sdcard/contacts.vcf"
_APP_ID_RE = re.compile(r"[A-Za-z0-9._-]+\Z")


@dataclass(frozen=True)
class DeviceProfile:
    imei: str
    imsi: str
    sim_serial: str
    phone_number: str
    contacts_path: str | None = None

    def validate(self) -> None:
        if len(self.imei) != 15 or not self.imei.isdigit():
            raise ProfileError(f"IMEI must be exactly 15 digits, got {self.imei!r}")
        for name in ("imsi", "sim_serial"):
            value = getattr(self, name)
            if not value or not value.isdigit():
                raise ProfileError(f"{name} must be a non-empty digit string")
        if not self.phone_number:
            raise ProfileError("phone_number must be non-empty")

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> DeviceProfile:
        try:
            profile = cls(
                str(doc["imei"]),
                str(doc["imsi"]),
                str(doc["sim_serial"]),
                str(doc["phone_number"]),
                doc.get("contacts_path"),
            )
        except (KeyError, TypeError) as exc:
            raise ProfileError(f"profile is missing field {exc}") from exc
        profile.validate()
        return profile


# Stock emulator identity that fingerprinting malware looks for.
EMULATOR_PROFILE = DeviceProfile(
    imei="000000000000000",
    imsi="310260000000000",
    sim_serial="89014103211118510720",
    phone_number="15555215554",
)


class DeviceEndpoint(Protocol):
    def install(self, app: AppDescriptor) -> None: ...
    def launch(self, component: str) -> None: ...
    def send_event(self, event: UiEvent) -> None: ...
    def push_file(self, local: str | Path, remote: str) -> None: ...
    def set_identity(self, profile: DeviceProfile) -> None: ...
    def read_log_stream(self) -> list[LogEntry]: ...
    def read_behavior_report(self) -> BehaviorReport: ...
    def interrupt(self) -> None:
        """Abort any in-flight interaction; may be called from another thread."""
    def reset(self) -> None: ...


def apply_profile(device: DeviceEndpoint, profile: DeviceProfile) -> tuple[str, ...]:
    """Make the device look less like an emulator; returns the actions performed."""
    profile.validate()
    device.set_identity(profile)
    actions = ["identity"]
    if profile.contacts_path:
        device.push_file(profile.contacts_path, CONTACTS_REMOTE_PATH)
        actions.append(f"push:{CONTACTS_REMOTE_PATH}")
    return tuple(actions)


# --- simulated device -------------------------------------------------------

REQUIREMENTS: dict[str, Callable[[SimulatedDevice], bool]] = {
    "realistic_imei": lambda d: d.identity.imei != EMULATOR_PROFILE.imei,
    "realistic_imsi": lambda d: d.identity.imsi != EMULATOR_PROFILE.imsi,
    "realistic_sim_serial": lambda d: d.identity.sim_serial != EMULATOR_PROFILE.sim_serial,
    "realistic_phone_number": lambda d: d.identity.phone_number != EMULATOR_PROFILE.phone_number,
    "has_contacts": lambda d: CONTACTS_REMOTE_PATH in d.pushed,
}


def _check_lines(lines: Any, where: str) -> tuple[str, ...]:
    if not isinstance(lines, list) or not all(isinstance(s, str) for s in lines):
        raise ScriptError(f"{where} must be a list of log lines")
    for line in lines:
        if parse_logcat_line(line) is None:
            raise ScriptError(f"{where}: line {line!r} does not match '<t_ms> <TAG>: <payload>'")
    return tuple(lines)


@dataclass(frozen=True)
class ConditionalLines:
    requires: str
    lines: tuple[str, ...]


@dataclass(frozen=True)
class AppScript:
    """Behaviour script for one simulated app.

    Log-line timestamps are offsets from the moment the device emits them:
    ``on_launch`` and satisfied ``profile_conditional`` lines at the first
    component launch, ``on_event_every_k`` after every k-th UI event.
    ``launch`` and ``hang`` are test hooks for launch failures and for
    sessions that never finish.
    """

    install: str = "ok"
    launch: str = "ok"
    on_launch: tuple[str, ...] = ()
    on_event_every_k: tuple[int, str] | None = None
    profile_conditional: tuple[ConditionalLines, ...] = ()
    behavior_report: dict[str, Any] | None = None
    hang: str | None = None

    @classmethod
    def from_json(cls, doc: Any) -> AppScript:
        if not isinstance(doc, dict):
            raise ScriptError("app script must be a JSON object")
        install = doc.get("install", "ok")
        launch = doc.get("launch", "ok")
        if install not in ("ok", "fail") or launch not in ("ok", "fail"):
            raise ScriptError("install/launch must be 'ok' or 'fail'")
        every = doc.get("on_event_every_k")
        if every is not None:
            if not isinstance(every, dict) or not isinstance(every.get("k"), int) or every["k"] < 1:
                raise ScriptError("on_event_every_k needs a positive integer k")
            every = (every["k"], _check_lines([every.get("line")], "on_event_every_k")[0])
        conditional = []
        for item in doc.get("profile_conditional") or ():
            if not isinstance(item, dict) or item.get("requires") not in REQUIREMENTS:
                raise ScriptError(f"profile_conditional requires one of {sorted(REQUIREMENTS)}")
            conditional.append(
                ConditionalLines(item["requires"], _check_lines(item.get("lines", []), "profile_conditional"))
            )
        report = doc.get("behavior_report")
        if report is not None:
            report_from_object(report)  # validate early
        hang = doc.get("hang")
        if hang not in (None, "install", "launch", "events"):
            raise ScriptError("hang must be one of install, launch, events")
        return cls(
            install,
            launch,
            _check_lines(doc.get("on_launch", []), "on_launch"),
            every,
            tuple(conditional),
            report,
            hang,
        )

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"install": self.install}
        if self.launch != "ok":
            doc["launch"] = self.launch
        doc["on_launch"] = list(self.on_launch)
        if self.on_event_every_k:
            doc["on_event_every_k"] = {"k": self.on_event_every_k[0], "line": self.on_event_every_k[1]}
        if self.profile_conditional:
            doc["profile_conditional"] = [
                {"requires": c.requires, "lines": list(c.lines)} for c in self.profile_conditional
            ]
        if self.behavior_report is not None:
            doc["behavior_report"] = self.behavior_report
        if self.hang:
            doc["hang"] = self.hang
        return doc


class SimulatedDevice:
    """Scripted stand-in for an emulator.

    Keeps a virtual clock for log timestamps, and counts ``overlaps``:
    any device call made while another is in flight, or made by a session
    after the device was reset underneath it.
    """

    def __init__(
        self,
        scripts: Mapping[str, AppScript],
        launch_cost_ms: int = 250,
        event_cost_ms: int = 40,
    ):
        self.scripts = dict(scripts)
        self.launch_cost_ms = launch_cost_ms
        self.event_cost_ms = event_cost_ms
        self.identity = EMULATOR_PROFILE
        self.overlaps = 0
        self.installs: list[str] = []
        self.push_log: list[tuple[str, str]] = []
        self._lock = threading.Lock()
        self._interrupted = threading.Event()
        self._in_call = 0
        self._generation = 0
        self._session_generation = -1
        self._clear()

    def _clear(self) -> None:
        self.clock_ms = 0
        self.pushed: dict[str, str] = {}
        self._script: AppScript | None = None
        self._launches = 0
        self._events = 0
        self._log: list[LogEntry] = []
        self._report = BehaviorReport()

    # overlap instrumentation
    def _enter(self, session_op: bool = True) -> None:
        with self._lock:
            if self._in_call:
                self.overlaps += 1
            if session_op and self._session_generation != self._generation:
                self.overlaps += 1
            self._in_call += 1

    def _leave(self) -> None:
        with self._lock:
            self._in_call -= 1

    def _block_until_interrupted(self) -> None:
        self._leave()
        self._interrupted.wait()
        self._enter(session_op=False)
        raise DeviceError("interaction interrupted")

    def _emit(self, lines: Iterable[str]) -> None:
        for line in lines:
            entry = parse_logcat_line(line)
            if entry is not None:
                self._log.append(LogEntry(self.clock_ms + entry.timestamp, entry.tag, entry.payload))

    def install(self, app: AppDescriptor) -> None:
        with self._lock:
            self._session_generation = self._generation
        self._enter()
        try:
            self.installs.append(app.package)
            script = self.scripts.get(app.package)
            if script is None:
                raise InstallError(f"no script for package {app.package}")
            if script.hang == "install":
                self._block_until_interrupted()
            if script.install == "fail":
                raise InstallError(f"install of {app.package} failed")
            self._script = script
        finally:
            self._leave()

    def launch(self, component: str) -> None:
        self._enter()
        try:
            script = self._script
            if script is None:
                raise LaunchError("nothing installed")
            if script.hang == "launch":
                self._block_until_interrupted()
            if script.launch == "fail":
                raise LaunchError(f"could not start {component}")
            if self._launches == 0:
                self._emit(script.on_launch)
                for cond in script.profile_conditional:
                    if REQUIREMENTS[cond.requires](self):
                        self._emit(cond.lines)
                if script.behavior_report is not None:
                    self._report = self._report.merged(report_from_object(script.behavior_report))
            self._launches += 1
            self.clock_ms += self.launch_cost_ms
        finally:
            self._leave()

    def send_event(self, event: UiEvent) -> None:
        self._enter()
        try:
            script = self._script
            if script is None:
                raise DeviceError("no app in foreground")
            if script.hang == "events":
                self._block_until_interrupted()
            self._events += 1
            self.clock_ms += self.event_cost_ms
            every = script.on_event_every_k
            if every and self._events % every[0] == 0:
                self._emit((every[1],))
        finally:
            self._leave()

    def push_file(self, local: str | Path, remote: str) -> None:
        self._enter(session_op=False)
        try:
            if not Path(local).is_file():
                raise PushError(f"cannot push {local}: no such file")
            self.pushed[remote] = str(local)
            self.push_log.append((str(local), remote))
        finally:
            self._leave()

    def set_identity(self, profile: DeviceProfile) -> None:
        self.identity = profile

    def query(self, prop: str) -> str:
        return getattr(self.identity, prop)

    def read_log_stream(self) -> list[LogEntry]:
        self._enter(session_op=False)
        try:
            return sorted(self._log, key=lambda e: e.timestamp)
        finally:
            self._leave()

    def read_behavior_report(self) -> BehaviorReport:
        return self._report.merged(BehaviorReport())

    def interrupt(self) -> None:
        self._interrupted.set()

    def reset(self) -> None:
        with self._lock:
            self._generation += 1
        self._interrupted.clear()
        self._clear()


# --- sessions ---------------------------------------------------------------


class Status(str, Enum):
    COMPLETED = "completed"
    FAILED = "failed"


class FailureReason(str, Enum):
    INSTALL_ERROR = "install-error"
    LAUNCH_ERROR = "launch-error"
    NO_OUTPUT = "no-output-policy"
    INTERNAL = "internal"


@dataclass(frozen=True)
class SessionArtifacts:
    entries: tuple[LogEntry, ...]
    api_calls: tuple[ApiCallRecord, ...]
    report: BehaviorReport
    duration_ms: int
    rejected: tuple[str, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.entries and self.report.is_empty()


@dataclass(frozen=True)
class SessionResult:
    app_id: str
    status: Status
    reason: FailureReason | None = None
    artifacts: SessionArtifacts | None = None
    features: FeatureVector | None = None
    label: str | None = None
    detail: str = ""
    timed_out: bool = False

    def __post_init__(self) -> None:
        if self.status is Status.COMPLETED and self.artifacts is None:
            raise ValueError("completed sessions carry artifacts")
        if self.status is Status.FAILED and (self.reason is None or self.artifacts is not None):
            raise ValueError("failed sessions carry a reason and no artifacts")

    @property
    def completed(self) -> bool:
        return self.status is Status.COMPLETED


def collect_artifacts(entries: Sequence[LogEntry], report: BehaviorReport, duration_ms: int) -> SessionArtifacts:
    """Parse API calls from ApiMonitor entries and fold DroidBox fragments into the report."""
    calls = []
    rejected = []
    for entry in entries:
        try:
            if entry.tag == API_TAG:
                calls.append(parse_api_call_payload(entry.payload))
            elif entry.tag == REPORT_TAG:
                report = report.merged(parse_behavior_report(entry.payload))
        except DroidSiftError as exc:
            rejected.append(f"{entry.render()}  # {exc}")
    return SessionArtifacts(tuple(entries), tuple(calls), report, duration_ms, tuple(rejected))


def _failed(app_id, reason, detail, label) -> SessionResult:
    return SessionResult(app_id, Status.FAILED, reason, label=label, detail=detail)


def run_session(
    device: DeviceEndpoint,
    app: AppDescriptor,
    plan: ExercisePlan,
    timeout_ms: int = DEFAULT_TIMEOUT_MS,
    *,
    app_id: str | None = None,
    label: str | None = None,
    catalog: FeatureCatalog | None = None,
    fail_on_no_output: bool = False,
) -> SessionResult:
    """Install, launch every planned component, replay events, then collect.

    The interaction runs on a worker thread.  At the deadline the device is
    interrupted and whatever was logged so far is collected, so a session
    returns within the timeout plus a small grace period.  Install and
    launch failures come back as Failed results, never as exceptions.
    """
    if timeout_ms <= 0:
        raise ValueError("timeout_ms must be positive")
    app_id = app_id or app.package
    start = time.monotonic()
    cancel = threading.Event()
    outcome: dict[str, BaseException] = {}

    def interact() -> None:
        try:
            device.install(app)
            for component in plan.launch_order:
                if cancel.is_set():
                    return
                device.launch(component)
            for event in plan.events:
                if cancel.is_set():
                    return
                device.send_event(event)
        except BaseException as exc:  # reported through `outcome`
            outcome["error"] = exc

    worker = threading.Thread(target=interact, name=f"session:{app_id}", daemon=True)
    worker.start()
    worker.join(timeout_ms / 1000)
    timed_out = worker.is_alive()
    if timed_out:
        cancel.set()
        device.interrupt()
        worker.join(max(timeout_ms * 0.05, 1) / 1000)
        if worker.is_alive():
            return _failed(app_id, FailureReason.INTERNAL, "device did not release after timeout", label)

    error = outcome.get("error")
    if isinstance(error, InstallError):
        return _failed(app_id, FailureReason.INSTALL_ERROR, str(error), label)
    if isinstance(error, LaunchError):
        return _failed(app_id, FailureReason.LAUNCH_ERROR, str(error), label)
    if error is not None and not timed_out:
        log.warning("session %s aborted: %r", app_id, error)
        return _failed(app_id, FailureReason.INTERNAL, repr(error), label)

    try:
        entries = device.read_log_stream()
        report = device.read_behavior_report()
    except Exception as exc:
        return _failed(app_id, FailureReason.INTERNAL, f"artifact collection failed: {exc!r}", label)
    duration_ms = int((time.monotonic() - start) * 1000)
    artifacts = collect_artifacts(entries, report, duration_ms)
    if fail_on_no_output and artifacts.is_empty:
        return _failed(app_id, FailureReason.NO_OUTPUT, "session produced no output", label)
    features = None
    if catalog is not None:
        features = extract_features(artifacts.report, artifacts.api_calls, catalog, app_id)
    return SessionResult(
        app_id, Status.COMPLETED, None, artifacts, features, label, timed_out=timed_out
    )


# --- batches ----------------------------------------------------------------


@dataclass(frozen=True)
class CorpusEntry:
    app_id: str
    app: AppDescriptor
    label: str | None = None

    def __post_init__(self) -> None:
        if not _APP_ID_RE.match(self.app_id) or self.app_id in (".", ".."):
            raise ValueError(f"app id {self.app_id!r} must match [A-Za-z0-9._-]+")


@dataclass(frozen=True)
class BatchConfig:
    seed: int = 0
    event_count: int = DEFAULT_EVENTS
    screen: Screen = DEFAULT_SCREEN
    mix: EventMix = DEFAULT_MIX
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    catalog: FeatureCatalog | None = None
    profile: DeviceProfile | None = None
    fail_on_no_output: bool = False


def _as_entry(item: CorpusEntry | tuple[AppDescriptor, str | None]) -> CorpusEntry:
    if isinstance(item, CorpusEntry):
        return item
    app, label = item
    return CorpusEntry(app.package, app, label)


def run_batch(
    device: DeviceEndpoint,
    corpus: Sequence[CorpusEntry | tuple[AppDescriptor, str | None]],
    config: BatchConfig = BatchConfig(),
    progress: Callable[[int, SessionResult], None] | None = None,
) -> list[SessionResult]:
    """Analyse every app in order on one device, resetting between sessions."""
    entries = [_as_entry(item) for item in corpus]
    # the event stream depends only on the config, so every plan shares it
    events = generate_event_stream(config.seed, config.event_count, config.screen, config.mix)
    results = []
    for i, entry in enumerate(entries):
        device.reset()
        try:
            if config.profile is not None:
                apply_profile(device, config.profile)
            plan = ExercisePlan(tuple(enumerate_components(entry.app)), events, config.seed, len(events))
            result = run_session(
                device,
                entry.app,
                plan,
                config.timeout_ms,
                app_id=entry.app_id,
                label=entry.label,
                catalog=config.catalog,
                fail_on_no_output=config.fail_on_no_output,
            )
        except Exception as exc:
            log.warning("session %s failed before start: %r", entry.app_id, exc)
            result = _failed(entry.app_id, FailureReason.INTERNAL, repr(exc), entry.label)
        results.append(result)
        if progress is not None:
            progress(i, result)
    device.reset()
    return results


def profile_sensitivity_run(
    device: DeviceEndpoint,
    apps: Sequence[CorpusEntry | tuple[AppDescriptor, str | None]],
    default_profile: DeviceProfile,
    enhanced_profile: DeviceProfile,
    catalog: FeatureCatalog,
    config: BatchConfig = BatchConfig(event_count=0),
) -> dict[str, tuple[int, int]]:
    """Per-feature count of apps exhibiting it under each profile."""
    columns = []
    for profile in (default_profile, enhanced_profile):
        results = run_batch(device, apps, replace(config, catalog=catalog, profile=profile))
        totals = [0] * len(catalog)
        for r in results:
            if r.completed:
                for i, c in enumerate(binarize(r.features).counts):
                    totals[i] += c
        columns.append(totals)
    return {name: (b, a) for name, b, a in zip(catalog.names, *columns)}


# --- persistence ------------------------------------------------------------


def result_to_json(result: SessionResult, catalog: FeatureCatalog | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {"app_id": result.app_id, "label": result.label, "status": result.status.value}
    if result.reason is not None:
        doc["reason"] = result.reason.value
    if result.detail:
        doc["detail"] = result.detail
    if result.artifacts is not None:
        a = result.artifacts
        doc["duration_ms"] = a.duration_ms
        doc["timed_out"] = result.timed_out
        doc["entries"] = [e.render() for e in a.entries]
        doc["report"] = a.report.to_json()
    if result.features is not None and catalog is not None:
        doc["features"] = result.features.as_dict(catalog)
    return doc


def result_from_json(doc: Mapping[str, Any], catalog: FeatureCatalog | None = None) -> SessionResult:
    status = Status(doc["status"])
    if status is Status.FAILED:
        return SessionResult(
            doc["app_id"], status, FailureReason(doc["reason"]), label=doc.get("label"),
            detail=doc.get("detail", ""),
        )
    # the stored report already has DroidBox fragments merged in; don't re-merge
    entries = [parse_logcat_line(line) for line in doc.get("entries", [])]
    entries = [e for e in entries if e is not None]
    report = report_from_object(doc.get("report", {}))
    calls = []
    for e in entries:
        if e.tag == API_TAG:
            try:
                calls.append(parse_api_call_payload(e.payload))
            except DroidSiftError:
                pass
    artifacts = SessionArtifacts(tuple(entries), tuple(calls), report, doc.get("duration_ms", 0))
    features = None
    if catalog is not None:
        if "features" in doc:
            counts = [0] * len(catalog)
            for name, count in doc["features"].items():
                counts[catalog.index(name)] = int(count)
            features = FeatureVector(tuple(counts), doc["app_id"])
        else:
            features = extract_features(report, calls, catalog, doc["app_id"])
    return SessionResult(
        doc["app_id"], status, None, artifacts, features, doc.get("label"),
        detail=doc.get("detail", ""), timed_out=doc.get("timed_out", False),
    )


def dump_results(results: Iterable[SessionResult], catalog: FeatureCatalog | None = None) -> str:
    return "".join(json.dumps(result_to_json(r, catalog), sort_keys=True) + "\n" for r in results)


def load_results(text: str, catalog: FeatureCatalog | None = None) -> list[SessionResult]:
    return [result_from_json(json.loads(line), catalog) for line in text.splitlines() if line.strip()]


# --- corpus directories -----------------------------------------------------
#
#   <corpus>/labels.csv            app_id,label
#   <corpus>/<app_id>/app.json     app descriptor
#   <corpus>/<app_id>/script.json  simulated-app script


def load_corpus_dir(path: str | Path) -> tuple[list[CorpusEntry], dict[str, AppScript]]:
    root = Path(path)
    labels: dict[str, str | None] = {}
    labels_file = root / "labels.csv"
    if labels_file.is_file():
        with labels_file.open(newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                app_id = row.get("app_id") or ""
                if not _APP_ID_RE.match(app_id) or app_id in (".", ".."):
                    raise ScriptError(f"{labels_file}: bad app id {app_id!r}")
                labels[app_id] = row.get("label") or None
    # labels.csv fixes the analysis order; unlisted app directories follow by name
    listed = [root / app_id for app_id in labels]
    unlisted = sorted(p for p in root.iterdir() if p.is_dir() and p.name not in labels)
    entries = []
    scripts: dict[str, AppScript] = {}
    for app_dir in listed + unlisted:
        descriptor = app_dir / "app.json"
        if not descriptor.is_file():
            if app_dir.name in labels:
                raise ScriptError(f"{descriptor}: listed in labels.csv but missing")
            continue
        app = load_app_descriptor(descriptor)
        script_file = app_dir / "script.json"
        if script_file.is_file():
            try:
                doc = json.loads(script_file.read_text(encoding="utf-8"))
            except ValueError as exc:
                raise ScriptError(f"{script_file}: malformed JSON: {exc}") from exc
            if app.package in scripts:
                raise ScriptError(f"package {app.package} appears twice in {root}")
            scripts[app.package] = AppScript.from_json(doc)
        entries.append(CorpusEntry(app_dir.name, app, labels.get(app_dir.name)))
    return entries, scripts


def write_corpus_dir(
    path: str | Path, entries: Sequence[CorpusEntry], scripts: Mapping[str, AppScript]
) -> None:
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    with (root / "labels.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["app_id", "label"])
        for e in entries:
            writer.writerow([e.app_id, e.label or ""])
    for e in entries:
        app_dir = root / e.app_id
        app_dir.mkdir(exist_ok=True)
        (app_dir / "app.json").write_text(json.dumps(e.app.to_json(), indent=2) + "\n", encoding="utf-8")
        script = scripts.get(e.app.package)
        if script is not None:
            (app_dir / "script.json").write_text(
                json.dumps(script.to_json(), indent=2) + "\n", encoding="utf-8"
            )
