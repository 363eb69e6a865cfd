"""Scripted corpora for exercising the pipeline without real apps.

``reference_corpus`` builds a benign/malware corpus whose per-feature
incidences equal a reference 970 + 970 comparison; ``sensitivity_corpus``
builds 31 apps that reveal some behaviours only on a realistic-looking
device; ``random_app`` draws arbitrary sessions for property tests.
"""

from __future__ import annotations

import json
import random
from typing import Any

from .exerciser import AppDescriptor
from .sandbox import AppScript, ConditionalLines, CorpusEntry, DeviceProfile
from .taxonomy import FEATURE_ALIASES, INTENT_EVENTS, REPORT_KEYS

# (feature, benign apps, malware apps) out of 970 analysed apps per class, in rank order.
REFERENCE_COMPARISON: tuple[tuple[str, int, int], ...] = (
    ("PHONE_STATE", 537, 905),
    ("servicestart", 603, 840),
    ("PackageManager", 441, 601),
    ("intent.BOOT_COMPLETED", 150, 534),
    ("Process", 287, 480),
    ("opennet", 295, 471),
    ("checkPermission", 169, 456),
    ("sendnet", 250, 421),
    ("recvnet", 244, 418),
    ("getInstance#1", 279, 417),
    ("deviceId", 229, 367),
    ("getMethod", 256, 358),
    ("parse", 190, 316),
    ("digest", 221, 288),
    ("dataleaks", 147, 282),
    ("getClass", 120, 226),
    ("SubscriberId", 40, 225),
    ("cryptousage", 93, 219),
    ("SimSerialNumber", 13, 212),
    ("lineNumber", 33, 190),
    ("start", 176, 176),
    ("NetworkOperator", 44, 171),
    ("UMSDISCONNECTED", 0, 154),
    ("ContentResolver", 55, 153),
    ("connect", 50, 105),
    ("getApplicationInfo", 48, 91),
    ("SimOperator", 26, 85),
    ("runtime.exec", 40, 70),
    ("initCipher", 67, 70),
    ("getInstance#2", 57, 70),
    ("SMSRECEIVED", 7, 69),
    ("SecretKey", 46, 64),
    ("SimCountryIso", 22, 44),
    ("NEW_OUTGOING_CALL", 11, 42),
    ("ACTION_POWER_CONNECTED", 0, 35),
    ("USER_PRESENT", 22, 31),
    ("SIG_STR", 0, 24),
    ("sendsms", 0, 18),
    ("getLastKnownLocation", 12, 17),
    ("openOrCreateDatabase", 15, 16),
    ("PACKAGE_INSTALL", 1, 15),
    ("WAP_PUSH_RECEIVED", 3, 7),
    ("phonecalls", 0, 6),
    ("SEND_MESSAGE", 0, 6),
)
REFERENCE_CLASS_SIZE = 970

# (feature, apps before profile change, apps after) over 31 emulator-aware samples.
REFERENCE_SENSITIVITY: tuple[tuple[str, int, int], ...] = (
    ("deviceId", 10, 14),
    ("SubscriberId", 3, 9),
    ("SimSerialNumber", 3, 9),
    ("lineNumber", 1, 8),
    ("runtime.exec", 1, 10),
)
SENSITIVITY_APPS = 31
_SENSITIVITY_TRIGGERS = {
    "deviceId": "realistic_imei",
    "SubscriberId": "realistic_imsi",
    "SimSerialNumber": "realistic_sim_serial",
    "lineNumber": "realistic_phone_number",
    "runtime.exec": "realistic_imei",
}

ENHANCED_PROFILE = DeviceProfile(
    imei="122345627895532",
    imsi="234150123456789",
    sim_serial="8944110012345678901",
    phone_number="+447700900123",
)

_TM = "Landroid/telephony/TelephonyManager;"
_STR = "Ljava/lang/String;"

SAMPLE_CALLS: dict[str, str] = {
    "PackageManager": "Landroid/content/pm/PackageManager;->getInstalledPackages(I:=0)Ljava/util/List;:=[PackageInfo{40522f40 com.android.settings}]",
    "Process": "Ljava/lang/Process;->waitFor()I:=0",
    "checkPermission": f"Landroid/content/Context;->checkPermission({_STR}:=android.permission.READ_PHONE_STATE|I:=1234|I:=10045)I:=0",
    "getInstance#1": f"Ljava/security/MessageDigest;->getInstance({_STR}:=MD5)Ljava/security/MessageDigest;:=java.security.MessageDigest$MessageDigestImpl@40526a08",
    "deviceId": f"{_TM}->getDeviceId(){_STR}:=000000000000000",
    "getMethod": "Ljava/lang/Class;->getMethod(Ljava/lang/String;:=invoke|[Ljava/lang/Class;:={})Ljava/lang/reflect/Method;:=public native java.lang.Object java.lang.reflect.Method.invoke",
    "parse": f"Landroid/net/Uri;->parse({_STR}:=content://sms/inbox)Landroid/net/Uri;:=content://sms/inbox",
    "digest": "Ljava/security/MessageDigest;->digest([B:={49,50,51})[B:={32,44,-71}",
    "getClass": "Ljava/lang/Object;->getClass()Ljava/lang/Class;:=class com.example.Main",
    "SubscriberId": f"{_TM}->getSubscriberId(){_STR}:=310260000000000",
    "SimSerialNumber": f"{_TM}->getSimSerialNumber(){_STR}:=89014103211118510720",
    "lineNumber": f"{_TM}->getLine1Number(){_STR}:=15555215554",
    "start": "Ljava/lang/ProcessBuilder;->start()Ljava/lang/Process;:=Process[id=612]",
    "NetworkOperator": f"{_TM}->getNetworkOperator(){_STR}:=310260",
    "ContentResolver": "Landroid/content/ContentResolver;->query(Landroid/net/Uri;:=content://contacts/people|[Ljava/lang/String;:=null|Ljava/lang/String;:=null|[Ljava/lang/String;:=null|Ljava/lang/String;:=null)Landroid/database/Cursor;:=android.content.ContentResolver$CursorWrapperInner@4052e6a0",
    "connect": "Ljava/net/HttpURLConnection;->connect()V",
    "getApplicationInfo": "Landroid/content/Context;->getApplicationInfo()Landroid/content/pm/ApplicationInfo;:=ApplicationInfo{40523f58 com.example}",
    "SimOperator": f"{_TM}->getSimOperator(){_STR}:=310260",
    "runtime.exec": f"Ljava/lang/Runtime;->exec({_STR}:=su)Ljava/lang/Process;:=Process[id=541]",
    "initCipher": "Ljavax/crypto/Cipher;->init(I:=1|Ljava/security/Key;:=javax.crypto.spec.SecretKeySpec@fa77d2ba)V",
    "getInstance#2": f"Ljavax/crypto/Cipher;->getInstance({_STR}:=DES)Ljavax/crypto/Cipher;:=javax.crypto.Cipher@4051f8c0",
    "SecretKey": f"Ljavax/crypto/spec/SecretKeySpec;-><init>([B:={{1,2,3,4,5,6,7,8}}|{_STR}:=DES)V",
    "SimCountryIso": f"{_TM}->getSimCountryIso(){_STR}:=us",
    "SEND_MESSAGE": (
        "Landroid/telephony/SmsManager;->sendTextMessage("
        f"{_STR}:=1782|{_STR}:=null|{_STR}:=532711|"
        "Landroid/app/PendingIntent;:=null|Landroid/app/PendingIntent;:=null)V"
    ),
    "getLastKnownLocation": f"Landroid/location/LocationManager;->getLastKnownLocation({_STR}:=gps)Landroid/location/Location;:=null",
    "openOrCreateDatabase": f"Landroid/content/Context;->openOrCreateDatabase({_STR}:=data.db|I:=0|Landroid/database/sqlite/SQLiteDatabase$CursorFactory;:=null)Landroid/database/sqlite/SQLiteDatabase;:=SQLiteDatabase@405a1c68",
}

# Calls no default signature covers.
NOISE_CALLS = (
    "Landroid/util/Log;->d(Ljava/lang/String;:=MainActivity|Ljava/lang/String;:=onCreate)I:=20",
    "Ljava/lang/String;->length()I:=5",
    "Landroid/app/Activity;->setContentView(I:=2130903040)V",
)

SAMPLE_ENTRIES: dict[str, dict[str, Any]] = {
    "opennet": {"desthost": "10.0.2.2", "destport": "80", "fd": "17"},
    "recvnet": {"host": "10.0.2.2", "port": "80", "data": "485454502f312e31"},
    "sendnet": {"desthost": "10.0.2.2", "destport": "80", "fd": "17", "data": "474554202f"},
    "accessedfiles": {"path": "/data/data/com.example/shared_prefs/a.xml", "operation": "read"},
    "fdaccess": {"path": "/proc/cpuinfo", "operation": "read", "data": "50726f63"},
    "servicestart": {"name": "com.example.BackgroundService"},
    "dexclass": {"path": "/data/data/com.example/files/payload.jar", "type": "dexload"},
    "dataleaks": {"sink": "Network", "tag": ["TAINT_IMEI"], "desthost": "10.0.2.2"},
    "enfperm": {"name": "android.permission.SEND_SMS"},
    "cryptousage": {"algorithm": "DES", "operation": "keyalgo", "key": "1 2 3 4"},
    "sendsms": {"number": "1782", "message": "532711"},
    "phonecalls": {"number": "0900123456"},
}

_SMS_EVENTS = {"SMS_RECEIVED", "WAP_PUSH_RECEIVED"}


def action_string(event: str, rng: random.Random | None = None) -> str:
    prefix = "android.provider.Telephony" if event in _SMS_EVENTS else "android.intent.action"
    if rng is not None and rng.random() < 0.2:
        prefix = prefix.replace("android", "Android", 1)
    return f"{prefix}.{event}"


def _feature_kind(name: str) -> str:
    if name in SAMPLE_CALLS:
        return "api-call"
    if name in REPORT_KEYS:
        return "report-key"
    return "intent-action"


def _script_for(
    package: str,
    features: dict[str, int],
    rng: random.Random,
    install: str = "ok",
    launch: str = "ok",
) -> AppScript:
    """Script whose session exhibits each named feature ``count`` times."""
    on_launch: list[str] = []
    report: dict[str, Any] = {}
    fragments: list[dict[str, Any]] = []
    receivers: list[tuple[str, str]] = []
    t = 0
    for name, count in features.items():
        kind = _feature_kind(name)
        for _ in range(count):
            if kind == "api-call":
                on_launch.append(f"{t} ApiMonitor: {SAMPLE_CALLS[name]}")
                t += rng.randint(0, 40)
            elif kind == "intent-action":
                receivers.append((f"{package}.Receiver{len(receivers)}", action_string(name, rng)))
            else:
                entry = dict(SAMPLE_ENTRIES[name])
                if rng.random() < 0.25:
                    fragments.append({name: [entry]})
                else:
                    report.setdefault(name, []).append(entry)
    if rng.random() < 0.5:
        on_launch.append(f"{t} ApiMonitor: {rng.choice(NOISE_CALLS)}")
    if rng.random() < 0.2:
        receivers.append((f"{package}.Custom", f"{package}.CUSTOM_ACTION"))
    if receivers:
        if len({r for r, _ in receivers}) == len(receivers) and rng.random() < 0.5:
            report["recvaction"] = dict(receivers)
        else:
            report["recvaction"] = [list(p) for p in receivers]
    for frag in fragments:
        on_launch.append(f"{t} DroidBox: {json.dumps(frag)}")
    rng.shuffle(on_launch)
    return AppScript(
        install=install,
        launch=launch,
        on_launch=tuple(on_launch),
        behavior_report=report or None,
    )


def _descriptor(package: str) -> AppDescriptor:
    return AppDescriptor(
        package,
        f"{package}.MainActivity",
        (f"{package}.MainActivity", f"{package}.SettingsActivity"),
        (f"{package}.BackgroundService",),
    )


def reference_corpus(
    seed: int = 2016,
    failures: tuple[int, int] = (30, 256),
) -> tuple[list[CorpusEntry], dict[str, AppScript]]:
    """Benign + malware corpus reproducing the reference incidence counts.

    ``failures`` adds (benign, malware) apps that fail to install or launch;
    they carry behaviours too, so any leak into the counts is visible.
    """
    rng = random.Random(seed)
    entries: list[CorpusEntry] = []
    scripts: dict[str, AppScript] = {}
    for label, column, n_failed in (("benign", 1, failures[0]), ("malware", 2, failures[1])):
        per_app: list[dict[str, int]] = [{} for _ in range(REFERENCE_CLASS_SIZE + n_failed)]
        for row in REFERENCE_COMPARISON:
            name = FEATURE_ALIASES.get(row[0], row[0])
            for i in rng.sample(range(REFERENCE_CLASS_SIZE), row[column]):
                per_app[i][name] = rng.choice((1, 1, 1, 2, 3))
        for i in range(REFERENCE_CLASS_SIZE, len(per_app)):
            for row in rng.sample(REFERENCE_COMPARISON, 5):
                per_app[i][FEATURE_ALIASES.get(row[0], row[0])] = 1
        for i, features in enumerate(per_app):
            app_id = f"{label}-{i:04d}"
            package = f"org.synthetic.{label}.app{i:04d}"
            failing = i >= REFERENCE_CLASS_SIZE
            install = "fail" if failing and i % 2 == 0 else "ok"
            launch = "fail" if failing and i % 2 == 1 else "ok"
            scripts[package] = _script_for(package, features, rng, install, launch)
            entries.append(CorpusEntry(app_id, _descriptor(package), label))
    rng.shuffle(entries)
    return entries, scripts


def sensitivity_corpus(seed: int = 31) -> tuple[list[CorpusEntry], dict[str, AppScript]]:
    """31 apps whose identifier probes partly depend on a realistic device identity."""
    rng = random.Random(seed)
    unconditional: list[list[str]] = [[] for _ in range(SENSITIVITY_APPS)]
    conditional: list[dict[str, list[str]]] = [{} for _ in range(SENSITIVITY_APPS)]
    for name, before, after in REFERENCE_SENSITIVITY:
        chosen = rng.sample(range(SENSITIVITY_APPS), after)
        line = f"{rng.randint(0, 500)} ApiMonitor: {SAMPLE_CALLS[name]}"
        for i in chosen[:before]:
            unconditional[i].append(line)
        for i in chosen[before:]:
            conditional[i].setdefault(_SENSITIVITY_TRIGGERS[name], []).append(line)
    entries = []
    scripts = {}
    for i in range(SENSITIVITY_APPS):
        package = f"com.synthetic.probe{i:02d}"
        scripts[package] = AppScript(
            on_launch=tuple(unconditional[i]),
            profile_conditional=tuple(
                ConditionalLines(req, tuple(lines)) for req, lines in sorted(conditional[i].items())
            ),
            behavior_report={"servicestart": [{"name": f"{package}.Service"}]},
        )
        entries.append(CorpusEntry(f"probe-{i:02d}", _descriptor(package), "malware"))
    return entries, scripts


def random_app(rng: random.Random, index: int = 0) -> tuple[CorpusEntry, AppScript]:
    """An arbitrary app drawing on every feature source, noise, and periodic lines."""
    package = f"net.random.app{index:04d}"
    names = [k for k in REPORT_KEYS if k != "recvaction"] + list(INTENT_EVENTS) + list(SAMPLE_CALLS)
    chosen = rng.sample(names, rng.randint(0, 12))
    features = {n: rng.randint(1, 3) for n in chosen}
    script = _script_for(package, features, rng)
    if rng.random() < 0.5:
        name = rng.choice(list(SAMPLE_CALLS))
        every = (rng.randint(1, 20), f"0 ApiMonitor: {SAMPLE_CALLS[name]}")
        script = AppScript(
            script.install, script.launch, script.on_launch, every, (), script.behavior_report
        )
    return CorpusEntry(f"random-{index:04d}", _descriptor(package), rng.choice(("benign", "malware"))), script
