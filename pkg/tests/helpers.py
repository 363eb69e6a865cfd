"""Random generators and a naive reference scanner shared by the test modules."""

import json
import random
import re
import string
from collections import Counter

from droidsift.signature import PRIMITIVE_CODES, ApiSignature, FieldDescriptor

_NAME_CHARS = string.ascii_letters + string.digits + "_$"


def random_class_name(rng: random.Random) -> str:
    length = rng.randint(1, 60)
    chars = [rng.choice(_NAME_CHARS) for _ in range(length)]
    # sprinkle package separators, never leading/trailing/doubled
    for i in range(1, length - 1):
        if rng.random() < 0.15 and chars[i - 1] != "/":
            chars[i] = "/"
    return "".join(chars)


def random_descriptor(rng: random.Random, allow_void: bool = False) -> FieldDescriptor:
    if allow_void and rng.random() < 0.2:
        return FieldDescriptor("V")
    depth = rng.choice((0, 0, 0, 1, 2, 3))
    if rng.random() < 0.5:
        base = FieldDescriptor(rng.choice(PRIMITIVE_CODES))
    else:
        base = FieldDescriptor(random_class_name(rng), is_class=True)
    return base.array_of(depth) if depth else base


def random_method_name(rng: random.Random) -> str:
    if rng.random() < 0.1:
        return rng.choice(("<init>", "<clinit>"))
    head = rng.choice(string.ascii_letters + "_$")
    return head + "".join(rng.choice(_NAME_CHARS) for _ in range(rng.randint(0, 20)))


def random_signature(rng: random.Random) -> ApiSignature:
    owner = FieldDescriptor(random_class_name(rng), is_class=True)
    method = random_method_name(rng)
    if rng.random() < 0.3:
        return ApiSignature(owner, method)
    params = tuple(random_descriptor(rng) for _ in range(rng.randint(0, 6)))
    return ApiSignature(owner, method, params, random_descriptor(rng, allow_void=True))


# --- naive oracle -------------------------------------------------------------
# Written against the corpus text, not against the catalog: a call counts
# toward a feature when its "Lclass;->method(" prefix appears in this table.

ORACLE_CALL_MARKERS = {
    "PackageManager": ("Landroid/content/pm/PackageManager;->getInstalledPackages(",
                       "Landroid/content/pm/PackageManager;->getInstalledApplications(",
                       "Landroid/content/pm/PackageManager;->getPackageInfo("),
    "Process": ("Ljava/lang/Process;->getInputStream(", "Ljava/lang/Process;->getOutputStream(",
                "Ljava/lang/Process;->waitFor(", "Ljava/lang/Process;->destroy("),
    "checkPermission": ("Landroid/content/Context;->checkPermission(",
                        "Landroid/content/pm/PackageManager;->checkPermission("),
    "getInstance#1": ("Ljava/security/MessageDigest;->getInstance(",),
    "deviceId": ("Landroid/telephony/TelephonyManager;->getDeviceId(",),
    "getMethod": ("Ljava/lang/Class;->getMethod(",),
    "parse": ("Landroid/net/Uri;->parse(",),
    "digest": ("Ljava/security/MessageDigest;->digest(",),
    "getClass": ("Ljava/lang/Object;->getClass(",),
    "SubscriberId": ("Landroid/telephony/TelephonyManager;->getSubscriberId(",),
    "SimSerialNumber": ("Landroid/telephony/TelephonyManager;->getSimSerialNumber(",),
    "lineNumber": ("Landroid/telephony/TelephonyManager;->getLine1Number(",),
    "start": ("Ljava/lang/ProcessBuilder;->start(",),
    "NetworkOperator": ("Landroid/telephony/TelephonyManager;->getNetworkOperator(",
                        "Landroid/telephony/TelephonyManager;->getNetworkOperatorName("),
    "ContentResolver": ("Landroid/content/ContentResolver;->query(", "Landroid/content/ContentResolver;->insert(",
                        "Landroid/content/ContentResolver;->delete("),
    "connect": ("Ljava/net/URLConnection;->connect(", "Ljava/net/HttpURLConnection;->connect("),
    "getApplicationInfo": ("Landroid/content/Context;->getApplicationInfo(",),
    "SimOperator": ("Landroid/telephony/TelephonyManager;->getSimOperator(",
                    "Landroid/telephony/TelephonyManager;->getSimOperatorName("),
    "runtime.exec": ("Ljava/lang/Runtime;->exec(",),
    "initCipher": ("Ljavax/crypto/Cipher;->init(",),
    "getInstance#2": ("Ljavax/crypto/Cipher;->getInstance(",),
    "SecretKey": ("Ljavax/crypto/spec/SecretKeySpec;-><init>(",),
    "SimCountryIso": ("Landroid/telephony/TelephonyManager;->getSimCountryIso(",),
    "SEND_MESSAGE": ("Landroid/telephony/SmsManager;->sendTextMessage(",
                     "Landroid/telephony/SmsManager;->sendMultipartTextMessage(",
                     "Landroid/telephony/SmsManager;->sendDataMessage("),
    "getLastKnownLocation": ("Landroid/location/LocationManager;->getLastKnownLocation(",),
    "openOrCreateDatabase": ("Landroid/content/Context;->openOrCreateDatabase(",
                             "Landroid/database/sqlite/SQLiteDatabase;->openOrCreateDatabase("),
}

ORACLE_EVENTS = set("""
BOOT_COMPLETED PHONE_STATE NEW_OUTGOING_CALL PACKAGE_ADDED PACKAGE_REMOVED PACKAGE_CHANGED
PACKAGE_REPLACED PACKAGE_RESTARTED PACKAGE_INSTALL SMS_RECEIVED WAP_PUSH_RECEIVED UMS_CONNECTED
UMS_DISCONNECTED ACTION_POWER_CONNECTED ACTION_POWER_DISCONNECTED BATTERY_LOW BATTERY_OKAY
BATTERY_CHANGED_ACTION ACTION_MAIN CONNECTIVITY_CHANGE PICK_WIFI_WORK USER_PRESENT
INPUT_METHOD_CHANGED SIG_STR SIM_FULL
""".split())

_LINE = re.compile(r"^\d+ (\S+): (.*)$")


def oracle_scan(script_text: str, event_count: int) -> dict[str, int]:
    """Expected nonzero feature counts for a serialized app script."""
    doc = json.loads(script_text)
    lines = list(doc.get("on_launch", []))
    every = doc.get("on_event_every_k")
    if every:
        lines += [every["line"]] * (event_count // every["k"])
    counts: Counter = Counter()
    sections: list[tuple[str, object]] = list((doc.get("behavior_report") or {}).items())
    for line in lines:
        tag, payload = _LINE.match(line).groups()
        if tag == "ApiMonitor":
            for feature, markers in ORACLE_CALL_MARKERS.items():
                if any(payload.startswith(m) for m in markers):
                    counts[feature] += 1
        elif tag == "DroidBox":
            sections += list(json.loads(payload).items())
    for key, value in sections:
        if key == "recvaction":
            actions = list(value.values()) if isinstance(value, dict) else [a for _, a in value]
            counts["recvaction"] += len(actions)
            for action in actions:
                tail = action.rsplit(".", 1)[-1].upper()
                if tail in ORACLE_EVENTS:
                    counts[tail] += 1
        else:
            counts[key] += len(value)
    return {k: v for k, v in counts.items() if v}
