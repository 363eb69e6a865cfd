"""Fixed vocabularies: behaviour-report keys, broadcast events, API feature bindings."""

from __future__ import annotations

# Sandbox behaviour-report sections, in canonical order.
REPORT_KEYS: tuple[str, ...] = (
    "opennet",
    "recvnet",
    "sendnet",
    "accessedfiles",
    "fdaccess",
    "servicestart",
    "dexclass",
    "dataleaks",
    "enfperm",
    "cryptousage",
    "recvaction",
    "sendsms",
    "phonecalls",
)

# Broadcast events associated with malware, mapped to their group abbreviation.
INTENT_EVENTS: dict[str, str] = {
    "BOOT_COMPLETED": "BOOT",
    "PHONE_STATE": "CALL",
    "NEW_OUTGOING_CALL": "CALL",
    "PACKAGE_ADDED": "PKG",
    "PACKAGE_REMOVED": "PKG",
    "PACKAGE_CHANGED": "PKG",
    "PACKAGE_REPLACED": "PKG",
    "PACKAGE_RESTARTED": "PKG",
    "PACKAGE_INSTALL": "PKG",
    "SMS_RECEIVED": "SMS",
    "WAP_PUSH_RECEIVED": "SMS",
    "UMS_CONNECTED": "USB",
    "UMS_DISCONNECTED": "USB",
    "ACTION_POWER_CONNECTED": "BATT",
    "ACTION_POWER_DISCONNECTED": "BATT",
    "BATTERY_LOW": "BATT",
    "BATTERY_OKAY": "BATT",
    "BATTERY_CHANGED_ACTION": "BATT",
    "ACTION_MAIN": "MAIN",
    "CONNECTIVITY_CHANGE": "NET",
    "PICK_WIFI_WORK": "NET",
    "USER_PRESENT": "SYS",
    "INPUT_METHOD_CHANGED": "SYS",
    "SIG_STR": "SYS",
    "SIM_FULL": "SYS",
}

EVENT_GROUPS: dict[str, str] = {
    "BOOT": "Boot Completed",
    "CALL": "Phone Events",
    "PKG": "Package",
    "SMS": "SMS/MMS",
    "USB": "USB Storage",
    "BATT": "Power/Battery",
    "MAIN": "Main Activity",
    "NET": "Network",
    "SYS": "System Events",
}

_TelephonyManager = "android/telephony/TelephonyManager"
_PackageManager = "android/content/pm/PackageManager"
_Context = "android/content/Context"

# API-call features and the (class, method) keys whose signatures back them.
# The signature list these keys resolve against is a reconstruction: the
# original instrumentation list is unavailable.
API_FEATURE_BINDINGS: tuple[tuple[str, tuple[tuple[str, str], ...]], ...] = (
    ("PackageManager", (
        (_PackageManager, "getInstalledPackages"),
        (_PackageManager, "getInstalledApplications"),
        (_PackageManager, "getPackageInfo"),
    )),
    ("Process", (
        ("java/lang/Process", "getInputStream"),
        ("java/lang/Process", "getOutputStream"),
        ("java/lang/Process", "waitFor"),
        ("java/lang/Process", "destroy"),
    )),
    ("checkPermission", (
        (_Context, "checkPermission"),
        (_PackageManager, "checkPermission"),
    )),
    ("getInstance#1", (("java/security/MessageDigest", "getInstance"),)),
    ("deviceId", ((_TelephonyManager, "getDeviceId"),)),
    ("getMethod", (("java/lang/Class", "getMethod"),)),
    ("parse", (("android/net/Uri", "parse"),)),
    ("digest", (("java/security/MessageDigest", "digest"),)),
    ("getClass", (("java/lang/Object", "getClass"),)),
    ("SubscriberId", ((_TelephonyManager, "getSubscriberId"),)),
    ("SimSerialNumber", ((_TelephonyManager, "getSimSerialNumber"),)),
    ("lineNumber", ((_TelephonyManager, "getLine1Number"),)),
    ("start", (("java/lang/ProcessBuilder", "start"),)),
    ("NetworkOperator", (
        (_TelephonyManager, "getNetworkOperator"),
        (_TelephonyManager, "getNetworkOperatorName"),
    )),
    ("ContentResolver", (
        ("android/content/ContentResolver", "query"),
        ("android/content/ContentResolver", "insert"),
        ("android/content/ContentResolver", "delete"),
    )),
    ("connect", (
        ("java/net/URLConnection", "connect"),
        ("java/net/HttpURLConnection", "connect"),
    )),
    ("getApplicationInfo", ((_Context, "getApplicationInfo"),)),
    ("SimOperator", (
        (_TelephonyManager, "getSimOperator"),
        (_TelephonyManager, "getSimOperatorName"),
    )),
    ("runtime.exec", (("java/lang/Runtime", "exec"),)),
    ("initCipher", (("javax/crypto/Cipher", "init"),)),
    ("getInstance#2", (("javax/crypto/Cipher", "getInstance"),)),
    ("SecretKey", (("javax/crypto/spec/SecretKeySpec", "<init>"),)),
    ("SimCountryIso", ((_TelephonyManager, "getSimCountryIso"),)),
    ("SEND_MESSAGE", (
        ("android/telephony/SmsManager", "sendTextMessage"),
        ("android/telephony/SmsManager", "sendMultipartTextMessage"),
        ("android/telephony/SmsManager", "sendDataMessage"),
    )),
    ("getLastKnownLocation", (("android/location/LocationManager", "getLastKnownLocation"),)),
    ("openOrCreateDatabase", (
        (_Context, "openOrCreateDatabase"),
        ("android/database/sqlite/SQLiteDatabase", "openOrCreateDatabase"),
    )),
)

# Alternate spellings found in reference comparison data -> catalog names.
FEATURE_ALIASES: dict[str, str] = {
    "intent.BOOT_COMPLETED": "BOOT_COMPLETED",
    "UMSDISCONNECTED": "UMS_DISCONNECTED",
    "SMSRECEIVED": "SMS_RECEIVED",
}


def canonical_event(action: str) -> str | None:
    """Map a raw broadcast action to its event constant, case-insensitively.

    Only the final dot-separated segment is compared, so
    ``Android.intent.action.BOOT_COMPLETED`` and ``android.intent.action.boot_completed``
    both resolve to ``BOOT_COMPLETED``.
    """
    segment = action.strip().rsplit(".", 1)[-1].upper()
    return segment if segment in INTENT_EVENTS else None
