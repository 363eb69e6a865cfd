"""Emulator-independent dynamic analysis of Android app behaviour logs.

Parse API-call signatures and session logs, extract behavioural features
per app, run serial sessions against a device, and compare labelled corpora.
"""

from .errors import DroidSiftError
from .exerciser import AppDescriptor, build_plan, enumerate_components, generate_event_stream
from .features import FeatureCatalog, FeatureVector, binarize, default_catalog, extract_features
from .logparse import (
    ApiCallRecord,
    BehaviorReport,
    LogEntry,
    extract_intent_actions,
    parse_api_call_payload,
    parse_behavior_report,
    parse_logcat_line,
)
from .report import aggregate_comparison, export_matrix, format_percentage, per_app_report
from .sandbox import (
    DeviceProfile,
    SessionResult,
    SimulatedDevice,
    apply_profile,
    profile_sensitivity_run,
    run_batch,
    run_session,
)
from .signature import (
    ApiSignature,
    FieldDescriptor,
    SignatureSet,
    default_signatures,
    load_signature_list,
    match_call,
    parse_api_signature,
    parse_field_descriptor,
    render_api_signature,
)

__version__ = "0.1.0"
