"""Exception hierarchy shared by the parsers and the pipeline."""

from __future__ import annotations


class DroidSiftError(ValueError):
    """Base class for every structured error raised by this package."""


class DescriptorError(DroidSiftError):
    pass


class SignatureError(DroidSiftError):
    pass


class SignatureListError(SignatureError):
    def __init__(self, message: str, line: int, other_line: int | None = None):
        self.line = line
        self.other_line = other_line
        super().__init__(f"line {line}: {message}")


class PayloadError(DroidSiftError):
    pass


class LogStreamError(DroidSiftError):
    pass


class ReportError(DroidSiftError):
    pass


class CatalogError(DroidSiftError):
    pass


class ExerciserError(DroidSiftError):
    pass


class ProfileError(DroidSiftError):
    pass


class ScriptError(DroidSiftError):
    pass


class DeviceError(DroidSiftError):
    pass


class InstallError(DeviceError):
    pass


class LaunchError(DeviceError):
    pass


class PushError(DeviceError):
    pass


class AggregationError(DroidSiftError):
    pass
