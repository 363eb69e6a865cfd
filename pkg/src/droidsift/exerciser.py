"""Deterministic UI event streams and component launch ordering.

Event streams come from SplitMix64 (Steele, Lea & Flood 2014; reference
constants from Vigna's ``splitmix64.c``), so a given ``(seed, n, screen,
mix)`` always produces the same stream on any platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

from .errors import ExerciserError

MAX_EVENTS = 3000
DEFAULT_EVENTS = 3000
_MASK64 = (1 << 64) - 1

# Keycodes a monkey-style exerciser presses: HOME, BACK, DPAD_*, VOLUME_*, ENTER, MENU, SEARCH.
KEYCODES = (3, 4, 19, 20, 21, 22, 23, 24, 25, 66, 82, 84)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        # plain modulo; the bias is < 2**-50 for the bounds used here
        return self.next() % bound


@dataclass(frozen=True)
class Screen:
    width: int = 480
    height: int = 800

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ExerciserError("screen dimensions must be positive")


DEFAULT_SCREEN = Screen()


@dataclass(frozen=True)
class EventMix:
    """Relative weights of event kinds; defaults favour plain taps."""

    touch: int = 70
    swipe: int = 20
    keypress: int = 10

    def __post_init__(self) -> None:
        if min(self.touch, self.swipe, self.keypress) < 0 or self.total == 0:
            raise ExerciserError("event mix weights must be non-negative and not all zero")

    @property
    def total(self) -> int:
        return self.touch + self.swipe + self.keypress


DEFAULT_MIX = EventMix()


@dataclass(frozen=True)
class Touch:
    sequence: int
    x: int
    y: int

    def render(self) -> str:
        return f"{self.sequence} touch {self.x} {self.y}"


@dataclass(frozen=True)
class Swipe:
    sequence: int
    x1: int
    y1: int
    x2: int
    y2: int
    duration_ms: int

    def render(self) -> str:
        return f"{self.sequence} swipe {self.x1} {self.y1} {self.x2} {self.y2} {self.duration_ms}"


@dataclass(frozen=True)
class KeyPress:
    sequence: int
    keycode: int

    def render(self) -> str:
        return f"{self.sequence} key {self.keycode}"


UiEvent = Union[Touch, Swipe, KeyPress]


def generate_event_stream(
    seed: int,
    n: int = DEFAULT_EVENTS,
    screen: Screen = DEFAULT_SCREEN,
    mix: EventMix = DEFAULT_MIX,
) -> tuple[UiEvent, ...]:
    if not 0 <= n <= MAX_EVENTS:
        raise ExerciserError(f"event count must be within 0..{MAX_EVENTS}, got {n}")
    rng = SplitMix64(seed)
    w, h = screen.width, screen.height
    events: list[UiEvent] = []
    for seq in range(n):
        roll = rng.below(mix.total)
        if roll < mix.touch:
            events.append(Touch(seq, rng.below(w), rng.below(h)))
        elif roll < mix.touch + mix.swipe:
            x1, y1, x2, y2 = rng.below(w), rng.below(h), rng.below(w), rng.below(h)
            events.append(Swipe(seq, x1, y1, x2, y2, 100 + rng.below(900)))
        else:
            events.append(KeyPress(seq, KEYCODES[rng.below(len(KEYCODES))]))
    return tuple(events)


def serialize_events(events) -> str:
    return "".join(e.render() + "\n" for e in events)


@dataclass(frozen=True)
class AppDescriptor:
    package: str
    main_activity: str | None = None
    activities: tuple[str, ...] = ()
    services: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "activities", tuple(self.activities))
        object.__setattr__(self, "services", tuple(self.services))
        if not self.package:
            raise ExerciserError("app descriptor needs a package name")
        components = self.activities + self.services
        if len(set(components)) != len(components):
            raise ExerciserError(f"{self.package}: component names must be unique")
        if self.main_activity is not None and self.main_activity not in self.activities:
            raise ExerciserError(f"{self.package}: main activity {self.main_activity!r} not among activities")

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> AppDescriptor:
        if not isinstance(doc, dict) or not isinstance(doc.get("package"), str):
            raise ExerciserError("app descriptor must be an object with a 'package' string")
        return cls(
            doc["package"],
            doc.get("main_activity"),
            tuple(doc.get("activities", ())),
            tuple(doc.get("services", ())),
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "package": self.package,
            "main_activity": self.main_activity,
            "activities": list(self.activities),
            "services": list(self.services),
        }


def load_app_descriptor(path: str | Path) -> AppDescriptor:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise ExerciserError(f"{path}: malformed JSON: {exc}") from exc
    return AppDescriptor.from_json(doc)


def enumerate_components(app: AppDescriptor) -> list[str]:
    """Main activity first, then the other activities, then services."""
    order = [app.main_activity] if app.main_activity else []
    order += [a for a in app.activities if a != app.main_activity]
    order += list(app.services)
    return order


@dataclass(frozen=True)
class ExercisePlan:
    launch_order: tuple[str, ...]
    events: tuple[UiEvent, ...] = field(repr=False)
    seed: int
    event_count: int


def build_plan(
    app: AppDescriptor,
    seed: int = 0,
    n: int = DEFAULT_EVENTS,
    screen: Screen = DEFAULT_SCREEN,
    mix: EventMix = DEFAULT_MIX,
) -> ExercisePlan:
    events = generate_event_stream(seed, n, screen, mix)
    return ExercisePlan(tuple(enumerate_components(app)), events, seed, len(events))
