"""Pulse schedules: value types, text format, protocol builders and compiler."""

from .builders import (
    absorb_protocol,
    collective_time,
    iswap_time,
    preparation_time,
    singlet_protocol,
    subradiance_protocol,
    superradiance_protocol,
    switch_protocol,
    switch_time,
)
from .compile import CompiledGates, CompiledSegment, Program, compile_schedule
from .dsl import parse_schedule, render
from .types import (
    CustomGate,
    PhaseGate,
    PiPulse,
    SamplePoints,
    SampleRange,
    Schedule,
    ScheduleError,
    Segment,
    settings_for,
)

__all__ = [
    "CompiledGates",
    "CompiledSegment",
    "CustomGate",
    "PhaseGate",
    "PiPulse",
    "Program",
    "SamplePoints",
    "SampleRange",
    "Schedule",
    "ScheduleError",
    "Segment",
    "absorb_protocol",
    "collective_time",
    "compile_schedule",
    "iswap_time",
    "parse_schedule",
    "preparation_time",
    "render",
    "settings_for",
    "singlet_protocol",
    "subradiance_protocol",
    "superradiance_protocol",
    "switch_protocol",
    "switch_time",
]
