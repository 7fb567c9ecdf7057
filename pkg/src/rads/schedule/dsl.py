"""Line-oriented text format for schedules.

Grammar (one directive per line, ``#`` starts a comment)::

    rads-schedule v1                       optional version header
    qubits N                               register Q1..QN; Q0 is the ancilla
    excite r P                             resonator starts in Fock state P
    excite q I [I ...]                     qubits starting in |1>
    segment D[ns] CLAUSE...                hold settings for D ns
        CLAUSE := resonant: I...  |  idle: I...  |  detuned X[MHz]: I...
    gate pi I                              pi rotation of qubit I
    gate unitary I [J] = U00 U01 ...       1- or 2-qubit unitary, row-major
    phase I THETA                          phase gate exp(i THETA) on |1>
    sample A..B step S                     record at A, A+S, ... <= B (ns)
    sample at T [T ...]                    record at explicit times (ns)

Qubits not listed in a segment are idle.  Gates take effect at the segment
boundary where they appear.  ``render`` writes floats with ``repr`` so that
``parse(render(s)) == s`` exactly.
"""

from __future__ import annotations

import math
import re

from ..model import QubitSetting
from .types import (
    CustomGate,
    PhaseGate,
    PiPulse,
    SamplePoints,
    SampleRange,
    Schedule,
    ScheduleError,
    Segment,
    custom_gate_problems,
)

HEADER = "rads-schedule v1"
DIRECTIVES = ("qubits", "excite", "segment", "gate", "phase", "sample")

_TOKEN = re.compile(r"\S+")


class _Tok:
    __slots__ = ("text", "line", "col")

    def __init__(self, text, line, col):
        self.text, self.line, self.col = text, line, col


def _fail(msg, tok: _Tok | None = None, line=None, col=None):
    if tok is not None:
        line, col = tok.line, tok.col
    raise ScheduleError(msg, line, col)


def _tokens(line: str, lineno: int) -> list[_Tok]:
    code = line.split("#", 1)[0]
    return [_Tok(m.group(), lineno, m.start() + 1) for m in _TOKEN.finditer(code)]


def _float(tok: _Tok, what: str, suffix: str = "") -> float:
    text = tok.text
    if suffix and text.endswith(suffix):
        text = text[: -len(suffix)]
    try:
        val = float(text)
    except ValueError:
        _fail(f"malformed number {tok.text!r} for {what}", tok)
    if not math.isfinite(val):
        _fail(f"{what} must be finite, got {tok.text!r}", tok)
    return val


def _int(tok: _Tok, what: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", tok.text):
        _fail(f"expected an integer for {what}, got {tok.text!r}", tok)
    return int(tok.text)


def _qubit(tok: _Tok, n: int) -> int:
    q = _int(tok, "qubit index")
    if not 0 <= q <= n:
        _fail(f"qubit index {q} out of range 0..{n}", tok)
    return q


def _complex(tok: _Tok) -> complex:
    try:
        val = complex(tok.text)
    except ValueError:
        _fail(f"malformed complex number {tok.text!r}", tok)
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        _fail(f"non-finite matrix entry {tok.text!r}", tok)
    return val


def parse_schedule(text: str) -> Schedule:
    """Parse schedule text; raises :class:`ScheduleError` with line and column."""
    n = None
    photons = 0
    excited: list[int] = []
    ops = []
    samples = []  # (spec, token)
    seen_excite_r = None
    lines = text.splitlines()
    first_code = True
    for lineno, raw in enumerate(lines, start=1):
        toks = _tokens(raw, lineno)
        if not toks:
            continue
        head = toks[0]
        if first_code and head.text == "rads-schedule":
            first_code = False
            if len(toks) != 2 or toks[1].text != "v1":
                _fail("unsupported schedule version (expected 'rads-schedule v1')", toks[-1])
            continue
        first_code = False
        word = head.text
        if word not in DIRECTIVES:
            _fail(f"unknown directive {word!r}", head)
        if word == "qubits":
            if n is not None:
                _fail("qubit count declared twice", head)
            if len(toks) != 2:
                _fail("usage: qubits N", head)
            n = _int(toks[1], "qubit count")
            if n < 1:
                _fail(f"qubit count must be >= 1, got {n}", toks[1])
            continue
        if n is None:
            _fail(f"'{word}' before 'qubits'", head)
        args = toks[1:]
        if word == "excite":
            if not args or args[0].text not in ("r", "q"):
                _fail("usage: excite r P | excite q I...", args[0] if args else head)
            if args[0].text == "r":
                if len(args) != 2:
                    _fail("usage: excite r P", head)
                if seen_excite_r is not None:
                    _fail("resonator excitation given twice", head)
                photons = _int(args[1], "photon number")
                if photons < 0:
                    _fail(f"photon number must be >= 0, got {photons}", args[1])
                seen_excite_r = head
            else:
                if len(args) < 2:
                    _fail("usage: excite q I [I ...]", head)
                for t in args[1:]:
                    q = _qubit(t, n)
                    if q in excited:
                        _fail(f"qubit {q} excited twice", t)
                    excited.append(q)
        elif word == "segment":
            ops.append(_parse_segment(head, args, n))
        elif word == "gate":
            ops.append(_parse_gate(head, args, n))
        elif word == "phase":
            if len(args) != 2:
                _fail("usage: phase I THETA", head)
            ops.append(PhaseGate(_qubit(args[0], n), _float(args[1], "phase angle")))
        elif word == "sample":
            samples.append((_parse_sample(head, args), head))
    if n is None:
        _fail("schedule declares no 'qubits'", line=max(len(lines), 1), col=1)
    sched = Schedule(n, tuple(ops), (), tuple(excited), photons)
    total = sched.total_duration
    for spec, tok in samples:
        bad = [t for t in spec.times() if not (-1e-9 <= t <= total + 1e-9)]
        if bad:
            _fail(
                f"sample times outside the schedule [0, {total!r}] ns: "
                + ", ".join(repr(float(t)) for t in bad[:5])
                + (" ..." if len(bad) > 5 else ""),
                tok,
            )
    return Schedule(n, tuple(ops), tuple(s for s, _ in samples), tuple(excited), photons)


def _parse_segment(head: _Tok, args: list[_Tok], n: int) -> Segment:
    if not args:
        _fail("usage: segment DURATION[ns] CLAUSE...", head)
    duration = _float(args[0], "segment duration", suffix="ns")
    if duration < 0:
        _fail(f"negative segment duration {args[0].text!r}", args[0])
    settings = [QubitSetting.idle()] * (n + 1)
    assigned: set[int] = set()
    current = None
    i = 1
    while i < len(args):
        t = args[i]
        if t.text in ("resonant:", "idle:"):
            current = QubitSetting(t.text[:-1])
        elif t.text == "detuned":
            if i + 1 >= len(args) or not args[i + 1].text.endswith(":"):
                _fail("usage: detuned X[MHz]: I...", t)
            i += 1
            d = args[i]
            text = d.text[:-1]
            val = _float(_Tok(text, d.line, d.col), "detuning", suffix="MHz")
            current = QubitSetting.detuned(val)
        elif t.text.endswith(":"):
            _fail(f"unknown qubit mode {t.text[:-1]!r}", t)
        else:
            if current is None:
                _fail("qubit index before any 'resonant:', 'idle:' or 'detuned X:' clause", t)
            q = _qubit(t, n)
            if q in assigned:
                _fail(f"qubit {q} assigned twice in one segment", t)
            assigned.add(q)
            settings[q] = current
        i += 1
    return Segment(duration, tuple(settings))


def _parse_gate(head: _Tok, args: list[_Tok], n: int):
    if not args:
        _fail("usage: gate pi I | gate unitary I [J] = ...", head)
    kind = args[0]
    if kind.text == "pi":
        if len(args) != 2:
            _fail("usage: gate pi I", kind)
        return PiPulse(_qubit(args[1], n))
    if kind.text == "unitary":
        try:
            eq = next(i for i, t in enumerate(args) if t.text == "=")
        except StopIteration:
            _fail("usage: gate unitary I [J] = U00 U01 ...", kind)
        qubits = tuple(_qubit(t, n) for t in args[1:eq])
        if len(qubits) not in (1, 2):
            _fail(f"unitary gates act on 1 or 2 qubits, got {len(qubits)}", kind)
        entries = [_complex(t) for t in args[eq + 1:]]
        dim = 2 ** len(qubits)
        if len(entries) != dim * dim:
            _fail(f"{len(qubits)}-qubit gate needs {dim * dim} entries, got {len(entries)}", args[eq])
        rows = tuple(tuple(entries[r * dim:(r + 1) * dim]) for r in range(dim))
        gate = CustomGate(qubits, rows)
        problems = custom_gate_problems(gate)
        if problems:
            _fail(problems[0], kind)
        return gate
    _fail(f"unknown gate {kind.text!r}", kind)


def _parse_sample(head: _Tok, args: list[_Tok]):
    if args and args[0].text == "at":
        if len(args) < 2:
            _fail("usage: sample at T [T ...]", head)
        times = tuple(_float(t, "sample time", suffix="ns") for t in args[1:])
        if any(b < a for a, b in zip(times, times[1:])):
            _fail("sample times must be sorted", args[1])
        return SamplePoints(times)
    if len(args) != 3 or args[1].text != "step" or ".." not in args[0].text:
        _fail("usage: sample A..B step S", args[0] if args else head)
    a, b = args[0].text.split("..", 1)
    rng = args[0]
    start = _float(_Tok(a, rng.line, rng.col), "sample start", suffix="ns")
    stop = _float(_Tok(b, rng.line, rng.col + len(a) + 2), "sample stop", suffix="ns")
    step = _float(args[2], "sample step", suffix="ns")
    if step <= 0:
        _fail(f"sample step must be > 0, got {args[2].text}", args[2])
    if stop < start:
        _fail(f"sample range {args[0].text} is reversed", rng)
    return SampleRange(start, stop, step)


def _fmt(x: float) -> str:
    return repr(float(x))


def render(schedule: Schedule) -> str:
    """Text form of ``schedule``; parses back to an equal value."""
    out = [HEADER, f"qubits {schedule.n_qubits}"]
    if schedule.photons:
        out.append(f"excite r {schedule.photons}")
    if schedule.excited:
        out.append("excite q " + " ".join(map(str, schedule.excited)))
    for op in schedule.ops:
        if isinstance(op, Segment):
            out.append(_render_segment(op))
        elif isinstance(op, PiPulse):
            out.append(f"gate pi {op.qubit}")
        elif isinstance(op, PhaseGate):
            out.append(f"phase {op.qubit} {_fmt(op.theta)}")
        elif isinstance(op, CustomGate):
            entries = " ".join(repr(complex(x)) for row in op.unitary for x in row)
            out.append(f"gate unitary {' '.join(map(str, op.qubits))} = {entries}")
    for spec in schedule.samples:
        if isinstance(spec, SampleRange):
            out.append(f"sample {_fmt(spec.start)}..{_fmt(spec.stop)} step {_fmt(spec.step)}")
        else:
            out.append("sample at " + " ".join(_fmt(t) for t in spec.times_ns))
    return "\n".join(out) + "\n"


def _render_segment(seg: Segment) -> str:
    groups: dict[QubitSetting, list[int]] = {}
    for q, s in enumerate(seg.settings):
        if s.mode != "idle":
            groups.setdefault(s, []).append(q)
    parts = [f"segment {_fmt(seg.duration)}ns"]
    for s, qs in groups.items():
        head = "resonant:" if s.mode == "resonant" else f"detuned {_fmt(s.detuning_mhz)}MHz:"
        parts.append(head + " " + " ".join(map(str, qs)))
    return " ".join(parts)
