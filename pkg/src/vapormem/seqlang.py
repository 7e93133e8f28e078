"""Parser, formatter and static validator for sequence files.

The file format is line oriented, UTF-8, with ``#`` starting a comment
that runs to the end of the line and blank lines ignored. ``\\n`` and
``\\r\\n`` line endings are both accepted; the formatter emits ``\\n``.

    file   := header line*
    header := "SEQUENCE" name
    line   := rails | op
    rails  := "RAILS" freq+
    op     := "AT" time verb freq [number]
    time   := number("ns" | "us")
    verb   := "WRITE" | "READ" | "PUMP"
    freq   := number "MHz"

Keywords are case sensitive and uppercase. Times are stored in ns
(1 us = 1000 ns, converted exactly). The optional trailing number on a
WRITE is the pulse energy; it defaults to 1.0 and the formatter omits it
at that value. Rails must be declared before any operation uses them.

Validation is separate from parsing: :func:`parse` enforces the grammar
and the constructor-level invariants (monotonic times, declared rails),
while :func:`validate` emits diagnostics for the physical rules:
switching time, deflector band, rail separation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal

from .core import (
    OpKind,
    Operation,
    PhysicsParams,
    Sequence,
    VaporMemError,
)

# declared rails closer than this warn about cross-talk (W001)
MIN_CROSSTALK_FREE_SEPARATION_MHZ = 20.0

_NUMBER = r"[0-9]+(?:\.[0-9]+)?"
_TIME_RE = re.compile(rf"^({_NUMBER})(ns|us)$")
_FREQ_RE = re.compile(rf"^({_NUMBER})MHz$")
_NUMBER_RE = re.compile(rf"^{_NUMBER}$")

_VERBS = {"WRITE": OpKind.WRITE, "READ": OpKind.READ, "PUMP": OpKind.PUMP}


class ParseError(VaporMemError):
    """Syntax or structural error in a sequence document."""

    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ValidationFailure(VaporMemError):
    """Raised when a sequence with error-severity diagnostics is executed."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        listing = "; ".join(f"{d.code} line {d.line}: {d.message}" for d in self.diagnostics)
        super().__init__(f"sequence failed validation: {listing}")


@dataclass(frozen=True)
class Diagnostic:
    """One validator finding. E-codes block execution, W-codes do not.

    Codes:
        E001  operations closer than the deflector switching time
        E002  declared rail outside the deflector band
        E003  operation times not strictly increasing
        E004  operation on an undeclared rail
        W001  declared rails closer than the cross-talk-free separation
    """

    code: str
    severity: str
    line: int
    message: str


def _split_tokens(line: str) -> list[tuple[str, int]]:
    """Tokens of one line with their 1-based starting columns, comments stripped."""
    hash_at = line.find("#")
    if hash_at >= 0:
        line = line[:hash_at]
    out = []
    for m in re.finditer(r"\S+", line):
        out.append((m.group(0), m.start() + 1))
    return out


def parse(text: str) -> Sequence:
    """Parse a sequence document into a Sequence.

    Raises ParseError with line/column information on any grammar
    violation, on a missing or duplicate header or RAILS directive, on an
    operation that uses an undeclared rail, and on non-increasing times.
    """
    name: str | None = None
    rails: list[float] = []
    rails_line: int | None = None
    ops: list[Operation] = []
    op_lines: list[int] = []
    prev_t: float | None = None

    for lineno, raw in enumerate(text.split("\n"), start=1):
        tokens = _split_tokens(raw.rstrip("\r"))
        if not tokens:
            continue
        word, col = tokens[0]

        if name is None:
            if word != "SEQUENCE":
                raise ParseError("expected SEQUENCE header", lineno, col)
            if len(tokens) != 2:
                raise ParseError("SEQUENCE takes exactly one name", lineno, col)
            name = tokens[1][0]
            continue

        if word == "SEQUENCE":
            raise ParseError("duplicate SEQUENCE header", lineno, col)

        if word == "RAILS":
            if rails_line is not None:
                raise ParseError("duplicate RAILS directive", lineno, col)
            if len(tokens) < 2:
                raise ParseError("RAILS needs at least one frequency", lineno, col)
            for tok, tcol in tokens[1:]:
                m = _FREQ_RE.match(tok)
                if not m:
                    raise ParseError(f"malformed frequency {tok!r}", lineno, tcol)
                f = float(m.group(1))
                if f in rails:
                    raise ParseError(f"rail {tok} declared twice", lineno, tcol)
                rails.append(f)
            rails_line = lineno
            continue

        if word == "AT":
            if len(tokens) not in (4, 5):
                raise ParseError("expected AT <time> <verb> <freq> [energy]", lineno, col)
            ttok, tcol = tokens[1]
            m = _TIME_RE.match(ttok)
            if not m:
                raise ParseError(f"malformed time {ttok!r}", lineno, tcol)
            t_ns = float(Decimal(m.group(1)) * (1000 if m.group(2) == "us" else 1))
            vtok, vcol = tokens[2]
            if vtok not in _VERBS:
                raise ParseError(f"unknown operation {vtok!r}", lineno, vcol)
            kind = _VERBS[vtok]
            ftok, fcol = tokens[3]
            fm = _FREQ_RE.match(ftok)
            if not fm:
                raise ParseError(f"malformed frequency {ftok!r}", lineno, fcol)
            f_rail = float(fm.group(1))
            if f_rail not in rails:
                raise ParseError(f"operation on undeclared rail {ftok}", lineno, fcol)
            energy = 1.0
            if len(tokens) == 5:
                etok, ecol = tokens[4]
                if kind is not OpKind.WRITE:
                    raise ParseError("only WRITE takes an energy", lineno, ecol)
                if not _NUMBER_RE.match(etok):
                    raise ParseError(f"malformed energy {etok!r}", lineno, ecol)
                energy = float(etok)
                if energy <= 0.0:
                    raise ParseError("write energy must be strictly positive", lineno, ecol)
            if prev_t is not None and t_ns <= prev_t:
                raise ParseError("operation time does not increase", lineno, tcol)
            prev_t = t_ns
            ops.append(Operation(t_ns=t_ns, kind=kind, f_rail=f_rail, energy=energy))
            op_lines.append(lineno)
            continue

        raise ParseError(f"unknown directive {word!r}", lineno, col)

    if name is None:
        raise ParseError("missing SEQUENCE header", 1)

    return Sequence(name=name, rails=tuple(rails), ops=tuple(ops),
                    src_lines=tuple(op_lines), rails_line=rails_line)


def _fmt_number(x: float) -> str:
    """Shortest plain-decimal rendition (no exponent) that round-trips."""
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    s = repr(float(x))
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
    return s


def format_sequence(seq: Sequence) -> str:
    """Canonical text rendering; parse(format_sequence(s)) equals s.

    Times are printed in ns, as integers when exact; the default write
    energy 1.0 is omitted.
    """
    lines = [f"SEQUENCE {seq.name}"]
    if seq.rails:
        lines.append("RAILS " + " ".join(f"{_fmt_number(f)}MHz" for f in seq.rails))
    for op in seq.ops:
        parts = [f"AT {_fmt_number(op.t_ns)}ns", op.kind.value, f"{_fmt_number(op.f_rail)}MHz"]
        if op.kind is OpKind.WRITE and op.energy != 1.0:
            parts.append(_fmt_number(op.energy))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def validate(seq: Sequence, p: PhysicsParams) -> list[Diagnostic]:
    """Static checks of a sequence against the instrument parameters.

    Returns diagnostics sorted by line then code; an empty list means the
    sequence is clean. Line numbers refer to the source document when the
    sequence was parsed; programmatically built sequences report line 0.
    """
    diags: list[Diagnostic] = []
    rails_line = seq.rails_line if seq.rails_line is not None else 0

    def op_line(i: int) -> int:
        return seq.src_lines[i] if seq.src_lines is not None else 0

    lo, hi = p.band
    for f in seq.rails:
        if not p.in_band(f):
            diags.append(Diagnostic(
                "E002", "error", rails_line,
                f"rail {_fmt_number(f)} MHz outside deflector band [{_fmt_number(lo)}, {_fmt_number(hi)}] MHz"))

    declared = set(seq.rails)
    for i, op in enumerate(seq.ops):
        if op.f_rail not in declared:
            diags.append(Diagnostic(
                "E004", "error", op_line(i),
                f"operation on undeclared rail {_fmt_number(op.f_rail)} MHz"))

    for i in range(1, len(seq.ops)):
        dt = seq.ops[i].t_ns - seq.ops[i - 1].t_ns
        if dt <= 0.0:
            diags.append(Diagnostic(
                "E003", "error", op_line(i),
                f"operation time {_fmt_number(seq.ops[i].t_ns)} ns does not increase"))
        elif dt < p.t_switch:
            diags.append(Diagnostic(
                "E001", "error", op_line(i),
                f"{_fmt_number(dt)} ns between operations is below the "
                f"{_fmt_number(p.t_switch)} ns switching time"))

    rails_sorted = sorted(seq.rails)
    for a, b in zip(rails_sorted, rails_sorted[1:]):
        if b - a < MIN_CROSSTALK_FREE_SEPARATION_MHZ:
            diags.append(Diagnostic(
                "W001", "warning", rails_line,
                f"rails {_fmt_number(a)} and {_fmt_number(b)} MHz are separated by "
                f"{_fmt_number(b - a)} MHz, below the cross-talk-free "
                f"{_fmt_number(MIN_CROSSTALK_FREE_SEPARATION_MHZ)} MHz"))

    diags.sort(key=lambda d: (d.line, d.code))
    return diags
