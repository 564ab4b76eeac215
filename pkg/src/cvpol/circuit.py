"""Line-oriented description language for polarization optics circuits.

One statement per line, whitespace-separated tokens, `#` starts a comment.
Every named port is an (x, y) polarization mode pair.  Angles are degrees,
amplitudes are sqrt(photons per pulse), squeezing is in dB.

    source coh NAME AMPLITUDE [pol=x|y|diag] [phase_deg=F]
    source sq NAME x|y AMPLITUDE SQUEEZE_DB ANTISQUEEZE_DB [phase_deg=F]
    source vac NAME
    pbs IN1 IN2 -> OUT1 OUT2
    bs TRANSMITTANCE IN1 IN2 -> OUT1 OUT2 [conv=plain|flip|mirrored]
    wp half|quarter ANGLE_DEG IN -> OUT
    rot ANGLE_DEG IN -> OUT
    phase ANGLE_DEG IN -> OUT
    loss EFFICIENCY IN -> OUT
    measure stokes PORT S0|S1|S2|S3
    measure joint S0|S1|S2|S3 +|- PORT_A PORT_B

Ports are single-assignment and consumed at most once: sources and element
outputs define fresh names, element inputs consume live ones, so the port
graph is a DAG by construction.  Measurements observe the final state and
must reference ports still live at the end of the program.  Unknown
keywords are errors; unknown `key=value` options are warnings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

STOKES_TOKENS = ("S0", "S1", "S2", "S3")
BS_CONV_TOKENS = ("plain", "flip", "mirrored")
POL_TOKENS = ("x", "y", "diag")

# known optional `key=value` fields per statement head
KNOWN_OPTIONS = {
    "source coh": ("pol", "phase_deg"),
    "source sq": ("phase_deg",),
    "bs": ("conv",),
}


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    severity: str          # "error" | "warning"
    message: str

    def render(self, filename: str = "<circuit>") -> str:
        return f"{filename}:{self.line}:{self.column}: {self.severity}: {self.message}"


class CircuitSyntaxError(ValueError):
    """Raised when parsing produced at least one error diagnostic."""

    def __init__(self, diagnostics: list[ParseDiagnostic], filename: str = "<circuit>"):
        self.diagnostics = list(diagnostics)
        self.filename = filename
        errors = [d for d in self.diagnostics if d.severity == "error"]
        head = errors[0] if errors else self.diagnostics[0]
        more = f" (+{len(errors) - 1} more)" if len(errors) > 1 else ""
        super().__init__(head.render(filename) + more)


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class SourceStmt:
    kind: str                      # "coh" | "sq" | "vac"
    name: str
    amplitude: float = 0.0
    pol: str = "diag"              # bright-mode placement
    squeeze_db: float = 0.0
    antisqueeze_db: float = 0.0
    phase_deg: float = 0.0
    line: int = 0
    column: int = 0

    def signature(self) -> tuple:
        return (
            "source", self.kind, self.name, self.amplitude, self.pol,
            self.squeeze_db, self.antisqueeze_db, self.phase_deg,
        )


@dataclass(frozen=True)
class ElementStmt:
    kind: str                      # "pbs" | "bs" | "wp" | "rot" | "phase" | "loss"
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    transmittance: float = 0.5
    convention: str = "plain"
    waveplate: str = ""            # "half" | "quarter" for wp
    angle_deg: float = 0.0
    efficiency: float = 1.0
    line: int = 0
    column: int = 0

    def signature(self) -> tuple:
        return (
            "element", self.kind, self.inputs, self.outputs, self.transmittance,
            self.convention, self.waveplate, self.angle_deg, self.efficiency,
        )


@dataclass(frozen=True)
class MeasureStmt:
    kind: str                      # "stokes" | "joint"
    parameter: int                 # 0..3
    ports: tuple[str, ...]
    sign: int = 0                  # +1 / -1 for joint, 0 for single
    line: int = 0
    column: int = 0

    def signature(self) -> tuple:
        return ("measure", self.kind, self.parameter, self.ports, self.sign)


Statement = SourceStmt | ElementStmt | MeasureStmt


@dataclass(frozen=True)
class CircuitProgram:
    """Validated program: ordered statements plus non-fatal diagnostics.

    metadata carries scenario context (source provenance, detection chain,
    parameter values) that presets attach for reporting; it does not affect
    compilation or structural identity.
    """

    name: str
    statements: tuple[Statement, ...]
    warnings: tuple[ParseDiagnostic, ...] = ()
    metadata: dict = field(default_factory=dict)

    @property
    def sources(self) -> tuple[SourceStmt, ...]:
        return tuple(s for s in self.statements if isinstance(s, SourceStmt))

    @property
    def elements(self) -> tuple[ElementStmt, ...]:
        return tuple(s for s in self.statements if isinstance(s, ElementStmt))

    @property
    def measurements(self) -> tuple[MeasureStmt, ...]:
        return tuple(s for s in self.statements if isinstance(s, MeasureStmt))

    def signature(self) -> tuple:
        """Structural identity, independent of formatting and positions."""
        return tuple(s.signature() for s in self.statements)


def _tokenize(line_text: str, line_no: int) -> list[Token]:
    code = line_text.split("#", 1)[0]
    return [
        Token(m.group(0), line_no, m.start() + 1)
        for m in re.finditer(r"\S+", code)
    ]


class _LineParser:
    """Consumes one statement's tokens left to right with positioned errors."""

    def __init__(self, tokens: list[Token], diags: list[ParseDiagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diags = diags
        self.line = tokens[0].line
        self.end_col = tokens[-1].column + len(tokens[-1].text)

    def error(self, message: str, token: Token | None = None):
        col = token.column if token else (
            self.tokens[self.pos].column if self.pos < len(self.tokens) else self.end_col
        )
        self.diags.append(ParseDiagnostic(self.line, col, "error", message))
        raise _StatementError()

    def warn(self, message: str, token: Token):
        self.diags.append(ParseDiagnostic(self.line, token.column, "warning", message))

    def take(self, what: str) -> Token:
        if self.pos >= len(self.tokens):
            self.error(f"expected {what}")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def take_number(self, what: str, lo: float | None = None, hi: float | None = None) -> float:
        tok = self.take(what)
        try:
            value = float(tok.text)
        except ValueError:
            self.error(f"expected a number for {what}, got {tok.text!r}", tok)
        if lo is not None and not (lo <= value <= hi):
            self.error(f"{what} must be in [{lo:g}, {hi:g}], got {tok.text}", tok)
        return value

    def take_arrow(self):
        tok = self.take("'->'")
        if tok.text != "->":
            self.error(f"expected '->', got {tok.text!r}", tok)

    def take_choice(self, what: str, choices: tuple[str, ...]) -> str:
        tok = self.take(what)
        if tok.text not in choices:
            self.error(f"unknown {what} {tok.text!r}; expected one of {', '.join(choices)}", tok)
        return tok.text

    def finish(self):
        if self.pos < len(self.tokens):
            tok = self.tokens[self.pos]
            self.error(f"unexpected trailing token {tok.text!r}", tok)

    def split_options(self, head: str) -> dict[str, Token]:
        """Pull trailing key=value tokens off the end; warn on unknown keys."""
        options: dict[str, Token] = {}
        known = KNOWN_OPTIONS.get(head, ())
        while self.tokens and "=" in self.tokens[-1].text and self.tokens[-1].text != "->":
            tok = self.tokens.pop()
            key, _, value = tok.text.partition("=")
            if key in known:
                options[key] = Token(value, tok.line, tok.column + len(key) + 1)
            else:
                self.warn(f"unknown optional field {key!r} ignored", tok)
        return options


class _StatementError(Exception):
    """Internal: abandons the current statement after recording an error."""


class _PortTable:
    def __init__(self, diags: list[ParseDiagnostic]):
        self.state: dict[str, str] = {}      # name -> "live" | "consumed"
        self.diags = diags

    def define(self, tok: Token, parser: _LineParser):
        if tok.text == "->":
            parser.error("expected a port name, got '->'", tok)
        if tok.text in self.state:
            parser.error(f"port {tok.text!r} is already defined", tok)
        self.state[tok.text] = "live"

    def consume(self, tok: Token, parser: _LineParser):
        status = self.state.get(tok.text)
        if status is None:
            parser.error(f"unknown port {tok.text!r}", tok)
        if status == "consumed":
            parser.error(f"port {tok.text!r} was already consumed", tok)
        self.state[tok.text] = "consumed"


def parse(text: str, filename: str = "<circuit>", name: str = "") -> CircuitProgram:
    """Parse circuit source text into a validated program.

    Raises CircuitSyntaxError carrying all diagnostics if any statement has
    an error; warnings alone are attached to the returned program.
    """
    diags: list[ParseDiagnostic] = []
    statements: list[Statement] = []
    ports = _PortTable(diags)
    measures: list[tuple[MeasureStmt, list[Token]]] = []

    for line_no, line_text in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(line_text, line_no)
        if not tokens:
            continue
        p = _LineParser(tokens, diags)
        try:
            stmt = _parse_statement(p, ports, measures)
        except _StatementError:
            continue
        if stmt is not None:
            statements.append(stmt)

    # measurements observe the final state: their ports must end up live
    for stmt, toks in measures:
        for tok in toks:
            status = ports.state.get(tok.text)
            if status is None:
                diags.append(ParseDiagnostic(
                    tok.line, tok.column, "error", f"unknown port {tok.text!r}"
                ))
            elif status == "consumed":
                diags.append(ParseDiagnostic(
                    tok.line, tok.column, "error",
                    f"measured port {tok.text!r} is consumed by an element",
                ))

    errors = [d for d in diags if d.severity == "error"]
    if errors:
        raise CircuitSyntaxError(diags, filename)
    warnings = tuple(d for d in diags if d.severity == "warning")
    return CircuitProgram(name=name or filename, statements=tuple(statements), warnings=warnings)


def _parse_statement(p: _LineParser, ports: _PortTable, measures) -> Statement | None:
    head = p.take("a statement keyword")
    if head.text == "source":
        return _parse_source(p, ports)
    if head.text == "pbs":
        return _parse_two_port(p, ports, "pbs")
    if head.text == "bs":
        return _parse_bs(p, ports)
    if head.text == "wp":
        return _parse_waveplate(p, ports)
    if head.text in ("rot", "phase"):
        angle = p.take_number("angle in degrees")
        return _parse_one_port(p, ports, head.text, angle_deg=angle)
    if head.text == "loss":
        eta = p.take_number("efficiency", 0.0, 1.0)
        return _parse_one_port(p, ports, "loss", efficiency=eta)
    if head.text == "measure":
        stmt_and_tokens = _parse_measure(p)
        measures.append(stmt_and_tokens)
        return stmt_and_tokens[0]
    p.error(f"unknown keyword {head.text!r}", head)


def _parse_source(p: _LineParser, ports: _PortTable) -> SourceStmt:
    kind_tok = p.take("source kind")
    kind = kind_tok.text
    line, col = kind_tok.line, kind_tok.column
    if kind == "coh":
        options = p.split_options("source coh")
        name_tok = p.take("port name")
        amp = p.take_number("amplitude")
        p.finish()
        pol = "diag"
        phase = 0.0
        if "pol" in options:
            tok = options["pol"]
            if tok.text not in POL_TOKENS:
                p.error(f"unknown pol {tok.text!r}; expected one of {', '.join(POL_TOKENS)}", tok)
            pol = tok.text
        if "phase_deg" in options:
            tok = options["phase_deg"]
            try:
                phase = float(tok.text)
            except ValueError:
                p.error(f"expected a number for phase_deg, got {tok.text!r}", tok)
        ports.define(name_tok, p)
        return SourceStmt("coh", name_tok.text, amplitude=amp, pol=pol,
                          phase_deg=phase, line=line, column=col)
    if kind == "sq":
        options = p.split_options("source sq")
        name_tok = p.take("port name")
        pol = p.take_choice("polarization", ("x", "y"))
        amp = p.take_number("amplitude")
        sq_tok = p.tokens[p.pos] if p.pos < len(p.tokens) else None
        sq = p.take_number("squeezing in dB")
        asq_tok = p.tokens[p.pos] if p.pos < len(p.tokens) else None
        asq = p.take_number("anti-squeezing in dB")
        p.finish()
        if sq > 0:
            p.error(f"squeezing must be <= 0 dB, got {sq:g}", sq_tok)
        if asq < 0:
            p.error(f"anti-squeezing must be >= 0 dB, got {asq:g}", asq_tok)
        if sq + asq < 0:
            # V(X) V(Y) >= 1 in linear units
            p.error(f"squeeze/anti-squeeze pair ({sq:g}, {asq:g}) dB breaks the "
                    "uncertainty floor", asq_tok)
        phase = 0.0
        if "phase_deg" in options:
            tok = options["phase_deg"]
            try:
                phase = float(tok.text)
            except ValueError:
                p.error(f"expected a number for phase_deg, got {tok.text!r}", tok)
        ports.define(name_tok, p)
        return SourceStmt("sq", name_tok.text, amplitude=amp, pol=pol,
                          squeeze_db=sq, antisqueeze_db=asq, phase_deg=phase,
                          line=line, column=col)
    if kind == "vac":
        name_tok = p.take("port name")
        p.finish()
        ports.define(name_tok, p)
        return SourceStmt("vac", name_tok.text, line=line, column=col)
    p.error(f"unknown source kind {kind!r}; expected coh, sq, or vac", kind_tok)


def _parse_two_port(p: _LineParser, ports: _PortTable, kind: str, **params) -> ElementStmt:
    in1 = p.take("input port")
    in2 = p.take("input port")
    p.take_arrow()
    out1 = p.take("output port")
    out2 = p.take("output port")
    p.finish()
    if in1.text == in2.text:
        p.error(f"element inputs must differ, got {in1.text!r} twice", in2)
    ports.consume(in1, p)
    ports.consume(in2, p)
    ports.define(out1, p)
    ports.define(out2, p)
    return ElementStmt(kind, (in1.text, in2.text), (out1.text, out2.text),
                       line=in1.line, column=in1.column, **params)


def _parse_bs(p: _LineParser, ports: _PortTable) -> ElementStmt:
    options = p.split_options("bs")
    t = p.take_number("transmittance", 0.0, 1.0)
    conv = "plain"
    if "conv" in options:
        tok = options["conv"]
        if tok.text not in BS_CONV_TOKENS:
            p.error(f"unknown conv {tok.text!r}; expected one of {', '.join(BS_CONV_TOKENS)}", tok)
        conv = tok.text
    return _parse_two_port(p, ports, "bs", transmittance=t, convention=conv)


def _parse_waveplate(p: _LineParser, ports: _PortTable) -> ElementStmt:
    wp_kind = p.take_choice("waveplate kind", ("half", "quarter"))
    angle = p.take_number("angle in degrees")
    return _parse_one_port(p, ports, "wp", waveplate=wp_kind, angle_deg=angle)


def _parse_one_port(p: _LineParser, ports: _PortTable, kind: str, **params) -> ElementStmt:
    inp = p.take("input port")
    p.take_arrow()
    out = p.take("output port")
    p.finish()
    ports.consume(inp, p)
    ports.define(out, p)
    return ElementStmt(kind, (inp.text,), (out.text,),
                       line=inp.line, column=inp.column, **params)


def _parse_measure(p: _LineParser) -> tuple[MeasureStmt, list[Token]]:
    kind = p.take_choice("measurement kind", ("stokes", "joint"))
    if kind == "stokes":
        port = p.take("port name")
        param_tok = p.take("Stokes parameter")
        p.finish()
        if param_tok.text not in STOKES_TOKENS:
            p.error(f"unknown Stokes parameter {param_tok.text!r}; "
                    f"expected one of {', '.join(STOKES_TOKENS)}", param_tok)
        stmt = MeasureStmt("stokes", int(param_tok.text[1]), (port.text,),
                           line=port.line, column=port.column)
        return stmt, [port]
    param_tok = p.take("Stokes parameter")
    if param_tok.text not in STOKES_TOKENS:
        p.error(f"unknown Stokes parameter {param_tok.text!r}; "
                f"expected one of {', '.join(STOKES_TOKENS)}", param_tok)
    sign_tok = p.take("combination sign")
    if sign_tok.text not in ("+", "-"):
        p.error(f"expected '+' or '-', got {sign_tok.text!r}", sign_tok)
    port_a = p.take("port name")
    port_b = p.take("port name")
    p.finish()
    if port_a.text == port_b.text:
        p.error("joint measurement needs two distinct ports", port_b)
    stmt = MeasureStmt("joint", int(param_tok.text[1]), (port_a.text, port_b.text),
                       sign=+1 if sign_tok.text == "+" else -1,
                       line=param_tok.line, column=param_tok.column)
    return stmt, [port_a, port_b]


def format_program(program: CircuitProgram) -> str:
    """Canonical text rendering; parse(format_program(p)) is structurally p."""
    lines = []
    for s in program.statements:
        if isinstance(s, SourceStmt):
            if s.kind == "coh":
                line = f"source coh {s.name} {s.amplitude!r}"
                if s.pol != "diag":
                    line += f" pol={s.pol}"
                if s.phase_deg:
                    line += f" phase_deg={s.phase_deg!r}"
            elif s.kind == "sq":
                line = (f"source sq {s.name} {s.pol} {s.amplitude!r} "
                        f"{s.squeeze_db!r} {s.antisqueeze_db!r}")
                if s.phase_deg:
                    line += f" phase_deg={s.phase_deg!r}"
            else:
                line = f"source vac {s.name}"
        elif isinstance(s, ElementStmt):
            if s.kind == "pbs":
                line = f"pbs {s.inputs[0]} {s.inputs[1]} -> {s.outputs[0]} {s.outputs[1]}"
            elif s.kind == "bs":
                line = (f"bs {s.transmittance!r} {s.inputs[0]} {s.inputs[1]} "
                        f"-> {s.outputs[0]} {s.outputs[1]}")
                if s.convention != "plain":
                    line += f" conv={s.convention}"
            elif s.kind == "wp":
                line = f"wp {s.waveplate} {s.angle_deg!r} {s.inputs[0]} -> {s.outputs[0]}"
            elif s.kind == "rot":
                line = f"rot {s.angle_deg!r} {s.inputs[0]} -> {s.outputs[0]}"
            elif s.kind == "phase":
                line = f"phase {s.angle_deg!r} {s.inputs[0]} -> {s.outputs[0]}"
            else:
                line = f"loss {s.efficiency!r} {s.inputs[0]} -> {s.outputs[0]}"
        else:
            if s.kind == "stokes":
                line = f"measure stokes {s.ports[0]} S{s.parameter}"
            else:
                sign = "+" if s.sign > 0 else "-"
                line = f"measure joint S{s.parameter} {sign} {s.ports[0]} {s.ports[1]}"
        lines.append(line)
    return "\n".join(lines) + "\n"
