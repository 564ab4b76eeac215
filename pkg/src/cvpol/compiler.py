"""Compile validated circuit programs into executable transform plans.

Mode numbering is deterministic: the i-th source declaration owns modes
(2i, 2i+1) for its (x, y) polarization pair, so compiling the same program
twice yields identical plans.  Each element becomes one plan step: a single
symplectic matrix for the lossless elements, or a loss step (which is not
symplectic and is applied as a channel).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import elements
from .circuit import CircuitProgram, ElementStmt, MeasureStmt, SourceStmt
from .gaussian import (
    GaussianState,
    ModeId,
    SymplecticTransform,
    apply_transform,
    loss_channel,
    pair_beam_splitter_unitary,
    warn_if_dim,
)


@dataclass(frozen=True)
class PlanStep:
    kind: str                              # "symplectic" | "loss"
    label: str
    modes: tuple[int, ...]
    transform: SymplecticTransform | None = None
    efficiency: float = 1.0


@dataclass(frozen=True)
class Station:
    """A Stokes measurement port bound to concrete mode indices."""

    label: str
    mode_x: int
    mode_y: int


@dataclass(frozen=True)
class CompiledPlan:
    program: CircuitProgram
    n_modes: int
    initial: GaussianState
    steps: tuple[PlanStep, ...]
    stations: tuple[Station, ...]          # measured ports, first-reference order
    measurements: tuple[MeasureStmt, ...]

    def station(self, label: str) -> Station:
        for st in self.stations:
            if st.label == label:
                return st
        raise KeyError(f"no station {label!r} in plan")


def _initial_state(sources: tuple[SourceStmt, ...]) -> GaussianState:
    n = 2 * len(sources)
    means = np.zeros(2 * n)
    cov = np.eye(2 * n)
    modes = []
    for i, src in enumerate(sources):
        ix, iy = 2 * i, 2 * i + 1
        modes.append(ModeId(ix, f"{src.name}.x"))
        modes.append(ModeId(iy, f"{src.name}.y"))
        if src.kind == "vac":
            continue
        if src.kind == "coh":
            phase = np.exp(1j * np.deg2rad(src.phase_deg))
            if src.pol == "x":
                amps = {ix: src.amplitude * phase}
            elif src.pol == "y":
                amps = {iy: src.amplitude * phase}
            else:
                half = src.amplitude / np.sqrt(2.0)
                amps = {ix: half * phase, iy: half * phase}
            for m, alpha in amps.items():
                means[2 * m] = 2.0 * alpha.real
                means[2 * m + 1] = 2.0 * alpha.imag
                warn_if_dim(alpha, modes[m].label)
        else:  # sq: bright squeezed mode on the declared polarization
            bright = ix if src.pol == "x" else iy
            alpha = src.amplitude * np.exp(1j * np.deg2rad(src.phase_deg))
            means[2 * bright] = 2.0 * alpha.real
            means[2 * bright + 1] = 2.0 * alpha.imag
            vx = 10.0 ** (src.squeeze_db / 10.0)
            vy = 10.0 ** (src.antisqueeze_db / 10.0)
            block = np.diag([vx, vy])
            if src.phase_deg:
                # squeezing ellipse follows the carrier phase
                phi = np.deg2rad(src.phase_deg)
                rot = np.array([[np.cos(phi), -np.sin(phi)],
                                [np.sin(phi), np.cos(phi)]])
                block = rot @ block @ rot.T
            sl = slice(2 * bright, 2 * bright + 2)
            cov[sl, sl] = block
            warn_if_dim(alpha, modes[bright].label)
    return GaussianState(means, cov, modes)


def _element_step(stmt: ElementStmt, bindings: dict, n_modes: int) -> PlanStep:
    """Build one plan step and update port -> mode-slot bindings."""
    ins = [bindings[p] for p in stmt.inputs]
    if stmt.kind == "loss":
        (sx, sy) = ins[0]
        bindings[stmt.outputs[0]] = (sx, sy)
        return PlanStep("loss", f"loss({stmt.efficiency:g})", (sx, sy),
                        efficiency=stmt.efficiency)
    if stmt.kind == "pbs":
        u = elements.pbs_recombine_unitary()
        desc = "pbs"
    elif stmt.kind == "bs":
        u = pair_beam_splitter_unitary(stmt.transmittance, stmt.convention)
        desc = f"bs(t={stmt.transmittance:g}, {stmt.convention})"
    elif stmt.kind == "wp":
        angle = np.deg2rad(stmt.angle_deg)
        u = (elements.half_wave_jones(angle) if stmt.waveplate == "half"
             else elements.quarter_wave_jones(angle))
        desc = f"wp({stmt.waveplate}, {stmt.angle_deg:g} deg)"
    elif stmt.kind == "rot":
        u = elements.rotator_jones(np.deg2rad(stmt.angle_deg))
        desc = f"rot({stmt.angle_deg:g} deg)"
    else:  # phase
        u = elements.phase_jones(np.deg2rad(stmt.angle_deg))
        desc = f"phase({stmt.angle_deg:g} deg)"

    if len(ins) == 1:
        order = list(ins[0])
        bindings[stmt.outputs[0]] = ins[0]
    else:
        order = list(ins[0]) + list(ins[1])
        bindings[stmt.outputs[0]] = ins[0]
        bindings[stmt.outputs[1]] = ins[1]
    transform = SymplecticTransform.from_mode_unitary(u, order, n_modes, desc)
    return PlanStep("symplectic", desc, tuple(order), transform=transform)


def compile_program(program: CircuitProgram) -> CompiledPlan:
    """Lower a validated program to an initial state, steps, and stations."""
    sources = program.sources
    n_modes = 2 * len(sources)
    initial = _initial_state(sources)
    bindings = {src.name: (2 * i, 2 * i + 1) for i, src in enumerate(sources)}
    steps = []
    for stmt in program.statements:
        if isinstance(stmt, ElementStmt):
            steps.append(_element_step(stmt, bindings, n_modes))

    stations = []
    seen = set()
    for m in program.measurements:
        for label in m.ports:
            if label not in seen:
                seen.add(label)
                sx, sy = bindings[label]
                stations.append(Station(label, sx, sy))
    return CompiledPlan(
        program=program,
        n_modes=n_modes,
        initial=initial,
        steps=tuple(steps),
        stations=tuple(stations),
        measurements=program.measurements,
    )


def execute_plan(plan: CompiledPlan) -> GaussianState:
    """Run the plan's steps on its initial state."""
    state = plan.initial
    for step in plan.steps:
        if step.kind == "symplectic":
            state = apply_transform(state, step.transform)
        else:
            for m in step.modes:
                state = loss_channel(state, m, step.efficiency)
    return state
