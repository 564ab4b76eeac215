"""Command-line front end.

Runs a preset scenario or a circuit file through the analytic pipeline,
optionally cross-checked by Monte Carlo sampling, and reports in text, JSON,
or CSV.  Exit codes: 0 success, 1 usage or parse diagnostics, 2 oracle or
verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .circuit import CircuitProgram, CircuitSyntaxError, ElementStmt, parse
from .compiler import compile_program, execute_plan
from .engine import DEFAULT_SEED, run_program
from .gaussian import min_symplectic_eigenvalue, symplectic_form
from .montecarlo import SampleConfig, analytic_targets, compare_oracle, sample_stokes
from .presets import preset
from . import reporting

VERIFY_SHOTS = 100_000


class CliError(Exception):
    """Usage-level failure; message goes to stderr, exit code 1."""


@dataclasses.dataclass
class RunConfig:
    preset: str | None = None
    circuit: str | None = None
    efficiency: float | None = None
    mc_shots: int | None = None
    seed: int = DEFAULT_SEED
    format: str = "text"
    sweep: tuple[str, float, float, int] | None = None
    verify: bool = False

    def __post_init__(self):
        if (self.preset is None) == (self.circuit is None):
            raise CliError("exactly one of --preset or --circuit is required")
        if self.efficiency is not None and not 0.0 <= self.efficiency <= 1.0:
            raise CliError(f"--efficiency must be in [0, 1], got {self.efficiency}")
        if self.mc_shots is not None and self.mc_shots < 2:
            raise CliError("--mc-shots must be at least 2")
        if self.format not in ("text", "json", "csv"):
            raise CliError(f"unknown format {self.format!r}")
        if self.sweep is not None and self.sweep[3] < 2:
            raise CliError("--sweep needs at least 2 steps")


def _override_loss(program: CircuitProgram, efficiency: float) -> CircuitProgram:
    """Replace every loss element's efficiency (circuit-file override)."""
    statements = tuple(
        dataclasses.replace(s, efficiency=efficiency)
        if isinstance(s, ElementStmt) and s.kind == "loss" else s
        for s in program.statements
    )
    return dataclasses.replace(program, statements=statements)


def load_program(config: RunConfig, **extra) -> CircuitProgram:
    if config.preset is not None:
        overrides = dict(extra)
        if config.efficiency is not None and "efficiency" not in overrides:
            overrides["efficiency"] = config.efficiency
        try:
            return preset(config.preset, **overrides)
        except ValueError as exc:
            raise CliError(str(exc))
    try:
        with open(config.circuit, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read circuit file: {exc}")
    program = parse(text, filename=config.circuit, name=config.circuit)
    for diag in program.warnings:
        print(diag.render(config.circuit), file=sys.stderr)
    if config.efficiency is not None:
        program = _override_loss(program, config.efficiency)
    return program


def _run_sweep(config: RunConfig) -> int:
    if config.preset is None:
        raise CliError("--sweep requires --preset (circuit files are fixed snapshots)")
    if config.mc_shots is not None:
        raise CliError("--sweep runs are analytic; drop --mc-shots")
    param, start, stop, steps = config.sweep
    values = np.linspace(start, stop, steps)
    results = []
    for v in values:
        program = load_program(config, **{param: float(v)})
        results.append((float(v), run_program(program)))
    if config.format == "json":
        out = reporting.render_sweep_json(param, results)
    elif config.format == "csv":
        out = reporting.render_sweep_csv(param, results)
    else:
        out = reporting.render_sweep_text(param, results)
    sys.stdout.write(out)
    return 0


def run(config: RunConfig) -> int:
    """Execute one scenario per the config; returns the process exit code."""
    if config.sweep is not None:
        return _run_sweep(config)
    program = load_program(config)
    result = run_program(program, mc_shots=config.mc_shots, seed=config.seed)
    if config.format == "json":
        out = reporting.render_json(result)
    elif config.format == "csv":
        out = reporting.render_csv(result)
    else:
        out = reporting.render_text(result)
    sys.stdout.write(out)
    if result.mc is not None and not result.mc.passed:
        print(
            f"oracle comparison failed: max |z| = {result.mc.max_z:.3g} "
            f"> {result.mc.z_threshold:g}",
            file=sys.stderr,
        )
        return 2
    return 0


def verify(config: RunConfig) -> int:
    """Invariant suite for one scenario: symplectic, physicality, uncertainty, oracle."""
    program = load_program(config)
    plan = compile_program(program)
    checks: list[tuple[str, bool, str]] = []

    defect = 0.0
    for step in plan.steps:
        if step.transform is not None:
            s = step.transform.matrix
            omega = symplectic_form(s.shape[0] // 2)
            defect = max(defect, float(np.max(np.abs(s @ omega @ s.T - omega))))
    checks.append(("symplectic", defect <= 1e-12, f"max defect {defect:.3e}"))

    state = execute_plan(plan)
    nu = min_symplectic_eigenvalue(state.cov)
    checks.append(("physicality", nu >= 1.0 - 1e-9, f"min symplectic eigenvalue {nu:.9f}"))

    result = run_program(program)
    unc_ok = all(all(u.satisfied for u in p.uncertainty) for p in result.ports)
    checks.append(("uncertainty", unc_ok, f"{len(result.ports)} port(s)"))

    shots = config.mc_shots or VERIFY_SHOTS
    sample_cfg = SampleConfig(shots=shots, seed=config.seed)
    records = sample_stokes(state, plan.stations, sample_cfg)
    targets: dict[str, float] = {}
    for p in result.ports:
        targets.update(analytic_targets(p.stats))
    for j in result.joints:
        targets.update(analytic_targets(j.joint))
    oracle = compare_oracle(targets, records)
    checks.append((
        "oracle",
        oracle.passed,
        f"{shots} shots, max |z| = {oracle.max_z:.3g} (threshold {oracle.z_threshold:g})",
    ))

    ok = True
    for name, passed, detail in checks:
        print(f"verify {name}: {'ok' if passed else 'FAIL'} ({detail})")
        ok = ok and passed
    for j in result.joints:
        note = j.criteria.convention_note
        print(f"verify convention: signs ({j.criteria.details['sign_s1']}, "
              f"{j.criteria.details['sign_s3']}) [{note}]")
    return 0 if ok else 2


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cvpol",
        description="Simulate polarization squeezing and entanglement scenarios.",
    )
    source = ap.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", help="named scenario (see docs)")
    source.add_argument("--circuit", help="path to a .pol circuit file")
    ap.add_argument("--efficiency", type=float, default=None,
                    help="detection efficiency override in [0, 1]")
    ap.add_argument("--mc-shots", type=int, default=None,
                    help="run the Monte Carlo oracle with this many shots")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED,
                    help=f"sampler seed (default {DEFAULT_SEED})")
    ap.add_argument("--format", choices=("text", "json", "csv"), default="text")
    ap.add_argument("--sweep", nargs=4, metavar=("PARAM", "START", "STOP", "STEPS"),
                    default=None, help="sweep a preset parameter over linspace")
    ap.add_argument("--verify", action="store_true",
                    help="run the invariant suite instead of a report")
    return ap


def main(argv=None) -> int:
    ap = build_arg_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; keep 2 reserved for failed checks
        return 0 if exc.code == 0 else 1
    try:
        sweep = None
        if ns.sweep is not None:
            param, start, stop, steps = ns.sweep
            try:
                sweep = (param, float(start), float(stop), int(steps))
            except ValueError:
                raise CliError(f"--sweep expects PARAM START STOP STEPS, got {ns.sweep}")
        config = RunConfig(
            preset=ns.preset,
            circuit=ns.circuit,
            efficiency=ns.efficiency,
            mc_shots=ns.mc_shots,
            seed=ns.seed,
            format=ns.format,
            sweep=sweep,
            verify=ns.verify,
        )
        if config.verify:
            return verify(config)
        return run(config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CircuitSyntaxError as exc:
        for diag in exc.diagnostics:
            print(diag.render(exc.filename), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
