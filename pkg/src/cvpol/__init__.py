"""Gaussian simulator for continuous-variable polarization squeezing and entanglement.

Bright two-polarization-mode light is tracked as a Gaussian state (means +
covariance in shot-noise units), propagated through linear optics by
symplectic transforms, and read out as quantum Stokes statistics.  On top of
that sit polarization-squeezing classification, EPR and Duan-Simon
entanglement criteria, a small circuit description language with calibrated
presets, and a Monte Carlo sampling oracle.
"""

from .gaussian import (
    BrightFieldWarning,
    GaussianState,
    ModeId,
    PhysicalityError,
    SymplecticTransform,
    apply_transform,
    attach_vacuum,
    beam_splitter,
    loss_channel,
    make_amplitude_squeezed,
    make_coherent,
    min_symplectic_eigenvalue,
    state_from_json,
    symplectic_form,
    vacuum,
)
from .stokes import (
    JointStokesStats,
    SqueezingClassification,
    SqueezingReport,
    StokesStats,
    UncertaintyReport,
    check_uncertainty,
    classify_squeezing,
    combine_variance,
    joint_stokes_stats,
    stokes_stats,
)
from .criteria import (
    CriterionReport,
    conditional_variance,
    duan_criterion,
    epr_criterion,
    evaluate_criteria,
)
from .circuit import (
    CircuitProgram,
    CircuitSyntaxError,
    ParseDiagnostic,
    format_program,
    parse,
)
from .compiler import CompiledPlan, Station, compile_program, execute_plan
from .presets import CALIBRATED_EFFICIENCY, PRESET_NAMES, preset
from .montecarlo import (
    EstimateRecord,
    OracleComparison,
    SampleConfig,
    compare_oracle,
    sample_stokes,
    subtract_electronic_noise,
)
from .engine import RunResult, run_program

__version__ = "0.1.0"

__all__ = [
    "BrightFieldWarning",
    "CALIBRATED_EFFICIENCY",
    "CircuitProgram",
    "CircuitSyntaxError",
    "CompiledPlan",
    "CriterionReport",
    "EstimateRecord",
    "GaussianState",
    "JointStokesStats",
    "ModeId",
    "OracleComparison",
    "ParseDiagnostic",
    "PhysicalityError",
    "PRESET_NAMES",
    "RunResult",
    "SampleConfig",
    "Station",
    "StokesStats",
    "SymplecticTransform",
    "apply_transform",
    "attach_vacuum",
    "beam_splitter",
    "SqueezingClassification",
    "SqueezingReport",
    "UncertaintyReport",
    "check_uncertainty",
    "classify_squeezing",
    "combine_variance",
    "compare_oracle",
    "compile_program",
    "conditional_variance",
    "duan_criterion",
    "epr_criterion",
    "evaluate_criteria",
    "execute_plan",
    "format_program",
    "joint_stokes_stats",
    "loss_channel",
    "make_amplitude_squeezed",
    "make_coherent",
    "min_symplectic_eigenvalue",
    "parse",
    "preset",
    "run_program",
    "sample_stokes",
    "state_from_json",
    "stokes_stats",
    "subtract_electronic_noise",
    "symplectic_form",
    "vacuum",
]
