"""Entanglement criteria on joint Stokes statistics of two ports.

Two standard tests for continuous-variable polarization entanglement between
ports A and B, both phrased in the S1/S3 plane with the bright mean field
along S2:

* EPR (inference) criterion: the product of conditional variances
  Vcond(S1,A | S1,B) * Vcond(S3,A | S3,B) must fall below |<S2,B>|^2.
  Demonstrates the stronger EPR paradox; asymmetric under A <-> B (the
  bound references only port B, so it is applied verbatim and a symmetric
  search is opt-in).
* Duan-Simon (sum/difference) criterion: the total variance
  V(S1,A -+ S1,B) + V(S3,A +- S3,B), divided by |<S2,A>| + |<S2,B>|, must
  fall below 2.  No separable state can do so.  The sign of each
  combination is searched over +/- and the minimizing pair reported, since
  which combination is the correlated one depends on the beam-splitter
  phase convention of the network that produced the beams.

Both inequalities are strict; a state sitting exactly on the boundary is
reported as not entangled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .stokes import JointStokesStats, combine_variance

SIGN_CONVENTION_NOTE = (
    "correlation signs depend on the beam-splitter phase convention; the "
    "reported signs are the ones minimizing the combined variance"
)


@dataclass(frozen=True)
class CriterionReport:
    """Verdicts of both criteria; each half may be absent (None) if only one
    criterion was evaluated."""

    epr_cond_var_1: float | None = None     # photon-number units
    epr_cond_var_3: float | None = None
    epr_product_normalized: float | None = None   # vs |<S2,B>|^2; < 1 = EPR
    epr_entangled: bool | None = None
    duan_lhs_normalized: float | None = None      # < 2 = non-separable
    duan_rhs_normalized: float = 2.0
    duan_nonseparable: bool | None = None
    convention_note: str = SIGN_CONVENTION_NOTE
    details: dict = field(default_factory=dict)

    def asdict(self) -> dict:
        return {
            "epr_cond_var_1": self.epr_cond_var_1,
            "epr_cond_var_3": self.epr_cond_var_3,
            "epr_product_normalized": self.epr_product_normalized,
            "epr_entangled": self.epr_entangled,
            "duan_lhs_normalized": self.duan_lhs_normalized,
            "duan_rhs_normalized": self.duan_rhs_normalized,
            "duan_nonseparable": self.duan_nonseparable,
            "convention_note": self.convention_note,
            "details": dict(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.asdict())


def conditional_variance(joint: JointStokesStats, k: int, given: str = "B") -> float:
    """V(S_k at one port | S_k recorded at the other), photon-number units.

    Optimal linear inference: V(A) - Cov(A,B)^2 / V(B).  `given` names the
    conditioning port.  A conditioning record with (near-)zero variance is
    degenerate and rejected.
    """
    if given not in ("A", "B"):
        raise ValueError(f"given must be 'A' or 'B', got {given!r}")
    if not 0 <= k <= 3:
        raise ValueError(f"Stokes index must be 0..3, got {k}")
    va = joint.a.cov[k, k]
    vb = joint.b.cov[k, k]
    c = joint.cross[k, k]
    target, predictor = (va, vb) if given == "B" else (vb, va)
    scale = max(joint.a.shot_noise, joint.b.shot_noise)
    if predictor <= 1e-12 * scale:
        raise ValueError(
            f"conditioning port {given} has (near-)zero variance in S{k}; "
            "conditional variance is undefined"
        )
    return float(target - c * c / predictor)


def epr_criterion(joint: JointStokesStats, symmetric: bool = False) -> CriterionReport:
    """EPR test: Vcond(S1,A|S1,B) * Vcond(S3,A|S3,B) < |<S2,B>|^2.

    epr_product_normalized is the conditional-variance product divided by
    the bound, so < 1 demonstrates the paradox.  With symmetric=True the
    reversed inference direction (bound |<S2,A>|^2) is evaluated too and the
    smaller normalized product reported.
    """
    def one_direction(given: str) -> tuple[float, float, float, dict]:
        other = joint.b if given == "B" else joint.a
        v1 = conditional_variance(joint, 1, given)
        v3 = conditional_variance(joint, 3, given)
        bound = float(other.means[2] ** 2)
        if bound <= 0.0:
            raise ValueError(
                "EPR bound |<S2>|^2 vanishes at the conditioning port; the "
                "criterion is undefined for this polarization"
            )
        return v1, v3, bound, {"inferred_from": given, "bound": bound}

    v1, v3, bound, details = one_direction("B")
    value = v1 * v3 / bound
    if symmetric:
        v1r, v3r, bound_r, details_r = one_direction("A")
        if v1r * v3r / bound_r < value:
            v1, v3, bound, details = v1r, v3r, bound_r, details_r
            value = v1 * v3 / bound
        details["symmetric_search"] = True
    return CriterionReport(
        epr_cond_var_1=float(v1),
        epr_cond_var_3=float(v3),
        epr_product_normalized=float(value),
        epr_entangled=bool(value < 1.0),
        details=details,
    )


def duan_criterion(joint: JointStokesStats) -> CriterionReport:
    """Sum/difference test, normalized by the conjugate means.

    duan_lhs_normalized = [V(S1,A -+ S1,B) + V(S3,A +- S3,B)] /
    (|<S2,A>| + |<S2,B>|), minimized over the two sign choices.  For the
    bright 45-degree-polarized beams of the presets <S2> = <S0> at each
    port, so the normalization coincides with the combined shot noise and
    the two variance terms read directly in shot-noise units.
    """
    denom = abs(joint.a.means[2]) + abs(joint.b.means[2])
    if denom <= 0.0:
        raise ValueError(
            "separability bound |<S2,A>| + |<S2,B>| vanishes; the criterion "
            "is undefined for this polarization"
        )
    shot = joint.a.shot_noise + joint.b.shot_noise
    best = None
    for s1 in (-1, +1):
        for s3 in (-1, +1):
            total = (
                combine_variance(joint, 1, s1) + combine_variance(joint, 3, s3)
            ) * shot / denom
            if best is None or total < best[0]:
                best = (total, s1, s3)
    total, s1, s3 = best
    details = {
        "variance_s1_snu": combine_variance(joint, 1, s1),
        "variance_s3_snu": combine_variance(joint, 3, s3),
        "sign_s1": "+" if s1 > 0 else "-",
        "sign_s3": "+" if s3 > 0 else "-",
        "bound": float(denom),
    }
    return CriterionReport(
        duan_lhs_normalized=float(total),
        duan_nonseparable=bool(total < 2.0),
        details=details,
    )


def evaluate_criteria(joint: JointStokesStats, symmetric_epr: bool = False) -> CriterionReport:
    """Both criteria merged into one report."""
    epr = epr_criterion(joint, symmetric=symmetric_epr)
    duan = duan_criterion(joint)
    details = dict(duan.details)
    details.update(epr.details)
    return replace(
        epr,
        duan_lhs_normalized=duan.duan_lhs_normalized,
        duan_nonseparable=duan.duan_nonseparable,
        details=details,
    )
