"""Quantum Stokes statistics of bright two-mode polarization states.

For a port made of an (x, y) polarization mode pair the Stokes operators are

    S0 = nx + ny          S1 = nx - ny
    S2 = ax^dag ay + ay^dag ax          S3 = i (ay^dag ax - ax^dag ay)

obeying the SU(2) algebra [S_k, S_l] = 2i eps_klm S_m (k, l, m in 1..3) and
the uncertainty products V_k V_l >= |<S_m>|^2.  For bright beams the
fluctuations are linearized around the mean amplitudes: each delta S_k is the
Jacobian row of S_k contracted with the quadrature fluctuation vector, so the
Stokes covariance is J Sigma J^T.  A coherent port then has
V1 = V2 = V3 = <S0>, which is the shot-noise reference used for
normalization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianState, ModeId

STOKES_NAMES = ("S0", "S1", "S2", "S3")

# Cyclic permutations (k, l, m) entering both the squeezing criterion
# V_k < |<S_l>| < V_m and the uncertainty product V_k V_l >= |<S_m>|^2.
CYCLIC = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def _port_indices(port) -> tuple[int, int]:
    mx, my = port
    ix = mx.index if isinstance(mx, ModeId) else int(mx)
    iy = my.index if isinstance(my, ModeId) else int(my)
    return ix, iy


def stokes_means(alpha_x: complex, alpha_y: complex) -> np.ndarray:
    """Classical Stokes vector (S0, S1, S2, S3) of the mean field."""
    nx = abs(alpha_x) ** 2
    ny = abs(alpha_y) ** 2
    cross = np.conj(alpha_x) * alpha_y
    return np.array([nx + ny, nx - ny, 2.0 * cross.real, 2.0 * cross.imag])


def stokes_jacobian(alpha_x: complex, alpha_y: complex) -> np.ndarray:
    """Rows d(S_k)/d(X_x, Y_x, X_y, Y_y) of the linearized Stokes operators.

    Derived from delta S_k = alpha^dag sigma_k (delta a) + h.c. with the
    Pauli correspondence (S1, S2, S3) <-> (sigma_z, sigma_x, sigma_y), using
    X = da + da^dag and Y = i(da^dag - da).
    """
    ax, ay = complex(alpha_x), complex(alpha_y)
    return np.array(
        [
            [ax.real, ax.imag, ay.real, ay.imag],
            [ax.real, ax.imag, -ay.real, -ay.imag],
            [ay.real, ay.imag, ax.real, ax.imag],
            [ay.imag, -ay.real, -ax.imag, ax.real],
        ]
    )


@dataclass(frozen=True)
class StokesStats:
    """First and second moments of the four Stokes parameters at one port.

    variances/covariance are in absolute units (photons^2 per pulse in the
    linearized picture); `normalized` divides by the shot noise <S0> so a
    coherent port reads 1.0 in every component.
    """

    port_label: str
    means: np.ndarray            # (4,) <S0..S3>
    cov: np.ndarray              # (4, 4) covariance of S0..S3
    shot_noise: float            # <S0>, the coherent-state variance scale

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.cov)

    @property
    def cov_s(self) -> np.ndarray:
        """3x3 covariance of the polarization part (S1, S2, S3)."""
        return self.cov[1:, 1:]

    @property
    def normalized(self) -> np.ndarray:
        """Variances in shot-noise units."""
        return self.variances / self.shot_noise

    def variance_db(self, k: int) -> float:
        """Normalized variance of S_k in decibels (negative = squeezed)."""
        return 10.0 * np.log10(self.variances[k] / self.shot_noise)

    def asdict(self) -> dict:
        return {
            "port": self.port_label,
            "means": {n: float(m) for n, m in zip(STOKES_NAMES, self.means)},
            "cov": self.cov.tolist(),
            "variances": {n: float(v) for n, v in zip(STOKES_NAMES, self.variances)},
            "normalized_variances": {
                n: float(v) for n, v in zip(STOKES_NAMES, self.normalized)
            },
            "db": {n: float(self.variance_db(k)) for k, n in enumerate(STOKES_NAMES)},
            "shot_noise": float(self.shot_noise),
        }

    def to_json(self) -> str:
        return json.dumps(self.asdict())


def stokes_stats(state: GaussianState, port, label: str = "") -> StokesStats:
    """Linearized Stokes statistics of one (mode_x, mode_y) port."""
    ix, iy = _port_indices(port)
    alpha_x = state.amplitude(ix)
    alpha_y = state.amplitude(iy)
    shot = abs(alpha_x) ** 2 + abs(alpha_y) ** 2
    if shot <= 0.0:
        raise ValueError(
            f"port {label or (ix, iy)} carries no mean field; linearized Stokes "
            "statistics are undefined for dark ports"
        )
    idx = [2 * ix, 2 * ix + 1, 2 * iy, 2 * iy + 1]
    sigma = state.cov[np.ix_(idx, idx)]
    jac = stokes_jacobian(alpha_x, alpha_y)
    return StokesStats(
        port_label=label or f"({ix},{iy})",
        means=stokes_means(alpha_x, alpha_y),
        cov=jac @ sigma @ jac.T,
        shot_noise=shot,
    )


@dataclass(frozen=True)
class JointStokesStats:
    """Stokes moments of two ports plus their cross-covariances.

    cross[k, l] = Cov(S_k at port A, S_l at port B), indices 0..3.
    """

    a: StokesStats
    b: StokesStats
    cross: np.ndarray

    @property
    def cross_cov(self) -> np.ndarray:
        """3x3 inter-port block over (S1, S2, S3)."""
        return self.cross[1:, 1:]

    def covariance(self, k: int, l: int | None = None) -> float:
        """Cov(S_k,A, S_l,B); l defaults to k."""
        return float(self.cross[k, k if l is None else l])


def joint_stokes_stats(
    state: GaussianState,
    port_a,
    port_b,
    label_a: str = "A",
    label_b: str = "B",
) -> JointStokesStats:
    """Stokes statistics of two ports including inter-port correlations."""
    stats_a = stokes_stats(state, port_a, label_a)
    stats_b = stokes_stats(state, port_b, label_b)
    iax, iay = _port_indices(port_a)
    ibx, iby = _port_indices(port_b)
    idx_a = [2 * iax, 2 * iax + 1, 2 * iay, 2 * iay + 1]
    idx_b = [2 * ibx, 2 * ibx + 1, 2 * iby, 2 * iby + 1]
    sigma_ab = state.cov[np.ix_(idx_a, idx_b)]
    jac_a = stokes_jacobian(state.amplitude(iax), state.amplitude(iay))
    jac_b = stokes_jacobian(state.amplitude(ibx), state.amplitude(iby))
    return JointStokesStats(a=stats_a, b=stats_b, cross=jac_a @ sigma_ab @ jac_b.T)


def combine_variance(joint: JointStokesStats, k: int, sign: int) -> float:
    """Normalized variance of S_k,A + sign * S_k,B.

    V(S_kA) + V(S_kB) + 2 sign Cov, divided by the two-port shot noise
    <S0,A> + <S0,B>; two independent coherent ports give 1.0 for either sign.
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if not 0 <= k <= 3:
        raise ValueError(f"Stokes index must be 0..3, got {k}")
    var = (
        joint.a.cov[k, k]
        + joint.b.cov[k, k]
        + 2.0 * sign * joint.cross[k, k]
    )
    return float(var / (joint.a.shot_noise + joint.b.shot_noise))


@dataclass(frozen=True)
class SqueezingReport:
    """Outcome of the polarization-squeezing test for one parameter index."""

    parameter: int               # k
    squeezed: bool
    bound: float                 # |<S_l>| used as the reference
    partner: int                 # l achieving the bound
    conjugate: int               # m whose variance must exceed the bound
    variance: float
    conjugate_variance: float


@dataclass(frozen=True)
class SqueezingClassification:
    """Per-parameter squeezing reports plus the satisfied (k, l, m) triples."""

    reports: dict[int, SqueezingReport]
    shot_noise: float

    def __getitem__(self, k: int) -> SqueezingReport:
        return self.reports[k]

    def items(self):
        return self.reports.items()

    @property
    def triples(self) -> tuple[tuple[int, int, int], ...]:
        """(k, l, m) for every parameter passing V_k < |<S_l>| < V_m."""
        return tuple(
            (k, r.partner, r.conjugate)
            for k, r in sorted(self.reports.items())
            if r.squeezed
        )

    @property
    def db(self) -> dict[int, float]:
        """Variance of each parameter in dB relative to shot noise."""
        return {
            k: float(10.0 * np.log10(r.variance / self.shot_noise))
            for k, r in sorted(self.reports.items())
        }


def classify_squeezing(stats: StokesStats, rtol: float = 1e-9) -> SqueezingClassification:
    """Polarization-squeezing test V_k < |<S_l>| < V_m for each k in 1..3.

    Both inequalities are strict: sitting exactly at the coherent bound does
    not count (the margin is rtol in shot-noise units, so a coherent port is
    robustly unsqueezed despite rounding).  For each k both permutations
    (k, l, m) and (k, m, l) are tried and the report records the one that
    succeeds (or the tighter failure).
    """
    out = {}
    margin = rtol * stats.shot_noise
    for k in (1, 2, 3):
        l, m = [i for i in (1, 2, 3) if i != k]
        candidates = []
        for lo, hi in ((l, m), (m, l)):
            bound = abs(stats.means[lo])
            ok = (
                stats.cov[k, k] < bound - margin
                and bound < stats.cov[hi, hi] - margin
            )
            candidates.append(
                SqueezingReport(
                    parameter=k,
                    squeezed=bool(ok),
                    bound=float(bound),
                    partner=lo,
                    conjugate=hi,
                    variance=float(stats.cov[k, k]),
                    conjugate_variance=float(stats.cov[hi, hi]),
                )
            )
        hit = [c for c in candidates if c.squeezed]
        out[k] = hit[0] if hit else max(candidates, key=lambda c: c.bound)
    return SqueezingClassification(reports=out, shot_noise=float(stats.shot_noise))


@dataclass(frozen=True)
class UncertaintyReport:
    """One product V_k V_l >= |<S_m>|^2; margin = product - bound."""

    k: int
    l: int
    m: int
    product: float
    bound: float
    margin: float
    satisfied: bool


def check_uncertainty(stats: StokesStats, rtol: float = 1e-9) -> list[UncertaintyReport]:
    """Verify the three Stokes uncertainty products.

    Linearized Gaussian states satisfy them automatically when physical; a
    margin below -rtol * <S0>^2 flags an inconsistent covariance matrix.
    """
    reports = []
    scale = stats.shot_noise ** 2
    for k, l, m in CYCLIC:
        product = float(stats.cov[k, k] * stats.cov[l, l])
        bound = float(stats.means[m] ** 2)
        margin = product - bound
        ok = margin >= -rtol * scale
        reports.append(UncertaintyReport(k, l, m, product, bound, margin, bool(ok)))
    return reports
