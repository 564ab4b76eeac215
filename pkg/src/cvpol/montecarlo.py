"""Stochastic cross-check of the analytic Stokes statistics.

Samples quadrature fluctuations from the state's covariance, forms per-shot
Stokes photocurrents through the linearized Jacobians, and estimates
variances and inter-port covariances with standard errors.  The estimator is
deterministic given (seed, shots, shards):

* per-shard bit streams derive from numpy's SeedSequence spawn of the seed,
* each shard draws its shots in fixed-size chunks in stream order and
  accumulates raw moments (count, sum, sum of outer products),
* shard moments are pooled in shard-index order, then
  cov = (M2 - outer(M1, M1) / n) / (n - 1).

Worker scheduling therefore cannot affect the pooled estimate; only the
three config numbers can.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .gaussian import GaussianState
from .stokes import JointStokesStats, StokesStats, stokes_jacobian

CHUNK_SHOTS = 1 << 16
FACTOR_TOL = 1e-10


@dataclass(frozen=True)
class SampleConfig:
    shots: int
    seed: int = 0
    electronic_noise_power: float = 0.0   # absolute variance added per detector pair
    shards: int = 1

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if self.shards < 1:
            raise ValueError(f"shards must be >= 1, got {self.shards}")
        if self.electronic_noise_power < 0:
            raise ValueError("electronic noise power must be >= 0")


@dataclass(frozen=True)
class EstimateRecord:
    estimate: float
    standard_error: float
    shots_used: int


def factor_covariance(cov: np.ndarray) -> np.ndarray:
    """Matrix L with L L^T = cov, for driving the sampler.

    Tries Cholesky; on failure symmetrizes and falls back to an
    eigendecomposition, clipping eigenvalues in [-1e-10 * scale, 0] to zero
    and rejecting anything more negative.
    """
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        pass
    sym = 0.5 * (cov + cov.T)
    eigvals, eigvecs = np.linalg.eigh(sym)
    scale = max(float(eigvals[-1]), 1.0)
    if eigvals[0] < -FACTOR_TOL * scale:
        raise ValueError(
            f"covariance is not positive semidefinite after symmetrization "
            f"(min eigenvalue {eigvals[0]:.3e})"
        )
    return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def _station_rows(state: GaussianState, stations) -> tuple[np.ndarray, list[str]]:
    """Stack per-station Stokes Jacobians into one (4m x 2n) matrix."""
    n = state.n_modes
    blocks = []
    keys = []
    for st in stations:
        ix, iy = st.mode_x, st.mode_y
        jac = stokes_jacobian(state.amplitude(ix), state.amplitude(iy))
        g = np.zeros((4, 2 * n))
        g[:, [2 * ix, 2 * ix + 1, 2 * iy, 2 * iy + 1]] = jac
        blocks.append(g)
        keys.extend(f"{st.label}:S{k}" for k in range(4))
    return np.vstack(blocks), keys


def _shard_shots(shots: int, shards: int) -> list[int]:
    base, extra = divmod(shots, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def sample_stokes(
    state: GaussianState, stations: Sequence, config: SampleConfig
) -> dict[str, EstimateRecord]:
    """Estimate Stokes variances and inter-station covariances by sampling.

    stations: objects with label/mode_x/mode_y (compiler Stations or
    equivalent tuples).  Returns records keyed "var:LABEL:Sk" for every
    station and Stokes index, and "cov:LA:LB:Sk" for every station pair.
    Electronic noise, when configured, is added per shot as an independent
    Gaussian of the given variance on every detector record.
    """
    if not stations:
        raise ValueError("no stations to sample")
    rows, keys = _station_rows(state, stations)
    mix = rows @ factor_covariance(state.cov)    # shot row = mix @ z, z ~ N(0, 1)
    n_rows = mix.shape[0]
    sigma_e = np.sqrt(config.electronic_noise_power)

    count = 0
    m1 = np.zeros(n_rows)
    m2 = np.zeros((n_rows, n_rows))
    for ss, shard_n in zip(
        np.random.SeedSequence(config.seed).spawn(config.shards),
        _shard_shots(config.shots, config.shards),
    ):
        rng = np.random.default_rng(ss)
        remaining = shard_n
        while remaining > 0:
            c = min(CHUNK_SHOTS, remaining)
            y = rng.standard_normal((c, mix.shape[1])) @ mix.T
            if sigma_e > 0.0:
                y += sigma_e * rng.standard_normal(y.shape)
            m1 += y.sum(axis=0)
            m2 += y.T @ y
            count += c
            remaining -= c

    if count > 1:
        cov = (m2 - np.outer(m1, m1) / count) / (count - 1)
    else:
        cov = np.full((n_rows, n_rows), np.nan)

    records: dict[str, EstimateRecord] = {}
    labels = [st.label for st in stations]
    for a, la in enumerate(labels):
        for k in range(4):
            i = 4 * a + k
            v = float(cov[i, i])
            se = v * np.sqrt(2.0 / (count - 1)) if count > 1 else float("inf")
            records[f"var:{la}:S{k}"] = EstimateRecord(v, float(se), count)
        for b in range(a + 1, len(labels)):
            lb = labels[b]
            for k in range(4):
                i, j = 4 * a + k, 4 * b + k
                c = float(cov[i, j])
                if count > 1:
                    se = np.sqrt((cov[i, i] * cov[j, j] + c * c) / (count - 1))
                else:
                    se = float("inf")
                records[f"cov:{la}:{lb}:S{k}"] = EstimateRecord(c, float(se), count)
    return records


def subtract_electronic_noise(measured_variance: float, electronic_variance: float) -> float:
    """Linear-unit noise correction: V_corrected = V_measured - V_electronic."""
    if electronic_variance < 0.0:
        raise ValueError("electronic variance must be >= 0")
    if measured_variance < electronic_variance:
        raise ValueError(
            f"over-correction: measured variance {measured_variance:g} is below "
            f"the electronic floor {electronic_variance:g}"
        )
    return measured_variance - electronic_variance


def analytic_targets(
    stats: StokesStats | JointStokesStats | Mapping[str, float]
) -> dict[str, float]:
    """Expand analytic moments into the sampler's key scheme."""
    if isinstance(stats, Mapping):
        return dict(stats)
    if isinstance(stats, StokesStats):
        return {f"var:{stats.port_label}:S{k}": float(stats.cov[k, k]) for k in range(4)}
    targets = {}
    targets.update(analytic_targets(stats.a))
    targets.update(analytic_targets(stats.b))
    for k in range(4):
        targets[f"cov:{stats.a.port_label}:{stats.b.port_label}:S{k}"] = float(
            stats.cross[k, k]
        )
    return targets


@dataclass(frozen=True)
class OracleEntry:
    key: str
    analytic: float
    estimate: float
    standard_error: float
    z: float
    passed: bool


@dataclass(frozen=True)
class OracleComparison:
    entries: tuple[OracleEntry, ...]
    z_threshold: float

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_z(self) -> float:
        return max(e.z for e in self.entries)


def compare_oracle(
    analytic: StokesStats | JointStokesStats | Mapping[str, float],
    sampled: Mapping[str, EstimateRecord],
    z_threshold: float = 5.0,
) -> OracleComparison:
    """Per-entry z-scores |analytic - estimate| / SE; passes if all <= threshold.

    Every analytic key must have a sampled record (layout mismatch raises).
    Sampled keys without analytic targets are ignored, so a full-station
    sample can be checked against a single-parameter analytic set.
    """
    targets = analytic_targets(analytic)
    missing = sorted(set(targets) - set(sampled))
    if missing:
        raise ValueError(f"sampled records missing for: {', '.join(missing)}")
    entries = []
    for key in targets:
        rec = sampled[key]
        diff = abs(targets[key] - rec.estimate)
        if rec.standard_error > 0.0:
            z = diff / rec.standard_error
        else:
            z = 0.0 if diff == 0.0 else float("inf")
        entries.append(OracleEntry(
            key=key,
            analytic=targets[key],
            estimate=rec.estimate,
            standard_error=rec.standard_error,
            z=float(z),
            passed=bool(z <= z_threshold),
        ))
    return OracleComparison(entries=tuple(entries), z_threshold=z_threshold)
