"""Multimode Gaussian states of light and symplectic transformations.

Conventions used throughout the package:

* Quadratures per mode: X = da + da^dag (amplitude), Y = i(da^dag - da)
  (phase).  Vacuum variance is 1 per quadrature ("shot-noise units"), so a
  normalized variance reads directly as a squeezing factor.
* Quadrature ordering is interleaved: (X0, Y0, X1, Y1, ...).
* A mean complex amplitude alpha (units sqrt(photons)) enters the means
  vector as (2 Re alpha, 2 Im alpha).
* Symplectic form: Omega = direct sum of [[0, 1], [-1, 0]] blocks, so that
  [r_i, r_j] = 2i Omega_ij and physical covariance matrices have all
  symplectic eigenvalues >= 1.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-12
PHYSICALITY_TOL = 1e-9
# Linearized Stokes statistics assume bright fields; warn below this mean
# photon number per excited mode.
BRIGHT_PHOTON_THRESHOLD = 1e4


class PhysicalityError(ValueError):
    """Covariance matrix violates the Heisenberg floor (symplectic eigenvalue < 1)."""


class BrightFieldWarning(UserWarning):
    """Excited mode too dim for the linearized fluctuation treatment."""


@dataclass(frozen=True)
class ModeId:
    """Index plus human-readable label of one optical mode."""

    index: int
    label: str = ""

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"mode index must be non-negative, got {self.index}")


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard skew form for the interleaved (X, Y) ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def min_symplectic_eigenvalue(cov: np.ndarray) -> float:
    """Smallest symplectic eigenvalue of a covariance matrix.

    Computed as the smallest modulus among the eigenvalues of i*Omega*cov,
    which come in +/- nu pairs for symmetric cov.
    """
    n = cov.shape[0] // 2
    eigs = np.linalg.eigvals(1j * symplectic_form(n) @ cov)
    return float(np.min(np.abs(eigs)))


def _as_index(mode: "ModeId | int") -> int:
    return mode.index if isinstance(mode, ModeId) else int(mode)


class GaussianState:
    """Immutable Gaussian state: means vector, covariance matrix, mode table.

    Construction validates symmetry of the covariance (1e-12 entrywise) and
    physicality (minimum symplectic eigenvalue >= 1 - 1e-9).
    """

    def __init__(
        self,
        means: np.ndarray,
        cov: np.ndarray,
        modes: Sequence[ModeId] | None = None,
    ):
        means = np.array(means, dtype=float)
        cov = np.array(cov, dtype=float)
        if modes is None:
            if means.ndim != 1 or len(means) % 2:
                raise ValueError(f"means shape {means.shape} is not (2N,)")
            modes = [ModeId(i, f"m{i}") for i in range(len(means) // 2)]
        n = len(modes)
        if means.shape != (2 * n,):
            raise ValueError(f"means shape {means.shape} does not match {n} modes")
        if cov.shape != (2 * n, 2 * n):
            raise ValueError(f"cov shape {cov.shape} does not match {n} modes")
        if np.max(np.abs(cov - cov.T), initial=0.0) > SYMMETRY_TOL:
            raise ValueError("covariance matrix is not symmetric within 1e-12")
        indices = [m.index for m in modes]
        if sorted(indices) != list(range(n)):
            raise ValueError(f"mode indices must be contiguous 0..{n - 1} and unique")
        cov = 0.5 * (cov + cov.T)
        nu_min = min_symplectic_eigenvalue(cov) if n else 1.0
        if n and nu_min < 1.0 - PHYSICALITY_TOL:
            raise PhysicalityError(
                f"minimum symplectic eigenvalue {nu_min:.12g} < 1; state is unphysical"
            )
        means.setflags(write=False)
        cov.setflags(write=False)
        self._means = means
        self._cov = cov
        self._modes = tuple(sorted(modes, key=lambda m: m.index))

    @property
    def means(self) -> np.ndarray:
        return self._means

    @property
    def cov(self) -> np.ndarray:
        return self._cov

    @property
    def modes(self) -> tuple[ModeId, ...]:
        return self._modes

    @property
    def n_modes(self) -> int:
        return len(self._modes)

    def amplitude(self, mode: ModeId | int) -> complex:
        """Mean complex amplitude of a mode, in sqrt(photons)."""
        i = _as_index(mode)
        return complex(self._means[2 * i] / 2.0, self._means[2 * i + 1] / 2.0)

    def mean_photon_number(self, mode: ModeId | int) -> float:
        return abs(self.amplitude(mode)) ** 2

    def quad_variance(self, mode: ModeId | int, quad: str = "x") -> float:
        i = 2 * _as_index(mode) + (0 if quad == "x" else 1)
        return float(self._cov[i, i])

    def isclose(self, other: "GaussianState", atol: float = 1e-9) -> bool:
        return (
            self.n_modes == other.n_modes
            and np.allclose(self._means, other._means, atol=atol)
            and np.allclose(self._cov, other._cov, atol=atol)
        )

    def to_json(self) -> dict:
        """Serializable snapshot: means array, row-major cov, mode labels."""
        return {
            "means": self._means.tolist(),
            "cov": self._cov.tolist(),
            "modes": [m.label for m in self._modes],
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json())

    def __repr__(self):
        labels = ",".join(m.label or str(m.index) for m in self._modes)
        return f"GaussianState(n_modes={self.n_modes}, modes=[{labels}])"


def state_from_json(data: dict) -> GaussianState:
    modes = [ModeId(i, label) for i, label in enumerate(data["modes"])]
    return GaussianState(np.array(data["means"]), np.array(data["cov"]), modes)


def warn_if_dim(amplitude: complex, label: str):
    n_photons = abs(amplitude) ** 2
    if 0.0 < n_photons < BRIGHT_PHOTON_THRESHOLD:
        warnings.warn(
            f"mode '{label}' carries {n_photons:.3g} photons; linearized Stokes "
            f"statistics assume bright fields (>= {BRIGHT_PHOTON_THRESHOLD:g})",
            BrightFieldWarning,
            stacklevel=3,
        )


def _default_modes(n: int, labels: Sequence[str] | None) -> list[ModeId]:
    if labels is None:
        labels = [f"m{i}" for i in range(n)]
    if len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")
    return [ModeId(i, lab) for i, lab in enumerate(labels)]


def vacuum(n_modes: int, labels: Sequence[str] | None = None) -> GaussianState:
    return GaussianState(
        np.zeros(2 * n_modes), np.eye(2 * n_modes), _default_modes(n_modes, labels)
    )


def make_coherent(
    amplitudes: Sequence[complex], labels: Sequence[str] | None = None
) -> GaussianState:
    """Coherent (or vacuum, for zero amplitude) state of len(amplitudes) modes."""
    amplitudes = [complex(a) for a in amplitudes]
    modes = _default_modes(len(amplitudes), labels)
    means = np.zeros(2 * len(amplitudes))
    for i, alpha in enumerate(amplitudes):
        means[2 * i] = 2.0 * alpha.real
        means[2 * i + 1] = 2.0 * alpha.imag
        warn_if_dim(alpha, modes[i].label)
    return GaussianState(means, np.eye(2 * len(amplitudes)), modes)


def make_amplitude_squeezed(
    amplitude: float,
    squeeze_db: float,
    antisqueeze_db: float,
    label: str = "sq",
) -> GaussianState:
    """Single bright mode with V(X) = 10^(squeeze_db/10), V(Y) = 10^(antisqueeze_db/10).

    The mean field points along X.  Purity is not required; only the
    uncertainty floor V(X) V(Y) >= 1 is enforced.
    """
    if squeeze_db > 0 or antisqueeze_db < 0:
        raise ValueError(
            f"expected squeeze_db <= 0 <= antisqueeze_db, got "
            f"({squeeze_db}, {antisqueeze_db})"
        )
    vx = 10.0 ** (squeeze_db / 10.0)
    vy = 10.0 ** (antisqueeze_db / 10.0)
    if vx * vy < 1.0 - PHYSICALITY_TOL:
        raise PhysicalityError(
            f"V(X)*V(Y) = {vx * vy:.9f} < 1: squeezing/anti-squeezing pair is unphysical"
        )
    alpha = complex(amplitude)
    warn_if_dim(alpha, label)
    means = np.array([2.0 * alpha.real, 2.0 * alpha.imag])
    return GaussianState(means, np.diag([vx, vy]), [ModeId(0, label)])


class SymplecticTransform:
    """Linear quadrature map S with S Omega S^T = Omega (checked at 1e-12)."""

    def __init__(self, matrix: np.ndarray, description: str = ""):
        matrix = np.array(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise ValueError(f"matrix shape {matrix.shape} is not 2N x 2N")
        omega = symplectic_form(matrix.shape[0] // 2)
        defect = np.max(np.abs(matrix @ omega @ matrix.T - omega))
        if defect > SYMPLECTIC_TOL:
            raise ValueError(
                f"matrix is not symplectic: max |S Omega S^T - Omega| = {defect:.3e}"
            )
        matrix.setflags(write=False)
        self.matrix = matrix
        self.description = description

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def __matmul__(self, other: "SymplecticTransform") -> "SymplecticTransform":
        """Composition: (self @ other) applies other first."""
        return SymplecticTransform(
            self.matrix @ other.matrix, f"{self.description} . {other.description}"
        )

    def __repr__(self):
        return f"SymplecticTransform(n_modes={self.n_modes}, {self.description!r})"

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticTransform":
        return cls(np.eye(2 * n_modes), "identity")

    @classmethod
    def from_mode_unitary(
        cls,
        unitary: np.ndarray,
        mode_indices: Sequence[int] | None = None,
        n_modes: int | None = None,
        description: str = "",
    ) -> "SymplecticTransform":
        """Passive transform induced by a mode-space unitary b = U a.

        Each complex entry U_ij becomes the 2x2 block
        [[Re U, -Im U], [Im U, Re U]] coupling modes i and j.  When
        mode_indices is given the unitary is embedded into an n_modes system,
        acting as identity elsewhere.
        """
        unitary = np.asarray(unitary, dtype=complex)
        k = unitary.shape[0]
        if np.max(np.abs(unitary @ unitary.conj().T - np.eye(k))) > 1e-12:
            raise ValueError("mode matrix is not unitary")
        if mode_indices is None:
            mode_indices = list(range(k))
        if n_modes is None:
            n_modes = k
        if len(mode_indices) != k:
            raise ValueError("mode_indices length does not match unitary size")
        mat = np.eye(2 * n_modes)
        for bi, i in enumerate(mode_indices):
            for bj, j in enumerate(mode_indices):
                u = unitary[bi, bj]
                mat[2 * i, 2 * j] = u.real
                mat[2 * i, 2 * j + 1] = -u.imag
                mat[2 * i + 1, 2 * j] = u.imag
                mat[2 * i + 1, 2 * j + 1] = u.real
        return cls(mat, description)

    @classmethod
    def phase_shift(
        cls, angle_rad: float, mode_indices: Sequence[int], n_modes: int
    ) -> "SymplecticTransform":
        """Optical path phase a -> e^{i angle} a on the given modes."""
        u = np.exp(1j * angle_rad) * np.eye(len(mode_indices))
        return cls.from_mode_unitary(
            u, mode_indices, n_modes, f"phase({np.rad2deg(angle_rad):g} deg)"
        )

    @classmethod
    def squeezer(cls, r: float, mode_index: int, n_modes: int) -> "SymplecticTransform":
        """Quadrature squeezer X -> e^{-r} X, Y -> e^{r} Y on one mode."""
        mat = np.eye(2 * n_modes)
        mat[2 * mode_index, 2 * mode_index] = np.exp(-r)
        mat[2 * mode_index + 1, 2 * mode_index + 1] = np.exp(r)
        return cls(mat, f"squeezer(r={r:g})")


def apply_transform(state: GaussianState, transform: SymplecticTransform) -> GaussianState:
    """means' = S means, cov' = S cov S^T."""
    if transform.n_modes != state.n_modes:
        raise ValueError(
            f"transform acts on {transform.n_modes} modes, state has {state.n_modes}"
        )
    s = transform.matrix
    return GaussianState(s @ state.means, s @ state.cov @ s.T, state.modes)


def attach_vacuum(
    state: GaussianState, count: int, labels: Sequence[str] | None = None
) -> GaussianState:
    """Append `count` vacuum modes (zero mean, unit covariance, uncorrelated)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    n = state.n_modes
    if labels is None:
        labels = [f"vac{n + i}" for i in range(count)]
    if len(labels) != count:
        raise ValueError(f"expected {count} labels, got {len(labels)}")
    means = np.concatenate([state.means, np.zeros(2 * count)])
    cov = np.eye(2 * (n + count))
    cov[: 2 * n, : 2 * n] = state.cov
    modes = list(state.modes) + [ModeId(n + i, lab) for i, lab in enumerate(labels)]
    return GaussianState(means, cov, modes)


# Beam-splitter sign conventions.  For transmittance t, with r = sqrt(1-t):
#   "plain":    out_a = sqrt(t) a + r b,  out_b = r a - sqrt(t) b
#               (an involution: two identical splitters compose to identity)
#   "flip":     out_a = sqrt(t) a + r b,  out_b = -r a + sqrt(t) b
#               (a rotation: exact identity at t = 1)
#   "mirrored": "plain" mixing, then the reflected port's polarization axes
#               are swapped (x <-> y), modeling the mirrored transverse frame
#               of the reflected beam.  Requires two modes per port.  This is
#               the convention under which the difference signal of S1 is
#               squeezed and the sum signal of S3 sits at shot noise.
BS_CONVENTIONS = ("plain", "flip", "mirrored")


def beam_splitter_unitary(transmittance: float, convention: str = "plain") -> np.ndarray:
    """Mode-space unitary of a two-port splitter.

    Returns a 2x2 matrix over (a, b) for plain/flip, or a 4x4 matrix over
    (a_x, a_y, b_x, b_y) for the mirrored convention.
    """
    if not 0.0 <= transmittance <= 1.0:
        raise ValueError(f"transmittance must be in [0, 1], got {transmittance}")
    if convention not in BS_CONVENTIONS:
        raise ValueError(f"unknown beam-splitter convention {convention!r}")
    tt = np.sqrt(transmittance)
    rr = np.sqrt(1.0 - transmittance)
    if convention == "plain":
        return np.array([[tt, rr], [rr, -tt]])
    if convention == "flip":
        return np.array([[tt, rr], [-rr, tt]])
    # mirrored: plain per polarization, then swap the b port's x/y slots
    u = np.zeros((4, 4))
    u[0, 0], u[0, 2] = tt, rr        # a_x' = t a_x + r b_x
    u[1, 1], u[1, 3] = tt, rr        # a_y'
    u[2, 1], u[2, 3] = rr, -tt       # b_x' carries the y-polarization mix
    u[3, 0], u[3, 2] = rr, -tt       # b_y' carries the x-polarization mix
    return u


def pair_beam_splitter_unitary(transmittance: float, convention: str = "plain") -> np.ndarray:
    """4x4 splitter unitary over (a_x, a_y, b_x, b_y) for two-mode ports.

    Plain and flip act identically on each polarization; mirrored is the
    native 4x4 form.
    """
    if convention == "mirrored":
        return beam_splitter_unitary(transmittance, "mirrored")
    u2 = beam_splitter_unitary(transmittance, convention)
    u = np.zeros((4, 4))
    u[np.ix_((0, 2), (0, 2))] = u2   # x polarization: (a_x, b_x)
    u[np.ix_((1, 3), (1, 3))] = u2   # y polarization
    return u


def beam_splitter(
    state: GaussianState,
    modes_a: Sequence[ModeId | int] | ModeId | int,
    modes_b: Sequence[ModeId | int] | ModeId | int,
    transmittance: float,
    convention: str = "plain",
) -> GaussianState:
    """Mix two ports (one or two polarization-resolved modes each) on a splitter."""
    if isinstance(modes_a, (ModeId, int)):
        modes_a = [modes_a]
    if isinstance(modes_b, (ModeId, int)):
        modes_b = [modes_b]
    ia = [_as_index(m) for m in modes_a]
    ib = [_as_index(m) for m in modes_b]
    if len(ia) != len(ib) or len(ia) not in (1, 2):
        raise ValueError("ports must contain the same number of modes (1 or 2)")
    if set(ia) & set(ib):
        raise ValueError("beam-splitter ports overlap")
    for i in ia + ib:
        if not 0 <= i < state.n_modes:
            raise ValueError(f"unknown mode index {i}")
    if convention == "mirrored" and len(ia) != 2:
        raise ValueError("mirrored convention requires two modes per port")
    if len(ia) == 1:
        u = beam_splitter_unitary(transmittance, convention)
        order = [ia[0], ib[0]]
    else:
        u = pair_beam_splitter_unitary(transmittance, convention)
        order = [ia[0], ia[1], ib[0], ib[1]]
    transform = SymplecticTransform.from_mode_unitary(
        u, order, state.n_modes, f"bs(t={transmittance:g}, {convention})"
    )
    return apply_transform(state, transform)


def loss_channel(
    state: GaussianState, mode: ModeId | int, efficiency: float
) -> GaussianState:
    """Pure loss on one mode: V' = eta V + (1 - eta), mean scaled by sqrt(eta).

    Equivalent to a beam splitter of transmittance eta against a fresh vacuum
    with the vacuum port traced out.
    """
    if not 0.0 <= efficiency <= 1.0:
        raise ValueError(f"efficiency must be in [0, 1], got {efficiency}")
    i = _as_index(mode)
    if not 0 <= i < state.n_modes:
        raise ValueError(f"unknown mode index {i}")
    n = state.n_modes
    scale = np.ones(2 * n)
    scale[2 * i : 2 * i + 2] = np.sqrt(efficiency)
    cov = np.outer(scale, scale) * state.cov
    cov[2 * i, 2 * i] += 1.0 - efficiency
    cov[2 * i + 1, 2 * i + 1] += 1.0 - efficiency
    return GaussianState(scale * state.means, cov, state.modes)
