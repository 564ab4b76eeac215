"""Polarization elements as 2x2 Jones matrices on one (x, y) mode pair.

All angles are radians here; degree conversion happens at the circuit layer.
A Jones matrix J acts on the mode operators as (a_x', a_y')^T = J (a_x, a_y)^T
and is lifted to quadratures with SymplecticTransform.from_mode_unitary.
"""

from __future__ import annotations

import numpy as np

from .gaussian import GaussianState, SymplecticTransform, apply_transform

# Pauli correspondence of the Stokes parameters for a mode pair (x, y):
# S1 <-> sigma_z, S2 <-> sigma_x, S3 <-> sigma_y, each via S_k = a^dag sigma a.
PAULI = {
    1: np.array([[1, 0], [0, -1]], dtype=complex),
    2: np.array([[0, 1], [1, 0]], dtype=complex),
    3: np.array([[0, -1j], [1j, 0]], dtype=complex),
}


def rotator_jones(angle_rad: float) -> np.ndarray:
    """Geometric rotation of the polarization plane by angle."""
    c, s = np.cos(angle_rad), np.sin(angle_rad)
    return np.array([[c, -s], [s, c]], dtype=complex)


def half_wave_jones(angle_rad: float) -> np.ndarray:
    """Half-wave plate, fast axis at angle from x."""
    c, s = np.cos(2 * angle_rad), np.sin(2 * angle_rad)
    return np.array([[c, s], [s, -c]], dtype=complex)


def quarter_wave_jones(angle_rad: float) -> np.ndarray:
    """Quarter-wave plate, fast axis at angle from x.

    R(theta) diag(1, i) R(-theta), with a global phase chosen so the fast
    axis is unretarded.
    """
    r = rotator_jones(angle_rad)
    return r @ np.diag([1.0, 1.0j]) @ r.conj().T


def phase_jones(angle_rad: float) -> np.ndarray:
    """Common optical path phase on both polarizations."""
    return np.exp(1j * angle_rad) * np.eye(2, dtype=complex)


def stokes_rotation(jones: np.ndarray) -> np.ndarray:
    """SO(3) action of a Jones matrix on the Stokes vector (S1, S2, S3).

    R_kl = Re tr(sigma_k J sigma_l J^dag) / 2.  Valid for unitary J; the
    result satisfies R R^T = 1 and det R = 1.
    """
    r = np.zeros((3, 3))
    for k in (1, 2, 3):
        for l in (1, 2, 3):
            r[k - 1, l - 1] = np.real(
                np.trace(PAULI[k] @ jones @ PAULI[l] @ jones.conj().T)
            ) / 2.0
    return r


def apply_jones(
    state: GaussianState,
    jones: np.ndarray,
    mode_x,
    mode_y,
    description: str = "",
) -> GaussianState:
    """Apply a 2x2 Jones matrix to the (x, y) mode pair of one port."""
    ix = mode_x.index if hasattr(mode_x, "index") else int(mode_x)
    iy = mode_y.index if hasattr(mode_y, "index") else int(mode_y)
    transform = SymplecticTransform.from_mode_unitary(
        jones, [ix, iy], state.n_modes, description or "jones"
    )
    return apply_transform(state, transform)


def pbs_recombine_unitary() -> np.ndarray:
    """Polarizing beam splitter over (a_x, a_y, b_x, b_y).

    Transmits x, reflects y: output port 1 collects (a_x, b_y), output
    port 2 collects (b_x, a_y).  A pure relabeling, no interference.
    """
    u = np.zeros((4, 4), dtype=complex)
    u[0, 0] = 1.0  # out1_x <- a_x
    u[1, 3] = 1.0  # out1_y <- b_y
    u[2, 2] = 1.0  # out2_x <- b_x
    u[3, 1] = 1.0  # out2_y <- a_y
    return u
