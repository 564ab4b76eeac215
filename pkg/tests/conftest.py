"""Shared generators for randomized physics tests.

Everything is built from seeded numpy Generators so failures reproduce; the
states are physical by construction (squeezed/thermal blocks rotated by
passive unitaries), never rejection-sampled.
"""

import numpy as np

from cvpol.gaussian import (
    GaussianState,
    SymplecticTransform,
    apply_transform,
    loss_channel,
)

BRIGHT = 3.0e4  # sqrt(photons); keeps every port far above the dim-field warning


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def rot2(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def random_mode_block(rng: np.random.Generator, max_db: float = 8.0,
                      thermal: bool = True) -> np.ndarray:
    """2x2 quadrature covariance: squeezed, possibly thermal, rotated."""
    db = rng.uniform(0.0, max_db)
    v = 10.0 ** (-db / 10.0)
    nu = 1.0 + rng.uniform(0.0, 1.5) if thermal else 1.0
    block = nu * np.diag([v, 1.0 / v])
    r = rot2(rng.uniform(0.0, np.pi))
    return r @ block @ r.T


def random_bright_state(rng: np.random.Generator, n_modes: int = 2,
                        mix: bool = True) -> GaussianState:
    """Random physical state with every mode displaced well into the bright
    regime.  With mix=True the mode blocks are stirred by a random passive
    unitary, producing inter-mode correlations."""
    cov = np.zeros((2 * n_modes, 2 * n_modes))
    for i in range(n_modes):
        cov[2 * i: 2 * i + 2, 2 * i: 2 * i + 2] = random_mode_block(rng)
    means = np.zeros(2 * n_modes)
    state = GaussianState(means, cov)
    if mix and n_modes > 1:
        u = haar_unitary(rng, n_modes)
        s = SymplecticTransform.from_mode_unitary(u, list(range(n_modes)), n_modes)
        state = apply_transform(state, s)
    amps = BRIGHT * (1.0 + rng.uniform(0.0, 1.0, size=n_modes))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n_modes)
    means = np.empty(2 * n_modes)
    means[0::2] = 2.0 * amps * np.cos(phases)
    means[1::2] = 2.0 * amps * np.sin(phases)
    return GaussianState(means, state.cov, state.modes)


def random_correlated_pair(rng: np.random.Generator) -> GaussianState:
    """4 modes forming two bright ports with genuine inter-port correlations
    (random squeezed inputs through a random passive 4-mode network), means
    pinned to bright 45-degree polarization on both ports so every Stokes
    denominator is healthy."""
    cov = np.zeros((8, 8))
    for i in range(4):
        cov[2 * i: 2 * i + 2, 2 * i: 2 * i + 2] = random_mode_block(rng)
    u = haar_unitary(rng, 4)
    s = SymplecticTransform.from_mode_unitary(u, [0, 1, 2, 3], 4)
    state = apply_transform(GaussianState(np.zeros(8), cov), s)
    means = np.zeros(8)
    for i in range(4):
        means[2 * i] = 2.0 * BRIGHT
    return GaussianState(means, state.cov, state.modes)


def separable_pair(rng: np.random.Generator, balanced: bool = False) -> GaussianState:
    """Two statistically independent bright ports (block-diagonal covariance).

    Each mode gets its own squeezing strength/orientation and thermal excess.
    Loss is drawn per mode, or shared by all four when balanced=True, which
    also pins equal port powers (the inference-based criterion is only
    guaranteed >= 1 when the conditioning port is not the brighter one).
    """
    cov = np.zeros((8, 8))
    for i in range(4):
        cov[2 * i: 2 * i + 2, 2 * i: 2 * i + 2] = random_mode_block(rng)
    means = np.zeros(8)
    if balanced:
        amp_a = amp_b = BRIGHT * (1.0 + rng.uniform(0.0, 1.0))
    else:
        amp_a = BRIGHT * (1.0 + rng.uniform(0.0, 1.0))
        amp_b = BRIGHT * (1.0 + rng.uniform(0.0, 1.0))
    for i, amp in zip(range(4), (amp_a, amp_a, amp_b, amp_b)):
        means[2 * i] = 2.0 * amp
    state = GaussianState(means, cov)
    if balanced:
        eta = rng.uniform(0.3, 1.0)
        etas = [eta] * 4
    else:
        etas = rng.uniform(0.3, 1.0, size=4)
    for i, eta in enumerate(etas):
        state = loss_channel(state, i, float(eta))
    return state
