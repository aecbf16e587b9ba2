"""Finite-shot measurement emulation with readout errors.

Shots are z-basis bitstrings drawn from the Born distribution of a
state; each bit is then independently misread: a ground atom is detected
excited with probability epsilon, an excited atom ground with
probability epsilon_prime.  No mitigation or inversion is applied; all
estimators work on the raw flipped records.

Randomness: numpy ``Philox`` streams keyed through ``SeedSequence``.
Substreams for independent tasks come from ``SeedSequence(seed).spawn``,
so runs are reproducible bit-for-bit across platforms and concurrent
tasks stay statistically independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import spin_z_signs
from .rydberg import QuantumState


@dataclass(frozen=True)
class NoiseParams:
    """Shot count, readout error rates, and the RNG seed."""

    n_shots: int = 150
    epsilon: float = 0.0
    epsilon_prime: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_shots < 1:
            raise ValueError("need at least one shot")
        if not (0.0 <= self.epsilon <= 1.0 and 0.0 <= self.epsilon_prime <= 1.0):
            raise ValueError("readout error probabilities must lie in [0, 1]")


@dataclass
class ShotRecord:
    """N_s measured bitstrings (rows) for an n-site register."""

    bits: np.ndarray  # (n_shots, n_sites) uint8

    @property
    def n_shots(self) -> int:
        return self.bits.shape[0]

    @property
    def n_sites(self) -> int:
        return self.bits.shape[1]

    def write_ascii(self, path) -> None:
        """One bitstring per line, site 0 first, characters '0'/'1'."""
        with open(path, "w") as fh:
            for row in self.bits:
                fh.write("".join("1" if b else "0" for b in row))
                fh.write("\n")


def generator_from_seed(seed: int, spawn_key: tuple[int, ...] = ()) -> np.random.Generator:
    """Philox generator for a (possibly spawned) reproducible stream."""
    ss = np.random.SeedSequence(seed)
    for k in spawn_key:
        ss = ss.spawn(k + 1)[k]
    return np.random.Generator(np.random.Philox(ss))


def sample_bitstrings(
    state: QuantumState, params: NoiseParams, rng: np.random.Generator | None = None
) -> ShotRecord:
    """Draw Born-rule shots and apply independent readout flips."""
    if rng is None:
        rng = generator_from_seed(params.rng_seed)
    probs = state.probabilities()
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    n = state.n_sites
    outcomes = rng.choice(probs.size, size=params.n_shots, p=probs)
    bits = ((outcomes[:, None] >> np.arange(n)[None, :]) & 1).astype(np.uint8)
    if params.epsilon > 0.0 or params.epsilon_prime > 0.0:
        u = rng.random(bits.shape)
        flip = np.where(bits == 0, u < params.epsilon, u < params.epsilon_prime)
        bits = np.where(flip, 1 - bits, bits).astype(np.uint8)
    return ShotRecord(bits=bits)


def estimate_observables(record: ShotRecord):
    """Sample means of <sigma_i^z> and <sigma_i^z sigma_j^z> with standard errors.

    Returns (mags, corr, mag_err, corr_err).  Spin values are 2b - 1; the
    correlator matrix has unit diagonal by construction, and its standard
    errors use the closed-form variance 1 - mean^2 of +-1 variables.
    """
    ns = record.n_shots
    if ns < 2:
        raise ValueError("need at least two shots for standard errors")
    s = record.bits.astype(np.float64) * 2.0 - 1.0
    mags = s.mean(axis=0)
    mag_err = s.std(axis=0, ddof=1) / np.sqrt(ns)
    corr = (s.T @ s) / ns
    np.fill_diagonal(corr, 1.0)
    corr_var = np.clip(1.0 - corr**2, 0.0, None)
    corr_err = np.sqrt(corr_var / (ns - 1))
    np.fill_diagonal(corr_err, 0.0)
    return mags, corr, mag_err, corr_err


def exact_estimates(state: QuantumState):
    """Infinite-shot limit of the estimators, from Born probabilities.

    Same observable definitions as :func:`estimate_observables`, computed
    from the exact z-basis distribution; used by noiseless backends and
    as a cross-check path of the shot pipeline.
    """
    probs = state.probabilities()
    signs = spin_z_signs(state.n_sites)
    mags = probs @ signs
    corr = (signs * probs[:, None]).T @ signs
    np.fill_diagonal(corr, 1.0)
    return mags, corr
