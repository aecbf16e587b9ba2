"""Bit-basis spin operators shared by the exact and Rydberg solvers.

Basis convention (fixed everywhere): a computational basis state of an
n-site cluster is an integer index a in [0, 2**n); bit i of a is the
state of site i (row-major site order from the lattice module).  Bit
value 1 means sigma^z = +1, which on the Rydberg register is the excited
state |r>; bit 0 means sigma^z = -1, the atomic ground state |g>.

All Hamiltonians handled here are a real diagonal plus single-site
sigma^x flips with real coefficients:

    H = diag(d) + sum_i c_i * sigma_i^x

which covers the Ising cluster Hamiltonian (ZZ + longitudinal fields +
uniform transverse drive) and the Rydberg resource Hamiltonian (van der
Waals n.n interactions + detunings + Rabi drive).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from ._kernels import apply_diag_flips

MAX_SITES = 14


class DimensionError(ValueError):
    """Cluster too large for dense bit-basis representation."""


def check_site_count(n_sites: int) -> None:
    if n_sites < 1:
        raise ValueError(f"need at least one site, got {n_sites}")
    if n_sites > MAX_SITES:
        raise DimensionError(
            f"{n_sites} sites exceeds the configured maximum of {MAX_SITES} "
            f"(dimension 2**{n_sites})"
        )


def spin_z_signs(n_sites: int) -> np.ndarray:
    """(2**n, n) array of sigma^z eigenvalues, column i for site i."""
    check_site_count(n_sites)
    idx = np.arange(1 << n_sites, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n_sites)[None, :]) & 1
    return 2.0 * bits - 1.0


def occupation_bits(n_sites: int) -> np.ndarray:
    """(2**n, n) array of n-hat eigenvalues (0 or 1) as floats."""
    return 0.5 * (spin_z_signs(n_sites) + 1.0)


def zz_diagonal(couplings: np.ndarray) -> np.ndarray:
    """Diagonal of sum_{i<j} couplings[i,j] * sigma_i^z sigma_j^z."""
    c = np.asarray(couplings, dtype=float)
    n = c.shape[0]
    signs = spin_z_signs(n)
    diag = np.zeros(1 << n)
    for i in range(n):
        for j in range(i + 1, n):
            if c[i, j] != 0.0:
                diag += c[i, j] * signs[:, i] * signs[:, j]
    return diag


def pair_occupation_diagonal(interactions: np.ndarray) -> np.ndarray:
    """Diagonal of sum_{i<j} interactions[i,j] * n_i n_j."""
    v = np.asarray(interactions, dtype=float)
    n = v.shape[0]
    bits = occupation_bits(n)
    diag = np.zeros(1 << n)
    for i in range(n):
        for j in range(i + 1, n):
            if v[i, j] != 0.0:
                diag += v[i, j] * bits[:, i] * bits[:, j]
    return diag


def field_diagonal(fields: np.ndarray, n_sites: int) -> np.ndarray:
    """Diagonal of sum_i fields[i] * sigma_i^z."""
    return spin_z_signs(n_sites) @ np.asarray(fields, dtype=float)


def occupation_diagonal(weights: np.ndarray, n_sites: int) -> np.ndarray:
    """Diagonal of sum_i weights[i] * n_i."""
    return occupation_bits(n_sites) @ np.asarray(weights, dtype=float)


@dataclass
class SpinHamiltonian:
    """Hermitian operator d + sum_i c_i sigma_i^x on n sites.

    ``diag`` has length 2**n and ``flip_coeffs`` length n; both are real,
    so the operator is real-symmetric in the computational basis.
    """

    n_sites: int
    diag: np.ndarray
    flip_coeffs: np.ndarray

    def __post_init__(self):
        check_site_count(self.n_sites)
        self.diag = np.ascontiguousarray(self.diag, dtype=float)
        self.flip_coeffs = np.ascontiguousarray(self.flip_coeffs, dtype=float)
        if self.diag.shape != (1 << self.n_sites,):
            raise ValueError("diagonal length does not match 2**n_sites")
        if self.flip_coeffs.shape != (self.n_sites,):
            raise ValueError("one flip coefficient per site required")

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def apply(self, x: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
        return apply_diag_flips(self.diag, self.flip_coeffs, x, out)

    def norm_bound(self) -> float:
        """Cheap upper bound on the spectral norm."""
        return float(np.max(np.abs(self.diag)) + np.sum(np.abs(self.flip_coeffs)))

    def to_dense(self) -> np.ndarray:
        h = np.diag(self.diag).astype(float)
        idx = np.arange(self.dim)
        for i, c in enumerate(self.flip_coeffs):
            if c != 0.0:
                h[idx, idx ^ (1 << i)] += c
        return h

    def as_linear_operator(self) -> spla.LinearOperator:
        return spla.LinearOperator(
            (self.dim, self.dim), matvec=self.apply, dtype=np.float64
        )

    def expectation(self, state: np.ndarray) -> float:
        return float(np.real(np.vdot(state, self.apply(state))))


def magnetizations(state_probs: np.ndarray, n_sites: int) -> np.ndarray:
    """Per-site <sigma^z> from z-basis probabilities."""
    return state_probs @ spin_z_signs(n_sites)


def zz_correlations(state_probs: np.ndarray, n_sites: int) -> np.ndarray:
    """Full <sigma_i^z sigma_j^z> matrix from z-basis probabilities."""
    signs = spin_z_signs(n_sites)
    return (signs * state_probs[:, None]).T @ signs
