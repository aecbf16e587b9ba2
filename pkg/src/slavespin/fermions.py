"""Quadratic pseudo-fermion sector.

The fermion half of the self-consistent pair of problems is a free
hopping Hamiltonian with spin-correlator-renormalized amplitudes.  At
half filling with particle-hole symmetry its solution reduces to one
N x N symmetric eigendecomposition: orbitals with negative energy are
doubly occupied, positive ones empty, and zero modes half-filled so the
particle-hole symmetric occupation (and the U -> infinity limit, where
the renormalized hopping vanishes) stays well defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ZERO_MODE_RTOL = 1e-9
ZERO_MODE_ATOL = 1e-12


class EigensolverError(RuntimeError):
    """Symmetric eigendecomposition failed to converge."""

    def __init__(self, matrix_norm: float, detail: str):
        self.matrix_norm = matrix_norm
        super().__init__(
            f"eigensolver did not converge (matrix norm {matrix_norm:.3e}): {detail}"
        )


@dataclass(frozen=True)
class SpinCouplings:
    """Ising couplings for the cluster spin problem.

    ``values[i, j]`` is the coupling between sites i and j (frequency
    units, nonzero only on hopping bonds); ``mean_bond`` is the average
    over internal nearest-neighbor bonds and feeds the mean-field
    embedding; ``n_bonds`` counts those bonds.
    """

    values: np.ndarray
    mean_bond: float
    n_bonds: int

    @property
    def n_sites(self) -> int:
        return self.values.shape[0]


def solve_density_matrix(renormalized_hopping: np.ndarray) -> np.ndarray:
    """One-particle density matrix (spin-summed) of the half-filled free problem.

    Occupations are 2 / 1 / 0 for orbital energies below / at / above
    zero; "at zero" means |lam| < 1e-9 * max|lam| (absolute 1e-12 for an
    all-zero matrix).
    """
    q = np.asarray(renormalized_hopping, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError("renormalized hopping must be a square matrix")
    if not np.allclose(q, q.T, atol=1e-12):
        raise ValueError("renormalized hopping must be symmetric")
    try:
        lam, vecs = np.linalg.eigh(q)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(float(np.linalg.norm(q)), str(exc)) from exc
    scale = np.max(np.abs(lam)) if lam.size else 0.0
    tol = ZERO_MODE_RTOL * scale if scale > 0 else ZERO_MODE_ATOL
    occ = np.where(lam < -tol, 2.0, np.where(lam > tol, 0.0, 1.0))
    return (vecs * occ) @ vecs.T


def build_spin_couplings(hopping: np.ndarray, density: np.ndarray) -> SpinCouplings:
    """Elementwise product of hopping and density matrices, plus the bond average."""
    t = np.asarray(hopping, dtype=float)
    g = np.asarray(density, dtype=float)
    if t.shape != g.shape:
        raise ValueError(f"shape mismatch: hopping {t.shape} vs density {g.shape}")
    values = t * g
    bond_mask = t != 0.0
    iu = np.triu_indices_from(t, k=1)
    on_bonds = values[iu][bond_mask[iu]]
    n_bonds = int(on_bonds.size)
    mean_bond = float(on_bonds.mean()) if n_bonds else 0.0
    return SpinCouplings(values=values, mean_bond=mean_bond, n_bonds=n_bonds)
