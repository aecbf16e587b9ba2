"""Exact solver for the cluster spin problem.

The cluster Hamiltonian is an Ising model in transverse and longitudinal
fields (Pauli operators, so magnetizations live in [-1, 1]):

    H = sum_{i<j} K[i,j] sigma_i^z sigma_j^z
        + (U/4) sum_i sigma_i^x
        + sum_i h_i sigma_i^z

Each unordered pair enters once with coefficient K[i,j]; h is the
mean-field embedding of the surrounding lattice.  Solved by dense
diagonalization up to 8 sites and by Lanczos beyond.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .fermions import SpinCouplings
from .operators import (
    SpinHamiltonian,
    field_diagonal,
    magnetizations,
    spin_z_signs,
    zz_correlations,
    zz_diagonal,
)

DENSE_MAX_SITES = 8
RESIDUAL_RTOL = 1e-8
DEGENERACY_RTOL = 1e-10


class GroundStateError(RuntimeError):
    """Iterative eigensolver failed; carries the residual achieved."""

    def __init__(self, residual: float, detail: str):
        self.residual = residual
        super().__init__(f"ground-state solve failed (residual {residual:.3e}): {detail}")


@dataclass
class SpinSolution:
    """Ground state of the cluster spin Hamiltonian and its z-observables."""

    state: np.ndarray
    energy: float
    magnetizations: np.ndarray
    mean_magnetization: float
    correlations: np.ndarray
    residual: float
    degenerate: bool = False


def build_cluster_hamiltonian(
    couplings: SpinCouplings | np.ndarray, u: float, fields: np.ndarray
) -> SpinHamiltonian:
    """Assemble the transverse-field Ising cluster Hamiltonian."""
    values = couplings.values if isinstance(couplings, SpinCouplings) else np.asarray(couplings, float)
    if not np.allclose(values, values.T, atol=1e-12):
        raise ValueError("coupling matrix must be symmetric")
    n = values.shape[0]
    fields = np.asarray(fields, dtype=float)
    if fields.shape != (n,):
        raise ValueError(f"expected {n} fields, got shape {fields.shape}")
    diag = zz_diagonal(values) + field_diagonal(fields, n)
    flips = np.full(n, u / 4.0)
    return SpinHamiltonian(n_sites=n, diag=diag, flip_coeffs=flips)


def _lowest_pair_dense(h: SpinHamiltonian):
    evals, evecs = np.linalg.eigh(h.to_dense())
    return evals[:2], evecs[:, :2]


def _lowest_pair_iterative(h: SpinHamiltonian):
    k = min(2, h.dim - 1)
    try:
        evals, evecs = spla.eigsh(h.as_linear_operator(), k=k, which="SA")
    except spla.ArpackNoConvergence as exc:
        res = np.nan
        if exc.eigenvectors is not None and exc.eigenvectors.size:
            v = exc.eigenvectors[:, 0]
            e = float(exc.eigenvalues[0])
            res = float(np.linalg.norm(h.apply(v) - e * v))
        raise GroundStateError(res, str(exc)) from exc
    order = np.argsort(evals)
    return evals[order], evecs[:, order]


def ground_state(h: SpinHamiltonian) -> SpinSolution:
    """Lowest eigenpair with z-basis observables.

    A doubly degenerate ground level (broken-symmetry limit at zero
    field) is resolved toward maximum mean magnetization and flagged.
    """
    if h.n_sites <= DENSE_MAX_SITES:
        evals, evecs = _lowest_pair_dense(h)
    else:
        evals, evecs = _lowest_pair_iterative(h)

    scale = max(h.norm_bound(), 1e-300)
    degenerate = len(evals) > 1 and (evals[1] - evals[0]) < DEGENERACY_RTOL * scale
    if degenerate:
        psi = _maximize_magnetization(evecs[:, :2], h.n_sites)
    else:
        psi = evecs[:, 0]
    energy = float(evals[0])

    residual = float(np.linalg.norm(h.apply(psi) - energy * psi))
    if residual > RESIDUAL_RTOL * scale:
        raise GroundStateError(residual, "residual above tolerance")

    probs = np.abs(psi) ** 2
    mags = magnetizations(probs, h.n_sites)
    corr = zz_correlations(probs, h.n_sites)
    return SpinSolution(
        state=psi,
        energy=energy,
        magnetizations=mags,
        mean_magnetization=float(mags.mean()),
        correlations=corr,
        residual=residual,
        degenerate=degenerate,
    )


def _maximize_magnetization(basis: np.ndarray, n_sites: int) -> np.ndarray:
    """Pick the unit combination of degenerate states with maximal mean <sigma^z>.

    The mean-magnetization operator restricted to the degenerate span is
    a small symmetric matrix; its top eigenvector gives the extremal
    combination.
    """
    # mean sigma^z is diagonal in the z basis
    mdiag = spin_z_signs(n_sites).mean(axis=1)
    proj = basis.conj().T @ (mdiag[:, None] * basis)
    proj = 0.5 * (proj + proj.conj().T)
    w, v = np.linalg.eigh(proj)
    return basis @ v[:, -1]
