"""Rectangular clusters of the square lattice.

Sites are indexed row-major: site i sits at column i % nx, row i // nx.
The cluster has open boundaries; the surrounding infinite lattice enters
only through the mean-field embedding (one external-neighbor count per
site).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COORDINATION = 4  # square lattice


@dataclass(frozen=True)
class ClusterSpec:
    """An nx-by-ny rectangular cluster with row-major site order."""

    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"cluster dimensions must be >= 1, got {self.nx}x{self.ny}")

    @property
    def n_sites(self) -> int:
        return self.nx * self.ny

    def site_xy(self, i: int) -> tuple[int, int]:
        return i % self.nx, i // self.nx

    def internal_bonds(self) -> list[tuple[int, int]]:
        """Nearest-neighbor pairs (i < j) inside the cluster."""
        bonds = []
        for i in range(self.n_sites):
            x, y = self.site_xy(i)
            if x + 1 < self.nx:
                bonds.append((i, i + 1))
            if y + 1 < self.ny:
                bonds.append((i, i + self.nx))
        return bonds


def build_hopping(cluster: ClusterSpec, t_hop: float) -> np.ndarray:
    """Hopping matrix with entry -t_hop on every internal nearest-neighbor pair."""
    if t_hop <= 0:
        raise ValueError(f"hopping amplitude must be positive, got {t_hop}")
    n = cluster.n_sites
    t = np.zeros((n, n))
    for i, j in cluster.internal_bonds():
        t[i, j] = t[j, i] = -t_hop
    return t


def external_neighbor_counts(cluster: ClusterSpec) -> np.ndarray:
    """Number of square-lattice neighbors of each site lying outside the cluster."""
    n = cluster.n_sites
    z = np.zeros(n, dtype=int)
    for i in range(n):
        x, y = cluster.site_xy(i)
        internal = (x > 0) + (x + 1 < cluster.nx) + (y > 0) + (y + 1 < cluster.ny)
        z[i] = COORDINATION - internal
    return z
