"""Pure-numpy implementation of the bit-flip Hamiltonian kernel.

The single hot operation of the whole suite is

    out[a] = diag[a] * x[a] + sum_i c_i * x[a ^ (1 << i)]

applied along axis 0 of a state vector (dim,) or a stacked array (dim, m),
where ``dim = 2**n``.  Every Hamiltonian in the suite (transverse-field
Ising cluster, Rydberg drive) is a real diagonal plus single-bit-flip
off-diagonals, so this kernel backs ground-state Lanczos iterations and
Runge-Kutta time propagation alike.
"""

import numpy as np

BACKEND = "numpy"


def apply_diag_flips(diag, flip_coeffs, x, out=None):
    """Return ``diag*x + sum_i flip_coeffs[i] * flip_i(x)`` along axis 0.

    ``flip_i`` exchanges the two halves of axis 0 that differ in bit i of
    the basis index.  Zero coefficients are skipped.
    """
    x = np.ascontiguousarray(x)
    dim = x.shape[0]
    if out is None:
        out = np.empty_like(x)
    if x.ndim == 1:
        np.multiply(diag, x, out=out)
    else:
        np.multiply(diag[:, None], x, out=out)
    tail = x.shape[1:]
    for i, c in enumerate(flip_coeffs):
        if c == 0.0:
            continue
        block = 1 << i
        view = x.reshape((dim // (2 * block), 2, block) + tail)
        flipped = view[:, ::-1].reshape(x.shape)
        out += c * flipped
    return out
