# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bit-flip Hamiltonian kernel.

Same contract as ``_numpy.apply_diag_flips``: for basis index a,

    out[a] = diag[a] * x[a] + sum_i c_i * x[a ^ (1 << i)]

with x of shape (dim,) or (dim, m), real or complex.  The XOR access
pattern for bit i touches two interleaved contiguous runs of length
2**i, which the loops below walk block by block.
"""

import numpy as np

cimport cython

ctypedef fused value_t:
    double
    double complex

BACKEND = "cython"


def apply_diag_flips(double[::1] diag, double[::1] flip_coeffs, x, out=None):
    x = np.ascontiguousarray(x)
    if out is None:
        out = np.empty_like(x)
    if x.ndim == 1:
        if x.dtype == np.complex128:
            _apply_1d[double complex](diag, flip_coeffs, x, out)
        else:
            _apply_1d[double](diag, flip_coeffs, x, out)
    else:
        if x.dtype == np.complex128:
            _apply_2d[double complex](diag, flip_coeffs, x, out)
        else:
            _apply_2d[double](diag, flip_coeffs, x, out)
    return out


@cython.boundscheck(False)
@cython.wraparound(False)
def _apply_1d(double[::1] diag, double[::1] coeffs, value_t[::1] x, value_t[::1] out):
    cdef Py_ssize_t dim = x.shape[0]
    cdef Py_ssize_t n = coeffs.shape[0]
    cdef Py_ssize_t a, i, block, base, k
    cdef double c
    with nogil:
        for a in range(dim):
            out[a] = diag[a] * x[a]
        for i in range(n):
            c = coeffs[i]
            if c == 0.0:
                continue
            block = 1 << i
            base = 0
            while base < dim:
                for k in range(block):
                    out[base + k] = out[base + k] + c * x[base + block + k]
                    out[base + block + k] = out[base + block + k] + c * x[base + k]
                base += 2 * block


@cython.boundscheck(False)
@cython.wraparound(False)
def _apply_2d(double[::1] diag, double[::1] coeffs, value_t[:, ::1] x, value_t[:, ::1] out):
    cdef Py_ssize_t dim = x.shape[0]
    cdef Py_ssize_t m = x.shape[1]
    cdef Py_ssize_t n = coeffs.shape[0]
    cdef Py_ssize_t a, i, block, base, k, j
    cdef double d, c
    with nogil:
        for a in range(dim):
            d = diag[a]
            for j in range(m):
                out[a, j] = d * x[a, j]
        for i in range(n):
            c = coeffs[i]
            if c == 0.0:
                continue
            block = 1 << i
            base = 0
            while base < dim:
                for k in range(block):
                    for j in range(m):
                        out[base + k, j] = out[base + k, j] + c * x[base + block + k, j]
                        out[base + block + k, j] = out[base + block + k, j] + c * x[base + k, j]
                base += 2 * block
