# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation of the odd-index double series."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double PI4 = 3.141592653589793 ** 4


def series_sums(sigma, double beta, int max_index):
    """Same contract as the pure-python kernel; see _series_py.series_sums."""
    sig_arr = np.atleast_1d(np.asarray(sigma, dtype=np.float64))
    cdef double[::1] sig = np.ascontiguousarray(sig_arr.ravel())
    cdef Py_ssize_t nsig = sig.shape[0]
    s_d_arr = np.empty(nsig, dtype=np.float64)
    s_s_arr = np.empty(nsig, dtype=np.float64)
    cdef double[::1] s_d = s_d_arr
    cdef double[::1] s_s = s_s_arr

    cdef Py_ssize_t i
    cdef int m, n
    cdef double q, w, denom, acc_d, acc_s, s2, nb

    for i in range(nsig):
        s2 = sig[i] * sig[i] / PI4
        acc_d = 0.0
        acc_s = 0.0
        m = 1
        while m <= max_index:
            n = 1
            while n <= max_index:
                nb = n / beta
                q = m * m + nb * nb
                w = (<double> m * n) ** 2
                denom = w * (q * q + s2)
                acc_d += q / denom
                acc_s += 1.0 / denom
                n += 2
            m += 2
        s_d[i] = acc_d
        s_s[i] = acc_s

    if np.ndim(sigma) == 0:
        return s_d_arr[0], s_s_arr[0]
    return s_d_arr.reshape(np.shape(sigma)), s_s_arr.reshape(np.shape(sigma))
