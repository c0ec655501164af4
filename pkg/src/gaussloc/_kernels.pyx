# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled oracle scoring kernel; see ``_kernels_py`` for the reference version."""

import numpy as np
from libc.math cimport sqrt, log2, fabs

ENTROPY = 0
LOG_NEGATIVITY = 1


cdef inline double _entropy_from_det(double det_a) noexcept nogil:
    cdef double n
    if det_a < 1.0:
        det_a = 1.0
    n = 0.5 * (sqrt(det_a) - 1.0)
    if n <= 0.0:
        return 0.0
    return (n + 1.0) * log2(n + 1.0) - n * log2(n)


cdef inline double _det2(double[4][4] m, int i, int j) noexcept nogil:
    return m[i][j] * m[i + 1][j + 1] - m[i][j + 1] * m[i + 1][j]


cdef double _det4(double[4][4] m) noexcept nogil:
    cdef double w[4][4]
    cdef double det = 1.0, f, t
    cdef int i, j, k, p
    for i in range(4):
        for j in range(4):
            w[i][j] = m[i][j]
    for k in range(4):
        p = k
        for i in range(k + 1, 4):
            if fabs(w[i][k]) > fabs(w[p][k]):
                p = i
        if w[p][k] == 0.0:
            return 0.0
        if p != k:
            for j in range(4):
                t = w[k][j]
                w[k][j] = w[p][j]
                w[p][j] = t
            det = -det
        det *= w[k][k]
        for i in range(k + 1, 4):
            f = w[i][k] / w[k][k]
            for j in range(k, 4):
                w[i][j] -= f * w[k][j]
    return det


cdef inline double _score(double[4][4] cond, int measure) noexcept nogil:
    cdef double delta, disc, mu2
    if measure == 0:
        return _entropy_from_det(_det2(cond, 0, 0))
    delta = _det2(cond, 0, 0) + _det2(cond, 2, 2) - 2.0 * _det2(cond, 0, 2)
    disc = delta * delta - 4.0 * _det4(cond)
    if disc < 0.0:
        disc = 0.0
    mu2 = 0.5 * (delta - sqrt(disc))
    if mu2 < 1e-300:
        mu2 = 1e-300
    mu2 = -0.5 * log2(mu2)
    return mu2 if mu2 > 0.0 else 0.0


cdef void _run(const double[:, ::1] a, const double[:, ::1] c, const double[:, ::1] b,
               const double[:, :, ::1] proj, const double[:, ::1] hom, int measure,
               double[::1] out) noexcept nogil:
    cdef Py_ssize_t n, npj = proj.shape[0], nh = hom.shape[0]
    cdef int i, j
    cdef double g00, g01, g11, det, i00, i01, i11, u0, u1, den
    cdef double cg0, cg1
    cdef double cond[4][4]
    cdef double cu[4]
    for n in range(npj):
        g00 = b[0, 0] + proj[n, 0, 0]
        g01 = 0.5 * (b[0, 1] + b[1, 0] + proj[n, 0, 1] + proj[n, 1, 0])
        g11 = b[1, 1] + proj[n, 1, 1]
        det = g00 * g11 - g01 * g01
        i00 = g11 / det
        i01 = -g01 / det
        i11 = g00 / det
        for i in range(4):
            cg0 = c[i, 0] * i00 + c[i, 1] * i01
            cg1 = c[i, 0] * i01 + c[i, 1] * i11
            for j in range(4):
                cond[i][j] = a[i, j] - (cg0 * c[j, 0] + cg1 * c[j, 1])
        out[n] = _score(cond, measure)
    for n in range(nh):
        u0 = hom[n, 0]
        u1 = hom[n, 1]
        den = u0 * u0 * b[0, 0] + u0 * u1 * (b[0, 1] + b[1, 0]) + u1 * u1 * b[1, 1]
        for i in range(4):
            cu[i] = c[i, 0] * u0 + c[i, 1] * u1
        for i in range(4):
            for j in range(4):
                cond[i][j] = a[i, j] - cu[i] * cu[j] / den
        out[npj + n] = _score(cond, measure)


def score_single_mode(a, c, b, proj_cms, hom_dirs, int measure):
    """Entanglement of the kept pair for each candidate measurement of one mode."""
    a_ = np.ascontiguousarray(a, dtype=np.float64)
    c_ = np.ascontiguousarray(c, dtype=np.float64)
    b_ = np.ascontiguousarray(b, dtype=np.float64)
    p_ = np.ascontiguousarray(proj_cms, dtype=np.float64).reshape(-1, 2, 2)
    h_ = np.ascontiguousarray(hom_dirs, dtype=np.float64).reshape(-1, 2)
    if a_.shape != (4, 4) or c_.shape != (4, 2) or b_.shape != (2, 2):
        raise ValueError("expected 4x4, 4x2 and 2x2 blocks")
    out = np.empty(p_.shape[0] + h_.shape[0], dtype=np.float64)
    cdef const double[:, ::1] av = a_
    cdef const double[:, ::1] cv = c_
    cdef const double[:, ::1] bv = b_
    cdef const double[:, :, ::1] pv = p_
    cdef const double[:, ::1] hv = h_
    cdef double[::1] ov = out
    with nogil:
        _run(av, cv, bv, pv, hv, measure, ov)
    return out
