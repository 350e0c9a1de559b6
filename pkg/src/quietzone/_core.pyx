# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels.

Same algorithms and same call signatures as ``quietzone._pycore``; the loops
over evaluation points run without the GIL so callers can split work across
threads.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, sin, cos, atan2, fabs, hypot, pow, INFINITY, NAN, M_PI
from libc.stdlib cimport malloc, free

cnp.import_array()

name = "cython"

cdef double EULER_GAMMA = 0.57721566490153286061
cdef double ASYMPTOTIC_SWITCH = 25.0
cdef double BIG = 1e250
cdef double HUGE_Y = 1e300


cdef inline int _start(int nmax, double z) noexcept nogil:
    cdef double top = nmax if nmax > z else z
    cdef int m = <int>top + 20 + <int>(12.0 * pow(z, 1.0 / 3.0))
    return m + (m & 1)


def miller_start(nmax, zmax):
    """Starting order for the downward recurrence."""
    return _start(<int>nmax, <double>zmax)


cdef void _miller(int start, double z, double* f) noexcept nogil:
    """Normalised J_0..J_start into f (length start+2)."""
    cdef int n, j
    cdef double inv = 2.0 / z
    cdef double norm
    f[start + 1] = 0.0
    f[start] = 1e-30
    for n in range(start, 0, -1):
        f[n - 1] = n * inv * f[n] - f[n + 1]
        if fabs(f[n - 1]) > BIG:
            for j in range(n - 1, start + 1):
                f[j] /= BIG
    norm = f[0]
    for j in range(2, start + 1, 2):
        norm += 2.0 * f[j]
    for j in range(start + 1):
        f[j] /= norm


cdef void _asymptotic_y01(double z, double* y0, double* y1) noexcept nogil:
    cdef int nu, k
    cdef double mu, p, q, term, chi, amp
    amp = sqrt(2.0 / (M_PI * z))
    for nu in range(2):
        mu = 4.0 * nu * nu
        p = 1.0
        q = 0.0
        term = 1.0
        for k in range(1, 60):
            term = term * (mu - (2 * k - 1) * (2 * k - 1)) / (k * 8.0 * z)
            if k % 2:
                if (k // 2) % 2 == 0:
                    q += term
                else:
                    q -= term
            else:
                if (k // 2) % 2 == 0:
                    p += term
                else:
                    p -= term
            if fabs(term) < 1e-18:
                break
        chi = z - (0.5 * nu + 0.25) * M_PI
        if nu == 0:
            y0[0] = amp * (p * sin(chi) + q * cos(chi))
        else:
            y1[0] = amp * (p * sin(chi) + q * cos(chi))


cdef void _neumann_y01(int start, double z, double* f, double* y0, double* y1) noexcept nogil:
    cdef int k
    cdef double lg = log(0.5 * z) + EULER_GAMMA
    cdef double s0 = 0.0, s1 = 0.0, sgn
    for k in range(1, start // 2 + 1):
        sgn = -1.0 if k % 2 else 1.0
        s0 += sgn * f[2 * k] / k
        if 2 * k + 1 <= start:
            s1 += sgn * (2 * k + 1) * f[2 * k + 1] / (<double>k * (k + 1))
    y0[0] = (2.0 / M_PI) * (lg * f[0] - 2.0 * s0)
    y1[0] = (2.0 / M_PI) * (-f[0] / z + (lg - 1.0) * f[1] - s1)


cdef void _jy(int nmax, double z, double* f, double* Y) noexcept nogil:
    """J into f[0..start], Y into Y[0..max(nmax,1)]; z > 0."""
    cdef int start = _start(nmax if nmax > 1 else 1, z)
    cdef int n
    cdef double y0, y1, nxt
    cdef bint dead
    _miller(start, z, f)
    if z <= ASYMPTOTIC_SWITCH:
        _neumann_y01(start, z, f, &y0, &y1)
    else:
        _asymptotic_y01(z, &y0, &y1)
    Y[0] = y0
    Y[1] = y1
    dead = not (fabs(y1) <= HUGE_Y)
    if dead:
        Y[1] = -INFINITY
    for n in range(1, nmax):
        if dead:
            Y[n + 1] = -INFINITY
            continue
        nxt = (2.0 * n / z) * Y[n] - Y[n - 1]
        if not (fabs(nxt) <= HUGE_Y):
            dead = True
            Y[n + 1] = -INFINITY
        else:
            Y[n + 1] = nxt


def j_table(int nmax, z):
    """``J_0(z) .. J_nmax(z)`` for each entry of ``z``; shape (nmax+1, len(z))."""
    cdef const double[::1] zz = np.ascontiguousarray(np.atleast_1d(z), dtype=float)
    cdef Py_ssize_t npts = zz.shape[0], i
    cdef int n, start
    out_arr = np.zeros((nmax + 1, npts))
    cdef double[:, ::1] out = out_arr
    cdef double zmax = 0.0
    for i in range(npts):
        if zz[i] > zmax:
            zmax = zz[i]
    cdef double* f = <double*>malloc((_start(nmax, zmax) + 2) * sizeof(double))
    try:
        with nogil:
            for i in range(npts):
                if zz[i] <= 0.0:
                    out[0, i] = 1.0
                    continue
                start = _start(nmax, zz[i])
                _miller(start, zz[i], f)
                for n in range(nmax + 1):
                    out[n, i] = f[n]
    finally:
        free(f)
    return out_arr


def jy_table(int nmax, z):
    """``J_n`` and ``Y_n`` for ``n = 0..nmax``; each of shape (nmax+1, len(z))."""
    cdef const double[::1] zz = np.ascontiguousarray(np.atleast_1d(z), dtype=float)
    cdef Py_ssize_t npts = zz.shape[0], i
    cdef int n
    cdef int m1 = nmax if nmax > 1 else 1
    J_arr = np.zeros((nmax + 1, npts))
    Y_arr = np.empty((nmax + 1, npts))
    cdef double[:, ::1] J = J_arr
    cdef double[:, ::1] Yv = Y_arr
    cdef double zmax = 0.0
    for i in range(npts):
        if zz[i] > zmax:
            zmax = zz[i]
    cdef double* f = <double*>malloc((_start(m1, zmax) + 2) * sizeof(double))
    cdef double* Y = <double*>malloc((m1 + 1) * sizeof(double))
    try:
        with nogil:
            for i in range(npts):
                if zz[i] <= 0.0:
                    J[0, i] = 1.0
                    for n in range(nmax + 1):
                        Yv[n, i] = -INFINITY
                    continue
                _jy(m1, zz[i], f, Y)
                for n in range(nmax + 1):
                    J[n, i] = f[n]
                    Yv[n, i] = Y[n]
    finally:
        free(f)
        free(Y)
    return J_arr, Y_arr


def outgoing_sum(xs, ys, double cx, double cy, double k, coeffs):
    """``sum_{l=-N}^{N} c_l H_l^(1)(k r) e^{i l theta}`` about centre ``(cx, cy)``."""
    cdef const double[::1] x = np.ascontiguousarray(xs, dtype=float).ravel()
    cdef const double[::1] y = np.ascontiguousarray(ys, dtype=float).ravel()
    cdef const double complex[::1] c = np.ascontiguousarray(coeffs, dtype=complex)
    cdef int nmax = (c.shape[0] - 1) // 2
    cdef int m1 = nmax if nmax > 1 else 1
    cdef Py_ssize_t npts = x.shape[0], i
    cdef int l
    out_arr = np.empty(npts, dtype=complex)
    cdef double complex[::1] out = out_arr
    cdef double dx, dy, r, th, zmax = 0.0
    cdef double complex acc, ph, e, h, cp, cm
    for i in range(npts):
        r = k * hypot(x[i] - cx, y[i] - cy)
        if r > zmax:
            zmax = r
    cdef double* f = <double*>malloc((_start(m1, zmax) + 2) * sizeof(double))
    cdef double* Y = <double*>malloc((m1 + 1) * sizeof(double))
    try:
        with nogil:
            for i in range(npts):
                dx = x[i] - cx
                dy = y[i] - cy
                r = hypot(dx, dy)
                if r == 0.0:
                    out[i] = NAN
                    continue
                th = atan2(dy, dx)
                _jy(m1, k * r, f, Y)
                acc = 0
                if c[nmax] != 0:
                    acc = c[nmax] * (f[0] + 1j * Y[0])
                e = cos(th) + 1j * sin(th)
                ph = 1
                for l in range(1, nmax + 1):
                    ph = ph * e
                    cp = c[nmax + l]
                    cm = c[nmax - l]
                    if cp == 0 and cm == 0:
                        continue
                    if l % 2:
                        cm = -cm
                    h = f[l] + 1j * Y[l]
                    acc = acc + h * (cp * ph + cm * ph.conjugate())
                out[i] = acc
    finally:
        free(f)
        free(Y)
    return out_arr


def regular_sum(xs, ys, double cx, double cy, double k, coeffs):
    """``sum_{l=-N}^{N} c_l J_l(k r) e^{i l theta}`` about centre ``(cx, cy)``."""
    cdef const double[::1] x = np.ascontiguousarray(xs, dtype=float).ravel()
    cdef const double[::1] y = np.ascontiguousarray(ys, dtype=float).ravel()
    cdef const double complex[::1] c = np.ascontiguousarray(coeffs, dtype=complex)
    cdef int nmax = (c.shape[0] - 1) // 2
    cdef Py_ssize_t npts = x.shape[0], i
    cdef int l
    out_arr = np.empty(npts, dtype=complex)
    cdef double complex[::1] out = out_arr
    cdef double dx, dy, r, th, zmax = 0.0
    cdef double complex acc, ph, e, cp, cm
    for i in range(npts):
        r = k * hypot(x[i] - cx, y[i] - cy)
        if r > zmax:
            zmax = r
    cdef double* f = <double*>malloc((_start(nmax, zmax) + 2) * sizeof(double))
    try:
        with nogil:
            for i in range(npts):
                dx = x[i] - cx
                dy = y[i] - cy
                r = hypot(dx, dy)
                if r == 0.0:
                    out[i] = c[nmax]
                    continue
                th = atan2(dy, dx)
                _miller(_start(nmax, k * r), k * r, f)
                acc = c[nmax] * f[0]
                e = cos(th) + 1j * sin(th)
                ph = 1
                for l in range(1, nmax + 1):
                    ph = ph * e
                    cp = c[nmax + l]
                    cm = c[nmax - l]
                    if cp == 0 and cm == 0:
                        continue
                    if l % 2:
                        cm = -cm
                    acc = acc + f[l] * (cp * ph + cm * ph.conjugate())
                out[i] = acc
    finally:
        free(f)
    return out_arr
