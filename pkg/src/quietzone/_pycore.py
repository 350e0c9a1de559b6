"""Pure-Python (numpy) implementation of the numerical kernels.

Mirrors ``quietzone._core`` function for function. Everything here is
vectorised over evaluation arguments, so a single call handles a whole chunk
of grid points.

Algorithms
----------
* ``J_n``: Miller downward recurrence started well above ``max(n, z)`` and
  normalised with ``J_0 + 2 sum J_2k = 1``. Intermediate values are rescaled
  when they exceed ``_BIG`` so tiny arguments do not overflow.
* ``Y_0, Y_1``: Neumann series in the Miller ``J`` values for ``z <= 25`` and
  Hankel's asymptotic expansion above, then upward recurrence in ``n``.
  Orders whose ``Y`` exceeds ``_HUGE`` are set to ``-inf``.
"""

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061
ASYMPTOTIC_SWITCH = 25.0
_BIG = 1e250
_HUGE = 1e300
_CHUNK = 2048

name = "python"


def miller_start(nmax, zmax):
    """Starting order for the downward recurrence."""
    m = int(max(nmax, zmax)) + 20 + int(12.0 * zmax ** (1.0 / 3.0))
    return m + (m & 1)


def _starts(nmax, z):
    m = np.maximum(nmax, z).astype(int) + 20 + (12.0 * z ** (1.0 / 3.0)).astype(int)
    return m + (m & 1)


def _miller(nmax, z):
    """Normalised ``J_0..J_start`` for an array of positive ``z``; shape (top+1, len(z)).

    Each column starts at its own order, so a value never depends on the
    other arguments in the batch. Rows above a column's start are zero.
    """
    starts = _starts(nmax, z)
    top = int(starts.max())
    f = np.zeros((top + 2, z.size))
    inv = 2.0 / z
    for n in range(top, 0, -1):
        seed = starts == n
        if seed.any():
            f[n, seed] = 1e-30
        f[n - 1] = n * inv * f[n] - f[n + 1]
        big = np.abs(f[n - 1]) > _BIG
        if big.any():
            f[n - 1 :, big] /= _BIG
    norm = f[0].copy()
    for n in range(2, top + 1, 2):      # fixed order keeps columns batch-independent
        norm += 2.0 * f[n]
    return f[: top + 1] / norm


def j_table(nmax, z):
    """``J_0(z) .. J_nmax(z)`` for each entry of ``z``; shape (nmax+1, len(z))."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.zeros((nmax + 1, z.size))
    pos = z > 0
    out[0, ~pos] = 1.0
    if pos.any():
        out[:, pos] = _miller(nmax, z[pos])[: nmax + 1]
    return out


def _asymptotic_y01(z):
    """``Y_0, Y_1`` from Hankel's large-argument expansion."""
    res = []
    for nu in (0, 1):
        mu = 4.0 * nu * nu
        p = np.ones_like(z)
        q = np.zeros_like(z)
        term = np.ones_like(z)
        live = np.ones(z.shape, dtype=bool)
        for k in range(1, 60):
            term = np.where(live, term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z), 0.0)
            sign = 1.0 if (k // 2) % 2 == 0 else -1.0
            if k % 2:
                q = np.where(live, q + sign * term, q)
            else:
                p = np.where(live, p + sign * term, p)
            live &= ~(np.abs(term) < 1e-18)
            if not live.any():
                break
        chi = z - (0.5 * nu + 0.25) * math.pi
        res.append(np.sqrt(2.0 / (math.pi * z)) * (p * np.sin(chi) + q * np.cos(chi)))
    return res


def _neumann_y01(f, z):
    """``Y_0, Y_1`` from the Neumann series over normalised Miller values ``f``."""
    start = f.shape[0] - 1
    lg = np.log(0.5 * z) + EULER_GAMMA
    s0 = np.zeros_like(z)
    s1 = np.zeros_like(z)
    for k in range(1, start // 2 + 1):
        sgn = -1.0 if k % 2 else 1.0
        s0 += (sgn / k) * f[2 * k]
        if 2 * k + 1 <= start:
            s1 += (sgn * (2 * k + 1) / (k * (k + 1))) * f[2 * k + 1]
    y0 = (2.0 / math.pi) * (lg * f[0] - 2.0 * s0)
    y1 = (2.0 / math.pi) * (-f[0] / z + (lg - 1.0) * f[1] - s1)
    return y0, y1


def jy_table(nmax, z):
    """``J_n`` and ``Y_n`` for ``n = 0..nmax``; each of shape (nmax+1, len(z)).

    Entries with ``z == 0`` get ``Y = -inf``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    J = np.zeros((nmax + 1, z.size))
    Y = np.full((max(nmax, 1) + 1, z.size), -np.inf)
    pos = z > 0
    J[0, ~pos] = 1.0
    if pos.any():
        zp = z[pos]
        f = _miller(max(nmax, 1), zp)
        J[:, pos] = f[: nmax + 1]
        y0 = np.empty_like(zp)
        y1 = np.empty_like(zp)
        small = zp <= ASYMPTOTIC_SWITCH
        if small.any():
            y0[small], y1[small] = _neumann_y01(f[:, small], zp[small])
        if (~small).any():
            y0[~small], y1[~small] = _asymptotic_y01(zp[~small])
        Yp = np.empty((max(nmax, 1) + 1, zp.size))
        Yp[0], Yp[1] = y0, y1
        dead = ~np.isfinite(y1) | (np.abs(y1) > _HUGE)
        with np.errstate(over="ignore", invalid="ignore"):
            for n in range(1, nmax):
                nxt = (2.0 * n / zp) * Yp[n] - Yp[n - 1]
                dead |= ~np.isfinite(nxt) | (np.abs(nxt) > _HUGE)
                Yp[n + 1] = np.where(dead, -np.inf, nxt)
        Y[:, pos] = Yp
    return J, Y[: nmax + 1]


def _mode_sum(table, coeffs, theta, nmax):
    """``sum_l c_l Z_|l| e^{i l theta}`` with ``Z_{-l} = (-1)^l Z_l``."""
    c0 = coeffs[nmax]
    with np.errstate(invalid="ignore", over="ignore"):
        acc = c0 * table[0] if c0 != 0 else np.zeros(theta.shape, complex)
        for l in range(1, nmax + 1):
            cp = coeffs[nmax + l]
            cm = coeffs[nmax - l] * (-1.0 if l % 2 else 1.0)
            if cp == 0 and cm == 0:
                continue
            acc = acc + table[l] * (cp * np.exp(1j * l * theta) + cm * np.exp(-1j * l * theta))
    return acc


def outgoing_sum(xs, ys, cx, cy, k, coeffs):
    """``sum_{l=-N}^{N} c_l H_l^(1)(k r) e^{i l theta}`` about centre ``(cx, cy)``.

    ``coeffs`` has length ``2N+1`` (index ``l + N``). Points on the centre give NaN;
    Hankel overflow gives a non-finite value.
    """
    xs = np.ascontiguousarray(xs, dtype=float).ravel()
    ys = np.ascontiguousarray(ys, dtype=float).ravel()
    coeffs = np.asarray(coeffs, dtype=complex)
    nmax = (coeffs.size - 1) // 2
    out = np.empty(xs.size, dtype=complex)
    for s in range(0, xs.size, _CHUNK):
        dx = xs[s : s + _CHUNK] - cx
        dy = ys[s : s + _CHUNK] - cy
        r = np.hypot(dx, dy)
        th = np.arctan2(dy, dx)
        J, Y = jy_table(nmax, k * r)
        H = np.empty(J.shape, dtype=complex)
        H.real = J
        H.imag = Y
        val = _mode_sum(H, coeffs, th, nmax)
        val[r == 0] = np.nan
        out[s : s + _CHUNK] = val
    return out


def regular_sum(xs, ys, cx, cy, k, coeffs):
    """``sum_{l=-N}^{N} c_l J_l(k r) e^{i l theta}`` about centre ``(cx, cy)``."""
    xs = np.ascontiguousarray(xs, dtype=float).ravel()
    ys = np.ascontiguousarray(ys, dtype=float).ravel()
    coeffs = np.asarray(coeffs, dtype=complex)
    nmax = (coeffs.size - 1) // 2
    out = np.empty(xs.size, dtype=complex)
    for s in range(0, xs.size, _CHUNK):
        dx = xs[s : s + _CHUNK] - cx
        dy = ys[s : s + _CHUNK] - cy
        r = np.hypot(dx, dy)
        th = np.where(r > 0, np.arctan2(dy, dx), 0.0)
        J = j_table(nmax, k * r)
        out[s : s + _CHUNK] = _mode_sum(J, coeffs, th, nmax)
    return out
