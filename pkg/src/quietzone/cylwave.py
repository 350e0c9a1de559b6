"""Cylinder functions and the regular/outgoing wave functions built on them.

Conventions: time dependence ``exp(-i omega t)``, wavenumber ``k``, and

    U_n^{+/-}(x) = J_n(k|x|) exp(+/- i n arg x)
    V_n^{+/-}(x) = H^(1)_n(k|x|) exp(+/- i n arg x)

with ``arg x`` in ``[0, 2 pi)`` and ``arg 0 = 0``.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import BranchAmbiguityError, CapabilityError, SingularityError, TruncationError

ORDER_MAX = 200
ARG_MAX = 200.0
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Point2:
    """A point (or vector) in the plane."""

    x: float
    y: float

    @property
    def radius(self):
        return math.hypot(self.x, self.y)

    @property
    def angle(self):
        """Polar angle in ``[0, 2 pi)``; zero for the origin."""
        if self.x == 0.0 and self.y == 0.0:
            return 0.0
        a = math.atan2(self.y, self.x) % TWO_PI
        return 0.0 if a >= TWO_PI else a

    def __add__(self, other):
        other = as_point(other)
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        other = as_point(other)
        return Point2(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Point2(-self.x, -self.y)

    def __mul__(self, s):
        return Point2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.x
        yield self.y

    @classmethod
    def polar(cls, r, theta):
        return cls(r * math.cos(theta), r * math.sin(theta))


def as_point(p):
    if isinstance(p, Point2):
        return p
    x, y = p
    return Point2(float(x), float(y))


def _sign(sign):
    if sign in (1, "+"):
        return 1
    if sign in (-1, "-"):
        return -1
    raise ValueError(f"sign must be +1/-1 or '+'/'-', got {sign!r}")


def _check_order(order):
    if abs(order) > ORDER_MAX:
        raise CapabilityError(f"|order| = {abs(order)} exceeds ORDER_MAX = {ORDER_MAX}")


def _check_argument(x):
    if not math.isfinite(x) or x < 0.0:
        raise CapabilityError(f"argument must be finite and non-negative, got {x!r}")
    if x > ARG_MAX:
        raise CapabilityError(f"argument {x} exceeds validated range {ARG_MAX}")


def _parity(n):
    return np.where(np.asarray(n) % 2, -1.0, 1.0)


# -- vector helpers over contiguous order ranges ------------------------------

def bessel_j_range(nlo, nhi, x):
    """``J_n(x)`` for ``n = nlo..nhi`` (any integers) as a float array."""
    n = np.arange(nlo, nhi + 1)
    top = int(np.abs(n).max())
    table = kernels.j_table(top, np.array([float(x)]))[:, 0]
    return table[np.abs(n)] * np.where(n < 0, _parity(n), 1.0)


def bessel_j_prime_range(nlo, nhi, x):
    """``J_n'(x)`` for ``n = nlo..nhi`` via ``2 J_n' = J_{n-1} - J_{n+1}``."""
    j = bessel_j_range(nlo - 1, nhi + 1, x)
    return 0.5 * (j[:-2] - j[2:])


def hankel1_range(nlo, nhi, x, *, strict=True):
    """``H^(1)_n(x)`` for ``n = nlo..nhi``; ``x > 0``.

    With ``strict`` an overflowing order raises :class:`CapabilityError`;
    otherwise non-finite entries are returned as-is.
    """
    if x <= 0.0:
        raise SingularityError("Hankel function evaluated at zero argument")
    n = np.arange(nlo, nhi + 1)
    top = int(np.abs(n).max())
    J, Y = kernels.jy_table(max(top, 1), np.array([float(x)]))
    sgn = np.where(n < 0, _parity(n), 1.0)
    h = np.empty(n.size, dtype=complex)
    h.real = J[np.abs(n), 0] * sgn
    h.imag = Y[np.abs(n), 0] * sgn
    if strict and not np.all(np.isfinite(h)):
        bad = n[~np.isfinite(h)]
        raise CapabilityError(f"H_n({x}) overflows for |n| >= {int(np.abs(bad).min())}")
    return h


def hankel1_prime_range(nlo, nhi, x, *, strict=True):
    h = hankel1_range(nlo - 1, nhi + 1, x, strict=strict)
    return 0.5 * (h[:-2] - h[2:])


# -- scalar special functions --------------------------------------------------

def bessel_j(order, x):
    """Bessel function of the first kind ``J_order(x)`` for integer order."""
    _check_order(order)
    _check_argument(x)
    return float(bessel_j_range(order, order, x)[0])


def bessel_j_prime(order, x):
    """Derivative ``J_order'(x)``."""
    _check_order(order)
    _check_argument(x)
    return float(bessel_j_prime_range(order, order, x)[0])


def hankel1(order, x):
    """Hankel function of the first kind ``H^(1)_order(x) = J + iY``.

    Raises
    ------
    SingularityError
        If ``x <= 0``.
    CapabilityError
        If the order or argument is out of range, or the value overflows.
    """
    _check_order(order)
    if x <= 0.0:
        raise SingularityError("Hankel function is singular at zero argument")
    _check_argument(x)
    return complex(hankel1_range(order, order, x)[0])


def hankel1_prime(order, x):
    """Derivative ``H^(1)_order'(x)``."""
    _check_order(order)
    if x <= 0.0:
        raise SingularityError("Hankel function is singular at zero argument")
    _check_argument(x)
    return complex(hankel1_prime_range(order, order, x)[0])


# -- wave functions --------------------------------------------------------------

def wave_U(order, sign, k, p):
    """Regular wave ``J_n(k|p|) exp(+/- i n arg p)``."""
    p = as_point(p)
    s = _sign(sign)
    return bessel_j(order, k * p.radius) * complex(np.exp(1j * s * order * p.angle))


def wave_U_prime(order, sign, k, p):
    """Derivative function ``J_n'(k|p|) exp(+/- i n arg p)``."""
    p = as_point(p)
    s = _sign(sign)
    return bessel_j_prime(order, k * p.radius) * complex(np.exp(1j * s * order * p.angle))


def wave_V(order, sign, k, p):
    """Outgoing wave ``H^(1)_n(k|p|) exp(+/- i n arg p)``; singular at the origin."""
    p = as_point(p)
    s = _sign(sign)
    if p.radius == 0.0:
        raise SingularityError("outgoing wave evaluated at its centre")
    return hankel1(order, k * p.radius) * complex(np.exp(1j * s * order * p.angle))


def green(k, x, xp):
    """Free-space Green's function ``-(i/4) H_0^(1)(k|x - xp|)``."""
    d = as_point(x) - as_point(xp)
    if d.radius == 0.0:
        raise SingularityError("Green's function at coincident points")
    return -0.25j * wave_V(0, 1, k, d)


def graf_translate(l, k, x, y, *, tol=1e-14, max_terms=400):
    """Addition-theorem expansion of ``V_l^+(x - y)`` about the origin.

    For ``|x| > |y|`` sums ``V_n^+(x) U_{n-l}^-(y)``; for ``|x| < |y|`` sums
    ``U_n^+(x) V_{n-l}^-(y)``. The window grows until the three outermost
    terms on each side are below ``tol`` relative to the largest term.
    """
    x = as_point(x)
    y = as_point(y)
    rx, ry = x.radius, y.radius
    if abs(rx - ry) <= 1e-12 * max(rx, ry, 1e-300):
        raise BranchAmbiguityError("|x| == |y|: addition theorem has no convergent branch")
    outer = rx > ry
    centre = l if outer else 0
    K = int(math.ceil(k * max(rx, ry))) + 10
    tail = float("nan")
    while True:
        if 2 * K + 1 > max_terms:
            raise TruncationError(f"addition theorem did not converge within {max_terms} terms",
                                  estimate=tail)
        n = np.arange(centre - K, centre + K + 1)
        with np.errstate(invalid="ignore", over="ignore"):
            if outer:
                big = hankel1_range(n[0], n[-1], k * rx, strict=False) * np.exp(1j * n * x.angle)
                small = bessel_j_range(n[0] - l, n[-1] - l, k * ry) * np.exp(-1j * (n - l) * y.angle)
            else:
                small = bessel_j_range(n[0], n[-1], k * rx) * np.exp(1j * n * x.angle)
                big = hankel1_range(n[0] - l, n[-1] - l, k * ry, strict=False) * np.exp(-1j * (n - l) * y.angle)
            terms = np.where(small == 0.0, 0.0, big * small)
        if not np.all(np.isfinite(terms)):
            raise CapabilityError("addition theorem terms overflow; radii too disparate for double range")
        scale = np.abs(terms).max()
        edge = np.abs(np.concatenate([terms[:3], terms[-3:]]))
        tail = float(edge.max() / scale) if scale > 0 else 0.0
        if tail < tol:
            return complex(terms.sum())
        K += 10
