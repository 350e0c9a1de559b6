"""A circular cylinder at the origin, with or without the active cloak.

The cylinder sees the regular field ``sum_n C_n U_n^+`` where ``C_n = A_n``
without the cloak and ``C_n = A_n + E_n`` with it, and answers with the
outgoing field ``sum_n R_n C_n V_n^+``. The active sources are ideal and do
not respond to what the cylinder scatters.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .amplitudes import source_field_many
from .cylwave import (as_point, bessel_j_prime_range, bessel_j_range,
                      hankel1_prime_range, hankel1_range)
from .diagnostics import farfield_flux, nearfield_coefficients
from .errors import ConfigurationError, DomainError, SingularityError
from .geometry import inner_radius

MODAL_MARGIN = 20


class Boundary(enum.Enum):
    SOFT = "soft"   # Dirichlet: u = 0 on the surface
    HARD = "hard"   # Neumann: du/dr = 0 on the surface


@dataclass(frozen=True)
class Cylinder:
    radius: float
    boundary: Boundary = Boundary.HARD

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ConfigurationError(f"cylinder radius must be positive, got {self.radius}")
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    def modal_order(self, k):
        return int(math.ceil(k * self.radius)) + MODAL_MARGIN


def response_coefficients(cyl, k, ns):
    """``R_n`` for each order in ``ns``: ``-J_n/H_n`` (soft) or ``-J_n'/H_n'`` (hard) at ``k a_0``."""
    ns = np.asarray(ns, dtype=int)
    lo, hi = int(ns.min()), int(ns.max())
    x = k * cyl.radius
    if cyl.boundary is Boundary.SOFT:
        num, den = bessel_j_range(lo, hi, x), hankel1_range(lo, hi, x)
    else:
        num, den = bessel_j_prime_range(lo, hi, x), hankel1_prime_range(lo, hi, x)
    return -num[ns - lo] / den[ns - lo]


def response_coefficient(cyl, k, n):
    return complex(response_coefficients(cyl, k, [n])[0])


def _check_cloak(cyl, config, amps):
    if (config is None) != (amps is None):
        raise ConfigurationError("a cloak needs both a configuration and amplitudes")
    if config is not None and not cyl.radius < inner_radius(config):
        raise ConfigurationError(
            f"cylinder radius {cyl.radius} must be below the quiet-zone inner radius "
            f"{inner_radius(config):.6g}"
        )


def exciting_coefficients(cyl, k, f, config=None, amps=None):
    """Orders ``n`` and regular coefficients ``C_n`` of the field reaching the cylinder."""
    _check_cloak(cyl, config, amps)
    nb = cyl.modal_order(k)
    ns = np.arange(-nb, nb + 1)
    C = f.coefficients(ns)
    if config is not None:
        C = C + nearfield_coefficients(config, amps, ns)
    return ns, C


def scattered_coefficients(cyl, k, f, config=None, amps=None):
    """Outgoing coefficients ``R_n C_n`` about the origin."""
    ns, C = exciting_coefficients(cyl, k, f, config, amps)
    return ns, response_coefficients(cyl, k, ns) * C


def scattered_field_many(cyl, k, f, xs, ys, config=None, amps=None):
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    if np.any(np.hypot(xs, ys) <= cyl.radius):
        raise DomainError("scattered field requested inside the cylinder")
    _, coeffs = scattered_coefficients(cyl, k, f, config, amps)
    return kernels.outgoing_sum(xs, ys, 0.0, 0.0, k, coeffs).reshape(xs.shape)


def scattered_field(cyl, k, f, p, config=None, amps=None):
    """Field scattered by the cylinder at ``p`` (``|p| > a_0``)."""
    p = as_point(p)
    return complex(scattered_field_many(cyl, k, f, p.x, p.y, config, amps)[0])


def scattered_flux(cyl, k, f, config=None, amps=None):
    """Far-field flux ``4 sum |R_n C_n|^2`` of the scattered field."""
    _, S = scattered_coefficients(cyl, k, f, config, amps)
    return farfield_flux(S)


def total_field_many(k, f, xs, ys, cyl=None, config=None, amps=None):
    """``u_i + u_d + u_s`` with each term present only when its ingredients are."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    total = f.evaluate_many(k, xs, ys).reshape(xs.shape)
    if config is not None and amps is not None:
        total = total + source_field_many(config, amps, xs, ys)
    if cyl is not None:
        total = total + scattered_field_many(cyl, k, f, xs, ys, config, amps)
    return total


def total_field(k, f, p, cyl=None, config=None, amps=None):
    p = as_point(p)
    val = complex(total_field_many(k, f, p.x, p.y, cyl, config, amps)[0])
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise SingularityError("total field is singular at this point (source location)")
    return val
