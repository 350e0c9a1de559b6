"""How well a set of amplitudes cloaks.

Re-expanding the source field about the origin gives

    F_n = sum_m sum_l b_{m,l} U_{n-l}^-(x_m)   (valid for |x| > max |x_m| + a_m)
    E_n = sum_m sum_l b_{m,l} V_{n-l}^-(x_m)   (valid for |x| < min |x_m| - a_m)

so ``u_d = sum_n F_n V_n^+`` far out and ``u_d = sum_n E_n U_n^+`` near the
origin. Perfect cloaking means ``F_n = 0`` and ``E_n = -A_n``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .amplitudes import KernelCache, kernel_matrix
from .cylwave import bessel_j_range, hankel1_range
from .errors import CapabilityError, ConfigurationError
from .geometry import inner_radius
from .incident import I_POWERS, SingleMode

DEFAULT_ORDERS = 10


def _orders(ns):
    if ns is None:
        return np.arange(-DEFAULT_ORDERS, DEFAULT_ORDERS + 1)
    if isinstance(ns, (int, np.integer)):
        return np.arange(-ns, ns + 1)
    return np.asarray(ns, dtype=int)


def _translation_rows(config, amps, ns, outgoing):
    """``sum_m sum_l b_{m,l} W_{n-l}^-(x_m)`` with ``W`` regular or outgoing."""
    ns = _orders(ns)
    ls = amps.orders
    total = np.zeros(ns.size, dtype=complex)
    for m, site in enumerate(config.sites):
        r, th = site.position.radius, site.position.angle
        lo, hi = int(ns.min() - ls.max()), int(ns.max() - ls.min())
        if outgoing:
            radial = hankel1_range(lo, hi, config.k * r, strict=False)
        else:
            radial = bessel_j_range(lo, hi, config.k * r)
        j = ns[:, None] - ls[None, :]
        W = radial[j - lo] * np.exp(-1j * j * th)
        with np.errstate(invalid="ignore", over="ignore"):
            total += W @ amps.values[m]
    if not np.all(np.isfinite(total)):
        raise CapabilityError("near-field translation overflows; reduce N or the order range")
    return total


def farfield_coefficients(config, amps, ns=None):
    """``F_n`` for the requested orders (default ``|n| <= 10``)."""
    return _translation_rows(config, amps, ns, outgoing=False)


def nearfield_coefficients(config, amps, ns=None):
    """``E_n`` for the requested orders (default ``|n| <= 10``)."""
    return _translation_rows(config, amps, ns, outgoing=True)


def residuals(config, f, amps, ns=None):
    """Near-field cancellation ``|A_n + E_n|``, raw and weighted.

    The weighted residual multiplies by ``|J_n(k r_c / 2)|`` with ``r_c`` the
    inner radius, i.e. the size of that mode's contribution halfway into the
    quiet zone. Returns ``(raw, weighted)``.
    """
    ns = _orders(ns)
    E = nearfield_coefficients(config, amps, ns)
    raw = np.abs(f.coefficients(ns) + E)
    lo, hi = int(ns.min()), int(ns.max())
    J = bessel_j_range(lo, hi, 0.5 * config.k * inner_radius(config))
    return raw, raw * np.abs(J[ns - lo])


def farfield_pattern_coefficients(F, ns=None):
    """``f_n = sqrt(2/pi) i^{-(n + 1/2)} F_n``; ``ns`` defaults to ``-N..N``."""
    F = np.asarray(F)
    if ns is None:
        N = (F.size - 1) // 2
        ns = np.arange(-N, N + 1)
    ns = np.asarray(ns)
    return math.sqrt(2.0 / math.pi) * np.exp(-0.25j * math.pi) * I_POWERS[(-ns) % 4] * F


def farfield_amplitude(F, theta, ns=None):
    """Far-field pattern ``f(theta) = sum_n f_n exp(i n theta)``, so that

    ``u_d ~ f(theta) exp(i k r) / sqrt(k r)`` as ``r -> infinity``.
    ``theta`` may be an array.
    """
    F = np.asarray(F)
    if ns is None:
        N = (F.size - 1) // 2
        ns = np.arange(-N, N + 1)
    ns = np.asarray(ns)
    fn = farfield_pattern_coefficients(F, ns)
    theta = np.asarray(theta, dtype=float)
    out = np.exp(1j * np.multiply.outer(theta, ns)) @ fn
    return complex(out) if out.ndim == 0 else out


def farfield_flux(F):
    """Scattering cross-section ``4 sum |F_n|^2`` of the source field."""
    F = np.asarray(F)
    return 4.0 * float(np.sum(np.abs(F) ** 2))


def scattering_matrix(config, N, q_max=None, p_max=None, P=None, cache=None):
    """Zero-scattering matrix ``S_pq`` for modes ``U_q^+`` incident.

    ``S_pq = sum_m sum_l b_{m,lq} U_{p-l}^-(x_m)`` is the ``p``-th far-field
    coefficient produced when the incident field is ``U_q^+``. Rows are
    ``p = -p_max..p_max``, columns ``q = -q_max..q_max``.
    """
    q_max = N if q_max is None else q_max
    p_max = N if p_max is None else p_max
    cache = cache if cache is not None else KernelCache()
    ls = np.arange(-N, N + 1)
    ps = np.arange(-p_max, p_max + 1)
    S = np.zeros((ps.size, 2 * q_max + 1), dtype=complex)
    for m, site in enumerate(config.sites):
        K = kernel_matrix(config, m, N, -q_max, q_max, P, cache)   # (l, q)
        r, th = site.position.radius, site.position.angle
        lo, hi = int(ps.min() - N), int(ps.max() + N)
        j = ps[:, None] - ls[None, :]
        U = bessel_j_range(lo, hi, config.k * r)[j - lo] * np.exp(-1j * j * th)
        S += U @ K
    return S


def scattering_matrix_entry(config, N, p, q, P=None):
    return complex(scattering_matrix(config, N, q_max=abs(q), p_max=abs(p), P=P)[p + abs(p), q + abs(q)])


def single_mode_check(config, N, q, ns=None):
    """Far-field coefficients for the single incident mode ``U_q^+``."""
    from .amplitudes import amplitudes_general
    return farfield_coefficients(config, amplitudes_general(config, SingleMode(q), N), ns)


@dataclass
class DiagnosticsReport:
    orders: np.ndarray
    F: np.ndarray
    E: np.ndarray
    A: np.ndarray
    residual: np.ndarray
    weighted_residual: np.ndarray
    flux: float
    notes: list = field(default_factory=list)

    @property
    def max_far(self):
        return float(np.abs(self.F).max())

    @property
    def max_near(self):
        return float(self.residual.max())

    @property
    def max_near_weighted(self):
        return float(self.weighted_residual.max())

    def to_dict(self):
        return {
            "orders": self.orders.tolist(),
            "F": [[z.real, z.imag] for z in self.F.tolist()],
            "E": [[z.real, z.imag] for z in self.E.tolist()],
            "residual": self.residual.tolist(),
            "weighted_residual": self.weighted_residual.tolist(),
            "max_far": self.max_far,
            "max_near": self.max_near,
            "max_near_weighted": self.max_near_weighted,
            "flux": self.flux,
            "notes": list(self.notes),
        }

    def summary(self):
        lines = [f"{'n':>4} {'|F_n|':>12} {'|A_n+E_n|':>12} {'weighted':>12}"]
        for n, F, r, w in zip(self.orders, self.F, self.residual, self.weighted_residual):
            lines.append(f"{n:>4d} {abs(F):12.3e} {r:12.3e} {w:12.3e}")
        lines.append(f"max |F_n| = {self.max_far:.3e}   max |A_n+E_n| = {self.max_near:.3e}"
                     f"   flux = {self.flux:.3e}")
        lines.extend(self.notes)
        return "\n".join(lines)


def diagnose(config, f, amps, ns=None):
    """Far-field coefficients, near-field residuals and flux in one report."""
    if amps.M != config.M:
        raise ConfigurationError("amplitudes were computed for a different configuration")
    ns = _orders(ns)
    F = farfield_coefficients(config, amps, ns)
    E = nearfield_coefficients(config, amps, ns)
    A = f.coefficients(ns)
    raw, weighted = residuals(config, f, amps, ns)
    notes = []
    if amps.N < int(np.abs(ns).max()):
        notes.append(f"note: orders beyond N={amps.N} are not cancelled by construction")
    return DiagnosticsReport(ns, F, E, A, raw, weighted, farfield_flux(F), notes)
