"""Multipole amplitudes of the active sources.

For source ``m`` with disc radius ``a_m``, arc ``[phi1, phi2]`` and
``alpha = k a_m`` the amplitudes follow from the arc weights

    g_{l,p} = [J_p J_l' - J_p' J_l](alpha)
              * (exp(-i(l+p) phi2) - exp(-i(l+p) phi1)) / (l + p),

with ``g_{l,-l} = 0``. General incidence contracts them with the regular waves
at the source,

    b_{m,ln} = (alpha/4) sum_p (-1)^p g_{l,p} U_{n+p}^+(x_m),
    b_{m,l}  = sum_n b_{m,ln} A_n,

and a plane wave in direction ``psi`` collapses the ``n`` sum:

    b_{m,l} = u_psi(x_m) (alpha/4) sum_p i^p exp(i p psi) g_{l,p}.

The line integral over the arc that both formulas come from is available as
:func:`quadrature_oracle` for cross-checking.
"""

import json
import math
import threading
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .cylwave import as_point, bessel_j_prime_range, bessel_j_range
from .errors import ConfigurationError, SingularityError, TruncationError
from .incident import I_POWERS, PlaneWave

P_MARGIN = 25
P_STEP = 10
P_CAP = 400
P_TOL = 1e-14
INCIDENT_MARGIN = 25
LARGE_M_WARN_KA = 0.3


class AccuracyWarning(UserWarning):
    """An approximation is being used outside its comfortable range."""


# -- arc weights -----------------------------------------------------------------

class _SiteTables:
    """``J_p(alpha)`` and ``J_p'(alpha)`` for ``|p| <= P_CAP + 1`` at one site."""

    def __init__(self, site, k):
        self.site = site
        self.alpha = k * site.radius
        top = P_CAP + 1
        self.J = bessel_j_range(-top, top, self.alpha)
        self.Jp = bessel_j_prime_range(-top, top, self.alpha)
        self.offset = top

    def weights(self, l, P):
        """``g_{l,p}`` for ``p = -P..P``."""
        p = np.arange(-P, P + 1)
        i = p + self.offset
        il = l + self.offset
        W = self.J[i] * self.Jp[il] - self.Jp[i] * self.J[il]
        s = l + p
        phi1 = self.site.arc_start
        phi2 = self.site.arc_end
        safe = np.where(s == 0, 1, s)
        arc = (np.exp(-1j * s * phi2) - np.exp(-1j * s * phi1)) / safe
        g = W * arc
        g[s == 0] = 0.0
        return g


def _tail_ratio(g):
    scale = np.abs(g).max()
    if scale == 0.0:
        return 0.0
    edge = np.abs(np.concatenate([g[:3], g[-3:]]))
    return float(edge.max() / scale)


def _row_weights(tables, l, P=None, check=True):
    """Arc weights for order ``l`` with adaptive (``P=None``) or fixed truncation."""
    if P is not None:
        g = tables.weights(l, P)
        tail = _tail_ratio(g)
        if check and tail > P_TOL:
            raise TruncationError(
                f"p-sum truncated at P={P} for l={l}: tail ratio {tail:.2e} > {P_TOL:g}",
                estimate=tail,
            )
        return g, P
    P = max(abs(l), int(math.ceil(tables.alpha))) + P_MARGIN
    while True:
        g = tables.weights(l, P)
        tail = _tail_ratio(g)
        if tail < P_TOL:
            return g, P
        if P + P_STEP > P_CAP:
            raise TruncationError(f"p-sum for l={l} did not converge by P={P_CAP}", estimate=tail)
        P += P_STEP


def _weight_matrix(tables, N, P=None):
    """Weights for all ``l = -N..N`` on a common zero-padded ``p`` window.

    Returns ``(G, Pmax, P_used)`` with ``G`` of shape ``(2N+1, 2Pmax+1)``.
    """
    rows = [_row_weights(tables, l, P) for l in range(-N, N + 1)]
    Pmax = max(Pl for _, Pl in rows)
    G = np.zeros((2 * N + 1, 2 * Pmax + 1), dtype=complex)
    for i, (g, Pl) in enumerate(rows):
        G[i, Pmax - Pl : Pmax + Pl + 1] = g
    return G, Pmax, np.array([Pl for _, Pl in rows])


# -- amplitude container -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AmplitudeSet:
    """Source amplitudes ``b_{m,l}`` for ``m = 0..M-1`` and ``l = -N..N``.

    ``values[m, l + N]`` holds ``b_{m,l}``.
    """

    values: np.ndarray
    N: int
    config: object = None
    incident: dict = None
    P: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 2 or v.shape[1] != 2 * self.N + 1:
            raise ConfigurationError(f"amplitude matrix shape {v.shape} does not match N={self.N}")
        if self.config is not None and v.shape[0] != self.config.M:
            raise ConfigurationError(f"{v.shape[0]} rows for {self.config.M} sources")
        if not np.all(np.isfinite(v)):
            raise ConfigurationError("non-finite source amplitude")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def M(self):
        return self.values.shape[0]

    @property
    def orders(self):
        return np.arange(-self.N, self.N + 1)

    def get(self, m, l):
        if abs(l) > self.N:
            return 0j
        return complex(self.values[m, l + self.N])

    def column(self, l):
        return self.values[:, l + self.N]

    def truncated(self, N):
        """Keep only orders ``|l| <= N``."""
        if N > self.N:
            raise ConfigurationError(f"cannot extend amplitudes from N={self.N} to N={N}")
        return AmplitudeSet(self.values[:, self.N - N : self.N + N + 1], N, self.config, self.incident)

    def to_dict(self):
        flat = self.values.ravel()
        return {"N": self.N, "M": self.M,
                "values": [[float(z.real), float(z.imag)] for z in flat]}

    def to_json(self, path=None):
        text = json.dumps(self.to_dict())
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_dict(cls, data, config=None):
        N, M = int(data["N"]), int(data["M"])
        vals = np.array([complex(re, im) for re, im in data["values"]]).reshape(M, 2 * N + 1)
        return cls(vals, N, config)


# -- kernel coefficients ---------------------------------------------------------------

class KernelCache:
    """Incident-independent kernel matrices keyed by configuration and truncation.

    Reads are lock-free; insertion happens under a lock so concurrent callers
    never see a half-built entry.
    """

    def __init__(self):
        self._store = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._store)

    def get(self, key, build):
        hit = self._store.get(key)
        if hit is not None:
            return hit
        value = build()
        with self._lock:
            return self._store.setdefault(key, value)


def _check_site(config, m):
    if not 0 <= m < config.M:
        raise ConfigurationError(f"site index {m} out of range for M={config.M}")


def _regular_at_site(site, k, orders_lo, orders_hi):
    """``U_j^+(x_m)`` for ``j = orders_lo..orders_hi``."""
    j = np.arange(orders_lo, orders_hi + 1)
    pos = site.position
    return bessel_j_range(orders_lo, orders_hi, k * pos.radius) * np.exp(1j * j * pos.angle)


def kernel_matrix(config, m, N, n_lo, n_hi, P=None, cache=None):
    """``b_{m,ln}`` for ``l = -N..N`` (rows) and ``n = n_lo..n_hi`` (columns)."""
    _check_site(config, m)

    def build():
        site = config.sites[m]
        tables = _SiteTables(site, config.k)
        G, Pmax, _ = _weight_matrix(tables, N, P)
        p = np.arange(-Pmax, Pmax + 1)
        Gs = G * np.where(p % 2, -1.0, 1.0)
        # Umat[p, n] = U_{n+p}^+(x_m): a Hankel-structured slice of one order table
        u = _regular_at_site(site, config.k, n_lo - Pmax, n_hi + Pmax)
        idx = (p[:, None] + Pmax) + np.arange(n_hi - n_lo + 1)[None, :]
        return 0.25 * tables.alpha * (Gs @ u[idx])

    if cache is None:
        return build()
    return cache.get((config, m, N, n_lo, n_hi, P), build)


def kernel_coefficient(config, m, l, n, P=None, check=True):
    """Single incident-independent coefficient ``b_{m,ln}``.

    With an explicit ``P`` and ``check=False`` the p-sum is truncated as
    given even if its tail has not decayed.
    """
    _check_site(config, m)
    tables = _SiteTables(config.sites[m], config.k)
    g, Pl = _row_weights(tables, l, P, check)
    p = np.arange(-Pl, Pl + 1)
    u = _regular_at_site(config.sites[m], config.k, n - Pl, n + Pl)
    return complex(0.25 * tables.alpha * np.sum(np.where(p % 2, -1.0, 1.0) * g * u))


def incident_range(config, f, m):
    """Incident orders ``|n| <= bound`` contracted against the kernel at site ``m``."""
    site = config.sites[m]
    if isinstance(f, PlaneWave):
        return f.order_bound(config.k, site.position.radius + site.radius) + INCIDENT_MARGIN
    return f.order_bound(config.k, site.position.radius)


def amplitudes_general(config, f, N, P=None, cache=None):
    """Amplitudes for any incident field via ``b_{m,l} = sum_n b_{m,ln} A_n``."""
    if N < 0:
        raise ConfigurationError(f"truncation N must be non-negative, got {N}")
    rows = []
    for m in range(config.M):
        nb = incident_range(config, f, m)
        A = f.coefficients(np.arange(-nb, nb + 1))
        K = kernel_matrix(config, m, N, -nb, nb, P, cache)
        rows.append(K @ A)
    return AmplitudeSet(np.array(rows), N, config, f.describe())


def amplitudes_planewave(config, psi, N, P=None):
    """Closed-form amplitudes for the unit plane wave travelling in direction ``psi``."""
    if N < 0:
        raise ConfigurationError(f"truncation N must be non-negative, got {N}")
    f = PlaneWave(psi)
    rows, used = [], []
    for site in config.sites:
        tables = _SiteTables(site, config.k)
        G, Pmax, Pl = _weight_matrix(tables, N, P)
        p = np.arange(-Pmax, Pmax + 1)
        phase = I_POWERS[p % 4] * np.exp(1j * p * psi)
        u_site = f.evaluate(config.k, site.position)
        rows.append(u_site * 0.25 * tables.alpha * (G @ phase))
        used.append(Pl)
    return AmplitudeSet(np.array(rows), N, config, f.describe(), np.array(used))


def compute_amplitudes(config, f, N, P=None, cache=None):
    """Dispatch to the plane-wave closed form when possible."""
    if isinstance(f, PlaneWave):
        return amplitudes_planewave(config, f.psi, N, P)
    return amplitudes_general(config, f, N, P, cache)


# -- line-integral oracle ----------------------------------------------------------------

_GL10 = np.polynomial.legendre.leggauss(10)
_GL20 = np.polynomial.legendre.leggauss(20)


def quadrature_oracle(config, f, m, l, tol=1e-10, initial_panels=None, max_panels=20000):
    """``b_{m,l}`` from direct quadrature of the arc integral

        b_{m,l} = -(i/4) alpha int_{phi1}^{phi2} exp(-i l phi)
                  [u_i(y) J_l'(alpha) - J_l(alpha) k^-1 d_n u_i(y)] dphi,

    ``y = x_m + a_m e(phi)``, with ``d_n`` along ``e(phi)``. Panels are
    bisected until the 10- and 20-point Gauss-Legendre rules agree to
    ``tol`` in absolute terms (distributed over the arc by length).
    """
    _check_site(config, m)
    site = config.sites[m]
    k = config.k
    alpha = k * site.radius
    jl = float(bessel_j_range(l, l, alpha)[0])
    jlp = float(bessel_j_prime_range(l, l, alpha)[0])
    cx, cy = site.position.x, site.position.y
    a = site.radius

    def integrand(phi):
        ex, ey = np.cos(phi), np.sin(phi)
        xs, ys = cx + a * ex, cy + a * ey
        u = f.evaluate_many(k, xs, ys)
        gx, gy = f.gradient_many(k, xs, ys)
        dn = gx * ex + gy * ey
        return np.exp(-1j * l * phi) * (u * jlp - jl * dn / k)

    def rule(lo, hi, nodes):
        x, w = nodes
        mid = 0.5 * (lo + hi)[:, None]
        half = 0.5 * (hi - lo)[:, None]
        phi = mid + half * x[None, :]
        vals = integrand(phi.ravel()).reshape(phi.shape)
        return (vals * w[None, :]).sum(axis=1) * half[:, 0]

    span = site.arc_extent
    n0 = initial_panels or 8 * max(abs(l), int(math.ceil(alpha)), 4)
    edges = site.arc_start + span * np.arange(n0 + 1) / n0
    lo, hi = edges[:-1], edges[1:]
    total = 0j
    err = 0.0
    while lo.size:
        if lo.size + (total != 0) > max_panels:
            raise TruncationError("quadrature did not converge", estimate=err)
        fine = rule(lo, hi, _GL20)
        coarse = rule(lo, hi, _GL10)
        est = np.abs(fine - coarse)
        ok = est <= tol * (hi - lo) / span
        total += fine[ok].sum()
        err += est[ok].sum()
        mid = 0.5 * (lo[~ok] + hi[~ok])
        lo, hi = np.concatenate([lo[~ok], mid]), np.concatenate([mid, hi[~ok]])
        if lo.size and np.min(hi - lo) < 1e-12 * span:
            raise TruncationError("quadrature panels collapsed without converging", estimate=float(est.max()))
    return complex(-0.25j * alpha * total)


# -- source field ---------------------------------------------------------------------------

def source_field_many(config, amps, xs, ys):
    """``u_d = sum_m sum_l b_{m,l} V_l^+(x - x_m)`` at many points.

    Points on a source (or so close that a Hankel function overflows) come
    back as NaN.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    total = np.zeros(xs.shape, dtype=complex)
    for m, site in enumerate(config.sites):
        total += kernels.outgoing_sum(xs, ys, site.position.x, site.position.y,
                                      config.k, amps.values[m]).reshape(xs.shape)
    total[~np.isfinite(total)] = np.nan
    return total


def source_field(config, amps, p):
    """Source field at a single point."""
    p = as_point(p)
    for m, site in enumerate(config.sites):
        if p.x == site.position.x and p.y == site.position.y:
            raise SingularityError(f"source field evaluated at source {m}")
    val = complex(source_field_many(config, amps, p.x, p.y)[0])
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise SingularityError("source field overflows this close to a source")
    return val


# -- many-source limit ------------------------------------------------------------------------

def large_m_amplitudes(config, f):
    """Leading-order amplitudes for small ``k a_m``: monopoles and dipoles only.

        b_{m,0}   = -(i/2) k a_m  sum_n A_n U_n^+'(x_m)
        b_{m,+-1} = +-(i/4) k a_m exp(-+ i theta_m) sum_n A_n U_n^+(x_m)

    All ``|l| >= 2`` vanish, so the result has ``N = 1``.
    """
    k = config.k
    rows = []
    for m, site in enumerate(config.sites):
        alpha = k * site.radius
        if alpha > LARGE_M_WARN_KA:
            warnings.warn(f"k a = {alpha:.3g} at source {m}; leading-order amplitudes "
                          "are inaccurate above ~0.3", AccuracyWarning, stacklevel=2)
        r, theta = site.position.radius, site.position.angle
        nb = f.order_bound(k, r)
        n = np.arange(-nb, nb + 1)
        A = f.coefficients(n)
        phase = np.exp(1j * n * theta)
        u = np.sum(A * bessel_j_range(-nb, nb, k * r) * phase)
        du = np.sum(A * bessel_j_prime_range(-nb, nb, k * r) * phase)
        rows.append([-0.25j * alpha * np.exp(1j * theta) * u,
                     -0.5j * alpha * du,
                     0.25j * alpha * np.exp(-1j * theta) * u])
    return AmplitudeSet(np.array(rows), 1, config, f.describe())


def monopole_dipole_field(config, f, p):
    """Discrete layer of monopoles and dipoles driven by the incident field,

        u_d(x) = (i/2) sum_m a_m [u_i(x_m) d_n V_0(x - x_m) - V_0(x - x_m) d_n u_i(x_m)],

    with ``d_n`` the derivative along the outward radial direction at ``x_m``
    (for ``V_0`` taken with respect to the source position).
    """
    p = as_point(p)
    k = config.k
    total = 0j
    for site in config.sites:
        xm = site.position
        nx, ny = xm.x / xm.radius, xm.y / xm.radius
        dx, dy = p.x - xm.x, p.y - xm.y
        rho = math.hypot(dx, dy)
        if rho == 0.0:
            raise SingularityError("monopole/dipole field evaluated at a source")
        J, Y = kernels.jy_table(1, np.array([k * rho]))
        h0 = complex(J[0, 0], Y[0, 0])
        h1 = complex(J[1, 0], Y[1, 0])
        ui = f.evaluate(k, xm)
        dn_ui = f.normal_derivative(k, xm, (nx, ny))
        dn_v0 = k * h1 * (dx * nx + dy * ny) / rho
        total += 0.5j * site.radius * (ui * dn_v0 - h0 * dn_ui)
    return total
