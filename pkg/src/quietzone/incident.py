"""Incident fields as regular-wave expansions ``u_i = sum_n A_n U_n^+(x)``.

Three kinds are supported: a unit plane wave travelling in direction ``psi``
(``A_n = i^n exp(-i n psi)``), a single regular mode (``A_n = delta_{n n0}``),
and an arbitrary finite coefficient table.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .cylwave import as_point
from .errors import ConfigurationError

TAIL_ORDERS = 30
I_POWERS = np.array([1, 1j, -1, -1j])


def truncation_order(k, r_max):
    """Number of regular orders needed to represent an entire field out to ``r_max``."""
    return int(math.ceil(k * r_max)) + TAIL_ORDERS


def _as_xy(xs, ys):
    return (np.atleast_1d(np.asarray(xs, dtype=float)),
            np.atleast_1d(np.asarray(ys, dtype=float)))


class IncidentField:
    """Base class; subclasses provide ``coefficients`` and may override evaluation."""

    def coefficient(self, n):
        return complex(self.coefficients(np.array([n]))[0])

    def coefficients(self, ns):
        raise NotImplementedError

    def order_bound(self, k, r_max):
        """Orders ``|n| <= bound`` carry the field to ``r_max`` at wavenumber ``k``."""
        raise NotImplementedError

    def _table(self, k, r_max):
        nb = self.order_bound(k, r_max)
        return self.coefficients(np.arange(-nb, nb + 1))

    def evaluate_many(self, k, xs, ys):
        xs, ys = _as_xy(xs, ys)
        r_max = float(np.hypot(xs, ys).max()) if xs.size else 0.0
        return kernels.regular_sum(xs, ys, 0.0, 0.0, k, self._table(k, r_max))

    def gradient_many(self, k, xs, ys):
        """``(du/dx, du/dy)`` from ``(d/dx +/- i d/dy) U_n^+ = -/+ k U_{n +/- 1}^+``."""
        xs, ys = _as_xy(xs, ys)
        r_max = float(np.hypot(xs, ys).max()) if xs.size else 0.0
        A = self._table(k, r_max)
        up = np.zeros(A.size + 2, dtype=complex)    # coefficient of U_m from A_{m-1}
        down = np.zeros(A.size + 2, dtype=complex)  # coefficient of U_m from A_{m+1}
        up[2:] = A
        down[:-2] = A
        plus = kernels.regular_sum(xs, ys, 0.0, 0.0, k, -k * up)      # (d/dx + i d/dy) u
        minus = kernels.regular_sum(xs, ys, 0.0, 0.0, k, k * down)    # (d/dx - i d/dy) u
        return 0.5 * (plus + minus), (plus - minus) / 2j

    def evaluate(self, k, p):
        p = as_point(p)
        return complex(self.evaluate_many(k, p.x, p.y)[0])

    def normal_derivative(self, k, p, normal):
        p = as_point(p)
        nx, ny = normal
        gx, gy = self.gradient_many(k, p.x, p.y)
        return complex(gx[0] * nx + gy[0] * ny)

    def describe(self):
        raise NotImplementedError


@dataclass(frozen=True)
class PlaneWave(IncidentField):
    """Unit-amplitude plane wave ``exp(i k e(psi) . x)``; ``psi`` in radians."""

    psi: float

    @classmethod
    def from_degrees(cls, deg):
        return cls(math.radians(deg))

    @property
    def direction(self):
        return math.cos(self.psi), math.sin(self.psi)

    def coefficients(self, ns):
        ns = np.asarray(ns)
        return I_POWERS[ns % 4] * np.exp(-1j * ns * self.psi)

    def order_bound(self, k, r_max):
        return truncation_order(k, r_max)

    def evaluate_many(self, k, xs, ys):
        xs, ys = _as_xy(xs, ys)
        ex, ey = self.direction
        return np.exp(1j * k * (ex * xs + ey * ys))

    def gradient_many(self, k, xs, ys):
        u = self.evaluate_many(k, xs, ys)
        ex, ey = self.direction
        return 1j * k * ex * u, 1j * k * ey * u

    def describe(self):
        return {"kind": "plane_wave", "psi": self.psi}


@dataclass(frozen=True)
class SingleMode(IncidentField):
    """The single regular wave ``U_{n0}^+``."""

    n0: int

    def coefficients(self, ns):
        return (np.asarray(ns) == self.n0).astype(complex)

    def order_bound(self, k, r_max):
        return abs(self.n0)

    def describe(self):
        return {"kind": "single_mode", "n0": self.n0}


@dataclass(frozen=True)
class Coefficients(IncidentField):
    """Finite table ``{n: A_n}``; orders outside the table are exactly zero."""

    table: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(n): complex(v) for n, v in self.table.items()}
        object.__setattr__(self, "table", clean)

    def __hash__(self):
        return hash(tuple(sorted(self.table.items(), key=lambda kv: kv[0])))

    @property
    def truncation(self):
        return max((abs(n) for n in self.table), default=0)

    def coefficients(self, ns):
        return np.array([self.table.get(int(n), 0j) for n in np.asarray(ns).ravel()], dtype=complex)

    def order_bound(self, k, r_max):
        return self.truncation

    @classmethod
    def from_field(cls, f, n_max):
        """Tabulate another field's coefficients for ``|n| <= n_max``."""
        ns = np.arange(-n_max, n_max + 1)
        return cls(dict(zip(ns.tolist(), f.coefficients(ns))))

    def combine(self, alpha, other, beta):
        """``alpha * self + beta * other`` as a new table."""
        keys = set(self.table) | set(other.table)
        return Coefficients({n: alpha * self.table.get(n, 0j) + beta * other.table.get(n, 0j)
                             for n in keys})

    @classmethod
    def from_file(cls, path):
        """Read a JSON list of ``[n, re, im]`` triples."""
        with open(path) as fh:
            rows = json.load(fh)
        try:
            return cls({int(n): complex(re, im) for n, re, im in rows})
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"{path}: expected a list of [n, re, im] entries") from exc

    def to_file(self, path):
        rows = [[n, v.real, v.imag] for n, v in sorted(self.table.items())]
        with open(path, "w") as fh:
            json.dump(rows, fh)

    def describe(self):
        return {"kind": "coefficients", "N_inc": self.truncation}


def coefficient(f, n):
    return f.coefficient(n)


def evaluate(f, k, p):
    return f.evaluate(k, p)


def normal_derivative(f, k, p, normal):
    return f.normal_derivative(k, p, normal)
