"""Sample a field on a rectangular grid and write CSV or PGM images.

Cells are flagged rather than rejected: ``S`` for cells on (or numerically
on) a source point, ``X`` for cells excluded by the caller (for instance the
interior of a scatterer), ``C`` for finite values above the clip level.
Unflagged cells carry an empty flag.
"""

import csv
import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import max_workers
from .cylwave import Point2
from .errors import ConfigurationError
from .geometry import outer_radius

SINGULAR_TOL = 1e-9
MIN_CELLS_PER_WORKER = 4096
PGM_MAX = 65535


class FieldKind(enum.Enum):
    INCIDENT = "incident"
    SOURCE = "source"
    SCATTERED = "scattered"
    TOTAL = "total"
    OTHER = "other"


@dataclass(frozen=True)
class GridSpec:
    """Cell centres ``origin + (i dx, j dy)`` for ``i < nx``, ``j < ny``."""

    origin: Point2
    dx: float
    dy: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ConfigurationError(f"empty grid {self.nx}x{self.ny}")
        if not (self.dx > 0 and self.dy > 0):
            raise ConfigurationError("grid spacing must be positive")

    @classmethod
    def square(cls, half_width, n):
        """``n x n`` cells spanning ``[-half_width, half_width]`` in both directions."""
        if n < 1:
            raise ConfigurationError(f"empty grid {n}x{n}")
        step = 2.0 * half_width / (n - 1) if n > 1 else 1.0
        return cls(Point2(-half_width, -half_width), step, step, n, n)

    @classmethod
    def for_config(cls, config, n=401, scale=2.5):
        """Default window ``[-2.5 R, 2.5 R]^2`` with ``R`` the outer radius."""
        return cls.square(scale * outer_radius(config), n)

    def coordinates(self):
        """Flattened ``(xs, ys)`` in row-major order (``y`` rows, ``x`` fastest)."""
        x = self.origin.x + self.dx * np.arange(self.nx)
        y = self.origin.y + self.dy * np.arange(self.ny)
        X, Y = np.meshgrid(x, y)
        return X.ravel(), Y.ravel()


@dataclass
class FieldGrid:
    spec: GridSpec
    samples: np.ndarray          # complex, shape (ny, nx); NaN where singular or excluded
    flags: np.ndarray            # str, shape (ny, nx)
    clip: float = None
    kind: FieldKind = FieldKind.OTHER
    meta: dict = field(default_factory=dict)

    @property
    def nx(self):
        return self.spec.nx

    @property
    def ny(self):
        return self.spec.ny

    def value_at(self, i, j):
        return complex(self.samples[j, i])


def _run_chunks(evaluator, xs, ys, workers):
    if workers <= 1 or xs.size < 2 * MIN_CELLS_PER_WORKER:
        return np.asarray(evaluator(xs, ys), dtype=complex).ravel()
    nchunks = min(workers, xs.size // MIN_CELLS_PER_WORKER)
    bounds = np.linspace(0, xs.size, nchunks + 1).astype(int)
    out = np.empty(xs.size, dtype=complex)

    def job(i):
        lo, hi = bounds[i], bounds[i + 1]
        return lo, hi, np.asarray(evaluator(xs[lo:hi], ys[lo:hi]), dtype=complex).ravel()

    with ThreadPoolExecutor(max_workers=nchunks) as pool:
        for lo, hi, vals in pool.map(job, range(nchunks)):
            out[lo:hi] = vals
    return out


def evaluate_grid(spec, evaluator, clip=None, singular_points=(), excluded=None,
                  kind=FieldKind.OTHER, workers=None):
    """Evaluate ``evaluator(xs, ys) -> complex array`` at every cell centre.

    ``singular_points`` lists points (source locations) whose neighbouring
    cells within ``1e-9`` are flagged ``S`` without being evaluated.
    ``excluded(xs, ys) -> bool array`` marks cells to skip with flag ``X``.
    """
    xs, ys = spec.coordinates()
    skip_s = np.zeros(xs.size, dtype=bool)
    for p in singular_points:
        px, py = p
        skip_s |= np.hypot(xs - px, ys - py) <= SINGULAR_TOL
    skip_x = np.asarray(excluded(xs, ys), dtype=bool) & ~skip_s if excluded else np.zeros_like(skip_s)
    live = ~(skip_s | skip_x)
    vals = np.full(xs.size, np.nan + 0j)
    if live.any():
        workers = max_workers() if workers is None else workers
        vals[live] = _run_chunks(evaluator, xs[live], ys[live], workers)
    bad = live & ~np.isfinite(vals)
    vals[bad] = np.nan
    flags = np.full(xs.size, "", dtype="<U1")
    flags[skip_s | bad] = "S"
    flags[skip_x] = "X"
    if clip is not None:
        flags[live & ~bad & (np.abs(vals) > clip)] = "C"
    shape = (spec.ny, spec.nx)
    return FieldGrid(spec, vals.reshape(shape), flags.reshape(shape), clip, kind)


def export_csv(grid, path):
    """One row per cell, row-major, 17 significant digits."""
    xs, ys = grid.spec.coordinates()
    s = grid.samples.ravel()
    fl = grid.flags.ravel()
    with open(path, "w", newline="") as fh:
        fh.write("x,y,re,im,abs,flag\n")
        for x, y, z, f in zip(xs, ys, s, fl):
            fh.write(f"{x:.17g},{y:.17g},{z.real:.17g},{z.imag:.17g},{abs(z):.17g},{f}\n")


def read_csv(path):
    """Rows of ``(x, y, value, flag)`` from :func:`export_csv` output."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["x", "y", "re", "im", "abs", "flag"]:
            raise ConfigurationError(f"{path}: unexpected header {header}")
        for x, y, re, im, _, flag in reader:
            rows.append((float(x), float(y), complex(float(re), float(im)), flag))
    return rows


def to_pixels(grid, mode="abs", clip=None):
    """16-bit grey levels; rows are flipped so that ``y`` increases upwards."""
    clip = grid.clip if clip is None else clip
    if clip is None or not clip > 0:
        raise ConfigurationError("PGM export needs a positive clip level")
    z = grid.samples
    if mode == "abs":
        t = np.abs(z) / clip
    elif mode == "re":
        t = (z.real + clip) / (2.0 * clip)
    else:
        raise ConfigurationError(f"unknown PGM mode {mode!r}; use 'abs' or 're'")
    t = np.where(np.isfinite(t), t, 1.0)       # singular and excluded cells render saturated
    pix = np.rint(np.clip(t, 0.0, 1.0) * PGM_MAX).astype(">u2")
    return pix[::-1]


def export_pgm(grid, path, mode="abs", clip=None):
    pix = to_pixels(grid, mode, clip)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{grid.nx} {grid.ny}\n{PGM_MAX}\n".encode("ascii"))
        fh.write(pix.tobytes())


def read_pgm(path):
    """Inverse of :func:`export_pgm`; returns a ``uint16`` array as written."""
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ConfigurationError(f"{path}: not a binary PGM")
    nx, ny = (int(v) for v in parts[1].split())
    if int(parts[2]) != PGM_MAX:
        raise ConfigurationError(f"{path}: expected 16-bit PGM")
    return np.frombuffer(parts[3], dtype=">u2").reshape(ny, nx)
