"""Active source layouts and the regions they define.

Each source ``m`` sits at ``x_m`` and owns a circular arc of radius ``a_m``
about ``x_m``, traversed counter-clockwise from ``arc_start`` through
``arc_extent`` radians. The arcs bound the quiet region ``C``; the union of
``C`` with the closed source discs is the region ``R`` outside which the
source field vanishes.
"""

import enum
import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cylwave import TWO_PI, Point2, as_point
from .errors import ConfigurationError

JUNCTION_TOL = 1e-9


@dataclass(frozen=True)
class SourceSite:
    position: Point2
    radius: float
    arc_start: float
    arc_extent: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ConfigurationError(f"source radius must be positive, got {self.radius}")
        if not 0.0 < self.arc_extent < TWO_PI:
            raise ConfigurationError(f"arc extent must lie in (0, 2 pi), got {self.arc_extent}")

    @classmethod
    def from_arc(cls, position, radius, phi1, phi2):
        """Build from arc end angles; the arc runs counter-clockwise from ``phi1`` to ``phi2``."""
        start = phi1 % TWO_PI
        extent = (phi2 - phi1) % TWO_PI
        return cls(as_point(position), float(radius), start, extent)

    @property
    def arc_end(self):
        """End angle, ``arc_start + arc_extent`` (may exceed 2 pi)."""
        return self.arc_start + self.arc_extent

    def arc_point(self, phi):
        return self.position + Point2.polar(self.radius, phi)


@dataclass(frozen=True)
class SourceConfig:
    """An ordered set of at least three source sites plus the wavenumber."""

    sites: tuple
    k: float

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(self.sites))
        if not (math.isfinite(self.k) and self.k > 0.0):
            raise ConfigurationError(f"wavenumber must be positive, got {self.k}")
        if len(self.sites) < 3:
            raise ConfigurationError(f"at least 3 sources are needed, got {len(self.sites)}")
        for m, s in enumerate(self.sites):
            if not s.position.radius > s.radius:
                raise ConfigurationError(
                    f"source {m}: disc of radius {s.radius} contains the origin "
                    f"(|x_m| = {s.position.radius})"
                )

    @property
    def M(self):
        return len(self.sites)

    def with_k(self, k):
        return SourceConfig(self.sites, k)

    @property
    def positions(self):
        """Array of shape (M, 2)."""
        return np.array([[s.position.x, s.position.y] for s in self.sites])

    @property
    def radii(self):
        return np.array([s.radius for s in self.sites])

    def to_dict(self):
        return {
            "k": self.k,
            "sources": [
                {"x": s.position.x, "y": s.position.y, "a": s.radius,
                 "phi1": s.arc_start, "phi2": s.arc_end}
                for s in self.sites
            ],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            sites = [SourceSite.from_arc((d["x"], d["y"]), d["a"], d["phi1"], d["phi2"])
                     for d in data["sources"]]
            return cls(tuple(sites), float(data["k"]))
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f"malformed source configuration: {exc}") from exc

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def symmetric_config(M, b, k):
    """``M`` equal sources on a circle of radius ``b`` with tangent discs.

    Source ``m`` sits at angle ``2 pi m / M`` with ``a = b sin(pi/M)``; its arc
    is centred on the direction back to the origin with half-width
    ``pi/2 - pi/M``.
    """
    if M < 3:
        raise ConfigurationError(f"the quiet region needs at least 3 sources, got M={M}")
    if not b > 0.0:
        raise ConfigurationError(f"source circle radius must be positive, got {b}")
    a = b * math.sin(math.pi / M)
    # general arc half-width |asin((b/a) sin(pi/M)) - pi/M| with the ratio clipped at 1
    half = abs(math.asin(min(1.0, b / a * math.sin(math.pi / M))) - math.pi / M)
    sites = []
    for m in range(M):
        theta = m * TWO_PI / M
        sites.append(SourceSite.from_arc(Point2.polar(b, theta), a,
                                         math.pi + theta - half, math.pi + theta + half))
    return SourceConfig(tuple(sites), k)


def inner_radius(config):
    """Radius of the largest origin-centred disc clear of all source discs."""
    return min(s.position.radius - s.radius for s in config.sites)


def outer_radius(config):
    """Radius beyond which every source disc lies inside."""
    return max(s.position.radius + s.radius for s in config.sites)


class Region(enum.Enum):
    IN_C = "C"
    IN_SOURCE_DISC = "disc"
    OUTSIDE_R = "outside"


class RegionLabel(NamedTuple):
    region: Region
    site: int = -1  # 0-based source index for IN_SOURCE_DISC


def boundary_polygon(config):
    """Corner points where consecutive arcs meet, counter-clockwise about the origin.

    Raises :class:`ConfigurationError` when neighbouring arcs do not share an
    end point, since the quiet region is then not a closed union of arcs.
    """
    order = sorted(range(config.M), key=lambda m: config.sites[m].position.angle)
    corners = []
    for i, m in enumerate(order):
        site = config.sites[m]
        nxt = config.sites[order[(i + 1) % len(order)]]
        # arc of m ends (counter-clockwise about x_m) where the arc of the next site begins
        p = site.arc_point(site.arc_start)
        q = nxt.arc_point(nxt.arc_end)
        if math.hypot(p.x - q.x, p.y - q.y) > JUNCTION_TOL * max(1.0, site.position.radius):
            raise ConfigurationError(
                "arcs of neighbouring sources do not meet; the quiet region is not "
                "supported for this layout"
            )
        corners.append(p)
    return corners


def _inside_polygon(px, py, corners):
    inside = False
    n = len(corners)
    for i in range(n):
        x1, y1 = corners[i]
        x2, y2 = corners[(i + 1) % n]
        if (y1 > py) != (y2 > py):
            xc = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xc:
                inside = not inside
    return inside


def classify(config, p):
    """Label ``p`` as inside a source disc, inside ``C`` or outside ``R``."""
    p = as_point(p)
    for m, s in enumerate(config.sites):
        if math.hypot(p.x - s.position.x, p.y - s.position.y) <= s.radius:
            return RegionLabel(Region.IN_SOURCE_DISC, m)
    if _inside_polygon(p.x, p.y, boundary_polygon(config)):
        return RegionLabel(Region.IN_C)
    return RegionLabel(Region.OUTSIDE_R)
