import json
import math

import numpy as np
import pytest

from quietzone.cylwave import Point2
from quietzone.errors import ConfigurationError
from quietzone.geometry import (Region, SourceConfig, SourceSite, boundary_polygon, classify,
                                inner_radius, outer_radius, symmetric_config)


def test_symmetric_m4():
    cfg = symmetric_config(4, 1.0, 1.0)
    s = cfg.sites[0]
    assert s.radius == pytest.approx(math.sqrt(2) / 2)
    assert s.arc_start == pytest.approx(3 * math.pi / 4)
    assert s.arc_end == pytest.approx(5 * math.pi / 4)
    assert s.arc_extent == pytest.approx(math.pi / 2)


def test_symmetric_m3():
    cfg = symmetric_config(3, 1.0, 1.0)
    assert cfg.sites[0].radius == pytest.approx(math.sqrt(3) / 2)
    assert cfg.sites[1].position.angle == pytest.approx(2 * math.pi / 3)


@pytest.mark.parametrize("M", [3, 4, 5, 8, 17])
def test_adjacent_discs_tangent(M):
    cfg = symmetric_config(M, 1.0, 1.0)
    P = cfg.positions
    a = cfg.sites[0].radius
    for m in range(M):
        d = np.linalg.norm(P[(m + 1) % M] - P[m])
        assert d == pytest.approx(2 * a, abs=1e-12)


@pytest.mark.parametrize("M", [3, 4, 6, 8, 64])
def test_arc_junctions_meet(M):
    cfg = symmetric_config(M, 2.5, 1.0)
    for m in range(M):
        s, t = cfg.sites[m], cfg.sites[(m + 1) % M]
        p, q = s.arc_point(s.arc_start), t.arc_point(t.arc_end)
        assert math.hypot(p.x - q.x, p.y - q.y) < 1e-12
    assert len(boundary_polygon(cfg)) == M


def test_too_few_sources():
    with pytest.raises(ConfigurationError):
        symmetric_config(2, 1.0, 1.0)
    s = symmetric_config(3, 1.0, 1.0).sites
    with pytest.raises(ConfigurationError):
        SourceConfig(s[:2], 1.0)


def test_invalid_values():
    with pytest.raises(ConfigurationError):
        symmetric_config(4, -1.0, 1.0)
    with pytest.raises(ConfigurationError):
        symmetric_config(4, 1.0, 0.0)
    with pytest.raises(ConfigurationError):
        SourceSite(Point2(1, 0), 0.0, 0.0, 1.0)
    with pytest.raises(ConfigurationError):
        SourceSite(Point2(1, 0), 0.5, 0.0, 2 * math.pi)


def test_disc_must_exclude_origin():
    sites = [SourceSite.from_arc(Point2.polar(1.0, t), 1.2, 0.0, 1.0) for t in (0, 2, 4)]
    with pytest.raises(ConfigurationError):
        SourceConfig(tuple(sites), 1.0)


def test_arc_wrap_normalised():
    s = SourceSite.from_arc((2, 0), 0.5, 5.8, 0.5)
    assert s.arc_start == pytest.approx(5.8)
    assert s.arc_extent == pytest.approx(0.5 + 2 * math.pi - 5.8)
    s2 = SourceSite.from_arc((2, 0), 0.5, -0.3, 0.3)
    assert s2.arc_start == pytest.approx(2 * math.pi - 0.3)
    assert s2.arc_extent == pytest.approx(0.6)


def test_radii():
    assert inner_radius(symmetric_config(4, 1.0, 1.0)) == pytest.approx(1 - math.sqrt(2) / 2)
    assert inner_radius(symmetric_config(3, 1.0, 1.0)) == pytest.approx(1 - math.sqrt(3) / 2)
    assert outer_radius(symmetric_config(4, 1.0, 1.0)) == pytest.approx(1 + math.sqrt(2) / 2)
    assert outer_radius(symmetric_config(8, 2.0, 1.0)) == pytest.approx(2 * (1 + math.sin(math.pi / 8)))


def test_radii_mixed():
    base = symmetric_config(4, 1.0, 1.0).sites
    sites = list(base)
    s = sites[2]
    sites[2] = SourceSite(Point2(s.position.x * 1.5, s.position.y * 1.5), 0.4, s.arc_start, s.arc_extent)
    cfg = SourceConfig(tuple(sites), 1.0)
    assert inner_radius(cfg) == pytest.approx(min(1 - math.sqrt(2) / 2, 1.5 - 0.4))
    assert outer_radius(cfg) == pytest.approx(max(1 + math.sqrt(2) / 2, 1.9))


@pytest.mark.parametrize("M", [3, 4, 7])
def test_radius_ordering(M):
    cfg = symmetric_config(M, 1.3, 1.0)
    assert inner_radius(cfg) < 1.3 < outer_radius(cfg)


def test_classify_examples():
    cfg = symmetric_config(4, 1.0, 1.0)
    assert classify(cfg, (0, 0)).region is Region.IN_C
    lab = classify(cfg, cfg.sites[0].position)
    assert lab.region is Region.IN_SOURCE_DISC and lab.site == 0
    assert classify(cfg, (2.0, 0.0)).region is Region.OUTSIDE_R
    assert classify(cfg, (0.0, -2.0)).region is Region.OUTSIDE_R


def test_classify_lowest_disc_wins():
    base = symmetric_config(4, 1.0, 1.0).sites
    grown = tuple(SourceSite(s.position, 0.9, s.arc_start, s.arc_extent) for s in base)
    cfg = SourceConfig(grown, 1.0)
    p = 0.5 * (cfg.sites[1].position + cfg.sites[2].position)   # inside discs 1 and 2
    assert classify(cfg, p).site == 1


def test_classify_partition_random():
    cfg = symmetric_config(5, 1.0, 1.0)
    rng = np.random.default_rng(3)
    for x, y in rng.uniform(-2.5, 2.5, (400, 2)):
        lab = classify(cfg, (x, y))
        in_disc = any(math.hypot(x - s.position.x, y - s.position.y) <= s.radius for s in cfg.sites)
        assert (lab.region is Region.IN_SOURCE_DISC) == in_disc
        if math.hypot(x, y) > outer_radius(cfg):
            assert lab.region is Region.OUTSIDE_R
        if math.hypot(x, y) < inner_radius(cfg):
            assert lab.region is Region.IN_C


def test_unmatched_arcs_flagged():
    sites = [SourceSite.from_arc(Point2.polar(3.0, t), 0.5, t + 2.8, t + 3.4) for t in (0, 2, 4)]
    cfg = SourceConfig(tuple(sites), 1.0)
    with pytest.raises(ConfigurationError):
        classify(cfg, (0.0, 0.0))


def test_json_round_trip(tmp_path):
    cfg = symmetric_config(5, 2.0, 3.0)
    path = tmp_path / "cfg.json"
    cfg.to_json(path)
    data = json.loads(path.read_text())
    assert set(data) == {"k", "sources"}
    assert set(data["sources"][0]) == {"x", "y", "a", "phi1", "phi2"}
    back = SourceConfig.from_json(path)
    assert back.M == 5 and back.k == 3.0
    for s, t in zip(cfg.sites, back.sites):
        assert s.position == t.position
        assert s.radius == t.radius
        assert t.arc_start == pytest.approx(s.arc_start, abs=1e-15)
        assert t.arc_extent == pytest.approx(s.arc_extent, abs=1e-15)


def test_malformed_json():
    with pytest.raises(ConfigurationError):
        SourceConfig.from_dict({"k": 1.0})
