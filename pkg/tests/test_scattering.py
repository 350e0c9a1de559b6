import math

import numpy as np
import pytest

from quietzone.amplitudes import amplitudes_planewave
from quietzone.errors import ConfigurationError, DomainError, SingularityError
from quietzone.geometry import symmetric_config
from quietzone.incident import PlaneWave
from quietzone.scattering import (Boundary, Cylinder, exciting_coefficients, response_coefficients,
                                  scattered_field, scattered_flux, total_field, total_field_many)

PSI = math.radians(17)
THETA = np.linspace(0, 2 * math.pi, 256, endpoint=False)


def _ring(r):
    return r * np.cos(THETA), r * np.sin(THETA)


@pytest.mark.parametrize("bc", list(Boundary))
@pytest.mark.parametrize("ka", [0.3, 1.0, 5.0, 17.0])
def test_response_bounded_and_energy_conserving(bc, ka):
    R = response_coefficients(Cylinder(1.0, bc), ka, np.arange(-30, 31))
    assert np.all(np.abs(R) <= 1 + 1e-14)
    # lossless: Re R_n = -|R_n|^2
    assert np.allclose(R.real, -np.abs(R) ** 2, atol=1e-14)


def test_response_symmetric_in_order():
    R = response_coefficients(Cylinder(0.8), 2.0, np.arange(-6, 7))
    assert np.allclose(R, R[::-1], rtol=1e-13)


@pytest.mark.parametrize("k", [1.0, 5.0])
def test_soft_boundary_condition(k):
    cyl = Cylinder(1.0, Boundary.SOFT)
    f = PlaneWave(PSI)
    xs, ys = _ring(1.0 + 1e-12)
    u = total_field_many(k, f, xs, ys, cyl)
    assert np.abs(u).max() < 1e-10


@pytest.mark.parametrize("k", [1.0, 5.0])
def test_hard_boundary_condition(k):
    cyl = Cylinder(1.0, Boundary.HARD)
    f = PlaneWave(PSI)
    h = 1e-4
    r0 = 1.0 + 1e-12
    u = [total_field_many(k, f, *_ring(r0 + j * h), cyl) for j in range(3)]
    dudr = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h)
    assert np.abs(dudr).max() < 1e-6 * k ** 3


def test_boundary_condition_with_cloak():
    cfg = symmetric_config(5, 4.0, 5.0)
    amps = amplitudes_planewave(cfg, PSI, 60)
    cyl = Cylinder(1.0, Boundary.SOFT)
    u = total_field_many(5.0, PlaneWave(PSI), *_ring(1.0 + 1e-12), cyl, cfg, amps)
    assert np.abs(u).max() < 1e-8


@pytest.mark.parametrize("bc", list(Boundary))
def test_cloak_suppresses_scattering(bc):
    cfg = symmetric_config(5, 4.0, 5.0)
    f = PlaneWave(PSI)
    amps = amplitudes_planewave(cfg, PSI, 60)
    cyl = Cylinder(1.0, bc)
    off = scattered_flux(cyl, 5.0, f)
    on = scattered_flux(cyl, 5.0, f, cfg, amps)
    assert off > 0.1
    assert on <= 1e-8 * off


def test_exciting_coefficients_without_cloak_are_incident():
    cyl = Cylinder(0.5)
    f = PlaneWave(PSI)
    ns, C = exciting_coefficients(cyl, 2.0, f)
    assert ns[-1] == cyl.modal_order(2.0) == 21
    assert np.allclose(C, f.coefficients(ns))


def test_scattered_field_outside_only():
    cyl = Cylinder(1.0)
    f = PlaneWave(0.0)
    with pytest.raises(DomainError):
        scattered_field(cyl, 1.0, f, (0.5, 0.0))
    assert np.isfinite(scattered_field(cyl, 1.0, f, (1.5, 0.0)))


def test_cloak_must_fit_inside_quiet_zone():
    cfg = symmetric_config(4, 1.0, 2.0)
    amps = amplitudes_planewave(cfg, PSI, 20)
    with pytest.raises(ConfigurationError):
        scattered_flux(Cylinder(0.9), 2.0, PlaneWave(PSI), cfg, amps)
    with pytest.raises(ConfigurationError):
        scattered_flux(Cylinder(0.1), 2.0, PlaneWave(PSI), cfg, None)


def test_total_field_singular_at_source():
    cfg = symmetric_config(4, 1.0, 2.0)
    amps = amplitudes_planewave(cfg, PSI, 10)
    with pytest.raises(SingularityError):
        total_field(2.0, PlaneWave(PSI), cfg.sites[0].position, None, cfg, amps)


def test_cylinder_validation():
    with pytest.raises(ConfigurationError):
        Cylinder(0.0)
    assert Cylinder(1.0, "soft").boundary is Boundary.SOFT
    with pytest.raises(ValueError):
        Cylinder(1.0, "rigid")
