"""Closed-form source amplitudes for active exterior cloaking of 2D scalar waves.

A ring of point multipole sources is driven so that, together with an
incident field, the total field vanishes in a bounded quiet zone while the
sources radiate nothing to the far field.

Typical use::

    from quietzone import symmetric_config, PlaneWave, compute_amplitudes, diagnose
    cfg = symmetric_config(M=4, b=1.0, k=2.0)
    f = PlaneWave.from_degrees(17)
    amps = compute_amplitudes(cfg, f, N=60)
    print(diagnose(cfg, f, amps).summary())
"""

__version__ = "0.1.0"

from ._backend import available as available_backends
from ._backend import kernels as _kernels
from .amplitudes import (AccuracyWarning, AmplitudeSet, KernelCache, amplitudes_general,
                         amplitudes_planewave, compute_amplitudes, kernel_coefficient,
                         kernel_matrix, large_m_amplitudes, monopole_dipole_field,
                         quadrature_oracle, source_field, source_field_many)
from .cylwave import (Point2, bessel_j, bessel_j_prime, graf_translate, green, hankel1,
                      hankel1_prime, wave_U, wave_U_prime, wave_V)
from .diagnostics import (DiagnosticsReport, diagnose, farfield_amplitude, farfield_coefficients,
                          farfield_flux, nearfield_coefficients, residuals, scattering_matrix,
                          scattering_matrix_entry)
from .errors import (BranchAmbiguityError, CapabilityError, ConfigurationError, DomainError,
                     QuietzoneError, SingularityError, TruncationError)
from .fieldgrid import FieldGrid, GridSpec, evaluate_grid, export_csv, export_pgm, read_csv
from .geometry import (Region, RegionLabel, SourceConfig, SourceSite, classify, inner_radius,
                       outer_radius, symmetric_config)
from .incident import Coefficients, IncidentField, PlaneWave, SingleMode
from .scattering import (Boundary, Cylinder, response_coefficient, scattered_field,
                         scattered_flux, total_field)

backend = _kernels.name
