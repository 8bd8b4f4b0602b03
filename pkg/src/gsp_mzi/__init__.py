"""Dual-engine toolkit for phase metrology with GSP-operated squeezed vacuum.

Two independent numeric engines compute the same physics: closed-form
generating-function extractions (:mod:`gsp_mzi.states`, :mod:`gsp_mzi.metrology`,
:mod:`gsp_mzi.loss`) and a truncated-Fock-space brute force
(:mod:`gsp_mzi.fock`).  The CLI (:mod:`gsp_mzi.cli`) exposes single metrics,
grid sweeps to CSV, canned figure sweeps, and the cross-engine validation
harness.
"""

from .errors import (
    CutoffOverflowError,
    DomainError,
    GspMziError,
    NumericFailureError,
    ShapeMismatchError,
    SingularSeriesError,
)
from .loss import LossConfig, LossCoeffs, Placement, omega_coeffs, parity_external, parity_internal, sensitivity_lossy
from .metrology import (
    MZI_CONVENTION,
    PhasePoint,
    parity_expectation,
    phase_sensitivity,
    phase_sensitivity_limit,
    qcrb,
    qfi,
    sql_hl,
)
from .series import SeriesShape, TruncatedSeries
from .states import (
    GspParams,
    QuadraturePhases,
    antibunching_r,
    average_photon_number,
    delta_db_vs_tmsv,
    general_moment,
    normalization_pd,
    quadrature_variances,
    squeezing_db,
)

__all__ = [
    "GspMziError",
    "ShapeMismatchError",
    "SingularSeriesError",
    "DomainError",
    "NumericFailureError",
    "CutoffOverflowError",
    "SeriesShape",
    "TruncatedSeries",
    "GspParams",
    "QuadraturePhases",
    "normalization_pd",
    "general_moment",
    "average_photon_number",
    "antibunching_r",
    "quadrature_variances",
    "squeezing_db",
    "delta_db_vs_tmsv",
    "MZI_CONVENTION",
    "PhasePoint",
    "qfi",
    "qcrb",
    "parity_expectation",
    "phase_sensitivity",
    "phase_sensitivity_limit",
    "sql_hl",
    "Placement",
    "LossConfig",
    "LossCoeffs",
    "omega_coeffs",
    "parity_external",
    "parity_internal",
    "sensitivity_lossy",
]

__version__ = "0.1.0"
