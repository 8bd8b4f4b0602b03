"""Ideal-interferometer figures of merit for GSP-operated squeezed vacuum.

Quantum Fisher information and its Cramer-Rao bound, the parity-detection
signal of the output b mode, the error-propagation phase sensitivity, and
the standard-quantum-limit / Heisenberg-limit reference curves.

Phase conventions: all user-facing phases are detection phases phi' (the
quantity on every sweep axis); the interferometer rotation angle is
phi' + pi/2 and is applied in exactly one place (:class:`PhasePoint`).
Derivatives with respect to the detection phase are computed analytically by
promoting the phase to a first-order jet variable of the series engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NumericFailureError
from .series import (
    TruncatedSeries,
    const_series,
    extract_derivative,
    series_pow,
    series_sin_cos,
    var_series,
)
from .states import (
    GeneratingFunctions,
    GspParams,
    general_moment,
    mean_photon_pair_moments,
    normalization_pd,
)

__all__ = [
    "MziConvention",
    "MZI_CONVENTION",
    "PhasePoint",
    "qfi",
    "qcrb",
    "parity_expectation",
    "phase_sensitivity",
    "phase_sensitivity_limit",
    "sql_hl",
]


@dataclass(frozen=True)
class MziConvention:
    """Global sign and mode conventions shared by both numeric engines."""

    generator: str = "J2 = (adag b - a bdag) / (2i)"
    unitary: str = "U(angle) = exp(-i * angle * J2)"
    detected_mode: str = "b"
    detection_phase_offset: float = math.pi / 2.0


MZI_CONVENTION = MziConvention()


@dataclass(frozen=True)
class PhasePoint:
    """A detection phase phi' and the interferometer angle it maps to."""

    detection_phase: float

    @property
    def mzi_angle(self) -> float:
        return self.detection_phase + MZI_CONVENTION.detection_phase_offset


def qfi(p: GspParams) -> float:
    """Quantum Fisher information 4*(<J2^2> - <J2>^2) of the input state."""
    na, nb, nanb = mean_photon_pair_moments(p)
    cross = general_moment(p, 0, 2, 2, 0) + general_moment(p, 2, 0, 0, 2)
    j2 = (general_moment(p, 0, 1, 1, 0) - general_moment(p, 1, 0, 0, 1)) / 2j
    value = na + nb + 2.0 * nanb - cross.real - 4.0 * (j2.real**2 + j2.imag**2)
    if not math.isfinite(value) or value < -1e-10:
        raise NumericFailureError(f"Fisher information evaluated to {value} for {p}")
    return max(value, 0.0)


def qcrb(p: GspParams) -> float:
    """Cramer-Rao phase-uncertainty bound 1/sqrt(F_Q)."""
    fisher = qfi(p)
    if fisher <= 0.0:
        raise DomainError(f"Fisher information {fisher} admits no finite bound")
    return 1.0 / math.sqrt(fisher)


def _sqrt_clamped(x: float, what: str, tol: float = 1e-12) -> float:
    if x < -tol:
        raise NumericFailureError(f"negative radicand {x} in {what}")
    return math.sqrt(max(x, 0.0))


def _ideal_parity_kernel(x: TruncatedSeries, sinphi: TruncatedSeries, cosphi: TruncatedSeries):
    """Omega1 / sqrt(Omega2 - Omega3) as a series in the ring of x and phi."""
    sin2 = sinphi * sinphi
    cos_two_phi = 2.0 * (cosphi * cosphi) - 1.0
    omega1 = series_pow(1.0 - x * sin2, 0.5)
    base2 = x * cos_two_phi + 1.0
    omega2 = base2 * base2
    shifted = x - 1.0
    omega3 = x * (shifted * shifted) * sin2
    return omega1 * series_pow(omega2 - omega3, -0.5)


def parity_extraction(p: GspParams, angle: float, kernel, jet_order: int = 0) -> list[float]:
    """Evaluate a parity-style observable and its first jet_order phase derivatives.

    ``kernel(x, sin_phi, cos_phi)`` must return the scalar factor of the
    generating-function integrand as a series in the same ring; x = v*v1.
    Returns [value, d/dphi, d2/dphi2, ...] up to jet_order, each normalized.
    """
    gf = GeneratingFunctions.build(p, phase_order=jet_order)
    shape = gf.shape
    phi = const_series(angle, shape)
    if jet_order:
        phi = phi + var_series(shape.nvars - 1, shape)
    sinphi, cosphi = series_sin_cos(phi)
    integrand = gf.u * gf.u1 * kernel(gf.v * gf.v1, sinphi, cosphi)
    pd = normalization_pd(p)
    out = []
    for d in range(jet_order + 1):
        degrees = gf.re_degrees(d) if jet_order else gf.re_degrees()
        raw = extract_derivative(integrand, degrees) / pd
        if abs(raw.imag) > 1e-10 * max(1.0, abs(raw.real)):
            raise NumericFailureError(f"parity extraction is not real: {raw}")
        if not math.isfinite(raw.real):
            raise NumericFailureError(f"parity extraction is not finite for {p}")
        out.append(raw.real)
    return out


def parity_expectation(p: GspParams, pp: PhasePoint) -> float:
    """Expectation of the photon-number parity of output mode b."""
    return parity_extraction(p, pp.mzi_angle, _ideal_parity_kernel)[0]


def phase_sensitivity(p: GspParams, pp: PhasePoint) -> float:
    """Error-propagation uncertainty sqrt(1 - <P>^2) / |d<P>/dphi'|."""
    value, deriv = parity_extraction(p, pp.mzi_angle, _ideal_parity_kernel, jet_order=1)
    if abs(deriv) < 1e-14:
        raise DomainError(
            f"parity signal is stationary at detection phase {pp.detection_phase}"
        )
    return _sqrt_clamped(1.0 - value * value, "phase sensitivity") / abs(deriv)


def phase_sensitivity_limit(p: GspParams) -> float:
    """Limit of the error-propagation uncertainty as the detection phase -> 0.

    At the peak the signal is 1 - A*phi'^2 + O(phi'^4), so the limit is
    1/sqrt(2A) = 1/sqrt(-d2<P>/dphi'^2 at 0).
    """
    angle = PhasePoint(0.0).mzi_angle
    value, _, second = parity_extraction(p, angle, _ideal_parity_kernel, jet_order=2)
    if abs(value - 1.0) > 1e-6:
        raise NumericFailureError(f"parity peak is {value}, expected 1 at zero phase")
    if second >= 0.0:
        raise DomainError(f"parity curvature {second} is not a maximum")
    return 1.0 / math.sqrt(-second)


def sql_hl(total_apn: float) -> tuple[float, float]:
    """Standard quantum limit and Heisenberg limit at a given total photon number."""
    if not total_apn > 0.0:
        raise DomainError(f"total photon number must be positive, got {total_apn}")
    return 1.0 / math.sqrt(total_apn), 1.0 / total_apn
