"""Parity signal and phase sensitivity under photon loss on the detected arm.

Loss is modeled as a fictitious beam splitter of transmissivity eta coupling
mode b to a vacuum ancilla, placed either in front of the parity detector
(external) or between the phase shifter and the second beam splitter
(internal).  Both placements have closed forms in the same generating-function
ring as the ideal signal; eta = 1 reproduces the ideal results.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .metrology import PhasePoint, _sqrt_clamped, parity_extraction
from .series import TruncatedSeries, series_pow
from .states import GspParams

__all__ = [
    "Placement",
    "LossConfig",
    "LossCoeffs",
    "omega_coeffs",
    "omega2_literal",
    "parity_external",
    "parity_internal",
    "sensitivity_lossy",
]


class Placement(str, enum.Enum):
    EXTERNAL = "external"
    INTERNAL = "internal"


@dataclass(frozen=True)
class LossConfig:
    """Where the fictitious beam splitter sits and how transparent it is."""

    placement: Placement
    eta: float

    def __post_init__(self):
        object.__setattr__(self, "placement", Placement(self.placement))
        object.__setattr__(self, "eta", float(self.eta))
        _check_eta(self.eta)


def _check_eta(eta: float):
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"transmissivity must lie in (0, 1], got {eta}")


@dataclass(frozen=True)
class LossCoeffs:
    """Coefficients of the internal-loss observable exponent."""

    w1: float
    w2: complex
    w3: float


def omega_coeffs(pp: PhasePoint, eta2: float) -> LossCoeffs:
    """Internal-loss exponent coefficients at the interferometer angle.

    w2 uses the singularity-free factored form, equal to the quotient form of
    :func:`omega2_literal` wherever the latter's denominator is nonzero.
    """
    _check_eta(eta2)
    phi = pp.mzi_angle
    root = math.sqrt(eta2)
    half_sum = 0.5 * (1.0 + eta2)
    w1 = root * math.cos(phi) - half_sum
    w3 = -root * math.cos(phi) - half_sum
    w2 = (2.0 * root * math.sin(phi) - 1j * (eta2 - 1.0)) / 4.0
    return LossCoeffs(w1=w1, w2=w2, w3=w3)


def omega2_literal(pp: PhasePoint, eta2: float) -> complex:
    """The quotient form of w2; removable 0/0 at (eta2=1, angle=0) not handled."""
    _check_eta(eta2)
    phi = pp.mzi_angle
    numer = (eta2 + 1.0) ** 2 - 4.0 * eta2 * math.cos(phi) ** 2
    denom = 4.0 * (1j * eta2 - 1j + 2.0 * math.sqrt(eta2) * math.sin(phi))
    return numer / denom


def _cross_coupling_sq(eta2: float, sin2):
    """Squared magnitude of the observable's a-b cross coupling.

    The coupling itself is twice the w2 coefficient reported by
    :func:`omega_coeffs`; only this squared magnitude enters the expectation.
    """
    return eta2 * sin2 + (1.0 - eta2) ** 2 / 4.0


def _external_kernel_for(eta1: float):
    def kernel(x: TruncatedSeries, sinphi: TruncatedSeries, cosphi: TruncatedSeries):
        sin2 = sinphi * sinphi
        cos2 = cosphi * cosphi
        th1 = 1.0 - x * sin2
        th2 = 1.0 - x + (2.0 * eta1) * (x * cos2)
        one_minus_x = 1.0 - x
        th3 = ((1.0 - 2.0 * eta1) ** 2) * (x * sin2) * (one_minus_x * one_minus_x)
        return series_pow(th1, 0.5) * series_pow(th2 * th2 - th3, -0.5)

    return kernel


def _internal_kernel_for(eta2: float):
    def kernel(x: TruncatedSeries, sinphi: TruncatedSeries, cosphi: TruncatedSeries):
        sin2 = sinphi * sinphi
        cos2 = cosphi * cosphi
        # a = w1*w3 - eta2, b = |cross coupling|^2
        a = (1.0 + eta2) ** 2 / 4.0 - eta2 * cos2 - eta2
        b = _cross_coupling_sq(eta2, sin2)
        om1 = x * (a + b)
        om2 = 4.0 * (b * (x * x) * a)
        one_minus = 1.0 - om1
        return series_pow(one_minus * one_minus - om2, -0.5)

    return kernel


def parity_external(p: GspParams, pp: PhasePoint, eta1: float) -> float:
    """Parity signal with loss between the interferometer and the detector."""
    _check_eta(eta1)
    return parity_extraction(p, pp.mzi_angle, _external_kernel_for(eta1))[0]


def parity_internal(p: GspParams, pp: PhasePoint, eta2: float) -> float:
    """Parity signal with loss between the phase shifter and the second splitter."""
    _check_eta(eta2)
    return parity_extraction(p, pp.mzi_angle, _internal_kernel_for(eta2))[0]


def _lossy_kernel(loss: LossConfig):
    if loss.placement is Placement.EXTERNAL:
        return _external_kernel_for(loss.eta)
    return _internal_kernel_for(loss.eta)


def sensitivity_lossy(p: GspParams, pp: PhasePoint, loss: LossConfig) -> float:
    """Error-propagation phase uncertainty of the lossy parity signal."""
    value, deriv = parity_extraction(p, pp.mzi_angle, _lossy_kernel(loss), jet_order=1)
    if abs(deriv) < 1e-14:
        raise DomainError(
            f"lossy parity signal is stationary at detection phase {pp.detection_phase}"
        )
    return _sqrt_clamped(1.0 - value * value, "lossy phase sensitivity") / abs(deriv)
