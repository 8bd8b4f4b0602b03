"""Closed-form statistics of GSP-operated two-mode squeezed vacuum.

The GSP operation (s*a*adag + t*adag*a)^m (and its mode-b twin of order n)
is diagonal in the pair-number basis, so every statistic of the operated
state reduces to high-order derivative extractions of exponential generating
functions in four formal variables (plus up to four more for operator
moments).  This module builds those generating functions on top of
:mod:`gsp_mzi.series` and evaluates the closed forms: normalization, general
anti-normally-ordered moments, average photon number, the two-mode
antibunching criterion, and quadrature squeezing in dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericFailureError
from .series import (
    SeriesShape,
    TruncatedSeries,
    extract_derivative,
    monomial_series,
    series_exp,
    series_mul,
    series_pow,
)

__all__ = [
    "GspParams",
    "GeneratingFunctions",
    "QuadraturePhases",
    "normalization_pd",
    "general_moment",
    "average_photon_number",
    "antibunching_r",
    "quadrature_variances",
    "squeezing_db",
    "delta_db_vs_tmsv",
]

MAX_OPERATION_ORDER = 6
MAX_MOMENT_ORDER = 4

# residual-imaginary tolerance when a formally complex evaluation must be real
_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class GspParams:
    """Physical specification of a GSP-operated two-mode squeezed vacuum.

    ``s`` is the superposition weight in [0, 1]; the companion weight is
    always t = +sqrt(1 - s^2).  ``m`` and ``n`` are the operation orders on
    modes a and b, ``z`` the squeezing parameter, strictly inside (0, 1).
    s=0 is the subtract-then-add limit, s=1 the add-then-subtract limit,
    m=n=0 the bare two-mode squeezed vacuum.
    """

    s: float
    m: int
    n: int
    z: float

    def __post_init__(self):
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "z", float(self.z))
        if not 0.0 <= self.s <= 1.0:
            raise DomainError(f"s must lie in [0, 1], got {self.s}")
        if not 0.0 < self.z < 1.0:
            raise DomainError(f"z must lie strictly inside (0, 1), got {self.z}")
        for name, order in (("m", self.m), ("n", self.n)):
            if int(order) != order or not 0 <= int(order) <= MAX_OPERATION_ORDER:
                raise DomainError(
                    f"{name} must be an integer in [0, {MAX_OPERATION_ORDER}], got {order}"
                )
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))

    @property
    def t(self) -> float:
        return math.sqrt(1.0 - self.s * self.s)

    @property
    def is_tmsv(self) -> bool:
        return self.m == 0 and self.n == 0


def tmsv_params(z: float) -> GspParams:
    """The un-operated reference state at the same squeezing."""
    return GspParams(s=1.0, m=0, n=0, z=z)


@dataclass(frozen=True)
class GeneratingFunctions:
    """The exponential generating functions of one parameter set.

    Variables are laid out as (t1, t2, t3, t4[, t5..t8][, phase]): the first
    four carry the ket/bra operation orders (m, n, m, n), the optional middle
    four carry moment orders, and the optional trailing variable is an
    analytic phase jet used by the interferometer formulas.
    """

    params: GspParams
    shape: SeriesShape
    u: TruncatedSeries
    v: TruncatedSeries
    u1: TruncatedSeries
    v1: TruncatedSeries
    delta: TruncatedSeries
    w: TruncatedSeries | None = None

    @classmethod
    def build(
        cls,
        params: GspParams,
        moment_orders: tuple[int, int, int, int] | None = None,
        phase_order: int = 0,
    ) -> "GeneratingFunctions":
        m, n = params.m, params.n
        orders = [m, n, m, n]
        if moment_orders is not None:
            orders.extend(int(o) for o in moment_orders)
        if phase_order:
            orders.append(int(phase_order))
        shape = SeriesShape(tuple(orders))

        s, t, z = params.s, params.t, params.z
        root = math.sqrt(1.0 - z * z)

        u = root * series_exp(_linear(shape, {0: s, 1: s}))
        u1 = root * series_exp(_linear(shape, {2: s, 3: s}))
        v = z * series_exp(_linear(shape, {0: s + t, 1: s + t}))
        v1 = z * series_exp(_linear(shape, {2: s + t, 3: s + t}))
        delta = series_pow(1.0 - v * v1, -1.0)

        w = None
        if moment_orders is not None:
            w = cls._build_w(shape, v, v1)
        return cls(params=params, shape=shape, u=u, v=v, u1=u1, v1=v1, delta=delta, w=w)

    @staticmethod
    def _build_w(shape: SeriesShape, v: TruncatedSeries, v1: TruncatedSeries) -> TruncatedSeries:
        # w = t7*t8*v1 + t6*t5*v + t6*t8 + t5*t7 over moment axes 4..7
        def mono(axes):
            degrees = [0] * shape.nvars
            for ax in axes:
                degrees[ax] = 1
            return monomial_series(shape, tuple(degrees))

        return (
            series_mul(mono((6, 7)), v1)
            + series_mul(mono((4, 5)), v)
            + mono((5, 7))
            + mono((4, 6))
        )

    def re_degrees(self, *extra: int) -> tuple[int, ...]:
        """Extraction degrees (m, n, m, n) padded with the given trailing degrees."""
        m, n = self.params.m, self.params.n
        degrees = [m, n, m, n] + list(extra)
        degrees.extend([0] * (self.shape.nvars - len(degrees)))
        return tuple(degrees)


def _linear(shape: SeriesShape, weights: dict[int, float]) -> TruncatedSeries:
    """sum_i weights[i] * t_i, silently dropping axes of order zero."""
    coeffs = np.zeros(shape.tensor_shape, dtype=np.complex128)
    for axis, weight in weights.items():
        if shape.orders[axis] >= 1:
            idx = [0] * shape.nvars
            idx[axis] = 1
            coeffs[tuple(idx)] = weight
    return TruncatedSeries(shape, coeffs)


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > _IMAG_TOL * max(1.0, abs(value.real)):
        raise NumericFailureError(f"{what} has non-negligible imaginary part: {value}")
    return float(value.real)


def normalization_pd(p: GspParams) -> float:
    """Squared norm of the operated (unnormalized) state.

    Equals the (m, n, m, n) derivative extraction of u*u1/(1 - v*v1); exactly
    1 for the un-operated state.
    """
    if p.is_tmsv:
        return 1.0
    gf = GeneratingFunctions.build(p)
    integrand = series_mul(series_mul(gf.u, gf.u1), gf.delta)
    value = _real(extract_derivative(integrand, gf.re_degrees()), "normalization")
    if not math.isfinite(value) or value <= 0.0:
        raise NumericFailureError(f"normalization evaluated to {value} for {p}")
    return value


def general_moment(p: GspParams, l: int, k: int, h: int, g: int) -> complex:
    """Expectation <a^l b^k adag^h bdag^g> (annihilators left, creators right).

    Hermitian symmetry moment(l,k,h,g) == conj(moment(h,g,l,k)) holds exactly
    as evaluated: the lexicographically larger index order delegates to the
    conjugate of the canonical one.
    """
    orders = (l, k, h, g)
    if any(int(o) != o or o < 0 or o > MAX_MOMENT_ORDER for o in orders):
        raise DomainError(f"moment orders must be integers in [0, {MAX_MOMENT_ORDER}]: {orders}")
    l, k, h, g = (int(o) for o in orders)
    if (l, k, h, g) > (h, g, l, k):
        return complex(general_moment(p, h, g, l, k)).conjugate()

    gf = GeneratingFunctions.build(p, moment_orders=(l, k, h, g))
    integrand = series_mul(
        series_mul(series_mul(gf.u, gf.u1), gf.delta),
        series_exp(series_mul(gf.delta, gf.w)),
    )
    numer = extract_derivative(integrand, gf.re_degrees(l, k, h, g))
    denom = extract_derivative(integrand, gf.re_degrees())
    if denom == 0 or not (math.isfinite(numer.real) and math.isfinite(denom.real)):
        raise NumericFailureError(f"moment {orders} evaluation failed for {p}")
    return numer / denom


def mean_photon_pair_moments(p: GspParams) -> tuple[float, float, float]:
    """(<adag a>, <bdag b>, <adag a bdag b>), the workhorse number moments."""
    na = _real(general_moment(p, 1, 0, 1, 0), "<a adag>") - 1.0
    nb = _real(general_moment(p, 0, 1, 0, 1), "<b bdag>") - 1.0
    nanb = (
        _real(general_moment(p, 1, 1, 1, 1), "<ab adag bdag>")
        - (na + 1.0)
        - (nb + 1.0)
        + 1.0
    )
    return na, nb, nanb


def average_photon_number(p: GspParams) -> float:
    """Per-mode mean photon number (modes a and b agree for these states)."""
    value = _real(general_moment(p, 1, 0, 1, 0), "<a adag>") - 1.0
    if value < -1e-12:
        raise NumericFailureError(f"negative photon number {value} for {p}")
    return max(value, 0.0)


def antibunching_r(p: GspParams) -> float:
    """Two-mode antibunching criterion; negative values signal nonclassicality."""
    na, nb, nanb = mean_photon_pair_moments(p)
    # <adag^2 a^2> = <a^2 adag^2> - 4<a adag> + 2, and likewise for mode b
    a2 = _real(general_moment(p, 2, 0, 2, 0), "<a2 adag2>") - 4.0 * (na + 1.0) + 2.0
    b2 = _real(general_moment(p, 0, 2, 0, 2), "<b2 bdag2>") - 4.0 * (nb + 1.0) + 2.0
    if nanb <= 0.0:
        raise DomainError(f"degenerate correlation <na nb> = {nanb} for {p}")
    return (a2 + b2) / (2.0 * nanb) - 1.0


@dataclass(frozen=True)
class QuadraturePhases:
    """Quadrature angles for the sum/difference variances (default sum = pi)."""

    theta1: float = math.pi / 2.0
    theta2: float = math.pi / 2.0


def quadrature_variances(
    p: GspParams, phases: QuadraturePhases = QuadraturePhases()
) -> tuple[float, float]:
    """Variances of X_a + X_b and X_a - X_b."""
    na = average_photon_number(p)
    ab = _real(general_moment(p, 1, 1, 0, 0), "<ab>")
    c = math.cos(phases.theta1 + phases.theta2)
    v1 = 1.0 + 2.0 * na + 2.0 * ab * c
    v2 = 1.0 + 2.0 * na - 2.0 * ab * c
    if v1 <= 0.0 or v2 <= 0.0:
        raise NumericFailureError(f"non-positive quadrature variance ({v1}, {v2}) for {p}")
    return v1, v2


def squeezing_db(p: GspParams, phases: QuadraturePhases = QuadraturePhases()) -> float:
    """Sum-quadrature variance on a log scale relative to vacuum noise."""
    v1, _ = quadrature_variances(p, phases)
    return 10.0 * math.log10(v1)


def delta_db_vs_tmsv(p: GspParams, phases: QuadraturePhases = QuadraturePhases()) -> float:
    """Squeezing improvement (dB) over the un-operated state at the same z."""
    v1, _ = quadrature_variances(p, phases)
    v1_ref, _ = quadrature_variances(tmsv_params(p.z), phases)
    return 10.0 * math.log10(v1 / v1_ref)
