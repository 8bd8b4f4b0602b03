"""Dense truncated multivariate power-series (jet) arithmetic.

A series lives in the quotient ring C[t1..tk] / (t1^(o1+1), ..., tk^(ok+1)):
a dense complex coefficient tensor indexed by per-variable degree, with every
operation silently dropping degrees beyond the declared shape.  High-order
mixed partial derivatives at the origin are then exact coefficient reads
(times factorials), which is what the generating-function formulas in this
package need.

Analytic functions (exp, pow, sin, cos) split their argument into constant
term plus nilpotent remainder; the remainder's Taylor tail is a finite sum,
so there are no convergence concerns.
"""

from __future__ import annotations

import cmath
import math
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatchError, SingularSeriesError

__all__ = [
    "SeriesShape",
    "TruncatedSeries",
    "const_series",
    "var_series",
    "monomial_series",
    "series_add",
    "series_mul",
    "series_scale",
    "series_exp",
    "series_pow",
    "series_sin",
    "series_cos",
    "extract_derivative",
]

MAX_VARIABLES = 9


@dataclass(frozen=True)
class SeriesShape:
    """Per-variable maximum retained degree of a truncated series."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(o) for o in self.orders)
        object.__setattr__(self, "orders", orders)
        if not 1 <= len(orders) <= MAX_VARIABLES:
            raise ValueError(
                f"series need between 1 and {MAX_VARIABLES} variables, got {len(orders)}"
            )
        if any(o < 0 for o in orders):
            raise ValueError(f"orders must be non-negative, got {orders}")

    @property
    def nvars(self) -> int:
        return len(self.orders)

    @property
    def tensor_shape(self) -> tuple[int, ...]:
        return tuple(o + 1 for o in self.orders)

    @property
    def total_degree(self) -> int:
        """Largest total degree representable; bounds Taylor tails."""
        return sum(self.orders)

    @property
    def ncoeffs(self) -> int:
        return math.prod(self.tensor_shape)


class TruncatedSeries:
    """A polynomial in the truncation ring.  Immutable after construction."""

    __slots__ = ("shape", "coeffs")

    def __init__(self, shape: SeriesShape, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != shape.tensor_shape:
            raise ShapeMismatchError(
                f"coefficient tensor {coeffs.shape} does not match shape {shape.tensor_shape}"
            )
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @property
    def constant_term(self) -> complex:
        return complex(self.coeffs[(0,) * self.shape.nvars])

    def evaluate(self, point) -> complex:
        """Evaluate the polynomial at a numeric point (used by test oracles)."""
        point = tuple(point)
        if len(point) != self.shape.nvars:
            raise ShapeMismatchError("point dimension does not match variable count")
        acc = self.coeffs
        for x, order in zip(reversed(point), reversed(self.shape.orders)):
            acc = acc @ np.power(complex(x), np.arange(order + 1))
        return complex(acc)

    def __repr__(self):
        return f"TruncatedSeries(orders={self.shape.orders}, const={self.constant_term:.6g})"

    # -- operator sugar; the module functions hold the actual algebra --

    def __add__(self, other):
        return series_add(self, _as_series(other, self.shape))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.shape, -self.coeffs)

    def __sub__(self, other):
        return series_add(self, -_as_series(other, self.shape))

    def __rsub__(self, other):
        return series_add(_as_series(other, self.shape), -self)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return series_scale(self, other)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            return series_scale(self, 1.0 / other)
        return series_mul(self, series_pow(other, -1.0))


def _as_series(value, shape: SeriesShape) -> TruncatedSeries:
    if isinstance(value, TruncatedSeries):
        return value
    if isinstance(value, numbers.Number):
        return const_series(complex(value), shape)
    raise TypeError(f"cannot interpret {type(value).__name__} as a series")


def _require_same_shape(a: TruncatedSeries, b: TruncatedSeries):
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shape mismatch: {a.shape.orders} vs {b.shape.orders}")


def const_series(value: complex, shape: SeriesShape) -> TruncatedSeries:
    """Series equal to a constant."""
    coeffs = np.zeros(shape.tensor_shape, dtype=np.complex128)
    coeffs[(0,) * shape.nvars] = value
    return TruncatedSeries(shape, coeffs)


def var_series(index: int, shape: SeriesShape) -> TruncatedSeries:
    """The formal variable t_index as a series."""
    if not 0 <= index < shape.nvars:
        raise IndexError(f"variable index {index} out of range for {shape.nvars} variables")
    if shape.orders[index] < 1:
        raise ValueError(f"variable {index} has order 0 and cannot be represented")
    degrees = [0] * shape.nvars
    degrees[index] = 1
    return monomial_series(shape, tuple(degrees))


def monomial_series(shape: SeriesShape, degrees: tuple[int, ...], value: complex = 1.0) -> TruncatedSeries:
    """value * prod t_i^degrees_i; zero if the monomial is outside the shape."""
    if len(degrees) != shape.nvars:
        raise ShapeMismatchError("degree tuple does not match variable count")
    coeffs = np.zeros(shape.tensor_shape, dtype=np.complex128)
    if all(d <= o for d, o in zip(degrees, shape.orders)):
        coeffs[tuple(degrees)] = value
    return TruncatedSeries(shape, coeffs)


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _require_same_shape(a, b)
    return TruncatedSeries(a.shape, a.coeffs + b.coeffs)


def series_scale(a: TruncatedSeries, scalar: complex) -> TruncatedSeries:
    return TruncatedSeries(a.shape, a.coeffs * complex(scalar))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Truncated convolution; iterates over the sparser operand's support."""
    _require_same_shape(a, b)
    if np.count_nonzero(b.coeffs) < np.count_nonzero(a.coeffs):
        a, b = b, a
    bounds = a.shape.tensor_shape
    out = np.zeros(bounds, dtype=np.complex128)
    bc = b.coeffs
    for idx in np.argwhere(a.coeffs):
        idx = tuple(int(i) for i in idx)
        dst = tuple(slice(i, None) for i in idx)
        src = tuple(slice(0, n - i) for i, n in zip(idx, bounds))
        out[dst] += a.coeffs[idx] * bc[src]
    return TruncatedSeries(a.shape, out)


def _nilpotent_part(f: TruncatedSeries) -> tuple[complex, TruncatedSeries]:
    c = f.constant_term
    coeffs = f.coeffs.copy()
    coeffs[(0,) * f.shape.nvars] = 0.0
    return c, TruncatedSeries(f.shape, coeffs)


def series_exp(f: TruncatedSeries) -> TruncatedSeries:
    """exp(f) = exp(f0) * sum_j g^j / j! with g the nilpotent part of f."""
    c, g = _nilpotent_part(f)
    depth = f.shape.total_degree
    acc = const_series(1.0, f.shape)
    for j in range(depth, 0, -1):
        acc = const_series(1.0, f.shape) + series_scale(series_mul(g, acc), 1.0 / j)
    return series_scale(acc, cmath.exp(c))


def series_pow(f: TruncatedSeries, alpha: float) -> TruncatedSeries:
    """f**alpha via the binomial series around the constant term."""
    c, g = _nilpotent_part(f)
    if c == 0:
        raise SingularSeriesError("series_pow of a series with vanishing constant term")
    h = series_scale(g, 1.0 / c)
    depth = f.shape.total_degree
    acc = const_series(1.0, f.shape)
    for j in range(depth, 0, -1):
        acc = const_series(1.0, f.shape) + series_scale(series_mul(h, acc), (alpha - j + 1) / j)
    return series_scale(acc, _cpow(c, alpha))


def _cpow(c: complex, alpha: float) -> complex:
    if c.imag == 0 and c.real > 0:
        return complex(c.real**alpha)
    return c**alpha


def _sin_cos_nilpotent(g: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries]:
    """(sin g, cos g) of a nilpotent series via its finite Taylor tail."""
    shape = g.shape
    sin_acc = const_series(0.0, shape)
    cos_acc = const_series(1.0, shape)
    term = const_series(1.0, shape)
    for j in range(1, shape.total_degree + 1):
        term = series_scale(series_mul(term, g), 1.0 / j)
        r = j % 4
        if r == 1:
            sin_acc = series_add(sin_acc, term)
        elif r == 2:
            cos_acc = series_add(cos_acc, -term)
        elif r == 3:
            sin_acc = series_add(sin_acc, -term)
        else:
            cos_acc = series_add(cos_acc, term)
    return sin_acc, cos_acc


def series_sin_cos(f: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries]:
    """sin and cos of the same argument in one pass (angle addition)."""
    c, g = _nilpotent_part(f)
    sin_g, cos_g = _sin_cos_nilpotent(g)
    sc, cc = cmath.sin(c), cmath.cos(c)
    if c.imag == 0:  # keep purely real inputs exactly real
        sc, cc = math.sin(c.real), math.cos(c.real)
    return (
        series_add(series_scale(cos_g, sc), series_scale(sin_g, cc)),
        series_add(series_scale(cos_g, cc), series_scale(sin_g, -sc)),
    )


def series_sin(f: TruncatedSeries) -> TruncatedSeries:
    return series_sin_cos(f)[0]


def series_cos(f: TruncatedSeries) -> TruncatedSeries:
    return series_sin_cos(f)[1]


def extract_derivative(f: TruncatedSeries, degrees: tuple[int, ...]) -> complex:
    """Mixed partial derivative of f at the origin: coeff * prod(degrees!)."""
    degrees = tuple(int(d) for d in degrees)
    if len(degrees) != f.shape.nvars:
        raise ShapeMismatchError("degree tuple does not match variable count")
    if any(d < 0 for d in degrees):
        raise ValueError(f"degrees must be non-negative, got {degrees}")
    if any(d > o for d, o in zip(degrees, f.shape.orders)):
        raise ValueError(f"degrees {degrees} exceed shape orders {f.shape.orders}")
    scale = 1.0
    for d in degrees:
        scale *= math.factorial(d)
    return complex(f.coeffs[degrees]) * scale
