"""Truncated power-series arithmetic in the inverse temperature beta.

A series is a finite list of coefficients ``c[j]`` multiplying ``beta**j``
up to a fixed maximum power (the order). All binary operations require
equal orders; nothing is resized silently. Coefficients are ordinarily
floats, but each coefficient may also be an ndarray of samples (e.g. over
a grid of sphere points); the coefficient index is always the first axis.
That is how the model layer extracts whole coefficient functions in one
pass.
"""

from __future__ import annotations

import numpy as np

# A constant term counts as zero when its magnitude is below this.
# The series fed to divide_by_beta are logarithms of normalised Gibbs
# weights whose constant term is 1 in exact arithmetic; float summation
# leaves a dimensionless residue of order 1e-16 that is dropped.
ZERO_CONST_ATOL = 1e-12


class TruncatedSeries:
    """Coefficients of a power series in beta, truncated at a fixed order.

    ``coeffs[j]`` multiplies ``beta**j``; ``order`` is the highest retained
    power, so ``coeffs.shape[0] == order + 1``. Instances are value-like
    and never mutated by the operations below.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = np.array(coeffs, dtype=np.float64, copy=True)
        if arr.ndim < 1 or arr.shape[0] < 1:
            raise ValueError("a series needs at least the beta^0 coefficient")
        self.coeffs = arr

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls(np.zeros(order + 1))

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    def _check_compatible(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise ValueError(
                f"series order mismatch: {self.order} vs {other.order}")
        if self.coeffs.shape != other.coeffs.shape:
            raise ValueError(
                f"series coefficient shapes differ: "
                f"{self.coeffs.shape} vs {other.coeffs.shape}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        return TruncatedSeries(self.coeffs + other.coeffs)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        return TruncatedSeries(self.coeffs - other.coeffs)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.coeffs * float(other))  # scalar scale
        self._check_compatible(other)
        n = self.order + 1
        out = _alloc(n, self.coeffs[0] * other.coeffs[0])
        for j in range(n):
            for k in range(j + 1):
                out[j] += self.coeffs[k] * other.coeffs[j - k]
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def __call__(self, beta: float):
        """Evaluate by Horner's rule at a numeric beta."""
        acc = np.array(self.coeffs[-1], copy=True)
        for c in self.coeffs[-2::-1]:
            acc = acc * beta + c
        return acc if acc.ndim else float(acc)

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.coeffs!r})"


def _alloc(n: int, proto) -> np.ndarray:
    """Zero array for n coefficients shaped like ``proto`` each."""
    proto = np.asarray(proto, dtype=np.float64)
    return np.zeros((n,) + proto.shape)


def exp(a: TruncatedSeries, scale=1.0) -> TruncatedSeries:
    """Series of ``scale * exp(a)`` for a series with zero constant term.

    Uses the recurrence b_n = (1/n) sum_k k a_k b_{n-k}. The constant term
    of ``a`` must vanish (the exponent is proportional to beta); otherwise
    the result would not be a polynomial in beta. ``scale`` may be an
    ndarray of sample values.
    """
    c0 = np.max(np.abs(np.asarray(a.coeffs[0])))
    if c0 > ZERO_CONST_ATOL:
        raise ValueError(f"exp needs a zero constant term, got {a.coeffs[0]!r}")
    n = a.order + 1
    out = _alloc(n, np.asarray(a.coeffs[0]) * np.asarray(scale))
    out[0] += scale
    for j in range(1, n):
        acc = np.zeros_like(out[0])
        for k in range(1, j + 1):
            acc += k * a.coeffs[k] * out[j - k]
        out[j] = acc / j
    return TruncatedSeries(out)


def log(a: TruncatedSeries) -> TruncatedSeries:
    """Series of ``ln(a)`` for a series with strictly positive constant term.

    A non-positive constant term signals an invalid Gibbs weight and is
    rejected. Uses the derivative recurrence
    l_n = (a_n - (1/n) sum_{k<n} k l_k a_{n-k}) / a_0.
    """
    if not np.all(np.asarray(a.coeffs[0]) > 0.0):
        raise ValueError(
            f"log needs a positive constant term, got {a.coeffs[0]!r}")
    n = a.order + 1
    out = _alloc(n, a.coeffs[0])
    out[0] = np.log(a.coeffs[0])
    for j in range(1, n):
        acc = np.array(a.coeffs[j], dtype=np.float64, copy=True)
        for k in range(1, j):
            acc -= (k / j) * out[k] * a.coeffs[j - k]
        out[j] = acc / a.coeffs[0]
    return TruncatedSeries(out)


def divide_by_beta(a: TruncatedSeries) -> TruncatedSeries:
    """Shift coefficients down one power of beta, dropping the order by one.

    The constant term must vanish (to within ZERO_CONST_ATOL, see module
    note); a genuinely nonzero constant would mean the quotient diverges
    at beta = 0.
    """
    c0 = np.max(np.abs(np.asarray(a.coeffs[0])))
    if c0 > ZERO_CONST_ATOL:
        raise ValueError(
            f"divide_by_beta needs a zero constant term, got {a.coeffs[0]!r}")
    if a.order < 1:
        raise ValueError("cannot drop an order from an order-0 series")
    return TruncatedSeries(a.coeffs[1:])
