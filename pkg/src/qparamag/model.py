"""Single-spin paramagnet model on the unit sphere.

Builds the physical couplings, the coherent-state Gibbs weight polynomial,
the exact (log-form) and high-temperature effective energies, and the
effective magnetic fields that drive the moment dynamics. The quantisation
axis, easy axis and applied field are all fixed along z; the energy is a
function of u_z alone and the effective field has only a z component.

All log arguments are kept as polynomials in (1 - u_z) and (1 + u_z)
rather than in |z|^2, so both poles of the sphere are evaluable; large
exponents are shifted by their maximum before exponentiation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from numpy.polynomial import polynomial as _poly

from . import series
from .constants import DEFAULT_G, K_B, MU_B

# Exact-log field evaluations stay this far inside the poles.
POLE_CLAMP = 1e-12


@dataclass(frozen=True)
class SpinNumber:
    """Principal quantum number s stored as the integer 2s."""

    two_s: int

    def __post_init__(self):
        if not isinstance(self.two_s, int) or self.two_s < 1:
            raise ValueError(f"two_s must be a positive integer, got {self.two_s!r}")

    @property
    def s(self) -> float:
        return 0.5 * self.two_s

    @classmethod
    def from_s(cls, s: float) -> "SpinNumber":
        two_s = round(2 * s)
        if abs(2 * s - two_s) > 1e-12:
            raise ValueError(f"s must be integer or half-integer, got {s}")
        return cls(two_s)


@dataclass(frozen=True)
class ModelParams:
    """Physical couplings; energies in joules, field in tesla.

    The quadratic-level couplings are derived quantities:
    A0 = lambda_sigma, A1 = g mu_B mu0_H, A2 = K - lambda_sigma.
    They are recomputed from the inputs on every access and never stored.
    """

    g: float = DEFAULT_G
    mu0_H: float = 0.0        # applied field mu0*H along z, tesla
    K: float = 0.0            # uniaxial anisotropy energy, joules
    lambda_sigma: float = 0.0  # magneto-elastic scalar, joules

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g}")

    @property
    def A0(self) -> float:
        return self.lambda_sigma

    @property
    def A1(self) -> float:
        return self.g * MU_B * self.mu0_H

    @property
    def A2(self) -> float:
        return self.K - self.lambda_sigma


def coefficients(g: float, mu0_H: float, K: float, lambda_sigma: float) -> ModelParams:
    """Validating factory for ModelParams (requires g > 0)."""
    return ModelParams(g=g, mu0_H=mu0_H, K=K, lambda_sigma=lambda_sigma)


@dataclass(frozen=True)
class SphereCoordinate:
    """A point on the unit sphere together with its stereographic |z|^2."""

    u: tuple
    zsq: float

    @classmethod
    def from_vector(cls, u) -> "SphereCoordinate":
        u = np.asarray(u, dtype=float)
        if u.shape != (3,):
            raise ValueError("u must be a 3-vector")
        norm = float(np.linalg.norm(u))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"|u| must be 1 to within 1e-9, got {norm}")
        return cls(u=tuple(u), zsq=stereographic(u[2]))


def stereographic(u_z: float) -> float:
    """Map u_z on the sphere to |z|^2 = (1 - u_z)/(1 + u_z).

    Defined for u_z in (-1, 1]; the south pole maps to infinity and is
    rejected so callers fall back to the pole-safe energy forms.
    """
    if not -1.0 <= u_z <= 1.0:
        raise ValueError(f"u_z must lie in [-1, 1], got {u_z}")
    if u_z == -1.0:
        raise ValueError("u_z = -1 is the stereographic pole; "
                         "use the pole-safe energy forms instead")
    return (1.0 - u_z) / (1.0 + u_z)


def _level_exponents(spin: SpinNumber, params: ModelParams) -> np.ndarray:
    """Energy exponents e_p with weight exp(beta*e_p) for p = 0..2s.

    e_p = A2 p^2 - (2s A2 + A1) p, i.e. the level Gibbs exponent relative
    to the maximal-weight state m = s.
    """
    p = np.arange(spin.two_s + 1, dtype=float)
    return params.A2 * p * p - (spin.two_s * params.A2 + params.A1) * p


def _binomials(two_s: int) -> np.ndarray:
    return np.array([math.comb(two_s, p) for p in range(two_s + 1)], dtype=float)


def weight_polynomial(spin: SpinNumber, params: ModelParams,
                      beta: float, zsq: float) -> float:
    """Coherent-state Gibbs weight polynomial in |z|^2.

    sum_p C(2s,p) zsq^p exp(beta A2 p^2) exp(-beta (2s A2 + A1) p).
    May overflow for extreme beta; the sphere-based energy functions below
    use shifted exponents and are the stable route.
    """
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    if zsq < 0:
        raise ValueError(f"zsq must be non-negative, got {zsq}")
    e = _level_exponents(spin, params)
    binom = _binomials(spin.two_s)
    return float(sum(binom[p] * zsq**p * math.exp(beta * e[p])
                     for p in range(spin.two_s + 1)))


def _pole_weights(two_s: int, u_z):
    """Weights c_p = C(2s,p) (1-u)^p (1+u)^(2s-p) for p = 0..2s.

    Returns an array of shape (2s+1,) + shape(u_z). These are the
    coherent-state overlap factors multiplied through by (1+u)^(2s), so
    both poles are ordinary points. sum_p c_p = 2^(2s) identically.
    """
    u = np.asarray(u_z, dtype=float)
    binom = _binomials(two_s)
    lo = 1.0 - u
    hi = 1.0 + u
    rows = [binom[p] * lo**p * hi**(two_s - p) for p in range(two_s + 1)]
    return np.stack(rows)


def _pole_weight_derivs(two_s: int, u_z):
    """d c_p / d u_z, with the p = 0 and p = 2s boundary terms dropped
    analytically so the poles never produce 0 * inf."""
    u = np.asarray(u_z, dtype=float)
    binom = _binomials(two_s)
    lo = 1.0 - u
    hi = 1.0 + u
    rows = []
    for p in range(two_s + 1):
        d = np.zeros_like(u)
        if p > 0:
            d = d - p * binom[p] * lo**(p - 1) * hi**(two_s - p)
        if p < two_s:
            d = d + (two_s - p) * binom[p] * lo**p * hi**(two_s - p - 1)
        rows.append(d)
    return np.stack(rows)


def _check_uz(u_z) -> np.ndarray:
    u = np.asarray(u_z, dtype=float)
    if np.any(np.abs(u) > 1.0 + 1e-9):
        raise ValueError("u_z must lie in [-1, 1]")
    return np.clip(u, -1.0, 1.0)


def exact_effective_energy(spin: SpinNumber, params: ModelParams,
                           beta: float, u_z):
    """Log-form effective energy -(1/beta) ln[L / (1+|z|^2)^(2s)], joules.

    Evaluated pole-safely as -(1/beta) (ln G - 2s ln 2) with
    G = sum_p c_p exp(beta e_p); the largest retained exponent is factored
    out before exponentiation so very low temperatures do not overflow.
    Accepts scalar or array u_z in [-1, 1].
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    u = _check_uz(u_z)
    c = _pole_weights(spin.two_s, u)
    x = beta * _level_exponents(spin, params)
    x = x.reshape((-1,) + (1,) * u.ndim)
    logw = np.where(c > 0, np.broadcast_to(x, c.shape), -np.inf)
    x_max = np.max(logw, axis=0)
    log_g = x_max + np.log(np.sum(c * np.exp(logw - x_max), axis=0))
    out = -(log_g - spin.two_s * math.log(2.0)) / beta
    return out if out.ndim else float(out)


def exact_log_field(spin: SpinNumber, params: ModelParams,
                    beta: float, u_z):
    """Effective field B_z (tesla) of the log-form energy.

    B_z = G_u / (g mu_B s beta G) with G as in exact_effective_energy.
    u_z is clamped to [-1 + 1e-12, 1 - 1e-12]; the ratio itself stays
    finite at the poles but the clamp keeps the evaluation uniform.
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    u = np.clip(_check_uz(u_z), -1.0 + POLE_CLAMP, 1.0 - POLE_CLAMP)
    c = _pole_weights(spin.two_s, u)
    cd = _pole_weight_derivs(spin.two_s, u)
    x = beta * _level_exponents(spin, params)
    x = x.reshape((-1,) + (1,) * u.ndim)
    x_max = np.max(np.broadcast_to(x, c.shape), axis=0)
    w = np.exp(x - x_max)
    num = np.sum(cd * w, axis=0)
    den = np.sum(c * w, axis=0)
    out = num / (params.g * MU_B * spin.s * beta * den)
    return out if out.ndim else float(out)


def _weight_series(spin: SpinNumber, params: ModelParams, order: int, u_z,
                   derivative: bool = False) -> series.TruncatedSeries:
    """Normalised Gibbs weight G/2^(2s) (or its u_z derivative) as a
    TruncatedSeries in beta of the given order."""
    u = np.asarray(u_z, dtype=float)
    scale = (_pole_weight_derivs if derivative else _pole_weights)(
        spin.two_s, u) / 2.0**spin.two_s
    e = _level_exponents(spin, params)
    total = None
    for p in range(spin.two_s + 1):
        exponent = np.zeros(order + 1)
        exponent[1] = e[p]
        term = series.exp(series.TruncatedSeries(
            np.broadcast_to(exponent.reshape((-1,) + (1,) * u.ndim),
                            (order + 1,) + u.shape)), scale=scale[p])
        total = term if total is None else total + term
    return total


def high_temp_energy_coefficients(spin: SpinNumber, params: ModelParams,
                                  order: int, u_z) -> np.ndarray:
    """Coefficients H^(j)(u_z), j = 0..order, of the high-temperature
    expansion of the effective energy in powers of beta.

    Built through the series kernel: the normalised weight polynomial is
    assembled as a series in beta of order N+1, logged, divided by beta
    and negated. H^(j) has units of joules^(j+1) so that beta^j H^(j) is
    an energy. Accepts scalar or array u_z in [-1, 1].
    """
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    u = _check_uz(u_z)
    g_ser = _weight_series(spin, params, order + 1, u)
    h_ser = -series.divide_by_beta(series.log(g_ser))
    return h_ser.coeffs


def high_temp_field_coefficients(spin: SpinNumber, params: ModelParams,
                                 order: int, u_z) -> np.ndarray:
    """Coefficients B^(j)(u_z), j = 0..order, of the effective-field
    expansion B_z = sum_j beta^j B^(j), in tesla.

    The u_z derivative is taken algebraically: d(ln G)/du = G_u / G is
    formed as a series product (G_u uses the exact weight derivatives),
    then divided by beta, so no finite differencing is involved.
    """
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    u = _check_uz(u_z)
    g_ser = _weight_series(spin, params, order + 1, u)
    gu_ser = _weight_series(spin, params, order + 1, u, derivative=True)
    inv_g = series.exp(-series.log(g_ser))
    ratio = series.divide_by_beta(gu_ser * inv_g)
    return ratio.coeffs / (params.g * MU_B * spin.s)


def classical_field(spin: SpinNumber, params: ModelParams, u_z):
    """Classical-limit field B^(0) = (A1 + (2s-1) A2 u_z) / (g mu_B)."""
    u = _check_uz(u_z)
    out = (params.A1 + (spin.two_s - 1) * params.A2 * u) / (params.g * MU_B)
    return out if out.ndim else float(out)


def validity_scale(spin: SpinNumber, params: ModelParams) -> float:
    """Crossover temperature (K) below which the high-temperature
    truncation degrades: max(|A1| s, |A2| s (2s-1)/2) / k_B."""
    s = spin.s
    return max(abs(params.A1) * s,
               abs(params.A2) * s * (spin.two_s - 1) / 2.0) / K_B


class FieldKind(enum.Enum):
    CLASSICAL = "classical"
    HIGH_T = "hight"
    EXACT_LOG = "exact"


#: Per-temperature field representation consumed by the integration kernel.
#: kind 0: B(u) = Chebyshev series `num` evaluated at u.
#: kind 1: B(u) = scale * P(num, u) / P(den, u) with monomial P, u clamped.
FIELD_POLY, FIELD_RATIO = 0, 1


@dataclass(frozen=True)
class FieldTable:
    kind: int
    num: np.ndarray
    den: np.ndarray
    scale: float


class FieldModel:
    """Which effective field drives the dynamics.

    Variants: the classical limit (order-0 coefficient, temperature
    independent), the high-temperature expansion truncated at order
    N >= 1, and the exact log-form field. High-T per-order fields are
    precomputed once as Chebyshev interpolants of the exact coefficient
    functions (polynomials of bounded degree, so the interpolation is
    exact to roundoff).
    """

    def __init__(self, spin: SpinNumber, params: ModelParams,
                 kind: FieldKind, order: int | None = None):
        self.spin = spin
        self.params = params
        self.kind = kind
        if kind is FieldKind.HIGH_T:
            if order is None or order < 1:
                raise ValueError(
                    "high-T variant needs order N >= 1 (N = 0 is the classical limit)")
            self.order = int(order)
            self._cheb_bj = self._fit_field_coefficients()
        else:
            if order not in (None, 0):
                raise ValueError(f"{kind.value} variant takes no expansion order")
            self.order = 0
            self._cheb_bj = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def classical_limit(cls, spin, params) -> "FieldModel":
        return cls(spin, params, FieldKind.CLASSICAL)

    @classmethod
    def high_t(cls, spin, params, order: int) -> "FieldModel":
        return cls(spin, params, FieldKind.HIGH_T, order)

    @classmethod
    def exact_log(cls, spin, params) -> "FieldModel":
        return cls(spin, params, FieldKind.EXACT_LOG)

    @classmethod
    def from_name(cls, name: str, spin, params) -> "FieldModel":
        key = name.strip().lower()
        if key == "classical":
            return cls.classical_limit(spin, params)
        if key in ("exact", "exact-log", "exactlog"):
            return cls.exact_log(spin, params)
        if key.startswith("hight"):
            sep = key[5:6]
            if sep in (":", "=") and key[6:].isdigit():
                return cls.high_t(spin, params, int(key[6:]))
            raise ValueError(f"high-T variant must be written 'hight:N', got {name!r}")
        raise ValueError(f"unknown field model {name!r} "
                         "(expected classical | hight:N | exact)")

    @property
    def label(self) -> str:
        if self.kind is FieldKind.HIGH_T:
            return f"hight:{self.order}"
        return self.kind.value

    def _fit_field_coefficients(self) -> np.ndarray:
        """Chebyshev coefficients of B^(j)(u), shape (N+1, deg+1).

        B^(j) is a polynomial in u of degree at most 2s (j+1) - 1; sampling
        at deg+3 Chebyshev points and least-squares fitting in the
        Chebyshev basis recovers it exactly up to roundoff.
        """
        deg = self.spin.two_s * (self.order + 1)
        x = _cheb.chebpts1(deg + 3)
        y = high_temp_field_coefficients(self.spin, self.params, self.order, x)
        return _cheb.chebfit(x, y.T, deg).T

    # -- evaluation ------------------------------------------------------------

    def field(self, beta: float, u_z):
        """Effective field B_z (tesla) at inverse temperature beta.

        The classical limit ignores beta; the exact-log variant requires
        beta > 0. u_z in [-1, 1] (exact-log is evaluated a hair inside the
        poles, see exact_log_field).
        """
        if self.kind is FieldKind.CLASSICAL:
            return classical_field(self.spin, self.params, u_z)
        if self.kind is FieldKind.EXACT_LOG:
            return exact_log_field(self.spin, self.params, beta, u_z)
        if beta < 0:
            raise ValueError(f"beta must be non-negative, got {beta}")
        u = _check_uz(u_z)
        coeffs = sum(beta**j * self._cheb_bj[j] for j in range(self.order + 1))
        out = _cheb.chebval(u, coeffs)
        return out if np.ndim(out) else float(out)

    def table(self, beta: float) -> FieldTable:
        """Freeze the field at one temperature into kernel-ready arrays."""
        if self.kind is FieldKind.CLASSICAL:
            pref = 1.0 / (self.params.g * MU_B)
            num = np.array([self.params.A1 * pref,
                            (self.spin.two_s - 1) * self.params.A2 * pref])
            return FieldTable(FIELD_POLY, num, np.zeros(1), 1.0)
        if self.kind is FieldKind.HIGH_T:
            if beta < 0:
                raise ValueError(f"beta must be non-negative, got {beta}")
            coeffs = sum(beta**j * self._cheb_bj[j]
                         for j in range(self.order + 1))
            return FieldTable(FIELD_POLY, np.asarray(coeffs, dtype=float),
                              np.zeros(1), 1.0)
        if not beta > 0:
            raise ValueError(f"beta must be positive, got {beta}")
        # Exact log: B = den'(u) / (g mu_B s beta den(u)) with
        # den(u) = sum_p c_p(u) exp(beta e_p - shift); the shift cancels
        # in the ratio and keeps low temperatures finite.
        x = beta * _level_exponents(self.spin, self.params)
        w = np.exp(x - np.max(x))
        den = np.zeros(self.spin.two_s + 1)
        binom = _binomials(self.spin.two_s)
        for p in range(self.spin.two_s + 1):
            cp = binom[p] * w[p] * _poly.polymul(
                _poly.polypow([1.0, -1.0], p),
                _poly.polypow([1.0, 1.0], self.spin.two_s - p))
            den[:cp.size] += cp
        num = _poly.polyder(den)
        scale = 1.0 / (self.params.g * MU_B * self.spin.s * beta)
        return FieldTable(FIELD_RATIO, num, den, scale)


def effective_field(fmodel: FieldModel, beta: float, u_z):
    """B_z (tesla) for the selected variant; see FieldModel.field."""
    return fmodel.field(beta, u_z)
