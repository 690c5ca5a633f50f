"""Stochastic Landau-Lifshitz-Gilbert dynamics of a single unit moment.

One moment m (|m| = 1) precesses in a z-only model field plus white
Gaussian fluctuation-dissipation noise:

    dm/dt = -gamma/(1+alpha^2) [ m x B  +  alpha m x (m x B) ]

with B = B_model(m_z) e_z + eta held fixed over each timestep and the
noise variance 2 alpha k_B T / (mu_s gamma dt) per Cartesian component
per step (Stratonovich interpretation). The step is a norm-preserving
semi-implicit midpoint rule: the torque is evaluated at (m_n + m_{n+1})/2
and solved by fixed-point iteration, which conserves |m| exactly up to
the iteration tolerance. Steps that fail to converge fall back to a Heun
predictor-corrector with projection and are counted, never hidden.

Trajectories own their state and their own seeded generator stream, so
ensembles parallelise with no shared mutable state and reproduce
bit-identically for a given seed regardless of scheduling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, K_B, MU_B
from .model import FIELD_POLY, POLE_CLAMP, FieldModel, FieldTable, SpinNumber, ModelParams

try:
    import numba

    def _jit(func):
        return numba.njit(cache=True, nogil=True)(func)

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    def _jit(func):
        return func

    HAVE_NUMBA = False

FP_TOL = 1e-12
FP_MAX_ITER = 50


class NumericalError(RuntimeError):
    """Raised when an integration produces non-finite state."""


@dataclass(frozen=True)
class LlgParams:
    """Integration parameters; SI units throughout.

    gamma is the gyromagnetic ratio g mu_B / hbar (rad s^-1 T^-1) and
    mu_s = g mu_B s the moment magnitude (J/T). Noise requires damping:
    alpha > 0 whenever temperature > 0.
    """

    alpha: float
    gamma: float
    mu_s: float
    dt: float
    temperature: float

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be non-negative, got {self.temperature}")
        if self.temperature > 0 and not self.alpha > 0:
            raise ValueError("fluctuation-dissipation noise requires alpha > 0")
        if not (self.gamma > 0 and self.mu_s > 0):
            raise ValueError("gamma and mu_s must be positive")

    @classmethod
    def for_model(cls, spin: SpinNumber, params: ModelParams, dt: float,
                  temperature: float, alpha: float = 0.1) -> "LlgParams":
        return cls(alpha=alpha, gamma=params.g * MU_B / HBAR,
                   mu_s=params.g * MU_B * spin.s, dt=dt,
                   temperature=temperature)

    @property
    def noise_std(self) -> float:
        """Per-component, per-step standard deviation of the noise field (T)."""
        if self.temperature == 0:
            return 0.0
        return math.sqrt(2.0 * self.alpha * K_B * self.temperature
                         / (self.mu_s * self.gamma * self.dt))

    @property
    def beta(self) -> float:
        if self.temperature <= 0:
            raise ValueError("beta undefined at T = 0")
        return 1.0 / (K_B * self.temperature)


@dataclass(frozen=True)
class MomentState:
    """Unit moment and elapsed time."""

    m: tuple
    t: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (3,):
            raise ValueError("m must be a 3-vector")
        if abs(np.linalg.norm(m) - 1.0) > 1e-9:
            raise ValueError(f"|m| must be 1 to within 1e-9, got {np.linalg.norm(m)}")


@dataclass(frozen=True)
class TrajectoryStats:
    """Every-step time averages over the measurement window."""

    mean_mz: float
    mean_mz2: float
    n_samples: int
    sum_cross: float   # sum over samples of |m x B_det|^2, T^2
    sum_align: float   # sum over samples of m . B_det, T
    n_fallback: int    # steps where the midpoint iteration did not converge
    final_m: tuple


def noise_sample(params: LlgParams, rng: np.random.Generator) -> np.ndarray:
    """One white-noise field sample (tesla, 3-vector).

    Each Cartesian component is i.i.d. Gaussian with variance
    2 alpha k_B T / (mu_s gamma dt): the continuum noise strength
    2 alpha / (beta mu_s gamma) discretised over one step.
    """
    if not params.temperature > 0:
        raise ValueError("noise_sample requires temperature > 0")
    return rng.normal(0.0, params.noise_std, 3)


def _torque(m, b, gamma_red, alpha):
    c = np.cross(m, b)
    return -gamma_red * (c + alpha * np.cross(m, c))


def llg_step(state: MomentState, field, params: LlgParams) -> MomentState:
    """One timestep under a fixed total field (model field plus noise).

    Semi-implicit midpoint with fixed-point iteration; Heun with
    projection if the iteration does not converge within FP_MAX_ITER
    (surfaced via a RuntimeWarning). Reference implementation of the
    compiled kernel; kept in lockstep by tests.
    """
    m = np.asarray(state.m, dtype=float)
    b = np.asarray(field, dtype=float)
    gamma_red = params.gamma / (1.0 + params.alpha**2)
    new = m.copy()
    converged = False
    polish = False
    for _ in range(FP_MAX_ITER):
        mid = 0.5 * (m + new)
        trial = m + params.dt * _torque(mid, b, gamma_red, params.alpha)
        delta = np.max(np.abs(trial - new))
        new = trial
        if polish:
            converged = True
            break
        if delta < FP_TOL:
            # One refinement past the tolerance: the leftover fixed-point
            # residual is systematic and would otherwise leak into u_z
            # through the renormalisation over long runs.
            polish = True
    if not converged:
        warnings.warn("midpoint iteration did not converge; Heun step taken",
                      RuntimeWarning, stacklevel=2)
        f0 = _torque(m, b, gamma_red, params.alpha)
        pred = m + params.dt * f0
        new = m + 0.5 * params.dt * (f0 + _torque(pred, b, gamma_red, params.alpha))
    new /= np.linalg.norm(new)
    return MomentState(m=tuple(new), t=state.t + params.dt)


def spin_temperature(moments, fields, mu_s: float) -> float:
    """Configurational spin-temperature estimator (kelvin).

    T_s = (mu_s / 2 k_B) sum |m x B|^2 / sum (m . B) over the sampled
    (moment, deterministic field) pairs. Diagnostic only: exact for a
    moment in a constant field, approximate once the field depends on m.
    """
    m = np.atleast_2d(np.asarray(moments, dtype=float))
    b = np.atleast_2d(np.asarray(fields, dtype=float))
    if m.shape != b.shape or m.shape[0] == 0 or m.shape[1] != 3:
        raise ValueError("moments and fields must be matching (n, 3) arrays")
    cross = np.cross(m, b)
    num = float(np.sum(cross * cross))
    den = float(np.sum(m * b))
    return spin_temperature_from_sums(num, den, mu_s)


def spin_temperature_from_sums(sum_cross: float, sum_align: float,
                               mu_s: float) -> float:
    if abs(sum_align) < 1e-300:
        raise ValueError("spin temperature undefined: sum of m.B vanishes")
    return mu_s * sum_cross / (2.0 * K_B * sum_align)


# --------------------------------------------------------------------------
# Compiled kernel
# --------------------------------------------------------------------------

@_jit
def _field_bz(kind, num, den, scale, uz):
    if kind == FIELD_POLY:
        # Clenshaw recurrence for a Chebyshev series on [-1, 1].
        b1 = 0.0
        b2 = 0.0
        for k in range(num.shape[0] - 1, 0, -1):
            b1, b2 = 2.0 * uz * b1 - b2 + num[k], b1
        return uz * b1 - b2 + num[0]
    u = uz
    if u > 1.0 - POLE_CLAMP:
        u = 1.0 - POLE_CLAMP
    elif u < -1.0 + POLE_CLAMP:
        u = -1.0 + POLE_CLAMP
    pn = 0.0
    for k in range(num.shape[0] - 1, -1, -1):
        pn = pn * u + num[k]
    pd = 0.0
    for k in range(den.shape[0] - 1, -1, -1):
        pd = pd * u + den[k]
    return scale * pn / pd


@_jit
def _integrate(m0x, m0y, m0z, noise, n_equil, dt, gamma_red, alpha,
               kind, num, den, scale, fp_tol, fp_max):
    mx, my, mz = m0x, m0y, m0z
    sum_z = 0.0
    sum_z2 = 0.0
    sum_cross = 0.0
    sum_align = 0.0
    n_fallback = 0
    bz_det = _field_bz(kind, num, den, scale, mz)
    n_total = noise.shape[0]
    for it in range(n_total):
        bx = noise[it, 0]
        by = noise[it, 1]
        bz = noise[it, 2] + bz_det
        nx, ny, nz = mx, my, mz
        converged = False
        polish = False
        for _ in range(fp_max):
            ax = 0.5 * (mx + nx)
            ay = 0.5 * (my + ny)
            az = 0.5 * (mz + nz)
            cx = ay * bz - az * by
            cy = az * bx - ax * bz
            cz = ax * by - ay * bx
            dx = ay * cz - az * cy
            dy = az * cx - ax * cz
            dz = ax * cy - ay * cx
            tx = mx + dt * (-gamma_red) * (cx + alpha * dx)
            ty = my + dt * (-gamma_red) * (cy + alpha * dy)
            tz = mz + dt * (-gamma_red) * (cz + alpha * dz)
            delta = abs(tx - nx)
            if abs(ty - ny) > delta:
                delta = abs(ty - ny)
            if abs(tz - nz) > delta:
                delta = abs(tz - nz)
            nx, ny, nz = tx, ty, tz
            if polish:
                converged = True
                break
            if delta < fp_tol:
                # One refinement past tolerance; see llg_step.
                polish = True
        if not converged:
            n_fallback += 1
            cx = my * bz - mz * by
            cy = mz * bx - mx * bz
            cz = mx * by - my * bx
            dx = my * cz - mz * cy
            dy = mz * cx - mx * cz
            dz = mx * cy - my * cx
            f0x = -gamma_red * (cx + alpha * dx)
            f0y = -gamma_red * (cy + alpha * dy)
            f0z = -gamma_red * (cz + alpha * dz)
            px = mx + dt * f0x
            py = my + dt * f0y
            pz = mz + dt * f0z
            cx = py * bz - pz * by
            cy = pz * bx - px * bz
            cz = px * by - py * bx
            dx = py * cz - pz * cy
            dy = pz * cx - px * cz
            dz = px * cy - py * cx
            nx = mx + 0.5 * dt * (f0x - gamma_red * (cx + alpha * dx))
            ny = my + 0.5 * dt * (f0y - gamma_red * (cy + alpha * dy))
            nz = mz + 0.5 * dt * (f0z - gamma_red * (cz + alpha * dz))
        inv = 1.0 / math.sqrt(nx * nx + ny * ny + nz * nz)
        mx = nx * inv
        my = ny * inv
        mz = nz * inv
        bz_det = _field_bz(kind, num, den, scale, mz)
        if it >= n_equil:
            sum_z += mz
            sum_z2 += mz * mz
            sum_cross += (1.0 - mz * mz) * bz_det * bz_det
            sum_align += mz * bz_det
    return sum_z, sum_z2, sum_cross, sum_align, n_fallback, mx, my, mz


def run_trajectory(fmodel: FieldModel, params: LlgParams, m0,
                   t_equil: float, t_measure: float, rng) -> TrajectoryStats:
    """Integrate one trajectory: discard t_equil, then accumulate
    every-step m_z statistics over t_measure.

    ``rng`` is an integer seed or a numpy Generator; each trajectory
    should get its own independent stream. Noise is drawn once per step
    and held fixed across the midpoint iteration.
    """
    if t_equil < 0:
        raise ValueError(f"t_equil must be non-negative, got {t_equil}")
    n_meas = int(round(t_measure / params.dt))
    if n_meas < 1:
        raise ValueError(
            f"t_measure must cover at least one step of dt={params.dt}, got {t_measure}")
    n_equil = int(round(t_equil / params.dt))
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    m = np.asarray(m0, dtype=float)
    m = m / np.linalg.norm(m)
    noise = rng.normal(0.0, params.noise_std, (n_equil + n_meas, 3)) \
        if params.noise_std > 0 else np.zeros((n_equil + n_meas, 3))
    table = fmodel.table(params.beta) if params.temperature > 0 \
        else fmodel.table(0.0)
    gamma_red = params.gamma / (1.0 + params.alpha**2)
    sum_z, sum_z2, sum_cross, sum_align, n_fallback, fx, fy, fz = _integrate(
        m[0], m[1], m[2], noise, n_equil, params.dt, gamma_red, params.alpha,
        table.kind, np.ascontiguousarray(table.num, dtype=np.float64),
        np.ascontiguousarray(table.den, dtype=np.float64), table.scale,
        FP_TOL, FP_MAX_ITER)
    if not (math.isfinite(sum_z) and math.isfinite(fx + fy + fz)):
        raise NumericalError("trajectory diverged to non-finite state")
    if n_fallback:
        warnings.warn(f"{n_fallback} of {n_equil + n_meas} steps fell back "
                      "to Heun (midpoint iteration did not converge)",
                      RuntimeWarning, stacklevel=2)
    return TrajectoryStats(
        mean_mz=sum_z / n_meas, mean_mz2=sum_z2 / n_meas, n_samples=n_meas,
        sum_cross=sum_cross, sum_align=sum_align, n_fallback=n_fallback,
        final_m=(fx, fy, fz))
