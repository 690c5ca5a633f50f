"""Temperature sweeps: configuration, ensemble averaging, oracle columns,
and CSV/JSON persistence.

A sweep integrates N_s independent noise realisations per temperature,
averages every-step m_z over realisations and time, and attaches the
exact level-sum reference to every row. The reference column
``oracle_mean_sz_over_s`` holds the value the unit-moment average
converges to, <S_z>/(s+1) (see oracle.classical_reference_mean);
``oracle_var_sz`` holds the raw second cumulant of S_z.

Anisotropy and strain are configured in units of g mu_B mu0_H (the
convention of the sweep presets), with absolute-joule overrides.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from . import __version__, oracle
from .constants import K_B, MU_B
from .dynamics import (LlgParams, NumericalError, run_trajectory,
                       spin_temperature_from_sums)
from .model import FieldKind, FieldModel, ModelParams, SpinNumber, validity_scale


class ConfigError(ValueError):
    """Invalid sweep configuration or config file."""


CSV_COLUMNS = ["temperature_K", "mean_mz", "stderr_mz",
               "oracle_mean_sz_over_s", "oracle_var_sz", "spin_temp_K",
               "n_s", "n_t", "model", "two_s"]

_DEFAULT_M0 = (1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0), -1.0 / math.sqrt(3.0))


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to reproduce one sweep.

    ``K`` and ``lambda_sigma`` are in units of g mu_B mu0_H;
    ``K_joules`` / ``lambda_sigma_joules``, when set, override them with
    absolute values. Times are in nanoseconds. ``temperatures`` (explicit
    list, kelvin) overrides the log/linear range fields.
    """

    two_s: int = 2
    g: float = 2.0
    mu0_H: float = 1.0            # tesla
    K: float = 0.0                # units of g mu_B mu0_H
    lambda_sigma: float = 0.0     # units of g mu_B mu0_H
    K_joules: float | None = None
    lambda_sigma_joules: float | None = None
    model: str = "exact"          # classical | hight:N | exact
    temperatures: tuple[float, ...] | None = None
    temp_min: float = 0.1
    temp_max: float = 100.0
    temp_count: int = 60
    temp_spacing: str = "log"     # log | linear
    n_s: int = 20
    t_equil_ns: float = 5.0
    t_measure_ns: float = 15.0
    dt_ns: float = 5e-5
    alpha: float = 0.1
    m0: tuple[float, float, float] = _DEFAULT_M0
    seed: int = 2024
    n_workers: int | None = None

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in cls.__dataclass_fields__.values()}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if "temperatures" in data and data["temperatures"] is not None:
            data["temperatures"] = tuple(float(t) for t in data["temperatures"])
        if "m0" in data:
            data["m0"] = tuple(float(x) for x in data["m0"])
        try:
            cfg = cls(**data)
        except TypeError as err:
            raise ConfigError(str(err)) from err
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path: str) -> "SweepConfig":
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as err:
            raise ConfigError(f"cannot read config {path}: {err}") from err
        except tomllib.TOMLDecodeError as err:
            raise ConfigError(f"cannot parse config {path}: {err}") from err
        return cls.from_dict(data)

    def with_overrides(self, **kwargs) -> "SweepConfig":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        cfg = replace(self, **kwargs)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        out = {}
        for name in self.__dataclass_fields__:
            val = getattr(self, name)
            if isinstance(val, tuple):
                val = list(val)
            out[name] = val
        return out

    # -- validation and derived objects ----------------------------------------

    def validate(self) -> None:
        if self.two_s < 1:
            raise ConfigError(f"two_s must be >= 1, got {self.two_s}")
        if self.n_s < 1:
            raise ConfigError(f"n_s must be >= 1, got {self.n_s}")
        if self.dt_ns <= 0:
            raise ConfigError(f"dt_ns must be positive, got {self.dt_ns}")
        if self.t_equil_ns < 0 or self.t_measure_ns <= 0:
            raise ConfigError("t_equil_ns must be >= 0 and t_measure_ns > 0")
        if self.temp_spacing not in ("log", "linear"):
            raise ConfigError(f"temp_spacing must be log or linear, got {self.temp_spacing!r}")
        temps = self.temperature_grid()
        if len(temps) == 0:
            raise ConfigError("temperature grid is empty")
        if any(t <= 0 for t in temps):
            raise ConfigError("temperatures must be strictly positive")
        norm = math.sqrt(sum(x * x for x in self.m0))
        if not norm > 0 or not math.isfinite(norm):
            raise ConfigError(f"m0 must be a nonzero finite vector, got {self.m0}")
        try:
            self.field_model()
        except ValueError as err:
            raise ConfigError(str(err)) from err

    def temperature_grid(self) -> tuple[float, ...]:
        if self.temperatures is not None:
            return tuple(self.temperatures)
        if self.temp_count < 1:
            raise ConfigError(f"temp_count must be >= 1, got {self.temp_count}")
        if not 0 < self.temp_min <= self.temp_max:
            raise ConfigError("need 0 < temp_min <= temp_max")
        if self.temp_count == 1:
            return (self.temp_min,)
        if self.temp_spacing == "log":
            grid = np.geomspace(self.temp_min, self.temp_max, self.temp_count)
        else:
            grid = np.linspace(self.temp_min, self.temp_max, self.temp_count)
        return tuple(float(t) for t in grid)

    def spin(self) -> SpinNumber:
        return SpinNumber(self.two_s)

    def params(self) -> ModelParams:
        unit = self.g * MU_B * self.mu0_H
        k = self.K_joules if self.K_joules is not None else self.K * unit
        lam = (self.lambda_sigma_joules if self.lambda_sigma_joules is not None
               else self.lambda_sigma * unit)
        return ModelParams(g=self.g, mu0_H=self.mu0_H, K=k, lambda_sigma=lam)

    def field_model(self) -> FieldModel:
        return FieldModel.from_name(self.model, self.spin(), self.params())

    def m0_unit(self) -> tuple[float, float, float]:
        norm = math.sqrt(sum(x * x for x in self.m0))
        return tuple(x / norm for x in self.m0)


@dataclass(frozen=True)
class SweepPoint:
    """One CSV row; see CSV_COLUMNS for the serialised order."""

    temperature_K: float
    mean_mz: float
    stderr_mz: float
    oracle_mean_sz_over_s: float
    oracle_var_sz: float
    spin_temp_K: float
    n_s: int
    n_t: int
    model: str
    two_s: int


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]
    config: dict
    version: str = __version__
    wall_time_s: float = 0.0


def _oracle_columns(spin: SpinNumber, params: ModelParams, temperature: float):
    beta = 1.0 / (K_B * temperature)
    return (oracle.classical_reference_mean(spin, params, beta),
            oracle.var_sz(spin, params, beta))


def ensemble_average(config: SweepConfig, temperature: float,
                     fmodel: FieldModel | None = None,
                     stream_index: int = 0) -> SweepPoint:
    """Ensemble statistics at one temperature.

    <m_z> is the grand mean over N_s realisations of the per-realisation
    time averages (all realisations share n_t, so this equals the flat
    double average); the standard error comes from the scatter of the
    per-realisation means. Each realisation gets the independent stream
    seeded by (seed, stream_index, realisation).
    """
    if temperature <= 0:
        raise ConfigError(f"temperature must be positive, got {temperature}")
    spin = config.spin()
    params = config.params()
    if fmodel is None:
        fmodel = config.field_model()
    llg = LlgParams.for_model(spin, params, dt=config.dt_ns * 1e-9,
                              temperature=temperature, alpha=config.alpha)
    m0 = config.m0_unit()
    t_eq = config.t_equil_ns * 1e-9
    t_me = config.t_measure_ns * 1e-9

    def one(i: int):
        rng = np.random.default_rng([config.seed, stream_index, i])
        return run_trajectory(fmodel, llg, m0, t_eq, t_me, rng)

    workers = config.n_workers or min(config.n_s, os.cpu_count() or 1)
    try:
        if workers > 1 and config.n_s > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                stats = list(pool.map(one, range(config.n_s)))
        else:
            stats = [one(i) for i in range(config.n_s)]
    except NumericalError as err:
        raise NumericalError(
            f"trajectory failed at T = {temperature} K ({fmodel.label}, "
            f"two_s = {config.two_s}): {err}") from err

    means = np.array([st.mean_mz for st in stats])
    mean = float(means.mean())
    stderr = float(means.std(ddof=1) / math.sqrt(config.n_s)) if config.n_s > 1 else 0.0
    sum_cross = sum(st.sum_cross for st in stats)
    sum_align = sum(st.sum_align for st in stats)
    try:
        t_spin = spin_temperature_from_sums(sum_cross, sum_align, llg.mu_s)
    except ValueError:
        t_spin = float("nan")
    o_mean, o_var = _oracle_columns(spin, params, temperature)
    return SweepPoint(temperature_K=temperature, mean_mz=mean,
                      stderr_mz=stderr, oracle_mean_sz_over_s=o_mean,
                      oracle_var_sz=o_var, spin_temp_K=t_spin,
                      n_s=config.n_s, n_t=stats[0].n_samples,
                      model=fmodel.label, two_s=config.two_s)


def run_sweep(config: SweepConfig) -> SweepResult:
    """Dynamics plus oracle columns over the configured temperature grid."""
    config.validate()
    t0 = time.perf_counter()
    spin = config.spin()
    params = config.params()
    fmodel = config.field_model()
    temps = config.temperature_grid()
    if fmodel.kind is FieldKind.HIGH_T:
        t_star = validity_scale(spin, params)
        low = [t for t in temps if t < t_star]
        if low:
            warnings.warn(
                f"{len(low)} temperature(s) below the high-T validity scale "
                f"{t_star:.3g} K (down to {min(low):.3g} K); truncated-field "
                "results degrade there", UserWarning, stacklevel=2)
    points = [ensemble_average(config, t, fmodel=fmodel, stream_index=idx)
              for idx, t in enumerate(temps)]
    return SweepResult(points=tuple(points), config=config.to_dict(),
                       wall_time_s=time.perf_counter() - t0)


def oracle_sweep(config: SweepConfig) -> SweepResult:
    """Reference columns only, no dynamics; deterministic and seed-free."""
    config.validate()
    t0 = time.perf_counter()
    spin = config.spin()
    params = config.params()
    nan = float("nan")
    points = []
    for t in config.temperature_grid():
        o_mean, o_var = _oracle_columns(spin, params, t)
        points.append(SweepPoint(
            temperature_K=t, mean_mz=nan, stderr_mz=nan,
            oracle_mean_sz_over_s=o_mean, oracle_var_sz=o_var,
            spin_temp_K=nan, n_s=0, n_t=0, model="oracle",
            two_s=config.two_s))
    return SweepResult(points=tuple(points), config=config.to_dict(),
                       wall_time_s=time.perf_counter() - t0)


# --------------------------------------------------------------------------
# Persistence
# --------------------------------------------------------------------------

def _cell(value):
    if isinstance(value, float) and math.isnan(value):
        return ""
    return value


def emit(result: SweepResult, path: str, fmt: str = "csv") -> None:
    """Write a sweep result; CSV columns are exactly CSV_COLUMNS, JSON
    mirrors them and adds the full config and metadata."""
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    try:
        if fmt == "csv":
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_COLUMNS)
                for pt in result.points:
                    writer.writerow([_cell(getattr(pt, c)) for c in CSV_COLUMNS])
        else:
            payload = {
                "config": result.config,
                "metadata": {"version": result.version,
                             "wall_time_s": result.wall_time_s},
                "rows": [{c: (None if isinstance(getattr(pt, c), float)
                              and math.isnan(getattr(pt, c))
                              else getattr(pt, c)) for c in CSV_COLUMNS}
                         for pt in result.points],
            }
            with open(path, "w") as fh:
                json.dump(payload, fh, indent=1)
                fh.write("\n")
    except OSError as err:
        raise ConfigError(f"cannot write {path}: {err}") from err


def load_result(path: str) -> SweepResult:
    """Load a JSON result written by emit; the config round-trips exactly."""
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err}") from err
    points = []
    for row in payload["rows"]:
        row = {k: (float("nan") if v is None else v) for k, v in row.items()}
        points.append(SweepPoint(**row))
    cfg = payload["config"]
    for key in ("temperatures", "m0"):
        if cfg.get(key) is not None:
            cfg[key] = tuple(cfg[key])
    cfg = SweepConfig.from_dict(cfg).to_dict()
    return SweepResult(points=tuple(points), config=cfg,
                       version=payload["metadata"]["version"],
                       wall_time_s=payload["metadata"]["wall_time_s"])
