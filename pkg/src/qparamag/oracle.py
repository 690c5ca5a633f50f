"""Exact thermal cumulants of S_z from the standard-basis partition function.

The Hamiltonian is diagonal in the standard spin basis, so every thermal
quantity is a finite sum over the 2s+1 levels m = s - p, p = 0..2s.
Gibbs weights are computed with the maximum exponent subtracted, so
arbitrarily low temperatures never overflow (beta*(A1 s + A2 s^2) can
exceed 700 natural-log units well above machine limits otherwise).

These sums are the ground truth every dynamics result is validated
against. The unit-moment average produced by the stochastic dynamics
converges to mean_sz / (s + 1), exposed here as classical_reference_mean;
see that function's docstring for why.
"""

from __future__ import annotations

import numpy as np

from .model import ModelParams, SpinNumber


def _level_m_and_logw(spin: SpinNumber, params: ModelParams, beta: float):
    """Level values m = s - p and shifted log-weights beta*(A0+A1 m+A2 m^2)."""
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    p = np.arange(spin.two_s + 1, dtype=float)
    m = spin.s - p
    logw = beta * (params.A0 + params.A1 * m + params.A2 * m * m)
    return m, logw - np.max(logw)


def partition_function(spin: SpinNumber, params: ModelParams, beta: float) -> float:
    """Z = sum_m exp(beta (A0 + A1 m + A2 m^2)) without the max-exponent
    shift applied, i.e. the literal partition sum (may overflow for
    extreme beta; the cumulants below never do)."""
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    p = np.arange(spin.two_s + 1, dtype=float)
    m = spin.s - p
    return float(np.sum(np.exp(beta * (params.A0 + params.A1 * m
                                       + params.A2 * m * m))))


def mean_sz(spin: SpinNumber, params: ModelParams, beta: float) -> float:
    """First moment <S_z> in units of hbar."""
    m, logw = _level_m_and_logw(spin, params, beta)
    w = np.exp(logw)
    return float(np.sum(m * w) / np.sum(w))


def var_sz(spin: SpinNumber, params: ModelParams, beta: float) -> float:
    """Second cumulant <S_z^2> - <S_z>^2."""
    m, logw = _level_m_and_logw(spin, params, beta)
    w = np.exp(logw)
    z = np.sum(w)
    first = np.sum(m * w) / z
    second = np.sum(m * m * w) / z
    return float(second - first * first)


def fluctuation_ratio(spin: SpinNumber, params: ModelParams, beta: float) -> float:
    """sqrt(var_sz) / mean_sz; undefined (raises) when the mean vanishes,
    e.g. at beta = 0."""
    mean = mean_sz(spin, params, beta)
    if abs(mean) < 1e-300:
        raise ValueError("fluctuation ratio undefined: <S_z> vanishes")
    return var_sz(spin, params, beta) ** 0.5 / mean


def classical_reference_mean(spin: SpinNumber, params: ModelParams,
                             beta: float) -> float:
    """The unit-moment average the stochastic dynamics converges to.

    The simulation samples the coherent-state (Husimi) Gibbs weight on the
    sphere, and for spin coherent states the sphere average of u_z against
    any state's Husimi function equals <S_z> / (s + 1) exactly (S_z has
    the lower-symbol (s+1) u_z). The same normalisation makes the
    classical limit reproduce the quantum Curie law at high temperature:
    <S_z>/(s+1) -> beta A1 s / 3, which is the Langevin-regime average of
    a classical moment mu_s = g mu_B s.
    """
    return mean_sz(spin, params, beta) / (spin.s + 1.0)
