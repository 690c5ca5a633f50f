"""Fast self-checks behind ``qparamag validate``.

Each check exercises one contract the test suite also covers, at reduced
cost: series round-trips, closed-form coefficient identities, field
versus finite differences, integrator conservation laws, noise
statistics, and seed determinism. Returns (name, passed, detail) tuples;
the CLI maps any failure to exit code 2.
"""

from __future__ import annotations

import math

import numpy as np

from . import oracle, series
from .constants import K_B, MU_B
from .dynamics import LlgParams, MomentState, llg_step, run_trajectory
from .model import (FieldModel, ModelParams, SpinNumber, classical_field,
                    exact_effective_energy, exact_log_field,
                    high_temp_energy_coefficients,
                    high_temp_field_coefficients)


def _check(name, passed, detail=""):
    return (name, bool(passed), detail)


def _series_roundtrip():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(20):
        c = rng.normal(size=6)
        c[0] = 0.0
        a = series.TruncatedSeries(c)
        back = series.log(series.exp(a))
        worst = max(worst, float(np.max(np.abs(back.coeffs - a.coeffs))))
    return _check("series log(exp(a)) == a", worst < 1e-12, f"max err {worst:.2e}")


def _series_homomorphism():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(20):
        ca, cb = rng.normal(size=6), rng.normal(size=6)
        ca[0] = cb[0] = 0.0
        a, b = series.TruncatedSeries(ca), series.TruncatedSeries(cb)
        lhs = series.exp(a + b)
        rhs = series.exp(a) * series.exp(b)
        worst = max(worst, float(np.max(np.abs(lhs.coeffs - rhs.coeffs))))
    return _check("series exp(a+b) == exp(a) exp(b)", worst < 1e-12,
                  f"max err {worst:.2e}")


def _leading_energy_coefficient():
    g = 2.0
    pr = ModelParams(g=g, mu0_H=1.0, K=-2 * g * MU_B, lambda_sigma=0.0)
    u = np.linspace(-1.0, 1.0, 21)
    worst = 0.0
    for two_s in (1, 2, 3, 4):
        sp = SpinNumber(two_s)
        h0 = high_temp_energy_coefficients(sp, pr, 1, u)[0]
        ref = pr.A1 * sp.s * (1 - u) + pr.A2 * sp.s * (two_s - 1) / 2 * (1 - u * u)
        worst = max(worst, float(np.max(np.abs(h0 - ref))) / abs(pr.A1))
    return _check("beta^0 energy equals closed form (2s = 1..4)",
                  worst < 1e-10, f"max rel err {worst:.2e}")


def _fields_vs_finite_differences():
    g = 2.0
    pr = ModelParams(g=g, mu0_H=1.0, K=-1.5 * g * MU_B, lambda_sigma=0.2 * g * MU_B)
    h = 1e-5
    worst = 0.0
    for sp, fm, beta in ((SpinNumber(3), FieldModel.high_t(SpinNumber(3), pr, 2),
                          1.0 / (K_B * 4.0)),
                         (SpinNumber(2), FieldModel.exact_log(SpinNumber(2), pr),
                          1.0 / (K_B * 1.5))):
        for u in np.linspace(-0.9, 0.9, 13):
            if fm.kind.value == "hight":
                e_hi = sum(beta**j * c for j, c in enumerate(
                    high_temp_energy_coefficients(sp, pr, fm.order, u + h)))
                e_lo = sum(beta**j * c for j, c in enumerate(
                    high_temp_energy_coefficients(sp, pr, fm.order, u - h)))
            else:
                e_hi = exact_effective_energy(sp, pr, beta, u + h)
                e_lo = exact_effective_energy(sp, pr, beta, u - h)
            ref = -(e_hi - e_lo) / (2 * h) / (pr.g * MU_B * sp.s)
            got = fm.field(beta, u)
            worst = max(worst, abs(got - ref) / max(abs(ref), 1e-6))
    return _check("fields match central differences", worst < 1e-6,
                  f"max rel err {worst:.2e}")


def _oracle_closed_form():
    sp = SpinNumber(1)
    worst = 0.0
    for k_rel in (0.0, 5.0, -5.0):
        pr = ModelParams(g=2.0, mu0_H=1.0, K=k_rel * 2 * MU_B)
        for t in np.geomspace(0.05, 50.0, 12):
            beta = 1.0 / (K_B * t)
            ref = 0.5 * math.tanh(beta * pr.A1 / 2)
            worst = max(worst, abs(oracle.mean_sz(sp, pr, beta) - ref))
    return _check("oracle mean matches tanh closed form (s = 1/2)",
                  worst < 1e-12, f"max err {worst:.2e}")


def _norm_and_uz_conservation():
    pr = ModelParams(g=2.0, mu0_H=1.0)
    lp = LlgParams(alpha=0.0, gamma=2 * MU_B / 1.054571817e-34, mu_s=MU_B,
                   dt=5e-14, temperature=0.0)
    st = MomentState((math.sqrt(1 - 0.49), 0.0, 0.7))
    uz0 = st.m[2]
    worst_norm = 0.0
    for _ in range(2000):
        st = llg_step(st, (0.0, 0.0, 1.0), lp)
        worst_norm = max(worst_norm, abs(sum(x * x for x in st.m) - 1.0))
    drift = abs(st.m[2] - uz0)
    return _check("pure precession conserves |m| and u_z",
                  worst_norm < 1e-12 and drift < 1e-10,
                  f"norm err {worst_norm:.2e}, u_z drift {drift:.2e}")


def _noise_variance():
    sp = SpinNumber(1)
    pr = ModelParams(g=2.0, mu0_H=1.0)
    lp = LlgParams.for_model(sp, pr, dt=5e-14, temperature=1.0, alpha=0.1)
    rng = np.random.default_rng(5)
    samples = rng.normal(0.0, lp.noise_std, (200_000, 3))
    rel = abs(samples.var() - lp.noise_std**2) / lp.noise_std**2
    return _check("noise variance matches 2 alpha k_B T / (mu_s gamma dt)",
                  rel < 0.015, f"rel err {rel:.3%}")


def _determinism():
    sp = SpinNumber(2)
    pr = ModelParams(g=2.0, mu0_H=1.0, K=-2 * 2 * MU_B)
    fm = FieldModel.exact_log(sp, pr)
    lp = LlgParams.for_model(sp, pr, dt=5e-14, temperature=2.0, alpha=0.1)
    a = run_trajectory(fm, lp, (1, 1, -1), 1e-10, 5e-10,
                       np.random.default_rng([9, 0]))
    b = run_trajectory(fm, lp, (1, 1, -1), 1e-10, 5e-10,
                       np.random.default_rng([9, 0]))
    same = (a.mean_mz == b.mean_mz and a.mean_mz2 == b.mean_mz2
            and a.final_m == b.final_m)
    return _check("identical seed gives bit-identical statistics", same,
                  f"mean_mz {a.mean_mz!r} vs {b.mean_mz!r}")


def run_validation():
    """Run every invariant check; returns a list of (name, ok, detail)."""
    return [fn() for fn in (_series_roundtrip, _series_homomorphism,
                            _leading_energy_coefficient,
                            _fields_vs_finite_differences,
                            _oracle_closed_form, _norm_and_uz_conservation,
                            _noise_variance, _determinism)]
