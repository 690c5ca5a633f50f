"""Thermal expectation values of a single quantum paramagnetic spin via
stochastic unit-moment dynamics under coherent-state effective fields,
validated against exact level-sum cumulants."""

__version__ = "0.1.0"

from .constants import DEFAULT_G, HBAR, K_B, MU_B
from .model import (
    FieldKind,
    FieldModel,
    ModelParams,
    SpinNumber,
    coefficients,
    effective_field,
    exact_effective_energy,
    high_temp_energy_coefficients,
    high_temp_field_coefficients,
    stereographic,
    validity_scale,
    weight_polynomial,
)
from .oracle import (
    classical_reference_mean,
    fluctuation_ratio,
    mean_sz,
    partition_function,
    var_sz,
)
