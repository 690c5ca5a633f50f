"""Physical constants (SI, CODATA 2018) used throughout the package."""

MU_B = 9.2740100783e-24  # Bohr magneton, J/T
K_B = 1.380649e-23       # Boltzmann constant, J/K
HBAR = 1.054571817e-34   # reduced Planck constant, J s

DEFAULT_G = 2.0          # Lande g-factor default
