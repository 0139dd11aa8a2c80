"""Linear growth-rate spectrum of two superposed viscous fluid layers."""

from ._core import (
    FluidConfig,
    NotUnstableError,
    RtspecConfigError,
    RtspecError,
    classify_regime,
    dispersion,
    growth_rate,
    jump_density,
    lambda_ceiling,
    lambda_proof_bound,
    lattice_frequencies,
    mode_fields,
    sharp_rate,
    sigma_critical,
    solve_alpha,
    xi_critical,
)

__all__ = [
    "FluidConfig",
    "NotUnstableError",
    "RtspecConfigError",
    "RtspecError",
    "classify_regime",
    "dispersion",
    "growth_rate",
    "jump_density",
    "lambda_ceiling",
    "lambda_proof_bound",
    "lattice_frequencies",
    "mode_fields",
    "sharp_rate",
    "sigma_critical",
    "solve_alpha",
    "xi_critical",
]
