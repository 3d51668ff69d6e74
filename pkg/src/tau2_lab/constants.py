###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Neutral namespace for constants. Meant to be star imported."""
from __future__ import annotations

__all__ = (
    'DET_ORACLE_MARGIN',
    'DURAND_KERNER_MAX_ITER',
    'DURAND_KERNER_STEP_TOL',
    'EXIT_CHECK_FAILED',
    'EXIT_CONFIG_ERROR',
    'EXIT_OK',
    'GAP_MIN_REL',
    'LCG_INCREMENT',
    'LCG_MULTIPLIER',
    'MAX_STATE_DIM',
    'PRONY_TOL',
    'ROOT_RESIDUAL_TOL',
    'TAU_CONFIG_PATH',
    'TAU_PACKAGE_NAME',
    'TAU_RESOURCE_PATH',
    'TAU_SETTINGS_ENV',
    'UNDERFLOW_GUARD',
    'ZERO_NORM_TOL',
    'ZERO_ROOT_TOL',
)

from pathlib import Path
from typing import Final

# Numerics

DURAND_KERNER_STEP_TOL: Final[float] = 1e-13
"""Relative step size below which the simultaneous root iteration is converged."""

DURAND_KERNER_MAX_ITER: Final[int] = 1000
"""Iteration cap for the simultaneous root iteration."""

ROOT_RESIDUAL_TOL: Final[float] = 1e-10
"""Advisory bound on |p(root)| relative to the largest coefficient."""

GAP_MIN_REL: Final[float] = 1e-6
"""Minimum pairwise distance between spectral values, relative to the largest modulus."""

PRONY_TOL: Final[float] = 1e-9
"""Bound on the max-entry error of Vandermonde x inverse."""

UNDERFLOW_GUARD: Final[float] = 1e-300
"""Magnitudes below this are treated as exact zeros when dividing."""

ZERO_NORM_TOL: Final[float] = 1e-8
"""Vectors with norm below this (before normalization) are considered annihilated."""

ZERO_ROOT_TOL: Final[float] = 1e-12
"""|s_L| below this fraction of max|s| means some mode parameter r_k vanishes."""

DET_ORACLE_MARGIN: Final[float] = 18.0
"""Natural-log margin of the determinant oracle: log|det(H - E)| <= dim*log||H|| - margin."""

MAX_STATE_DIM: Final[int] = 4096
"""Largest N**L accepted by the run configuration."""

# Pseudo-random generator.
# Knuth's MMIX constants, reduced modulo 2**64; the top 53 bits form a double in [0, 1).

LCG_MULTIPLIER: Final[int] = 6364136223846793005
"""Multiplier of the 64-bit linear congruential generator."""

LCG_INCREMENT: Final[int] = 1442695040888963407
"""Increment of the 64-bit linear congruential generator."""

# Process exit codes

EXIT_OK: Final[int] = 0
EXIT_CHECK_FAILED: Final[int] = 1
EXIT_CONFIG_ERROR: Final[int] = 2

# Strings

TAU_PACKAGE_NAME: Final[str] = __package__.split('.', maxsplit=1)[0]
"""The base package name, for use in sub-packages."""

TAU_SETTINGS_ENV: Final[str] = 'TAU2_LAB_SETTINGS'
"""Environment variable that may point at an alternative settings file."""

# Paths

TAU_CONFIG_PATH: Final[Path] = Path.home() / '.config/tau2_lab'
"""Directory containing user configuration data."""

TAU_RESOURCE_PATH: Final[Path] = Path(__file__).parent / 'resources'
"""Directory containing packaged resources."""
