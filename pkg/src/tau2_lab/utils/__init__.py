###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Utility functions for tau2_lab."""
from __future__ import annotations

__all__ = (
    'Lcg',
    'complex_from_pair',
    'complex_to_pair',
    'dump_data',
    'format_tb',
    'get_parent_doc',
    'has_package',
)

from .common import complex_from_pair
from .common import complex_to_pair
from .common import dump_data
from .common import format_tb
from .common import get_parent_doc
from .package import has_package
from .rng import Lcg
