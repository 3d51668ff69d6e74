###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Numerical verification laboratory for the open-boundary tau_2(t) model and its free parafermions."""
from ._version import __version__
from ._version import __version_info__

__author__ = 'tau2-lab contributors'
"""Author's information."""
