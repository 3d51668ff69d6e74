###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Relative package containing the run configuration, the verification pipeline and its report."""

__all__ = (
    'CheckRecord',
    'MODES',
    'REPORT_ONLY_CHECKS',
    'RunConfig',
    'STAGES',
    'Stage',
    'SuiteEvents',
    'SuiteRun',
    'VerificationReport',
    'known_checks',
    'parse_config',
    'render_text',
    'run_suite',
    'settings_path',
    'solve_model',
)

from .config import MODES
from .config import REPORT_ONLY_CHECKS
from .config import RunConfig
from .config import known_checks
from .config import parse_config
from .report import CheckRecord
from .report import VerificationReport
from .report import render_text
from .suite import STAGES
from .suite import Stage
from .suite import SuiteEvents
from .suite import SuiteRun
from .suite import run_suite
from .suite import settings_path
from .suite import solve_model
