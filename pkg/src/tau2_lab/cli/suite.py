###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Staged verification pipeline.

Stages run in dependency order and publish their products (tau_2, spectral data, the tower, ...)
for later stages. A stage that raises marks its unfinished checks failed; stages whose inputs are
missing mark their checks skipped. Checks inside a stage are isolated from each other.
"""
from __future__ import annotations

__all__ = (
    'STAGES',
    'Stage',
    'SuiteEvents',
    'SuiteRun',
    'run_suite',
    'settings_path',
    'solve_model',
)

import itertools
import time
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any
from typing import Literal

import numpy as np

from ..clock_algebra import ChainOperators
from ..clock_algebra import algebra_residuals
from ..clock_algebra import build_parafermions
from ..eigenbasis import basis_rank
from ..eigenbasis import build_eigenbasis
from ..eigenbasis import check_AP96
from ..eigenbasis import check_gamma_structure
from ..eigenbasis import diagonalization_residuals
from ..eigenbasis import eigen_relation_residuals
from ..eigenbasis import exchange_ratio
from ..eigenbasis import raising_ladder_residual
from ..eigenbasis import theta_hat_defect
from ..events import Event
from ..events import EventBus
from ..hamiltonians import ClockSpecialParams
from ..hamiltonians import build_H_clock
from ..hamiltonians import build_H_explicit
from ..hamiltonians import build_H_parafermion
from ..hamiltonians import clock_limit
from ..hamiltonians import higher_hamiltonians
from ..hamiltonians import predicted_eigenvalue
from ..hamiltonians import reconstruct_tau_from_tower
from ..hamiltonians import spectrum_determinants
from ..hamiltonians import tower_commutation_residual
from ..numerics import prony_inverse
from ..numerics import relative_residual
from ..projector_engine import build_projectors
from ..projector_engine import check_axioms
from ..projector_engine import check_projector_gammahat
from ..projector_engine import check_projector_tower
from ..projector_engine import projector_traces
from ..projector_engine import reconstruct_hamiltonians
from ..projector_engine import reconstruct_tau
from ..raising_operators import build_gamma_hat
from ..raising_operators import build_hmatrix
from ..raising_operators import char_poly_residual
from ..raising_operators import check_intertwining
from ..raising_operators import check_truncation
from ..raising_operators import eigen_commutator_residuals
from ..raising_operators import gamma1_closed_form
from ..raising_operators import gamma_hat_completeness
from ..raising_operators import gamma_sequence
from ..raising_operators import hmatrix_action_residuals
from ..raising_operators import hmatrix_eigen_residual
from ..tomlfile import TomlFile
from ..tomlfile import load_settings
from ..transfer_matrix import ModelParams
from ..transfer_matrix import build_tau2
from ..transfer_matrix import commuting_residual
from ..transfer_matrix import degree_excess
from ..transfer_matrix import functional_product
from ..transfer_matrix import functional_relation
from ..transfer_matrix import spectral_roots
from ..transfer_matrix import spectrum_of
from ..utils import Lcg
from ..utils import complex_from_pair
from ..utils import complex_to_pair
from .config import RunConfig
from .report import CheckRecord
from .report import VerificationReport


class SuiteEvents:
    """Namespace for all events fired on the ``'suite'`` bus."""

    class SuiteEvent(Event):
        """Generic event of a verification run."""

        __slots__ = ('stage',)

        def __init__(self, stage: str) -> None:
            """Create a new event for the given stage."""
            self.stage: str = stage

    class CheckStarted(SuiteEvent):
        """A check is about to run."""

        __slots__ = ('check',)

        def __init__(self, stage: str, check: str) -> None:
            """Create a new event for the given stage and check name."""
            super().__init__(stage)
            self.check: str = check

    class CheckFinished(SuiteEvent):
        """A check produced its record, including failed and skipped ones."""

        __slots__ = ('record',)

        def __init__(self, stage: str, record: CheckRecord) -> None:
            """Create a new event carrying the finished record."""
            super().__init__(stage)
            self.record: CheckRecord = record

    class StageFailed(SuiteEvent):
        """A stage raised before publishing all of its products."""

        __slots__ = ('exception',)

        def __init__(self, stage: str, exception: Exception) -> None:
            """Create a new event carrying the exception the stage raised."""
            super().__init__(stage)
            self.exception: Exception = exception


def _describe(exception: BaseException) -> str:
    return f'{type(exception).__name__}: {exception}'


CheckResult = float | tuple[float, dict[str, Any]]


class SuiteRun:
    """Mutable state of one pipeline execution: products, resolved tolerances and the report."""

    def __init__(self, cfg: RunConfig, settings: TomlFile | None = None,
                 bus: EventBus | None = None, strict: bool = False) -> None:
        """Prepare a run.

        :param strict: Re-raise stage failures instead of recording them; used when only the products are wanted.
        """
        self.cfg: RunConfig = cfg
        self.settings: TomlFile = settings if settings is not None else load_settings()
        self.bus: EventBus = bus if bus is not None else EventBus.get_or_create('suite')
        self.strict: bool = strict
        self.products: dict[str, Any] = {}
        self.report: VerificationReport = VerificationReport(cfg.echo())
        self.stage: str = ''

        self.tolerances: dict[str, float] = {name: float(value) for name, value in self.settings['tolerances'].items()}
        self.tolerances.update(cfg.tolerances)

    def __repr__(self) -> str:
        return f'<{type(self).__name__} N={self.cfg.N} L={self.cfg.L} stage={self.stage!r}>'

    def __getitem__(self, product: str) -> Any:
        return self.products[product]

    @property
    def params(self) -> ModelParams:
        return self.cfg.params

    def setting(self, key: str) -> Any:
        """Lab setting at a '/' path."""
        return self.settings[key]

    def wanted(self, name: str) -> bool:
        """Whether the run should execute and record check ``name``."""
        if self.strict:
            return False
        if self.cfg.checks is not None and name not in self.cfg.checks:
            return False
        match name:
            case 'exhaustive_build':
                return self.cfg.dim <= self.setting('sampling/exhaustive_max_dim')
            case 'det_oracle':
                return self.cfg.dim <= self.setting('sampling/det_oracle_max_dim')
        return True

    def _finish(self, record: CheckRecord) -> CheckRecord:
        self.report.add(record)
        self.bus << SuiteEvents.CheckFinished(self.stage, record)
        return record

    def _measure(self, name: str, fn: Callable[[], CheckResult]) -> tuple[float, dict[str, Any], float]:
        self.bus << SuiteEvents.CheckStarted(self.stage, name)
        start = time.perf_counter()
        result = fn()
        value, details = result if isinstance(result, tuple) else (result, {})
        return float(value), details, time.perf_counter() - start

    def check(self, name: str, fn: Callable[[], CheckResult],
              bound: Literal['upper', 'lower'] = 'upper') -> CheckRecord | None:
        """Run a thresholded check; exceptions become a failed record."""
        if not self.wanted(name):
            return None
        threshold = self.tolerances[name]
        if name == 'det_oracle':
            threshold = -threshold
        start = time.perf_counter()
        try:
            value, details, seconds = self._measure(name, fn)
        except Exception as e:
            record = CheckRecord(name, self.stage, 'failed', threshold=threshold, bound=bound,
                                 seconds=time.perf_counter() - start, error=_describe(e))
        else:
            record = CheckRecord.judge(name, self.stage, value, threshold, bound, seconds=seconds, details=details)
        return self._finish(record)

    def measure(self, name: str, fn: Callable[[], CheckResult]) -> CheckRecord | None:
        """Run a report-only check; exceptions still fail it."""
        if not self.wanted(name):
            return None
        start = time.perf_counter()
        try:
            value, details, seconds = self._measure(name, fn)
        except Exception as e:
            record = CheckRecord(name, self.stage, 'failed', seconds=time.perf_counter() - start, error=_describe(e))
        else:
            record = CheckRecord(name, self.stage, 'reported', value, seconds=seconds, details=details)
        return self._finish(record)

    def close_stage(self, stage: Stage, status: Literal['failed', 'skipped'], error: str) -> None:
        """Record every wanted check of ``stage`` that has no record yet."""
        for name in stage.checks:
            if self.wanted(name) and name not in self.report:
                self._finish(CheckRecord(name, stage.name, status, error=error))

    def execute(self, until: str | None = None) -> VerificationReport:
        """Run every stage in order, stopping after the stage that provides ``until``."""
        for stage in STAGES:
            self.stage = stage.name
            missing = [product for product in stage.requires if product not in self.products]
            if missing:
                self.close_stage(stage, 'skipped', f'missing {", ".join(missing)}')
            else:
                try:
                    stage.run(self)
                except Exception as e:
                    if self.strict:
                        raise
                    self.bus << SuiteEvents.StageFailed(stage.name, e)
                    self.close_stage(stage, 'failed', _describe(e))
            if until is not None and until in stage.provides:
                break
        return self.report


@dataclass(frozen=True)
class Stage:
    """One step of the pipeline."""

    name: str
    requires: tuple[str, ...]
    provides: tuple[str, ...]
    checks: tuple[str, ...]
    run: Callable[[SuiteRun], None]


def _max_residual(pairs) -> float:
    return max((relative_residual(a, b) for a, b in pairs), default=0.0)


def _algebra(run: SuiteRun) -> None:
    cfg = run.cfg
    ops = ChainOperators(cfg.N, cfg.L)
    psi = build_parafermions(cfg.N, cfg.L, ops)
    run.products.update(ops=ops, psi=psi)

    def algebra():
        residuals = algebra_residuals(ops, psi)
        return max(residuals.values()), residuals

    run.check('algebra', algebra)


def _transfer(run: SuiteRun) -> None:
    params = run.params
    tau = build_tau2(params)
    run.products['tau'] = tau

    def exhaustive():
        full = build_tau2(params, exhaustive=True)
        return _max_residual(zip(full.coeffs, tau.coeffs))

    def boundary():
        shifted = build_tau2(params, boundary_spin=1)
        return _max_residual(zip(shifted.coeffs, tau.coeffs))

    run.check('exhaustive_build', exhaustive)
    run.check('boundary_independence', boundary)
    run.check('degree_bound', lambda: degree_excess(build_tau2(params, trim=False), params.L))


def _commuting(run: SuiteRun) -> None:
    run.check('commuting_family', lambda: commuting_residual(run['tau']))


def _functional(run: SuiteRun) -> None:
    tau = run['tau']
    N = run.cfg.N

    def relation():
        result = functional_relation(tau, N)
        details = {'off_identity': result.off_identity, 'off_period': result.off_period,
                   'degree': result.f.trimmed(1e-12).degree}
        return max(result.off_identity, result.off_period), details

    run.check('functional_relation', relation)
    run.products['f'] = functional_product(tau, N, run.tolerances['functional_relation'])


def _spectrum(run: SuiteRun) -> None:
    cfg = run.cfg
    spec = spectral_roots(run['f'], cfg.params.A0, cfg.N, cfg.L,
                          gap_min=run.setting('numerics/gap_min'),
                          step_tol=run.setting('numerics/root_step_tol'),
                          max_iter=run.setting('numerics/root_max_iter'))
    run.products['spec'] = spec
    run.report.model['spectrum'] = spec.to_json()
    run.check('root_certification', lambda: float(spec.root_residuals.max()))


def _clock_params(cfg: RunConfig) -> ClockSpecialParams:
    """The run's clock couplings, or seeded ones when the model is not a clock chain."""
    if cfg.clock is not None:
        return cfg.clock
    rng = Lcg(cfg.seed)
    return ClockSpecialParams(cfg.N, rng.couplings(cfg.L), rng.couplings(cfg.L - 1))


def _hamiltonians(run: SuiteRun) -> None:
    cfg = run.cfg
    params, ops, psi, tau, spec = cfg.params, run['ops'], run['psi'], run['tau'], run['spec']
    H = build_H_explicit(params, ops)
    run.products['H'] = H

    def forms():
        details = {
            'parafermion': relative_residual(H, build_H_parafermion(params, psi)),
            'transfer_matrix': relative_residual(H, tau[1] / params.A0),
        }
        return max(details.values()), details

    def clock():
        special = _clock_params(cfg)
        return relative_residual(build_H_explicit(clock_limit(special), ops), build_H_clock(special, ops))

    run.check('hamiltonian_forms', forms)
    run.check('clock_limit', clock)

    M = cfg.N * cfg.L + 2
    tower = higher_hamiltonians(tau, M, cfg.L)
    run.products['tower'] = tower

    def order():
        right = higher_hamiltonians(tau, M, cfg.L, order='right')
        return _max_residual((tower[m], right[m]) for m in range(1, M + 1))

    def rebuilt():
        again = reconstruct_tau_from_tower(tower, params.A0, cfg.L)
        return _max_residual((again[m], tau[m]) for m in range(cfg.L + 1))

    def oracle():
        values = spectrum_determinants(H, spec)
        worst = max(values, key=values.get)
        return values[worst], {'worst_tuple': list(worst), 'tuples': len(values)}

    run.check('tower_commutation', lambda: tower_commutation_residual(tower))
    run.check('tower_order', order)
    run.check('tau_from_tower', rebuilt)
    run.check('det_oracle', oracle)


def _gammas(run: SuiteRun) -> None:
    cfg = run.cfg
    N, L = cfg.N, cfg.L
    H, spec = run['H'], run['spec']
    Z1inv = run['ops'].Z_inv(1)
    gs = gamma_sequence(H, Z1inv, N * L + N, N)
    hm = build_hmatrix(spec)
    run.products.update(gs=gs, hm=hm)

    def truncation():
        residuals = check_truncation(gs, spec, range(N + 1))
        return max(residuals.values()), {str(j): value for j, value in residuals.items()}

    def scaled():
        model = cfg.params.scaled(2.0)
        tau_s, spec_s = spectrum_of(model, run.setting('numerics/gap_min'))
        gs_s = gamma_sequence(tau_s[1] / model.A0, Z1inv, N * L + N, N)
        return max(check_truncation(gs_s, spec_s, range(N + 1)).values())

    def char_poly():
        details = {'coefficients': char_poly_residual(hm), 'eigenvalues': hmatrix_eigen_residual(hm, spec)}
        return max(details.values()), details

    run.check('gamma_commutation', gs.commutation_residual)
    run.check('gamma1_closed_form', lambda: relative_residual(gs[1], gamma1_closed_form(cfg.params, run['psi'])))
    run.check('truncation', truncation)
    run.check('truncation_scaled', scaled)
    run.check('hmatrix_action', lambda: max(hmatrix_action_residuals(hm, gs, H)))
    run.check('char_poly', char_poly)


def _prony(run: SuiteRun) -> None:
    vs = prony_inverse(run['spec'].lambdas, run.setting('numerics/gap_min'))
    run.products['vs'] = vs
    run.check('prony', lambda: vs.residual)


def _gamma_hat(run: SuiteRun) -> None:
    gh = build_gamma_hat(run['gs'], run['vs'])
    run.products['gh'] = gh
    run.check('gamma_hat_completeness', lambda: gamma_hat_completeness(gh, run['gs']))
    run.check('eigen_commutator', lambda: max(eigen_commutator_residuals(run['H'], gh)))
    run.check('intertwining', lambda: max(check_intertwining(gh, run['tau'])))


def _projectors(run: SuiteRun) -> None:
    tower, tau, spec, gh = run['tower'], run['tau'], run['spec'], run['gh']
    pf = build_projectors(tower, run['vs'])
    run.products['pf'] = pf

    def axioms():
        residuals = check_axioms(pf)
        return max(residuals.values()), residuals

    def traces():
        residuals = projector_traces(pf)
        return max(residuals.values()), residuals

    def hamiltonians():
        residuals = reconstruct_hamiltonians(pf, tower, spec, range(tower.M + 1))
        return max(residuals.values()), {str(m): value for m, value in residuals.items()}

    run.check('projector_axioms', axioms)
    run.check('projector_trace', traces)
    run.check('projector_tower', lambda: check_projector_tower(pf, tower, tower.M))
    run.check('hamiltonian_reconstruction', hamiltonians)
    run.check('tau_reconstruction', lambda: max(reconstruct_tau(pf, tau, spec)))
    run.check('projector_gamma_hat', lambda: check_projector_gammahat(pf, gh))


def _eigenbasis(run: SuiteRun) -> None:
    cfg = run.cfg
    pf, gh, spec, tau, tower = run['pf'], run['gh'], run['spec'], run['tau'], run['tower']
    basis = build_eigenbasis(pf, gh, spec, cfg.seed, run.setting('sampling/trial_vectors'))
    run.products['basis'] = basis

    def ground():
        zeros = (0,) * cfg.L
        v0 = basis.vector(zeros)
        energy = predicted_eigenvalue(spec, zeros, 1)
        details = {
            'projection': max(float(np.linalg.norm(pf.get(0, k) @ v0 - v0)) for k in range(cfg.L)),
            'energy': relative_residual(tower[1] @ v0, energy * v0),
        }
        return max(details.values()), details

    def relation():
        samples = [complex_from_pair(pair) for pair in run.setting('sampling/eigen_t_samples')]
        return max(eigen_relation_residuals(basis, tau, samples))

    def diagonal():
        residuals = diagonalization_residuals(basis, tower, pf, tau)
        return max(residuals.values()), residuals

    run.check('ground_state', ground)
    run.check('eigen_relation', relation)
    run.check('basis_rank', lambda: basis_rank(basis), bound='lower')
    run.check('diagonalization', diagonal)
    run.check('raising_ladder', lambda: raising_ladder_residual(basis, gh))


def _structure(run: SuiteRun) -> None:
    cfg = run.cfg
    gs, basis = run['gs'], run['basis']
    structure = check_gamma_structure(gs, basis, run['gh'])
    run.check('gamma_structure', lambda: (max(structure['forbidden'], structure['eigen_weights']), structure))
    run.check('gamma_template', lambda: structure['template'])

    ap96 = check_AP96(gs, basis, cfg.seed,
                      exhaustive_max=run.setting('sampling/ap96_exhaustive_max'),
                      samples=run.setting('sampling/ap96_samples'))
    run.check('ap96', lambda: (max(ap96['identity'], ap96['intermediate']), ap96))
    run.check('ap96_ratios', lambda: ap96['ratios'])


def _reports(run: SuiteRun) -> None:
    gh = run['gh']
    N, L = run.cfg.N, run.cfg.L

    def defects():
        results = [theta_hat_defect(gh, k) for k in range(L)]
        details = {'defects': [defect for defect, _ in results],
                   'scalars': [complex_to_pair(c) for _, c in results]}
        return max(details['defects']), details

    def exchange():
        fits = []
        for k, ell in itertools.combinations(range(L), 2):
            for p, q in itertools.product(range(N), repeat=2):
                constant, fit = exchange_ratio(gh, k, ell, p, q)
                fits.append({'k': k, 'l': ell, 'p': p, 'q': q, 'constant': complex_to_pair(constant), 'fit': fit})
        return max((item['fit'] for item in fits), default=0.0), {'fits': fits}

    run.measure('theta_hat_defect', defects)
    run.measure('exchange_ratio', exchange)


STAGES: tuple[Stage, ...] = (
    Stage('algebra', (), ('ops', 'psi'), ('algebra',), _algebra),
    Stage('transfer_matrix', (), ('tau',),
          ('exhaustive_build', 'boundary_independence', 'degree_bound'), _transfer),
    Stage('commuting_family', ('tau',), (), ('commuting_family',), _commuting),
    Stage('functional_relation', ('tau',), ('f',), ('functional_relation',), _functional),
    Stage('spectral_roots', ('f',), ('spec',), ('root_certification',), _spectrum),
    Stage('hamiltonians', ('ops', 'psi', 'tau', 'spec'), ('H', 'tower'),
          ('hamiltonian_forms', 'clock_limit', 'tower_commutation', 'tower_order', 'tau_from_tower', 'det_oracle'),
          _hamiltonians),
    Stage('gamma_sequence', ('ops', 'psi', 'H', 'spec'), ('gs', 'hm'),
          ('gamma_commutation', 'gamma1_closed_form', 'truncation', 'truncation_scaled', 'hmatrix_action',
           'char_poly'),
          _gammas),
    Stage('prony', ('spec',), ('vs',), ('prony',), _prony),
    Stage('gamma_hat', ('gs', 'vs', 'H', 'tau'), ('gh',),
          ('gamma_hat_completeness', 'eigen_commutator', 'intertwining'), _gamma_hat),
    Stage('projectors', ('tower', 'vs', 'tau', 'spec', 'gh'), ('pf',),
          ('projector_axioms', 'projector_trace', 'projector_tower', 'hamiltonian_reconstruction',
           'tau_reconstruction', 'projector_gamma_hat'),
          _projectors),
    Stage('eigenbasis', ('pf', 'gh', 'spec', 'tau', 'tower'), ('basis',),
          ('ground_state', 'eigen_relation', 'basis_rank', 'diagonalization', 'raising_ladder'), _eigenbasis),
    Stage('structure', ('gs', 'basis', 'gh'), (),
          ('gamma_structure', 'gamma_template', 'ap96', 'ap96_ratios'), _structure),
    Stage('reports', ('gh',), (), ('theta_hat_defect', 'exchange_ratio'), _reports),
)
"""Pipeline in dependency order."""


def settings_path(report_path: Path | str) -> Path:
    """Where the effective settings of a saved report are written: ``report.json`` -> ``report.settings.toml``."""
    return Path(report_path).with_suffix('.settings.toml')


def run_suite(cfg: RunConfig, settings: TomlFile | None = None, bus: EventBus | None = None) -> VerificationReport:
    """Run every stage, recording each wanted check exactly once.

    When ``cfg.output`` is set the report is saved there, with the settings the run used beside it.
    """
    run = SuiteRun(cfg, settings, bus)
    report = run.execute()
    if cfg.output is not None:
        report.save(cfg.output)
        run.settings.export_to(settings_path(cfg.output))
    return report


def solve_model(cfg: RunConfig, until: str, settings: TomlFile | None = None) -> dict[str, Any]:
    """Compute pipeline products up to the stage providing ``until``, without running checks.

    :raises LabError: Whatever the failing stage raised.
    """
    run = SuiteRun(cfg, settings, strict=True)
    run.execute(until)
    return run.products
