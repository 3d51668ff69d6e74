###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Verification report: per-check records, the model echo, and text rendering."""
from __future__ import annotations

__all__ = (
    'CheckRecord',
    'CheckStatus',
    'VerificationReport',
    'render_text',
)

import json
import math
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any
from typing import Literal

from ..utils import dump_data

CheckStatus = Literal['passed', 'failed', 'skipped', 'reported']


@dataclass
class CheckRecord:
    """Outcome of one check.

    ``bound`` says whether the residual must stay below (``'upper'``) or above (``'lower'``) the
    threshold. Report-only checks have no threshold and status ``'reported'``.
    """

    name: str
    stage: str
    status: CheckStatus
    residual: float | None = None
    threshold: float | None = None
    bound: Literal['upper', 'lower'] = 'upper'
    seconds: float = 0.0
    error: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in ('passed', 'reported')

    @classmethod
    def judge(cls, name: str, stage: str, residual: float, threshold: float,
              bound: Literal['upper', 'lower'] = 'upper', **kwargs) -> CheckRecord:
        """Build a record whose status compares ``residual`` with ``threshold``; NaN always fails."""
        ok = residual <= threshold if bound == 'upper' else residual >= threshold
        return cls(name, stage, 'passed' if ok and not math.isnan(residual) else 'failed',
                   residual, threshold, bound, **kwargs)

    def to_json(self) -> dict[str, Any]:
        """Dump data into a JSON representation."""
        return {
            'name': self.name,
            'stage': self.stage,
            'status': self.status,
            'pass': self.passed,
            'residual': self.residual,
            'threshold': self.threshold,
            'bound': self.bound,
            'seconds': self.seconds,
            'error': self.error,
            'details': self.details,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> CheckRecord:
        return cls(
            name=data['name'],
            stage=data['stage'],
            status=data['status'],
            residual=data.get('residual'),
            threshold=data.get('threshold'),
            bound=data.get('bound', 'upper'),
            seconds=data.get('seconds', 0.0),
            error=data.get('error'),
            details=data.get('details', {}),
        )


@dataclass
class VerificationReport:
    """Every executed check, in execution order, with the model that was checked."""

    model: dict[str, Any]
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when no check failed or was skipped."""
        return all(record.passed for record in self.checks)

    def __getitem__(self, name: str) -> CheckRecord:
        for record in self.checks:
            if record.name == name:
                return record
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(record.name == name for record in self.checks)

    def add(self, record: CheckRecord) -> None:
        """Append a record.

        :raises ValueError: If a record with the same name already exists.
        """
        if record.name in self:
            raise ValueError(f'check {record.name!r} recorded twice')
        self.checks.append(record)

    def to_json(self) -> dict[str, Any]:
        """Dump data into a JSON representation."""
        return {
            'model': self.model,
            'checks': [record.to_json() for record in self.checks],
            'pass': self.passed,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> VerificationReport:
        return cls(data['model'], [CheckRecord.from_json(item) for item in data['checks']])

    def save(self, path: Path | str) -> None:
        """Write the report as JSON with sorted keys."""
        dump_data(path, self.to_json())

    @classmethod
    def load(cls, path: Path | str) -> VerificationReport:
        return cls.from_json(json.loads(Path(path).read_text(encoding='utf8')))


def _number(value: float | None) -> str:
    return '-' if value is None else f'{value:.3e}'


def render_text(report: VerificationReport) -> str:
    """Render a report as a plain-text table followed by the overall verdict."""
    model = report.model
    lines = [f"tau2-lab report: N={model.get('N')} L={model.get('L')} mode={model.get('mode')} seed={model.get('seed')}"]
    if 'spectrum' in model:
        spectrum = model['spectrum']
        lines.append(f"  A0 = {complex(*spectrum['A0']):.6g}")
        lines.extend(f'  r_{k} = {complex(*pair):.6g}' for k, pair in enumerate(spectrum['r']))
    lines.append('')

    width = max((len(record.name) for record in report.checks), default=10)
    lines.append(f"{'check':<{width}}  {'status':<8}  {'residual':>10}  {'threshold':>10}  seconds")
    for record in report.checks:
        lines.append(f'{record.name:<{width}}  {record.status:<8}  {_number(record.residual):>10}  '
                     f'{_number(record.threshold):>10}  {record.seconds:.3f}')
        if record.error:
            lines.append(f'{"":<{width}}  {record.error}')

    failed = sum(record.status == 'failed' for record in report.checks)
    skipped = sum(record.status == 'skipped' for record in report.checks)
    verdict = 'PASS' if report.passed else f'FAIL ({failed} failed, {skipped} skipped)'
    lines.extend(('', verdict))
    return '\n'.join(lines) + '\n'
