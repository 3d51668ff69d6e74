###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Run configuration: JSON documents describing the model and the checks to execute."""
from __future__ import annotations

__all__ = (
    'MODES',
    'REPORT_ONLY_CHECKS',
    'RunConfig',
    'known_checks',
    'parse_config',
)

import json
from collections.abc import Collection
from collections.abc import Mapping
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from pathlib import Path
from typing import Any
from typing import Final

import numpy as np

from ..constants import *
from ..exception_hook import ConfigError
from ..exception_hook import SizeError
from ..hamiltonians import ClockSpecialParams
from ..hamiltonians import clock_limit
from ..tomlfile import TomlFile
from ..tomlfile import load_settings
from ..transfer_matrix import COUPLING_NAMES
from ..transfer_matrix import ModelParams
from ..utils import Lcg
from ..utils import complex_from_pair

MODES: Final[tuple[str, ...]] = ('explicit', 'random', 'clock')

REPORT_ONLY_CHECKS: Final[tuple[str, ...]] = ('theta_hat_defect', 'exchange_ratio')
"""Checks that record a measurement without a threshold."""


def known_checks(settings: TomlFile) -> frozenset[str]:
    """Every check name: the tolerance keys of the lab settings plus the report-only checks."""
    return frozenset(settings.get('tolerances', {})) | frozenset(REPORT_ONLY_CHECKS)


@dataclass(frozen=True, eq=False)
class RunConfig:
    """A validated run configuration.

    ``params`` always holds the full model; in clock mode it is derived from ``clock``.
    """

    N: int
    L: int
    mode: str
    seed: int
    params: ModelParams
    clock: ClockSpecialParams | None = None
    tolerances: dict[str, float] = field(default_factory=dict)
    checks: tuple[str, ...] | None = None
    output: Path | None = None

    @property
    def dim(self) -> int:
        return self.N ** self.L

    def with_overrides(self, tolerances: Mapping[str, float] | None = None,
                       checks: Collection[str] | None = None,
                       output: Path | str | None = None) -> RunConfig:
        """Return a copy with command-line overrides applied on top of the document."""
        merged = dict(self.tolerances)
        merged.update(tolerances or {})
        return replace(
            self,
            tolerances=merged,
            checks=tuple(checks) if checks is not None else self.checks,
            output=Path(output) if output is not None else self.output,
        )

    def echo(self) -> dict[str, Any]:
        """Model description for the report header."""
        data: dict[str, Any] = {'N': self.N, 'L': self.L, 'mode': self.mode, 'seed': self.seed}
        data['couplings'] = {name: value for name, value in self.params.to_json().items() if name in COUPLING_NAMES}
        if self.clock is not None:
            data['clock'] = self.clock.to_json()
        return data


def _require(doc: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in doc:
        raise ConfigError(path, 'missing')
    return doc[key]


def _integer(value: Any, path: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f'expected an integer, got {value!r}')
    if value < minimum:
        raise ConfigError(path, f'must be >= {minimum}, got {value}')
    return value


def _pairs(value: Any, path: str, length: int) -> np.ndarray:
    """Parse a list of ``length`` [re, im] pairs."""
    if not isinstance(value, list):
        raise ConfigError(path, 'expected a list of [re, im] pairs')
    if len(value) != length:
        raise ConfigError(path, f'expected {length} entries, got {len(value)}')
    result = np.empty(length, dtype=complex)
    for i, pair in enumerate(value):
        try:
            result[i] = complex_from_pair(pair)
        except (TypeError, ValueError) as e:
            raise ConfigError(f'{path}[{i}]', str(e)) from e
    return result


def _tolerances(value: Any, known: Collection[str]) -> dict[str, float]:
    if not isinstance(value, dict):
        raise ConfigError('tolerances', 'expected an object of check name to number')
    result = {}
    for name, tol in value.items():
        path = f'tolerances.{name}'
        if name not in known:
            raise ConfigError(path, 'unknown check')
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not np.isfinite(tol):
            raise ConfigError(path, f'expected a finite number, got {tol!r}')
        result[name] = float(tol)
    return result


def _checks(value: Any, known: Collection[str]) -> tuple[str, ...]:
    if not isinstance(value, list):
        raise ConfigError('checks', 'expected a list of check names')
    for i, name in enumerate(value):
        if name not in known:
            raise ConfigError(f'checks[{i}]', f'unknown check {name!r}')
    return tuple(dict.fromkeys(value))


def parse_config(text: str | bytes, settings: TomlFile | None = None) -> RunConfig:
    """Validate a JSON run configuration.

    Random mode draws a, b, c, d (2L couplings each) from :py:class:`Lcg` seeded with ``seed``.

    :param text: UTF-8 JSON document.
    :param settings: Lab settings naming the valid checks; the packaged defaults when None.
    :raises ConfigError: With the dotted path of the offending field.
    :raises SizeError: If N**L exceeds the supported dimension.
    :raises InvalidParams: If explicit couplings are well-formed but not a valid model.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode('utf8')
        except UnicodeDecodeError as e:
            raise ConfigError('<document>', 'not UTF-8') from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError('<document>', f'invalid JSON: {e}') from e
    if not isinstance(doc, dict):
        raise ConfigError('<document>', 'expected a JSON object')

    known = known_checks(settings if settings is not None else load_settings())

    N = _integer(_require(doc, 'N', 'N'), 'N', 2)
    L = _integer(_require(doc, 'L', 'L'), 'L', 1)
    if N ** L > MAX_STATE_DIM:
        raise SizeError(f'N**L = {N ** L} exceeds {MAX_STATE_DIM}')

    mode = doc.get('mode', 'random')
    if mode not in MODES:
        raise ConfigError('mode', f'expected one of {", ".join(MODES)}, got {mode!r}')
    seed = _integer(doc.get('seed', 1), 'seed', 0)

    clock = None
    match mode:
        case 'explicit':
            couplings = _require(doc, 'couplings', 'couplings')
            if not isinstance(couplings, dict):
                raise ConfigError('couplings', 'expected an object with arrays a, b, c, d')
            arrays = {
                name: _pairs(_require(couplings, name, f'couplings.{name}'), f'couplings.{name}', 2 * L)
                for name in COUPLING_NAMES
            }
            params = ModelParams(N, L, **arrays)
        case 'clock':
            block = _require(doc, 'clock', 'clock')
            if not isinstance(block, dict):
                raise ConfigError('clock', 'expected an object with arrays alpha, gamma')
            alpha = _pairs(_require(block, 'alpha', 'clock.alpha'), 'clock.alpha', L)
            gamma = _pairs(block.get('gamma', []), 'clock.gamma', L - 1)
            clock = ClockSpecialParams(N, alpha, gamma)
            params = clock_limit(clock)
        case _:
            params = ModelParams.random(N, L, Lcg(seed))

    tolerances = _tolerances(doc.get('tolerances', {}), known)
    checks = _checks(doc['checks'], known) if doc.get('checks') is not None else None

    output = doc.get('output')
    if output is not None and not isinstance(output, str):
        raise ConfigError('output', 'expected a path string')

    return RunConfig(
        N=N, L=L, mode=mode, seed=seed, params=params, clock=clock,
        tolerances=tolerances, checks=checks,
        output=Path(output) if output is not None else None,
    )
