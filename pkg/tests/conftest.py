###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Shared fixtures: seeded models and every object derived from them, built once per (N, L, seed)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Any

import numpy as np
import pytest

from tau2_lab.clock_algebra import ChainOperators
from tau2_lab.clock_algebra import ParafermionSet
from tau2_lab.clock_algebra import build_parafermions
from tau2_lab.eigenbasis import Eigenbasis
from tau2_lab.eigenbasis import build_eigenbasis
from tau2_lab.events import EventBus
from tau2_lab.hamiltonians import ClockSpecialParams
from tau2_lab.hamiltonians import HamiltonianTower
from tau2_lab.hamiltonians import build_H_explicit
from tau2_lab.hamiltonians import clock_limit
from tau2_lab.hamiltonians import higher_hamiltonians
from tau2_lab.numerics import MatrixPolynomial
from tau2_lab.numerics import VandermondeSystem
from tau2_lab.numerics import prony_inverse
from tau2_lab.projector_engine import ProjectorFamily
from tau2_lab.projector_engine import build_projectors
from tau2_lab.raising_operators import GammaSequence
from tau2_lab.raising_operators import HattedGammas
from tau2_lab.raising_operators import build_gamma_hat
from tau2_lab.raising_operators import gamma_sequence
from tau2_lab.transfer_matrix import ModelParams
from tau2_lab.transfer_matrix import SpectralData
from tau2_lab.transfer_matrix import spectrum_of
from tau2_lab.utils import Lcg

GRID = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 2)]
"""(N, L) pairs every shared-chain test runs on."""

SEEDS = [1, 42]

GRID_POINTS = [(N, L, seed) for N, L in GRID for seed in SEEDS]


@dataclass(frozen=True, eq=False)
class Chain:
    """Everything the pipeline derives from one model."""

    params: ModelParams
    ops: ChainOperators
    psi: ParafermionSet
    tau: MatrixPolynomial
    spec: SpectralData
    H: np.ndarray
    tower: HamiltonianTower
    gs: GammaSequence
    vs: VandermondeSystem
    gh: HattedGammas
    pf: ProjectorFamily
    basis: Eigenbasis

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def L(self) -> int:
        return self.params.L


def derive(params: ModelParams, seed: int = 1) -> Chain:
    """Run the pipeline on ``params`` without checks."""
    N, L = params.N, params.L
    ops = ChainOperators(N, L)
    psi = build_parafermions(N, L, ops)
    tau, spec = spectrum_of(params)
    H = build_H_explicit(params, ops)
    tower = higher_hamiltonians(tau, N * L + 2, L)
    gs = gamma_sequence(H, ops.Z_inv(1), N * L + N, N)
    vs = prony_inverse(spec.lambdas)
    gh = build_gamma_hat(gs, vs)
    pf = build_projectors(tower, vs)
    basis = build_eigenbasis(pf, gh, spec, seed)
    return Chain(params, ops, psi, tau, spec, H, tower, gs, vs, gh, pf, basis)


@cache
def random_chain(N: int, L: int, seed: int) -> Chain:
    return derive(ModelParams.random(N, L, Lcg(seed)), seed)


@cache
def clock_chain(N: int, alpha: tuple[complex, ...], gamma: tuple[complex, ...]) -> Chain:
    return derive(clock_limit(ClockSpecialParams(N, np.array(alpha), np.array(gamma))))


def _grid_id(point: tuple[int, int, int]) -> str:
    return 'N{}L{}-seed{}'.format(*point)


@pytest.fixture(params=GRID_POINTS, ids=_grid_id)
def grid_point(request: Any) -> tuple[int, int, int]:
    """(N, L, seed) over the test grid and seeds."""
    return request.param


@pytest.fixture
def chain(grid_point: tuple[int, int, int]) -> Chain:
    """Seeded random model over the test grid."""
    return random_chain(*grid_point)


@pytest.fixture
def chain32() -> Chain:
    """The seeded N=3, L=2 model used for spot checks."""
    return random_chain(3, 2, 42)


@pytest.fixture(autouse=True)
def _clean_suite_bus():
    """Drop subscribers left on the suite bus by a test."""
    yield
    if (bus := EventBus.get_bus('suite')) is not None:
        bus.clear()


@pytest.fixture
def clock_chain_of():
    """Factory for clock-limit chains, keyed by N and the alpha and gamma tuples."""
    return clock_chain
