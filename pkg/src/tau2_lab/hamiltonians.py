###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Quantum Hamiltonians of the chain and the commuting tower generated by ln tau_2(t)."""
from __future__ import annotations

__all__ = (
    'ClockSpecialParams',
    'HamiltonianTower',
    'build_H_clock',
    'build_H_explicit',
    'build_H_parafermion',
    'clock_limit',
    'higher_hamiltonians',
    'predicted_eigenvalue',
    'reconstruct_tau_from_tower',
    'spectrum_determinants',
    'tower_commutation_residual',
)

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any
from typing import Literal

import numpy as np

from .clock_algebra import ChainOperators
from .clock_algebra import ParafermionSet
from .clock_algebra import omega_power
from .constants import *
from .exception_hook import InvalidParams
from .exception_hook import SingularLeading
from .numerics import ComplexMatrix
from .numerics import MatrixPolynomial
from .numerics import commutator_residual
from .numerics import frozen
from .numerics import lu_logdet
from .numerics import norm
from .transfer_matrix import ModelParams
from .transfer_matrix import SpectralData
from .utils import complex_to_pair


@dataclass(frozen=True, eq=False)
class HamiltonianTower:
    """Higher Hamiltonians H[0] .. H[M], with the convention H[0] = -L * 1."""

    H: tuple[ComplexMatrix, ...]

    def __getitem__(self, m: int) -> ComplexMatrix:
        return self.H[m]

    def __len__(self) -> int:
        return len(self.H)

    @property
    def M(self) -> int:
        return len(self.H) - 1


@dataclass(frozen=True, eq=False)
class ClockSpecialParams:
    """Transverse fields alpha_1 .. alpha_L and bonds gamma_1 .. gamma_{L-1} of the plain clock chain."""

    N: int
    alpha: np.ndarray
    gamma: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, 'alpha', frozen(np.ravel(self.alpha)))
        object.__setattr__(self, 'gamma', frozen(np.ravel(self.gamma)))
        if self.alpha.size < 1:
            raise InvalidParams('clock chain needs at least one alpha')
        if self.gamma.size != self.alpha.size - 1:
            raise InvalidParams(f'expected {self.alpha.size - 1} gamma values, got {self.gamma.size}')

    @property
    def L(self) -> int:
        return self.alpha.size

    def to_json(self) -> dict[str, Any]:
        """Dump data into a JSON representation."""
        return {
            'alpha': [complex_to_pair(v) for v in self.alpha],
            'gamma': [complex_to_pair(v) for v in self.gamma],
        }


def _ratio_product(params: ModelParams, first: int, last: int) -> complex:
    """prod_{l=first}^{last} a_l / b_l, 1 when empty."""
    result = 1 + 0j
    for index in range(first, last + 1):
        result *= params.ratio('a', index)
    return result


def _ops_for(params: ModelParams, ops: ChainOperators | None) -> ChainOperators:
    if ops is None:
        return ChainOperators(params.N, params.L)
    if (ops.N, ops.L) != (params.N, params.L):
        raise InvalidParams(f'operators built for (N, L) = {(ops.N, ops.L)}, model is {(params.N, params.L)}')
    return ops


def build_H_explicit(params: ModelParams, ops: ChainOperators | None = None) -> ComplexMatrix:
    """The Hamiltonian as four double sums of Z/Y boundary operators joined by X strings.

    Coefficients use the ratios a/b, c/b, d/b, so only nonzero b are needed.
    """
    ops = _ops_for(params, ops)
    N, L = params.N, params.L
    w = lambda x: omega_power(N, x)  # noqa: E731
    H = np.zeros((ops.dim, ops.dim), dtype=complex)

    for j in range(1, L + 1):
        for k in range(j, L + 1):
            coeff = (-w(k - j + (N - 1) / 2) * params.ratio('d', 2 * j - 2)
                     * _ratio_product(params, 2 * j - 1, 2 * k - 2) * params.ratio('d', 2 * k - 1))
            H += coeff * (ops.Z(j) @ ops.x_string(j, k - 1) @ ops.Y_inv(k))

    for j in range(1, L):
        for k in range(j + 1, L + 1):
            coeff = (w(k - j - 1) * params.ratio('c', 2 * j - 1)
                     * _ratio_product(params, 2 * j, 2 * k - 2) * params.ratio('d', 2 * k - 1))
            H += coeff * (ops.Y(j) @ ops.x_string(j, k - 1) @ ops.Y_inv(k))

        for k in range(j, L):
            coeff = (-w(k - j - (N + 1) / 2) * params.ratio('c', 2 * j - 1)
                     * _ratio_product(params, 2 * j, 2 * k - 1) * params.ratio('c', 2 * k))
            H += coeff * (ops.Y(j) @ ops.x_string(j, k) @ ops.Z_inv(k + 1))

            coeff = (w(k - j) * params.ratio('d', 2 * j - 2)
                     * _ratio_product(params, 2 * j - 1, 2 * k - 1) * params.ratio('c', 2 * k))
            H += coeff * (ops.Z(j) @ ops.x_string(j, k) @ ops.Z_inv(k + 1))

    return frozen(H)


def build_H_parafermion(params: ModelParams, psi: ParafermionSet) -> ComplexMatrix:
    """The Hamiltonian as a bilinear form psi_i^-1 psi_j in the parafermions.

    :raises InvalidParams: If psi was built for another (N, L).
    """
    N, L = params.N, params.L
    if (psi.N, psi.L) != (N, L):
        raise InvalidParams(f'parafermions built for (N, L) = {(psi.N, psi.L)}, model is {(N, L)}')
    w = lambda x: omega_power(N, x)  # noqa: E731
    dim = params.dim
    H = np.zeros((dim, dim), dtype=complex)

    for j in range(1, L + 1):
        for m in range(j, L + 1):
            coeff = (-w(m - j + (N - 1) / 2) * _ratio_product(params, 2 * j - 1, 2 * m - 2)
                     * params.ratio('d', 2 * j - 2) * params.ratio('d', 2 * m - 1))
            H += coeff * (psi.inverse(2 * j - 2) @ psi[2 * m - 1])

    for j in range(1, L):
        for m in range(j, L):
            phase = -w(m - j)
            cc = (w(-(N + 1) / 2) * _ratio_product(params, 2 * j, 2 * m - 1)
                  * params.ratio('c', 2 * j - 1) * params.ratio('c', 2 * m))
            dc = (_ratio_product(params, 2 * j - 1, 2 * m - 1)
                  * params.ratio('d', 2 * j - 2) * params.ratio('c', 2 * m))
            cd = (_ratio_product(params, 2 * j, 2 * m)
                  * params.ratio('c', 2 * j - 1) * params.ratio('d', 2 * m + 1))
            H += phase * (cc * (psi.inverse(2 * j - 1) @ psi[2 * m])
                          - dc * (psi.inverse(2 * j - 2) @ psi[2 * m])
                          - cd * (psi.inverse(2 * j - 1) @ psi[2 * m + 1]))

    return frozen(H)


def clock_limit(clock: ClockSpecialParams) -> ModelParams:
    """Couplings whose Hamiltonian is -sum alpha_j X_j - sum gamma_j Z_j Z_{j+1}^-1.

    Every b is 1 and every a is 0; d_{2j-2} = alpha_j, d_{2j-1} = 1, c_{2j-1} = gamma_j, c_{2j} = 1,
    with c_0 and c_{2L-1} (never reached by the Hamiltonian) set to 0.
    """
    L = clock.L
    a = np.zeros(2 * L, dtype=complex)
    b = np.ones(2 * L, dtype=complex)
    c = np.zeros(2 * L, dtype=complex)
    d = np.zeros(2 * L, dtype=complex)
    for j in range(1, L + 1):
        d[2 * j - 2] = clock.alpha[j - 1]
        d[2 * j - 1] = 1.0
    for j in range(1, L):
        c[2 * j - 1] = clock.gamma[j - 1]
        c[2 * j] = 1.0
    return ModelParams(clock.N, L, a, b, c, d)


def build_H_clock(clock: ClockSpecialParams, ops: ChainOperators | None = None) -> ComplexMatrix:
    """-sum_j alpha_j X_j - sum_j gamma_j Z_j Z_{j+1}^-1, built directly from the site operators."""
    if ops is None:
        ops = ChainOperators(clock.N, clock.L)
    H = np.zeros((ops.dim, ops.dim), dtype=complex)
    for j in range(1, clock.L + 1):
        H -= clock.alpha[j - 1] * ops.X(j)
    for j in range(1, clock.L):
        H -= clock.gamma[j - 1] * (ops.Z(j) @ ops.Z_inv(j + 1))
    return frozen(H)


def higher_hamiltonians(tau: MatrixPolynomial, M: int, L: int,
                        order: Literal['left', 'right'] = 'left') -> HamiltonianTower:
    """Expand z d/dz ln tau_2 = sum_m z**m H[m] in z = omega*t.

    With g_m = tau_{2,m} / A0, H[m] = m g_m - sum_{j=1}^{m-1} g_{m-j} H[j]; ``order='right'``
    multiplies H[j] g_{m-j} instead.

    :param tau: Transfer matrix with tau[0] = A0 * 1.
    :param M: Highest order to compute.
    :param L: Chain length, fixing H[0] = -L * 1.
    :raises SingularLeading: If |A0| is below the underflow guard.
    """
    a0 = complex(tau[0][0, 0])
    if abs(a0) < UNDERFLOW_GUARD:
        raise SingularLeading(f'|A0| = {abs(a0):.3e} is too small to invert')

    g = [tau[m] / a0 for m in range(M + 1)]
    H: list[np.ndarray] = [-L * np.eye(tau.dim, dtype=complex)]
    for m in range(1, M + 1):
        term = m * g[m]
        for j in range(1, m):
            if not g[m - j].any():
                continue
            term = term - (g[m - j] @ H[j] if order == 'left' else H[j] @ g[m - j])
        H.append(term)
    return HamiltonianTower(tuple(frozen(h) for h in H))


def reconstruct_tau_from_tower(tower: HamiltonianTower, A0: complex, order: int) -> MatrixPolynomial:
    """Rebuild tau_2 = A0 exp(sum_m z**m H[m] / m) through degree ``order``.

    Uses the inverse recursion m g_m = sum_{j=1}^m g_{m-j} H[j].
    """
    dim = tower[0].shape[0]
    g: list[np.ndarray] = [np.eye(dim, dtype=complex)]
    for m in range(1, order + 1):
        total = sum((g[m - j] @ tower[j] for j in range(1, m + 1)), np.zeros((dim, dim), dtype=complex))
        g.append(total / m)
    return MatrixPolynomial(tuple(A0 * c for c in g))


def tower_commutation_residual(tower: HamiltonianTower, start: int = 1) -> float:
    """Largest relative commutator between tower members H[start] .. H[M]."""
    worst = 0.0
    for m, m_p in itertools.combinations(range(start, len(tower)), 2):
        worst = max(worst, commutator_residual(tower[m], tower[m_p]))
    return worst


def predicted_eigenvalue(spec: SpectralData, n: Sequence[int], m: int) -> complex:
    """Eigenvalue -sum_k (r_k omega**n_k)**m of H[m] on the state with quantum numbers ``n``.

    :raises ValueError: If n does not hold L values in 0..N-1.
    """
    if len(n) != spec.L or any(not 0 <= nk < spec.N for nk in n):
        raise ValueError(f'quantum numbers {tuple(n)} invalid for N={spec.N}, L={spec.L}')
    return -complex(sum(spec.lambdas[spec.flat(k, nk)] ** m for k, nk in enumerate(n)))


def spectrum_determinants(H: ComplexMatrix, spec: SpectralData) -> dict[tuple[int, ...], float]:
    """log|det(H - E 1)| - dim * log||H|| for every predicted eigenvalue E of H[1].

    A value at or below minus the oracle margin certifies E as an eigenvalue.
    """
    dim = H.shape[0]
    log_scale = dim * np.log(norm(H))
    result = {}
    for n in itertools.product(range(spec.N), repeat=spec.L):
        energy = predicted_eigenvalue(spec, n, 1)
        _, logabs = lu_logdet(H - energy * np.eye(dim))
        result[n] = logabs - log_scale
    return result
