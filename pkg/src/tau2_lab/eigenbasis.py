###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Eigenbasis built by raising the ground state, and the matrix-element theorems it certifies."""
from __future__ import annotations

__all__ = (
    'Eigenbasis',
    'QuantumNumbers',
    'all_quantum_numbers',
    'basis_rank',
    'build_eigenbasis',
    'build_theta',
    'check_AP96',
    'check_gamma_structure',
    'check_quantum_numbers',
    'diagonalization_residuals',
    'eigen_relation_residuals',
    'exchange_ratio',
    'ground_state',
    'raising_ladder_residual',
    'theta_hat_defect',
)

import itertools
from collections.abc import Iterable
from collections.abc import Iterator
from collections.abc import Sequence
from dataclasses import dataclass
from functools import reduce
from typing import Any

import numpy as np

from .clock_algebra import omega_power
from .constants import *
from .exception_hook import DegenerateBasis
from .exception_hook import ZeroProjection
from .hamiltonians import HamiltonianTower
from .hamiltonians import predicted_eigenvalue
from .numerics import ComplexMatrix
from .numerics import MatrixPolynomial
from .numerics import frozen
from .numerics import norm
from .numerics import relative_residual
from .projector_engine import ProjectorFamily
from .raising_operators import GammaSequence
from .raising_operators import HattedGammas
from .transfer_matrix import SpectralData
from .utils import Lcg
from .utils import complex_to_pair

QuantumNumbers = tuple[int, ...]
"""(n_1, ..., n_L), each in 0..N-1; stored 0-based by mode."""


def all_quantum_numbers(N: int, L: int) -> Iterator[QuantumNumbers]:
    """Every tuple in lexicographic order, which is also the column order of an :class:`Eigenbasis`."""
    return itertools.product(range(N), repeat=L)


def check_quantum_numbers(n: Sequence[int], N: int, L: int) -> QuantumNumbers:
    """Validate and return ``n`` as a tuple.

    :raises ValueError: If n does not hold L values in 0..N-1.
    """
    n = tuple(int(nk) for nk in n)
    if len(n) != L or any(not 0 <= nk < N for nk in n):
        raise ValueError(f'quantum numbers {n} invalid for N={N}, L={L}')
    return n


def _shift(n: QuantumNumbers, k: int, step: int, N: int) -> QuantumNumbers:
    return n[:k] + ((n[k] + step) % N,) + n[k + 1:]


@dataclass(frozen=True, eq=False)
class Eigenbasis:
    """Unit eigenvectors as the columns of ``V``, column i holding the i-th tuple of :func:`all_quantum_numbers`."""

    N: int
    L: int
    spec: SpectralData
    V: np.ndarray

    def index(self, n: Sequence[int]) -> int:
        """Column of the state with quantum numbers ``n``."""
        n = check_quantum_numbers(n, self.N, self.L)
        return reduce(lambda acc, nk: acc * self.N + nk, n, 0)

    def vector(self, n: Sequence[int]) -> np.ndarray:
        return self.V[:, self.index(n)]

    @property
    def labels(self) -> list[QuantumNumbers]:
        return list(all_quantum_numbers(self.N, self.L))

    @property
    def dim(self) -> int:
        return self.V.shape[0]

    def eigenvalue(self, n: Sequence[int], m: int) -> complex:
        """Predicted eigenvalue of H[m] on the state ``n``."""
        return predicted_eigenvalue(self.spec, n, m)

    def transform(self, op: ComplexMatrix) -> np.ndarray:
        """V^-1 op V, whose (a, b) entry is the coefficient of state a in op applied to state b."""
        return np.linalg.solve(self.V, op @ self.V)

    def to_json(self) -> dict[str, Any]:
        """Dump data into a JSON representation, amplitudes as [re, im]."""
        return {
            'N': self.N,
            'L': self.L,
            'states': [
                {'n': list(n), 'vector': [complex_to_pair(v) for v in self.V[:, i]]}
                for i, n in enumerate(self.labels)
            ],
        }


def ground_state(pf: ProjectorFamily, seed: int | Lcg = 1, trials: int = 8) -> np.ndarray:
    """Project seeded random vectors with prod_k P_{0,k} until one survives, then normalize.

    :param seed: Seed or an already running generator.
    :param trials: Number of random vectors to try.
    :raises ZeroProjection: If every projection has norm below ZERO_NORM_TOL.
    """
    rng = seed if isinstance(seed, Lcg) else Lcg(seed)
    projector = reduce(np.matmul, (pf.get(0, k) for k in range(pf.L)))
    for _ in range(trials):
        w = rng.complex_vector(pf.dim)
        w /= np.linalg.norm(w)
        v = projector @ w
        size = float(np.linalg.norm(v))
        if size >= ZERO_NORM_TOL:
            return frozen(_fix_phase(v / size))
    raise ZeroProjection(f'ground-sector projection vanished for {trials} trial vectors')


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate v so its first amplitude above 1e-8 max|v| is real and positive."""
    magnitudes = np.abs(v)
    first = int(np.flatnonzero(magnitudes > ZERO_NORM_TOL * magnitudes.max())[0])
    return v * (abs(v[first]) / v[first])


def build_theta(gh: HattedGammas, p: int, k: int) -> ComplexMatrix:
    """Theta_{p,k} = G_{p,k} G_{p-1,k} ... G_{1,k}, the identity for p = 0.

    :raises ValueError: If p is outside 0..N-1.
    """
    if not 0 <= p < gh.N:
        raise ValueError(f'p={p} outside 0..{gh.N - 1}')
    dim = gh[0].shape[0]
    theta = np.eye(dim, dtype=complex)
    for q in range(1, p + 1):
        theta = gh.get(q, k) @ theta
    return frozen(theta)


def build_eigenbasis(pf: ProjectorFamily, gh: HattedGammas, spec: SpectralData,
                     seed: int = 1, trials: int = 8) -> Eigenbasis:
    """v_n = Theta_{n_1,1} ... Theta_{n_L,L} v_0 for every tuple, normalized with a fixed phase.

    :raises ZeroProjection: If no ground state can be projected out.
    :raises DegenerateBasis: If some product annihilates the ground state, judged against the
        spectral norms of the Theta factors.
    """
    N, L = pf.N, pf.L
    v0 = ground_state(pf, seed, trials)
    thetas = {(p, k): build_theta(gh, p, k) for p in range(N) for k in range(L)}
    bounds = {key: float(np.linalg.norm(theta, 2)) for key, theta in thetas.items()}

    columns = []
    for n in all_quantum_numbers(N, L):
        v = v0
        bound = 1.0
        for k in reversed(range(L)):
            v = thetas[n[k], k] @ v
            bound *= bounds[n[k], k]
        size = float(np.linalg.norm(v))
        if bound <= UNDERFLOW_GUARD or size < ZERO_NORM_TOL * bound:
            raise DegenerateBasis(f'raising the ground state to {n} gave a vector of norm {size:.3e}')
        columns.append(_fix_phase(v / size))
    return Eigenbasis(N, L, spec, frozen(np.column_stack(columns)))


def basis_rank(basis: Eigenbasis) -> float:
    """Smallest singular value of V over the largest; unit columns make this 1 for an orthonormal basis."""
    singular = np.linalg.svd(basis.V, compute_uv=False)
    return float(singular[-1] / singular[0])


def eigen_relation_residuals(basis: Eigenbasis, tau: MatrixPolynomial, t_samples: Iterable[complex]) -> list[float]:
    """tau_2(t) v_n against A0 prod_k (1 - r_k omega**(1 + n_k) t) v_n, one residual per sampled t."""
    spec = basis.spec
    omega = omega_power(basis.N, 1)
    residuals = []
    for t in t_samples:
        z = omega * complex(t)
        values = np.array([
            spec.A0 * np.prod([1 - spec.lambdas[spec.flat(k, nk)] * z for k, nk in enumerate(n)])
            for n in basis.labels
        ])
        residuals.append(relative_residual(tau(z) @ basis.V, basis.V * values[None, :]))
    return residuals


def _offdiagonal(matrix: np.ndarray) -> float:
    scale = norm(matrix)
    off = norm(matrix - np.diag(np.diag(matrix)))
    return off / scale if scale > UNDERFLOW_GUARD else off


def diagonalization_residuals(basis: Eigenbasis, tower: HamiltonianTower,
                              pf: ProjectorFamily, tau: MatrixPolynomial) -> dict[str, float]:
    """Off-diagonal weight of every H[m], P and tau_m in the basis, plus eigenvalue errors.

    'hamiltonian_eigenvalues' compares the diagonal of H[m] with -sum_k (r_k omega**n_k)**m and
    'projector_eigenvalues' the diagonal of P_{p,k} with delta(p, n_k).
    """
    labels = basis.labels
    result = {'hamiltonians': 0.0, 'projectors': 0.0, 'tau': 0.0,
              'hamiltonian_eigenvalues': 0.0, 'projector_eigenvalues': 0.0}

    for m in range(1, len(tower)):
        B = basis.transform(tower[m])
        result['hamiltonians'] = max(result['hamiltonians'], _offdiagonal(B))
        predicted = np.array([basis.eigenvalue(n, m) for n in labels])
        result['hamiltonian_eigenvalues'] = max(result['hamiltonian_eigenvalues'],
                                                relative_residual(np.diag(B), predicted))

    for k in range(pf.L):
        for p in range(pf.N):
            B = basis.transform(pf.get(p, k))
            result['projectors'] = max(result['projectors'], _offdiagonal(B))
            predicted = np.array([float(n[k] == p) for n in labels])
            error = float(np.max(np.abs(np.diag(B) - predicted)))
            result['projector_eigenvalues'] = max(result['projector_eigenvalues'], error)

    for m in range(1, len(tau)):
        if tau[m].any():
            result['tau'] = max(result['tau'], _offdiagonal(basis.transform(tau[m])))
    return result


def _raising_mask(N: int, L: int, ell: int | None = None) -> np.ndarray:
    """Boolean mask of entries (row n, column n with one slot lowered by one), optionally only slot ``ell``."""
    labels = list(all_quantum_numbers(N, L))
    lookup = {n: i for i, n in enumerate(labels)}
    mask = np.zeros((len(labels), len(labels)), dtype=bool)
    slots = range(L) if ell is None else (ell,)
    for col, n in enumerate(labels):
        for k in slots:
            mask[lookup[_shift(n, k, 1, N)], col] = True
    return mask


def raising_ladder_residual(basis: Eigenbasis, gh: HattedGammas) -> float:
    """Weight of G_{p,k} outside the single transitions n_k: p - 1 -> p, relative to ||G_{p,k}|| in the basis."""
    N, L = basis.N, basis.L
    labels = basis.labels
    worst = 0.0
    for k in range(L):
        for p in range(N):
            allowed = np.zeros((basis.dim, basis.dim), dtype=bool)
            for col, n in enumerate(labels):
                if n[k] == (p - 1) % N:
                    allowed[basis.index(_shift(n, k, 1, N)), col] = True
            B = basis.transform(gh.get(p, k))
            scale = norm(B)
            leak = norm(np.where(allowed, 0, B))
            worst = max(worst, leak / scale if scale > UNDERFLOW_GUARD else leak)
    return worst


def check_gamma_structure(gs: GammaSequence, basis: Eigenbasis, gh: HattedGammas) -> dict[str, float]:
    """Matrix elements of every Gamma_j in the basis.

    'forbidden' is the weight outside single-slot raising transitions, relative to ||Gamma_j||
    in the basis; 'eigen_weights' compares each allowed element with (r_l omega**n_l)**j times the
    element of the hatted operator raising slot l to n_l; 'template' does the same for j = 0, where
    the weight is 1.
    """
    N, L = basis.N, basis.L
    spec = basis.spec
    labels = basis.labels
    mask = _raising_mask(N, L)

    hatted = {(p, k): basis.transform(gh.get(p, k)) for k in range(L) for p in range(N)}
    result = {'forbidden': 0.0, 'eigen_weights': 0.0, 'template': 0.0}
    for j in range(len(gs)):
        B = basis.transform(gs[j])
        scale = norm(B)
        if scale <= UNDERFLOW_GUARD:
            continue
        result['forbidden'] = max(result['forbidden'], norm(np.where(mask, 0, B)) / scale)

        expected = np.zeros_like(B)
        for row, n in enumerate(labels):
            for ell in range(L):
                col = basis.index(_shift(n, ell, -1, N))
                lam = spec.lambdas[spec.flat(ell, n[ell])]
                expected[row, col] = lam ** j * hatted[n[ell], ell][row, col]
        error = norm(np.where(mask, B - expected, 0)) / scale
        result['eigen_weights'] = max(result['eigen_weights'], error)
        if j == 0:
            result['template'] = error
    return result


def _ap96_samples(N: int, L: int, exhaustive_max: int, samples: int, seed: int) -> list[tuple[int, int, QuantumNumbers]]:
    """(k, l, lowered tuple) combinations: all of them when N*L <= exhaustive_max, else a seeded subset."""
    pairs = list(itertools.permutations(range(L), 2))
    combos = [(k, ell, n) for k, ell in pairs for n in all_quantum_numbers(N, L)]
    if N * L <= exhaustive_max or len(combos) <= samples:
        return combos
    rng = Lcg(seed)
    return [combos[rng.randrange(len(combos))] for _ in range(samples)]


def check_AP96(gs: GammaSequence, basis: Eigenbasis, seed: int = 1,
               exhaustive_max: int = 9, samples: int = 64) -> dict[str, float | int]:
    """Matrix elements of Gamma_0 Gamma_1 - omega^-1 Gamma_1 Gamma_0 between states two raisings apart.

    For each sampled (k, l, n) with k != l, the column is n and the row raises n_k and n_l by one.
    The intermediate sum runs over every basis state; 'identity' is its value relative to the sum
    of the moduli of its terms and 'intermediate' the share of that modulus carried by states other
    than the two single raisings. 'ratios' checks the first-order relations between Gamma_1 and
    Gamma_0 elements, r_k omega**p on slot k and r_l omega**q on slot l, with or without the other
    slot raised.
    """
    N, L = basis.N, basis.L
    spec = basis.spec
    omega = omega_power(N, 1)
    result: dict[str, float | int] = {'identity': 0.0, 'intermediate': 0.0, 'ratios': 0.0, 'samples': 0}
    if L < 2:
        return result

    B0 = basis.transform(gs[0])
    B1 = basis.transform(gs[1])
    floor = UNDERFLOW_GUARD + 1e-14 * max(float(np.abs(B1).max()), float(np.abs(B0).max()))

    def ratio_error(row: int, col: int, lam: complex) -> float:
        lhs, rhs = B1[row, col], lam * B0[row, col]
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs), floor)

    combos = _ap96_samples(N, L, exhaustive_max, samples, seed)
    for k, ell, n in combos:
        col = basis.index(n)
        raised_k = _shift(n, k, 1, N)
        raised_l = _shift(n, ell, 1, N)
        top = _shift(raised_k, ell, 1, N)
        row = basis.index(top)

        terms = B0[row, :] * B1[:, col] - B1[row, :] * B0[:, col] / omega
        magnitude = float(np.abs(terms).sum())
        if magnitude <= floor:
            continue
        result['identity'] = max(result['identity'], abs(terms.sum()) / magnitude)
        inside = [basis.index(raised_k), basis.index(raised_l)]
        outside = np.delete(np.abs(terms), inside).sum()
        result['intermediate'] = max(result['intermediate'], float(outside) / magnitude)

        p, q = top[k], top[ell]
        lam_k = spec.lambdas[spec.flat(k, p)]
        lam_l = spec.lambdas[spec.flat(ell, q)]
        errors = (
            ratio_error(basis.index(raised_k), col, lam_k),
            ratio_error(row, basis.index(raised_l), lam_k),
            ratio_error(basis.index(raised_l), col, lam_l),
            ratio_error(row, basis.index(raised_k), lam_l),
        )
        result['ratios'] = max(result['ratios'], *errors)
    result['samples'] = len(combos)
    return result


def theta_hat_defect(gh: HattedGammas, k: int) -> tuple[float, complex]:
    """Distance of (sum_q G_{q,k})**N from c * 1, relative to |c| with c = trace / dim.

    Report only; returns ``inf`` when c vanishes.
    """
    theta = sum(gh.get(q, k) for q in range(gh.N))
    power = np.linalg.matrix_power(theta, gh.N)
    dim = power.shape[0]
    c = complex(np.trace(power)) / dim
    if abs(c) <= UNDERFLOW_GUARD:
        return float('inf'), c
    return norm(power - c * np.eye(dim)) / abs(c), c


def exchange_ratio(gh: HattedGammas, k: int, ell: int, p: int, q: int) -> tuple[complex, float]:
    """Least-squares c with G_{p,k} G_{q,l} ~ c G_{q,l} G_{p,k}, and the fit residual relative to the left side.

    Report only; the constant is not asserted.
    """
    forward = gh.get(p, k) @ gh.get(q, ell)
    backward = gh.get(q, ell) @ gh.get(p, k)
    weight = float(np.vdot(backward, backward).real)
    if weight <= UNDERFLOW_GUARD:
        return 0j, float('inf')
    c = complex(np.vdot(backward, forward)) / weight
    scale = norm(forward)
    fit = norm(forward - c * backward)
    return c, fit / scale if scale > UNDERFLOW_GUARD else fit
