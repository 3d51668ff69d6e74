###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Raising operators: the commutator sequence Gamma_j, its truncation, and the hatted combinations."""
from __future__ import annotations

__all__ = (
    'GammaSequence',
    'HMatrix',
    'HattedGammas',
    'build_gamma_hat',
    'build_hmatrix',
    'char_poly_residual',
    'characteristic_coefficients',
    'check_intertwining',
    'check_truncation',
    'eigen_commutator_residuals',
    'gamma1_closed_form',
    'gamma_hat_completeness',
    'gamma_sequence',
    'hmatrix_action_residuals',
    'hmatrix_eigen_residual',
)

from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .clock_algebra import ParafermionSet
from .clock_algebra import omega_power
from .constants import *
from .numerics import ComplexMatrix
from .numerics import MatrixPolynomial
from .numerics import VandermondeSystem
from .numerics import frozen
from .numerics import lu_det
from .numerics import norm
from .numerics import relative_residual
from .transfer_matrix import ModelParams
from .transfer_matrix import SpectralData


@dataclass(frozen=True, eq=False)
class GammaSequence:
    """Gamma_0 = Z_1^-1 and Gamma_{j+1} = [H, Gamma_j] / (omega^-1 - 1)."""

    N: int
    gammas: tuple[ComplexMatrix, ...]

    def __getitem__(self, j: int) -> ComplexMatrix:
        return self.gammas[j]

    def __len__(self) -> int:
        return len(self.gammas)

    def commutation_residual(self) -> float:
        """||Gamma_0 Gamma_1 - omega^-1 Gamma_1 Gamma_0|| / (||Gamma_0|| ||Gamma_1||)."""
        g0, g1 = self.gammas[0], self.gammas[1]
        omega = omega_power(self.N, 1)
        scale = norm(g0) * norm(g1)
        diff = norm(g0 @ g1 - g1 @ g0 / omega)
        return diff / scale if scale > UNDERFLOW_GUARD else diff


def gamma_sequence(H: ComplexMatrix, Z1inv: ComplexMatrix, jmax: int, N: int) -> GammaSequence:
    """Generate Gamma_0 .. Gamma_jmax by repeated commutators with ``H``."""
    factor = 1.0 / (omega_power(N, -1) - 1.0)
    gammas = [frozen(Z1inv)]
    for _ in range(jmax):
        prev = gammas[-1]
        gammas.append(frozen(factor * (H @ prev - prev @ H)))
    return GammaSequence(N, tuple(gammas))


def gamma1_closed_form(params: ModelParams, psi: ParafermionSet) -> ComplexMatrix:
    """Gamma_1 written out as a linear combination of the odd and even parafermions."""
    N, L = params.N, params.L
    dim = params.dim

    def a_product(last: int) -> complex:
        result = 1 + 0j
        for index in range(1, last + 1):
            result *= params.ratio('a', index)
        return result

    total = np.zeros((dim, dim), dtype=complex)
    for m in range(1, L + 1):
        total += (omega_power(N, m + (N - 1) / 2) * a_product(2 * m - 2)
                  * params.ratio('d', 2 * m - 1) * psi[2 * m - 1])
    for m in range(1, L):
        total -= omega_power(N, m) * a_product(2 * m - 1) * params.ratio('c', 2 * m) * psi[2 * m]
    return frozen(params.ratio('d', 0) * total)


def check_truncation(gs: GammaSequence, spec: SpectralData, jrange: Iterable[int]) -> dict[int, float]:
    """Residual of sum_l s_l Gamma_{N(L-l)+j} relative to its largest term, per j.

    :raises IndexError: If the sequence is too short for some j.
    """
    N, L = spec.N, spec.L
    result = {}
    for j in jrange:
        terms = [spec.s[ell] * gs[N * (L - ell) + j] for ell in range(L + 1)]
        scale = max(norm(term) for term in terms)
        total = norm(sum(terms))
        result[j] = total / scale if scale > UNDERFLOW_GUARD else total
    return result


def characteristic_coefficients(matrix: ComplexMatrix, radius: float) -> np.ndarray:
    """Coefficients of det(z 1 - matrix), ascending, by interpolation on a circle.

    det is evaluated at dim + 1 points radius * exp(2 pi i n / (dim + 1)) and transformed back
    with a discrete Fourier transform.
    """
    dim = matrix.shape[0]
    points = dim + 1
    nodes = radius * np.exp(2j * np.pi * np.arange(points) / points)
    values = np.array([lu_det(z * np.eye(dim) - matrix) for z in nodes])
    scaled = np.fft.fft(values) / points
    return scaled / radius ** np.arange(points)


@dataclass(frozen=True, eq=False)
class HMatrix:
    """NL x NL matrix of the commutator action on (Gamma_0 .. Gamma_{NL-1}).

    Ones on the superdiagonal; the last row holds -s_{L-m} / s_0 in column mN.
    """

    N: int
    L: int
    h: np.ndarray
    expected: np.ndarray

    @property
    def size(self) -> int:
        return self.N * self.L

    @cached_property
    def radius(self) -> float:
        """Geometric mean of the eigenvalue moduli, from |s_L / s_0|."""
        last = abs(self.expected[0])
        lead = abs(self.expected[-1])
        if last <= UNDERFLOW_GUARD:
            return 1.0
        return float((last / lead) ** (1.0 / self.size))

    @cached_property
    def char_poly(self) -> np.ndarray:
        """Ascending coefficients of det(z 1 - h)."""
        return characteristic_coefficients(self.h, self.radius)


def build_hmatrix(spec: SpectralData) -> HMatrix:
    """Build the companion-like matrix of the commutator recursion from s_0 .. s_L."""
    N, L = spec.N, spec.L
    size = N * L
    h = np.zeros((size, size), dtype=complex)
    h[np.arange(size - 1), np.arange(1, size)] = 1.0
    for m in range(L):
        h[size - 1, m * N] = -spec.s[L - m] / spec.s[0]

    expected = np.zeros(size + 1, dtype=complex)
    for ell in range(L + 1):
        expected[N * (L - ell)] = spec.s[ell] / spec.s[0]
    return HMatrix(N, L, frozen(h), frozen(expected))


def char_poly_residual(hm: HMatrix) -> float:
    """max_k |c_k - e_k| R**k / max_k |e_k| R**k for the interpolated c and expected e."""
    weights = hm.radius ** np.arange(hm.size + 1)
    diff = np.abs(hm.char_poly - hm.expected) * weights
    return float(diff.max() / (np.abs(hm.expected) * weights).max())


def hmatrix_eigen_residual(hm: HMatrix, spec: SpectralData) -> float:
    """Largest |det(lambda 1 - h)| relative to sum_k |e_k| |lambda|**k over the lambda grid."""
    worst = 0.0
    for lam in spec.lambdas:
        scale = float(np.sum(np.abs(hm.expected) * abs(lam) ** np.arange(hm.size + 1)))
        worst = max(worst, abs(lu_det(lam * np.eye(hm.size) - hm.h)) / scale)
    return worst


def hmatrix_action_residuals(hm: HMatrix, gs: GammaSequence, H: ComplexMatrix) -> list[float]:
    """Per row j: [H, Gamma_j] against (omega^-1 - 1) sum_k h_jk Gamma_k, relative to the largest term."""
    factor = omega_power(hm.N, -1) - 1.0
    residuals = []
    for j in range(hm.size):
        lhs = H @ gs[j] - gs[j] @ H
        terms = [factor * hm.h[j, k] * gs[k] for k in np.flatnonzero(hm.h[j])]
        scale = max([norm(lhs), *(norm(term) for term in terms)])
        diff = norm(lhs - sum(terms))
        residuals.append(diff / scale if scale > UNDERFLOW_GUARD else diff)
    return residuals


@dataclass(frozen=True, eq=False)
class HattedGammas:
    """Hatted raising operators at flat index i = kN + p, matching lambda_i = r_k omega**p.

    The operator at (p, k) raises quantum number n_k from p - 1 to p (mod N).
    """

    N: int
    L: int
    gh: tuple[ComplexMatrix, ...]
    lambdas: np.ndarray

    def __getitem__(self, i: int) -> ComplexMatrix:
        return self.gh[i]

    def __len__(self) -> int:
        return len(self.gh)

    def get(self, p: int, k: int) -> ComplexMatrix:
        """Operator raising n_k to p; p is taken mod N, k is 0-based."""
        return self.gh[k * self.N + p % self.N]


def build_gamma_hat(gs: GammaSequence, vs: VandermondeSystem) -> HattedGammas:
    """Combine Gamma_0 .. Gamma_{NL-1} with the rows of the inverse Vandermonde matrix."""
    size = vs.size
    N = gs.N
    return HattedGammas(N, size // N, tuple(vs.combine(gs.gammas[:size])), vs.lambdas)


def gamma_hat_completeness(gh: HattedGammas, gs: GammaSequence) -> float:
    """Largest relative error of sum_i lambda_i**j Gamma-hat_i against Gamma_j, j < NL."""
    worst = 0.0
    for j in range(len(gh)):
        rebuilt = sum(lam ** j * op for lam, op in zip(gh.lambdas, gh.gh))
        worst = max(worst, relative_residual(rebuilt, gs[j]))
    return worst


def eigen_commutator_residuals(H: ComplexMatrix, gh: HattedGammas) -> list[float]:
    """||[H, G_i] - (omega^-1 - 1) lambda_i G_i|| / (||H|| ||G_i||) per hatted operator."""
    factor = omega_power(gh.N, -1) - 1.0
    h_norm = norm(H)
    residuals = []
    for lam, op in zip(gh.lambdas, gh.gh):
        diff = norm(H @ op - op @ H - factor * lam * op)
        scale = h_norm * norm(op)
        residuals.append(diff / scale if scale > UNDERFLOW_GUARD else diff)
    return residuals


def check_intertwining(gh: HattedGammas, tau: MatrixPolynomial) -> list[float]:
    """Per hatted operator, the largest t-coefficient of (1 - lambda t) tau G - (1 - lambda omega t) G tau.

    Coefficients are measured relative to the largest term entering any of them.
    """
    omega = omega_power(gh.N, 1)
    in_t = tau.substitute(omega)
    size = len(in_t) + 1
    residuals = []
    for lam, op in zip(gh.lambdas, gh.gh):
        worst = 0.0
        scale = 0.0
        coeffs = []
        for n in range(size):
            terms = (in_t[n] @ op, -lam * (in_t[n - 1] @ op) if n else 0 * op,
                     -(op @ in_t[n]), lam * omega * (op @ in_t[n - 1]) if n else 0 * op)
            scale = max(scale, *(norm(term) for term in terms))
            coeffs.append(sum(terms))
        for coeff in coeffs:
            worst = max(worst, norm(coeff))
        residuals.append(worst / scale if scale > UNDERFLOW_GUARD else worst)
    return residuals
