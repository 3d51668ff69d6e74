###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""The open-boundary tau_2(t) transfer matrix, its functional relation, and the spectral data it fixes.

Coefficients are stored in powers of (omega*t): ``tau[m]`` is tau_{2,m}, with
tau_2(t) = sum_m (omega t)**m tau_{2,m}. Matrix elements are indexed (row sigma, column sigma'),
sigma being the unprimed row of spins in the face weights.
"""
from __future__ import annotations

__all__ = (
    'COUPLING_NAMES',
    'FunctionalRelation',
    'ModelParams',
    'SpectralData',
    'SpinConfig',
    'build_tau2',
    'commuting_residual',
    'degree_excess',
    'functional_product',
    'functional_relation',
    'irf_weight',
    'spectral_roots',
    'spectrum_of',
)

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Final

import numpy as np

from .clock_algebra import omega_power
from .constants import *
from .exception_hook import InvalidN
from .exception_hook import InvalidParams
from .exception_hook import NotPeriodic
from .exception_hook import NotScalar
from .exception_hook import ZeroRoot
from .numerics import MatrixPolynomial
from .numerics import ScalarPolynomial
from .numerics import check_distinct
from .numerics import commutator_residual
from .numerics import frozen
from .numerics import mat_poly_product
from .numerics import norm
from .numerics import poly_roots
from .numerics import scalar_part
from .utils import Lcg
from .utils import complex_to_pair

COUPLING_NAMES: Final[tuple[str, ...]] = ('a', 'b', 'c', 'd')

# Couplings outside 0..2L-1 after the free-boundary specialization
_LOWER_BOUNDARY: Final[dict[str, complex]] = {'a': 0j, 'b': 1 + 0j, 'c': 0j, 'd': 0j}
_UPPER_BOUNDARY: Final[dict[str, complex]] = {'a': 0j, 'b': 1 + 0j, 'c': 0j, 'd': 0j}


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Clock dimension, chain length and the bulk couplings a, b, c, d (each of length 2L).

    Boundary couplings are implied: a_{-1} = c_{-1} = d_{-1} = 0, b_{-1} = 1,
    a_{2L} = c_{2L} = d_{2L} = 0 and b_{2L} = 1.
    """

    N: int
    L: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self) -> None:
        """Validate and freeze the couplings.

        :raises InvalidN: If N < 2.
        :raises InvalidParams: If L < 1, an array does not have length 2L, a value is not finite, or a b vanishes.
        """
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise InvalidN(f'clock dimension must be an integer >= 2, got {self.N!r}')
        if not isinstance(self.L, (int, np.integer)) or self.L < 1:
            raise InvalidParams(f'chain length must be an integer >= 1, got {self.L!r}')

        for name in COUPLING_NAMES:
            values = frozen(np.ravel(getattr(self, name)))
            if values.size != 2 * self.L:
                raise InvalidParams(f'coupling array {name} has length {values.size}, expected {2 * self.L}')
            if not np.all(np.isfinite(values)):
                raise InvalidParams(f'coupling array {name} holds non-finite values')
            object.__setattr__(self, name, values)

        if (zeros := np.flatnonzero(self.b == 0)).size:
            raise InvalidParams(f'b_{int(zeros[0])} vanishes; every b must be nonzero')

    @classmethod
    def random(cls, N: int, L: int, rng: Lcg) -> ModelParams:
        """Draw a, b, c, d in that order, 2L couplings each, from ``rng``."""
        arrays = {name: rng.couplings(2 * L) for name in COUPLING_NAMES}
        return cls(N, L, **arrays)

    @property
    def omega(self) -> complex:
        return omega_power(self.N, 1)

    @property
    def dim(self) -> int:
        return self.N ** self.L

    @property
    def A0(self) -> complex:
        """Product of every bulk b."""
        return complex(np.prod(self.b))

    def coupling(self, name: str, index: int) -> complex:
        """Return coupling ``name`` at ``index`` in -1..2L, substituting boundary values.

        :raises KeyError: If name is not one of a, b, c, d.
        :raises IndexError: If index is outside -1..2L.
        """
        if name not in COUPLING_NAMES:
            raise KeyError(f'unknown coupling {name!r}')
        if index == -1:
            return _LOWER_BOUNDARY[name]
        if index == 2 * self.L:
            return _UPPER_BOUNDARY[name]
        if not 0 <= index < 2 * self.L:
            raise IndexError(f'coupling index {index} outside -1..{2 * self.L}')
        return complex(getattr(self, name)[index])

    def ratio(self, name: str, index: int) -> complex:
        """Return coupling / b at the same index."""
        return self.coupling(name, index) / self.coupling('b', index)

    def scaled(self, factor: complex) -> ModelParams:
        """Every bulk coupling multiplied by ``factor``."""
        return ModelParams(self.N, self.L, *(getattr(self, name) * factor for name in COUPLING_NAMES))

    def to_json(self) -> dict[str, Any]:
        """Dump data into a JSON representation, complex numbers as [re, im]."""
        data: dict[str, Any] = {'N': int(self.N), 'L': int(self.L)}
        for name in COUPLING_NAMES:
            data[name] = [complex_to_pair(v) for v in getattr(self, name)]
        return data


@dataclass(frozen=True)
class SpinConfig:
    """Row of spins sigma_1 .. sigma_L in Z_N; sigma_0 is fixed by the boundary."""

    N: int
    sigma: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(not 0 <= s < self.N for s in self.sigma):
            raise ValueError(f'spins {self.sigma} outside 0..{self.N - 1}')

    @classmethod
    def from_index(cls, N: int, L: int, index: int) -> SpinConfig:
        """Decode a basis index, site 1 being the most significant digit."""
        digits = []
        for _ in range(L):
            index, s = divmod(index, N)
            digits.append(s)
        return cls(N, tuple(reversed(digits)))

    @property
    def index(self) -> int:
        value = 0
        for s in self.sigma:
            value = value * self.N + s
        return value


def irf_weight(params: ModelParams, j: int,
               s_j: int, s_j1: int, sp_j1: int, sp_j: int) -> tuple[complex, complex]:
    """Face weight W_j(s_j, s_{j+1}, s'_{j+1}, s'_j) as (constant term, coefficient of t).

    Only s' in {s, s - 1} at both corners gives a nonzero weight. Boundary couplings are
    substituted at j = 0 and j = L, which reproduces the free-boundary weights.
    """
    N = params.N
    lower = (s_j - sp_j) % N
    upper = (s_j1 - sp_j1) % N
    if lower > 1 or upper > 1:
        return 0j, 0j

    omega = params.omega
    u = omega_power(N, (s_j - s_j1 + 1) % N)
    a_l, b_l, c_l, d_l = (params.coupling(name, 2 * j - 1) for name in COUPLING_NAMES)
    a_r, b_r, c_r, d_r = (params.coupling(name, 2 * j) for name in COUPLING_NAMES)

    match lower, upper:
        case 0, 0:
            return b_l * b_r, -u * c_l * c_r
        case 1, 0:
            return 0j, -omega * d_l * b_r + u * a_l * c_r
        case 0, 1:
            return b_l * d_r - u * c_l * a_r, 0j
        case _:
            return u * a_l * a_r, -omega * d_l * d_r


def _row_product(params: ModelParams, sigma: Sequence[int], sigma_p: Sequence[int],
                 boundary_spin: int) -> np.ndarray:
    """Coefficients in t of prod_j W_j for one pair of rows, degree at most L + 1."""
    L = params.L
    full = (boundary_spin, *sigma, boundary_spin)
    full_p = (boundary_spin, *sigma_p, boundary_spin)
    poly = np.zeros(L + 2, dtype=complex)
    poly[0] = 1.0
    for j in range(L + 1):
        w0, w1 = irf_weight(params, j, full[j], full[j + 1], full_p[j + 1], full_p[j])
        if w0 == 0 and w1 == 0:
            return np.zeros(L + 2, dtype=complex)
        shifted = np.concatenate(([0j], poly[:-1]))
        poly = w0 * poly + w1 * shifted
    return poly


def build_tau2(params: ModelParams, boundary_spin: int = 0,
               exhaustive: bool = False, trim: bool = True) -> MatrixPolynomial:
    """Assemble tau_2(t) from the face weights.

    The default path visits, for each row sigma, only the 2**L rows sigma' = sigma - delta with
    delta in {0, 1}**L; ``exhaustive`` visits all N**(2L) pairs through :py:func:`irf_weight`.

    :param params: Validated model.
    :param boundary_spin: Common value of sigma_0 and sigma'_0.
    :param exhaustive: Enumerate every pair of rows.
    :param trim: Drop the t**(L+1) coefficient, which vanishes identically.
    :return: Matrix polynomial in (omega t) of degree L (L + 1 untrimmed) with tau[0] = A0 * 1.
    """
    N, L, dim = params.N, params.L, params.dim
    t_coeffs = np.zeros((L + 2, dim, dim), dtype=complex)
    rows = list(itertools.product(range(N), repeat=L))

    if exhaustive:
        pairs = itertools.product(rows, rows)
    else:
        pairs = (
            (sigma, tuple((s - flip) % N for s, flip in zip(sigma, delta)))
            for sigma in rows
            for delta in itertools.product((0, 1), repeat=L)
        )

    for sigma, sigma_p in pairs:
        row = SpinConfig(N, sigma).index
        col = SpinConfig(N, sigma_p).index
        t_coeffs[:, row, col] += _row_product(params, sigma, sigma_p, boundary_spin)

    # The t**(L+1) coefficient always carries the t-free W_0 factor
    omega = params.omega
    size = L + 1 if trim else L + 2
    return MatrixPolynomial(tuple(t_coeffs[m] / omega ** m for m in range(size)))


def commuting_residual(tau: MatrixPolynomial) -> float:
    """Largest ||[tau_{2,m}, tau_{2,m'}]|| / (||tau_{2,m}|| ||tau_{2,m'}||) over all pairs."""
    worst = 0.0
    for m, m_p in itertools.combinations(range(len(tau)), 2):
        worst = max(worst, commutator_residual(tau[m], tau[m_p]))
    return worst


def degree_excess(tau: MatrixPolynomial, L: int) -> float:
    """Largest ||tau_{2,m}|| / (|A0| sqrt(dim)) for m > L; zero when no such coefficient is stored."""
    scale = norm(tau[0])
    return max((norm(tau[m]) / scale for m in range(L + 1, len(tau))), default=0.0)


@dataclass(frozen=True, eq=False)
class FunctionalRelation:
    """Result of multiplying tau_2(t) tau_2(omega t) ... tau_2(omega**(N-1) t)."""

    f: ScalarPolynomial
    off_identity: float
    off_period: float


def _functional_coefficients(tau: MatrixPolynomial, N: int) -> list[np.ndarray]:
    omega = omega_power(N, 1)
    # Coefficients in plain t
    in_t = tau.substitute(omega)
    product = in_t
    for k in range(1, N):
        product = mat_poly_product(product, in_t.substitute(omega ** k))
    return list(product.coeffs)


def functional_relation(tau: MatrixPolynomial, N: int) -> FunctionalRelation:
    """Compute the functional product and how far it is from f(t**N) * 1.

    ``off_identity`` is the largest ||P_n - c_n 1|| and ``off_period`` the largest ||P_n||
    for n not divisible by N, both relative to max_n ||P_n||.
    """
    coeffs = _functional_coefficients(tau, N)
    scale = max(norm(c) for c in coeffs)
    dim = tau.dim

    f_coeffs: list[complex] = []
    off_identity = 0.0
    off_period = 0.0
    for n, coeff in enumerate(coeffs):
        c, _ = scalar_part(coeff)
        off_identity = max(off_identity, norm(coeff - c * np.eye(dim)) / scale)
        if n % N:
            off_period = max(off_period, norm(coeff) / scale)
        else:
            f_coeffs.append(c)
    return FunctionalRelation(ScalarPolynomial(f_coeffs), off_identity, off_period)


def functional_product(tau: MatrixPolynomial, N: int, tol: float = 1e-9) -> ScalarPolynomial:
    """Return f(x) with tau_2(t) ... tau_2(omega**(N-1) t) = f(t**N) * 1, f(0) = A0**N.

    :raises NotScalar: If a coefficient of the product is not a multiple of the identity.
    :raises NotPeriodic: If a power of t not divisible by N survives.
    """
    relation = functional_relation(tau, N)
    if relation.off_identity > tol:
        raise NotScalar(f'functional product is not scalar (residual {relation.off_identity:.3e})')
    if relation.off_period > tol:
        raise NotPeriodic(f'functional product has powers of t not divisible by N (residual {relation.off_period:.3e})')
    return relation.f


@dataclass(frozen=True, eq=False)
class SpectralData:
    """A0, the normalized s_0 .. s_L, the mode parameters r_k and the grid lambda_{kN+p} = r_k omega**p.

    Modes are 0-based and sorted by (|r_k|, arg r_k); every arg r_k lies in [0, 2 pi / N).
    """

    N: int
    L: int
    A0: complex
    s: np.ndarray
    r: np.ndarray
    lambdas: np.ndarray = field(init=False)
    root_residuals: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 's', frozen(self.s))
        object.__setattr__(self, 'r', frozen(self.r))
        powers = np.array([omega_power(self.N, p) for p in range(self.N)])
        object.__setattr__(self, 'lambdas', frozen(np.outer(self.r, powers).ravel()))

        y = self.y
        exponents = np.arange(self.L, -1, -1)
        terms = self.s[None, :] * y[:, None] ** exponents[None, :]
        magnitude = np.abs(terms).sum(axis=1)
        residuals = np.abs(terms.sum(axis=1)) / magnitude
        residuals.setflags(write=False)
        object.__setattr__(self, 'root_residuals', residuals)

    @property
    def y(self) -> np.ndarray:
        """r_k**N."""
        return self.r ** self.N

    @property
    def size(self) -> int:
        return self.N * self.L

    def slot(self, i: int) -> tuple[int, int]:
        """Return (k, p) of the flat index i = kN + p."""
        return divmod(i, self.N)

    def flat(self, k: int, p: int) -> int:
        """Flat index of mode k, slot p (p taken mod N)."""
        return k * self.N + p % self.N

    def to_json(self) -> dict[str, Any]:
        """Dump data into a JSON representation, complex numbers as [re, im]."""
        return {
            'A0': complex_to_pair(self.A0),
            's': [complex_to_pair(v) for v in self.s],
            'r': [complex_to_pair(v) for v in self.r],
            'lambda': [complex_to_pair(v) for v in self.lambdas],
        }


def spectral_roots(f: ScalarPolynomial, A0: complex, N: int, L: int, gap_min: float = GAP_MIN_REL,
                   step_tol: float = DURAND_KERNER_STEP_TOL, max_iter: int = DURAND_KERNER_MAX_ITER) -> SpectralData:
    """Extract s_l, r_k and the lambda grid from the functional-relation polynomial.

    s_l = f_l / A0**N, so s_0 = 1 and sum_l s_l y**(L-l) vanishes at every y = r_k**N.

    :raises ZeroRoot: If s_L vanishes, i.e. some r_k = 0.
    :raises DegenerateSpectrum: If the lambda grid is not separated by ``gap_min``.
    """
    s = np.zeros(L + 1, dtype=complex)
    coeffs = np.asarray(f.coeffs, dtype=complex)[:L + 1] / complex(A0) ** N
    s[:coeffs.size] = coeffs

    if abs(s[L]) <= ZERO_ROOT_TOL * float(np.abs(s).max()):
        raise ZeroRoot(f's_{L} vanishes ({abs(s[L]):.3e}); some mode parameter r_k is zero')

    y = poly_roots(ScalarPolynomial(s[::-1]), step_tol, max_iter)
    modulus = np.abs(y) ** (1.0 / N)
    angle = np.mod(np.angle(y), 2 * np.pi) / N
    r = modulus * np.exp(1j * angle)
    order = np.lexsort((angle, modulus))
    r = r[order]

    spec = SpectralData(N, L, complex(A0), s, r)
    check_distinct(spec.lambdas, gap_min)
    return spec


def spectrum_of(params: ModelParams, gap_min: float = GAP_MIN_REL) -> tuple[MatrixPolynomial, SpectralData]:
    """Build tau_2 and extract its spectral data in one go."""
    tau = build_tau2(params)
    f = functional_product(tau, params.N)
    return tau, spectral_roots(f, params.A0, params.N, params.L, gap_min)
