###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Dense complex linear algebra, scalar and matrix polynomials, root finding and Vandermonde inversion."""
from __future__ import annotations

__all__ = (
    'ComplexMatrix',
    'MatrixPolynomial',
    'ScalarPolynomial',
    'VandermondeSystem',
    'check_distinct',
    'commutator',
    'commutator_residual',
    'frozen',
    'identity',
    'lu_det',
    'lu_logdet',
    'mat_poly_product',
    'min_gap',
    'norm',
    'poly_roots',
    'prony_inverse',
    'relative_residual',
    'scalar_part',
)

import warnings
from collections.abc import Iterable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from typing import TypeAlias

import numpy as np
import numpy.typing as npt
from numpy.polynomial import polynomial as npoly

from .constants import *
from .exception_hook import DegenerateSpectrum
from .exception_hook import DimMismatch
from .exception_hook import NonConvergence
from .exception_hook import ZeroPolynomial

ComplexMatrix: TypeAlias = np.ndarray
"""Square complex128 array. Results returned by this package are read-only."""

_EPS: float = float(np.finfo(float).eps)


def frozen(values: npt.ArrayLike) -> np.ndarray:
    """Return a read-only complex copy of ``values``."""
    array = np.array(values, dtype=complex)
    array.setflags(write=False)
    return array


def identity(dim: int) -> ComplexMatrix:
    """Return the complex identity of dimension ``dim``."""
    return np.eye(dim, dtype=complex)


def norm(matrix: np.ndarray) -> float:
    """Frobenius norm (2-norm for vectors)."""
    return float(np.linalg.norm(matrix))


def relative_residual(actual: np.ndarray, expected: np.ndarray) -> float:
    """Return ||actual - expected|| relative to the larger operand norm.

    Falls back to the absolute difference when both operands vanish.
    """
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    diff = norm(actual - expected)
    scale = max(norm(actual), norm(expected))
    return diff / scale if scale > UNDERFLOW_GUARD else diff


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Return AB - BA."""
    return a @ b - b @ a


def commutator_residual(a: ComplexMatrix, b: ComplexMatrix) -> float:
    """Return ||[A, B]|| / (||A|| ||B||), absolute when either operand vanishes."""
    scale = norm(a) * norm(b)
    diff = norm(commutator(a, b))
    return diff / scale if scale > UNDERFLOW_GUARD else diff


def scalar_part(matrix: ComplexMatrix) -> tuple[complex, float]:
    """Split a matrix into its identity component.

    :return: (c, residual) with c = trace/dim and residual = ||M - c*1|| / ||M||.
    """
    dim = matrix.shape[0]
    c = complex(np.trace(matrix)) / dim
    off = matrix - c * np.eye(dim)
    scale = norm(matrix)
    return c, (norm(off) / scale if scale > UNDERFLOW_GUARD else norm(off))


def min_gap(values: Sequence[complex]) -> float:
    """Smallest pairwise distance between ``values``; infinite for fewer than two."""
    values = np.asarray(values, dtype=complex)
    if values.size < 2:
        return float('inf')
    dist = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(dist, np.inf)
    return float(dist.min())


def check_distinct(values: Sequence[complex], gap_min: float = GAP_MIN_REL) -> None:
    """Assert pairwise distinctness.

    :param gap_min: Minimum gap relative to max|value|.
    :raises DegenerateSpectrum: If two values are closer than gap_min * max|value|.
    """
    values = np.asarray(values, dtype=complex)
    if values.size < 2:
        return
    threshold = gap_min * float(np.abs(values).max())
    if (gap := min_gap(values)) <= threshold:
        raise DegenerateSpectrum(f'spectral values closer than {threshold:.3e} (gap {gap:.3e})')


@dataclass(frozen=True, eq=False)
class ScalarPolynomial:
    """Complex polynomial, coefficients in ascending degree. An empty array is the zero polynomial."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, 'coeffs', frozen(np.ravel(self.coeffs)))

    def __call__(self, x: complex | np.ndarray) -> complex | np.ndarray:
        if self.coeffs.size == 0:
            return np.zeros_like(np.asarray(x, dtype=complex))
        return npoly.polyval(x, self.coeffs)

    def __len__(self) -> int:
        return self.coeffs.size

    @property
    def degree(self) -> int:
        """Index of the highest nonzero coefficient, -1 for the zero polynomial."""
        nonzero = np.flatnonzero(self.coeffs)
        return int(nonzero[-1]) if nonzero.size else -1

    def trimmed(self, rel_tol: float = 0.0) -> ScalarPolynomial:
        """Drop trailing coefficients with |c| <= rel_tol * max|c|."""
        if self.coeffs.size == 0:
            return self
        cutoff = rel_tol * float(np.abs(self.coeffs).max())
        keep = np.flatnonzero(np.abs(self.coeffs) > cutoff)
        return ScalarPolynomial(self.coeffs[:keep[-1] + 1] if keep.size else [])


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """Polynomial with square matrix coefficients; ``coeffs[m]`` multiplies z**m."""

    coeffs: tuple[ComplexMatrix, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(frozen(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError('a matrix polynomial needs at least one coefficient')
        shape = coeffs[0].shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise DimMismatch(f'coefficients must be square, got shape {shape}')
        for m, c in enumerate(coeffs):
            if c.shape != shape:
                raise DimMismatch(f'coefficient {m} has shape {c.shape}, expected {shape}')
        object.__setattr__(self, 'coeffs', coeffs)

    def __call__(self, z: complex) -> ComplexMatrix:
        """Evaluate by Horner's rule."""
        result = np.zeros((self.dim, self.dim), dtype=complex)
        for c in reversed(self.coeffs):
            result = result * z + c
        return result

    def __getitem__(self, m: int) -> ComplexMatrix:
        """Coefficient of z**m, zero beyond the stored degree."""
        if 0 <= m < len(self.coeffs):
            return self.coeffs[m]
        return np.zeros((self.dim, self.dim), dtype=complex)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __mul__(self, other: MatrixPolynomial) -> MatrixPolynomial:
        return mat_poly_product(self, other)

    def __sub__(self, other: MatrixPolynomial) -> MatrixPolynomial:
        if other.dim != self.dim:
            raise DimMismatch(f'cannot subtract dim {other.dim} from dim {self.dim}')
        size = max(len(self), len(other))
        return MatrixPolynomial(tuple(self[m] - other[m] for m in range(size)))

    @classmethod
    def constant(cls, matrix: ComplexMatrix) -> MatrixPolynomial:
        """Degree-0 polynomial."""
        return cls((matrix,))

    @classmethod
    def affine(cls, c0: ComplexMatrix, c1: ComplexMatrix) -> MatrixPolynomial:
        """Polynomial c0 + z*c1."""
        return cls((c0, c1))

    @property
    def dim(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def degree(self) -> int:
        """Nominal degree (number of stored coefficients minus one)."""
        return len(self.coeffs) - 1

    def substitute(self, factor: complex) -> MatrixPolynomial:
        """Return p(factor * z)."""
        return MatrixPolynomial(tuple(c * factor ** m for m, c in enumerate(self.coeffs)))

    def scaled(self, factor: complex) -> MatrixPolynomial:
        """Return factor * p(z)."""
        return MatrixPolynomial(tuple(c * factor for c in self.coeffs))

    def left(self, matrix: ComplexMatrix) -> MatrixPolynomial:
        """Return M * p(z)."""
        return MatrixPolynomial(tuple(matrix @ c for c in self.coeffs))

    def right(self, matrix: ComplexMatrix) -> MatrixPolynomial:
        """Return p(z) * M."""
        return MatrixPolynomial(tuple(c @ matrix for c in self.coeffs))


def mat_poly_product(a: MatrixPolynomial, b: MatrixPolynomial) -> MatrixPolynomial:
    """Multiply two matrix polynomials; the coefficient of z**m is sum_j A_j B_{m-j}.

    :raises DimMismatch: If the coefficient dimensions differ.
    """
    if a.dim != b.dim:
        raise DimMismatch(f'cannot multiply dim {a.dim} by dim {b.dim}')

    out = [np.zeros((a.dim, a.dim), dtype=complex) for _ in range(len(a) + len(b) - 1)]
    for i, ca in enumerate(a.coeffs):
        if not ca.any():
            continue
        for j, cb in enumerate(b.coeffs):
            out[i + j] += ca @ cb
    return MatrixPolynomial(tuple(out))


def lu_logdet(matrix: ComplexMatrix) -> tuple[complex, float]:
    """Return (phase, log|det|) from a pivoted LU factorization.

    :raises DimMismatch: If the matrix is not square.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimMismatch(f'determinant needs a square matrix, got shape {matrix.shape}')
    sign, logabs = np.linalg.slogdet(matrix)
    return complex(sign), float(logabs)


def lu_det(matrix: ComplexMatrix) -> complex:
    """Determinant via pivoted elimination; singular matrices give 0."""
    sign, logabs = lu_logdet(matrix)
    if sign == 0 or not np.isfinite(logabs):
        return 0j
    return sign * np.exp(logabs)


def poly_roots(p: ScalarPolynomial,
               step_tol: float = DURAND_KERNER_STEP_TOL,
               max_iter: int = DURAND_KERNER_MAX_ITER) -> np.ndarray:
    """Find every root of ``p`` with multiplicity by simultaneous (Durand-Kerner) iteration.

    Initial guesses sit on a circle of radius 1 + max|a_m / a_n|, rotated off the real axis.
    Iteration stops once the largest relative step is below ``step_tol`` or every residual is at
    rounding level, which is how clustered and repeated roots terminate.

    :param p: Polynomial with ascending coefficients; trailing exact zeros are ignored.
    :param step_tol: Relative step size at convergence.
    :param max_iter: Iteration cap.
    :return: Array of ``p.degree`` complex roots.
    :raises ZeroPolynomial: If every coefficient vanishes.
    :raises NonConvergence: If the iteration cap is reached.
    """
    if (degree := p.degree) < 0:
        raise ZeroPolynomial('cannot find roots of the zero polynomial')
    if degree == 0:
        return np.zeros(0, dtype=complex)

    coeffs = np.array(p.coeffs[:degree + 1], dtype=complex)
    monic = coeffs / coeffs[-1]
    abs_monic = np.abs(monic)
    radius = 1.0 + float(abs_monic[:-1].max())
    z = radius * np.exp(1j * (2.0 * np.pi * np.arange(degree) / degree + 0.4))

    for _ in range(max_iter):
        pz = npoly.polyval(z, monic)
        diffs = z[:, None] - z[None, :]
        np.fill_diagonal(diffs, 1.0)
        step = pz / diffs.prod(axis=1)
        z = z - step

        scale = np.maximum(np.abs(z), 1.0)
        if np.all(np.abs(step) <= step_tol * scale):
            break
        # Backward-error bound: residual indistinguishable from rounding in the evaluation
        noise = 16.0 * degree * _EPS * npoly.polyval(np.abs(z), abs_monic)
        if np.all(np.abs(npoly.polyval(z, monic)) <= noise):
            break
    else:
        raise NonConvergence(f'root iteration did not converge within {max_iter} iterations (degree {degree})')

    bound = ROOT_RESIDUAL_TOL * float(np.abs(coeffs).max())
    if (worst := float(np.abs(npoly.polyval(z, coeffs)).max())) > bound:
        warnings.warn(f'root residual {worst:.3e} above advisory bound {bound:.3e}', RuntimeWarning, stacklevel=2)
    return z


@dataclass(frozen=True, eq=False)
class VandermondeSystem:
    """Vandermonde matrix P_ij = lambda_j**i with its inverse from Lagrange (Prony) polynomials.

    Row j of ``inverse_rows`` holds the ascending coefficients of
    f_j(z) = prod_{i != j} (z - lambda_i) / (lambda_j - lambda_i).
    """

    lambdas: np.ndarray
    inverse_rows: np.ndarray
    residual: float = field(default=0.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'lambdas', frozen(self.lambdas))
        object.__setattr__(self, 'inverse_rows', frozen(self.inverse_rows))

    @property
    def size(self) -> int:
        return self.lambdas.size

    @property
    def matrix(self) -> np.ndarray:
        """The Vandermonde matrix, powers down the rows."""
        return np.vander(self.lambdas, self.size, increasing=True).T

    def lagrange(self, j: int) -> ScalarPolynomial:
        """Return f_j."""
        return ScalarPolynomial(self.inverse_rows[j])

    def combine(self, operators: Sequence[ComplexMatrix]) -> list[ComplexMatrix]:
        """Return sum_m Pinv[i, m] * operators[m] for every i."""
        stack = np.asarray(operators[:self.size])
        if stack.shape[0] != self.size:
            raise DimMismatch(f'need {self.size} operators, got {stack.shape[0]}')
        combined = np.tensordot(self.inverse_rows, stack, axes=(1, 0))
        return [frozen(m) for m in combined]


def prony_inverse(lambdas: Iterable[complex], gap_min: float = GAP_MIN_REL) -> VandermondeSystem:
    """Invert the Vandermonde matrix of ``lambdas`` in closed form.

    :param lambdas: Pairwise distinct nodes.
    :param gap_min: Minimum gap relative to max|lambda|.
    :raises DegenerateSpectrum: If two nodes are not separated by the gap.
    """
    lams = np.array(list(lambdas), dtype=complex)
    check_distinct(lams, gap_min)

    rows = np.empty((lams.size, lams.size), dtype=complex)
    for j, lam in enumerate(lams):
        others = np.delete(lams, j)
        rows[j] = npoly.polyfromroots(others) / np.prod(lam - others)

    product = np.vander(lams, lams.size, increasing=True).T @ rows
    residual = float(np.abs(product - np.eye(lams.size)).max())
    if residual > PRONY_TOL:
        warnings.warn(f'Vandermonde inverse residual {residual:.3e} above {PRONY_TOL:.0e}', RuntimeWarning, stacklevel=2)
    return VandermondeSystem(lams, rows, residual)
