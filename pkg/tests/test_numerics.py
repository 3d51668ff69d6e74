###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Tests for the polynomial, determinant and Vandermonde primitives."""
import warnings

import numpy as np
import pytest

from tau2_lab.exception_hook import DegenerateSpectrum
from tau2_lab.exception_hook import DimMismatch
from tau2_lab.exception_hook import LabError
from tau2_lab.exception_hook import NonConvergence
from tau2_lab.exception_hook import ZeroPolynomial
from tau2_lab.numerics import MatrixPolynomial
from tau2_lab.numerics import ScalarPolynomial
from tau2_lab.numerics import check_distinct
from tau2_lab.numerics import commutator_residual
from tau2_lab.numerics import frozen
from tau2_lab.numerics import lu_det
from tau2_lab.numerics import lu_logdet
from tau2_lab.numerics import mat_poly_product
from tau2_lab.numerics import min_gap
from tau2_lab.numerics import poly_roots
from tau2_lab.numerics import prony_inverse
from tau2_lab.numerics import relative_residual
from tau2_lab.numerics import scalar_part
from tau2_lab.utils import Lcg


def _sorted(values):
    return np.array(sorted(np.asarray(values, dtype=complex), key=lambda z: (round(z.real, 6), round(z.imag, 6))))


def test_frozen_is_read_only():
    array = frozen([[1, 2], [3, 4]])
    assert array.dtype == complex
    with pytest.raises(ValueError):
        array[0, 0] = 5


def test_relative_residual_and_commutator():
    a = np.diag([1.0, 2.0])
    assert relative_residual(a, a) == 0.0
    assert relative_residual(np.zeros((2, 2)), np.zeros((2, 2))) == 0.0
    assert commutator_residual(a, np.diag([3.0, -1.0])) == 0.0
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    z = np.diag([1.0, -1.0])
    assert commutator_residual(x, z) > 0.5


def test_scalar_part():
    c, residual = scalar_part(3.5j * np.eye(4))
    assert c == pytest.approx(3.5j)
    assert residual == pytest.approx(0.0, abs=1e-15)
    _, residual = scalar_part(np.diag([1.0, -1.0]))
    assert residual == pytest.approx(1.0)


@pytest.mark.parametrize(
    ('coeffs', 'expected'),
    [
        ([-1, 0, 1], [-1, 1]),
        ([6, -5, 1], [2, 3]),
        ([1, 0, 0, 1], [-1, np.exp(1j * np.pi / 3), np.exp(-1j * np.pi / 3)]),
        ([-2j, 1], [2j]),
    ]
)
def test_poly_roots_known(coeffs, expected):
    roots = poly_roots(ScalarPolynomial(np.array(coeffs, dtype=complex)))
    assert roots.size == len(expected)
    assert np.allclose(_sorted(roots), _sorted(expected), atol=1e-10)


def test_poly_roots_repeated_root_terminates():
    # (x - 1)**2 (x + 2)
    roots = poly_roots(ScalarPolynomial(np.array([2, -3, 0, 1], dtype=complex)))
    assert roots.size == 3
    assert np.sum(np.abs(roots - 1) < 1e-5) == 2
    assert np.min(np.abs(roots + 2)) < 1e-10


def test_poly_roots_random_degree_8():
    rng = Lcg(7)
    expected = rng.couplings(8)
    p = ScalarPolynomial(np.polynomial.polynomial.polyfromroots(expected))
    roots = poly_roots(p)
    for root in expected:
        assert np.min(np.abs(roots - root)) < 1e-9


def test_poly_roots_edge_cases():
    assert poly_roots(ScalarPolynomial(np.array([4.0]))).size == 0
    # Trailing zeros do not count towards the degree
    assert poly_roots(ScalarPolynomial(np.array([-1.0, 1.0, 0.0, 0.0]))).size == 1

    with pytest.raises(ZeroPolynomial):
        poly_roots(ScalarPolynomial(np.zeros(3)))
    with pytest.raises(NonConvergence), warnings.catch_warnings():
        warnings.simplefilter('ignore', RuntimeWarning)
        poly_roots(ScalarPolynomial(np.array([1, 2, 3, 4, 5, 6], dtype=complex)), max_iter=1)


def test_errors_are_lab_errors():
    assert issubclass(ZeroPolynomial, LabError)
    assert issubclass(DegenerateSpectrum, ArithmeticError)
    assert issubclass(DimMismatch, ValueError)


def test_matrix_polynomial_product():
    a = MatrixPolynomial.affine(np.eye(2), np.array([[0, 1], [0, 0]]))
    b = MatrixPolynomial.affine(np.eye(2), np.array([[0, 0], [1, 0]]))
    product = mat_poly_product(a, b)
    assert len(product) == 3
    for z in (0.3, -1.2 + 0.5j):
        assert np.allclose(product(z), a(z) @ b(z))
    assert np.array_equal(product[5], np.zeros((2, 2)))

    with pytest.raises(DimMismatch):
        mat_poly_product(a, MatrixPolynomial.constant(np.eye(3)))
    with pytest.raises(DimMismatch):
        MatrixPolynomial((np.eye(2), np.eye(3)))


def test_matrix_polynomial_substitute():
    p = MatrixPolynomial((np.eye(2), 2 * np.eye(2), 3 * np.eye(2)))
    q = p.substitute(1j)
    assert np.allclose(q(0.7), p(0.7j))
    assert p.degree == 2


def test_logdet_and_det():
    m = np.array([[2, 1], [1, 3]], dtype=complex)
    phase, logabs = lu_logdet(m)
    assert phase == pytest.approx(1.0)
    assert logabs == pytest.approx(np.log(5.0))
    assert lu_det(m) == pytest.approx(5.0)
    assert lu_det(np.zeros((3, 3))) == 0
    with pytest.raises(DimMismatch):
        lu_logdet(np.zeros((2, 3)))


def test_min_gap_and_distinct():
    assert min_gap([1.0]) == float('inf')
    assert min_gap([0, 1, 1.5]) == pytest.approx(0.5)
    check_distinct([1, 1j, -1])
    with pytest.raises(DegenerateSpectrum):
        check_distinct([1.0, 2.0, 1.0 + 1e-9])


@pytest.mark.parametrize('n', [2, 4, 6])
def test_prony_inverse(n):
    rng = Lcg(n)
    lambdas = rng.couplings(n)
    vs = prony_inverse(lambdas)
    assert vs.residual < 1e-9
    assert np.allclose(vs.inverse_rows @ vs.matrix, np.eye(n), atol=1e-9)
    for j in range(n):
        values = vs.lagrange(j)(lambdas)
        assert np.allclose(values, np.eye(n)[j], atol=1e-9)


def test_prony_roots_of_unity():
    # lambda = 1, -1: P = [[1, 1], [1, -1]], inverse = P / 2
    vs = prony_inverse([1.0, -1.0])
    assert np.allclose(vs.inverse_rows, np.array([[1, 1], [1, -1]]) / 2)


def test_prony_combine():
    vs = prony_inverse([1.0, -1.0])
    ops = [np.eye(2), np.diag([1.0, -1.0])]
    combined = vs.combine(ops)
    assert np.allclose(combined[0], np.diag([1.0, 0.0]))
    assert np.allclose(combined[1], np.diag([0.0, 1.0]))
    with pytest.raises(DimMismatch):
        vs.combine(ops[:1])


def test_prony_rejects_degenerate_nodes():
    with pytest.raises(DegenerateSpectrum):
        prony_inverse([1.0, 1.0, 2.0])
