###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Tests for the clock operators and parafermions."""
import itertools

import numpy as np
import pytest

from tau2_lab.clock_algebra import ChainOperators
from tau2_lab.clock_algebra import algebra_residuals
from tau2_lab.clock_algebra import build_parafermions
from tau2_lab.clock_algebra import build_site_ops
from tau2_lab.clock_algebra import embed
from tau2_lab.clock_algebra import omega_power
from tau2_lab.exception_hook import InvalidN
from tau2_lab.exception_hook import SiteOutOfRange


def test_site_ops_n2_are_pauli():
    site = build_site_ops(2)
    assert np.allclose(site.X, [[0, 1], [1, 0]])
    assert np.allclose(site.Z, np.diag([1, -1]))
    # Y = i X Z = sigma_y up to the choice of sign
    assert np.allclose(site.Y, 1j * site.X @ site.Z)


def test_site_ops_n3_y_form():
    site = build_site_ops(3)
    omega = omega_power(3, 1)
    assert np.allclose(site.Y, omega ** 2 * site.Z @ site.X_inv)
    # X shifts |s> to |s + 1>
    assert np.allclose(site.X @ np.eye(3)[0], np.eye(3)[1])


@pytest.mark.parametrize('N', [2, 3, 4, 5])
def test_site_relations(N):
    site = build_site_ops(N)
    omega = site.omega
    one = np.eye(N)
    assert np.allclose(site.Z @ site.X, omega * site.X @ site.Z)
    for op in (site.X, site.Z, site.Y):
        assert np.allclose(np.linalg.matrix_power(op, N), one)


@pytest.mark.parametrize('N', [0, 1, -3, 2.5])
def test_invalid_n(N):
    with pytest.raises(InvalidN):
        build_site_ops(N)


def test_embed_ordering():
    site = build_site_ops(2)
    assert np.allclose(embed(site.Z, 1, 2), np.kron(site.Z, np.eye(2)))
    assert np.allclose(embed(site.Z, 2, 2), np.kron(np.eye(2), site.Z))
    with pytest.raises(SiteOutOfRange):
        embed(site.Z, 0, 2)
    with pytest.raises(SiteOutOfRange):
        embed(site.Z, 3, 2)


def test_chain_operators():
    ops = ChainOperators(3, 2)
    assert ops.dim == 9
    assert np.allclose(ops.X(1) @ ops.X_inv(1), np.eye(9))
    assert np.allclose(ops.x_string(2, 1), np.eye(9))
    assert np.allclose(ops.x_string(1, 2), ops.X(1) @ ops.X(2))
    # Different sites commute
    assert np.allclose(ops.Z(1) @ ops.X(2), ops.X(2) @ ops.Z(1))
    with pytest.raises(SiteOutOfRange):
        ops.Y(3)
    with pytest.raises(SiteOutOfRange):
        ChainOperators(3, 0)


@pytest.mark.parametrize(('N', 'L'), [(2, 1), (2, 3), (3, 2), (4, 2), (3, 3)])
def test_algebra_residuals(N, L):
    ops = ChainOperators(N, L)
    psi = build_parafermions(N, L, ops)
    assert len(psi) == 2 * L
    residuals = algebra_residuals(ops, psi)
    assert max(residuals.values()) <= 1e-12


def test_parafermion_exchange_pairs():
    N, L = 3, 2
    psi = build_parafermions(N, L)
    omega = omega_power(N, 1)
    for j, k in itertools.combinations(range(2 * L), 2):
        assert np.allclose(psi[j] @ psi[k], psi[k] @ psi[j] / omega)
    assert np.allclose(psi.inverse(1) @ psi[1], np.eye(N ** L))


def test_omega_half_integer_power():
    assert omega_power(2, 0.5) == pytest.approx(1j)
    assert omega_power(4, 4) == pytest.approx(1.0)
