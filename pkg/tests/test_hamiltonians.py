###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Tests for the Hamiltonian forms, the clock limit and the higher Hamiltonians."""
import numpy as np
import pytest

from tau2_lab.clock_algebra import ChainOperators
from tau2_lab.clock_algebra import build_parafermions
from tau2_lab.exception_hook import InvalidParams
from tau2_lab.hamiltonians import ClockSpecialParams
from tau2_lab.hamiltonians import build_H_clock
from tau2_lab.hamiltonians import build_H_explicit
from tau2_lab.hamiltonians import build_H_parafermion
from tau2_lab.hamiltonians import clock_limit
from tau2_lab.hamiltonians import higher_hamiltonians
from tau2_lab.hamiltonians import predicted_eigenvalue
from tau2_lab.hamiltonians import reconstruct_tau_from_tower
from tau2_lab.hamiltonians import spectrum_determinants
from tau2_lab.hamiltonians import tower_commutation_residual
from tau2_lab.numerics import relative_residual
from tau2_lab.transfer_matrix import ModelParams
from tau2_lab.utils import Lcg


def test_forms_agree(chain):
    params = chain.params
    assert relative_residual(chain.H, build_H_parafermion(params, chain.psi)) < 1e-10
    assert relative_residual(chain.H, chain.tau[1] / params.A0) < 1e-10


def test_form_rejects_foreign_operators():
    params = ModelParams.random(2, 2, Lcg(3))
    with pytest.raises(InvalidParams):
        build_H_explicit(params, ChainOperators(3, 2))
    with pytest.raises(InvalidParams):
        build_H_parafermion(params, build_parafermions(2, 3))


@pytest.mark.parametrize(('N', 'L'), [(2, 1), (2, 3), (3, 2), (4, 2)])
def test_clock_limit(N, L):
    rng = Lcg(N * 10 + L)
    clock = ClockSpecialParams(N, rng.couplings(L), rng.couplings(L - 1))
    ops = ChainOperators(N, L)
    params = clock_limit(clock)
    assert np.all(params.a == 0)
    assert np.all(params.b == 1)
    assert relative_residual(build_H_explicit(params, ops), build_H_clock(clock, ops)) < 1e-12


def test_clock_params_validation():
    with pytest.raises(InvalidParams):
        ClockSpecialParams(2, np.ones(3), np.ones(3))
    clock = ClockSpecialParams(3, np.array([1.0, 2.0]), np.array([0.5]))
    assert clock.L == 2
    assert clock.to_json()['gamma'] == [[0.5, 0.0]]


def test_tower_basics(chain):
    tower = chain.tower
    assert tower.M == chain.N * chain.L + 2
    assert len(tower) == tower.M + 1
    assert np.allclose(tower[0], -chain.L * np.eye(chain.params.dim))
    assert relative_residual(tower[1], chain.H) < 1e-10
    assert tower_commutation_residual(tower) < 1e-10


def test_tower_order_is_irrelevant(chain):
    right = higher_hamiltonians(chain.tau, chain.tower.M, chain.L, order='right')
    for m in range(1, chain.tower.M + 1):
        assert relative_residual(right[m], chain.tower[m]) < 1e-10


def test_tau_from_tower(chain):
    again = reconstruct_tau_from_tower(chain.tower, chain.params.A0, chain.L)
    for m in range(chain.L + 1):
        assert relative_residual(again[m], chain.tau[m]) < 1e-9


def test_tower_eigenvalues(chain):
    # H[m] has spectrum -sum_k lambda_{k, n_k}**m
    for m in (1, 2, chain.N + 1):
        eigenvalues = np.linalg.eigvals(chain.tower[m])
        scale = np.linalg.norm(chain.tower[m], 2)
        for n in np.ndindex(*(chain.N,) * chain.L):
            predicted = predicted_eigenvalue(chain.spec, n, m)
            assert np.min(np.abs(eigenvalues - predicted)) < 1e-7 * scale


def test_single_site_clock_tower(clock_chain_of):
    chain = clock_chain_of(2, (1.0,), ())
    r = chain.spec.r[0]
    assert abs(r) == pytest.approx(1.0)
    assert np.allclose(chain.H, -chain.ops.X(1))
    assert np.allclose(chain.tower[2], -r ** 2 * np.eye(2))
    assert np.allclose(chain.tower[3], -chain.ops.X(1))


def test_predicted_eigenvalue_validation(chain32):
    assert predicted_eigenvalue(chain32.spec, (0, 0), 0) == pytest.approx(-2)
    with pytest.raises(ValueError):
        predicted_eigenvalue(chain32.spec, (0, 3), 1)
    with pytest.raises(ValueError):
        predicted_eigenvalue(chain32.spec, (0,), 1)


def test_det_oracle(chain):
    values = spectrum_determinants(chain.H, chain.spec)
    assert len(values) == chain.params.dim
    assert max(values.values()) < -10.0


def test_det_oracle_rejects_wrong_energy(chain32):
    spec = chain32.spec
    shifted = type(spec)(spec.N, spec.L, spec.A0, spec.s, spec.r * 1.5)
    wrong = spectrum_determinants(chain32.H, shifted)
    right = spectrum_determinants(chain32.H, spec)
    assert min(wrong.values()) > max(right.values()) + 5.0
