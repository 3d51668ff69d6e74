###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Tests for the eigenbasis and the matrix-element structure of the raising operators."""
import itertools

import numpy as np
import pytest

from tau2_lab.eigenbasis import all_quantum_numbers
from tau2_lab.eigenbasis import basis_rank
from tau2_lab.eigenbasis import build_theta
from tau2_lab.eigenbasis import check_AP96
from tau2_lab.eigenbasis import check_gamma_structure
from tau2_lab.eigenbasis import check_quantum_numbers
from tau2_lab.eigenbasis import diagonalization_residuals
from tau2_lab.eigenbasis import eigen_relation_residuals
from tau2_lab.eigenbasis import exchange_ratio
from tau2_lab.eigenbasis import ground_state
from tau2_lab.eigenbasis import raising_ladder_residual
from tau2_lab.eigenbasis import theta_hat_defect
from tau2_lab.exception_hook import ZeroProjection
from tau2_lab.numerics import relative_residual
from tau2_lab.projector_engine import ProjectorFamily
from tau2_lab.utils import Lcg

T_SAMPLES = [0.3 + 0.1j, -0.7 + 0.4j, 1.1 - 0.9j]


def test_quantum_numbers():
    assert list(all_quantum_numbers(2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert check_quantum_numbers([1, 2], 3, 2) == (1, 2)
    with pytest.raises(ValueError):
        check_quantum_numbers((0, 3), 3, 2)
    with pytest.raises(ValueError):
        check_quantum_numbers((0,), 3, 2)


def test_index_matches_labels(chain):
    basis = chain.basis
    for i, n in enumerate(basis.labels):
        assert basis.index(n) == i
    assert basis.V.shape == (chain.params.dim, chain.params.dim)


def test_ground_state(chain):
    v0 = ground_state(chain.pf, 1)
    assert np.linalg.norm(v0) == pytest.approx(1.0)
    for k in range(chain.L):
        assert np.allclose(chain.pf.get(0, k) @ v0, v0, atol=1e-8)
    energy = chain.basis.eigenvalue((0,) * chain.L, 1)
    assert relative_residual(chain.H @ v0, energy * v0) < 1e-8
    # The phase is fixed: the first significant amplitude is real and positive
    first = v0[np.flatnonzero(np.abs(v0) > 1e-8 * np.abs(v0).max())[0]]
    assert first.imag == pytest.approx(0.0, abs=1e-12)
    assert first.real > 0


def test_ground_state_accepts_running_generator(chain32):
    v_seed = ground_state(chain32.pf, 7)
    v_rng = ground_state(chain32.pf, Lcg(7))
    assert np.allclose(v_seed, v_rng)


def test_ground_state_zero_projection():
    zero = np.zeros((2, 2), dtype=complex)
    pf = ProjectorFamily(2, 1, (zero, np.eye(2, dtype=complex)), (zero,))
    with pytest.raises(ZeroProjection):
        ground_state(pf, 1, trials=3)


def test_theta(chain32):
    gh = chain32.gh
    assert np.allclose(build_theta(gh, 0, 1), np.eye(9))
    assert np.allclose(build_theta(gh, 2, 0), gh.get(2, 0) @ gh.get(1, 0))
    with pytest.raises(ValueError):
        build_theta(gh, 3, 0)
    with pytest.raises(ValueError):
        build_theta(gh, -1, 0)


def test_eigen_relation(chain):
    residuals = eigen_relation_residuals(chain.basis, chain.tau, T_SAMPLES)
    assert len(residuals) == len(T_SAMPLES)
    assert max(residuals) < 1e-7


def test_basis_rank(chain):
    assert basis_rank(chain.basis) > 1e-8
    norms = np.linalg.norm(chain.basis.V, axis=0)
    assert np.allclose(norms, 1.0)


def test_diagonalization(chain):
    residuals = diagonalization_residuals(chain.basis, chain.tower, chain.pf, chain.tau)
    assert set(residuals) == {'hamiltonians', 'projectors', 'tau',
                              'hamiltonian_eigenvalues', 'projector_eigenvalues'}
    assert max(residuals.values()) < 1e-7


def test_raising_ladder(chain):
    assert raising_ladder_residual(chain.basis, chain.gh) < 1e-7


def test_raised_states_are_eigenvectors(chain32):
    # v_(1, 2) = Theta_{1,0} Theta_{2,1} v_0 up to normalization
    basis, gh = chain32.basis, chain32.gh
    v0 = basis.vector((0, 0))
    raised = build_theta(gh, 1, 0) @ build_theta(gh, 2, 1) @ v0
    target = basis.vector((1, 2))
    overlap = abs(np.vdot(target, raised)) / np.linalg.norm(raised)
    assert overlap == pytest.approx(1.0, abs=1e-8)


def test_gamma_structure(chain):
    structure = check_gamma_structure(chain.gs, chain.basis, chain.gh)
    assert set(structure) == {'forbidden', 'eigen_weights', 'template'}
    assert max(structure.values()) < 1e-7


def test_ap96(chain):
    result = check_AP96(chain.gs, chain.basis, seed=1)
    if chain.L < 2:
        assert result == {'identity': 0.0, 'intermediate': 0.0, 'ratios': 0.0, 'samples': 0}
        return
    N, L = chain.N, chain.L
    assert result['samples'] == L * (L - 1) * N ** L
    assert result['identity'] < 1e-7
    assert result['intermediate'] < 1e-7
    assert result['ratios'] < 1e-7


def test_ap96_sampling(chain32):
    sampled = check_AP96(chain32.gs, chain32.basis, seed=3, exhaustive_max=2, samples=5)
    assert sampled['samples'] == 5
    again = check_AP96(chain32.gs, chain32.basis, seed=3, exhaustive_max=2, samples=5)
    assert sampled == again


@pytest.mark.parametrize('N', [2, 3])
def test_theta_hat_defect_single_site(N, clock_chain_of):
    chain = clock_chain_of(N, (0.8 + 0.3j,), ())
    defect, c = theta_hat_defect(chain.gh, 0)
    assert abs(c) > 1e-8
    assert defect < 1e-8


def test_theta_hat_defect_reports(chain32):
    for k in range(2):
        defect, c = theta_hat_defect(chain32.gh, k)
        assert defect >= 0.0
        assert isinstance(c, complex)


def test_exchange_ratio(chain32):
    gh = chain32.gh
    for p, q in itertools.product(range(3), repeat=2):
        c, fit = exchange_ratio(gh, 0, 1, p, q)
        assert isinstance(c, complex)
        assert fit >= 0.0


def test_exchange_ratio_fits_commuting_pair(chain32):
    # Identical operators are exchanged with constant 1
    gh = chain32.gh
    hatted = type(gh)(gh.N, gh.L, (chain32.H,) * len(gh), gh.lambdas)
    c, fit = exchange_ratio(hatted, 0, 1, 0, 0)
    assert c == pytest.approx(1.0)
    assert fit == pytest.approx(0.0, abs=1e-12)


def test_basis_json(chain):
    data = chain.basis.to_json()
    assert (data['N'], data['L']) == (chain.N, chain.L)
    assert len(data['states']) == chain.params.dim
    assert data['states'][0]['n'] == [0] * chain.L
