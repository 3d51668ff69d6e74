###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Tests for the projectors built from the Hamiltonian tower."""
import numpy as np
import pytest

from tau2_lab.exception_hook import DimMismatch
from tau2_lab.hamiltonians import HamiltonianTower
from tau2_lab.numerics import commutator
from tau2_lab.numerics import prony_inverse
from tau2_lab.projector_engine import build_projectors
from tau2_lab.projector_engine import check_axioms
from tau2_lab.projector_engine import check_projector_gammahat
from tau2_lab.projector_engine import check_projector_tower
from tau2_lab.projector_engine import projector_traces
from tau2_lab.projector_engine import reconstruct_hamiltonians
from tau2_lab.projector_engine import reconstruct_tau


def test_family_shape(chain):
    pf = chain.pf
    assert (pf.N, pf.L) == (chain.N, chain.L)
    assert len(pf.P) == chain.N * chain.L
    assert len(pf.u) == chain.L
    assert pf.dim == chain.params.dim
    assert pf.get(chain.N, 0) is pf.P[0]


def test_axioms(chain):
    residuals = check_axioms(chain.pf)
    assert set(residuals) == {'idempotent', 'orthogonal', 'complete', 'commuting'}
    assert max(residuals.values()) < 1e-8


def test_traces(chain):
    residuals = projector_traces(chain.pf)
    assert residuals['trace'] < 1e-8
    assert residuals['weighted_trace_spread'] < 1e-8


def test_projectors_commute_with_tower(chain):
    assert check_projector_tower(chain.pf, chain.tower, chain.tower.M) < 1e-8


def test_reconstructions(chain):
    residuals = reconstruct_hamiltonians(chain.pf, chain.tower, chain.spec, range(chain.tower.M + 1))
    assert max(residuals.values()) < 1e-8
    assert max(reconstruct_tau(chain.pf, chain.tau, chain.spec)) < 1e-8


def test_projector_gamma_hat(chain):
    assert check_projector_gammahat(chain.pf, chain.gh) < 1e-8


def test_projector_gamma_hat_sign(chain32):
    # G_{q,l} takes n_l from q - 1 to q: [P_{q,l}, G] = G and [P_{q-1,l}, G] = -G
    pf, gh = chain32.pf, chain32.gh
    G = gh.get(2, 1)
    assert np.allclose(commutator(pf.get(2, 1), G), G, atol=1e-8 * np.linalg.norm(G))
    assert np.allclose(commutator(pf.get(1, 1), G), -G, atol=1e-8 * np.linalg.norm(G))
    assert np.allclose(commutator(pf.get(0, 1), G), 0, atol=1e-8 * np.linalg.norm(G))


def test_single_site_clock_projectors(clock_chain_of):
    # H = -X, so P_p = (1 + lambda_p X) / 2 with lambda = +-1
    chain = clock_chain_of(2, (1.0,), ())
    X = chain.ops.X(1)
    one = np.eye(2)
    assert np.allclose(sorted(chain.spec.lambdas.real), [-1, 1])
    for p in range(2):
        assert np.allclose(chain.pf.get(p, 0), (one + chain.spec.lambdas[p] * X) / 2)


def test_build_rejects_short_tower(chain32):
    vs = prony_inverse(chain32.spec.lambdas)
    short = HamiltonianTower(chain32.tower.H[:3])
    with pytest.raises(DimMismatch):
        build_projectors(short, vs)
