###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Projection operators onto fixed quantum numbers, built from the Hamiltonian tower."""
from __future__ import annotations

__all__ = (
    'ProjectorFamily',
    'build_projectors',
    'check_axioms',
    'check_projector_gammahat',
    'check_projector_tower',
    'projector_traces',
    'reconstruct_hamiltonians',
    'reconstruct_tau',
)

import itertools
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .constants import *
from .hamiltonians import HamiltonianTower
from .numerics import ComplexMatrix
from .numerics import MatrixPolynomial
from .numerics import VandermondeSystem
from .numerics import commutator
from .numerics import frozen
from .numerics import mat_poly_product
from .numerics import norm
from .numerics import relative_residual
from .raising_operators import HattedGammas
from .transfer_matrix import SpectralData


@dataclass(frozen=True, eq=False)
class ProjectorFamily:
    """Projectors P[kN + p] onto n_k = p, and u_k = sum_p r_k omega**p P[kN + p]."""

    N: int
    L: int
    P: tuple[ComplexMatrix, ...]
    u: tuple[ComplexMatrix, ...]

    def get(self, p: int, k: int) -> ComplexMatrix:
        """Projector onto n_k = p; p is taken mod N, k is 0-based."""
        return self.P[k * self.N + p % self.N]

    @property
    def dim(self) -> int:
        return self.P[0].shape[0]


def build_projectors(tower: HamiltonianTower, vs: VandermondeSystem) -> ProjectorFamily:
    """P_i = -sum_{m=0}^{NL-1} Pinv[i, m] H[m], with H[0] = -L * 1 included.

    :raises DimMismatch: If the tower is shorter than the Vandermonde system.
    """
    projectors = tuple(frozen(-p) for p in vs.combine(tower.H[:vs.size]))
    # H[0] = -L * 1 carries the number of modes
    L = round(-complex(tower[0][0, 0]).real)
    N = vs.size // L
    u = tuple(
        frozen(sum(vs.lambdas[k * N + p] * projectors[k * N + p] for p in range(N)))
        for k in range(L)
    )
    return ProjectorFamily(N, L, projectors, u)


def check_axioms(pf: ProjectorFamily) -> dict[str, float]:
    """Idempotency, orthogonality within a mode, completeness per mode, and commutation of every pair.

    Residuals are Frobenius norms relative to sqrt(dim), the norm of a rank-dim projector.
    """
    N, L = pf.N, pf.L
    scale = np.sqrt(pf.dim)
    identity = np.eye(pf.dim)

    idempotent = max(norm(P @ P - P) for P in pf.P) / scale
    orthogonal = 0.0
    complete = 0.0
    for k in range(L):
        for p, q in itertools.permutations(range(N), 2):
            orthogonal = max(orthogonal, norm(pf.get(p, k) @ pf.get(q, k)) / scale)
        complete = max(complete, norm(sum(pf.get(p, k) for p in range(N)) - identity) / scale)
    commuting = max((norm(commutator(a, b)) / scale for a, b in itertools.combinations(pf.P, 2)), default=0.0)

    return {
        'idempotent': idempotent,
        'orthogonal': orthogonal,
        'complete': complete,
        'commuting': commuting,
    }


def projector_traces(pf: ProjectorFamily) -> dict[str, float]:
    """How far traces are from N**(L-1), and the spread of sum_p p tr(P_{p,k}) over modes."""
    expected = pf.N ** (pf.L - 1)
    trace_error = max(abs(complex(np.trace(P)) - expected) for P in pf.P) / expected
    weighted = [sum(p * complex(np.trace(pf.get(p, k))) for p in range(pf.N)) for k in range(pf.L)]
    reference = max(1.0, max(abs(w) for w in weighted))
    spread = max(abs(w - weighted[0]) for w in weighted) / reference
    return {'trace': trace_error, 'weighted_trace_spread': spread}


def check_projector_tower(pf: ProjectorFamily, tower: HamiltonianTower, mmax: int) -> float:
    """Largest ||[P_i, H[m]]|| / (||P_i|| ||H[m]||) for 1 <= m <= mmax."""
    worst = 0.0
    for P in pf.P:
        for m in range(1, mmax + 1):
            scale = norm(P) * norm(tower[m])
            if scale > UNDERFLOW_GUARD:
                worst = max(worst, norm(commutator(P, tower[m])) / scale)
    return worst


def reconstruct_hamiltonians(pf: ProjectorFamily, tower: HamiltonianTower,
                             spec: SpectralData, mrange: Iterable[int]) -> dict[int, float]:
    """Relative residual of H[m] + sum_i lambda_i**m P_i for every m in ``mrange``."""
    result = {}
    for m in mrange:
        spectral = sum(lam ** m * P for lam, P in zip(spec.lambdas, pf.P))
        result[m] = relative_residual(tower[m], -spectral)
    return result


def reconstruct_tau(pf: ProjectorFamily, tau: MatrixPolynomial, spec: SpectralData) -> list[float]:
    """Expand A0 prod_k (1 - z u_k) in z = omega t and compare coefficient-wise with tau.

    :return: Relative residual per coefficient, m = 0..L.
    """
    identity = np.eye(pf.dim, dtype=complex)
    product = MatrixPolynomial.constant(spec.A0 * identity)
    for u in pf.u:
        product = mat_poly_product(product, MatrixPolynomial.affine(identity, -u))
    size = max(len(product), len(tau))
    return [relative_residual(product[m], tau[m]) for m in range(size)]


def check_projector_gammahat(pf: ProjectorFamily, gh: HattedGammas) -> float:
    """Largest ||[P_{p,k}, G_{q,l}] - d_kl (d_{p,q} - d_{p,q-1}) G_{q,l}|| / ||G_{q,l}||.

    G_{q,l} takes n_l from q - 1 to q, so only P_{q,l} and P_{q-1,l} fail to commute with it.
    Deltas on p and q are cyclic.
    """
    N, L = pf.N, pf.L
    worst = 0.0
    for k, ell in itertools.product(range(L), repeat=2):
        for p, q in itertools.product(range(N), repeat=2):
            G = gh.get(q, ell)
            expected = np.zeros_like(G)
            if k == ell:
                expected = ((p == q) - (p == (q - 1) % N)) * G
            diff = norm(commutator(pf.get(p, k), G) - expected)
            scale = norm(G)
            worst = max(worst, diff / scale if scale > UNDERFLOW_GUARD else diff)
    return worst
