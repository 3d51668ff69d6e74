###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Clock operators X, Z, Y, their embeddings in the chain, and the parafermions built from them."""
from __future__ import annotations

__all__ = (
    'ChainOperators',
    'ClockSite',
    'ParafermionSet',
    'algebra_residuals',
    'build_parafermions',
    'build_site_ops',
    'embed',
    'omega_power',
)

from dataclasses import dataclass
from functools import cached_property
from functools import reduce

import numpy as np

from .exception_hook import InvalidN
from .exception_hook import SiteOutOfRange
from .numerics import ComplexMatrix
from .numerics import frozen


def omega_power(N: int, x: float) -> complex:
    """Return omega**x = exp(2*pi*i*x/N), the principal branch for fractional x."""
    return complex(np.exp(2j * np.pi * x / N))


@dataclass(frozen=True, eq=False)
class ClockSite:
    """Single-site clock operators.

    X[s, s'] = delta(s, s' + 1 mod N), Z = diag(omega**s) and Y = omega**((N-1)/2) X^-1 Z.
    All three are unitary, so their inverses are conjugate transposes.
    """

    N: int
    X: ComplexMatrix
    Z: ComplexMatrix
    Y: ComplexMatrix

    @property
    def omega(self) -> complex:
        return omega_power(self.N, 1)

    @property
    def X_inv(self) -> ComplexMatrix:
        return frozen(self.X.conj().T)

    @property
    def Z_inv(self) -> ComplexMatrix:
        return frozen(self.Z.conj().T)

    @property
    def Y_inv(self) -> ComplexMatrix:
        return frozen(self.Y.conj().T)


def build_site_ops(N: int) -> ClockSite:
    """Build X, Z and Y for clock dimension ``N``.

    :raises InvalidN: If N < 2.
    """
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise InvalidN(f'clock dimension must be an integer >= 2, got {N!r}')

    X = np.roll(np.eye(N, dtype=complex), 1, axis=0)
    Z = np.diag([omega_power(N, s) for s in range(N)])
    Y = omega_power(N, (N - 1) / 2) * X.conj().T @ Z
    return ClockSite(N, frozen(X), frozen(Z), frozen(Y))


def embed(op: ComplexMatrix, j: int, L: int) -> ComplexMatrix:
    """Place a single-site operator on site ``j`` (1-based) of an ``L``-site chain.

    Site 1 is the most significant factor of the Kronecker product.

    :raises SiteOutOfRange: If j is outside 1..L.
    """
    if not 1 <= j <= L:
        raise SiteOutOfRange(f'site {j} outside 1..{L}')
    n = op.shape[0]
    left = np.eye(n ** (j - 1), dtype=complex)
    right = np.eye(n ** (L - j), dtype=complex)
    return frozen(np.kron(np.kron(left, op), right))


class ChainOperators:
    """Embedded clock operators of an L-site chain, indexed by 1-based site."""

    def __init__(self, N: int, L: int) -> None:
        """Build every embedded X, Z and Y.

        :raises InvalidN: If N < 2.
        :raises SiteOutOfRange: If L < 1.
        """
        if L < 1:
            raise SiteOutOfRange(f'chain needs at least one site, got L={L}')
        self.site: ClockSite = build_site_ops(N)
        self.N: int = N
        self.L: int = L
        self._x = tuple(embed(self.site.X, j, L) for j in range(1, L + 1))
        self._z = tuple(embed(self.site.Z, j, L) for j in range(1, L + 1))
        self._y = tuple(embed(self.site.Y, j, L) for j in range(1, L + 1))

    def __repr__(self) -> str:
        return f'<{type(self).__name__} N={self.N} L={self.L} dim={self.dim}>'

    @property
    def dim(self) -> int:
        return self.N ** self.L

    @property
    def omega(self) -> complex:
        return self.site.omega

    @cached_property
    def identity(self) -> ComplexMatrix:
        return frozen(np.eye(self.dim))

    def X(self, j: int) -> ComplexMatrix:
        return self._x[self._check(j)]

    def Z(self, j: int) -> ComplexMatrix:
        return self._z[self._check(j)]

    def Y(self, j: int) -> ComplexMatrix:
        return self._y[self._check(j)]

    def X_inv(self, j: int) -> ComplexMatrix:
        return self.X(j).conj().T

    def Z_inv(self, j: int) -> ComplexMatrix:
        return self.Z(j).conj().T

    def Y_inv(self, j: int) -> ComplexMatrix:
        return self.Y(j).conj().T

    def x_string(self, first: int, last: int) -> ComplexMatrix:
        """Return X_first X_{first+1} ... X_last, the identity when last < first."""
        if last < first:
            return self.identity
        return reduce(np.matmul, (self.X(j) for j in range(first, last + 1)))

    def _check(self, j: int) -> int:
        if not 1 <= j <= self.L:
            raise SiteOutOfRange(f'site {j} outside 1..{self.L}')
        return j - 1


@dataclass(frozen=True, eq=False)
class ParafermionSet:
    """The 2L parafermions psi_0 .. psi_{2L-1}.

    psi_{2j-2} = (X_1 ... X_{j-1}) Z_j^-1 and psi_{2j-1} = (X_1 ... X_{j-1}) Y_j^-1.
    """

    N: int
    L: int
    psi: tuple[ComplexMatrix, ...]

    def __getitem__(self, index: int) -> ComplexMatrix:
        return self.psi[index]

    def __len__(self) -> int:
        return len(self.psi)

    def inverse(self, index: int) -> ComplexMatrix:
        """psi_index^-1; every parafermion is unitary."""
        return self.psi[index].conj().T


def build_parafermions(N: int, L: int, ops: ChainOperators | None = None) -> ParafermionSet:
    """Build the parafermions of an L-site chain.

    :param ops: Reuse already embedded operators for the same (N, L).
    :raises InvalidN: If N < 2.
    """
    if ops is None:
        ops = ChainOperators(N, L)
    psi: list[ComplexMatrix] = []
    for j in range(1, L + 1):
        string = ops.x_string(1, j - 1)
        psi.append(frozen(string @ ops.Z_inv(j)))
        psi.append(frozen(string @ ops.Y_inv(j)))
    return ParafermionSet(N, L, tuple(psi))


def algebra_residuals(ops: ChainOperators, psi: ParafermionSet) -> dict[str, float]:
    """Absolute Frobenius residuals of the clock and parafermion relations.

    :return: Mapping of relation name to its largest residual over sites or index pairs.
    """
    site = ops.site
    N, omega = ops.N, ops.omega
    one = np.eye(N)
    Xn = np.linalg.matrix_power(site.X, N)
    Zn = np.linalg.matrix_power(site.Z, N)
    Yn = np.linalg.matrix_power(site.Y, N)
    y_alt = omega_power(N, (N + 1) / 2) * site.Z @ site.X_inv

    result = {
        'ZX=wXZ': float(np.linalg.norm(site.Z @ site.X - omega * site.X @ site.Z)),
        'X^N=1': float(np.linalg.norm(Xn - one)),
        'Z^N=1': float(np.linalg.norm(Zn - one)),
        'Y^N=1': float(np.linalg.norm(Yn - one)),
        'Y forms agree': float(np.linalg.norm(site.Y - y_alt)),
        'unitary': max(float(np.linalg.norm(m @ m.conj().T - one)) for m in (site.X, site.Z, site.Y)),
    }

    identity = ops.identity
    exchange = 0.0
    power = 0.0
    for j in range(len(psi)):
        power = max(power, float(np.linalg.norm(np.linalg.matrix_power(psi[j], N) - identity)))
        for k in range(j + 1, len(psi)):
            diff = psi[j] @ psi[k] - psi[k] @ psi[j] / omega
            exchange = max(exchange, float(np.linalg.norm(diff)))
    result['psi exchange'] = exchange
    result['psi^N=1'] = power
    result['psi_0=Z_1^-1'] = float(np.linalg.norm(psi[0] - ops.Z_inv(1)))
    return result
