"""Preferred-orientation vertex coupling and its scattering matrix.

At a vertex of degree ``d`` the boundary values ``Psi`` and outward
derivatives ``Psi'`` satisfy ``(U - I) Psi + i (U + I) Psi' = 0`` where ``U``
is the single-cycle permutation matrix with ones at ``(i, i+1 mod d)``.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularityError
from .linalg import solve


@dataclass(frozen=True)
class CouplingMatrix:
    degree: int
    matrix: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ScatteringMatrix:
    degree: int
    k: float
    matrix: np.ndarray = field(repr=False)

    @property
    def eta(self):
        return (1.0 - self.k) / (1.0 + self.k)


def cyclic_matrix(d):
    """The ``d x d`` cyclic coupling matrix; row ``d`` has its one in column 1."""
    if int(d) != d or d < 2:
        raise DomainError(f"vertex degree must be an integer >= 2, got {d!r}")
    d = int(d)
    u = np.zeros((d, d), dtype=np.complex128)
    u[np.arange(d), (np.arange(d) + 1) % d] = 1.0
    u.setflags(write=False)
    return CouplingMatrix(d, u)


def _pencil(u, k):
    eye = np.eye(u.degree)
    minus = (u.matrix - eye) - k * (u.matrix + eye)
    plus = (u.matrix - eye) + k * (u.matrix + eye)
    return minus, plus


def scattering(u, k):
    """Vertex scattering matrix ``S(k)`` mapping incoming to outgoing amplitudes.

    With ``psi = a exp(-ikx) + b exp(ikx)`` on each edge (``x = 0`` at the
    vertex) the matching condition gives ``b = S(k) a`` with
    ``S(k) = -[(U-I) - k(U+I)]^{-1} [(U-I) + k(U+I)]``.
    """
    if not k > 0:
        raise DomainError(f"momentum must be positive, got {k!r}")
    minus, plus = _pencil(u, k)
    try:
        s = -solve(minus, plus)
    except SingularityError as exc:
        raise SingularityError(f"vertex pencil singular at k={k!r}", k=k) from exc
    return ScatteringMatrix(u.degree, float(k), s)


def transmission_probabilities(u, k):
    """Entrywise ``|S(k)_ij|**2``; rows sum to one."""
    return np.abs(scattering(u, k).matrix) ** 2
