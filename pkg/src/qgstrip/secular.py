"""Secular matrix of a strip cell and normalized Bloch modes.

On every edge ``psi(x) = a exp(-ikx) + b exp(ikx)`` with ``x`` in
``(0, length)``.  The unknown vector is ``(a_0, b_0, a_1, b_1, ...)`` in edge
id order.  Two encodings of the vertex conditions are provided:

* :func:`assemble` writes ``(U - I) Psi + i (U + I) Psi' = 0`` directly;
* :func:`assemble_via_scattering` writes ``S(k) in - out = 0`` with the
  incoming/outgoing plane-wave amplitudes at each vertex.

Both have the same null space; the second is only used as a cross-check.
Both accept an array of momenta and then return a stack of matrices.
"""
from dataclasses import dataclass

import numpy as np

from .coupling import scattering
from .errors import DomainError, NoModeError
from .linalg import DEFAULT_RANK_TOL, null_space, singular_values
from .model import FINISH, KIRCHHOFF

_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


def _momenta(k):
    ks = np.asarray(k, dtype=float)
    if np.any(~(ks > 0)):
        raise DomainError("momentum k must be positive")
    return ks


def _endpoint_terms(ep, length, k, theta):
    """Boundary value and outward derivative of ``exp(-ikx)``, ``exp(ikx)`` at an endpoint.

    Returns ``(va, vb, da, db)``, each broadcast against ``k`` and including
    the Bloch factor.
    """
    ph = np.exp(1j * ep.bloch_power * theta)
    ones = np.ones_like(k, dtype=np.complex128)
    if ep.end == FINISH:
        em = np.exp(-1j * k * length)
        ep_ = np.exp(1j * k * length)
        return ph * em, ph * ep_, 1j * k * ph * em, -1j * k * ph * ep_
    return ph * ones, ph * ones, -1j * k * ph, 1j * k * ph


def _amplitudes(ep, length, k, theta):
    """Incoming/outgoing amplitude weights ``(in_a, in_b, out_a, out_b)`` at an endpoint."""
    ph = np.exp(1j * ep.bloch_power * theta)
    zero = np.zeros_like(k, dtype=np.complex128)
    if ep.end == FINISH:
        return zero, ph * np.exp(1j * k * length), ph * np.exp(-1j * k * length), zero
    return ph + zero, zero, zero, ph + zero


def assemble(model, k, theta):
    """Direct secular matrix ``M(k, theta)`` of size ``2 * len(model.edges)``."""
    ks = _momenta(k)
    flat = np.atleast_1d(ks)
    n = model.unknowns
    m = np.zeros((flat.size, n, n), dtype=np.complex128)
    row = 0
    for v in model.vertices:
        d = v.degree
        terms = [_endpoint_terms(ep, model.edges[ep.edge].length, flat, theta) for ep in v.endpoints]
        if v.coupling is KIRCHHOFF:
            (va0, vb0, da0, db0), (va1, vb1, da1, db1) = terms
            e0, e1 = v.endpoints[0].edge, v.endpoints[1].edge
            # value continuity, then outward derivatives summing to zero
            m[:, row, 2 * e0] += va0
            m[:, row, 2 * e0 + 1] += vb0
            m[:, row, 2 * e1] -= va1
            m[:, row, 2 * e1 + 1] -= vb1
            m[:, row + 1, 2 * e0] += da0
            m[:, row + 1, 2 * e0 + 1] += db0
            m[:, row + 1, 2 * e1] += da1
            m[:, row + 1, 2 * e1 + 1] += db1
        else:
            u = v.coupling.matrix
            val_op = u - np.eye(d)
            der_op = 1j * (u + np.eye(d))
            for i, (ep, (va, vb, da, db)) in enumerate(zip(v.endpoints, terms)):
                col_a, col_b = 2 * ep.edge, 2 * ep.edge + 1
                m[:, row:row + d, col_a] += va[:, None] * val_op[:, i] + da[:, None] * der_op[:, i]
                m[:, row:row + d, col_b] += vb[:, None] * val_op[:, i] + db[:, None] * der_op[:, i]
        row += d
    return m[0] if ks.ndim == 0 else m


def assemble_via_scattering(model, k, theta):
    """Secular matrix built from vertex scattering matrices, ``S(k) in - out = 0``.

    Raises ``SingularityError`` if a vertex pencil is singular at ``k``.
    """
    ks = _momenta(k)
    flat = np.atleast_1d(ks)
    n = model.unknowns
    m = np.zeros((flat.size, n, n), dtype=np.complex128)
    smats = {}
    row = 0
    for v in model.vertices:
        d = v.degree
        if v.coupling is KIRCHHOFF:
            s = np.broadcast_to(_SWAP, (flat.size, 2, 2))
        else:
            if d not in smats:
                smats[d] = np.stack([scattering(v.coupling, kk).matrix for kk in flat])
            s = smats[d]
        for i, ep in enumerate(v.endpoints):
            in_a, in_b, out_a, out_b = _amplitudes(ep, model.edges[ep.edge].length, flat, theta)
            col_a, col_b = 2 * ep.edge, 2 * ep.edge + 1
            m[:, row:row + d, col_a] += s[:, :, i] * in_a[:, None]
            m[:, row:row + d, col_b] += s[:, :, i] * in_b[:, None]
            m[:, row + i, col_a] -= out_a
            m[:, row + i, col_b] -= out_b
        row += d
    return m[0] if ks.ndim == 0 else m


def sigma_min(model, k, theta, assembler=assemble):
    """Relative smallest singular value ``sigma_min / sigma_max`` of the secular matrix.

    Vectorized over ``k``.
    """
    s = np.linalg.svd(assembler(model, k, theta), compute_uv=False)
    return s[..., -1] / s[..., 0]


def edge_norm_sq(a, b, k, length):
    """``int_0^length |a exp(-ikx) + b exp(ikx)|^2 dx`` in closed form."""
    cross = a * np.conj(b) * (1.0 - np.exp(-2j * k * length)) / (2j * k)
    return float(((abs(a) ** 2 + abs(b) ** 2) * length + 2.0 * np.real(cross)))


def cell_norm_sq(model, coeffs, k):
    return sum(edge_norm_sq(coeffs[2 * e.id], coeffs[2 * e.id + 1], k, e.length) for e in model.edges)


@dataclass(frozen=True)
class BlochMode:
    """One solved spectral point with its cell-normalized coefficient vector."""

    k: float
    theta: float
    coeffs: np.ndarray
    residual: float
    multiplicity: int = 1

    def edge_coeffs(self, edge_id):
        return self.coeffs[2 * edge_id], self.coeffs[2 * edge_id + 1]


def extract_modes(model, k, theta, tol=DEFAULT_RANK_TOL):
    """Null vectors of ``M(k, theta)``, each normalized to unit L2 norm on the cell.

    Returns one :class:`BlochMode` per basis vector of the null space; raises
    :class:`NoModeError` (carrying the relative ``sigma_min``) when the null
    space is empty at tolerance ``tol``.
    """
    m = assemble(model, float(k), float(theta))
    basis = null_space(m, tol)
    s = singular_values(m)
    if not basis:
        rel = s[-1] / s[0]
        raise NoModeError(
            f"no mode at k={k!r}, theta={theta!r}: sigma_min/sigma_max = {rel:.3e} > tol {tol:.1e}",
            sigma_min=rel)
    modes = []
    for raw in basis:
        residual = float(np.linalg.norm(m @ raw) / s[0])
        norm = np.sqrt(cell_norm_sq(model, raw, k))
        modes.append(BlochMode(float(k), float(theta), raw / norm, residual, len(basis)))
    return modes
