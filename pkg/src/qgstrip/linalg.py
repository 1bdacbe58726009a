"""Dense complex linear algebra used by the secular solver.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The sizes
involved are tiny (at most a few dozen rows) so everything goes through a
full SVD; robustness matters more than speed here.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ShapeError, SingularityError

DEFAULT_RANK_TOL = 1e-8


def as_cmatrix(m, square=False):
    """Return ``m`` as a finite 2-D complex128 array.

    Raises ``ShapeError`` for non-2-D (or, with ``square=True``, non-square)
    input and ``ValueError`` when an entry is NaN or infinite.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def fix_phase(v):
    """Rotate ``v`` so its largest-magnitude entry is real and positive."""
    v = np.asarray(v, dtype=np.complex128)
    if v.size == 0:
        return v
    i = int(np.argmax(np.abs(v)))
    if v[i] == 0:
        return v.copy()
    return v * (abs(v[i]) / v[i])


def mat_mul(a, b):
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def _svd(m):
    try:
        return np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD of {m.shape[0]}x{m.shape[1]} matrix did not converge: {exc}") from exc


def singular_values(m):
    """Singular values of a square matrix, in nonincreasing order."""
    m = as_cmatrix(m, square=True)
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD did not converge: {exc}") from exc


@dataclass(frozen=True)
class SmallestSingularResult:
    sigma_min: float
    right_vector: np.ndarray
    sigma_max: float


def smallest_singular(m):
    """Smallest singular value of ``m`` and a unit right singular vector.

    The vector's global phase is fixed with :func:`fix_phase` so results are
    reproducible.
    """
    m = as_cmatrix(m, square=True)
    _, s, vh = _svd(m)
    v = fix_phase(vh[-1].conj())
    return SmallestSingularResult(float(s[-1]), v, float(s[0]))


def null_space(m, tol=DEFAULT_RANK_TOL):
    """Orthonormal basis of right singular vectors with sigma <= tol * sigma_max.

    Returns a list of unit vectors (possibly empty), each phase-fixed.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    m = as_cmatrix(m, square=True)
    _, s, vh = _svd(m)
    cutoff = tol * s[0]
    return [fix_phase(vh[i].conj()) for i in range(len(s)) if s[i] <= cutoff]


def solve(m, rhs, rcond=1e-14):
    """Solve ``m @ x = rhs``; raise ``SingularityError`` if ``m`` is singular to ``rcond``."""
    m = as_cmatrix(m, square=True)
    rhs = np.asarray(rhs, dtype=np.complex128)
    if rhs.shape[0] != m.shape[0]:
        raise ShapeError(f"rhs length {rhs.shape[0]} does not match matrix size {m.shape[0]}")
    s = singular_values(m)
    if s[0] == 0 or s[-1] <= rcond * s[0]:
        raise SingularityError(f"matrix is singular to tolerance (cond >= {1 / rcond:.1e})")
    return np.linalg.solve(m, rhs)
