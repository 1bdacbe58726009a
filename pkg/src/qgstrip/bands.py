"""Root location in k at fixed quasimomentum and Brillouin-zone sweeps.

Spectral momenta are the zeros of ``sigma_min(M(k, theta))``.  That function
is nonnegative with V-shaped zeros, so sign-change bracketing is useless:
roots are bracketed as local minima on a uniform k grid, narrowed with a
bounded golden-section/Brent search and then polished with Newton steps on
the linearized pencil ``M(k) + dk M'(k)``.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .errors import BandLostError, DomainError
from .secular import assemble, sigma_min

DEFAULT_GRID_STEP = 0.002
DEFAULT_ROOT_TOL = 1e-8
DEFAULT_THETA_STEPS = 24
MERGE_TOL = 1e-6
CSV_SCHEMA = "# qgstrip bands v1"


def _sigma(model, k, theta, assembler):
    return float(sigma_min(model, k, theta, assembler))


def _pencil_shifts(model, k, theta, assembler):
    """Eigenvalues ``dk`` of ``M(k) + dk M'(k)``: linearized offsets to nearby roots."""
    h = 1e-6 * max(1.0, abs(k))
    m = assembler(model, k, theta)
    dm = (assembler(model, k + h, theta) - assembler(model, k - h, theta)) / (2 * h)
    w = scipy.linalg.eigvals(m, -dm)
    return w[np.isfinite(w)]


def _newton_polish(model, k, theta, assembler, lo, hi, steps=6):
    """Newton iteration on the smallest eigenvalue of the linearized pencil.

    Steps that leave ``[lo, hi]`` or fail to reduce sigma_min are rejected.
    """
    best_k, best_s = k, _sigma(model, k, theta, assembler)
    for _ in range(steps):
        w = _pencil_shifts(model, k, theta, assembler)
        if w.size == 0:
            break
        dk = float(np.real(w[np.argmin(np.abs(w))]))
        k = k + dk
        if not lo <= k <= hi:
            break
        s = _sigma(model, k, theta, assembler)
        if s < best_s:
            best_k, best_s = k, s
        if abs(dk) <= 1e-14 * abs(k):
            break
    return float(best_k), float(best_s)


def refine_root(model, lo, hi, theta, assembler=assemble):
    """Minimize sigma_min on ``[lo, hi]``; returns ``(k, relative sigma_min)``."""
    res = minimize_scalar(lambda x: _sigma(model, x, theta, assembler), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-11})
    k0, s0 = float(res.x), float(res.fun)
    k1, s1 = _newton_polish(model, k0, theta, assembler, lo, hi)
    return (k1, s1) if s1 < s0 else (k0, s0)


def _companions(model, k, theta, assembler, reach, root_tol):
    """Roots within ``reach`` of the root ``k`` that the grid cannot separate from it."""
    out = {}
    for w in _pencil_shifts(model, k, theta, assembler):
        if abs(w.imag) > 1e-3 * abs(w) or not 1e-9 * k < abs(w) <= reach:
            continue
        guess = k + w.real
        half = max(abs(w.real) / 2, 1e-9 * k)
        k1, s1 = _newton_polish(model, guess, theta, assembler, guess - half, guess + half)
        if s1 <= root_tol:
            out[float(k1)] = float(s1)
    return out


def _local_minima(s):
    n = len(s)
    idx = []
    for i in range(n):
        left = s[i - 1] if i > 0 else np.inf
        right = s[i + 1] if i < n - 1 else np.inf
        if s[i] <= left and s[i] < right:
            idx.append(i)
    return idx


def _merge(roots, tol=MERGE_TOL):
    out = []
    for k in sorted(roots):
        if out and k - out[-1] <= tol:
            continue
        out.append(k)
    return out


def find_roots(model, theta, k_min, k_max, grid_step=DEFAULT_GRID_STEP,
               root_tol=DEFAULT_ROOT_TOL, assembler=assemble, with_sigma=False):
    """All spectral momenta in ``[k_min, k_max]`` at quasimomentum ``theta``.

    A grid local minimum of sigma_min is accepted as a root once refinement
    brings the relative sigma_min to ``root_tol`` or below.  Each accepted
    root is then probed for neighbours closer than the grid can resolve,
    using the real eigenvalues of its linearized pencil as starting points.
    Roots closer than ``1e-6`` are merged.  With ``with_sigma=True`` returns
    ``(k, sigma)`` pairs instead of bare momenta.
    """
    if not 0 < k_min < k_max:
        raise DomainError(f"need 0 < k_min < k_max, got [{k_min}, {k_max}]")
    if not grid_step > 0:
        raise DomainError("grid_step must be positive")
    n = max(3, int(math.ceil((k_max - k_min) / grid_step)) + 1)
    ks = np.linspace(k_min, k_max, n)
    s = sigma_min(model, ks, theta, assembler)
    found = {}
    for i in _local_minima(s):
        lo, hi = ks[max(i - 1, 0)], ks[min(i + 1, n - 1)]
        k, sig = refine_root(model, lo, hi, theta, assembler)
        if sig <= root_tol and k_min <= k <= k_max:
            found[k] = sig
            near = _companions(model, k, theta, assembler, 2 * grid_step, root_tol)
            found.update((c, v) for c, v in near.items() if k_min <= c <= k_max)
    roots = _merge(found)
    return [(k, found[k]) for k in roots] if with_sigma else roots


def theta_grid(steps):
    """Uniform grid of ``steps`` points on ``(-pi, pi]``; contains 0 for even ``steps``."""
    if int(steps) != steps or steps < 2:
        raise DomainError(f"theta_steps must be an integer >= 2, got {steps!r}")
    steps = int(steps)
    return [math.pi * (2 * (i + 1) - steps) / steps for i in range(steps)]


def dirichlet_distance(k, lengths):
    """Smallest ``|k l - n pi|`` over ``lengths``; returns ``(distance, length, n)``."""
    best = None
    for length in lengths:
        n = int(round(k * length / math.pi))
        dist = abs(k * length - n * math.pi)
        if best is None or dist < best[0]:
            best = (dist, length, n)
    return best


def is_excluded(k, lengths, exclusion_k):
    """True when ``k`` lies in some window ``((n pi - K)/l, (n pi + K)/l)``."""
    return dirichlet_distance(k, lengths)[0] < exclusion_k


@dataclass(frozen=True)
class BandPoint:
    theta: float
    k: float
    sigma_min: float
    flat: bool = False


@dataclass(frozen=True)
class BandDataset:
    model: str
    params: Tuple[Tuple[str, float], ...]
    lengths: Tuple[float, ...]
    theta_values: Tuple[float, ...]
    points: Tuple[BandPoint, ...]
    k_min: float
    k_max: float
    grid_step: float
    root_tol: float
    exclusion_k: Optional[float] = None

    def at_theta(self, theta):
        return [p for p in self.points if p.theta == theta]

    def to_csv(self):
        lines = [CSV_SCHEMA, "theta,k,flat_flag,sigma_min"]
        for p in self.points:
            lines.append(f"{p.theta:.12g},{p.k:.12g},{int(p.flat)},{p.sigma_min:.12g}")
        return "\n".join(lines) + "\n"


def flag_flat_bands(ds, exclusion_k):
    """Mark points inside the excluded windows around ``n pi / l`` for every edge length."""
    if not 0 < exclusion_k < math.pi / 2:
        raise DomainError(f"exclusion K must lie in (0, pi/2), got {exclusion_k!r}")
    pts = tuple(replace(p, flat=is_excluded(p.k, ds.lengths, exclusion_k)) for p in ds.points)
    return replace(ds, points=pts, exclusion_k=exclusion_k)


def dispersion(model, theta_steps=DEFAULT_THETA_STEPS, k_min=100.0, k_max=107.0,
               grid_step=DEFAULT_GRID_STEP, root_tol=DEFAULT_ROOT_TOL, exclusion_k=None,
               workers=None):
    """Roots at every theta of :func:`theta_grid` collected into a :class:`BandDataset`.

    ``workers > 1`` scans the theta values on a thread pool; the output does
    not depend on it.
    """
    thetas = theta_grid(theta_steps)

    def scan(theta):
        return theta, find_roots(model, theta, k_min, k_max, grid_step, root_tol, with_sigma=True)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan, thetas))
    else:
        results = [scan(t) for t in thetas]

    points = [BandPoint(theta, k, sig) for theta, roots in results for k, sig in roots]
    points.sort(key=lambda p: (p.theta, p.k))
    lengths = tuple(sorted({e.length for e in model.edges}))
    ds = BandDataset(model.name, model.params, lengths, tuple(thetas), tuple(points),
                     float(k_min), float(k_max), float(grid_step), float(root_tol))
    if exclusion_k:
        ds = flag_flat_bands(ds, exclusion_k)
    return ds


def narrow_band_near(ds, k_target, tol=0.05):
    """True if every theta of ``ds`` has a root within ``tol`` of ``k_target``."""
    return all(any(abs(p.k - k_target) <= tol for p in ds.at_theta(t)) for t in ds.theta_values)


def _nearest_root(model, theta, k_pred, half_width, grid_step, root_tol):
    lo = max(k_pred - half_width, 1e-9)
    hi = k_pred + half_width
    step = min(grid_step, (hi - lo) / 40)
    roots = find_roots(model, theta, lo, hi, step, root_tol)
    if not roots:
        return None
    return min(roots, key=lambda k: abs(k - k_pred))


def follow_band(model, anchor_k, theta_values, grid_step=DEFAULT_GRID_STEP,
                root_tol=DEFAULT_ROOT_TOL, min_window=0.02, retries=2):
    """Track one band through ``theta_values`` starting from its root nearest ``anchor_k`` at 0.

    ``theta_values`` must contain 0.  Each step searches a window of
    ``max(5 * |slope| * dtheta, min_window)`` around the linear prediction
    and keeps the nearest root; an empty window is retried ``retries``
    times at double the width.  Returns ``[(theta, k), ...]`` sorted by
    theta; raises :class:`BandLostError` naming the last good theta.
    """
    thetas = sorted(theta_values)
    if 0.0 not in thetas:
        raise DomainError("theta_values must contain 0")
    k0 = _nearest_root(model, 0.0, anchor_k, max(10 * min_window, 5 * grid_step), grid_step, root_tol)
    if k0 is None:
        raise BandLostError(f"no root near anchor k={anchor_k} at theta=0", last_theta=None)
    i0 = thetas.index(0.0)
    track = {0.0: k0}
    for path in (thetas[i0 + 1:], thetas[:i0][::-1]):
        prev_t, prev_k, slope = 0.0, k0, 0.0
        for t in path:
            dt = abs(t - prev_t)
            pred = prev_k + slope * (t - prev_t)
            width = max(5 * abs(slope) * dt, min_window)
            k = None
            for _ in range(retries + 1):
                k = _nearest_root(model, t, pred, width, grid_step, root_tol)
                if k is not None:
                    break
                width *= 2
            if k is None:
                raise BandLostError(f"band lost after theta={prev_t:.6g} (k={prev_k:.6g})",
                                    last_theta=prev_t)
            slope = (k - prev_k) / (t - prev_t)
            prev_t, prev_k = t, k
            track[t] = k
    return sorted(track.items())
