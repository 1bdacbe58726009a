"""Diagnostics on solved modes: per-edge quantities, decay across the strip, currents."""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .bands import find_roots, is_excluded
from .errors import DomainError
from .secular import edge_norm_sq, extract_modes

EDGE_CSV_HEADER = "family,column,a_re,a_im,b_re,b_im,sum_sq,flux_sq"
SUMMARY_CSV_HEADER = "k,theta,suppression_ratio,column_slopes,current"


@dataclass(frozen=True)
class EdgeRecord:
    edge_id: int
    family: str
    column: int
    a: complex
    b: complex
    sum_sq: float
    flux_sq: float
    norm: float

    @property
    def label(self):
        return f"{self.family}{self.column}"


def edge_quantities(mode, model):
    """``|a|^2 + |b|^2``, ``||b|^2 - |a|^2|`` and the L2 norm for every edge, in edge id order."""
    out = []
    for e in model.edges:
        a, b = mode.edge_coeffs(e.id)
        a2, b2 = abs(a) ** 2, abs(b) ** 2
        out.append(EdgeRecord(e.id, e.family, e.column, complex(a), complex(b), a2 + b2,
                              abs(b2 - a2), math.sqrt(max(edge_norm_sq(a, b, mode.k, e.length), 0.0))))
    return out


def column_order(records):
    """Records reordered column by column, families g, h, f, e within a column."""
    rank = {"g": 0, "h": 1, "f": 2, "e": 3}
    return sorted(records, key=lambda r: (r.column, rank[r.family]))


def _require(model, name):
    if model.name != name:
        raise DomainError(f"operation needs a {name!r} model, got {model.name!r}")


def boundary_suppression(mode, model):
    """Largest L2 norm over the leftmost and rightmost vertical edges of a rectangular strip."""
    _require(model, "rect")
    recs = edge_quantities(mode, model)
    n = model.n_cells
    return max(r.norm for r in recs if r.family == "g" and r.column in (1, n + 1))


def boundary_ratio(mode, model):
    """Boundary vertical-edge norm over the largest interior vertical-edge norm."""
    _require(model, "rect")
    recs = edge_quantities(mode, model)
    n = model.n_cells
    inner = [r.norm for r in recs if r.family == "g" and 1 < r.column < n + 1]
    if not inner:
        inner = [r.norm for r in recs if r.family == "f"]
    return boundary_suppression(mode, model) / max(inner)


def column_maxima(mode, model):
    """Largest coefficient modulus in each column; returns ``[(column, max), ...]``."""
    out = []
    for j in model.columns:
        vals = []
        for e in model.edges_in_column(j):
            a, b = mode.edge_coeffs(e.id)
            vals += [abs(a), abs(b)]
        out.append((j, max(vals)))
    return out


def column_decay(mode, model):
    """``log10(m_{j+1} / m_j)`` for successive column maxima of a brick strip."""
    _require(model, "brick")
    m = [v for _, v in column_maxima(mode, model)]
    return [math.log10(m[j + 1] / m[j]) for j in range(len(m) - 1)]


def probability_current(mode, edge_id):
    """Relative current ``(|a|^2 - |b|^2) / (|a|^2 + |b|^2)`` on one edge."""
    a, b = mode.edge_coeffs(edge_id)
    a2, b2 = abs(a) ** 2, abs(b) ** 2
    if a2 + b2 == 0:
        raise DomainError(f"current undefined on edge {edge_id}: zero amplitude")
    return (a2 - b2) / (a2 + b2)


@dataclass(frozen=True)
class DecayReport:
    k: float
    theta: float
    records: Tuple[EdgeRecord, ...]
    suppression_ratio: float
    column_slopes: Tuple[float, ...]
    current: float

    def edges_csv(self):
        lines = [EDGE_CSV_HEADER]
        for r in column_order(self.records):
            lines.append(
                f"{r.family},{r.column},{r.a.real:.12g},{r.a.imag:.12g},{r.b.real:.12g},"
                f"{r.b.imag:.12g},{r.sum_sq:.12g},{r.flux_sq:.12g}")
        return "\n".join(lines) + "\n"

    def summary_csv(self):
        slopes = ";".join(f"{s:.12g}" for s in self.column_slopes)
        return (f"{SUMMARY_CSV_HEADER}\n{self.k:.12g},{self.theta:.12g},"
                f"{self.suppression_ratio:.12g},{slopes},{self.current:.12g}\n")


def decay_report(mode, model, current_edge=0):
    """Bundle the diagnostics for one mode.

    The suppression ratio is the boundary/interior vertical-edge norm ratio
    for rectangular strips and last/first column maximum for brick strips.
    """
    recs = edge_quantities(mode, model)
    if model.name == "rect":
        ratio, slopes = boundary_ratio(mode, model), ()
    else:
        maxima = [v for _, v in column_maxima(mode, model)]
        ratio, slopes = maxima[-1] / maxima[0], tuple(column_decay(mode, model))
    try:
        current = probability_current(mode, current_edge)
    except DomainError:
        current = float("nan")
    return DecayReport(mode.k, mode.theta, tuple(recs), ratio, slopes, current)


def _unflagged_modes(model, k_lo, k_hi, exclusion_k, theta=0.0):
    lengths = model.lengths
    for k in find_roots(model, theta, k_lo, k_hi):
        if exclusion_k and is_excluded(k, lengths, exclusion_k):
            continue
        yield from extract_modes(model, k, theta)


def boundary_decay_exponent(model, window_starts, width=7.0, exclusion_k=0.3):
    """Least-squares slope of ``log(boundary norm)`` against ``log(k)``.

    Uses every unflagged theta = 0 mode found in the windows
    ``[k0, k0 + width]``.  Returns ``(slope, ks, norms)``.
    """
    _require(model, "rect")
    ks, norms = [], []
    for k0 in window_starts:
        for mode in _unflagged_modes(model, k0, k0 + width, exclusion_k):
            ks.append(mode.k)
            norms.append(boundary_suppression(mode, model))
    ks, norms = np.array(ks), np.array(norms)
    slope = float(np.polyfit(np.log(ks), np.log(norms), 1)[0])
    return slope, ks, norms


def column_ratio_offsets(model, window_starts, width=7.0, exclusion_k=0.3):
    """Median of ``log10(m_{j+1}/m_j) + log10(k)`` per window.

    Zero means the per-column amplitude ratio equals ``1/k`` exactly.
    Returns ``{k0: median offset}`` over unflagged theta = 0 modes and all
    column steps in ``[k0, k0 + width]``.
    """
    _require(model, "brick")
    out = {}
    for k0 in window_starts:
        offsets = []
        for mode in _unflagged_modes(model, k0, k0 + width, exclusion_k):
            offsets += [s + math.log10(mode.k) for s in column_decay(mode, model)]
        out[k0] = float(np.median(offsets)) if offsets else float("nan")
    return out
