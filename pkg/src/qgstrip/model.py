"""Period cells of the two lattice strips.

A :class:`StripModel` lists the edges of one Floquet cell and, for every
vertex, the ordered edge endpoints meeting there.  The order of endpoints at
a vertex is the cyclic order of the coupling matrix and therefore matters.
An endpoint carries a Bloch power ``m``: the wavefunction value seen at the
vertex is multiplied by ``exp(i m theta)``.

Edge ids are assigned by family (g, h, f, e) and then by column, so each
edge ``i`` owns the unknowns ``2i`` (coefficient of ``exp(-ikx)``) and
``2i + 1`` (coefficient of ``exp(ikx)``).
"""
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .coupling import CouplingMatrix, cyclic_matrix
from .errors import DomainError

FAMILY_ORDER = ("g", "h", "f", "e")
START, FINISH = "start", "finish"


class _Kirchhoff:
    """Marker for a trivial degree-2 vertex (value and derivative continuous)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "KIRCHHOFF"

    def __reduce__(self):
        return (_Kirchhoff, ())


KIRCHHOFF = _Kirchhoff()


@dataclass(frozen=True)
class EdgeSpec:
    id: int
    length: float
    family: str
    column: int

    @property
    def label(self):
        return f"{self.family}{self.column}"


@dataclass(frozen=True)
class EndpointRef:
    edge: int
    end: str
    bloch_power: int = 0


@dataclass(frozen=True)
class VertexSpec:
    id: int
    endpoints: Tuple[EndpointRef, ...]
    coupling: Union[CouplingMatrix, _Kirchhoff]

    @property
    def degree(self):
        return len(self.endpoints)


@dataclass(frozen=True)
class StripModel:
    name: str
    n_cells: int
    edges: Tuple[EdgeSpec, ...]
    vertices: Tuple[VertexSpec, ...]
    params: Tuple[Tuple[str, float], ...] = ()

    @property
    def unknowns(self):
        return 2 * len(self.edges)

    @property
    def lengths(self):
        return tuple(sorted({e.length for e in self.edges}))

    def edge(self, family, column):
        for e in self.edges:
            if e.family == family and e.column == column:
                return e
        raise KeyError(f"{family}{column}")

    def edges_in_column(self, column):
        return [e for e in self.edges if e.column == column]

    @property
    def columns(self):
        return sorted({e.column for e in self.edges})


def _make_edges(layout):
    """``layout`` maps family -> (count, length); ids follow FAMILY_ORDER."""
    edges = []
    for fam in FAMILY_ORDER:
        if fam not in layout:
            continue
        count, length = layout[fam]
        for j in range(1, count + 1):
            edges.append(EdgeSpec(len(edges), float(length), fam, j))
    return {(e.family, e.column): e.id for e in edges}, tuple(edges)


def _vertex(vid, *endpoints, coupling=None):
    eps = tuple(EndpointRef(*ep) for ep in endpoints)
    if coupling is None:
        coupling = cyclic_matrix(len(eps))
    return VertexSpec(vid, eps, coupling)


def _check_args(n, lengths):
    if int(n) != n or n < 1:
        raise DomainError(f"cell count N must be an integer >= 1, got {n!r}")
    for name, value in lengths.items():
        if not value > 0:
            raise DomainError(f"edge length {name} must be positive, got {value!r}")


def build_rectangular(n, l1, l2):
    """Strip of ``n`` cells cut from the rectangular lattice.

    Horizontal edges ``f_1..f_n`` have length ``l1``; vertical edges
    ``g_1..g_{n+1}`` have length ``l2`` and reach into the cell above at
    ``x = l2`` (Bloch power -1 there).  Boundary vertices have degree 3,
    interior ones degree 4.
    """
    _check_args(n, {"l1": l1, "l2": l2})
    n = int(n)
    ids, edges = _make_edges({"g": (n + 1, l2), "f": (n, l1)})
    g = lambda j: ids["g", j]  # noqa: E731
    f = lambda j: ids["f", j]  # noqa: E731

    vertices = [_vertex(0, (g(1), START), (g(1), FINISH, -1), (f(1), START))]
    for j in range(2, n + 1):
        vertices.append(_vertex(
            len(vertices), (g(j), START), (f(j - 1), FINISH), (g(j), FINISH, -1), (f(j), START)))
    vertices.append(_vertex(
        len(vertices), (g(n + 1), START), (f(n), FINISH), (g(n + 1), FINISH, -1)))
    return StripModel("rect", n, edges, tuple(vertices), (("l1", float(l1)), ("l2", float(l2))))


def build_brick(n, l1, l2, l3):
    """Strip of ``n`` cells cut from the slanted brick lattice.

    Families: vertical ``g_j, h_j`` (length ``l2``, ``j = 1..n+1``),
    horizontal ``f_j`` (``l1``) and slanted ``e_j`` (``l3``), ``j = 1..n``.
    All vertices except those on the left boundary line have odd degree.
    The left vertical line is split by a trivial Kirchhoff vertex joining
    ``g_1`` and ``h_1``.
    """
    _check_args(n, {"l1": l1, "l2": l2, "l3": l3})
    n = int(n)
    ids, edges = _make_edges({"g": (n + 1, l2), "h": (n + 1, l2), "f": (n, l1), "e": (n, l3)})
    g = lambda j: ids["g", j]  # noqa: E731
    h = lambda j: ids["h", j]  # noqa: E731
    f = lambda j: ids["f", j]  # noqa: E731
    e = lambda j: ids["e", j]  # noqa: E731

    vertices = []
    for j in range(1, n):
        vertices.append(_vertex(
            len(vertices), (e(j), FINISH), (g(j + 1), START), (e(j + 1), START),
            (f(j + 1), START), (h(j + 1), FINISH, 1)))
    for j in range(1, n + 1):
        vertices.append(_vertex(
            len(vertices), (f(j), FINISH), (h(j + 1), START, 1), (g(j + 1), FINISH, 1)))
    vertices.append(_vertex(
        len(vertices), (h(n + 1), FINISH, 1), (e(n), FINISH), (g(n + 1), START)))
    # left boundary, counter-clockwise: up (h_1), down (g_1), right-down (e_1), right (f_1)
    vertices.append(_vertex(
        len(vertices), (h(1), FINISH, 1), (g(1), START), (e(1), START), (f(1), START)))
    vertices.append(_vertex(
        len(vertices), (g(1), FINISH), (h(1), START), coupling=KIRCHHOFF))
    params = (("l1", float(l1)), ("l2", float(l2)), ("l3", float(l3)))
    return StripModel("brick", n, edges, tuple(vertices), params)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = "ok"
    endpoint: Optional[Tuple[int, str]] = None

    def __bool__(self):
        return self.ok


def validate(model):
    """Check edge ids, vertex degrees and that every edge end is used exactly once."""
    for i, e in enumerate(model.edges):
        if e.id != i:
            return ValidationReport(False, f"edge ids not contiguous at position {i} (id {e.id})")
        if not e.length > 0:
            return ValidationReport(False, f"edge {e.label} has nonpositive length {e.length}")
    n_edges = len(model.edges)
    for v in model.vertices:
        if v.coupling is KIRCHHOFF:
            if v.degree != 2:
                return ValidationReport(False, f"Kirchhoff vertex {v.id} must have degree 2, has {v.degree}")
        elif v.coupling.degree != v.degree:
            return ValidationReport(
                False, f"vertex {v.id}: coupling degree {v.coupling.degree} != {v.degree} endpoints")
        for ep in v.endpoints:
            if not 0 <= ep.edge < n_edges or ep.end not in (START, FINISH):
                return ValidationReport(False, f"vertex {v.id} references unknown endpoint {ep}")

    seen = Counter((ep.edge, ep.end) for v in model.vertices for ep in v.endpoints)
    for key, count in seen.items():
        if count > 1:
            label = model.edges[key[0]].label
            return ValidationReport(False, f"endpoint {label}.{key[1]} referenced {count} times", key)
    for e in model.edges:
        for end in (START, FINISH):
            if (e.id, end) not in seen:
                return ValidationReport(False, f"endpoint {e.label}.{end} not attached", (e.id, end))
    total = sum(v.degree for v in model.vertices)
    if total != 2 * n_edges:
        return ValidationReport(False, f"degree sum {total} != 2 * {n_edges} edges")
    return ValidationReport(True)


def dump(model):
    """Line-oriented text description of the cell, stable across runs."""
    lines = [f"model {model.name}", f"n_cells {model.n_cells}"]
    lines += [f"param {k} {v!r}" for k, v in model.params]
    for e in model.edges:
        lines.append(f"edge {e.id} {e.label} family={e.family} column={e.column} length={e.length!r}")
    for v in model.vertices:
        kind = "kirchhoff" if v.coupling is KIRCHHOFF else "cyclic"
        eps = " ".join(
            f"{model.edges[ep.edge].label}.{ep.end}{'' if ep.bloch_power == 0 else f'@{ep.bloch_power:+d}'}"
            for ep in v.endpoints)
        lines.append(f"vertex {v.id} degree={v.degree} coupling={kind} : {eps}")
    return "\n".join(lines) + "\n"
