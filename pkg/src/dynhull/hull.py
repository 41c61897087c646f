"""Orientation predicates, incremental convex hulls, volume and point location.

The hull is built with the Beneath-and-Beyond scheme and kept as a
triangulation of the convex hull of the inserted points.  Every cell is a
d-simplex given by the ordered tuple of its vertex ids; column ``k`` of its
orientation matrix holds the homogeneous coordinates ``(p, 1)`` of vertex
``cols[k]``.

With hashed predicates each cell also carries the dynamic determinant state
of its orientation matrix.  A boundary ridge is keyed by its sorted vertex
ids and maps to the incident cell together with the column of the vertex
opposite to it.  Asking on which side of that ridge a point ``a`` lies is
then one peek at the cell's state (replace the opposite column by ``a``),
and a new cell's state is one dynamic update of its parent's.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .determinants import adjoint, det_bareiss, det_laplace, det_lu, cofactor_columns
from .dyndet import ColumnUpdate, DynAdjState, DynInvState
from .errors import CacheMiss, DegenerateInput, DimensionMismatch, TooFewPoints
from .numkernel import SquareMatrix, is_field, to_rat
from .pointset import PointSet


class _Outside:
    __slots__ = ()

    def __repr__(self):
        return "Outside"

    def __bool__(self):
        return False


OUTSIDE = _Outside()


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _lift(q: Sequence) -> tuple:
    one = to_rat(1) if any(is_field(x) for x in q) else 1
    return tuple(q) + (one,)


# -- standalone predicates ---------------------------------------------------

def orientation_matrix(points: Sequence[Sequence]) -> SquareMatrix:
    """Matrix whose column ``j`` is ``(points[j], 1)``."""
    pts = [tuple(p) for p in points]
    n = len(pts)
    if n == 0 or any(len(p) != n - 1 for p in pts):
        raise DimensionMismatch(f"need d+1 points of dimension d, got {n} points")
    return SquareMatrix._trusted(tuple(_lift(p) for p in pts))


def orientation(points: Sequence[Sequence], threshold_dim: int = 6) -> int:
    """Sign of the orientation determinant of ``d+1`` points.

    Laplace expansion is used up to ``threshold_dim``.  Without a cache to
    draw on, higher dimensions use cubic elimination instead.
    """
    A = orientation_matrix(points)
    d = A.dim - 1
    if d <= threshold_dim:
        return _sign(det_laplace(A))
    if any(is_field(x) for c in A.cols for x in c):
        return _sign(det_lu(A))
    return _sign(det_bareiss(A))


# -- triangulation -----------------------------------------------------------

@dataclass(frozen=True)
class HullConfig:
    """Options for :func:`convex_hull`.

    ``predicates`` is ``"auto"`` (hashed above ``threshold_dim``, Laplace at or
    below), ``"hashed"`` or ``"laplace"``.  ``state_kind`` picks the adjoint
    (``"adj"``) or the inverse (``"inv"``) as the maintained state.
    ``insertion="locate"`` keeps the input order and locates each point
    before inserting it; the default sorts lexicographically.  With
    ``allow_degenerate`` zero determinants are treated as "not visible"
    instead of raising.
    """

    predicates: str = "auto"
    threshold_dim: int = 6
    state_kind: str = "adj"
    insertion: str = "lex"
    allow_degenerate: bool = False

    def __post_init__(self):
        if self.predicates not in ("auto", "hashed", "laplace"):
            raise ValueError(f"unknown predicate mode {self.predicates!r}")
        if self.state_kind not in ("adj", "inv"):
            raise ValueError(f"unknown state kind {self.state_kind!r}")
        if self.insertion not in ("lex", "locate"):
            raise ValueError(f"unknown insertion order {self.insertion!r}")

    def use_hashed(self, d: int) -> bool:
        if self.predicates == "auto":
            return d > self.threshold_dim
        return self.predicates == "hashed"


@dataclass(eq=False)
class Cell:
    cols: tuple
    det: object
    state: object = None
    # nbrs[k] is the cell across the facet opposite column k, or None
    nbrs: list = field(default_factory=list)

    @property
    def vertices(self) -> tuple:
        return tuple(sorted(self.cols))


class PredicateCache:
    """Boundary ridge key -> (cell id, column of the opposite vertex).

    Keys are sorted tuples of the ``d`` vertex ids of the ridge.  The
    dynamic state itself lives on the cell and is reached through the id.
    """

    def __init__(self):
        self._map: dict = {}

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, ridge) -> bool:
        return ridge in self._map

    def __iter__(self):
        return iter(self._map)

    def items(self):
        return self._map.items()

    def lookup(self, ridge) -> tuple:
        try:
            return self._map[ridge]
        except KeyError:
            raise CacheMiss(ridge) from None

    def toggle(self, ridge, entry):
        """Symmetric difference with ``{ridge}``; returns the removed entry or None."""
        old = self._map.pop(ridge, None)
        if old is None:
            self._map[ridge] = entry
        return old


class Triangulation:
    """Triangulated convex hull of a pointset, with its predicate cache."""

    def __init__(self, points: PointSet, config: HullConfig | None = None):
        self.points = points
        self.dim = points.dim
        self.config = config or HullConfig()
        self.hashed = self.config.use_hashed(self.dim)
        self.lifted = points.lifted()
        self.cells: list[Cell] = []
        self.cache = PredicateCache()
        self.inserted: list[int] = []
        self._local = threading.local()

    # construction

    def _scratch_det(self, cols: tuple, k: int = -1, qhat=None):
        lifted = self.lifted
        mcols = tuple(qhat if j == k else lifted[p] for j, p in enumerate(cols))
        return det_laplace(SquareMatrix._trusted(mcols))

    def _facet_det(self, cell: Cell, k: int, qhat):
        if cell.state is not None:
            return cell.state._peek(k, qhat)
        return self._scratch_det(cell.cols, k, qhat)

    def _add_cell(self, cell: Cell) -> int:
        cid = len(self.cells)
        self.cells.append(cell)
        cols = cell.cols
        nbrs = cell.nbrs
        for k in range(len(cols)):
            ridge = tuple(sorted(cols[:k] + cols[k + 1:]))
            other = self.cache.toggle(ridge, (cid, k))
            if other is None:
                nbrs.append(None)
            else:
                c2, k2 = other
                nbrs.append(c2)
                self.cells[c2].nbrs[k2] = cid
        return cid

    def _start(self, simplex: tuple) -> None:
        A = SquareMatrix._trusted(tuple(self.lifted[p] for p in simplex))
        state = None
        if self.hashed:
            det = det_laplace(A) if A.dim <= 7 else det_bareiss(A)
            if det == 0:
                raise DegenerateInput(f"initial points {simplex} are affinely dependent")
            if self.config.state_kind == "inv":
                state = DynInvState.from_matrix(A)
            else:
                state = DynAdjState.from_matrix(A)
            det = state.det
        else:
            det = det_laplace(A)
            if det == 0:
                raise DegenerateInput(f"initial points {simplex} are affinely dependent")
        self._add_cell(Cell(tuple(simplex), det, state))
        self.inserted.extend(simplex)

    def _insert(self, p: int) -> bool:
        """Insert point ``p``; False when it adds nothing to the hull."""
        ahat = self.lifted[p]
        strict = not self.config.allow_degenerate
        cells = self.cells
        if self.config.insertion == "locate":
            cid = self._walk(ahat, len(cells) - 1, self._facet_det)
            if cid is not OUTSIDE:
                if strict:
                    cell = cells[cid]
                    for k, nb in enumerate(cell.nbrs):
                        if nb is None and self._facet_det(cell, k, ahat) == 0:
                            raise DegenerateInput(f"point {p} lies on a hull facet")
                return False
        visible = []
        for ridge, (cid, k) in self.cache.items():
            cell = cells[cid]
            v = self._facet_det(cell, k, ahat)
            if v == 0:
                if strict:
                    raise DegenerateInput(
                        f"point {p} lies on the hyperplane of boundary ridge {ridge}")
                continue
            if (v > 0) != (cell.det > 0):
                visible.append((cid, k, v))
        if not visible:
            if strict:
                raise DegenerateInput(f"point {p} sees no facet of the current hull")
            return False
        for cid, k, v in visible:
            cell = cells[cid]
            cols = cell.cols[:k] + (p,) + cell.cols[k + 1:]
            state = cell.state.update(ColumnUpdate(k, ahat)) if cell.state is not None else None
            self._add_cell(Cell(cols, v, state))
        self.inserted.append(p)
        return True

    def _initial_simplex(self, order: list) -> tuple[tuple, list]:
        d = self.dim
        if not self.config.allow_degenerate:
            return tuple(order[:d + 1]), order[d + 1:]
        # greedy scan for d+1 affinely independent points
        pts = self.points
        chosen = [order[0]]
        basis: list = []  # echelon rows as (pivot, row)
        for p in order[1:]:
            row = [to_rat(x) - to_rat(y) for x, y in zip(pts[p], pts[order[0]])]
            for piv, b in basis:
                f = row[piv]
                if f:
                    row = [x - f * y for x, y in zip(row, b)]
            piv = next((j for j, x in enumerate(row) if x), None)
            if piv is None:
                continue
            inv = 1 / row[piv]
            basis.append((piv, [x * inv for x in row]))
            chosen.append(p)
            if len(chosen) == d + 1:
                break
        if len(chosen) < d + 1:
            raise DegenerateInput("the points do not span a full-dimensional hull")
        used = set(chosen)
        return tuple(chosen), [p for p in order if p not in used]

    # queries

    def cached_orientation(self, ridge: Sequence[int], a) -> tuple[int, object]:
        """Sign and value of the determinant of ``ridge`` plus point ``a``.

        The columns keep the order of the cell cached for ``ridge``, with
        ``a`` in place of the opposite vertex.  ``a`` is a point id or a
        coordinate sequence.
        """
        cid, k = self.cache.lookup(tuple(sorted(ridge)))
        qhat = self.lifted[a] if isinstance(a, int) else _lift(a)
        if len(qhat) != self.dim + 1:
            raise DimensionMismatch(f"query of dimension {len(qhat) - 1} in a {self.dim}-dimensional hull")
        v = self._facet_det(self.cells[cid], k, qhat)
        return _sign(v), v

    def _hashed_pred(self, cell: Cell, k: int, qhat):
        return cell.state._peek(k, qhat)

    def _scratch_pred(self, cell: Cell, k: int, qhat):
        return self._scratch_det(cell.cols, k, qhat)

    def _walk(self, qhat, cid: int, pred):
        cells = self.cells
        d1 = self.dim + 1
        came = -1
        for step in range(10 * len(cells)):
            cell = cells[cid]
            pos = cell.det > 0
            nxt = -1
            for t in range(d1):
                k = (step + t) % d1
                if k == came:
                    continue
                v = pred(cell, k, qhat)
                if v and (v > 0) != pos:
                    nxt = cell.nbrs[k]
                    if nxt is None:
                        return OUTSIDE
                    break
            if nxt == -1:
                return cid
            came = cells[nxt].nbrs.index(cid)
            cid = nxt
        return self._scan(qhat, pred)

    def _scan(self, qhat, pred):
        d1 = self.dim + 1
        for cid, cell in enumerate(self.cells):
            pos = cell.det > 0
            for k in range(d1):
                v = pred(cell, k, qhat)
                if v and (v > 0) != pos:
                    break
            else:
                return cid
        return OUTSIDE

    def locate(self, q: Sequence, mode: str = "auto"):
        """Id of a cell containing ``q`` (boundary inclusive) or ``OUTSIDE``.

        ``mode="hashed"`` answers every predicate from the cells' cached
        states, ``mode="scratch"`` by Laplace expansion of the substituted
        matrix.  ``"auto"`` uses the states when the hull has them.  The walk
        starts from the last cell this thread located.
        """
        qhat = _lift(q)
        if len(qhat) != self.dim + 1:
            raise DimensionMismatch(f"query of dimension {len(q)} in a {self.dim}-dimensional hull")
        if not self.cells:
            return OUTSIDE
        if mode == "auto":
            mode = "hashed" if self.hashed else "scratch"
        if mode == "hashed":
            if not self.hashed:
                raise ValueError("hull was built without cached states")
            pred = self._hashed_pred
        elif mode == "scratch":
            pred = self._scratch_pred
        else:
            raise ValueError(f"unknown locate mode {mode!r}")
        start = getattr(self._local, "last", None)
        if start is None or start >= len(self.cells):
            start = len(self.cells) - 1
        res = self._walk(qhat, start, pred)
        if res is not OUTSIDE:
            self._local.last = res
        return res

    def reset_walk(self) -> None:
        """Forget this thread's last located cell."""
        self._local.last = None

    def hull_vertices(self) -> list[int]:
        """Vertices of the boundary facets, ascending."""
        return sorted({p for ridge in self.cache for p in ridge})


def convex_hull(points, config: HullConfig | None = None,
                on_insert: Callable[[Triangulation, int], None] | None = None) -> Triangulation:
    """Triangulated convex hull of ``points`` (a PointSet or coordinate lists).

    ``on_insert(t, p)`` is called after each point is processed, starting
    with the last point of the initial simplex.
    """
    if not isinstance(points, PointSet):
        points = PointSet.from_coords(points)
    config = config or HullConfig()
    n, d = len(points), points.dim
    if d < 1:
        raise DimensionMismatch("points must have dimension at least 1")
    if n < d + 1:
        raise TooFewPoints(f"{n} points cannot span a {d}-dimensional hull")
    t = Triangulation(points, config)
    if config.insertion == "lex":
        order = sorted(range(n), key=points.__getitem__)
    else:
        order = list(range(n))
    simplex, rest = t._initial_simplex(order)
    t._start(simplex)
    if on_insert is not None:
        on_insert(t, simplex[-1])
    for p in rest:
        t._insert(p)
        if on_insert is not None:
            on_insert(t, p)
    return t


def volume(t: Triangulation):
    """Exact volume: sum of the cells' absolute determinants over d!."""
    total = sum(abs(c.det) for c in t.cells)
    return to_rat(total) / math.factorial(t.dim)


def locate(t: Triangulation, q: Sequence, mode: str = "auto"):
    return t.locate(q, mode)


def hull_stats(t: Triangulation) -> dict:
    d = t.dim
    entry_bytes = 8 * d + 16 + 64
    state_bytes = sum(c.state.nbytes() for c in t.cells if c.state is not None)
    return {
        "t_cells": len(t.cells),
        "n_facets": len(t.cache),
        "cache_entries": len(t.cache),
        "cache_bytes_estimate": entry_bytes * len(t.cache) + state_bytes,
    }


def verify_cache(t: Triangulation, cells: Sequence[int] | None = None) -> bool:
    """Recompute the states of the given cells from scratch and compare."""
    ids = range(len(t.cells)) if cells is None else cells
    for cid in ids:
        cell = t.cells[cid]
        A = SquareMatrix._trusted(tuple(t.lifted[p] for p in cell.cols))
        if cell.state is None:
            if det_laplace(A) != cell.det:
                return False
            continue
        if isinstance(cell.state, DynInvState):
            ref = DynInvState.from_matrix(A)
            ok = ref.inv == cell.state.inv and ref.det == cell.state.det
        else:
            adj, det = adjoint(A)
            ok = adj == cell.state.adj and det == cell.state.det
        if not ok or cell.state.det != cell.det:
            return False
    return True


class ExhaustiveLocator:
    """Reference point location that ignores the cached states.

    Every cell is tested for containment (boundary inclusive) with Laplace
    cofactors of its orientation matrix, computed from scratch the first
    time the cell is examined.  Cells whose integer-rounded bounding box
    misses the query are rejected first; that test is exact and only a
    necessary condition, so it never changes an answer.
    """

    def __init__(self, t: Triangulation):
        self.dim = t.dim
        self._lifted = t.lifted
        self._cols = [cell.cols for cell in t.cells]
        self._cof: dict = {}
        lo, hi = [], []
        for cols in self._cols:
            pts = [t.points[p] for p in cols]
            lo.append([math.floor(min(c)) for c in zip(*pts)])
            hi.append([math.ceil(max(c)) for c in zip(*pts)])
        bound = max((abs(x) for row in lo + hi for x in row), default=0)
        if self._cols and bound < 2 ** 62:
            self._lo = np.array(lo, dtype=np.int64)
            self._hi = np.array(hi, dtype=np.int64)
        else:
            self._lo = self._hi = None

    def _cofactors(self, cid: int):
        entry = self._cof.get(cid)
        if entry is None:
            A = SquareMatrix._trusted(tuple(self._lifted[p] for p in self._cols[cid]))
            cof = cofactor_columns(A)
            det = sum(x * c for x, c in zip(A.cols[0], cof[0]))
            entry = self._cof[cid] = (cof, det > 0)
        return entry

    def _candidates(self, q: Sequence):
        if self._lo is None or any(abs(x) >= 2 ** 62 for x in q):
            return range(len(self._cols))
        qlo = np.array([math.floor(x) for x in q], dtype=np.int64)
        qhi = np.array([math.ceil(x) for x in q], dtype=np.int64)
        mask = np.all((self._lo <= qhi) & (qlo <= self._hi), axis=1)
        return np.flatnonzero(mask).tolist()

    def containing_cells(self, q: Sequence) -> list[int]:
        qhat = _lift(q)
        if len(qhat) != self.dim + 1:
            raise DimensionMismatch(f"query of dimension {len(q)} in a {self.dim}-dimensional hull")
        out = []
        for cid in self._candidates(q):
            cof, pos = self._cofactors(cid)
            for col in cof:
                v = sum(x * c for x, c in zip(qhat, col))
                if v and (v > 0) != pos:
                    break
            else:
                out.append(cid)
        return out

    def locate(self, q: Sequence):
        cells = self.containing_cells(q)
        return cells[0] if cells else OUTSIDE


__all__ = [
    "OUTSIDE", "HullConfig", "Cell", "PredicateCache", "Triangulation",
    "orientation_matrix", "orientation", "convex_hull", "volume", "locate",
    "hull_stats", "verify_cache", "ExhaustiveLocator",
]
