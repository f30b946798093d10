"""The (m, n)-mixed graph model plus the underlying-graph queries the solver
needs: bipartition with odd-cycle extraction, BFS spanning forests and
fundamental cycles.

Vertices are ``1..vertex_count``. Incidences are numbered in one sequence,
edges first (``0..E-1``) then arcs (``E..E+A-1``); that numbering is the
"incidence id" used by forests, cycles and certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import InvalidInputError, ParseError

Edge = tuple[int, int, int]
Arc = tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class MixedGraph:
    m: int
    n: int
    vertex_count: int
    edges: tuple[Edge, ...] = ()
    arcs: tuple[Arc, ...] = ()

    def __post_init__(self):
        edges = tuple(
            (int(u), int(v), int(c)) if u <= v else (int(v), int(u), int(c))
            for u, v, c in self.edges
        )
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "arcs", tuple((int(t), int(h), int(c)) for t, h, c in self.arcs))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return (self.m, self.n, self.vertex_count, self.edges, self.arcs) == (
            other.m,
            other.n,
            other.vertex_count,
            other.edges,
            other.arcs,
        )

    def __hash__(self) -> int:
        return hash((self.m, self.n, self.vertex_count, self.edges, self.arcs))

    def __repr__(self) -> str:
        return (
            f"MixedGraph(m={self.m}, n={self.n}, vertex_count={self.vertex_count}, "
            f"edges={list(self.edges)!r}, arcs={list(self.arcs)!r})"
        )

    @property
    def incidence_count(self) -> int:
        return len(self.edges) + len(self.arcs)

    def incidence(self, k: int) -> tuple[str, int, int, int]:
        """``('e'|'a', end0, end1, colour)`` for incidence id ``k``."""
        if k < len(self.edges):
            return ("e", *self.edges[k])
        return ("a", *self.arcs[k - len(self.edges)])

    def incidence_label(self, k: int) -> str:
        if k < len(self.edges):
            return f"edge {k + 1} {self.edges[k]}"
        return f"arc {k - len(self.edges) + 1} {self.arcs[k - len(self.edges)]}"

    @cached_property
    def ends(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based endpoints of every incidence (arcs as tail, head)."""
        pairs = [(u, v) for u, v, _ in self.edges] + [(t, h) for t, h, _ in self.arcs]
        arr = np.array(pairs, dtype=np.int64).reshape(-1, 2) - 1
        return arr[:, 0].copy(), arr[:, 1].copy()

    @cached_property
    def colours(self) -> np.ndarray:
        """0-based colour of every incidence."""
        cols = [c for *_, c in self.edges] + [c for *_, c in self.arcs]
        return np.array(cols, dtype=np.int64) - 1

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Underlying-graph adjacency (indptr, neighbour, incidence), 0-based,
        neighbours ascending per vertex."""
        a, b = self.ends
        nv = self.vertex_count
        src = np.concatenate([a, b])
        dst = np.concatenate([b, a])
        inc = np.concatenate([np.arange(len(a)), np.arange(len(a))]).astype(np.int64)
        order = np.lexsort((dst, src))
        src, dst, inc = src[order], dst[order], inc[order]
        indptr = np.zeros(nv + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=nv), out=indptr[1:])
        return indptr, dst, inc


@dataclass(frozen=True)
class Violation:
    message: str
    incidences: tuple[int, ...] = ()


def validate(g: MixedGraph) -> Violation | None:
    """``None`` when ``g`` satisfies every model invariant, else the first
    problem found."""
    if g.m < 0 or g.n < 0 or g.vertex_count < 0:
        return Violation("negative size parameter")
    seen: dict[tuple[int, int], int] = {}
    for k in range(g.incidence_count):
        kind, x, y, c = g.incidence(k)
        limit = g.m if kind == "e" else g.n
        if not (1 <= x <= g.vertex_count and 1 <= y <= g.vertex_count):
            return Violation(f"{g.incidence_label(k)} has an endpoint outside 1..{g.vertex_count}", (k,))
        if x == y:
            return Violation(f"{g.incidence_label(k)} is a loop", (k,))
        if not 1 <= c <= limit:
            return Violation(f"{g.incidence_label(k)} has colour outside 1..{limit}", (k,))
        key = (min(x, y), max(x, y))
        if key in seen:
            j = seen[key]
            return Violation(
                f"{g.incidence_label(j)} and {g.incidence_label(k)} join the same vertex pair",
                (j, k),
            )
        seen[key] = k
    return None


def ensure_valid(g: MixedGraph) -> None:
    problem = validate(g)
    if problem is not None:
        raise InvalidInputError(problem.message)


@dataclass(frozen=True, eq=False)
class SpanningForest:
    """BFS forest. ``parent[v-1]`` is 0 for roots; ``parent_incidence[v-1]``
    is -1 for roots. ``order`` lists every vertex, parents before children."""

    parent: np.ndarray
    parent_incidence: np.ndarray
    order: np.ndarray
    roots: tuple[int, ...]
    component: np.ndarray
    depth: np.ndarray
    incidence_count: int

    @cached_property
    def tree_mask(self) -> np.ndarray:
        """Boolean mask over incidence ids: True for forest incidences."""
        mask = np.zeros(self.incidence_count, dtype=bool)
        pi = self.parent_incidence
        mask[pi[pi >= 0]] = True
        return mask


@dataclass(frozen=True)
class Bipartition:
    """``side[v-1]`` in {0, 1} (0 = A); ``component[v-1]`` is the component
    index, components numbered by least vertex."""

    side: tuple[int, ...]
    component: tuple[int, ...]

    def side_of(self, v: int) -> int:
        return self.side[v - 1]


@dataclass(frozen=True)
class OddCycleWitness:
    vertices: tuple[int, ...]  # closed walk; last vertex joins back to the first


@dataclass(frozen=True)
class FundamentalCycle:
    cotree_incidence: int
    path: tuple[int, ...]  # tree path between the cotree incidence's ends


def spanning_forest(g: MixedGraph) -> SpanningForest:
    indptr, nbr, inc = g.csr
    order, parent, pinc, depth, comp = _kernels.bfs_forest(g.vertex_count, indptr, nbr, inc)
    roots = tuple(int(v) + 1 for v in order[parent[order] < 0])
    f = SpanningForest(
        parent=parent + 1,
        parent_incidence=pinc,
        order=order + 1,
        roots=roots,
        component=comp,
        depth=depth,
        incidence_count=g.incidence_count,
    )
    return f


def _tree_path(f: SpanningForest, x: int, y: int) -> tuple[list[int], list[int]]:
    """Vertices from x up to the meeting point and from y up to it (both
    lists start at their own end; the meeting vertex closes the first)."""
    up_x, up_y = [x], [y]
    dx, dy = f.depth[x - 1], f.depth[y - 1]
    while dx > dy:
        x = int(f.parent[x - 1])
        up_x.append(x)
        dx -= 1
    while dy > dx:
        y = int(f.parent[y - 1])
        up_y.append(y)
        dy -= 1
    while x != y:
        x = int(f.parent[x - 1])
        y = int(f.parent[y - 1])
        up_x.append(x)
        up_y.append(y)
    up_y.pop()
    return up_x, up_y


def bipartition(
    g: MixedGraph, forest: SpanningForest | None = None
) -> Bipartition | OddCycleWitness:
    f = forest if forest is not None else spanning_forest(g)
    side = f.depth % 2
    a, b = g.ends
    clash = np.flatnonzero(side[a] == side[b]) if len(a) else np.zeros(0, dtype=np.int64)
    if len(clash):
        k = int(clash[0])
        x, y = int(a[k]) + 1, int(b[k]) + 1
        up_x, up_y = _tree_path(f, x, y)
        return OddCycleWitness(tuple(up_x + up_y[::-1]))
    return Bipartition(tuple(int(s) for s in side), tuple(int(c) for c in f.component))


def fundamental_cycles(g: MixedGraph, f: SpanningForest) -> list[FundamentalCycle]:
    """One cycle per non-forest incidence, in (component, incidence id) order."""
    return [fundamental_cycle(g, f, k) for k in cotree_incidences(g, f)]


def cotree_incidences(g: MixedGraph, f: SpanningForest) -> np.ndarray:
    a, _ = g.ends
    ids = np.flatnonzero(~f.tree_mask)
    if not len(ids):
        return ids
    comp = f.component[a[ids]]
    return ids[np.lexsort((ids, comp))]


def fundamental_cycle(g: MixedGraph, f: SpanningForest, k: int) -> FundamentalCycle:
    _, x, y, _ = g.incidence(k)
    up_x, up_y = _tree_path(f, x, y)
    return FundamentalCycle(k, tuple(up_x + up_y[::-1]))


# -- text format --------------------------------------------------------------


def parse_graph(text: str) -> MixedGraph:
    m = n = vertex_count = None
    edges: list[Edge] = []
    arcs: list[Arc] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        hash_at = raw.find("#")
        line = raw if hash_at < 0 else raw[:hash_at]
        toks = line.split()
        if not toks:
            continue
        head = toks[0]
        try:
            nums = [int(t) for t in toks[1:]]
        except ValueError:
            raise ParseError(f"non-integer field in {head!r} record", lineno) from None
        if head == "e" or head == "a":
            if vertex_count is None:
                raise ParseError(f"{head!r} record before 'mng' and 'v' headers", lineno)
            if len(nums) != 3:
                raise ParseError(f"{head!r} record needs 3 fields", lineno)
            (edges if head == "e" else arcs).append(tuple(nums))
        elif head == "mng":
            if m is not None or len(nums) != 2:
                raise ParseError("header must appear once as 'mng <m> <n>'", lineno)
            m, n = nums
        elif head == "v":
            if m is None:
                raise ParseError("'v' record before 'mng' header", lineno)
            if vertex_count is not None or len(nums) != 1:
                raise ParseError("'v <count>' must appear once", lineno)
            vertex_count = nums[0]
        else:
            raise ParseError(f"unknown record {head!r}", lineno)
    if m is None or vertex_count is None:
        raise ParseError("missing 'mng' or 'v' header")
    g = MixedGraph(m, n, vertex_count, tuple(edges), tuple(arcs))
    problem = validate(g)
    if problem is not None:
        # report the line of the first offending incidence
        k = problem.incidences[-1] if problem.incidences else None
        raise ParseError(problem.message, _incidence_line(text, k))
    return g


def _incidence_line(text: str, k: int | None) -> int | None:
    if k is None:
        return None
    # edges are numbered before arcs regardless of file order
    e_lines, a_lines = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if toks and toks[0] == "e":
            e_lines.append(lineno)
        elif toks and toks[0] == "a":
            a_lines.append(lineno)
    lines = e_lines + a_lines
    return lines[k] if k < len(lines) else None


def format_graph(g: MixedGraph) -> str:
    out = [f"mng {g.m} {g.n}", f"v {g.vertex_count}"]
    out += [f"e {u} {v} {c}" for u, v, c in g.edges]
    out += [f"a {t} {h} {c}" for t, h, c in g.arcs]
    return "\n".join(out) + "\n"


def load_graph(path) -> MixedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())
