"""Brute-force ground truth at desk scale.

Configurations of a fixed underlying graph are packed into one integer:
digit k holds the 0-based colour of edge k, or ``2 * colour + reversed`` for
arc k, where ``reversed`` is relative to the arc's orientation in the start
graph. Every (vertex, group element) move is explored by BFS.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .certificate import Target, YesCertificate
from .errors import InvalidInputError, ResourceLimitError
from .graph import MixedGraph, OddCycleWitness, bipartition, ensure_valid, spanning_forest
from .group import (
    SwitchElement,
    SwitchGroup,
    arc_action_group,
    arc_group_to_edge_group,
    edge_action_group,
)
from .switching import SwitchSequence

DEFAULT_CAP = 10**7
_CODE_LIMIT = 2**62


class _Encoding:
    """Mixed-radix state codes and the distinct non-trivial actions of a group."""

    def __init__(self, g: MixedGraph, grp: SwitchGroup):
        if (g.m, g.n) != (grp.m, grp.n):
            raise InvalidInputError(
                f"group dimensions {(grp.m, grp.n)} do not match graph {(g.m, g.n)}"
            )
        self.g = g
        E, K = len(g.edges), g.incidence_count
        self.is_arc = np.arange(K) >= E
        self.radix = np.where(self.is_arc, 2 * g.n, g.m).astype(np.int64)
        weight = np.ones(K, dtype=np.int64)
        total = 1
        for k in range(K):
            weight[k] = total
            total *= int(self.radix[k])
            if total > _CODE_LIMIT:
                raise ResourceLimitError("configuration codes do not fit in 64 bits")
        self.weight = weight
        self.space = total
        # one action per distinct effect, represented by its least element
        seen: dict[tuple, SwitchElement] = {}
        at, et = grp.arc_table, grp.alpha_table
        for k, p in enumerate(grp.elements):
            key = (tuple(et[k]), tuple(at[k]))
            if k and key not in seen and not p.is_identity():
                seen[key] = p
        identity_key = (tuple(et[0]), tuple(at[0]))
        seen.pop(identity_key, None)
        self.actions = list(seen.values())
        rows = [grp.index(p) for p in self.actions]
        self.emap = et[rows] if rows else np.zeros((0, g.m), dtype=np.int64)
        self.amap = at[rows] if rows else np.zeros((0, 2 * g.n), dtype=np.int64)
        if self.emap.shape[1] == 0:
            self.emap = np.zeros((len(rows), 1), dtype=np.int64)
        if self.amap.shape[1] == 0:
            self.amap = np.zeros((len(rows), 1), dtype=np.int64)
        a, b = g.ends
        src = np.concatenate([a, b])
        inc = np.concatenate([np.arange(K), np.arange(K)]).astype(np.int64)
        order = np.lexsort((inc, src))
        self.vinc = inc[order]
        self.vptr = np.zeros(g.vertex_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=g.vertex_count), out=self.vptr[1:])

    def encode(self, h: MixedGraph) -> int:
        g = self.g
        if (h.m, h.n, h.vertex_count) != (g.m, g.n, g.vertex_count):
            raise InvalidInputError("configuration has different dimensions")
        code = 0
        for k, ((u, v, _), (x, y, c)) in enumerate(zip(g.edges, h.edges)):
            if (u, v) != (x, y):
                raise InvalidInputError("configuration has a different underlying graph")
            code += (c - 1) * int(self.weight[k])
        E = len(g.edges)
        for k, ((t, hd, _), (x, y, c)) in enumerate(zip(g.arcs, h.arcs)):
            if {t, hd} != {x, y}:
                raise InvalidInputError("configuration has a different underlying graph")
            code += (2 * (c - 1) + (x != t)) * int(self.weight[E + k])
        return code

    def decode(self, code: int) -> MixedGraph:
        g = self.g
        digits = (code // self.weight) % self.radix if len(self.weight) else []
        E = len(g.edges)
        edges = tuple((u, v, int(digits[k]) + 1) for k, (u, v, _) in enumerate(g.edges))
        arcs = []
        for k, (t, h, _) in enumerate(g.arcs):
            d = int(digits[E + k])
            arcs.append((h, t, d // 2 + 1) if d % 2 else (t, h, d // 2 + 1))
        return MixedGraph(g.m, g.n, g.vertex_count, edges, tuple(arcs))


@dataclass(frozen=True, eq=False)
class ConfigurationSpace:
    """Reachable configurations in BFS order; index 0 is the start."""

    codes: np.ndarray
    parent: np.ndarray
    move: np.ndarray
    encoding: _Encoding

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, h: MixedGraph) -> bool:
        return bool(np.any(self.codes == self.encoding.encode(h)))

    def graph(self, idx: int) -> MixedGraph:
        return self.encoding.decode(int(self.codes[idx]))

    def states(self):
        return (self.graph(k) for k in range(len(self)))

    def path(self, idx: int) -> SwitchSequence:
        """Switch sequence from the start to configuration ``idx``."""
        nact = len(self.encoding.actions)
        steps = []
        while self.parent[idx] >= 0:
            mv = int(self.move[idx])
            steps.append((mv // nact + 1, self.encoding.actions[mv % nact]))
            idx = int(self.parent[idx])
        return SwitchSequence(tuple(steps[::-1]))


def _side_arrays(g: MixedGraph):
    f = spanning_forest(g)
    ncomp = int(f.component.max()) + 1 if g.vertex_count else 0
    return f.depth % 2, f.component, ncomp


def _search(g, grp, cap, check_goal, side=None, comp=None, ncomp=0):
    enc = _Encoding(g, grp)
    if side is None:
        side, comp, ncomp = _side_arrays(g)
    codes, par, mv, hit, over = _kernels.oracle_bfs(
        enc.encode(g), enc.weight, enc.radix, enc.is_arc, g.ends[0], side, comp, ncomp,
        enc.vptr, enc.vinc, enc.emap, enc.amap, check_goal, cap,
    )
    return ConfigurationSpace(codes, par, mv, enc), hit, over


def reachable_configurations(g: MixedGraph, grp: SwitchGroup, cap: int = DEFAULT_CAP) -> ConfigurationSpace:
    ensure_valid(g)
    space, _, over = _search(g, grp, cap, False)
    if over:
        raise ResourceLimitError(f"more than {cap} reachable configurations")
    return space


@dataclass(frozen=True)
class OracleResult:
    yes: bool
    certificate: YesCertificate | None
    states: int

    def __bool__(self) -> bool:
        return self.yes


def oracle_decide_2col(g: MixedGraph, grp: SwitchGroup, cap: int = DEFAULT_CAP) -> OracleResult:
    """YES when some reachable configuration maps to a 2-vertex target.

    A configuration maps to a 2-vertex target exactly when its underlying
    graph is bipartite, it has edges or arcs but not both, every incidence
    has one colour and, for arcs, every component has all tails on one side.
    """
    ensure_valid(g)
    if (g.m, g.n) != (grp.m, grp.n):
        raise InvalidInputError(f"group dimensions {(grp.m, grp.n)} do not match graph {(g.m, g.n)}")
    if g.incidence_count == 0:
        return OracleResult(True, YesCertificate(Target("k1")), 1)
    if isinstance(bipartition(g), OddCycleWitness) or (g.edges and g.arcs):
        return OracleResult(False, None, 0)
    side, comp, ncomp = _side_arrays(g)
    space, hit, over = _search(g, grp, cap, True, side, comp, ncomp)
    if hit < 0:
        if over:
            raise ResourceLimitError(f"more than {cap} reachable configurations")
        return OracleResult(False, None, len(space))
    final = space.graph(hit)
    seq = space.path(hit)
    if final.edges:
        target = Target("k2", final.edges[0][2])
        colouring = side
    else:
        target = Target("t2", final.arcs[0][2])
        colouring = side.copy()
        for t, _, _ in final.arcs:
            if colouring[t - 1] == 1:
                colouring = np.where(comp == comp[t - 1], 1 - colouring, colouring)
    cert = YesCertificate(target, seq, (), tuple(int(s) for s in colouring))
    return OracleResult(True, cert, len(space))


def _cycle_group(grp: SwitchGroup) -> SwitchGroup:
    if grp.m == 0 and grp.n > 0:
        return arc_group_to_edge_group(arc_action_group(grp)[0])
    return edge_action_group(grp)[0]


def oracle_classes(grp: SwitchGroup, cycle_length: int, cap: int = DEFAULT_CAP) -> tuple[frozenset[int], ...]:
    """Classes read off the definition: j is in the class of i when the cycle
    of the given length with one edge j and the rest i switches to
    monochromatic i. Arc-only groups are taken through the 2n-colour
    reduction."""
    L = cycle_length
    if L < 4 or L % 2:
        raise InvalidInputError(f"cycle length must be even and at least 4, got {L}")
    egrp = _cycle_group(grp)
    m = egrp.m
    if m**L > cap:
        raise ResourceLimitError(f"{m}^{L} colourings exceed the cap {cap}")
    pairs = [(k + 1, k + 2) for k in range(L - 1)] + [(1, L)]
    out = []
    for i in range(1, m + 1):
        mono = MixedGraph(m, 0, L, tuple((u, v, i) for u, v in pairs))
        space = reachable_configurations(mono, egrp, cap)
        members = set()
        for j in range(1, m + 1):
            near = MixedGraph(m, 0, L, tuple((u, v, i) for u, v in pairs[:-1]) + ((1, L, j),))
            if near in space:
                members.add(j)
        out.append(frozenset(members))
    return tuple(out)
