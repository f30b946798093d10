"""Independent checking of YES and NO certificates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .certificate import NoCertificate, YesCertificate
from .errors import InvalidInputError
from .graph import MixedGraph, spanning_forest, validate
from .group import (
    MAX_TABLE_ORDER,
    SwitchGroup,
    arc_action_group,
    arc_group_to_edge_group,
    edge_action_group,
    format_element,
    orbit,
)
from .substitution import substitution_classes
from .switching import apply_sequence

# expanded sequences up to this length are replayed step by step
REPLAY_LIMIT = 200_000


@dataclass(frozen=True)
class Verdict:
    ok: bool
    message: str

    def __bool__(self) -> bool:
        return self.ok


def _fail(msg: str) -> Verdict:
    return Verdict(False, msg)


def verify_certificate(g: MixedGraph, grp: SwitchGroup, cert) -> Verdict:
    problem = validate(g)
    if problem is not None:
        return _fail(f"invalid graph: {problem.message}")
    if (g.m, g.n) != (grp.m, grp.n):
        return _fail(f"group dimensions {(grp.m, grp.n)} do not match graph {(g.m, g.n)}")
    try:
        if isinstance(cert, YesCertificate):
            return _verify_yes(g, grp, cert)
        if isinstance(cert, NoCertificate):
            return _verify_no(g, grp, cert)
    except InvalidInputError as exc:
        return _fail(str(exc))
    return _fail(f"not a certificate: {type(cert).__name__}")


# -- YES --------------------------------------------------------------------------


def _verify_yes(g, grp, cert: YesCertificate) -> Verdict:
    if cert.sequence is None:
        return _fail("verdict-only certificate carries no sequence to check")
    for p in cert.elements():
        if p not in grp:
            return _fail(f"element {format_element(p)} is not in the group")
    for v, _ in cert.sequence.steps:
        if not 1 <= v <= g.vertex_count:
            return _fail(f"step at vertex {v} outside 1..{g.vertex_count}")
    kind, i = cert.target.kind, cert.target.colour
    if kind == "k1":
        if g.incidence_count:
            return _fail(f"target K1 but the graph has {g.incidence_label(0)}")
        return Verdict(True, "K1 target, no incidences")
    if kind == "k2" and (g.arcs or not 1 <= i <= g.m):
        return _fail("K2 target needs an edges-only graph and a colour in 1..m")
    if kind == "t2" and (g.edges or not 1 <= i <= g.n):
        return _fail("T2 target needs an arcs-only graph and a colour in 1..n")
    col = cert.colouring
    if col is None or len(col) != g.vertex_count or set(col) - {0, 1}:
        return _fail("colouring must give side 0 or 1 to every vertex")
    side = np.asarray(col, dtype=np.int64)
    a, b = g.ends
    same = np.flatnonzero(side[a] == side[b]) if len(a) else []
    if len(same):
        return _fail(f"{g.incidence_label(int(same[0]))} joins two vertices on one side")
    comp = spanning_forest(g).component
    for lift in cert.lifts:
        if not (1 <= lift.u <= g.vertex_count and 1 <= lift.v <= g.vertex_count):
            return _fail(f"lift ({lift.u}, {lift.v}) names a vertex outside the graph")
        if comp[lift.u - 1] != comp[lift.v - 1] or side[lift.u - 1] == side[lift.v - 1]:
            return _fail(f"lift ({lift.u}, {lift.v}) needs two vertices of one component on opposite sides")

    if cert.length(g) <= REPLAY_LIMIT or len(grp) > MAX_TABLE_ORDER:
        final = apply_sequence(g, cert.expand(g))
        got_a = np.array([t - 1 for t, _, _ in final.arcs], dtype=np.int64)
        colours = final.colours
    else:
        colours, got_a = _lazy_final(g, grp, cert, side, comp)
    wrong = np.flatnonzero(colours != i - 1)
    if len(wrong):
        k = int(wrong[0])
        return _fail(f"{g.incidence_label(k)} ends with colour {colours[k] + 1}, expected {i}")
    if kind == "t2":
        back = np.flatnonzero(side[got_a] != 0)
        if len(back):
            return _fail(f"{g.incidence_label(int(back[0]))} ends pointing from side 1 to side 0")
    return Verdict(True, f"all {g.incidence_count} incidences map to the {kind.upper()} target colour {i}")


def _lazy_final(g, grp, cert, side, comp):
    """Final colours (0-based) and current tails (0-based), via net elements
    per incidence instead of replaying the expanded sequence."""
    mul, inv = grp.mul_table, grp.inv_table
    a, b = g.ends
    K = g.incidence_count
    at: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for k in range(K):
        at[a[k]].append(k)
        at[b[k]].append(k)
    start = [0] * K
    mul_l = mul.tolist()
    for v, p in cert.sequence.steps:
        e = grp.index(p)
        for k in at[v - 1]:
            start[k] = mul_l[start[k]][e]
    # transforms per lift block, in C4 edge order e01, e12, e23, e30
    btau = np.zeros((len(cert.lifts), 4), dtype=np.int64)
    for t, lift in enumerate(cert.lifts):
        row = [0, 0, 0, 0]
        for r, p in lift.witness:
            e = grp.index(p)
            for edge in range(4):
                if r == edge or r == (edge + 1) % 4:
                    row[edge] = mul_l[row[edge]][e]
        btau[t] = row
    bu = np.array([lift.u - 1 for lift in cert.lifts], dtype=np.int64)
    bv = np.array([lift.v - 1 for lift in cert.lifts], dtype=np.int64)
    ncomp = int(comp.max()) + 1
    net = _kernels.net_elements(
        a, b, np.array(start, dtype=np.int64), bu, bv, btau, side, comp, ncomp,
        g.vertex_count, mul, inv,
    )
    E = len(g.edges)
    colours = np.empty(K, dtype=np.int64)
    if E:
        colours[:E] = grp.alpha_table[net[:E], g.colours[:E]]
    tails = np.empty(K - E, dtype=np.int64)
    if K > E:
        state = grp.arc_table[net[E:], 2 * g.colours[E:]]
        colours[E:] = state // 2
        tails = np.where(state % 2 == 1, b[E:], a[E:])
    return colours, tails


# -- NO ---------------------------------------------------------------------------


def _resolve(g: MixedGraph, ref) -> int:
    kind, idx = ref
    count = len(g.edges) if kind == "e" else len(g.arcs)
    if not 1 <= idx <= count:
        raise InvalidInputError(f"incidence {kind} {idx} does not exist")
    return idx - 1 if kind == "e" else len(g.edges) + idx - 1


def _pair_lookup(g: MixedGraph) -> dict:
    out = {}
    for k in range(g.incidence_count):
        _, x, y, _ = g.incidence(k)
        out[(min(x, y), max(x, y))] = k
    return out


def _walk_incidences(g, walk) -> list[int] | None:
    pairs = _pair_lookup(g)
    out = []
    for x, y in zip(walk, walk[1:] + walk[:1]):
        k = pairs.get((min(x, y), max(x, y)))
        if k is None:
            return None
        out.append(k)
    return out


def _verify_no(g, grp, cert: NoCertificate) -> Verdict:
    r = cert.reason
    if r == "incidence":
        if len(cert.incidences) != 1:
            return _fail("incidence certificate names exactly one incidence")
        k = _resolve(g, cert.incidences[0])
        return Verdict(True, f"{g.incidence_label(k)} rules out a one-vertex target")
    if r == "odd_cycle":
        walk = list(cert.walk)
        if len(walk) < 3 or len(walk) % 2 == 0:
            return _fail("odd_cycle walk must have odd length of at least 3")
        if _walk_incidences(g, walk) is None:
            return _fail("walk uses a vertex pair that is not adjacent")
        return Verdict(True, f"closed walk of odd length {len(walk)}")
    if r == "mixed_edge_arc":
        ks = [_resolve(g, ref) for ref in cert.incidences]
        kinds = sorted(ref[0] for ref in cert.incidences)
        if len(ks) != 2 or kinds != ["a", "e"]:
            return _fail("mixed_edge_arc names one edge and one arc")
        return Verdict(True, "graph has both an edge and an arc")
    if r == "orbit":
        return _verify_orbit(g, grp, cert)
    if r == "direction_conflict":
        return _verify_direction(g, grp, cert)
    return _verify_bad_cycle(g, grp, cert)


def _verify_orbit(g, grp, cert) -> Verdict:
    if len(cert.incidences) != 2 or cert.incidences[0][0] != cert.incidences[1][0]:
        return _fail("orbit certificate names two incidences of one kind")
    k1, k2 = (_resolve(g, ref) for ref in cert.incidences)
    kind = "edge" if cert.incidences[0][0] == "e" else "arc"
    c1, c2 = g.incidence(k1)[3], g.incidence(k2)[3]
    if c2 in orbit(grp, kind, c1).members:
        return _fail(f"colours {c1} and {c2} lie in one {kind} orbit")
    return Verdict(True, f"{kind} colours {c1} and {c2} lie in different orbits")


def _component_sides(g, k1, k2):
    """2-colouring of the component holding incidences k1, k2, or None when
    they lie in different components or the component is not bipartite."""
    f = spanning_forest(g)
    a, b = g.ends
    C = f.component[a[k1]]
    if f.component[a[k2]] != C:
        return None
    side = f.depth % 2
    inside = f.component[a] == C
    if np.any(side[a[inside]] == side[b[inside]]):
        return None
    return side


def _verify_direction(g, grp, cert) -> Verdict:
    if len(cert.incidences) != 2 or any(ref[0] != "a" for ref in cert.incidences):
        return _fail("direction_conflict names two arcs")
    k1, k2 = (_resolve(g, ref) for ref in cert.incidences)
    side = _component_sides(g, k1, k2)
    if side is None:
        return _fail("arcs are not in one bipartite component")
    n = g.n

    def red(k):
        _, t, _, c = g.incidence(k)
        return c if side[t - 1] == 0 else n + c

    rgrp = arc_group_to_edge_group(arc_action_group(grp)[0])
    r1, r2 = red(k1), red(k2)
    if r2 in orbit(rgrp, "edge", r1).members:
        return _fail("arcs can be brought to a common direction")
    return Verdict(True, f"arcs {cert.incidences[0][1]} and {cert.incidences[1][1]} cannot agree in direction")


def _verify_bad_cycle(g, grp, cert) -> Verdict:
    walk = list(cert.walk)
    L = len(walk)
    if L < 4 or L % 2 or len(set(walk)) != L:
        return _fail("bad_cycle walk must be an even cycle on distinct vertices")
    incs = _walk_incidences(g, walk)
    if incs is None:
        return _fail("walk uses a vertex pair that is not adjacent")
    E = len(g.edges)
    if all(k < E for k in incs):
        wgrp = edge_action_group(grp)[0]
        colours = [g.incidence(k)[3] for k in incs]
    elif all(k >= E for k in incs):
        wgrp = arc_group_to_edge_group(arc_action_group(grp)[0])
        colours = []
        for pos, k in enumerate(incs):
            _, t, _, c = g.incidence(k)
            # walk[0] on side 0; side alternates along the walk
            tail_side = pos % 2 if t == walk[pos] else (pos + 1) % 2
            colours.append(c if tail_side == 0 else g.n + c)
    else:
        return _fail("bad_cycle walk mixes edges and arcs")
    i = colours[0]
    members = orbit(wgrp, "edge", i).members
    if any(c not in members for c in colours):
        return _fail("walk colours span several orbits")
    # switch w1..w_{L-1} in turn so each walk edge becomes i
    alpha = wgrp.alpha_table
    current = [c - 1 for c in colours]
    for pos in range(1, L):
        c = current[pos - 1]
        hits = np.flatnonzero(alpha[:, c] == i - 1)
        e = int(hits[0])
        current[pos - 1] = i - 1
        current[pos] = int(alpha[e, current[pos]])
    j = current[L - 1] + 1
    classes = substitution_classes(wgrp)
    if classes.substitutes(i, j):
        return _fail(f"walk reduces to nearly ({i}, {j}), which is switchable")
    return Verdict(True, f"walk reduces to nearly ({i}, {j}) with {j} outside the class of {i}")
