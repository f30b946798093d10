"""Deciding switchable 1- and 2-colourability, with certificates.

Edge-only graphs are handled directly: switch a spanning forest to the
target colour i, then every cotree edge must carry a colour that can be
substituted by i. Arc-only graphs are reduced to edge-only graphs on 2n
colours (direction relative to the bipartition becomes part of the colour)
and the answer is pulled back through the element isomorphism.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .certificate import (
    Lift,
    NoCertificate,
    Target,
    YesCertificate,
    incidence_ref,
)
from .errors import InvalidInputError, InvariantError, PreconditionError
from .graph import (
    Bipartition,
    MixedGraph,
    OddCycleWitness,
    SpanningForest,
    bipartition,
    cotree_incidences,
    ensure_valid,
    fundamental_cycle,
    spanning_forest,
)
from .group import (
    SwitchGroup,
    arc_action_group,
    arc_element_to_edge_element,
    arc_group_to_edge_group,
    edge_action_group,
    orbit,
)
from .substitution import SubstitutionClasses, substitution_classes
from .switching import SwitchSequence


def _check_dims(g: MixedGraph, grp: SwitchGroup) -> None:
    if (g.m, g.n) != (grp.m, grp.n):
        raise InvalidInputError(
            f"group dimensions {(grp.m, grp.n)} do not match graph {(g.m, g.n)}"
        )


def decide_1col(g: MixedGraph) -> YesCertificate | NoCertificate:
    ensure_valid(g)
    if g.incidence_count == 0:
        return YesCertificate(Target("k1"))
    return NoCertificate("incidence", incidences=(incidence_ref(g, 0),))


def decide_2col(
    g: MixedGraph, grp: SwitchGroup, certificate: bool = True
) -> YesCertificate | NoCertificate:
    """Decide whether ``g`` switches to a homomorphic image of a 2-vertex
    target. With ``certificate=False`` YES answers carry no sequence."""
    ensure_valid(g)
    _check_dims(g, grp)
    if g.incidence_count == 0:
        return YesCertificate(Target("k1"))
    forest = spanning_forest(g)
    bip = bipartition(g, forest)
    if isinstance(bip, OddCycleWitness):
        return NoCertificate("odd_cycle", walk=bip.vertices)
    if g.edges and g.arcs:
        return NoCertificate("mixed_edge_arc", incidences=(("e", 1), ("a", 1)))
    if g.edges:
        return _edges_case(g, grp, forest, bip, certificate)
    return _arcs_case(g, grp, forest, bip, certificate)


def edge_2col(
    g: MixedGraph, grp: SwitchGroup, certificate: bool = True
) -> YesCertificate | NoCertificate:
    """The edges-only case; ``grp`` may carry arc data, which is ignored."""
    ensure_valid(g)
    if g.arcs:
        raise PreconditionError("edge_2col needs a graph without arcs")
    if g.m != grp.m:
        raise InvalidInputError(f"group has m = {grp.m}, graph has m = {g.m}")
    if not g.edges:
        return YesCertificate(Target("k1"))
    forest = spanning_forest(g)
    bip = bipartition(g, forest)
    if isinstance(bip, OddCycleWitness):
        raise PreconditionError("edge_2col needs a bipartite graph")
    return _edges_case(g, grp, forest, bip, certificate)


# -- edges ------------------------------------------------------------------------


def _edges_case(g, grp, forest, bip, certificate):
    egrp, pre = edge_action_group(grp)
    i = g.edges[0][2]
    members = orbit(egrp, "edge", i).members
    for k, (_, _, c) in enumerate(g.edges):
        if c not in members:
            return NoCertificate("orbit", incidences=(("e", 1), ("e", k + 1)))
    side = np.asarray(bip.side, dtype=np.int64)
    out = _edge_core(g, forest, side, egrp, i, certificate)
    if isinstance(out, NoCertificate):
        return out
    return _pull_back(out, Target("k2", i), bip.side, lambda p: pre[p], grp)


def _edge_core(g, forest, side, egrp, i, certificate):
    """Solve an edges-only bipartite graph whose colours all lie in the orbit
    of ``i``, over the edge-only group ``egrp``. Returns a NoCertificate or
    (tree steps, lifts) with elements of ``egrp`` (None when not asked)."""
    ti = i - 1
    alpha = egrp.alpha_table
    order0 = forest.order - 1
    parent0 = forest.parent - 1
    colour = g.colours
    choose = _choice_table(egrp, ti)
    step, bad = _kernels.tree_switches(
        order0, parent0, forest.parent_incidence, colour, choose, alpha, forest.depth
    )
    if bad >= 0:
        raise InvariantError(f"vertex {bad + 1}: no element maps its parent edge to colour {i}")

    cot = cotree_incidences(g, forest)
    a, b = g.ends
    pos = np.empty(g.vertex_count, dtype=np.int64)
    pos[order0] = np.arange(g.vertex_count)
    early = pos[a[cot]] < pos[b[cot]]
    first = np.where(early, a[cot], b[cot])
    second = np.where(early, b[cot], a[cot])
    ccol = _colours_after(colour[cot], first, second, step, alpha)
    classes = substitution_classes(egrp)
    allowed = np.zeros(egrp.m, dtype=bool)
    allowed[[j - 1 for j in classes.of(i)]] = True
    offending = np.flatnonzero(~allowed[ccol])
    if len(offending):
        k = int(cot[offending[0]])
        cyc = fundamental_cycle(g, forest, k)
        return NoCertificate("bad_cycle", walk=cyc.path, pair=(i, int(ccol[offending[0]]) + 1))
    if not certificate:
        return None

    tree_steps = [
        (int(v) + 1, egrp.elements[int(step[v])]) for v in order0 if step[v] >= 0
    ]
    tau = _witness_transforms(egrp, classes, i)
    block_j, fail = _kernels.lift_blocks(
        a[cot], b[cot], ccol, side, forest.component, g.vertex_count, ti,
        tau, egrp.mul_table, egrp.inv_table, alpha,
    )
    if fail >= 0:
        raise InvariantError(
            f"cotree {g.incidence_label(int(cot[fail]))} left outside the substitution class"
        )
    lifts = []
    for t in np.flatnonzero(block_j >= 0):
        k = int(cot[t])
        w = classes.witness(i, int(block_j[t]) + 1)
        lifts.append((int(a[k]) + 1, int(b[k]) + 1, [(v - 1, p) for v, p in w.steps]))
    return tree_steps, lifts


def _choice_table(egrp: SwitchGroup, ti: int) -> np.ndarray:
    """Per 0-based colour: least element index mapping it to ``ti``; -1 for
    ``ti`` itself (no switch), -2 when unreachable."""
    alpha = egrp.alpha_table
    choose = np.full(egrp.m, -2, dtype=np.int64)
    for c in range(egrp.m):
        hits = np.flatnonzero(alpha[:, c] == ti)
        if c == ti:
            choose[c] = -1
        elif len(hits):
            choose[c] = hits[0]
    return choose


def _colours_after(colour, first, second, step, alpha):
    """Colours once every vertex received its tree step; ``first`` holds the
    endpoint switched earlier."""
    c = colour.copy()
    for ends in (first, second):
        s = step[ends]
        c = np.where(s >= 0, alpha[np.maximum(s, 0), c], c)
    return c


def _witness_transforms(egrp, classes: SubstitutionClasses, i: int) -> np.ndarray:
    """``tau[j, e]``: net element the witness for (i, j+1) applies to C4 edge
    e (e01, e12, e23, e30); row -1 when j+1 is not in the class of i."""
    mul = egrp.mul_table
    tau = np.full((egrp.m, 4), -1, dtype=np.int64)
    for j in classes.of(i):
        row = [0, 0, 0, 0]
        for v, p in classes.witness(i, j).steps:
            r = v - 1
            e_idx = egrp.index(p)
            for e in range(4):
                if r == e or r == (e + 1) % 4:
                    row[e] = int(mul[row[e], e_idx])
        tau[j - 1] = row
    return tau


def _pull_back(core, target, colouring, lift_elem, grp):
    if core is None:
        return YesCertificate(target, None, (), tuple(colouring))
    tree_steps, lifts = core
    seq = SwitchSequence(tuple((v, lift_elem(p)) for v, p in tree_steps))
    out = tuple(
        Lift(u, v, tuple((r, lift_elem(p)) for r, p in w)) for u, v, w in lifts
    )
    return YesCertificate(target, seq, out, tuple(colouring))


# -- arcs -------------------------------------------------------------------------


def arcs_to_edges(g: MixedGraph, bip: Bipartition) -> MixedGraph:
    """Edge-coloured graph on 2n colours: an arc of colour c becomes colour
    c when its tail is on side 0, else n + c."""
    if g.edges:
        raise InvalidInputError("arcs_to_edges needs a graph without edges")
    if len(bip.side) != g.vertex_count:
        raise InvalidInputError("bipartition does not cover the vertex set")
    edges = []
    for t, h, c in g.arcs:
        if bip.side[t - 1] == bip.side[h - 1]:
            raise InvalidInputError(f"arc {(t, h, c)} does not cross the bipartition")
        edges.append((t, h, c if bip.side[t - 1] == 0 else g.n + c))
    return MixedGraph(2 * g.n, 0, g.vertex_count, tuple(edges))


def _arcs_case(g, grp, forest, bip, certificate):
    agrp, pre = arc_action_group(grp)
    rgrp = arc_group_to_edge_group(agrp)
    back = {arc_element_to_edge_element(p): p for p in agrp.elements}
    n = g.n
    side = np.asarray(bip.side, dtype=np.int64)
    comp = forest.component
    tail = g.ends[0]
    acol = g.colours  # 0-based arc colours

    def reduced(sides):
        return np.where(sides[tail] == 0, acol, acol + n)

    i = g.arcs[0][2]
    # orient components so that the first arc runs from side 0 to side 1 and
    # every other component agrees with the orbit of that arc's colour
    if side[tail[0]] == 1:
        side = np.where(comp == comp[tail[0]], 1 - side, side)
    in_orbit = np.zeros(2 * n, dtype=bool)
    in_orbit[[c - 1 for c in orbit(rgrp, "edge", i).members]] = True
    beta_orbit = orbit(agrp, "arc", i).members

    _, first_arc = np.unique(comp[tail], return_index=True)
    red = reduced(side)
    flip_comps = []
    for k in first_arc:
        if not in_orbit[red[k]]:
            if not in_orbit[(red[k] + n) % (2 * n)]:
                return NoCertificate("orbit", incidences=(("a", 1), ("a", int(k) + 1)))
            flip_comps.append(comp[tail[k]])
    if flip_comps:
        side = np.where(np.isin(comp, flip_comps), 1 - side, side)
        red = reduced(side)
    bad = np.flatnonzero(~in_orbit[red])
    if len(bad):
        k = int(bad[0])
        if g.arcs[k][2] not in beta_orbit:
            return NoCertificate("orbit", incidences=(("a", 1), ("a", k + 1)))
        mates = np.flatnonzero(comp[tail] == comp[tail[k]])
        return NoCertificate("direction_conflict", incidences=(("a", int(mates[0]) + 1), ("a", k + 1)))

    oriented = Bipartition(tuple(int(s) for s in side), bip.component)
    gr = arcs_to_edges(g, oriented)
    out = _edge_core(gr, forest, side, rgrp, i, certificate)
    if isinstance(out, NoCertificate):
        return out
    return _pull_back(out, Target("t2", i), oriented.side, lambda p: pre[back[p]], grp)


# -- explicit building blocks -----------------------------------------------------


def make_tree_monochromatic(
    g: MixedGraph, f: SpanningForest, i: int, grp: SwitchGroup
) -> SwitchSequence:
    """One switch per non-root vertex whose parent edge is not already colour
    ``i``, parents first, each with the least element sending the current
    parent-edge colour to ``i``."""
    if g.arcs:
        raise PreconditionError("make_tree_monochromatic needs a graph without arcs")
    if not 1 <= i <= g.m:
        raise InvalidInputError(f"colour {i} outside 1..{g.m}")
    egrp, pre = edge_action_group(grp)
    step, bad = _kernels.tree_switches(
        f.order - 1, f.parent - 1, f.parent_incidence, g.colours,
        _choice_table(egrp, i - 1), egrp.alpha_table, f.depth,
    )
    if bad >= 0:
        raise PreconditionError(
            f"no group element maps the parent edge of vertex {bad + 1} to colour {i}"
        )
    return SwitchSequence(
        tuple((int(v), pre[egrp.elements[int(step[v - 1])]]) for v in f.order if step[v - 1] >= 0)
    )


def lift_c4_witness(
    g: MixedGraph,
    bip: Bipartition,
    edge: tuple[int, int],
    i: int,
    classes: SubstitutionClasses,
    grp: SwitchGroup | None = None,
) -> SwitchSequence:
    """Expand the C4 witness for (i, j), j the current colour of ``edge``, to
    the whole component of ``edge``. Witness elements live in the edge-only
    group; pass ``grp`` to replace them by their least preimages there."""
    u, v = edge
    found = [c for x, y, c in g.edges if {x, y} == {u, v}]
    if not found:
        raise InvalidInputError(f"{edge} is not an edge of the graph")
    if bip.side[u - 1] == bip.side[v - 1]:
        raise PreconditionError(f"{u} and {v} lie on the same side")
    j = found[0]
    if j == i:
        return SwitchSequence()
    if not classes.substitutes(i, j):
        raise InvariantError(f"no witness for ({i}, {j}): {j} is not in the class of {i}")
    lift_elem = (lambda p: p) if grp is None else edge_action_group(grp)[1].__getitem__
    comp = bip.component[u - 1]
    xs = [w for w in range(1, g.vertex_count + 1)
          if bip.component[w - 1] == comp and bip.side[w - 1] == bip.side[u - 1] and w != u]
    ys = [w for w in range(1, g.vertex_count + 1)
          if bip.component[w - 1] == comp and bip.side[w - 1] == bip.side[v - 1] and w != v]
    roles = [[u], ys, xs, [v]]
    steps = []
    for r, p in classes.witness(i, j).steps:
        steps.extend((w, lift_elem(p)) for w in roles[r - 1])
    return SwitchSequence(tuple(steps))


def np_gadget(edges, m: int, n: int, vertex_count: int | None = None) -> MixedGraph:
    """Every classical edge becomes an edge of colour 1."""
    if m < 1:
        raise InvalidInputError("the gadget needs at least one edge colour")
    edges = [(int(u), int(v)) for u, v in edges]
    if vertex_count is None:
        vertex_count = max((max(e) for e in edges), default=0)
    g = MixedGraph(m, n, vertex_count, tuple((u, v, 1) for u, v in edges))
    ensure_valid(g)
    return g


def working_group(g: MixedGraph, grp: SwitchGroup) -> SwitchGroup:
    """The edge-only group the solver actually works over for ``g``."""
    if g.arcs and not g.edges:
        return arc_group_to_edge_group(arc_action_group(grp)[0])
    return edge_action_group(grp)[0]


def c_gamma_for(g: MixedGraph, grp: SwitchGroup) -> int:
    return substitution_classes(working_group(g, grp)).c_gamma


def check_length_bound(g: MixedGraph, cert: YesCertificate, c_gamma: int) -> bool:
    """Whether the certificate's sequence is within the per-component bound
    |V_C| - 1 + c * |V_C| * (|E_C| - |V_C| + 1), summed over components."""
    f = spanning_forest(g)
    nc = int(f.component.max()) + 1 if g.vertex_count else 0
    vc = np.bincount(f.component, minlength=nc)
    a, _ = g.ends
    ec = np.bincount(f.component[a], minlength=nc) if len(a) else np.zeros(nc, dtype=np.int64)
    bound = int(np.sum(vc - 1 + c_gamma * vc * (ec - vc + 1)))
    return cert.length(g) <= bound
