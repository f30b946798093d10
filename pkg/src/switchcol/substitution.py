"""Substitution classes: which colours j a single odd edge can be switched
back to colour i on an otherwise monochromatic even cycle.

Computed by BFS over the reconfiguration graph of edge colourings of the
labelled 4-cycle v0 v1 v2 v3 v0. A C4 state is the tuple of colours of
(v0v1, v1v2, v2v3, v3v0); "nearly (i, j)" puts the lone j on v3v0.
Witness sequences act on the C4 drawn as a MixedGraph whose vertex k + 1
is v_k.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field

from .errors import InvalidInputError, ResourceLimitError
from .graph import MixedGraph
from .group import SwitchElement, SwitchGroup, inverse
from .switching import SwitchSequence

C4State = tuple[int, int, int, int]

# edges at each C4 vertex, as positions in the state tuple
_C4_INCIDENT = ((0, 3), (0, 1), (1, 2), (2, 3))
DEFAULT_STATE_CAP = 10**7


def c4_graph(state: C4State, m: int) -> MixedGraph:
    c01, c12, c23, c30 = state
    return MixedGraph(m, 0, 4, ((1, 2, c01), (2, 3, c12), (3, 4, c23), (1, 4, c30)))


def nearly(i: int, j: int) -> C4State:
    return (i, i, i, j)


def _require_edge_group(g: SwitchGroup) -> None:
    if g.n != 0:
        raise InvalidInputError(
            "substitution classes need an edge-only group (n = 0); "
            "reduce arc groups with arc_group_to_edge_group first"
        )


@dataclass(frozen=True)
class Component:
    """BFS tree of one reconfiguration-graph component. ``predecessor``
    maps each state to ``(previous state, (c4 vertex, element))``; the start
    maps to ``None``."""

    start: C4State
    predecessor: dict
    eccentricity: int

    def path_to(self, state: C4State) -> list[tuple[int, SwitchElement]]:
        """Moves leading from ``start`` to ``state``."""
        moves = []
        while True:
            link = self.predecessor[state]
            if link is None:
                return moves[::-1]
            state, move = link
            moves.append(move)


def reconfiguration_component(g: SwitchGroup, start: C4State) -> Component:
    _require_edge_group(g)
    start = tuple(int(c) for c in start)
    if len(start) != 4 or not all(1 <= c <= g.m for c in start):
        raise InvalidInputError(f"C4 state {start} needs four colours in 1..{g.m}")
    moves = [p for p in g.elements if not p.is_identity()]
    pred: dict = {start: None}
    dist = {start: 0}
    queue = deque([start])
    ecc = 0
    while queue:
        s = queue.popleft()
        for vertex, (e1, e2) in enumerate(_C4_INCIDENT):
            for p in moves:
                t = list(s)
                t[e1] = p.alpha[s[e1] - 1]
                t[e2] = p.alpha[s[e2] - 1]
                t = tuple(t)
                if t not in pred:
                    pred[t] = (s, (vertex, p))
                    dist[t] = dist[s] + 1
                    ecc = max(ecc, dist[t])
                    queue.append(t)
    return Component(start, pred, ecc)


@dataclass(frozen=True)
class SubstitutionClasses:
    m: int
    classes: tuple[frozenset[int], ...]
    witnesses: dict = field(repr=False)  # (i, j) -> SwitchSequence on the C4
    c_gamma: int

    def of(self, i: int) -> frozenset[int]:
        return self.classes[i - 1]

    def substitutes(self, i: int, j: int) -> bool:
        """True when colour i can be substituted for j."""
        return j in self.classes[i - 1]

    def witness(self, i: int, j: int) -> SwitchSequence:
        return self.witnesses[(i, j)]


_cache: dict = {}
_cache_lock = threading.Lock()


def substitution_classes(g: SwitchGroup) -> SubstitutionClasses:
    """Classes and witnesses for an edge-only group, computed once per group."""
    _require_edge_group(g)
    key = (g.m, g.elements)
    with _cache_lock:
        hit = _cache.get(key)
        if hit is None:
            hit = _cache[key] = _compute_classes(g)
    return hit


def _compute_classes(g: SwitchGroup) -> SubstitutionClasses:
    classes = []
    witnesses = {}
    c_gamma = 0
    for i in range(1, g.m + 1):
        comp = reconfiguration_component(g, (i, i, i, i))
        c_gamma = max(c_gamma, comp.eccentricity)
        members = set()
        for j in range(1, g.m + 1):
            target = nearly(i, j)
            if target in comp.predecessor:
                members.add(j)
                # walk mono -> nearly, then undo it: nearly -> mono
                path = comp.path_to(target)
                steps = tuple((vertex + 1, inverse(p)) for vertex, p in reversed(path))
                witnesses[(i, j)] = SwitchSequence(steps)
        classes.append(frozenset(members))
    return SubstitutionClasses(g.m, tuple(classes), witnesses, c_gamma)


def cycle_classes(g: SwitchGroup, length: int, cap: int = DEFAULT_STATE_CAP) -> tuple[frozenset[int], ...]:
    """Classes from BFS on the labelled cycle of the given even length, with
    the lone edge on v_{length-1} v0."""
    _require_edge_group(g)
    if length < 4 or length % 2:
        raise InvalidInputError(f"cycle length must be even and at least 4, got {length}")
    if g.m**length > cap:
        raise ResourceLimitError(f"{g.m}^{length} cycle states exceed the cap {cap}")
    moves = [p.alpha for p in g.elements if not p.is_identity()]
    out = []
    for i in range(1, g.m + 1):
        start = (i,) * length
        seen = {start}
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for v in range(length):
                left, right = (v - 1) % length, v  # edge k joins v_k and v_{k+1}
                for alpha in moves:
                    t = list(s)
                    t[left] = alpha[s[left] - 1]
                    t[right] = alpha[s[right] - 1]
                    t = tuple(t)
                    if t not in seen:
                        seen.add(t)
                        queue.append(t)
        members = frozenset(j for j in range(1, g.m + 1) if (i,) * (length - 1) + (j,) in seen)
        out.append(members)
    return tuple(out)


@dataclass(frozen=True)
class StabilityReport:
    reference: tuple[frozenset[int], ...]
    by_length: dict

    @property
    def stable(self) -> bool:
        return all(c == self.reference for c in self.by_length.values())


def check_class_stability(g: SwitchGroup, lengths, cap: int = DEFAULT_STATE_CAP) -> StabilityReport:
    lengths = list(lengths)
    for L in lengths:
        if L < 4 or L % 2:
            raise InvalidInputError(f"lengths must be even and at least 4, got {L}")
        if g.m**L > cap:
            raise ResourceLimitError(f"{g.m}^{L} cycle states exceed the cap {cap}")
    reference = substitution_classes(g).classes
    return StabilityReport(reference, {L: cycle_classes(g, L, cap) for L in lengths})
