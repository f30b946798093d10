"""Switching a mixed graph at vertices, vertex sets and along sequences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidInputError, ParseError, PreconditionError
from .graph import MixedGraph
from .group import (
    SwitchElement,
    SwitchGroup,
    compose_action,
    format_element,
    inverse,
    is_abelian,
    parse_element,
)

Step = tuple[int, SwitchElement]


@dataclass(frozen=True)
class SwitchSequence:
    steps: tuple[Step, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other: "SwitchSequence") -> "SwitchSequence":
        return SwitchSequence(self.steps + other.steps)

    @classmethod
    def of(cls, steps: Iterable[Step]) -> "SwitchSequence":
        return cls(tuple((int(v), p) for v, p in steps))


def _check(g: MixedGraph, v: int, p: SwitchElement) -> None:
    if (p.m, p.n) != (g.m, g.n):
        raise InvalidInputError(
            f"element dimensions {(p.m, p.n)} do not match graph {(g.m, g.n)}"
        )
    if not 1 <= v <= g.vertex_count:
        raise InvalidInputError(f"vertex {v} outside 1..{g.vertex_count}")


class _Workspace:
    """Mutable copy of a graph's colours and arc orientations."""

    def __init__(self, g: MixedGraph):
        self.g = g
        self.edge_colour = [c for *_, c in g.edges]
        self.arcs = [list(a) for a in g.arcs]
        self.at: list[list[tuple[bool, int]]] = [[] for _ in range(g.vertex_count + 1)]
        for k, (u, v, _) in enumerate(g.edges):
            self.at[u].append((False, k))
            self.at[v].append((False, k))
        for k, (t, h, _) in enumerate(g.arcs):
            self.at[t].append((True, k))
            self.at[h].append((True, k))

    def switch(self, v: int, p: SwitchElement) -> None:
        for is_arc, k in self.at[v]:
            if is_arc:
                arc = self.arcs[k]
                c = arc[2]
                if p.flips[c - 1]:
                    arc[0], arc[1] = arc[1], arc[0]
                arc[2] = p.beta[c - 1]
            else:
                self.edge_colour[k] = p.alpha[self.edge_colour[k] - 1]

    def graph(self) -> MixedGraph:
        g = self.g
        edges = tuple((u, v, c) for (u, v, _), c in zip(g.edges, self.edge_colour))
        return MixedGraph(g.m, g.n, g.vertex_count, edges, tuple(tuple(a) for a in self.arcs))


def switch_vertex(g: MixedGraph, v: int, p: SwitchElement) -> MixedGraph:
    _check(g, v, p)
    ws = _Workspace(g)
    ws.switch(v, p)
    return ws.graph()


def switch_set(g: MixedGraph, xs: Iterable[int], p: SwitchElement) -> MixedGraph:
    """Switch every vertex of ``xs`` with ``p``. Computed in closed form:
    incidences with both ends in ``xs`` receive ``p`` twice."""
    xs = set(xs)
    for v in xs:
        _check(g, v, p)
    if (p.m, p.n) != (g.m, g.n):
        raise InvalidInputError("element dimensions do not match graph")
    edges = []
    for u, v, c in g.edges:
        for _ in range((u in xs) + (v in xs)):
            c = p.alpha[c - 1]
        edges.append((u, v, c))
    arcs = []
    for t, h, c in g.arcs:
        hits = (t in xs) + (h in xs)
        if hits == 1:
            if p.flips[c - 1]:
                t, h = h, t
            c = p.beta[c - 1]
        elif hits == 2:
            b = p.beta[c - 1]
            if p.flips[c - 1] ^ p.flips[b - 1]:
                t, h = h, t
            c = p.beta[b - 1]
        arcs.append((t, h, c))
    return MixedGraph(g.m, g.n, g.vertex_count, tuple(edges), tuple(arcs))


def apply_sequence(g: MixedGraph, s: SwitchSequence | Iterable[Step]) -> MixedGraph:
    steps = s.steps if isinstance(s, SwitchSequence) else tuple(s)
    ws = _Workspace(g)
    for v, p in steps:
        _check(g, v, p)
        ws.switch(v, p)
    return ws.graph()


def invert_sequence(s: SwitchSequence) -> SwitchSequence:
    return SwitchSequence(tuple((v, inverse(p)) for v, p in reversed(s.steps)))


def compress_abelian(s: SwitchSequence, g: SwitchGroup) -> SwitchSequence:
    """One step per vertex, in first-occurrence order. Only valid for
    Abelian groups, where switches at different vertices commute."""
    if not is_abelian(g):
        raise PreconditionError("compress_abelian needs an Abelian group")
    net: dict[int, SwitchElement] = {}
    for v, p in s.steps:
        if p not in g:
            raise InvalidInputError(f"step element {format_element(p)} is not in the group")
        net[v] = compose_action(net[v], p) if v in net else p
    return SwitchSequence(tuple((v, p) for v, p in net.items() if not p.is_identity()))


def format_step(v: int, p: SwitchElement) -> str:
    return f"s {v} {format_element(p)}"


def format_sequence(s: SwitchSequence) -> str:
    return "".join(format_step(v, p) + "\n" for v, p in s.steps)


def parse_step(line: str, m: int, n: int, lineno: int | None = None) -> Step:
    head, _, rest = line.strip().partition(" ")
    if head != "s":
        raise ParseError(f"expected a step record 's', got {head!r}", lineno)
    vtok, _, elem = rest.strip().partition(" ")
    try:
        v = int(vtok)
    except ValueError:
        raise ParseError(f"bad vertex {vtok!r} in step", lineno) from None
    return v, parse_element(elem, m, n, lineno)


def parse_sequence(text: str, m: int, n: int) -> SwitchSequence:
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            steps.append(parse_step(line, m, n, lineno))
    return SwitchSequence(tuple(steps))
