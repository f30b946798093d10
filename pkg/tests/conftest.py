import random

import pytest

from switchcol import MixedGraph, closure
from switchcol.group import SwitchElement


def el(m=0, n=0, alpha=(), beta=(), flips=()):
    return SwitchElement.build(m, n, alpha=alpha, beta=beta, flips=flips)


def catalog():
    """The groups every cross-check runs over, by name."""
    return {
        "trivial": closure([], 2, 0),
        "S2": closure([el(2, alpha=[(1, 2)])]),
        "Z3": closure([el(3, alpha=[(1, 2, 3)])]),
        "S3": closure([el(3, alpha=[(1, 2)]), el(3, alpha=[(1, 2, 3)])]),
        "flip1": closure([el(0, 1, flips=[1])]),
        "swapflip2": closure([el(0, 2, beta=[(1, 2)], flips=[1])]),
    }


CATALOG = catalog()


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    monkeypatch.setenv("SWITCHCOL_BACKEND", request.param)
    return request.param


def random_graph(rng: random.Random, m: int, n: int, max_vertices=8, max_incidences=12, bipartite_bias=0.7):
    nv = rng.randint(1, max_vertices)
    pairs = [(u, v) for u in range(1, nv + 1) for v in range(u + 1, nv + 1)]
    rng.shuffle(pairs)
    if rng.random() < bipartite_bias:
        side = {v: rng.randint(0, 1) for v in range(1, nv + 1)}
        pairs = [p for p in pairs if side[p[0]] != side[p[1]]]
    pairs = pairs[: rng.randint(0, min(max_incidences, len(pairs)))]
    edges, arcs = [], []
    for u, v in pairs:
        if m and (not n or rng.random() < 0.5):
            edges.append((u, v, rng.randint(1, m)))
        elif n:
            if rng.random() < 0.5:
                u, v = v, u
            arcs.append((u, v, rng.randint(1, n)))
    return MixedGraph(m, n, nv, tuple(edges), tuple(arcs))


def random_bipartite(rng: random.Random, m: int, n: int, nv: int, density=0.4, arcs=False):
    side = [rng.randint(0, 1) for _ in range(nv)]
    edges, arc_list = [], []
    for u in range(1, nv + 1):
        for v in range(u + 1, nv + 1):
            if side[u - 1] != side[v - 1] and rng.random() < density:
                if arcs:
                    t, h = (u, v) if rng.random() < 0.5 else (v, u)
                    arc_list.append((t, h, rng.randint(1, n)))
                else:
                    edges.append((u, v, rng.randint(1, m)))
    return MixedGraph(m, n, nv, tuple(edges), tuple(arc_list))


def random_element(rng: random.Random, grp):
    return grp.elements[rng.randrange(len(grp))]
