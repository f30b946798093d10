import random

import pytest

from switchcol import InvalidInputError, MixedGraph, PreconditionError
from switchcol.group import compose_action, identity, inverse
from switchcol.switching import (
    SwitchSequence,
    apply_sequence,
    compress_abelian,
    format_sequence,
    invert_sequence,
    parse_sequence,
    switch_set,
    switch_vertex,
)

from conftest import CATALOG, el, random_element, random_graph


def _mixed_group():
    from switchcol import closure

    return closure([el(2, 2, alpha=[(1, 2)], beta=[(1, 2)], flips=[1]), el(2, 2, flips=[2])])


MIXED = _mixed_group()


def _random_sequence(rng, g, grp, length):
    return SwitchSequence(
        tuple((rng.randint(1, g.vertex_count), random_element(rng, grp)) for _ in range(length))
    )


def _underlying(g):
    return sorted({(min(x, y), max(x, y), kind) for kind, x, y, _ in map(g.incidence, range(g.incidence_count))})


def test_switch_vertex_examples():
    g = MixedGraph(2, 0, 2, ((1, 2, 1),))
    assert switch_vertex(g, 1, identity(2, 0)) == g
    assert switch_vertex(g, 1, el(2, alpha=[(1, 2)])).edges == ((1, 2, 2),)
    a = MixedGraph(0, 1, 2, (), ((1, 2, 1),))
    assert switch_vertex(a, 2, el(0, 1, flips=[1])).arcs == ((2, 1, 1),)


def test_switch_vertex_leaves_other_incidences():
    g = MixedGraph(2, 0, 4, ((1, 2, 1), (3, 4, 1)))
    assert switch_vertex(g, 1, el(2, alpha=[(1, 2)])).edges == ((1, 2, 2), (3, 4, 1))


def test_switch_errors():
    g = MixedGraph(2, 0, 2, ((1, 2, 1),))
    with pytest.raises(InvalidInputError):
        switch_vertex(g, 3, identity(2, 0))
    with pytest.raises(InvalidInputError):
        switch_vertex(g, 1, identity(3, 0))


def test_switch_set_examples():
    g = MixedGraph(2, 0, 2, ((1, 2, 1),))
    assert switch_set(g, [], el(2, alpha=[(1, 2)])) == g
    assert switch_set(g, [1, 2], el(2, alpha=[(1, 2)])) == g
    a = MixedGraph(0, 2, 2, (), ((1, 2, 1),))
    p = el(0, 2, beta=[(1, 2)], flips=[1])
    both = switch_set(a, [1, 2], p)
    assert both.arcs == ((2, 1, 1),)
    assert both == switch_vertex(switch_vertex(a, 1, p), 2, p)


def test_switch_set_order_independent():
    rng = random.Random(11)
    for _ in range(200):
        g = random_graph(rng, 2, 2, max_vertices=7, max_incidences=12)
        p = random_element(rng, MIXED)
        xs = [v for v in range(1, g.vertex_count + 1) if rng.random() < 0.5]
        want = switch_set(g, xs, p)
        for _ in range(3):
            rng.shuffle(xs)
            assert apply_sequence(g, [(v, p) for v in xs]) == want


def test_sequence_then_inverse_is_identity():
    rng = random.Random(5)
    for _ in range(500):
        g = random_graph(rng, 2, 2, max_vertices=7, max_incidences=12)
        s = _random_sequence(rng, g, MIXED, rng.randint(0, 8))
        h = apply_sequence(g, s)
        assert apply_sequence(h, invert_sequence(s)) == g
        assert apply_sequence(apply_sequence(g, invert_sequence(s)), s) == g
        assert _underlying(h) == _underlying(g)


def test_two_switches_equal_composed_switch():
    rng = random.Random(2)
    for _ in range(100):
        g = random_graph(rng, 2, 2)
        p, q = random_element(rng, MIXED), random_element(rng, MIXED)
        v = rng.randint(1, g.vertex_count)
        assert apply_sequence(g, [(v, p), (v, q)]) == switch_vertex(g, v, compose_action(p, q))


def test_equivalence_relation_laws():
    rng = random.Random(8)
    for _ in range(100):
        g = random_graph(rng, 2, 2)
        s = _random_sequence(rng, g, MIXED, 4)
        t = _random_sequence(rng, g, MIXED, 4)
        assert apply_sequence(g, SwitchSequence()) == g
        h = apply_sequence(g, s)
        assert apply_sequence(h, invert_sequence(s)) == g
        assert apply_sequence(apply_sequence(h, t), SwitchSequence()) == apply_sequence(g, s + t)


def test_homomorphism_lifting():
    """A homomorphism h: G -> H stays one after switching h^{-1}(w) in G and
    w in H with the same element."""
    rng = random.Random(4)
    checked = 0
    for _ in range(1000):
        g = random_graph(rng, 2, 2, max_vertices=6)
        if g.incidence_count == 0:
            continue
        # H: the image of G under a random vertex map onto 3 vertices
        f = {v: rng.randint(1, 3) for v in range(1, g.vertex_count + 1)}
        imgs = {}
        ok = True
        for kind, x, y, c in map(g.incidence, range(g.incidence_count)):
            if f[x] == f[y]:
                ok = False
                break
            key = (min(f[x], f[y]), max(f[x], f[y]))
            val = (kind, f[x], f[y], c)
            if imgs.setdefault(key, val) != val:
                ok = False
                break
        if not ok:
            continue
        H = MixedGraph(
            2, 2, 3,
            tuple((a, b, c) for kind, a, b, c in imgs.values() if kind == "e"),
            tuple((a, b, c) for kind, a, b, c in imgs.values() if kind == "a"),
        )
        w = rng.randint(1, 3)
        p = random_element(rng, MIXED)
        g2 = switch_set(g, [v for v in f if f[v] == w], p)
        h2 = switch_vertex(H, w, p)
        targets = {(min(a, b), max(a, b)): ("e", a, b, c) for a, b, c in h2.edges}
        targets.update({(min(a, b), max(a, b)): ("a", a, b, c) for a, b, c in h2.arcs})
        for kind, x, y, c in map(g2.incidence, range(g2.incidence_count)):
            tk, ta, tb, tc = targets[(min(f[x], f[y]), max(f[x], f[y]))]
            assert (kind, c) == (tk, tc)
            if kind == "a":
                assert (f[x], f[y]) == (ta, tb)
        checked += 1
    assert checked > 100


def test_invert_sequence_examples():
    assert invert_sequence(SwitchSequence()) == SwitchSequence()
    p = el(0, 3, beta=[(1, 2, 3)], flips=[1])
    assert invert_sequence(SwitchSequence(((2, p),))) == SwitchSequence(((2, inverse(p)),))


def test_compress_abelian_examples():
    grp = CATALOG["S2"]
    t = el(2, alpha=[(1, 2)])
    assert compress_abelian(SwitchSequence(((1, t), (1, t))), grp) == SwitchSequence()
    one = SwitchSequence(((1, t), (2, identity(2, 0)), (3, t)))
    assert compress_abelian(one, grp) == SwitchSequence(((1, t), (3, t)))
    with pytest.raises(PreconditionError):
        compress_abelian(SwitchSequence(), CATALOG["S3"])


@pytest.mark.parametrize("name", ["S2", "Z3", "flip1", "swapflip2"])
def test_compress_abelian_preserves_result(name):
    grp = CATALOG[name]
    rng = random.Random(1)
    for _ in range(100):
        g = random_graph(rng, grp.m, grp.n)
        s = _random_sequence(rng, g, grp, rng.randint(0, 10))
        c = compress_abelian(s, grp)
        assert len({v for v, _ in c}) == len(c) <= g.vertex_count
        assert apply_sequence(g, c) == apply_sequence(g, s)


def test_sequence_text_roundtrip():
    rng = random.Random(0)
    g = MixedGraph(2, 2, 5)
    s = _random_sequence(rng, g, MIXED, 6)
    assert parse_sequence(format_sequence(s), 2, 2) == s
