"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` to see the report
lines next to the test names.
"""

import contextlib
import io
import itertools
import random
import time
from collections import deque

import numpy as np
import pytest

from switchcol import MixedGraph, YesCertificate, closure
from switchcol.cli import main
from switchcol.graph import bipartition, format_graph
from switchcol.group import (
    arc_element_to_edge_element,
    arc_group_to_edge_group,
    compose_action,
    format_group,
    inverse,
    is_abelian,
)
from switchcol.oracle import oracle_classes, oracle_decide_2col
from switchcol.solver import arcs_to_edges, c_gamma_for, check_length_bound, decide_2col, np_gadget
from switchcol.substitution import substitution_classes
from switchcol.switching import (
    SwitchSequence,
    apply_sequence,
    compress_abelian,
    invert_sequence,
    switch_set,
    switch_vertex,
)
from switchcol.verify import verify_certificate

from conftest import CATALOG, el, random_bipartite, random_element, random_graph

STATE_LIMIT = 10**6
_ELAPSED = {}


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _cycle_colourings(grp, L):
    pairs = [(k + 1, k + 2) for k in range(L - 1)] + [(1, L)]
    if grp.m:
        for cols in itertools.product(range(1, grp.m + 1), repeat=L):
            yield MixedGraph(grp.m, 0, L, tuple((u, v, c) for (u, v), c in zip(pairs, cols)))
    else:
        labels = [(c, d) for c in range(1, grp.n + 1) for d in (0, 1)]
        for lab in itertools.product(labels, repeat=L):
            arcs = tuple((v, u, c) if d else (u, v, c) for (u, v), (c, d) in zip(pairs, lab))
            yield MixedGraph(0, grp.n, L, (), arcs)


def _instances():
    rng = random.Random(2024)
    for name, grp in CATALOG.items():
        for L in (4, 5, 6):
            for g in _cycle_colourings(grp, L):
                yield name, grp, g
        for _ in range(200):
            yield name, grp, random_graph(rng, grp.m, grp.n, max_vertices=8, max_incidences=12)


@pytest.fixture(scope="module")
def oracle_runs():
    """Solver certificate and oracle verdict for every criterion-1 instance."""
    t0 = time.perf_counter()
    runs = []
    for name, grp, g in _instances():
        oracle = oracle_decide_2col(g, grp, cap=STATE_LIMIT)
        runs.append((name, grp, g, decide_2col(g, grp), oracle.yes))
    _ELAPSED["oracle_runs"] = time.perf_counter() - t0
    return runs


def test_criterion_1_oracle_equivalence(oracle_runs, capsys):
    bad = [(n, g) for n, _, g, cert, yes in oracle_runs if isinstance(cert, YesCertificate) != yes]
    yes = sum(1 for *_, y in oracle_runs if y)
    report(
        capsys, 1, not bad,
        f"{len(oracle_runs) - len(bad)}/{len(oracle_runs)} verdicts agree ({yes} YES); "
        f"first mismatch {bad[:1]} [{_ELAPSED['oracle_runs']:.1f}s]",
    )


def test_criterion_2_class_stability(capsys):
    t0 = time.perf_counter()
    failures = []
    for name, grp in CATALOG.items():
        by_length = [oracle_classes(grp, L) for L in (4, 6, 8)]
        egrp = arc_group_to_edge_group(grp) if grp.m == 0 else grp
        want = tuple(frozenset(c) for c in substitution_classes(egrp).classes)
        if not all(c == want for c in by_length):
            failures.append(name)
    report(capsys, 2, not failures, f"unstable or mismatched: {failures} [{time.perf_counter() - t0:.1f}s]")


def _parity_switchable(g):
    """Independent check: a potential x with x_u + x_v = [colour 2] mod 2 exists."""
    adj = [[] for _ in range(g.vertex_count + 1)]
    for u, v, c in g.edges:
        adj[u].append((v, c - 1))
        adj[v].append((u, c - 1))
    x = [None] * (g.vertex_count + 1)
    for s in range(1, g.vertex_count + 1):
        if x[s] is not None:
            continue
        x[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, w in adj[u]:
                if x[v] is None:
                    x[v] = x[u] ^ w
                    queue.append(v)
                elif x[v] != x[u] ^ w:
                    return False
    return True


def _signed_instances(rng, count):
    s2 = CATALOG["S2"]
    t = s2.elements[1]
    for k in range(count):
        g = random_bipartite(rng, 2, 0, rng.randint(2, 50), density=rng.choice([0.05, 0.1, 0.2]))
        if k % 2:
            # a switched monochromatic graph, so that YES answers are common
            mono = MixedGraph(2, 0, g.vertex_count, tuple((u, v, 1) for u, v, _ in g.edges))
            g = switch_set(mono, [v for v in range(1, g.vertex_count + 1) if rng.random() < 0.5], t)
        yield g


@pytest.fixture(scope="module")
def signed_runs():
    rng = random.Random(77)
    s2 = CATALOG["S2"]
    return [(g, decide_2col(g, s2)) for g in _signed_instances(rng, 300)]


def test_criterion_3_signed_graphs(signed_runs, capsys):
    t0 = time.perf_counter()
    bad = [g for g, cert in signed_runs if isinstance(cert, YesCertificate) != _parity_switchable(g)]
    yes = sum(isinstance(c, YesCertificate) for _, c in signed_runs)
    report(capsys, 3, not bad, f"{300 - len(bad)}/300 agree ({yes} YES) [{time.perf_counter() - t0:.1f}s]")


def test_criterion_4_soundness_and_bound(oracle_runs, signed_runs, capsys):
    runs = [(grp, g, cert) for _, grp, g, cert, _ in oracle_runs]
    runs += [(CATALOG["S2"], g, cert) for g, cert in signed_runs]
    runs += [(grp, g, cert) for grp, g, cert in _gadget_runs()]
    refuted, too_long = 0, 0
    for grp, g, cert in runs:
        if not verify_certificate(g, grp, cert).ok:
            refuted += 1
        if isinstance(cert, YesCertificate) and not check_length_bound(g, cert, c_gamma_for(g, grp)):
            too_long += 1
    report(capsys, 4, refuted == 0 and too_long == 0,
           f"{len(runs)} certificates, {refuted} refuted, {too_long} over the length bound")


def test_criterion_5_group_laws_and_reduction(capsys):
    problems = []
    for name, grp in CATALOG.items():
        e = grp.identity
        for p in grp.elements:
            if compose_action(e, p) != p or compose_action(p, inverse(p)) != e or inverse(p) not in grp:
                problems.append((name, "identity/inverse"))
            for q in grp.elements:
                pq = compose_action(p, q)
                if pq not in grp:
                    problems.append((name, "closure"))
                for r in grp.elements:
                    if compose_action(pq, r) != compose_action(p, compose_action(q, r)):
                        problems.append((name, "associativity"))
        if grp.m == 0:
            images = [arc_element_to_edge_element(p) for p in grp.elements]
            if len(set(images)) != len(images):
                problems.append((name, "not injective"))
            for p in grp.elements:
                for q in grp.elements:
                    lhs = arc_element_to_edge_element(compose_action(p, q))
                    if lhs != compose_action(arc_element_to_edge_element(p), arc_element_to_edge_element(q)):
                        problems.append((name, "not a homomorphism"))
    rng = random.Random(5)
    arc_groups = [CATALOG["flip1"], CATALOG["swapflip2"]]
    mismatches = 0
    for k in range(500):
        grp = arc_groups[k % 2]
        g = random_bipartite(rng, 0, grp.n, rng.randint(2, 8), density=0.5, arcs=True)
        bip = bipartition(g)
        v = rng.randint(1, g.vertex_count)
        p = random_element(rng, grp)
        if arcs_to_edges(switch_vertex(g, v, p), bip) != switch_vertex(
            arcs_to_edges(g, bip), v, arc_element_to_edge_element(p)
        ):
            mismatches += 1
    report(capsys, 5, not problems and mismatches == 0,
           f"group-law problems {problems[:3]}, reduction mismatches {mismatches}/500")


def _both_ends_expected(g, u, v, p):
    """Closed forms for switching both ends of the single incidence u-v."""
    edges = tuple((a, b, p.alpha[p.alpha[c - 1] - 1]) for a, b, c in g.edges)
    arcs = []
    for t, h, c in g.arcs:
        mid = p.beta[c - 1]
        flip = p.flips[c - 1] ^ p.flips[mid - 1]
        arcs.append((h, t, p.beta[mid - 1]) if flip else (t, h, p.beta[mid - 1]))
    return MixedGraph(g.m, g.n, g.vertex_count, edges, tuple(arcs))


def test_criterion_6_switching_identities(capsys):
    rng = random.Random(6)
    mixed = closure([el(2, 2, alpha=[(1, 2)], beta=[(1, 2)], flips=[1]), el(2, 2, flips=[2]),
                     el(2, 2, alpha=[(1, 2)], beta=[(1, 2)])])
    groups = list(CATALOG.values()) + [mixed]
    inverse_fail = 0
    for k in range(500):
        grp = groups[k % len(groups)]
        g = random_graph(rng, grp.m, grp.n)
        seq = SwitchSequence(tuple(
            (rng.randint(1, g.vertex_count), random_element(rng, grp)) for _ in range(rng.randint(0, 10))
        ))
        if apply_sequence(apply_sequence(g, seq), invert_sequence(seq)) != g:
            inverse_fail += 1
    order_fail = 0
    for k in range(200):
        grp = groups[k % len(groups)]
        g = random_graph(rng, grp.m, grp.n)
        p = random_element(rng, grp)
        xs = [v for v in range(1, g.vertex_count + 1) if rng.random() < 0.5]
        want = switch_set(g, xs, p)
        rng.shuffle(xs)
        if apply_sequence(g, [(v, p) for v in xs]) != want:
            order_fail += 1
    ends_fail = 0
    for grp in groups:
        for p in grp.elements:
            for g in _single_incidences(grp):
                if switch_set(g, [1, 2], p) != _both_ends_expected(g, 1, 2, p):
                    ends_fail += 1
    report(capsys, 6, inverse_fail == order_fail == ends_fail == 0,
           f"inverse failures {inverse_fail}/500, order failures {order_fail}/200, both-ends failures {ends_fail}")


def _single_incidences(grp):
    for c in range(1, grp.m + 1):
        yield MixedGraph(grp.m, grp.n, 2, ((1, 2, c),))
    for c in range(1, grp.n + 1):
        yield MixedGraph(grp.m, grp.n, 2, (), ((1, 2, c),))
        yield MixedGraph(grp.m, grp.n, 2, (), ((2, 1, c),))


def test_criterion_7_abelian_compression(oracle_runs, capsys):
    checked, bad = 0, 0
    for _, grp, g, cert, _ in oracle_runs:
        if not isinstance(cert, YesCertificate) or cert.sequence is None or not is_abelian(grp):
            continue
        full = cert.expand(g)
        short = compress_abelian(full, grp)
        checked += 1
        if len(short) > g.vertex_count or apply_sequence(g, short) != apply_sequence(g, full):
            bad += 1
    report(capsys, 7, bad == 0 and checked > 0, f"{checked - bad}/{checked} compressed sequences valid")


def _random_instance(nv, ne, seed):
    rng = np.random.default_rng(seed)
    u = rng.choice(np.arange(1, nv + 1, 2), 2 * ne)
    v = rng.choice(np.arange(2, nv + 1, 2), 2 * ne)
    pairs = np.unique(np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1), axis=0)
    rng.shuffle(pairs)
    pairs = pairs[:ne]
    cols = rng.integers(1, 5, len(pairs))
    return MixedGraph(4, 0, nv, tuple(zip(pairs[:, 0].tolist(), pairs[:, 1].tolist(), cols.tolist())))


def _timed_solve(tmp_path, g, group_file, *flags):
    path = tmp_path / f"g{g.vertex_count}.txt"
    if not path.exists():
        path.write_text(format_graph(g))
    t0 = time.perf_counter()
    with contextlib.redirect_stdout(io.StringIO()):
        code = main(["solve", str(path), group_file, *flags])
    return time.perf_counter() - t0, code


def test_criterion_8_performance(tmp_path, capsys):
    s4 = closure([el(4, alpha=[(1, 2)]), el(4, alpha=[(1, 2, 3, 4)])])
    group_file = tmp_path / "s4.txt"
    group_file.write_text(format_group(s4))
    group_file = str(group_file)
    # compile the kernels before timing
    _timed_solve(tmp_path, _random_instance(200, 600, 1), group_file, "--certificate", str(tmp_path / "w"))
    big = _random_instance(100_000, 300_000, 0)
    t_verdict, code = _timed_solve(tmp_path, big, group_file, "--verdict-only")
    t_cert, code2 = _timed_solve(tmp_path, big, group_file, "--certificate", str(tmp_path / "cert.txt"))
    scale = {}
    for nv in (10_000, 30_000, 100_000):
        g = big if nv == 100_000 else _random_instance(nv, 3 * nv, 0)
        scale[nv] = min(_timed_solve(tmp_path, g, group_file, "--verdict-only")[0] for _ in range(3))
    ratio = (scale[100_000] / scale[10_000]) / 10
    ok = t_verdict < 5 and t_cert < 30 and ratio <= 2 and code == code2 == 0
    with capsys.disabled():
        print("\n  per-size verdict-only times: " + ", ".join(f"{k}: {v:.2f}s" for k, v in scale.items()))
    report(capsys, 8, ok,
           f"verdict-only {t_verdict:.2f}s (<5), certificate {t_cert:.2f}s (<30), "
           f"scaling ratio {ratio:.2f}x linear (<=2)")


def _is_bipartite(nv, edges):
    colour = {}
    adj = {v: [] for v in range(1, nv + 1)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for s in adj:
        if s in colour:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    stack.append(v)
                elif colour[v] == colour[u]:
                    return False
    return True


def _gadget_runs():
    rng = random.Random(99)
    s3 = CATALOG["S3"]
    runs = []
    for _ in range(50):
        nv = rng.randint(1, 12)
        p = rng.choice([0.15, 0.25, 0.4])
        edges = [(u, v) for u in range(1, nv + 1) for v in range(u + 1, nv + 1) if rng.random() < p]
        g = np_gadget(edges, 3, 0, nv)
        runs.append((s3, g, decide_2col(g, s3)))
    return runs


def test_criterion_9_gadget(capsys):
    runs = _gadget_runs()
    bad = 0
    bip = 0
    for _, g, cert in runs:
        want = _is_bipartite(g.vertex_count, [(u, v) for u, v, _ in g.edges])
        bip += want
        bad += isinstance(cert, YesCertificate) != want
    report(capsys, 9, bad == 0, f"{50 - bad}/50 agree ({bip} bipartite)")
