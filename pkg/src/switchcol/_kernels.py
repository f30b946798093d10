"""Array kernels for the hot loops.

Every kernel has a numba implementation and a numpy/pure-Python fallback
producing identical output. ``SWITCHCOL_BACKEND=numpy`` forces the
fallback; the default is numba when it imports. The backend is read on
every call so tests can switch it with ``monkeypatch.setenv``.

All arrays are 0-based. Group elements are row indices of the group's
Cayley table; index 0 is the identity.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    from numba import types as nbtypes
    from numba.typed import Dict as NbDict

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BACKEND_ENV = "SWITCHCOL_BACKEND"

# C4 edge index for a pair of C4 vertex roles: e01=0, e12=1, e23=2, e30=3
C4_EDGE = np.full((4, 4), -1, dtype=np.int64)
for _a, _b, _e in ((0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 0, 3)):
    C4_EDGE[_a, _b] = C4_EDGE[_b, _a] = _e


def active_backend() -> str:
    choice = os.environ.get(BACKEND_ENV, "").strip().lower()
    if choice in ("numpy", "python", "0", "off"):
        return "numpy"
    if choice in ("", "numba", "1", "on"):
        return "numba" if HAVE_NUMBA else "numpy"
    raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {choice!r}")


# -----------------------------------------------------------------------------
# BFS spanning forest
# -----------------------------------------------------------------------------


def _bfs_forest_loops(nv, indptr, nbr, inc):
    order = np.empty(nv, dtype=np.int64)
    parent = np.full(nv, -1, dtype=np.int64)
    pinc = np.full(nv, -1, dtype=np.int64)
    depth = np.full(nv, -1, dtype=np.int64)
    comp = np.full(nv, -1, dtype=np.int64)
    head = 0
    tail = 0
    ncomp = 0
    for root in range(nv):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        comp[root] = ncomp
        order[tail] = root
        tail += 1
        while head < tail:
            x = order[head]
            head += 1
            for p in range(indptr[x], indptr[x + 1]):
                y = nbr[p]
                if depth[y] < 0:
                    depth[y] = depth[x] + 1
                    parent[y] = x
                    pinc[y] = inc[p]
                    comp[y] = ncomp
                    order[tail] = y
                    tail += 1
        ncomp += 1
    return order, parent, pinc, depth, comp


def _bfs_forest_numpy(nv, indptr, nbr, inc):
    order = np.empty(nv, dtype=np.int64)
    parent = np.full(nv, -1, dtype=np.int64)
    pinc = np.full(nv, -1, dtype=np.int64)
    depth = np.full(nv, -1, dtype=np.int64)
    comp = np.full(nv, -1, dtype=np.int64)
    pos = 0
    ncomp = 0
    degree = np.diff(indptr)
    for root in range(nv):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        comp[root] = ncomp
        order[pos] = root
        pos += 1
        frontier = np.array([root], dtype=np.int64)
        d = 0
        while len(frontier):
            counts = degree[frontier]
            total = int(counts.sum())
            if total == 0:
                break
            # flatten (frontier vertex, ascending neighbour) in queue order
            src = np.repeat(frontier, counts)
            offs = np.repeat(indptr[frontier] - np.cumsum(counts) + counts, counts)
            idx = offs + np.arange(total)
            cand = nbr[idx]
            keep = depth[cand] < 0
            cand, src, cinc = cand[keep], src[keep], inc[idx][keep]
            if not len(cand):
                break
            _, first = np.unique(cand, return_index=True)
            first.sort()
            new = cand[first]
            parent[new] = src[first]
            pinc[new] = cinc[first]
            d += 1
            depth[new] = d
            comp[new] = ncomp
            order[pos : pos + len(new)] = new
            pos += len(new)
            frontier = new
        ncomp += 1
    return order, parent, pinc, depth, comp


# -----------------------------------------------------------------------------
# Tree monochromatisation: one switch per non-root vertex, parents first
# -----------------------------------------------------------------------------


def _tree_switches_loops(order, parent, pinc, colour, choose, alpha):
    """``choose[c]``: element mapping colour c to the target, -1 for "no
    switch needed", -2 for "impossible". Returns (step per vertex, first
    failing vertex or -1)."""
    nv = len(order)
    step = np.full(nv, -1, dtype=np.int64)
    for t in range(nv):
        v = order[t]
        p = parent[v]
        if p < 0:
            continue
        c = colour[pinc[v]]
        if step[p] >= 0:
            c = alpha[step[p], c]
        s = choose[c]
        if s == -2:
            return step, v
        step[v] = s
    return step, -1


def _tree_switches_numpy(order, parent, pinc, colour, choose, alpha, depth):
    nv = len(order)
    step = np.full(nv, -1, dtype=np.int64)
    if nv == 0:
        return step, -1
    d_order = depth[order]
    # vertices of equal depth are contiguous in BFS order
    bounds = np.flatnonzero(np.diff(d_order)) + 1
    for level in np.split(order, bounds):
        if depth[level[0]] == 0:
            level = level[parent[level] >= 0]
            if not len(level):
                continue
        c = colour[pinc[level]]
        sp = step[parent[level]]
        switched = sp >= 0
        c = np.where(switched, alpha[np.maximum(sp, 0), c], c)
        s = choose[c]
        bad = np.flatnonzero(s == -2)
        if len(bad):
            # report the same vertex as the sequential loop: first in order
            return step, int(level[bad[0]])
        step[level] = s
    return step, -1


# -----------------------------------------------------------------------------
# Cotree lifting. Every cotree edge whose current colour is not yet the
# target gets one block: the C4 witness for its colour, lifted to the whole
# component. Blocks are never expanded; an edge's colour is recovered from
# per-component prefix products of the generic (v1v2) transforms plus the
# blocks that touch its own endpoints.
# -----------------------------------------------------------------------------


def _lift_blocks_loops(cu, cv, ccol, side, comp, nv, target, tau, mul, inv, alpha, c4):
    T = len(cu)
    cnt = np.zeros(nv + 1, dtype=np.int64)
    for t in range(T):
        cnt[cu[t] + 1] += 1
        cnt[cv[t] + 1] += 1
    off = np.cumsum(cnt)
    fill = np.zeros(nv, dtype=np.int64)
    slots = np.empty(2 * T, dtype=np.int64)
    pre_before = np.zeros(T, dtype=np.int64)
    pre_after = np.zeros(T, dtype=np.int64)
    block_j = np.full(T, -1, dtype=np.int64)
    running = 0
    cur_comp = -1
    for t in range(T):
        x = cu[t]
        y = cv[t]
        C = comp[x]
        if C != cur_comp:
            running = 0
            cur_comp = C
        c = ccol[t]
        last = 0
        px = off[x]
        ex = off[x] + fill[x]
        py = off[y]
        ey = off[y] + fill[y]
        while px < ex or py < ey:
            if py >= ey or (px < ex and slots[px] < slots[py]):
                b = slots[px]
                px += 1
            elif px >= ex or slots[py] < slots[px]:
                b = slots[py]
                py += 1
            else:
                b = slots[px]
                px += 1
                py += 1
            c = alpha[mul[inv[last], pre_before[b]], c]
            ub = cu[b]
            if x == ub:
                rx = 0
            elif x == cv[b]:
                rx = 3
            elif side[x] == side[ub]:
                rx = 2
            else:
                rx = 1
            if y == ub:
                ry = 0
            elif y == cv[b]:
                ry = 3
            elif side[y] == side[ub]:
                ry = 2
            else:
                ry = 1
            c = alpha[tau[block_j[b], c4[rx, ry]], c]
            last = pre_after[b]
        c = alpha[mul[inv[last], running], c]
        if c == target:
            continue
        if tau[c, 0] < 0:
            return block_j, t
        block_j[t] = c
        pre_before[t] = running
        running = mul[running, tau[c, 1]]
        pre_after[t] = running
        slots[off[x] + fill[x]] = t
        fill[x] += 1
        slots[off[y] + fill[y]] = t
        fill[y] += 1
    return block_j, -1


def _lift_blocks_python(cu, cv, ccol, side, comp, nv, target, tau, mul, inv, alpha, c4):
    # same algorithm over plain lists; numpy scalar indexing is too slow here
    cu_l, cv_l, ccol_l = cu.tolist(), cv.tolist(), ccol.tolist()
    side_l, comp_l = side.tolist(), comp.tolist()
    tau_l, mul_l, inv_l, alpha_l, c4_l = tau.tolist(), mul.tolist(), inv.tolist(), alpha.tolist(), c4.tolist()
    T = len(cu_l)
    events: list[list[int]] = [[] for _ in range(nv)]
    pre_before = [0] * T
    pre_after = [0] * T
    block_j = [-1] * T
    running = 0
    cur_comp = -1
    for t in range(T):
        x, y = cu_l[t], cv_l[t]
        C = comp_l[x]
        if C != cur_comp:
            running, cur_comp = 0, C
        c = ccol_l[t]
        last = 0
        for b in _merge_sorted(events[x], events[y]):
            c = alpha_l[mul_l[inv_l[last]][pre_before[b]]][c]
            ub, vb = cu_l[b], cv_l[b]
            rx = 0 if x == ub else 3 if x == vb else 2 if side_l[x] == side_l[ub] else 1
            ry = 0 if y == ub else 3 if y == vb else 2 if side_l[y] == side_l[ub] else 1
            c = alpha_l[tau_l[block_j[b]][c4_l[rx][ry]]][c]
            last = pre_after[b]
        c = alpha_l[mul_l[inv_l[last]][running]][c]
        if c == target:
            continue
        if tau_l[c][0] < 0:
            return np.array(block_j, dtype=np.int64), t
        block_j[t] = c
        pre_before[t] = running
        running = mul_l[running][tau_l[c][1]]
        pre_after[t] = running
        events[x].append(t)
        events[y].append(t)
    return np.array(block_j, dtype=np.int64), -1


def _merge_sorted(a: list[int], b: list[int]):
    i = j = 0
    while i < len(a) or j < len(b):
        if j >= len(b) or (i < len(a) and a[i] < b[j]):
            yield a[i]
            i += 1
        elif i >= len(a) or b[j] < a[i]:
            yield b[j]
            j += 1
        else:
            yield a[i]
            i += 1
            j += 1


# -----------------------------------------------------------------------------
# Net element per incidence for a certificate: explicit start elements
# followed by lift blocks (arbitrary component interleaving allowed).
# -----------------------------------------------------------------------------


def _net_elements_loops(ia, ib, start, bu, bv, btau, side, comp, ncomp, nv, mul, inv, c4):
    B = len(bu)
    K = len(ia)
    running = np.zeros(ncomp, dtype=np.int64)
    pre_before = np.zeros(B, dtype=np.int64)
    pre_after = np.zeros(B, dtype=np.int64)
    cnt = np.zeros(nv + 1, dtype=np.int64)
    for b in range(B):
        C = comp[bu[b]]
        pre_before[b] = running[C]
        running[C] = mul[running[C], btau[b, 1]]
        pre_after[b] = running[C]
        cnt[bu[b] + 1] += 1
        cnt[bv[b] + 1] += 1
    off = np.cumsum(cnt)
    fill = np.zeros(nv, dtype=np.int64)
    slots = np.empty(2 * B, dtype=np.int64)
    for b in range(B):
        u = bu[b]
        v = bv[b]
        slots[off[u] + fill[u]] = b
        fill[u] += 1
        slots[off[v] + fill[v]] = b
        fill[v] += 1
    out = np.empty(K, dtype=np.int64)
    for k in range(K):
        x = ia[k]
        y = ib[k]
        net = start[k]
        last = 0
        px = off[x]
        ex = off[x + 1]
        py = off[y]
        ey = off[y + 1]
        while px < ex or py < ey:
            if py >= ey or (px < ex and slots[px] < slots[py]):
                b = slots[px]
                px += 1
            elif px >= ex or slots[py] < slots[px]:
                b = slots[py]
                py += 1
            else:
                b = slots[px]
                px += 1
                py += 1
            net = mul[net, mul[inv[last], pre_before[b]]]
            ub = bu[b]
            if x == ub:
                rx = 0
            elif x == bv[b]:
                rx = 3
            elif side[x] == side[ub]:
                rx = 2
            else:
                rx = 1
            if y == ub:
                ry = 0
            elif y == bv[b]:
                ry = 3
            elif side[y] == side[ub]:
                ry = 2
            else:
                ry = 1
            net = mul[net, btau[b, c4[rx, ry]]]
            last = pre_after[b]
        out[k] = mul[net, mul[inv[last], running[comp[x]]]]
    return out


def _net_elements_python(ia, ib, start, bu, bv, btau, side, comp, ncomp, nv, mul, inv, c4):
    bu_l, bv_l = bu.tolist(), bv.tolist()
    btau_l, side_l, comp_l = btau.tolist(), side.tolist(), comp.tolist()
    mul_l, inv_l, c4_l = mul.tolist(), inv.tolist(), c4.tolist()
    running = [0] * ncomp
    pre_before, pre_after = [], []
    events: list[list[int]] = [[] for _ in range(nv)]
    for b, (u, v) in enumerate(zip(bu_l, bv_l)):
        C = comp_l[u]
        pre_before.append(running[C])
        running[C] = mul_l[running[C]][btau_l[b][1]]
        pre_after.append(running[C])
        events[u].append(b)
        events[v].append(b)
    out = []
    for x, y, net in zip(ia.tolist(), ib.tolist(), start.tolist()):
        last = 0
        for b in _merge_sorted(events[x], events[y]):
            net = mul_l[net][mul_l[inv_l[last]][pre_before[b]]]
            ub, vb = bu_l[b], bv_l[b]
            rx = 0 if x == ub else 3 if x == vb else 2 if side_l[x] == side_l[ub] else 1
            ry = 0 if y == ub else 3 if y == vb else 2 if side_l[y] == side_l[ub] else 1
            net = mul_l[net][btau_l[b][c4_l[rx][ry]]]
            last = pre_after[b]
        out.append(mul_l[net][mul_l[inv_l[last]][running[comp_l[x]]]])
    return np.array(out, dtype=np.int64)


# -----------------------------------------------------------------------------
# Oracle: BFS over switch-reachable configurations of a fixed underlying graph
# -----------------------------------------------------------------------------
# A configuration is a mixed-radix integer: digit k is the 0-based colour of
# edge k, or 2*colour + reversed for arc k. A move is (vertex, action) where
# action indexes rows of the edge/arc maps.


def _goal_loops(code, weight, radix, is_arc, tail, side, comp, ncomp, fwd_seen):
    K = len(weight)
    first = -1
    for k in range(K):
        d = (code // weight[k]) % radix[k]
        colour = d // 2 if is_arc[k] else d
        if first < 0:
            first = colour
        elif colour != first:
            return False
    for C in range(ncomp):
        fwd_seen[C] = -1
    for k in range(K):
        if is_arc[k]:
            d = (code // weight[k]) % radix[k]
            # side of the arc's current tail
            f = side[tail[k]] ^ (d & 1)
            C = comp[tail[k]]
            if fwd_seen[C] < 0:
                fwd_seen[C] = f
            elif fwd_seen[C] != f:
                return False
    return True


def _oracle_bfs_loops(
    start, weight, radix, is_arc, tail, side, comp, ncomp,
    vptr, vinc, emap, amap, check_goal, cap, visited,
):
    nv = len(vptr) - 1
    nact = emap.shape[0]
    codes = np.empty(min(cap, 1024) + 1, dtype=np.int64)
    par = np.empty(len(codes), dtype=np.int64)
    mv = np.empty(len(codes), dtype=np.int64)
    fwd_seen = np.empty(max(ncomp, 1), dtype=np.int64)
    codes[0] = start
    par[0] = -1
    mv[0] = -1
    visited[start] = 0
    count = 1
    head = 0
    while head < count:
        code = codes[head]
        if check_goal and _goal(code, weight, radix, is_arc, tail, side, comp, ncomp, fwd_seen):
            return codes[:count], par[:count], mv[:count], head, False
        for w in range(nv):
            for a in range(nact):
                new = code
                for p in range(vptr[w], vptr[w + 1]):
                    k = vinc[p]
                    d = (code // weight[k]) % radix[k]
                    if is_arc[k]:
                        nd = amap[a, d]
                    else:
                        nd = emap[a, d]
                    new += (nd - d) * weight[k]
                if new in visited:
                    continue
                if count >= cap:
                    return codes[:count], par[:count], mv[:count], -1, True
                if count >= len(codes):
                    grown = 2 * len(codes)
                    codes2 = np.empty(grown, dtype=np.int64)
                    par2 = np.empty(grown, dtype=np.int64)
                    mv2 = np.empty(grown, dtype=np.int64)
                    codes2[:count] = codes[:count]
                    par2[:count] = par[:count]
                    mv2[:count] = mv[:count]
                    codes, par, mv = codes2, par2, mv2
                visited[new] = count
                codes[count] = new
                par[count] = head
                mv[count] = w * nact + a
                count += 1
        head += 1
    return codes[:count], par[:count], mv[:count], -1, False


def _oracle_bfs_python(
    start, weight, radix, is_arc, tail, side, comp, ncomp,
    vptr, vinc, emap, amap, check_goal, cap,
):
    nv = len(vptr) - 1
    nact = emap.shape[0]
    moves = [(w, a) for w in range(nv) for a in range(nact)]
    # per move: incidence ids touched and the digit map to use for each
    move_incs = [vinc[vptr[w] : vptr[w + 1]] for w, _ in moves]
    all_codes = [np.array([start], dtype=np.int64)]
    all_par = [np.array([-1], dtype=np.int64)]
    all_mv = [np.array([-1], dtype=np.int64)]
    visited = np.array([start], dtype=np.int64)
    frontier = all_codes[0]
    base = 0
    count = 1
    while len(frontier):
        digits = (frontier[:, None] // weight[None, :]) % radix[None, :]
        if check_goal:
            hit = _goal_numpy(digits, is_arc, tail, side, comp, ncomp)
            if hit.any():
                codes = np.concatenate(all_codes)
                return (codes, np.concatenate(all_par), np.concatenate(all_mv),
                        base + int(np.argmax(hit)), False)
        cand = np.empty((len(frontier), len(moves)), dtype=np.int64)
        for j, ((w, a), incs) in enumerate(zip(moves, move_incs)):
            new = frontier.copy()
            for k in incs:
                d = digits[:, k]
                nd = amap[a, d] if is_arc[k] else emap[a, d]
                new += (nd - d) * weight[k]
            cand[:, j] = new
        flat = cand.ravel()
        fresh = ~np.isin(flat, visited)
        pos = np.flatnonzero(fresh)
        if not len(pos):
            break
        _, first = np.unique(flat[pos], return_index=True)
        first.sort()
        pos = pos[first]
        new_codes = flat[pos]
        if count + len(new_codes) > cap:
            allowed = cap - count
            codes = np.concatenate(all_codes + [new_codes[:allowed]])
            par = np.concatenate(all_par + [base + pos[:allowed] // len(moves)])
            mv = np.concatenate(all_mv + [pos[:allowed] % len(moves)])
            return codes, par, mv, -1, True
        all_codes.append(new_codes)
        all_par.append(base + pos // len(moves))
        # moves are enumerated vertex-major, matching w * nact + a
        all_mv.append(pos % len(moves))
        visited = np.union1d(visited, new_codes)
        base += len(frontier)
        count += len(new_codes)
        frontier = new_codes
    return np.concatenate(all_codes), np.concatenate(all_par), np.concatenate(all_mv), -1, False


def _goal_numpy(digits, is_arc, tail, side, comp, ncomp):
    F, K = digits.shape
    if K == 0:
        return np.ones(F, dtype=bool)
    colour = np.where(is_arc[None, :], digits // 2, digits)
    ok = np.all(colour == colour[:, :1], axis=1)
    arcs = np.flatnonzero(is_arc)
    if len(arcs):
        fwd = side[tail[arcs]][None, :] ^ (digits[:, arcs] & 1)
        acomp = comp[tail[arcs]]
        for C in np.unique(acomp):
            cols = fwd[:, acomp == C]
            ok &= np.all(cols == cols[:, :1], axis=1)
    return ok


# -----------------------------------------------------------------------------
# dispatch
# -----------------------------------------------------------------------------

if HAVE_NUMBA:
    _bfs_forest_nb = njit(cache=True)(_bfs_forest_loops)
    _tree_switches_nb = njit(cache=True)(_tree_switches_loops)
    _lift_blocks_nb = njit(cache=True)(_lift_blocks_loops)
    _net_elements_nb = njit(cache=True)(_net_elements_loops)
    _goal = njit(cache=True)(_goal_loops)
    _oracle_bfs_nb = njit(cache=True)(_oracle_bfs_loops)
else:  # pragma: no cover
    _goal = _goal_loops


def bfs_forest(nv, indptr, nbr, inc):
    """(order, parent, parent incidence, depth, component), BFS from the
    least unvisited vertex, neighbours in ascending order."""
    if active_backend() == "numba":
        return _bfs_forest_nb(nv, indptr, nbr, inc)
    return _bfs_forest_numpy(nv, indptr, nbr, inc)


def tree_switches(order, parent, pinc, colour, choose, alpha, depth):
    if active_backend() == "numba":
        step, bad = _tree_switches_nb(order, parent, pinc, colour, choose, alpha)
        return step, int(bad)
    return _tree_switches_numpy(order, parent, pinc, colour, choose, alpha, depth)


def lift_blocks(cu, cv, ccol, side, comp, nv, target, tau, mul, inv, alpha):
    """Colour handled by each cotree edge's block (-1: already the target),
    and the index of the first edge whose colour has no witness (-1: none)."""
    args = (cu, cv, ccol, side, comp, nv, target, tau, mul, inv, alpha, C4_EDGE)
    if active_backend() == "numba":
        block_j, fail = _lift_blocks_nb(*args)
        return block_j, int(fail)
    return _lift_blocks_python(*args)


def net_elements(ia, ib, start, bu, bv, btau, side, comp, ncomp, nv, mul, inv):
    args = (ia, ib, start, bu, bv, btau, side, comp, ncomp, nv, mul, inv, C4_EDGE)
    if active_backend() == "numba":
        return _net_elements_nb(*args)
    return _net_elements_python(*args)


def oracle_bfs(start, weight, radix, is_arc, tail, side, comp, ncomp,
               vptr, vinc, emap, amap, check_goal, cap):
    """(codes in BFS order, parent index, move id, goal index or -1,
    overflowed). Move id is ``vertex * n_actions + action``."""
    if active_backend() == "numba":
        visited = NbDict.empty(key_type=nbtypes.int64, value_type=nbtypes.int64)
        codes, par, mv, hit, over = _oracle_bfs_nb(
            start, weight, radix, is_arc, tail, side, comp, ncomp,
            vptr, vinc, emap, amap, check_goal, cap, visited,
        )
        return codes, par, mv, int(hit), bool(over)
    return _oracle_bfs_python(
        start, weight, radix, is_arc, tail, side, comp, ncomp,
        vptr, vinc, emap, amap, check_goal, cap,
    )
