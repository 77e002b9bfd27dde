"""Exact minimum-weight perfect matching for syndrome decoding.

Instances are complete graphs over detection events where every event i
may alternatively pay boundary_weight[i] to match a virtual boundary
node. Solved exactly by:

1. an exactness-preserving reduction: an edge with
   w(i, j) >= boundary_weight[i] + boundary_weight[j] can always be
   replaced by two boundary edges, so it is dropped; the surviving graph
   splits into small independent components;
2. per component, a bitmask dynamic program (small components) or an
   O(n^3) blossom algorithm on the boundary-doubled graph (large ones).

The blossom implementation follows Galil's exposition of Edmonds'
algorithm with the usual dual-variable bookkeeping (duals and slacks
pre-multiplied by two so integer weights stay integer throughout).
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
from numba import njit

from ._mwpm_fast import _mwm_core, max_weight_matching_fast

DP_MAX_EVENTS = 14


# ---------------------------------------------------------------------------
# Bitmask dynamic program
# ---------------------------------------------------------------------------


@njit(cache=True)
def _dp_tables(w, b):
    n = b.shape[0]
    size = 1 << n
    f = np.empty(size, np.int64)
    choice = np.empty(size, np.int32)
    f[0] = 0
    for s in range(1, size):
        i = 0
        while not (s >> i) & 1:
            i += 1
        rest = s & ~(1 << i)
        best = b[i] + f[rest]
        ch = -1  # boundary
        t = rest
        while t:
            j = 0
            while not (t >> j) & 1:
                j += 1
            t &= ~(1 << j)
            c = w[i, j] + f[rest & ~(1 << j)]
            if c < best:
                best = c
                ch = j
        f[s] = best
        choice[s] = ch
    return f, choice


def dp_min_matching(w: np.ndarray, b: np.ndarray):
    """Exact matching by subset DP; returns (cost, pairs, boundary_list)."""
    n = len(b)
    if n == 0:
        return 0, [], []
    f, choice = _dp_tables(w.astype(np.int64), b.astype(np.int64))
    pairs, bnd = [], []
    s = (1 << n) - 1
    while s:
        i = (s & -s).bit_length() - 1
        j = choice[s]
        if j < 0:
            bnd.append(i)
            s &= ~(1 << i)
        else:
            pairs.append((i, int(j)))
            s &= ~((1 << i) | (1 << int(j)))
    return int(f[-1]), pairs, bnd


# ---------------------------------------------------------------------------
# Blossom algorithm (maximum-weight matching)
# ---------------------------------------------------------------------------


def max_weight_matching(edges, maxcardinality=False):
    """Maximum-weight matching; returns mate[v] (-1 when unmatched).

    edges is a list of (i, j, weight) with one edge per vertex pair.
    """
    if not edges:
        return []
    nedge = len(edges)
    nvertex = 1 + max(max(i, j) for i, j, _ in edges)
    maxweight = max(0, max(w for _, _, w in edges))
    # endpoint p of edge p // 2; p ^ 1 is the opposite endpoint
    endpoint = [edges[p // 2][p % 2] for p in range(2 * nedge)]
    neighbend = [[] for _ in range(nvertex)]
    for k, (i, j, _) in enumerate(edges):
        neighbend[i].append(2 * k + 1)
        neighbend[j].append(2 * k)

    mate = nvertex * [-1]
    # labels: 0 free, 1 S, 2 T (5 marks a breadcrumb during scans)
    label = (2 * nvertex) * [0]
    labelend = (2 * nvertex) * [-1]
    inblossom = list(range(nvertex))
    blossomparent = (2 * nvertex) * [-1]
    blossomchilds = (2 * nvertex) * [None]
    blossombase = list(range(nvertex)) + nvertex * [-1]
    blossomendps = (2 * nvertex) * [None]
    bestedge = (2 * nvertex) * [-1]
    blossombestedges = (2 * nvertex) * [None]
    unusedblossoms = list(range(nvertex, 2 * nvertex))
    dualvar = nvertex * [maxweight] + nvertex * [0]
    allowedge = nedge * [False]
    queue = []

    def slack(k):
        i, j, wt = edges[k]
        return dualvar[i] + dualvar[j] - 2 * wt

    def blossom_leaves(b):
        if b < nvertex:
            yield b
        else:
            for t in blossomchilds[b]:
                if t < nvertex:
                    yield t
                else:
                    yield from blossom_leaves(t)

    def assign_label(w, t, p):
        b = inblossom[w]
        assert label[w] == 0 and label[b] == 0
        label[w] = label[b] = t
        labelend[w] = labelend[b] = p
        bestedge[w] = bestedge[b] = -1
        if t == 1:
            queue.extend(blossom_leaves(b))
        else:
            base = blossombase[b]
            assert mate[base] >= 0
            assign_label(endpoint[mate[base]], 1, mate[base] ^ 1)

    def scan_blossom(v, w):
        # trace back from both endpoints, dropping breadcrumbs, until the
        # paths meet (new blossom base) or both hit a free vertex
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            assert label[b] == 1
            path.append(b)
            label[b] = 5
            assert labelend[b] == mate[blossombase[b]]
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                assert label[b] == 2
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(base, k):
        v, w, _ = edges[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unusedblossoms.pop()
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        blossomchilds[b] = path = []
        blossomendps[b] = endps = []
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        assert label[bb] == 1
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0
        for v in blossom_leaves(b):
            if label[inblossom[v]] == 2:
                queue.append(v)
            inblossom[v] = b
        # least-slack edges from the new blossom to other S-blossoms
        bestedgeto = (2 * nvertex) * [-1]
        for bv in path:
            if blossombestedges[bv] is None:
                nblists = [[p // 2 for p in neighbend[v]] for v in blossom_leaves(bv)]
            else:
                nblists = [blossombestedges[bv]]
            for nblist in nblists:
                for k2 in nblist:
                    i, j, _ = edges[k2]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if bj != b and label[bj] == 1 and (
                        bestedgeto[bj] == -1 or slack(k2) < slack(bestedgeto[bj])
                    ):
                        bestedgeto[bj] = k2
            blossombestedges[bv] = None
            bestedge[bv] = -1
        blossombestedges[b] = [k2 for k2 in bestedgeto if k2 != -1]
        bestedge[b] = -1
        for k2 in blossombestedges[b]:
            if bestedge[b] == -1 or slack(k2) < slack(bestedge[b]):
                bestedge[b] = k2

    def expand_blossom(b, endstage):
        for s in blossomchilds[b]:
            blossomparent[s] = -1
            if s < nvertex:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                expand_blossom(s, endstage)
            else:
                for v in blossom_leaves(s):
                    inblossom[v] = s
        if (not endstage) and label[b] == 2:
            # relabel the sub-blossoms along the path through which the
            # expanding T-blossom got its label
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = blossomchilds[b].index(entrychild)
            if j & 1:
                j -= len(blossomchilds[b])
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[blossomendps[b][j - endptrick] ^ endptrick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowedge[blossomendps[b][j - endptrick] // 2] = True
                j += jstep
                p = blossomendps[b][j - endptrick] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = blossomchilds[b][j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while blossomchilds[b][j] != entrychild:
                bv = blossomchilds[b][j]
                if label[bv] == 1:
                    j += jstep
                    continue
                for v in blossom_leaves(bv):
                    if label[v] != 0:
                        break
                if label[v] != 0:
                    assert label[v] == 2 and inblossom[v] == bv
                    label[v] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    assign_label(v, 2, labelend[v])
                j += jstep
        label[b] = labelend[b] = -1
        blossomchilds[b] = blossomendps[b] = None
        blossombase[b] = -1
        blossombestedges[b] = None
        bestedge[b] = -1
        unusedblossoms.append(b)

    def augment_blossom(b, v):
        t = v
        while blossomparent[t] != b:
            t = blossomparent[t]
        if t >= nvertex:
            augment_blossom(t, v)
        i = j = blossomchilds[b].index(t)
        if i & 1:
            j -= len(blossomchilds[b])
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = blossomchilds[b][j]
            p = blossomendps[b][j - endptrick] ^ endptrick
            if t >= nvertex:
                augment_blossom(t, endpoint[p])
            j += jstep
            t = blossomchilds[b][j]
            if t >= nvertex:
                augment_blossom(t, endpoint[p ^ 1])
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        blossomchilds[b] = blossomchilds[b][i:] + blossomchilds[b][:i]
        blossomendps[b] = blossomendps[b][i:] + blossomendps[b][:i]
        blossombase[b] = blossombase[blossomchilds[b][0]]
        assert blossombase[b] == v

    def augment_matching(k):
        v, w, _ = edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                assert label[bs] == 1
                assert labelend[bs] == mate[blossombase[bs]]
                if bs >= nvertex:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                assert label[bt] == 2
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                assert blossombase[bt] == t
                if bt >= nvertex:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    for _ in range(nvertex):
        # each stage augments the matching by one edge or proves optimality
        label[:] = (2 * nvertex) * [0]
        bestedge[:] = (2 * nvertex) * [-1]
        blossombestedges[nvertex:] = nvertex * [None]
        allowedge[:] = nedge * [False]
        queue[:] = []
        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)
        augmented = False
        while True:
            while queue and not augmented:
                v = queue.pop()
                assert label[inblossom[v]] == 1
                for p in neighbend[v]:
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = 0
                    if not allowedge[k]:
                        kslack = slack(k)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            assign_label(w, 2, p ^ 1)
                        elif label[inblossom[w]] == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, k)
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < slack(bestedge[b]):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break
            # dual update: pick the smallest of the four classic deltas
            deltatype = -1
            delta = deltaedge = deltablossom = None
            if not maxcardinality:
                deltatype = 1
                delta = min(dualvar[:nvertex])
            for v in range(nvertex):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = slack(bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(2 * nvertex):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    kslack = slack(bestedge[b])
                    d = kslack // 2 if isinstance(kslack, int) else kslack / 2
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(nvertex, 2 * nvertex):
                if (
                    blossombase[b] >= 0
                    and blossomparent[b] == -1
                    and label[b] == 2
                    and (deltatype == -1 or dualvar[b] < delta)
                ):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                # no more progress possible; max-cardinality optimum
                assert maxcardinality
                deltatype = 1
                delta = max(0, min(dualvar[:nvertex]))
            for v in range(nvertex):
                lab = label[inblossom[v]]
                if lab == 1:
                    dualvar[v] -= delta
                elif lab == 2:
                    dualvar[v] += delta
            for b in range(nvertex, 2 * nvertex):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta
            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                i, j, _ = edges[deltaedge]
                if label[inblossom[i]] == 0:
                    i, j = j, i
                assert label[inblossom[i]] == 1
                queue.append(i)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                i, j, _ = edges[deltaedge]
                assert label[inblossom[i]] == 1
                queue.append(i)
            else:
                expand_blossom(deltablossom, False)
        if not augmented:
            break
        for b in range(nvertex, 2 * nvertex):
            if (
                blossomparent[b] == -1
                and blossombase[b] >= 0
                and label[b] == 1
                and dualvar[b] == 0
            ):
                expand_blossom(b, True)

    return [endpoint[mate[v]] if mate[v] >= 0 else -1 for v in range(nvertex)]


def min_weight_perfect_matching(n: int, edges, fast: bool = True):
    """Exact min-weight perfect matching on n vertices (n even).

    Assumes a perfect matching exists. Returns (cost, pairs). With
    fast=True the numba port of the same algorithm is used.
    """
    if n == 0:
        return 0, []
    if n % 2:
        raise ValueError("odd vertex count cannot be perfectly matched")
    wmax = max(w for _, _, w in edges)
    flipped = [(i, j, wmax - w) for i, j, w in edges]
    if fast:
        mate = max_weight_matching_fast(flipped, maxcardinality=True)
    else:
        mate = max_weight_matching(flipped, maxcardinality=True)
    if any(m < 0 for m in mate):
        raise RuntimeError("no perfect matching found")
    wlut = {(i, j): w for i, j, w in edges}
    pairs = sorted((i, m) for i, m in enumerate(mate) if i < m)
    cost = sum(wlut.get(p, wlut.get((p[1], p[0]))) for p in pairs)
    return cost, pairs


def brute_force_min_matching(n: int, edges):
    """Exhaustive min-weight perfect matching; test oracle for small n."""
    wlut = {}
    for i, j, w in edges:
        wlut[(i, j)] = wlut[(j, i)] = w

    def rec(todo):
        if not todo:
            return 0, []
        i = todo[0]
        best, bestpairs = None, None
        for j in todo[1:]:
            if (i, j) not in wlut:
                continue
            sub = rec([t for t in todo if t not in (i, j)])
            if sub is None:
                continue
            c, p = sub
            c += wlut[(i, j)]
            if best is None or c < best:
                best, bestpairs = c, p + [(i, j)]
        if best is None:
            return None
        return best, bestpairs

    out = rec(list(range(n)))
    if out is None:
        raise RuntimeError("no perfect matching exists")
    return out[0], sorted(tuple(sorted(p)) for p in out[1])


# ---------------------------------------------------------------------------
# Decoder-facing dispatcher
# ---------------------------------------------------------------------------


def _components(n, kept):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in kept:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    comps = {}
    for v in range(n):
        comps.setdefault(find(v), []).append(v)
    return list(comps.values())


def _component_blossom(w, b, fast=True):
    """Min-cost matching with boundary option via a boundary-doubled graph."""
    m = len(b)
    edges = []
    for i in range(m):
        edges.append((i, m + i, int(b[i])))
        for j in range(i + 1, m):
            edges.append((i, j, int(w[i, j])))
            edges.append((m + i, m + j, 0))
    cost, pairs = min_weight_perfect_matching(2 * m, edges, fast=fast)
    out_pairs, bnd = [], []
    for i, j in pairs:
        if i < m and j < m:
            out_pairs.append((i, j))
        elif i < m:
            bnd.append(i)
        elif j < m:
            bnd.append(j)
    return cost, out_pairs, bnd


@njit
def _match_events_njit(w, b, dp_max):
    """Fully compiled variant of match_events; see its docstring.

    Returns (cost, pairs[(k, 2)], npairs, bnd[n], nbnd).
    """
    n = b.shape[0]
    pairs = np.empty((n, 2), np.int64)
    bnd = np.empty(n, np.int64)
    npairs = 0
    nbnd = 0
    total = 0
    # union-find over kept edges (w[i, j] < b[i] + b[j])
    parent = np.arange(n)
    for i in range(n):
        for j in range(i + 1, n):
            if w[i, j] < b[i] + b[j]:
                ri = i
                while parent[ri] != ri:
                    ri = parent[ri]
                rj = j
                while parent[rj] != rj:
                    rj = parent[rj]
                if ri != rj:
                    parent[ri] = rj
    root = np.empty(n, np.int64)
    for v in range(n):
        r = v
        while parent[r] != r:
            r = parent[r]
        root[v] = r
    done = np.zeros(n, np.uint8)
    comp = np.empty(n, np.int64)
    for v0 in range(n):
        if done[v0]:
            continue
        m = 0
        for v in range(v0, n):
            if root[v] == root[v0]:
                comp[m] = v
                m += 1
                done[v] = 1
        if m == 1:
            total += b[v0]
            bnd[nbnd] = v0
            nbnd += 1
            continue
        cw = np.empty((m, m), np.int64)
        cb = np.empty(m, np.int64)
        for i in range(m):
            cb[i] = b[comp[i]]
            for j in range(m):
                cw[i, j] = w[comp[i], comp[j]]
        if m <= dp_max:
            f, choice = _dp_tables(cw, cb)
            total += f[(1 << m) - 1]
            s = (1 << m) - 1
            while s:
                i = 0
                while not (s >> i) & 1:
                    i += 1
                j = choice[s]
                if j < 0:
                    bnd[nbnd] = comp[i]
                    nbnd += 1
                    s &= ~(1 << i)
                else:
                    pairs[npairs, 0] = comp[i]
                    pairs[npairs, 1] = comp[j]
                    npairs += 1
                    s &= ~((1 << i) | (1 << j))
        else:
            # boundary-doubled graph: event i pairs with virtual i + m
            nv = 2 * m
            ne = m * m
            ea = np.empty(ne, np.int64)
            eb = np.empty(ne, np.int64)
            ew = np.empty(ne, np.int64)
            t = 0
            wmax = 0
            for i in range(m):
                ea[t] = i
                eb[t] = m + i
                ew[t] = cb[i]
                if cb[i] > wmax:
                    wmax = cb[i]
                t += 1
                for j in range(i + 1, m):
                    ea[t] = i
                    eb[t] = j
                    ew[t] = cw[i, j]
                    if cw[i, j] > wmax:
                        wmax = cw[i, j]
                    t += 1
                    ea[t] = m + i
                    eb[t] = m + j
                    ew[t] = 0
                    t += 1
            flipped = wmax - ew
            mate = _mwm_core(ea, eb, flipped, nv, True)
            for i in range(m):
                mi = mate[i]
                if mi == m + i:
                    total += cb[i]
                    bnd[nbnd] = comp[i]
                    nbnd += 1
                elif i < mi:
                    total += cw[i, mi]
                    pairs[npairs, 0] = comp[i]
                    pairs[npairs, 1] = comp[mi]
                    npairs += 1
    return total, pairs, npairs, bnd, nbnd


def match_events(w: np.ndarray, b: np.ndarray, fast: bool = True):
    """Match events given pair weights w and boundary weights b.

    Returns (cost, pairs, boundary_matched). Exact: an edge with
    w[i,j] >= b[i] + b[j] is never needed, and the surviving components
    are independent.
    """
    n = len(b)
    if n == 0:
        return 0, [], []
    if fast:
        total, pairs, npairs, bnd, nbnd = _match_events_njit(
            np.ascontiguousarray(w, np.int64),
            np.ascontiguousarray(b, np.int64),
            DP_MAX_EVENTS,
        )
        return (
            int(total),
            [(int(pairs[k, 0]), int(pairs[k, 1])) for k in range(npairs)],
            [int(bnd[k]) for k in range(nbnd)],
        )
    kept = [(i, j) for i, j in combinations(range(n), 2) if w[i, j] < b[i] + b[j]]
    total, pairs, bnd = 0, [], []
    for comp in _components(n, kept):
        m = len(comp)
        if m == 1:
            total += int(b[comp[0]])
            bnd.append(comp[0])
            continue
        cw = w[np.ix_(comp, comp)]
        cb = b[np.asarray(comp)]
        if m <= DP_MAX_EVENTS:
            c, cp, cbnd = dp_min_matching(cw, cb)
        else:
            c, cp, cbnd = _component_blossom(cw, cb, fast=False)
        total += c
        pairs.extend((comp[i], comp[j]) for i, j in cp)
        bnd.extend(comp[i] for i in cbnd)
    return total, pairs, bnd
