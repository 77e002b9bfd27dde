"""Array-based blossom matching compiled with numba.

Port of the pure-Python maximum-weight matching in matching.py onto flat
int64 arrays so the hot decoding path avoids interpreter overhead. The
Python version stays as the readable reference and the two are
cross-checked in the tests.

State layout (nvertex = n, nedge = m, nb = 2 n blossom slots):
  ea, eb, ew        edge endpoints and weights
  endpoint[2m]      endpoint[p] = vertex at endpoint p of edge p // 2
  nb_flat, nb_ptr   CSR adjacency of endpoint indices per vertex
  childs, endps     (nb, n + 2) child/endpoint lists; nchilds = -1 is "unset"
  bbe, nbe          least-slack edge lists per blossom; nbe = -1 is "unset"
  qn, un            one-element cursors for the queue and free-slot stacks
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit
def _blossom_leaves(b, nvertex, childs, nchilds, out):
    """Collect the vertices inside blossom b into out; returns the count."""
    stack = np.empty(2 * nvertex, np.int64)
    stack[0] = b
    sp = 1
    cnt = 0
    while sp > 0:
        sp -= 1
        t = stack[sp]
        if t < nvertex:
            out[cnt] = t
            cnt += 1
        else:
            for c in range(nchilds[t] - 1, -1, -1):
                stack[sp] = childs[t, c]
                sp += 1
    return cnt


@njit
def _assign_label(w, t, p, nvertex, endpoint, mate, label, labelend,
                  inblossom, blossombase, bestedge, childs, nchilds,
                  qarr, qn):
    leaves = np.empty(nvertex, np.int64)
    while True:
        b = inblossom[w]
        label[w] = t
        label[b] = t
        labelend[w] = p
        labelend[b] = p
        bestedge[w] = -1
        bestedge[b] = -1
        if t == 1:
            cnt = _blossom_leaves(b, nvertex, childs, nchilds, leaves)
            for i in range(cnt):
                qarr[qn[0]] = leaves[i]
                qn[0] += 1
            return
        base = blossombase[b]
        w = endpoint[mate[base]]
        p = mate[base] ^ 1
        t = 1


@njit
def _scan_blossom(v, w, nvertex, endpoint, mate, label, labelend,
                  inblossom, blossombase):
    path = np.empty(2 * nvertex, np.int64)
    np_ = 0
    base = -1
    while v != -1 or w != -1:
        b = inblossom[v]
        if label[b] & 4:
            base = blossombase[b]
            break
        path[np_] = b
        np_ += 1
        label[b] = 5
        if labelend[b] == -1:
            v = -1
        else:
            v = endpoint[labelend[b]]
            b = inblossom[v]
            v = endpoint[labelend[b]]
        if w != -1:
            v, w = w, v
    for i in range(np_):
        label[path[i]] = 1
    return base


@njit
def _slack(k, ea, eb, ew, dualvar):
    return dualvar[ea[k]] + dualvar[eb[k]] - 2 * ew[k]


@njit
def _add_blossom(base, k, nvertex, ea, eb, ew, endpoint, nb_flat, nb_ptr,
                 mate, label, labelend, inblossom, blossomparent,
                 blossombase, childs, nchilds, endps, bestedge, bbe, nbe,
                 unused, un, dualvar, qarr, qn):
    v = ea[k]
    w = eb[k]
    bb = inblossom[base]
    bv = inblossom[v]
    bw = inblossom[w]
    un[0] -= 1
    b = unused[un[0]]
    blossombase[b] = base
    blossomparent[b] = -1
    blossomparent[bb] = b
    # walk both sides of the new cycle down to the shared base
    tmp_c = np.empty(nvertex + 2, np.int64)
    tmp_e = np.empty(nvertex + 2, np.int64)
    nc = 0
    while bv != bb:
        blossomparent[bv] = b
        tmp_c[nc] = bv
        tmp_e[nc] = labelend[bv]
        nc += 1
        v = endpoint[labelend[bv]]
        bv = inblossom[v]
    # reverse v-side, append bb, the triggering edge, then the w side
    childs[b, 0] = bb
    for i in range(nc):
        childs[b, 1 + i] = tmp_c[nc - 1 - i]
        endps[b, i] = tmp_e[nc - 1 - i]
    ne = nc
    nc += 1
    endps[b, ne] = 2 * k
    ne += 1
    while bw != bb:
        blossomparent[bw] = b
        childs[b, nc] = bw
        nc += 1
        endps[b, ne] = labelend[bw] ^ 1
        ne += 1
        w = endpoint[labelend[bw]]
        bw = inblossom[w]
    nchilds[b] = nc
    label[b] = 1
    labelend[b] = labelend[bb]
    dualvar[b] = 0
    leaves = np.empty(nvertex, np.int64)
    cnt = _blossom_leaves(b, nvertex, childs, nchilds, leaves)
    for i in range(cnt):
        lv = leaves[i]
        if label[inblossom[lv]] == 2:
            qarr[qn[0]] = lv
            qn[0] += 1
        inblossom[lv] = b
    # least-slack edges from the new blossom to each other S-blossom
    bestedgeto = np.full(2 * nvertex, -1, np.int64)
    for ci in range(nc):
        cv = childs[b, ci]
        if nbe[cv] == -1:
            lcnt = _blossom_leaves(cv, nvertex, childs, nchilds, leaves)
            for li in range(lcnt):
                v2 = leaves[li]
                for pi in range(nb_ptr[v2], nb_ptr[v2 + 1]):
                    k2 = nb_flat[pi] // 2
                    j = eb[k2] if inblossom[eb[k2]] != b else ea[k2]
                    bj = inblossom[j]
                    if bj != b and label[bj] == 1 and (
                        bestedgeto[bj] == -1
                        or _slack(k2, ea, eb, ew, dualvar)
                        < _slack(bestedgeto[bj], ea, eb, ew, dualvar)
                    ):
                        bestedgeto[bj] = k2
        else:
            for ti in range(nbe[cv]):
                k2 = bbe[cv, ti]
                j = eb[k2] if inblossom[eb[k2]] != b else ea[k2]
                bj = inblossom[j]
                if bj != b and label[bj] == 1 and (
                    bestedgeto[bj] == -1
                    or _slack(k2, ea, eb, ew, dualvar)
                    < _slack(bestedgeto[bj], ea, eb, ew, dualvar)
                ):
                    bestedgeto[bj] = k2
        nbe[cv] = -1
        bestedge[cv] = -1
    m = 0
    for i in range(2 * nvertex):
        if bestedgeto[i] != -1:
            bbe[b, m] = bestedgeto[i]
            m += 1
    nbe[b] = m
    bestedge[b] = -1
    for ti in range(m):
        k2 = bbe[b, ti]
        if bestedge[b] == -1 or (
            _slack(k2, ea, eb, ew, dualvar)
            < _slack(bestedge[b], ea, eb, ew, dualvar)
        ):
            bestedge[b] = k2


@njit
def _expand_blossom(b, endstage, nvertex, endpoint, mate, label, labelend,
                    inblossom, blossomparent, blossombase, childs, nchilds,
                    endps, bestedge, nbe, unused, un, dualvar, allowedge,
                    qarr, qn):
    leaves = np.empty(nvertex, np.int64)
    for ci in range(nchilds[b]):
        s = childs[b, ci]
        blossomparent[s] = -1
        if s < nvertex:
            inblossom[s] = s
        elif endstage and dualvar[s] == 0:
            _expand_blossom(s, endstage, nvertex, endpoint, mate, label,
                            labelend, inblossom, blossomparent, blossombase,
                            childs, nchilds, endps, bestedge, nbe, unused,
                            un, dualvar, allowedge, qarr, qn)
        else:
            cnt = _blossom_leaves(s, nvertex, childs, nchilds, leaves)
            for li in range(cnt):
                inblossom[leaves[li]] = s
    if (not endstage) and label[b] == 2:
        # relabel sub-blossoms along the path the T-label arrived through
        entrychild = inblossom[endpoint[labelend[b] ^ 1]]
        j = 0
        for ci in range(nchilds[b]):
            if childs[b, ci] == entrychild:
                j = ci
                break
        nc = nchilds[b]
        if j & 1:
            j -= nc
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        # negative j wraps around the child cycle, as for a Python list
        p = labelend[b]
        while j != 0:
            label[endpoint[p ^ 1]] = 0
            label[endpoint[endps[b, (j - endptrick) % nc] ^ endptrick ^ 1]] = 0
            _assign_label(endpoint[p ^ 1], 2, p, nvertex, endpoint, mate,
                          label, labelend, inblossom, blossombase, bestedge,
                          childs, nchilds, qarr, qn)
            allowedge[endps[b, (j - endptrick) % nc] // 2] = 1
            j += jstep
            p = endps[b, (j - endptrick) % nc] ^ endptrick
            allowedge[p // 2] = 1
            j += jstep
        bv = childs[b, j % nc]
        label[endpoint[p ^ 1]] = 2
        label[bv] = 2
        labelend[endpoint[p ^ 1]] = p
        labelend[bv] = p
        bestedge[bv] = -1
        j += jstep
        while childs[b, j % nc] != entrychild:
            bv = childs[b, j % nc]
            if label[bv] == 1:
                j += jstep
                continue
            cnt = _blossom_leaves(bv, nvertex, childs, nchilds, leaves)
            v = -1
            for li in range(cnt):
                if label[leaves[li]] != 0:
                    v = leaves[li]
                    break
            if v != -1:
                label[v] = 0
                label[endpoint[mate[blossombase[bv]]]] = 0
                _assign_label(v, 2, labelend[v], nvertex, endpoint, mate,
                              label, labelend, inblossom, blossombase,
                              bestedge, childs, nchilds, qarr, qn)
            j += jstep
    label[b] = -1
    labelend[b] = -1
    nchilds[b] = -1
    blossombase[b] = -1
    nbe[b] = -1
    bestedge[b] = -1
    unused[un[0]] = b
    un[0] += 1


@njit
def _augment_blossom(b, v, nvertex, endpoint, mate, blossomparent,
                     blossombase, childs, nchilds, endps):
    t = v
    while blossomparent[t] != b:
        t = blossomparent[t]
    if t >= nvertex:
        _augment_blossom(t, v, nvertex, endpoint, mate, blossomparent,
                         blossombase, childs, nchilds, endps)
    i = 0
    for ci in range(nchilds[b]):
        if childs[b, ci] == t:
            i = ci
            break
    j = i
    nc = nchilds[b]
    if i & 1:
        j -= nc
        jstep = 1
        endptrick = 0
    else:
        jstep = -1
        endptrick = 1
    # negative j wraps around the child cycle, as for a Python list
    while j != 0:
        j += jstep
        t = childs[b, j % nc]
        p = endps[b, (j - endptrick) % nc] ^ endptrick
        if t >= nvertex:
            _augment_blossom(t, endpoint[p], nvertex, endpoint, mate,
                             blossomparent, blossombase, childs, nchilds,
                             endps)
        j += jstep
        t = childs[b, j % nc]
        if t >= nvertex:
            _augment_blossom(t, endpoint[p ^ 1], nvertex, endpoint, mate,
                             blossomparent, blossombase, childs, nchilds,
                             endps)
        mate[endpoint[p]] = p ^ 1
        mate[endpoint[p ^ 1]] = p
    # rotate the child/endpoint lists so the sub-blossom with v is first
    tmp = np.empty(nc, np.int64)
    for ci in range(nc):
        tmp[ci] = childs[b, (ci + i) % nc]
    for ci in range(nc):
        childs[b, ci] = tmp[ci]
    for ci in range(nc):
        tmp[ci] = endps[b, (ci + i) % nc]
    for ci in range(nc):
        endps[b, ci] = tmp[ci]
    blossombase[b] = blossombase[childs[b, 0]]


@njit
def _augment_matching(k, nvertex, ea, eb, endpoint, mate, label, labelend,
                      inblossom, blossomparent, blossombase, childs,
                      nchilds, endps):
    for side in range(2):
        if side == 0:
            s = ea[k]
            p = 2 * k + 1
        else:
            s = eb[k]
            p = 2 * k
        while True:
            bs = inblossom[s]
            if bs >= nvertex:
                _augment_blossom(bs, s, nvertex, endpoint, mate,
                                 blossomparent, blossombase, childs,
                                 nchilds, endps)
            mate[s] = p
            if labelend[bs] == -1:
                break
            t = endpoint[labelend[bs]]
            bt = inblossom[t]
            s = endpoint[labelend[bt]]
            j = endpoint[labelend[bt] ^ 1]
            if bt >= nvertex:
                _augment_blossom(bt, j, nvertex, endpoint, mate,
                                 blossomparent, blossombase, childs,
                                 nchilds, endps)
            mate[j] = labelend[bt]
            p = labelend[bt] ^ 1


@njit
def _mwm_core(ea, eb, ew, nvertex, maxcardinality):
    nedge = ea.shape[0]
    maxweight = 0
    for k in range(nedge):
        if ew[k] > maxweight:
            maxweight = ew[k]
    endpoint = np.empty(2 * nedge, np.int64)
    for k in range(nedge):
        endpoint[2 * k] = ea[k]
        endpoint[2 * k + 1] = eb[k]
    deg = np.zeros(nvertex + 1, np.int64)
    for k in range(nedge):
        deg[ea[k] + 1] += 1
        deg[eb[k] + 1] += 1
    nb_ptr = np.cumsum(deg)
    fill = nb_ptr[:-1].copy()
    nb_flat = np.empty(2 * nedge, np.int64)
    for k in range(nedge):
        nb_flat[fill[ea[k]]] = 2 * k + 1
        fill[ea[k]] += 1
        nb_flat[fill[eb[k]]] = 2 * k
        fill[eb[k]] += 1

    nb = 2 * nvertex
    mate = np.full(nvertex, -1, np.int64)
    label = np.zeros(nb, np.int64)
    labelend = np.full(nb, -1, np.int64)
    inblossom = np.arange(nvertex)
    blossomparent = np.full(nb, -1, np.int64)
    blossombase = np.full(nb, -1, np.int64)
    blossombase[:nvertex] = np.arange(nvertex)
    childs = np.empty((nb, nvertex + 2), np.int64)
    nchilds = np.full(nb, -1, np.int64)
    endps = np.empty((nb, nvertex + 2), np.int64)
    bestedge = np.full(nb, -1, np.int64)
    bbe = np.empty((nb, nb), np.int64)
    nbe = np.full(nb, -1, np.int64)
    unused = np.empty(nb, np.int64)
    un = np.zeros(1, np.int64)
    for b in range(nvertex, nb):
        unused[un[0]] = b
        un[0] += 1
    dualvar = np.zeros(nb, np.int64)
    dualvar[:nvertex] = maxweight
    allowedge = np.zeros(nedge, np.uint8)
    qarr = np.empty(2 * nvertex * nvertex + 2 * nvertex, np.int64)
    qn = np.zeros(1, np.int64)

    for _stage in range(nvertex):
        label[:] = 0
        bestedge[:] = -1
        nbe[nvertex:] = -1
        allowedge[:] = 0
        qn[0] = 0
        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                _assign_label(v, 1, -1, nvertex, endpoint, mate, label,
                              labelend, inblossom, blossombase, bestedge,
                              childs, nchilds, qarr, qn)
        augmented = False
        while True:
            while qn[0] > 0 and not augmented:
                qn[0] -= 1
                v = qarr[qn[0]]
                for pi in range(nb_ptr[v], nb_ptr[v + 1]):
                    p = nb_flat[pi]
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = 0
                    if not allowedge[k]:
                        kslack = _slack(k, ea, eb, ew, dualvar)
                        if kslack <= 0:
                            allowedge[k] = 1
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            _assign_label(w, 2, p ^ 1, nvertex, endpoint,
                                          mate, label, labelend, inblossom,
                                          blossombase, bestedge, childs,
                                          nchilds, qarr, qn)
                        elif label[inblossom[w]] == 1:
                            base = _scan_blossom(v, w, nvertex, endpoint,
                                                 mate, label, labelend,
                                                 inblossom, blossombase)
                            if base >= 0:
                                _add_blossom(base, k, nvertex, ea, eb, ew,
                                             endpoint, nb_flat, nb_ptr,
                                             mate, label, labelend,
                                             inblossom, blossomparent,
                                             blossombase, childs, nchilds,
                                             endps, bestedge, bbe, nbe,
                                             unused, un, dualvar, qarr, qn)
                            else:
                                _augment_matching(k, nvertex, ea, eb,
                                                  endpoint, mate, label,
                                                  labelend, inblossom,
                                                  blossomparent,
                                                  blossombase, childs,
                                                  nchilds, endps)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < _slack(
                            bestedge[b], ea, eb, ew, dualvar
                        ):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < _slack(
                            bestedge[w], ea, eb, ew, dualvar
                        ):
                            bestedge[w] = k
            if augmented:
                break
            deltatype = -1
            delta = 0
            deltaedge = -1
            deltablossom = -1
            if not maxcardinality:
                deltatype = 1
                delta = dualvar[0]
                for v in range(1, nvertex):
                    if dualvar[v] < delta:
                        delta = dualvar[v]
            for v in range(nvertex):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = _slack(bestedge[v], ea, eb, ew, dualvar)
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(nb):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    d = _slack(bestedge[b], ea, eb, ew, dualvar) // 2
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(nvertex, nb):
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
                deltatype = 1
                delta = dualvar[0]
                for v in range(1, nvertex):
                    if dualvar[v] < delta:
                        delta = dualvar[v]
                if delta < 0:
                    delta = 0
            for v in range(nvertex):
                lab = label[inblossom[v]]
                if lab == 1:
                    dualvar[v] -= delta
                elif lab == 2:
                    dualvar[v] += delta
            for b in range(nvertex, nb):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta
            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = 1
                i = ea[deltaedge]
                if label[inblossom[i]] == 0:
                    i = eb[deltaedge]
                qarr[qn[0]] = i
                qn[0] += 1
            elif deltatype == 3:
                allowedge[deltaedge] = 1
                qarr[qn[0]] = ea[deltaedge]
                qn[0] += 1
            else:
                _expand_blossom(deltablossom, False, nvertex, endpoint,
                                mate, label, labelend, inblossom,
                                blossomparent, blossombase, childs, nchilds,
                                endps, bestedge, nbe, unused, un, dualvar,
                                allowedge, qarr, qn)
        if not augmented:
            break
        for b in range(nvertex, nb):
            if (
                blossomparent[b] == -1
                and blossombase[b] >= 0
                and label[b] == 1
                and dualvar[b] == 0
            ):
                _expand_blossom(b, True, nvertex, endpoint, mate, label,
                                labelend, inblossom, blossomparent,
                                blossombase, childs, nchilds, endps,
                                bestedge, nbe, unused, un, dualvar,
                                allowedge, qarr, qn)

    out = np.full(nvertex, -1, np.int64)
    for v in range(nvertex):
        if mate[v] >= 0:
            out[v] = endpoint[mate[v]]
    return out


def max_weight_matching_fast(edges, maxcardinality=False):
    """Drop-in array-backed variant of matching.max_weight_matching."""
    if not edges:
        return []
    ea = np.array([e[0] for e in edges], np.int64)
    eb = np.array([e[1] for e in edges], np.int64)
    ew = np.array([e[2] for e in edges], np.int64)
    nvertex = int(max(ea.max(), eb.max())) + 1
    return list(_mwm_core(ea, eb, ew, nvertex, maxcardinality))


def warmup():
    """Trigger JIT compilation on a tiny instance."""
    max_weight_matching_fast([(0, 1, 2), (1, 2, 3), (0, 2, 1)], True)
