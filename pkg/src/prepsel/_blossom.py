"""Exact maximum-weight matching on dense graphs, JIT-compiled with numba.

Implements the classic O(n^3) primal-dual blossom algorithm (Galil's
formulation, in the array style of Van Rantwijk's implementation) for
maximum-weight / maximum-cardinality matching on a dense weight matrix.
The decoding layer only ever needs minimum-weight *perfect* matchings on
small complete graphs (defect sets plus boundary pseudosyndromes), which
are obtained by negating the weights and forcing maximum cardinality.

All state lives in flat numpy arrays so the whole solver compiles under
``numba.njit``; vertex ids are ``0..n-1`` and blossom ids ``n..2n-1``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NO_NODE = -1

# label values for top-level blossoms/vertices
_FREE = 0
_S = 1
_T = 2
_BREADCRUMB = 5  # S | 4, temporary marker while scanning for a new blossom


@njit(cache=True)
def _leaves(b, nvertex, childs, nchild, out):
    """Collect the leaf vertices of blossom b into out; returns the count."""
    if b < nvertex:
        out[0] = b
        return 1
    stack = np.empty(2 * nvertex, dtype=np.int64)
    stack[0] = b
    nstack = 1
    cnt = 0
    while nstack > 0:
        nstack -= 1
        t = stack[nstack]
        if t < nvertex:
            out[cnt] = t
            cnt += 1
        else:
            for i in range(nchild[t]):
                stack[nstack] = childs[t, i]
                nstack += 1
    return cnt


@njit(cache=True)
def max_weight_matching_dense(weight, maxcardinality):  # noqa: C901
    """Return mate[] for a maximum-weight matching of the dense matrix.

    ``weight`` is a symmetric (n, n) float64 matrix; diagonal entries are
    ignored.  With ``maxcardinality`` the matching is maximized first in
    cardinality and then in weight, which together with negated weights
    yields minimum-weight perfect matchings.
    """
    nvertex = weight.shape[0]
    mate = np.full(nvertex, NO_NODE, dtype=np.int64)
    if nvertex == 0:
        return mate

    maxw = 0.0
    for i in range(nvertex):
        for j in range(nvertex):
            if i != j and weight[i, j] > maxw:
                maxw = weight[i, j]

    nb = 2 * nvertex
    maxc = nvertex + 2

    label = np.zeros(nb, dtype=np.int64)
    labeledge_v = np.full(nb, NO_NODE, dtype=np.int64)
    labeledge_w = np.full(nb, NO_NODE, dtype=np.int64)
    inblossom = np.arange(nvertex, dtype=np.int64)
    blossomparent = np.full(nb, NO_NODE, dtype=np.int64)
    blossombase = np.full(nb, NO_NODE, dtype=np.int64)
    for v in range(nvertex):
        blossombase[v] = v
    blossomdual = np.zeros(nb, dtype=np.float64)
    childs = np.full((nb, maxc), NO_NODE, dtype=np.int64)
    nchild = np.zeros(nb, dtype=np.int64)
    cedge_v = np.full((nb, maxc), NO_NODE, dtype=np.int64)
    cedge_w = np.full((nb, maxc), NO_NODE, dtype=np.int64)
    bestedge_v = np.full(nb, NO_NODE, dtype=np.int64)
    bestedge_w = np.full(nb, NO_NODE, dtype=np.int64)
    mybest_v = np.full((nb, nb), NO_NODE, dtype=np.int64)
    mybest_w = np.full((nb, nb), NO_NODE, dtype=np.int64)
    mybest_n = np.full(nb, -1, dtype=np.int64)  # -1 means "no list kept"
    dualvar = np.empty(nb, dtype=np.float64)
    dualvar[:nvertex] = maxw
    dualvar[nvertex:] = 0.0
    allowedge = np.zeros((nvertex, nvertex), dtype=np.bool_)
    queue = np.empty(8 * nvertex * nvertex + 16, dtype=np.int64)
    qn = np.zeros(1, dtype=np.int64)
    unused = np.empty(nvertex, dtype=np.int64)
    for i in range(nvertex):
        unused[i] = nvertex + i
    nunused = np.zeros(1, dtype=np.int64)
    nunused[0] = nvertex

    leafbuf = np.empty(nvertex, dtype=np.int64)
    leafbuf2 = np.empty(nvertex, dtype=np.int64)
    path_buf = np.empty(nb, dtype=np.int64)
    work_b = np.empty(4 * nvertex + 4, dtype=np.int64)
    work_v = np.empty(4 * nvertex + 4, dtype=np.int64)

    def slack(v, w):
        return dualvar[v] + dualvar[w] - 2.0 * weight[v, w]

    def push_leaves(b):
        cnt = _leaves(b, nvertex, childs, nchild, leafbuf)
        for i in range(cnt):
            queue[qn[0]] = leafbuf[i]
            qn[0] += 1

    def assign_label(w, t, v):
        # Label vertex w (and its top blossom) with t via edge (v, w); a
        # T label immediately propagates an S label to the mate of the base.
        b = inblossom[w]
        label[w] = t
        label[b] = t
        labeledge_v[w] = v
        labeledge_w[w] = w
        labeledge_v[b] = v
        labeledge_w[b] = w
        bestedge_v[w] = NO_NODE
        bestedge_v[b] = NO_NODE
        if t == _S:
            push_leaves(b)
        else:
            base = blossombase[b]
            m = mate[base]
            b2 = inblossom[m]
            label[m] = _S
            label[b2] = _S
            labeledge_v[m] = base
            labeledge_w[m] = m
            labeledge_v[b2] = base
            labeledge_w[b2] = m
            bestedge_v[m] = NO_NODE
            bestedge_v[b2] = NO_NODE
            push_leaves(b2)

    def scan_blossom(v, w):
        # Trace back from v and w; returns the base of a new blossom, or
        # NO_NODE when an augmenting path was found instead.
        npath = 0
        base = NO_NODE
        while v != NO_NODE:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            path_buf[npath] = b
            npath += 1
            label[b] = _BREADCRUMB
            if labeledge_v[b] == NO_NODE:
                v = NO_NODE
            else:
                v = labeledge_v[b]
                b = inblossom[v]
                v = labeledge_v[b]
            if w != NO_NODE:
                v, w = w, v
        for i in range(npath):
            label[path_buf[i]] = _S
        return base

    def add_blossom(base, v, w):
        # Merge the blossoms along the alternating cycle base..v-w..base
        # into a new S-blossom.
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        nunused[0] -= 1
        b = unused[nunused[0]]
        blossombase[b] = base
        blossomparent[b] = NO_NODE
        blossomparent[bb] = b
        tmp_child = np.empty(maxc, dtype=np.int64)
        tmp_ev = np.empty(maxc, dtype=np.int64)
        tmp_ew = np.empty(maxc, dtype=np.int64)
        tmp_ev[0] = v
        tmp_ew[0] = w
        nedge = 1
        npath = 0
        while bv != bb:
            blossomparent[bv] = b
            tmp_child[npath] = bv
            npath += 1
            tmp_ev[nedge] = labeledge_v[bv]
            tmp_ew[nedge] = labeledge_w[bv]
            nedge += 1
            v2 = labeledge_v[bv]
            bv = inblossom[v2]
        tmp_child[npath] = bb
        npath += 1
        for i in range(npath):
            childs[b, i] = tmp_child[npath - 1 - i]
        for i in range(nedge):
            cedge_v[b, i] = tmp_ev[nedge - 1 - i]
            cedge_w[b, i] = tmp_ew[nedge - 1 - i]
        nch = npath
        ned = nedge
        while bw != bb:
            blossomparent[bw] = b
            childs[b, nch] = bw
            nch += 1
            cedge_v[b, ned] = labeledge_w[bw]
            cedge_w[b, ned] = labeledge_v[bw]
            ned += 1
            w2 = labeledge_v[bw]
            bw = inblossom[w2]
        nchild[b] = nch
        label[b] = _S
        labeledge_v[b] = labeledge_v[bb]
        labeledge_w[b] = labeledge_w[bb]
        blossomdual[b] = 0.0
        cnt = _leaves(b, nvertex, childs, nchild, leafbuf)
        for i in range(cnt):
            lv = leafbuf[i]
            if label[inblossom[lv]] == _T:
                queue[qn[0]] = lv
                qn[0] += 1
            inblossom[lv] = b
        # recompute least-slack edges towards every other top S-blossom
        bet_v = np.full(nb, NO_NODE, dtype=np.int64)
        bet_w = np.full(nb, NO_NODE, dtype=np.int64)
        for ci in range(nch):
            bv2 = childs[b, ci]
            if bv2 >= nvertex and mybest_n[bv2] >= 0:
                for k in range(mybest_n[bv2]):
                    i2 = mybest_v[bv2, k]
                    j2 = mybest_w[bv2, k]
                    if inblossom[j2] == b:
                        i2, j2 = j2, i2
                    bj = inblossom[j2]
                    if (
                        bj != b
                        and label[bj] == _S
                        and (
                            bet_v[bj] == NO_NODE
                            or slack(i2, j2) < slack(bet_v[bj], bet_w[bj])
                        )
                    ):
                        bet_v[bj] = i2
                        bet_w[bj] = j2
                mybest_n[bv2] = -1
            else:
                cnt2 = _leaves(bv2, nvertex, childs, nchild, leafbuf2)
                for li in range(cnt2):
                    i2 = leafbuf2[li]
                    for j2 in range(nvertex):
                        if j2 == i2:
                            continue
                        bj = inblossom[j2]
                        if (
                            bj != b
                            and label[bj] == _S
                            and (
                                bet_v[bj] == NO_NODE
                                or slack(i2, j2) < slack(bet_v[bj], bet_w[bj])
                            )
                        ):
                            bet_v[bj] = i2
                            bet_w[bj] = j2
            bestedge_v[bv2] = NO_NODE
            bestedge_w[bv2] = NO_NODE
        nlist = 0
        for bj in range(nb):
            if bet_v[bj] != NO_NODE:
                mybest_v[b, nlist] = bet_v[bj]
                mybest_w[b, nlist] = bet_w[bj]
                nlist += 1
        mybest_n[b] = nlist
        bestedge_v[b] = NO_NODE
        bestedge_w[b] = NO_NODE
        bslack = 0.0
        for k in range(nlist):
            ks = slack(mybest_v[b, k], mybest_w[b, k])
            if bestedge_v[b] == NO_NODE or ks < bslack:
                bestedge_v[b] = mybest_v[b, k]
                bestedge_w[b] = mybest_w[b, k]
                bslack = ks

    def expand_blossom(b0, endstage):
        # Worklist-iterative version: recursion only arises for endstage
        # expansion of zero-dual sub-blossoms, whose work items commute.
        wl = np.empty(2 * nvertex, dtype=np.int64)
        wl[0] = b0
        nwl = 1
        while nwl > 0:
            nwl -= 1
            b = wl[nwl]
            for ci in range(nchild[b]):
                s = childs[b, ci]
                blossomparent[s] = NO_NODE
                if s < nvertex:
                    inblossom[s] = s
                elif endstage and blossomdual[s] == 0.0:
                    wl[nwl] = s
                    nwl += 1
                else:
                    cnt = _leaves(s, nvertex, childs, nchild, leafbuf)
                    for li in range(cnt):
                        inblossom[leafbuf[li]] = s
            if (not endstage) and label[b] == _T:
                # relabel sub-blossoms along the alternating cycle, starting
                # from the child through which b originally got its label
                entrychild = inblossom[labeledge_w[b]]
                nch = nchild[b]
                j = 0
                for ci in range(nch):
                    if childs[b, ci] == entrychild:
                        j = ci
                        break
                if j & 1:
                    j -= nch
                    jstep = 1
                else:
                    jstep = -1
                v = labeledge_v[b]
                w = labeledge_w[b]
                while j != 0:
                    if jstep == 1:
                        p = cedge_v[b, j % nch]
                        q = cedge_w[b, j % nch]
                    else:
                        q = cedge_v[b, (j - 1) % nch]
                        p = cedge_w[b, (j - 1) % nch]
                    label[w] = _FREE
                    label[q] = _FREE
                    assign_label(w, _T, v)
                    allowedge[p, q] = True
                    allowedge[q, p] = True
                    j += jstep
                    if jstep == 1:
                        v = cedge_v[b, j % nch]
                        w = cedge_w[b, j % nch]
                    else:
                        w = cedge_v[b, (j - 1) % nch]
                        v = cedge_w[b, (j - 1) % nch]
                    allowedge[v, w] = True
                    allowedge[w, v] = True
                    j += jstep
                bw = childs[b, j % nch]
                label[w] = _T
                label[bw] = _T
                labeledge_v[w] = v
                labeledge_w[w] = w
                labeledge_v[bw] = v
                labeledge_w[bw] = w
                bestedge_v[bw] = NO_NODE
                bestedge_w[bw] = NO_NODE
                j += jstep
                while childs[b, j % nch] != entrychild:
                    bv = childs[b, j % nch]
                    if label[bv] == _S:
                        j += jstep
                        continue
                    vfound = NO_NODE
                    if bv >= nvertex:
                        cnt = _leaves(bv, nvertex, childs, nchild, leafbuf)
                        for li in range(cnt):
                            if label[leafbuf[li]] != _FREE:
                                vfound = leafbuf[li]
                                break
                    else:
                        if label[bv] != _FREE:
                            vfound = bv
                    if vfound != NO_NODE:
                        label[vfound] = _FREE
                        label[mate[blossombase[bv]]] = _FREE
                        assign_label(vfound, _T, labeledge_v[vfound])
                    j += jstep
            label[b] = _FREE
            labeledge_v[b] = NO_NODE
            labeledge_w[b] = NO_NODE
            bestedge_v[b] = NO_NODE
            bestedge_w[b] = NO_NODE
            blossomparent[b] = NO_NODE
            blossombase[b] = NO_NODE
            blossomdual[b] = 0.0
            mybest_n[b] = -1
            nchild[b] = 0
            unused[nunused[0]] = b
            nunused[0] += 1

    def augment_blossom(b0, v0):
        # Swap matched/unmatched edges on the path from v0 to the base of
        # b0, recursing into sub-blossoms.  Work items touch disjoint mate[]
        # entries, so a deferred worklist is equivalent to the recursion.
        work_b[0] = b0
        work_v[0] = v0
        nwork = 1
        while nwork > 0:
            nwork -= 1
            b = work_b[nwork]
            v = work_v[nwork]
            t = v
            while blossomparent[t] != b:
                t = blossomparent[t]
            if t >= nvertex:
                work_b[nwork] = t
                work_v[nwork] = v
                nwork += 1
            nch = nchild[b]
            i = 0
            for ci in range(nch):
                if childs[b, ci] == t:
                    i = ci
                    break
            j = i
            if i & 1:
                j -= nch
                jstep = 1
            else:
                jstep = -1
            while j != 0:
                j += jstep
                t = childs[b, j % nch]
                if jstep == 1:
                    w2 = cedge_v[b, j % nch]
                    x2 = cedge_w[b, j % nch]
                else:
                    x2 = cedge_v[b, (j - 1) % nch]
                    w2 = cedge_w[b, (j - 1) % nch]
                if t >= nvertex:
                    work_b[nwork] = t
                    work_v[nwork] = w2
                    nwork += 1
                j += jstep
                t = childs[b, j % nch]
                if t >= nvertex:
                    work_b[nwork] = t
                    work_v[nwork] = x2
                    nwork += 1
                mate[w2] = x2
                mate[x2] = w2
            if i > 0:
                tmpc = np.empty(nch, dtype=np.int64)
                tmpev = np.empty(nch, dtype=np.int64)
                tmpew = np.empty(nch, dtype=np.int64)
                for ci in range(nch):
                    tmpc[ci] = childs[b, (ci + i) % nch]
                    tmpev[ci] = cedge_v[b, (ci + i) % nch]
                    tmpew[ci] = cedge_w[b, (ci + i) % nch]
                for ci in range(nch):
                    childs[b, ci] = tmpc[ci]
                    cedge_v[b, ci] = tmpev[ci]
                    cedge_w[b, ci] = tmpew[ci]
            # the sub-blossom containing v ends up first and rooted at v
            blossombase[b] = v

    def augment_matching(v, w):
        for side in range(2):
            if side == 0:
                s, j = v, w
            else:
                s, j = w, v
            while True:
                bs = inblossom[s]
                if bs >= nvertex:
                    augment_blossom(bs, s)
                mate[s] = j
                if labeledge_v[bs] == NO_NODE:
                    break
                t = labeledge_v[bs]
                bt = inblossom[t]
                s2 = labeledge_v[bt]
                j2 = labeledge_w[bt]
                if bt >= nvertex:
                    augment_blossom(bt, j2)
                mate[j2] = s2
                s, j = s2, j2

    # ---- main loop: one stage per augmentation ----
    while True:
        label[:] = _FREE
        labeledge_v[:] = NO_NODE
        labeledge_w[:] = NO_NODE
        bestedge_v[:] = NO_NODE
        bestedge_w[:] = NO_NODE
        for b in range(nvertex, nb):
            mybest_n[b] = -1
        allowedge[:, :] = False
        qn[0] = 0
        for v in range(nvertex):
            if mate[v] == NO_NODE and label[inblossom[v]] == _FREE:
                assign_label(v, _S, NO_NODE)
        augmented = False
        while True:
            while qn[0] > 0 and not augmented:
                qn[0] -= 1
                v = queue[qn[0]]
                for w in range(nvertex):
                    if w == v:
                        continue
                    bv = inblossom[v]
                    bw = inblossom[w]
                    if bv == bw:
                        continue
                    kslack = 0.0
                    if not allowedge[v, w]:
                        kslack = slack(v, w)
                        if kslack <= 0.0:
                            allowedge[v, w] = True
                            allowedge[w, v] = True
                    if allowedge[v, w]:
                        if label[bw] == _FREE:
                            assign_label(w, _T, v)
                        elif label[bw] == _S:
                            base = scan_blossom(v, w)
                            if base != NO_NODE:
                                add_blossom(base, v, w)
                            else:
                                augment_matching(v, w)
                                augmented = True
                                break
                        elif label[w] == _FREE:
                            label[w] = _T
                            labeledge_v[w] = v
                            labeledge_w[w] = w
                    elif label[bw] == _S:
                        if bestedge_v[bv] == NO_NODE or kslack < slack(
                            bestedge_v[bv], bestedge_w[bv]
                        ):
                            bestedge_v[bv] = v
                            bestedge_w[bv] = w
                    elif label[w] == _FREE:
                        if bestedge_v[w] == NO_NODE or kslack < slack(
                            bestedge_v[w], bestedge_w[w]
                        ):
                            bestedge_v[w] = v
                            bestedge_w[w] = w
            if augmented:
                break

            # no augmenting path: primal-dual adjustment
            deltatype = -1
            delta = 0.0
            deltaedge_v = NO_NODE
            deltaedge_w = NO_NODE
            deltablossom = NO_NODE
            if not maxcardinality:
                deltatype = 1
                dmin = dualvar[0]
                for v in range(1, nvertex):
                    if dualvar[v] < dmin:
                        dmin = dualvar[v]
                delta = dmin
            for v in range(nvertex):
                if label[inblossom[v]] == _FREE and bestedge_v[v] != NO_NODE:
                    d = slack(bestedge_v[v], bestedge_w[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge_v = bestedge_v[v]
                        deltaedge_w = bestedge_w[v]
            for b in range(nb):
                if (
                    (b < nvertex or blossombase[b] != NO_NODE)
                    and blossomparent[b] == NO_NODE
                    and label[b] == _S
                    and bestedge_v[b] != NO_NODE
                ):
                    d = slack(bestedge_v[b], bestedge_w[b]) / 2.0
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge_v = bestedge_v[b]
                        deltaedge_w = bestedge_w[b]
            for b in range(nvertex, nb):
                if (
                    blossombase[b] != NO_NODE
                    and blossomparent[b] == NO_NODE
                    and label[b] == _T
                    and (deltatype == -1 or blossomdual[b] < delta)
                ):
                    delta = blossomdual[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                # only reachable with maxcardinality: optimum reached
                deltatype = 1
                dmin = dualvar[0]
                for v in range(1, nvertex):
                    if dualvar[v] < dmin:
                        dmin = dualvar[v]
                delta = max(0.0, dmin)

            for v in range(nvertex):
                lb = label[inblossom[v]]
                if lb == _S:
                    dualvar[v] -= delta
                elif lb == _T:
                    dualvar[v] += delta
            for b in range(nvertex, nb):
                if blossombase[b] != NO_NODE and blossomparent[b] == NO_NODE:
                    if label[b] == _S:
                        blossomdual[b] += delta
                    elif label[b] == _T:
                        blossomdual[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2 or deltatype == 3:
                allowedge[deltaedge_v, deltaedge_w] = True
                allowedge[deltaedge_w, deltaedge_v] = True
                queue[qn[0]] = deltaedge_v
                qn[0] += 1
            elif deltatype == 4:
                expand_blossom(deltablossom, False)

        if not augmented:
            break

        for b in range(nvertex, nb):
            if (
                blossombase[b] != NO_NODE
                and blossomparent[b] == NO_NODE
                and label[b] == _S
                and blossomdual[b] == 0.0
            ):
                expand_blossom(b, True)

    return mate


def min_weight_perfect_matching(dist: np.ndarray) -> np.ndarray:
    """Minimum-weight perfect matching of a symmetric distance matrix.

    Returns ``mate`` with ``mate[i] = j`` for every matched pair.  Raises
    ``ValueError`` when no perfect matching exists (odd node count).
    """
    n = dist.shape[0]
    if n % 2 != 0:
        raise ValueError("perfect matching needs an even number of nodes")
    if n == 0:
        return np.empty(0, dtype=np.int64)
    mate = max_weight_matching_dense(-np.asarray(dist, dtype=np.float64), True)
    if np.any(mate < 0):
        raise ValueError("no perfect matching found")
    return mate


def matching_weight(dist: np.ndarray, mate: np.ndarray) -> float:
    """Total weight of the matching given by mate[]."""
    total = 0.0
    for i in range(dist.shape[0]):
        j = mate[i]
        if j > i:
            total += dist[i, j]
    return float(total)
