"""Hot inner loops over CSR adjacency arrays.

Every function here takes and returns plain numpy arrays so it can be
compiled by numba or run as-is in the interpreter (see ``_jit``).
Neighbor lists are assumed sorted within each CSR row.
"""

import numpy as np

from ._jit import njit


@njit
def bfs(indptr, indices, edge_ids, sources):
    """Multi-source BFS. Returns (order, parent, parent_edge, dist)."""
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    for s in sources:
        if dist[s] == -1:
            dist[s] = 0
            order[tail] = s
            tail += 1
    while head < tail:
        v = order[head]
        head += 1
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if dist[w] == -1:
                dist[w] = dist[v] + 1
                parent[w] = v
                parent_edge[w] = edge_ids[k]
                order[tail] = w
                tail += 1
    return order[:tail], parent, parent_edge, dist


@njit
def component_labels(indptr, indices, edge_ids, edge_ok):
    """Connected components using only edges with ``edge_ok[e]`` set."""
    n = indptr.shape[0] - 1
    label = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    count = 0
    for s in range(n):
        if label[s] != -1:
            continue
        label[s] = count
        top = 0
        stack[top] = s
        top += 1
        while top > 0:
            top -= 1
            v = stack[top]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if label[w] == -1 and edge_ok[edge_ids[k]]:
                    label[w] = count
                    stack[top] = w
                    top += 1
        count += 1
    return label, count


@njit
def lowlink(indptr, indices, edge_ids, n_edges):
    """Iterative Hopcroft-Tarjan over a connected graph.

    Returns (is_bridge[e], block_id[e], is_articulation[v], n_blocks,
    tec[v], n_tec) where ``tec`` labels 2-edge-connected components in
    order of their smallest vertex.
    """
    n = indptr.shape[0] - 1
    # per-vertex DFS state in one 32-byte row: disc, low, via, cursor, end
    DISC, LOW, VIA, CUR, END = 0, 1, 2, 3, 4
    st = np.empty((n, 8), dtype=np.int32)
    for v in range(n):
        st[v, DISC] = -1
        st[v, VIA] = -1
        st[v, CUR] = indptr[v]
        st[v, END] = indptr[v + 1]
    vstack = np.empty(n, dtype=np.int32)
    estack = np.empty(max(n_edges, 1), dtype=np.int32)
    is_bridge = np.zeros(n_edges, dtype=np.bool_)
    block = np.full(n_edges, -1, dtype=np.int64)
    art = np.zeros(n, dtype=np.bool_)
    preorder = np.empty(n, dtype=np.int64)
    dfs_parent = np.full(n, -1, dtype=np.int64)
    n_blocks = 0
    clock = 0
    for root in range(n):
        if st[root, DISC] != -1:
            continue
        st[root, DISC] = clock
        st[root, LOW] = clock
        preorder[clock] = root
        clock += 1
        sp = 0
        vstack[sp] = root
        sp += 1
        ep = 0
        root_children = 0
        while sp > 0:
            v = vstack[sp - 1]
            k = st[v, CUR]
            if k < st[v, END]:
                st[v, CUR] = k + 1
                w = indices[k]
                e = edge_ids[k]
                if e == st[v, VIA]:
                    continue
                dw = st[w, DISC]
                if dw == -1:
                    estack[ep] = e
                    ep += 1
                    st[w, VIA] = e
                    st[w, DISC] = clock
                    st[w, LOW] = clock
                    preorder[clock] = w
                    dfs_parent[w] = v
                    clock += 1
                    vstack[sp] = w
                    sp += 1
                    if v == root:
                        root_children += 1
                elif dw < st[v, DISC]:
                    estack[ep] = e
                    ep += 1
                    if dw < st[v, LOW]:
                        st[v, LOW] = dw
            else:
                sp -= 1
                if sp > 0:
                    u = vstack[sp - 1]
                    lv = st[v, LOW]
                    if lv < st[u, LOW]:
                        st[u, LOW] = lv
                    if lv > st[u, DISC]:
                        is_bridge[st[v, VIA]] = True
                    if lv >= st[u, DISC]:
                        if u != root:
                            art[u] = True
                        while ep > 0:
                            ep -= 1
                            f = estack[ep]
                            block[f] = n_blocks
                            if f == st[v, VIA]:
                                break
                        n_blocks += 1
        if root_children > 1:
            art[root] = True

    raw = np.empty(n, dtype=np.int64)
    n_raw = 0
    for h in range(n):
        v = preorder[h]
        if dfs_parent[v] < 0 or is_bridge[st[v, VIA]]:
            raw[v] = n_raw
            n_raw += 1
        else:
            raw[v] = raw[dfs_parent[v]]
    rename = np.full(n_raw, -1, dtype=np.int64)
    tec = np.empty(n, dtype=np.int64)
    n_tec = 0
    for v in range(n):
        r = raw[v]
        if rename[r] < 0:
            rename[r] = n_tec
            n_tec += 1
        tec[v] = rename[r]
    return is_bridge, block, art, n_blocks, tec, n_tec


@njit
def build_csr(n, edges):
    """CSR ``indptr`` and interleaved (neighbor, edge id) rows, ascending per row."""
    m = edges.shape[0]
    total = 2 * m
    src = np.empty(total, dtype=np.int64)
    dst = np.empty(total, dtype=np.int64)
    eid = np.empty(total, dtype=np.int64)
    for e in range(m):
        src[e] = edges[e, 0]
        dst[e] = edges[e, 1]
        src[m + e] = edges[e, 1]
        dst[m + e] = edges[e, 0]
        eid[e] = e
        eid[m + e] = e
    # bucket by destination first, then stably by source
    cnt = np.zeros(n + 1, dtype=np.int64)
    for k in range(total):
        cnt[dst[k] + 1] += 1
    for v in range(n):
        cnt[v + 1] += cnt[v]
    by_dst = np.empty(total, dtype=np.int64)
    for k in range(total):
        by_dst[cnt[dst[k]]] = k
        cnt[dst[k]] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    for k in range(total):
        indptr[src[k] + 1] += 1
    for v in range(n):
        indptr[v + 1] += indptr[v]
    fill = indptr[:-1].copy()
    # neighbor and edge id side by side so one cache line serves both
    adj = np.empty((total, 2), dtype=np.int64)
    for j in range(total):
        k = by_dst[j]
        slot = fill[src[k]]
        adj[slot, 0] = dst[k]
        adj[slot, 1] = eid[k]
        fill[src[k]] += 1
    return indptr, adj


@njit
def pmt_to_ppt(order, parent, start, goal):
    """Surplus/deficit queue assignment on a rooted tree.

    ``order`` is a BFS order of the tree and ``parent`` the matching parent
    array. Vertices are processed children-first; each vertex pushes its
    own pebble in front of its children's surplus queues (children in BFS
    order), pairs the surplus front with the deficit back, and then claims
    a pebble for itself or enqueues itself as a deficit.

    Returns (new_start, queue_ops). ``new_start`` occupies exactly the goal
    vertex set. Queues are linked lists (pebbles for surplus, BFS ranks for
    deficit), so merges are O(1).
    """
    n = order.shape[0]
    p = start.shape[0]
    rank = np.empty(n, dtype=np.int64)
    for h in range(n):
        rank[order[h]] = h
    occ = np.full(n, -1, dtype=np.int64)
    for i in range(p):
        occ[rank[start[i]]] = i
    wanted = np.zeros(n, dtype=np.bool_)
    for i in range(p):
        wanted[rank[goal[i]]] = True
    # children of rank r are the contiguous ranks child_lo[r] .. child_lo[r+1]-1
    child_lo = np.zeros(n + 1, dtype=np.int64)
    for h in range(1, n):
        child_lo[rank[parent[order[h]]] + 1] += 1
    child_lo[0] = 1
    for r in range(n):
        child_lo[r + 1] += child_lo[r]

    new_start = np.full(p, -1, dtype=np.int64)
    pnext = np.full(p, -1, dtype=np.int64)
    pprev = np.full(p, -1, dtype=np.int64)
    vnext = np.full(n, -1, dtype=np.int64)
    vprev = np.full(n, -1, dtype=np.int64)
    kind = np.zeros(n, dtype=np.int8)  # 0 balanced, 1 surplus, 2 deficit
    qhead = np.full(n, -1, dtype=np.int64)
    qtail = np.full(n, -1, dtype=np.int64)
    ops = 0
    for r in range(n - 1, -1, -1):
        sh = -1
        st = -1
        dh = -1
        dt = -1
        i = occ[r]
        if i >= 0:
            sh = i
            st = i
            ops += 1
        for c in range(child_lo[r], child_lo[r + 1]):
            if kind[c] == 0:
                continue
            if kind[c] == 1:
                if sh == -1:
                    sh = qhead[c]
                else:
                    pnext[st] = qhead[c]
                    pprev[qhead[c]] = st
                st = qtail[c]
            else:
                if dh == -1:
                    dh = qhead[c]
                else:
                    vnext[dt] = qhead[c]
                    vprev[qhead[c]] = dt
                dt = qtail[c]
            ops += 1
        # surplus front fills deficit back
        while sh != -1 and dh != -1:
            peb = sh
            sh = pnext[peb]
            if sh == -1:
                st = -1
            else:
                pprev[sh] = -1
            slot = dt
            dt = vprev[slot]
            if dt == -1:
                dh = -1
            else:
                vnext[dt] = -1
            new_start[peb] = order[slot]
            ops += 1
        if wanted[r]:
            if sh != -1:
                peb = st
                st = pprev[peb]
                if st == -1:
                    sh = -1
                else:
                    pnext[st] = -1
                new_start[peb] = order[r]
            else:
                vprev[r] = -1
                vnext[r] = dh
                if dh == -1:
                    dt = r
                else:
                    vprev[dh] = r
                dh = r
            ops += 1
        if sh != -1:
            kind[r] = 1
            qhead[r] = sh
            qtail[r] = st
        elif dh != -1:
            kind[r] = 2
            qhead[r] = dh
            qtail[r] = dt
    return new_start, ops


@njit
def _find(uf, a):
    root = a
    while uf[root] != root:
        root = uf[root]
    while uf[a] != root:
        nxt = uf[a]
        uf[a] = root
        a = nxt
    return root


@njit
def tree_class_labels(indptr, indices, occupant, n_pebbles):
    """Exchange-class representative per pebble on a tree, or -1 for singletons.

    A pebble joins the class of a junction cluster when it can stand on some
    junction of the cluster with empty vertices in two of its branches.
    Junctions whose connecting chain is at most ``holes - 2`` edges long are
    clustered together.
    """
    n = indptr.shape[0] - 1
    label = np.full(n_pebbles, -1, dtype=np.int64)
    holes = n - n_pebbles
    if holes <= 1:
        return label
    deg = np.empty(n, dtype=np.int64)
    has_junction = False
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] >= 3:
            has_junction = True
    if not has_junction:
        return label

    # root at 0; subtree hole counts give holes behind every edge
    parent = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    order[0] = 0
    seen[0] = True
    tail = 1
    for h in range(n):
        v = order[h]
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                order[tail] = w
                tail += 1
    below = np.zeros(n, dtype=np.int64)
    for h in range(n - 1, -1, -1):
        v = order[h]
        if occupant[v] < 0:
            below[v] += 1
        if parent[v] >= 0:
            below[parent[v]] += below[v]

    # chains of degree<=2 vertices hanging off junctions
    chain_of = np.full(n, -1, dtype=np.int64)
    pos = np.zeros(n, dtype=np.int64)
    toward_a = np.full(n, -1, dtype=np.int64)
    toward_b = np.full(n, -1, dtype=np.int64)
    end_a = np.empty(n, dtype=np.int64)
    end_b = np.empty(n, dtype=np.int64)
    length = np.empty(n, dtype=np.int64)
    n_chains = 0
    uf = np.arange(n)
    for v in range(n):
        if deg[v] < 3:
            continue
        for k in range(indptr[v], indptr[v + 1]):
            x = indices[k]
            if deg[x] >= 3:
                if v < x and holes >= 3:
                    ra = _find(uf, v)
                    rb = _find(uf, x)
                    if ra != rb:
                        uf[ra] = rb
                continue
            if chain_of[x] != -1:
                continue
            c = n_chains
            n_chains += 1
            end_a[c] = v
            prev = v
            cur = x
            t = 1
            while True:
                chain_of[cur] = c
                pos[cur] = t
                toward_a[cur] = prev
                if deg[cur] == 1:
                    end_b[c] = -1
                    length[c] = t
                    break
                nxt = indices[indptr[cur]]
                if nxt == prev:
                    nxt = indices[indptr[cur] + 1]
                toward_b[cur] = nxt
                if deg[nxt] >= 3:
                    end_b[c] = nxt
                    length[c] = t + 1
                    break
                prev = cur
                cur = nxt
                t += 1
            if end_b[c] >= 0 and length[c] <= holes - 2:
                ra = _find(uf, end_a[c])
                rb = _find(uf, end_b[c])
                if ra != rb:
                    uf[ra] = rb

    for u in range(n):
        i = occupant[u]
        if i < 0:
            continue
        target = -1
        if deg[u] >= 3:
            free_dirs = 0
            last = -1
            for k in range(indptr[u], indptr[u + 1]):
                x = indices[k]
                if parent[x] == u:
                    hx = below[x]
                else:
                    hx = holes - below[u]
                if hx > 0:
                    free_dirs += 1
                    last = x
            if free_dirs >= 2:
                target = u
            elif free_dirs == 1:
                if deg[last] >= 3:
                    target = last
                else:
                    c = chain_of[last]
                    if end_a[c] == u:
                        w = end_b[c]
                    else:
                        w = end_a[c]
                    if w >= 0 and length[c] <= holes - 1:
                        target = w
        elif deg[u] > 0:
            c = chain_of[u]
            t = pos[u]
            x = toward_a[u]
            if parent[x] == u:
                hx = below[x]
            else:
                hx = holes - below[u]
            if hx >= t + 1:
                target = end_a[c]
            x = toward_b[u]
            if x >= 0 and end_b[c] >= 0:
                if parent[x] == u:
                    hx = below[x]
                else:
                    hx = holes - below[u]
                if hx >= length[c] - t + 1:
                    target = end_b[c]
        if target >= 0:
            label[i] = _find(uf, target)
    return label


@njit
def subtree_sums(parent, order, weight):
    """Sum of ``weight`` over each BFS subtree (order must be a BFS order)."""
    total = weight.copy()
    for h in range(order.shape[0] - 1, 0, -1):
        v = order[h]
        total[parent[v]] += total[v]
    return total


@njit
def canonical_labels(lab):
    """Renumber labels ``0, 1, ...`` by first occurrence; negatives become singletons."""
    p = lab.shape[0]
    top = 0
    for i in range(p):
        if lab[i] > top:
            top = lab[i]
    seen = np.full(top + 1, -1, dtype=np.int64)
    out = np.empty(p, dtype=np.int64)
    k = 0
    for i in range(p):
        x = lab[i]
        if x < 0:
            out[i] = k
            k += 1
        elif seen[x] < 0:
            seen[x] = k
            out[i] = k
            k += 1
        else:
            out[i] = seen[x]
    return out, k


@njit
def cycle_parity_by_group(sigma, group, n_groups):
    """Parity of the permutation ``sigma`` restricted to each group.

    ``sigma`` maps index -> index (entries with group -1 are ignored); each
    cycle must stay inside one group.
    """
    parity = np.zeros(n_groups, dtype=np.int64)
    seen = np.zeros(sigma.shape[0], dtype=np.bool_)
    for x in range(sigma.shape[0]):
        if seen[x] or group[x] < 0:
            continue
        size = 0
        y = x
        while not seen[y]:
            seen[y] = True
            y = sigma[y]
            size += 1
        parity[group[x]] ^= (size - 1) & 1
    return parity


@njit
def cycle_block_orders(edges, edge_block, is_cycle, n_blocks, n):
    """Cyclic vertex order of every cycle block, packed as (ptr, verts)."""
    m = edges.shape[0]
    cnt = np.zeros(n_blocks + 1, dtype=np.int64)
    for e in range(m):
        b = edge_block[e]
        if is_cycle[b]:
            cnt[b + 1] += 1
    ptr = np.cumsum(cnt)
    fill = ptr[:-1].copy()
    bucket = np.empty(ptr[-1], dtype=np.int64)
    for e in range(m):
        b = edge_block[e]
        if is_cycle[b]:
            bucket[fill[b]] = e
            fill[b] += 1
    verts = np.empty(ptr[-1], dtype=np.int64)
    slot1 = np.full(n, -1, dtype=np.int64)
    slot2 = np.full(n, -1, dtype=np.int64)
    for b in range(n_blocks):
        lo = ptr[b]
        hi = ptr[b + 1]
        if lo == hi:
            continue
        for k in range(lo, hi):
            e = bucket[k]
            for side in range(2):
                x = edges[e, side]
                y = edges[e, 1 - side]
                if slot1[x] < 0:
                    slot1[x] = y
                else:
                    slot2[x] = y
        prev = -1
        cur = edges[bucket[lo], 0]
        for k in range(lo, hi):
            verts[k] = cur
            nxt = slot1[cur] if slot1[cur] != prev else slot2[cur]
            prev = cur
            cur = nxt
        for k in range(lo, hi):
            e = bucket[k]
            slot1[edges[e, 0]] = -1
            slot2[edges[e, 0]] = -1
            slot1[edges[e, 1]] = -1
            slot2[edges[e, 1]] = -1
    return ptr, verts


@njit
def one_hole_check(indptr, indices, edges, edge_block, kind, n_blocks, cyc_ptr, cyc_verts, occ_s, occ_d, h):
    """Block-local feasibility with a single shared hole at ``h``.

    ``kind`` codes: 0 bridge, 1 cycle, 2 theta0, 3 bipartite, 4 free.
    Returns (ok, entry); theta0 blocks are left to the caller.
    """
    n = occ_s.shape[0]
    m = edges.shape[0]
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    queue[0] = h
    dist[h] = 0
    tail = 1
    for head in range(n):
        if head >= tail:
            break
        v = queue[head]
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue[tail] = w
                tail += 1

    big = np.iinfo(np.int64).max
    entry_key = np.full(n_blocks, big, dtype=np.int64)
    for e in range(m):
        b = edge_block[e]
        if kind[b] == 0:
            continue
        for side in range(2):
            x = edges[e, side]
            key = dist[x] * n + x
            if key < entry_key[b]:
                entry_key[b] = key
    entry = np.full(n_blocks, -1, dtype=np.int64)
    for b in range(n_blocks):
        if entry_key[b] != big:
            entry[b] = entry_key[b] % n
    part = np.full(n, -1, dtype=np.int64)
    for e in range(m):
        b = edge_block[e]
        if kind[b] == 0:
            continue
        for side in range(2):
            x = edges[e, side]
            if x != entry[b]:
                part[x] = b

    pos_d = np.empty(n, dtype=np.int64)
    for x in range(n):
        if occ_d[x] >= 0:
            pos_d[occ_d[x]] = x
    sigma = np.arange(n)
    for x in range(n):
        i = occ_s[x]
        if i < 0:
            continue
        y = pos_d[i]
        if part[x] < 0:
            if y != x:
                return False, entry
        elif part[y] != part[x]:
            return False, entry
        sigma[x] = y

    # permutation parity on every bipartite block
    seen = np.zeros(n, dtype=np.bool_)
    parity = np.zeros(n_blocks, dtype=np.int64)
    for x in range(n):
        b = part[x]
        if seen[x] or b < 0 or kind[b] != 3:
            continue
        size = 0
        y = x
        while not seen[y]:
            seen[y] = True
            y = sigma[y]
            size += 1
        parity[b] ^= (size - 1) & 1
    for b in range(n_blocks):
        if parity[b]:
            return False, entry

    # cyclic order on every cycle block, read from just after the entry
    for b in range(n_blocks):
        lo = cyc_ptr[b]
        hi = cyc_ptr[b + 1]
        if lo == hi:
            continue
        length = hi - lo
        start = lo
        while cyc_verts[start] != entry[b]:
            start += 1
        first_goal = occ_d[cyc_verts[lo + (start - lo + 1) % length]]
        shift = -1
        for t in range(1, length):
            if occ_s[cyc_verts[lo + (start - lo + t) % length]] == first_goal:
                shift = t - 1
                break
        if shift < 0:
            return False, entry
        for t in range(length - 1):
            a = occ_s[cyc_verts[lo + (start - lo + 1 + (t + shift) % (length - 1)) % length]]
            c = occ_d[cyc_verts[lo + (start - lo + 1 + t) % length]]
            if a != c:
                return False, entry
    return True, entry


@njit
def contract_occupancy(occ, mtec_id, sizes, new_id, port, hub, bx, bu, parent, hsub, holes, first, n_tree):
    """Contracted occupancy and pebble grouping.

    Returns (status, tree_occ, group_of, n_groups); status 0 ok, 1 an MTEC
    has two holes, 2 a full MTEC has no bridge leading to a hole.
    """
    n = occ.shape[0]
    k = sizes.shape[0]
    p = 0
    counts = np.zeros(k, dtype=np.int64)
    for v in range(n):
        if occ[v] >= 0:
            p += 1
            if mtec_id[v] >= 0:
                counts[mtec_id[v]] += 1
    tree_occ = np.full(n_tree, -1, dtype=np.int64)
    group_of = np.full(p, -1, dtype=np.int64)
    for h in range(k):
        if counts[h] < sizes[h] - 1:
            return 1, tree_occ, group_of, 0
    n_exits = np.zeros(k, dtype=np.int64)
    lone = np.full(k, -1, dtype=np.int64)
    for j in range(bx.shape[0]):
        x = bx[j]
        u = bu[j]
        h = mtec_id[x]
        if counts[h] != sizes[h]:
            continue
        across = hsub[u] if parent[u] == x else holes - hsub[x]
        if across > 0:
            n_exits[h] += 1
            lone[h] = x
    designated = np.full(k, -1, dtype=np.int64)
    for h in range(k):
        if counts[h] == sizes[h]:
            if n_exits[h] == 0:
                return 2, tree_occ, group_of, 0
            dv = first[h] if n_exits[h] >= 2 else lone[h]
            designated[h] = occ[dv]
    g = 0
    for v in range(n):
        if mtec_id[v] < 0 and occ[v] >= 0:
            group_of[occ[v]] = g
            tree_occ[new_id[v]] = g
            g += 1
    composite = np.empty(k, dtype=np.int64)
    for h in range(k):
        if designated[h] >= 0:
            group_of[designated[h]] = g
            tree_occ[port[h]] = g
            g += 1
        composite[h] = g
        tree_occ[hub[h]] = g
        g += 1
    for v in range(n):
        i = occ[v]
        if i >= 0 and mtec_id[v] >= 0 and i != designated[mtec_id[v]]:
            group_of[i] = composite[mtec_id[v]]
    return 0, tree_occ, group_of, g
