"""Compiled inner loops (numba).

Everything here works on plain integer arrays; the public modules wrap these
with validation and exact-arithmetic bookkeeping.
"""

import numba
import numpy as np

njit = numba.njit(cache=True, nogil=True)


@njit
def ctz(x):
    c = 0
    while (x & 1) == 0:
        x >>= 1
        c += 1
    return c


@njit
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


# ---------------------------------------------------------------- char-sums

@njit
def symmetric_histogram(m, q):
    """Histogram of degree vectors mod q over all graphs on m vertices.

    Index of a residue vector v is sum_i v_i q^i.  Gray-code walk over the
    C(m,2) edge indicators.
    """
    nedges = m * (m - 1) // 2
    eu = np.empty(nedges, np.int64)
    ev = np.empty(nedges, np.int64)
    e = 0
    for i in range(m):
        for j in range(i + 1, m):
            eu[e] = i
            ev[e] = j
            e += 1
    pw = np.empty(m, np.int64)
    p = 1
    for i in range(m):
        pw[i] = p
        p *= q
    hist = np.zeros(p, np.int64)
    res = np.zeros(m, np.int64)
    state = np.zeros(max(nedges, 1), np.int8)
    idx = 0
    hist[0] += 1
    total = 1 << nedges
    for step in range(1, total):
        b = ctz(step)
        u = eu[b]
        w = ev[b]
        if state[b] == 0:
            state[b] = 1
            nu = res[u] + 1
            if nu == q:
                nu = 0
            nw = res[w] + 1
            if nw == q:
                nw = 0
        else:
            state[b] = 0
            nu = res[u] - 1
            if nu < 0:
                nu = q - 1
            nw = res[w] - 1
            if nw < 0:
                nw = q - 1
        idx += pw[u] * (nu - res[u]) + pw[w] * (nw - res[w])
        res[u] = nu
        res[w] = nw
        hist[idx] += 1
    return hist


@njit
def symmetric_count(m, q, target):
    """Number of graphs on m vertices whose degree vector is = target (mod q)."""
    nedges = m * (m - 1) // 2
    eu = np.empty(max(nedges, 1), np.int64)
    ev = np.empty(max(nedges, 1), np.int64)
    e = 0
    for i in range(m):
        for j in range(i + 1, m):
            eu[e] = i
            ev[e] = j
            e += 1
    res = np.zeros(m, np.int64)
    bad = 0
    for i in range(m):
        if target[i] != 0:
            bad += 1
    state = np.zeros(max(nedges, 1), np.int8)
    count = 1 if bad == 0 else 0
    total = 1 << nedges
    for step in range(1, total):
        b = ctz(step)
        delta = 1 if state[b] == 0 else q - 1
        state[b] ^= 1
        for x in (eu[b], ev[b]):
            was = res[x] == target[x]
            res[x] = (res[x] + delta) % q
            now = res[x] == target[x]
            if was and not now:
                bad += 1
            elif now and not was:
                bad -= 1
        if bad == 0:
            count += 1
    return count


@njit
def matrix_count(s, t, q, u, v, use_rows, use_cols):
    """Count s x t 0/1 matrices with row sums = u and/or column sums = v (mod q)."""
    nbits = s * t
    rows = np.zeros(max(s, 1), np.int64)
    cols = np.zeros(max(t, 1), np.int64)
    bad = 0
    if use_rows:
        for i in range(s):
            if u[i] != 0:
                bad += 1
    if use_cols:
        for j in range(t):
            if v[j] != 0:
                bad += 1
    state = np.zeros(max(nbits, 1), np.int8)
    count = 1 if bad == 0 else 0
    total = 1 << nbits
    for step in range(1, total):
        b = ctz(step)
        i = b // t
        j = b - i * t
        delta = 1 if state[b] == 0 else q - 1
        state[b] ^= 1
        if use_rows:
            was = rows[i] == u[i]
            rows[i] = (rows[i] + delta) % q
            now = rows[i] == u[i]
            if was and not now:
                bad += 1
            elif now and not was:
                bad -= 1
        else:
            rows[i] = (rows[i] + delta) % q
        if use_cols:
            was = cols[j] == v[j]
            cols[j] = (cols[j] + delta) % q
            now = cols[j] == v[j]
            if was and not now:
                bad += 1
            elif now and not was:
                bad -= 1
        if bad == 0:
            count += 1
    return count


# ----------------------------------------------------------- subset engine
#
# Shared state for one vertex set S on a CSR graph:
#   in_s[v]  membership
#   res[v]   |N(v) & S| mod q, for every v (members or not)
#   bad      number of members with res != r                      (mode 0)
#   hist[c]  number of members with res == c                      (mode 1)

@njit
def _set_member_status(v, res_v, q, r, mode, hist, sign):
    # returns change in bad count when v (with residue res_v) joins (+1) or leaves (-1)
    if mode == 1:
        hist[res_v] += sign
        return 0
    return sign if res_v != r else 0


@njit
def _toggle(v, in_s, res, indptr, indices, q, r, mode, hist):
    """Flip membership of v; returns change in bad count."""
    dbad = 0
    if in_s[v]:
        dbad += _set_member_status(v, res[v], q, r, mode, hist, -1)
        in_s[v] = False
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            old = res[u]
            new = old - 1
            if new < 0:
                new = q - 1
            res[u] = new
            if in_s[u]:
                if mode == 1:
                    hist[old] -= 1
                    hist[new] += 1
                else:
                    dbad += (1 if new != r else 0) - (1 if old != r else 0)
    else:
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            old = res[u]
            new = old + 1
            if new == q:
                new = 0
            res[u] = new
            if in_s[u]:
                if mode == 1:
                    hist[old] -= 1
                    hist[new] += 1
                else:
                    dbad += (1 if new != r else 0) - (1 if old != r else 0)
        in_s[v] = True
        dbad += _set_member_status(v, res[v], q, r, mode, hist, 1)
    return dbad


@njit
def _hist_ok(hist, size, lo, hi, q):
    for c in range(q):
        h = hist[c]
        if h != lo[size, c] and h != hi[size, c]:
            return False
    return True


@njit
def _lex_less(a, b):
    d = a ^ b
    low = d & (-d)
    return (a & low) != 0


@njit
def subset_scan(indptr, indices, n, q, r, mode, lo, hi, prefix, nfree):
    """Gray-code walk over all S = prefix | (subset of the low nfree bits).

    Returns (counts per size, best size, lexicographically least best mask).
    """
    in_s = np.zeros(n, np.bool_)
    res = np.zeros(n, np.int64)
    hist = np.zeros(q, np.int64)
    counts = np.zeros(n + 1, np.int64)
    bad = 0
    size = 0
    for v in range(n):
        if (prefix >> v) & 1:
            bad += _toggle(v, in_s, res, indptr, indices, q, r, mode, hist)
            size += 1
    mask = prefix
    best_size = 0
    best_mask = 0
    total = np.int64(1) << nfree
    for step in range(total):
        if step > 0:
            v = ctz(step)
            if in_s[v]:
                size -= 1
            else:
                size += 1
            bad += _toggle(v, in_s, res, indptr, indices, q, r, mode, hist)
            mask ^= np.int64(1) << v
        if size == 0:
            continue
        if mode == 1:
            good = _hist_ok(hist, size, lo, hi, q)
        else:
            good = bad == 0
        if good:
            counts[size] += 1
            if size > best_size or (size == best_size and _lex_less(mask, best_mask)):
                best_size = size
                best_mask = mask
    return counts, best_size, best_mask


@njit
def good_table(indptr, indices, n, q, r):
    """good[S] = 1 iff G[S] has all degrees = r (mod q); good[0] = 1."""
    in_s = np.zeros(n, np.bool_)
    res = np.zeros(n, np.int64)
    hist = np.zeros(q, np.int64)
    out = np.zeros(np.int64(1) << n, np.uint8)
    out[0] = 1
    bad = 0
    mask = np.int64(0)
    total = np.int64(1) << n
    for step in range(1, total):
        v = ctz(step)
        bad += _toggle(v, in_s, res, indptr, indices, q, r, 0, hist)
        mask ^= np.int64(1) << v
        if bad == 0:
            out[mask] = 1
    return out


# ------------------------------------------------------------------- RNG

@njit
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit
def _next(state):
    state[0] += np.uint64(0x9E3779B97F4A7C15)
    return _mix(state[0])


@njit
def _below(state, bound):
    return np.int64(_next(state) % np.uint64(bound))


@njit
def _uniform(state):
    return (_next(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


# ------------------------------------------------------ local search (f)

@njit
def _objective(bad, size, target, n):
    d = size - target
    if d < 0:
        d = -d
    return bad * (n + 1) + d


@njit
def local_search_subset(indptr, indices, n, q, r, target, seeds, max_steps,
                        w_add, w_remove, w_swap, plateau, noise):
    """Multi-restart local search for a good vertex set of size ``target``.

    Returns (best good size, best good mask as uint8 membership, steps used).
    """
    hist = np.zeros(q, np.int64)
    best_size = 0
    best_in = np.zeros(n, np.uint8)
    steps_used = 0
    wsum = w_add + w_remove + w_swap
    order = np.arange(n)
    cand = np.empty(n, np.int64)
    for restart in range(seeds.shape[0]):
        state = np.empty(1, np.uint64)
        state[0] = seeds[restart]
        in_s = np.zeros(n, np.bool_)
        res = np.zeros(n, np.int64)
        for i in range(n - 1, 0, -1):
            j = _below(state, i + 1)
            tmp = order[i]
            order[i] = order[j]
            order[j] = tmp
        bad = 0
        size = 0
        for i in range(target):
            bad += _toggle(order[i], in_s, res, indptr, indices, q, r, 0, hist)
            size += 1
        for step in range(max_steps):
            steps_used += 1
            if bad == 0 and size > best_size:
                best_size = size
                for v in range(n):
                    best_in[v] = 1 if in_s[v] else 0
            if bad == 0 and size >= target:
                break
            cur = _objective(bad, size, target, n)
            x = _uniform(state) * wsum
            if x < w_swap and size > 0 and size < n:
                kind = 2
            elif x < w_swap + w_add and size < n:
                kind = 0
            elif size > 0:
                kind = 1
            else:
                kind = 0
            # pivot: a random bad member if any, otherwise a random member
            pivot = -1
            if kind != 0:
                nb = 0
                for v in range(n):
                    if in_s[v] and (res[v] != r or bad == 0):
                        cand[nb] = v
                        nb += 1
                pivot = cand[_below(state, nb)]
            if kind == 1:
                bad += _toggle(pivot, in_s, res, indptr, indices, q, r, 0, hist)
                size -= 1
                continue
            if kind == 2:
                bad += _toggle(pivot, in_s, res, indptr, indices, q, r, 0, hist)
                size -= 1
            # choose the best outside vertex to add
            best_obj = np.int64(1) << 62
            nc = 0
            for w in range(n):
                if in_s[w] or w == pivot:
                    continue
                d = _toggle(w, in_s, res, indptr, indices, q, r, 0, hist)
                o = _objective(bad + d, size + 1, target, n)
                _toggle(w, in_s, res, indptr, indices, q, r, 0, hist)
                if o < best_obj:
                    best_obj = o
                    nc = 0
                if o == best_obj:
                    cand[nc] = w
                    nc += 1
            if nc == 0:
                if kind == 2:
                    bad += _toggle(pivot, in_s, res, indptr, indices, q, r, 0, hist)
                    size += 1
                continue
            if _uniform(state) < noise:
                nc = 0
                for u in range(n):
                    if not in_s[u] and u != pivot:
                        cand[nc] = u
                        nc += 1
                w = cand[_below(state, nc)]
            elif best_obj > cur + plateau * (n + 1):
                # too much worse: undo the removal half of a swap and resample
                if kind == 2:
                    bad += _toggle(pivot, in_s, res, indptr, indices, q, r, 0, hist)
                    size += 1
                continue
            else:
                w = cand[_below(state, nc)]
            bad += _toggle(w, in_s, res, indptr, indices, q, r, 0, hist)
            size += 1
        if bad == 0 and size > best_size:
            best_size = size
            for v in range(n):
                best_in[v] = 1 if in_s[v] else 0
        if best_size >= target:
            break
    return best_size, best_in, steps_used


# ------------------------------------------------- local search (partitions)

@njit
def _relocate(v, dst, part, cnt, badf, indptr, indices, q, r):
    """Move v into part dst, keeping neighbour counts and bad flags current."""
    src = part[v]
    dbad = 0
    for p in range(indptr[v], indptr[v + 1]):
        x = indices[p]
        cnt[x, src] -= 1
        cnt[x, dst] += 1
        px = part[x]
        if px == src or px == dst:
            nb = (cnt[x, px] % q) != r
            if nb != badf[x]:
                dbad += 1 if nb else -1
                badf[x] = nb
    part[v] = dst
    nb = (cnt[v, dst] % q) != r
    if nb != badf[v]:
        dbad += 1 if nb else -1
        badf[v] = nb
    return dbad


@njit
def local_search_partition(indptr, indices, n, t, q, r, sizes, seeds, max_steps, plateau, noise):
    """Min-conflicts search over balanced ordered partitions.

    Objective: number of vertices whose degree inside their own part is not
    = r (mod q).  Returns (best objective, assignment, steps used).
    """
    part = np.zeros(n, np.int64)
    best_part = np.zeros(n, np.int64)
    best_obj = n + 1
    steps_used = 0
    order = np.arange(n)
    cand_w = np.empty(n, np.int64)
    cand_d = np.empty(n, np.int64)
    bads = np.empty(n, np.int64)
    size = np.zeros(t, np.int64)
    lo = n // t
    hi = lo if n % t == 0 else lo + 1
    for restart in range(seeds.shape[0]):
        state = np.empty(1, np.uint64)
        state[0] = seeds[restart]
        for i in range(n - 1, 0, -1):
            j = _below(state, i + 1)
            tmp = order[i]
            order[i] = order[j]
            order[j] = tmp
        pos = 0
        for p in range(t):
            size[p] = sizes[p]
            for _ in range(sizes[p]):
                part[order[pos]] = p
                pos += 1
        cnt = np.zeros((n, t), np.int64)
        for v in range(n):
            for p in range(indptr[v], indptr[v + 1]):
                cnt[v, part[indices[p]]] += 1
        badf = np.zeros(n, np.bool_)
        obj = 0
        for v in range(n):
            badf[v] = (cnt[v, part[v]] % q) != r
            if badf[v]:
                obj += 1
        for step in range(max_steps):
            if obj < best_obj:
                best_obj = obj
                best_part[:] = part
            if obj == 0:
                break
            steps_used += 1
            nb = 0
            for v in range(n):
                if badf[v]:
                    bads[nb] = v
                    nb += 1
            u = bads[_below(state, nb)]
            a = part[u]
            # candidates: swaps (w >= 0) and relocations (encoded as -1 - dst)
            nc = 0
            best_d = n + 1
            for w in range(n):
                b = part[w]
                if b == a:
                    continue
                d = _relocate(u, b, part, cnt, badf, indptr, indices, q, r)
                d += _relocate(w, a, part, cnt, badf, indptr, indices, q, r)
                _relocate(w, b, part, cnt, badf, indptr, indices, q, r)
                _relocate(u, a, part, cnt, badf, indptr, indices, q, r)
                if d < best_d:
                    best_d = d
                    nc = 0
                if d == best_d:
                    cand_w[nc] = w
                    cand_d[nc] = 0
                    nc += 1
            if hi != lo and size[a] == hi:
                for b in range(t):
                    if b == a or size[b] != lo:
                        continue
                    d = _relocate(u, b, part, cnt, badf, indptr, indices, q, r)
                    _relocate(u, a, part, cnt, badf, indptr, indices, q, r)
                    if d < best_d:
                        best_d = d
                        nc = 0
                    if d == best_d:
                        cand_w[nc] = -1 - b
                        nc += 1
            if nc == 0:
                continue
            if _uniform(state) < noise:
                # random swap partner for the pivot
                nc = 0
                for w in range(n):
                    if part[w] != a:
                        cand_w[nc] = w
                        nc += 1
                pick = cand_w[_below(state, nc)]
            elif best_d > plateau:
                continue
            else:
                pick = cand_w[_below(state, nc)]
            if pick >= 0:
                b = part[pick]
                obj += _relocate(u, b, part, cnt, badf, indptr, indices, q, r)
                obj += _relocate(pick, a, part, cnt, badf, indptr, indices, q, r)
            else:
                b = -1 - pick
                obj += _relocate(u, b, part, cnt, badf, indptr, indices, q, r)
                size[a] -= 1
                size[b] += 1
        if obj < best_obj:
            best_obj = obj
            best_part[:] = part
        if best_obj == 0:
            break
    return best_obj, best_part, steps_used
