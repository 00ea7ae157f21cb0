# cython: boundscheck=False, wraparound=False
"""Compiled kernels; `petrikit._core_py` is the reference twin.

Both implementations must return bit-identical results; the test suite
compares them whenever this extension is available. Token counts are
held in 64-bit integers here, which is ample for desk-scale nets.
"""

import array

from cpython cimport array


def explore(int num_places, int num_trans, pre_flat, post_flat, m0, int cap):
    """Breadth-first closure of {m0} under the firing rule."""
    cdef array.array pre_arr = array.array("q", pre_flat)
    cdef array.array post_arr = array.array("q", post_flat)
    cdef long long[:] pre = pre_arr
    cdef long long[:] post = post_arr
    cdef array.array cur_arr = array.array("q", [0] * num_places)
    cdef long long[:] cur = cur_arr
    cdef bint truncated = False
    cdef Py_ssize_t head = 0
    cdef int t, p
    cdef Py_ssize_t base
    cdef bint ok

    start = tuple(m0)
    markings = [start]
    index = {start: 0}
    edges = []
    while head < len(markings):
        m = markings[head]
        for p in range(num_places):
            cur[p] = m[p]
        for t in range(num_trans):
            base = t * num_places
            ok = True
            for p in range(num_places):
                if cur[p] < pre[base + p]:
                    ok = False
                    break
            if not ok:
                continue
            succ = tuple(
                [cur[p] - pre[base + p] + post[base + p] for p in range(num_places)]
            )
            j = index.get(succ)
            if j is None:
                if len(markings) < cap:
                    j = len(markings)
                    index[succ] = j
                    markings.append(succ)
                else:
                    truncated = True
                    continue
            edges.append((head, t, j))
        head += 1
    return markings, edges, truncated


cdef bint _extend(
    int num_items,
    int[:] indeg,
    signed char[:] used,
    int[:] succ_flat,
    int[:] succ_off,
    list current,
    list result,
    int cap,
):
    cdef int i, k
    cdef bint full
    if len(current) == num_items:
        if len(result) < cap:
            result.append(tuple(current))
            return False
        return True
    for i in range(num_items):
        if used[i] or indeg[i]:
            continue
        used[i] = 1
        current.append(i)
        for k in range(succ_off[i], succ_off[i + 1]):
            indeg[succ_flat[k]] -= 1
        full = _extend(num_items, indeg, used, succ_flat, succ_off, current, result, cap)
        for k in range(succ_off[i], succ_off[i + 1]):
            indeg[succ_flat[k]] += 1
        current.pop()
        used[i] = 0
        if full:
            return True
    return False


def linear_extensions(int num_items, preds, int cap):
    """All linear extensions of a partial order, lexicographic by index."""
    cdef array.array indeg_arr = array.array("i", [0] * num_items)
    cdef array.array used_arr = array.array("b", [0] * num_items)
    succs = [[] for _ in range(num_items)]
    cdef int i
    for i in range(num_items):
        indeg_arr[i] = len(preds[i])
        for p in preds[i]:
            succs[p].append(i)
    flat = []
    offsets = [0]
    for group in succs:
        flat.extend(group)
        offsets.append(len(flat))
    cdef array.array flat_arr = array.array("i", flat or [0])
    cdef array.array off_arr = array.array("i", offsets)
    result = []
    cdef bint truncated
    if num_items == 0:
        result.append(())
        return result, False
    truncated = _extend(
        num_items, indeg_arr, used_arr, flat_arr, off_arr, [], result, cap
    )
    return result, truncated
