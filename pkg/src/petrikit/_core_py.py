"""Pure-Python kernels: marking-graph exploration and linear extensions.

`petrikit._core` is the compiled twin; both produce bit-identical output
and are selected in `petrikit.kernels`. Keep the two in lockstep.
"""

from __future__ import annotations


def explore(num_places, num_trans, pre_flat, post_flat, m0, cap):
    """Breadth-first closure of {m0} under the firing rule.

    pre_flat/post_flat hold one dense vector per transition, flattened
    row-major (length num_trans * num_places). Markings are integer
    tuples. Returns (markings, edges, truncated); edges are
    (src, trans, dst) index triples. Successors falling beyond `cap`
    nodes are dropped and `truncated` is set.
    """
    start = tuple(m0)
    markings = [start]
    index = {start: 0}
    edges = []
    truncated = False
    head = 0
    while head < len(markings):
        m = markings[head]
        for t in range(num_trans):
            base = t * num_places
            enabled = True
            for p in range(num_places):
                if m[p] < pre_flat[base + p]:
                    enabled = False
                    break
            if not enabled:
                continue
            succ = tuple(
                m[p] - pre_flat[base + p] + post_flat[base + p]
                for p in range(num_places)
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


def linear_extensions(num_items, preds, cap):
    """All linear extensions of a partial order, lexicographic by index.

    preds[i] lists the items that must come before item i. At most
    `cap` extensions are returned; the second result reports whether
    more exist.
    """
    succs = [[] for _ in range(num_items)]
    indeg = [0] * num_items
    for i, ps in enumerate(preds):
        indeg[i] = len(ps)
        for p in ps:
            succs[p].append(i)
    result = []
    current = []
    used = [False] * num_items

    def rec():
        if len(current) == num_items:
            if len(result) < cap:
                result.append(tuple(current))
                return False
            return True
        for i in range(num_items):
            if used[i] or indeg[i]:
                continue
            used[i] = True
            current.append(i)
            for s in succs[i]:
                indeg[s] -= 1
            full = rec()
            for s in succs[i]:
                indeg[s] += 1
            current.pop()
            used[i] = False
            if full:
                return True
        return False

    truncated = rec()
    return result, truncated
