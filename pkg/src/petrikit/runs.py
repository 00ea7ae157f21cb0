"""Distributed runs: occurrence nets built by unfolding a net.

A run records conditions (place occurrences) and events (transition
occurrences); arcs record causal dependency. Conditions never branch:
at most one pre-event and one post-event each, so runs are conflict
free and their arc graph is a DAG.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import kernels
from .errors import EnablingError, StructuralError
from .multiset import Multiset
from .net import Marking, Net


@dataclass(frozen=True)
class Run:
    """An occurrence net labeled into a reference net.

    Condition ids are c1, c2, ...; event ids are e1, e2, ...; both in
    creation order, which the unfolding assigns deterministically.
    """

    conditions: tuple[str, ...]
    events: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]
    cond_label: Mapping[str, str]
    ev_label: Mapping[str, str]

    def pre_event(self, c: str) -> str | None:
        for src, dst in self.arcs:
            if dst == c:
                return src
        return None

    def post_event(self, c: str) -> str | None:
        for src, dst in self.arcs:
            if src == c:
                return dst
        return None

    def pre_conditions(self, e: str) -> tuple[str, ...]:
        return tuple(src for src, dst in self.arcs if dst == e)

    def post_conditions(self, e: str) -> tuple[str, ...]:
        return tuple(dst for src, dst in self.arcs if src == e)

    def minimal_conditions(self) -> tuple[str, ...]:
        consumed_targets = {dst for _, dst in self.arcs}
        return tuple(c for c in self.conditions if c not in consumed_targets)

    def maximal_conditions(self) -> tuple[str, ...]:
        with_post = {src for src, _ in self.arcs}
        return tuple(c for c in self.conditions if c not in with_post)

    def minimal_marking(self) -> Marking:
        return Multiset(self.cond_label[c] for c in self.minimal_conditions())

    def maximal_marking(self) -> Marking:
        return Multiset(self.cond_label[c] for c in self.maximal_conditions())


@dataclass(frozen=True)
class CausalOrder:
    """Reflexive-transitive closure of a run's arcs, as a partial order."""

    elements: tuple[str, ...]
    _reach: tuple[int, ...]  # _reach[i] bit j set iff element i <= element j

    def leq(self, x: str, y: str) -> bool:
        i = self._index(x)
        j = self._index(y)
        return bool(self._reach[i] >> j & 1)

    def comparable(self, x: str, y: str) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def _index(self, x: str) -> int:
        try:
            return self.elements.index(x)
        except ValueError:
            raise StructuralError(f"unknown occurrence {x!r}") from None

    def pairs(self) -> list[tuple[str, str]]:
        """All ordered pairs (x, y) with x <= y."""
        out = []
        for i, x in enumerate(self.elements):
            bits = self._reach[i]
            for j, y in enumerate(self.elements):
                if bits >> j & 1:
                    out.append((x, y))
        return out


def step_run(net: Net, t: str) -> Run:
    """The single step of one transition: one event, fresh surrounding conditions."""
    net.pre_of(t)  # validates the transition id
    conds: list[str] = []
    labels: dict[str, str] = {}
    arcs: list[tuple[str, str]] = []
    event = "e1"
    for p in net.places:
        for _ in range(net.pre_of(t)[p]):
            cid = f"c{len(conds) + 1}"
            conds.append(cid)
            labels[cid] = p
            arcs.append((cid, event))
    for p in net.places:
        for _ in range(net.post_of(t)[p]):
            cid = f"c{len(conds) + 1}"
            conds.append(cid)
            labels[cid] = p
            arcs.append((event, cid))
    return Run(tuple(conds), (event,), tuple(arcs), labels, {event: t})


def unfold(net: Net, m0: Marking, seq: Sequence[str]) -> Run:
    """Process construction: replay seq from m0, recording causality.

    Each firing consumes, per input place, the oldest condition with
    that label that has no post-event yet, and produces fresh
    conditions for the output places. The choice rule makes the result
    deterministic; for 1-safe nets it is the only choice anyway.
    """
    net.check_marking(m0)
    conds: list[str] = []
    events: list[str] = []
    arcs: list[tuple[str, str]] = []
    cond_label: dict[str, str] = {}
    ev_label: dict[str, str] = {}
    available: dict[str, list[str]] = {p: [] for p in net.places}

    def new_condition(place: str) -> str:
        cid = f"c{len(conds) + 1}"
        conds.append(cid)
        cond_label[cid] = place
        available[place].append(cid)
        return cid

    for p in net.places:
        for _ in range(m0[p]):
            new_condition(p)
    for i, t in enumerate(seq):
        pre = net.pre_of(t)
        shortfall = tuple(p for p in pre if len(available[p]) < pre[p])
        if shortfall:
            raise EnablingError(
                f"step {i} ({t!r}) not enabled: missing tokens on {list(shortfall)}",
                transition=t,
                deficient=shortfall,
                index=i,
            )
        eid = f"e{len(events) + 1}"
        events.append(eid)
        ev_label[eid] = t
        for p in net.places:
            for _ in range(pre[p]):
                arcs.append((available[p].pop(0), eid))
        for p in net.places:
            for _ in range(net.post_of(t)[p]):
                arcs.append((eid, new_condition(p)))
    return Run(tuple(conds), tuple(events), tuple(arcs), cond_label, ev_label)


def run_violations(net: Net, m0: Marking | None, r: Run) -> list[str]:
    """Diagnostics for every violated run invariant; empty means valid."""
    problems: list[str] = []
    cond_set = set(r.conditions)
    ev_set = set(r.events)
    if len(cond_set) != len(r.conditions):
        problems.append("duplicate condition identifiers")
    if len(ev_set) != len(r.events):
        problems.append("duplicate event identifiers")
    if cond_set & ev_set:
        problems.append("condition and event identifiers overlap")
    cond_in: dict[str, int] = {c: 0 for c in r.conditions}
    cond_out: dict[str, int] = {c: 0 for c in r.conditions}
    for src, dst in r.arcs:
        if src in cond_set and dst in ev_set:
            cond_out[src] += 1
        elif src in ev_set and dst in cond_set:
            cond_in[dst] += 1
        else:
            problems.append(f"arc ({src!r}, {dst!r}) does not connect a condition and an event")
    for c in r.conditions:
        if cond_in[c] > 1:
            problems.append(f"condition {c!r} has {cond_in[c]} pre-events (merging)")
        if cond_out[c] > 1:
            problems.append(f"condition {c!r} has {cond_out[c]} post-events (conflict)")
    if _has_cycle(r):
        problems.append("arc graph is cyclic")
    for c in r.conditions:
        if r.cond_label.get(c) not in net.places:
            problems.append(f"condition {c!r} labeled with unknown place {r.cond_label.get(c)!r}")
    for e in r.events:
        t = r.ev_label.get(e)
        if t not in net.transitions:
            problems.append(f"event {e!r} labeled with unknown transition {t!r}")
            continue
        pre_labels = Multiset(r.cond_label[c] for c in r.pre_conditions(e))
        post_labels = Multiset(r.cond_label[c] for c in r.post_conditions(e))
        if pre_labels != net.pre_of(t):
            problems.append(f"event {e!r}: pre-condition labels differ from pre({t!r})")
        if post_labels != net.post_of(t):
            problems.append(f"event {e!r}: post-condition labels differ from post({t!r})")
    if m0 is not None and r.minimal_marking() != m0:
        problems.append("minimal-condition labels differ from the initial marking")
    return problems


def is_valid_run(net: Net, m0: Marking, r: Run) -> bool:
    """True iff r is a distributed run of net starting at m0."""
    return not run_violations(net, m0, r)


def _has_cycle(r: Run) -> bool:
    succ: dict[str, list[str]] = {}
    for src, dst in r.arcs:
        succ.setdefault(src, []).append(dst)
    state: dict[str, int] = {}

    def visit(node: str) -> bool:
        state[node] = 1
        for nxt in succ.get(node, ()):
            mark = state.get(nxt, 0)
            if mark == 1 or (mark == 0 and visit(nxt)):
                return True
        state[node] = 2
        return False

    return any(state.get(n, 0) == 0 and visit(n) for n in (*r.conditions, *r.events))


def causal_order(r: Run) -> CausalOrder:
    """Reflexive-transitive closure of the run's arcs."""
    elements = (*r.conditions, *r.events)
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for src, dst in r.arcs:
        succ[index[src]].append(index[dst])
        indeg[index[dst]] += 1
    order: list[int] = [i for i in range(n) if indeg[i] == 0]
    head = 0
    while head < len(order):
        i = order[head]
        head += 1
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                order.append(j)
    if len(order) != n:
        raise StructuralError("run arcs are cyclic; no causal order exists")
    reach = [0] * n
    for i in reversed(order):
        bits = 1 << i
        for j in succ[i]:
            bits |= reach[j]
        reach[i] = bits
    return CausalOrder(elements, tuple(reach))


def linearizations(r: Run, cap: int) -> tuple[list[list[str]], bool]:
    """All linear extensions of the event order, lexicographic by event id.

    Returns (extensions, truncated); at most `cap` extensions are
    produced and `truncated` flags that more exist.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    order = causal_order(r)
    events = r.events
    preds = [
        [j for j, f in enumerate(events) if f != e and order.leq(f, e)]
        for e in events
    ]
    raw, truncated = kernels.linear_extensions(len(events), preds, cap)
    return [[events[i] for i in seq] for seq in raw], truncated
