"""The concurrency relation between net elements, read off a distributed run.

Two occurrences are concurrent (co) when the causal order relates them
in neither direction. Lifting co from occurrences to the net's places
and transitions gives a structure over the net elements; for tightly
coupled systems that structure is connected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StructuralError, UndefinedRelationError
from .net import Net
from .runs import CausalOrder, Run, causal_order, run_violations


@dataclass(frozen=True)
class ConcurrencyStructure:
    """Net elements occurring in a run, linked when deemed concurrent."""

    nodes: tuple[str, ...]
    links: tuple[tuple[str, str], ...]  # pairs ordered by node position

    def linked(self, x: str, y: str) -> bool:
        return (x, y) in self.links or (y, x) in self.links


def co(r: Run, x: str, y: str, order: CausalOrder | None = None) -> bool:
    """True iff the occurrences x and y are causally unordered."""
    if order is None:
        order = causal_order(r)
    for occ in (x, y):
        if occ not in order.elements:
            raise StructuralError(f"unknown occurrence {occ!r}")
    if x == y:
        return False
    return not order.leq(x, y) and not order.leq(y, x)


def _occurrences(r: Run, element: str) -> tuple[list[str], list[str]]:
    conds = [c for c in r.conditions if r.cond_label[c] == element]
    events = [e for e in r.events if r.ev_label[e] == element]
    return conds, events


def _interior(r: Run, conds) -> list[str]:
    """Conditions whose holding interval the run shows completely."""
    return [c for c in conds if r.pre_event(c) is not None and r.post_event(c) is not None]


def propositions_concurrent(
    r: Run, p: str, q: str, order: CausalOrder | None = None
) -> bool:
    """Concurrency of two places over the run.

    A finite run is a window into the behavior: conditions clipped by
    the window boundary (no producing or no consuming event shown)
    witness incomplete holding intervals, so the universal quantifier
    ranges over interior conditions only. Each interior condition of p
    must be unordered with some condition of q, and symmetrically;
    then whenever one proposition holds, the other holds alongside it.
    Without interior occurrences on both sides the window shows no
    complete interval to judge, and the verdict is False.
    """
    if order is None:
        order = causal_order(r)
    p_conds, _ = _occurrences(r, p)
    q_conds, _ = _occurrences(r, q)
    if not p_conds:
        raise UndefinedRelationError(f"place {p!r} has no occurrence in the run")
    if not q_conds:
        raise UndefinedRelationError(f"place {q!r} has no occurrence in the run")
    p_interior = _interior(r, p_conds)
    q_interior = _interior(r, q_conds)
    if not p_interior or not q_interior:
        return False
    return all(
        any(co(r, c, d, order) for d in q_conds) for c in p_interior
    ) and all(
        any(co(r, d, c, order) for c in p_conds) for d in q_interior
    )


def place_transition_concurrent(
    r: Run, p: str, t: str, order: CausalOrder | None = None
) -> bool:
    """True iff each occurrence of t is unordered with some condition labeled p."""
    if order is None:
        order = causal_order(r)
    _, t_events = _occurrences(r, t)
    if not t_events:
        raise UndefinedRelationError(f"transition {t!r} has no occurrence in the run")
    p_conds, _ = _occurrences(r, p)
    return all(any(co(r, e, c, order) for c in p_conds) for e in t_events)


def concurrency_structure(net: Net, r: Run) -> ConcurrencyStructure:
    """Structure over all net elements with occurrences in r.

    Place-place links follow the proposition rule, place-transition
    links the occurrence rule; the relation offers no transition pairs.
    """
    problems = run_violations(net, None, r)
    if problems:
        raise StructuralError("invalid run: " + "; ".join(problems))
    order = causal_order(r)
    occurring_places = [p for p in net.places if _occurrences(r, p)[0]]
    occurring_trans = [t for t in net.transitions if _occurrences(r, t)[1]]
    nodes = (*occurring_places, *occurring_trans)
    links: list[tuple[str, str]] = []
    for i, p in enumerate(occurring_places):
        for q in occurring_places[i + 1:]:
            if propositions_concurrent(r, p, q, order):
                links.append((p, q))
    for p in occurring_places:
        for t in occurring_trans:
            if place_transition_concurrent(r, p, t, order):
                links.append((p, t))
    position = {x: i for i, x in enumerate(nodes)}
    links.sort(key=lambda pair: (position[pair[0]], position[pair[1]]))
    return ConcurrencyStructure(nodes, tuple(links))


def is_connected(s: ConcurrencyStructure) -> bool:
    """True iff every node reaches every other through links (vacuous for <=1 node)."""
    if len(s.nodes) <= 1:
        return True
    neighbours: dict[str, set[str]] = {n: set() for n in s.nodes}
    for x, y in s.links:
        neighbours[x].add(y)
        neighbours[y].add(x)
    seen = {s.nodes[0]}
    frontier = [s.nodes[0]]
    while frontier:
        node = frontier.pop()
        for nxt in neighbours[node]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == len(s.nodes)
