"""Elementary place/transition nets, markings, and the occurrence rule.

A net is a static structure: ordered places and transitions plus pre-
and post-multisets per transition (self-loops allowed). A marking is a
multiset over places. Firing follows the marking equation
M' = M - pre(t) + post(t); unfiring is its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from . import kernels
from .errors import EnablingError, ReversalError, StructuralError
from .multiset import Multiset

Marking = Multiset  # multiset over place identifiers


def marking(items: Iterable[str] | Mapping[str, int] = ()) -> Marking:
    """Build a marking from place ids (with repetition) or a count map."""
    return Multiset(items)


@dataclass(frozen=True, eq=True)
class Net:
    """An elementary net: places, transitions, and arc multisets.

    Declaration order of places and transitions is significant: every
    deterministic tie-break in the toolkit follows it.
    """

    name: str
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    pre: Mapping[str, Multiset]
    post: Mapping[str, Multiset]

    def __post_init__(self):
        place_set = set(self.places)
        trans_set = set(self.transitions)
        if len(place_set) != len(self.places):
            raise StructuralError(f"net {self.name!r}: duplicate place declaration")
        if len(trans_set) != len(self.transitions):
            raise StructuralError(f"net {self.name!r}: duplicate transition declaration")
        overlap = place_set & trans_set
        if overlap:
            raise StructuralError(
                f"net {self.name!r}: identifiers used as both place and transition: "
                f"{sorted(overlap)}"
            )
        for table, side in ((self.pre, "pre"), (self.post, "post")):
            for t, places in table.items():
                if t not in trans_set:
                    raise StructuralError(f"net {self.name!r}: {side} of undeclared transition {t!r}")
                for p in places:
                    if p not in place_set:
                        raise StructuralError(
                            f"net {self.name!r}: {side}({t!r}) uses undeclared place {p!r}"
                        )

    def pre_of(self, t: str) -> Multiset:
        self._check_transition(t)
        return self.pre.get(t, Multiset())

    def post_of(self, t: str) -> Multiset:
        self._check_transition(t)
        return self.post.get(t, Multiset())

    def _check_transition(self, t: str):
        if t not in self.transitions:
            raise StructuralError(f"net {self.name!r}: unknown transition {t!r}")

    def check_marking(self, m: Marking):
        for p in m:
            if p not in self.places:
                raise StructuralError(f"net {self.name!r}: marking uses undeclared place {p!r}")


def build_net(
    name: str,
    places: Sequence[str],
    transitions: Sequence[tuple[str, Iterable[str] | Mapping[str, int], Iterable[str] | Mapping[str, int]]],
) -> Net:
    """Convenience constructor: transitions as (id, pre, post) triples."""
    ids = tuple(t for t, _, _ in transitions)
    pre = {t: Multiset(p) for t, p, _ in transitions}
    post = {t: Multiset(q) for t, _, q in transitions}
    return Net(name, tuple(places), ids, pre, post)


class GlobalStep(NamedTuple):
    """One firing at the level of global states."""

    source: Marking
    transition: str
    target: Marking


@dataclass(frozen=True)
class MarkingGraph:
    """Reachable markings of a net, closed under firing unless truncated."""

    net: Net
    initial: Marking
    nodes: tuple[Marking, ...]
    edges: tuple[GlobalStep, ...]
    truncated: bool

    def index_of(self, m: Marking) -> int:
        return self.nodes.index(m)


def enabled(net: Net, m: Marking, t: str) -> bool:
    """True iff pre(t) is covered by m componentwise."""
    return net.pre_of(t) <= m


def fire(net: Net, m: Marking, t: str) -> Marking:
    """Occurrence rule: returns m - pre(t) + post(t)."""
    pre = net.pre_of(t)
    if not pre <= m:
        missing = pre.deficiencies(m)
        raise EnablingError(
            f"transition {t!r} not enabled: missing tokens on {list(missing)}",
            transition=t,
            deficient=missing,
        )
    return m - pre + net.post_of(t)


def unfire(net: Net, m: Marking, t: str) -> Marking:
    """Reverse occurrence: returns m - post(t) + pre(t)."""
    post = net.post_of(t)
    if not post <= m:
        missing = post.deficiencies(m)
        raise ReversalError(
            f"cannot unfire {t!r}: marking lacks tokens on {list(missing)}"
        )
    return m - post + net.pre_of(t)


def fire_sequence(net: Net, m0: Marking, seq: Sequence[str]) -> list[Marking]:
    """Markings M0..Mn visited while firing seq; fails on the first disabled step."""
    trace = [m0]
    m = m0
    for i, t in enumerate(seq):
        try:
            m = fire(net, m, t)
        except EnablingError as exc:
            raise EnablingError(
                f"step {i} ({t!r}) not enabled: missing tokens on {list(exc.deficient)}",
                transition=t,
                deficient=exc.deficient,
                index=i,
            ) from None
        trace.append(m)
    return trace


def marking_graph(net: Net, m0: Marking, cap: int) -> MarkingGraph:
    """Breadth-first marking graph, transitions tried in declaration order.

    `cap` bounds the number of nodes; hitting it sets `truncated` and
    drops edges whose target would be a new node.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    net.check_marking(m0)
    place_index = {p: i for i, p in enumerate(net.places)}
    num_places = len(net.places)
    num_trans = len(net.transitions)
    pre_flat = [0] * (num_places * num_trans)
    post_flat = [0] * (num_places * num_trans)
    for ti, t in enumerate(net.transitions):
        for p, n in net.pre_of(t).items():
            pre_flat[ti * num_places + place_index[p]] = n
        for p, n in net.post_of(t).items():
            post_flat[ti * num_places + place_index[p]] = n
    m0_vec = tuple(m0[p] for p in net.places)
    vecs, raw_edges, truncated = kernels.explore(
        num_places, num_trans, pre_flat, post_flat, m0_vec, cap
    )
    nodes = tuple(
        Multiset({p: v[i] for i, p in enumerate(net.places) if v[i]}) for v in vecs
    )
    edges = tuple(
        GlobalStep(nodes[src], net.transitions[ti], nodes[dst])
        for src, ti, dst in raw_edges
    )
    return MarkingGraph(net, nodes[0], nodes, edges, truncated)
