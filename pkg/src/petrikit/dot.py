"""Graphviz DOT emitters. Output is deterministic for golden testing."""

from __future__ import annotations

from .concurrency import ConcurrencyStructure
from .net import Marking, MarkingGraph, Net
from .runs import Run


def _q(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_marking(m: Marking) -> str:
    """Markings print as lexicographically sorted place:count pairs."""
    if not len(m):
        return "(empty)"
    return " ".join(f"{p}:{m[p]}" for p in sorted(m))


def net_dot(net: Net, marking: Marking | None = None) -> str:
    """Places as circles (token count shown when marked), transitions as boxes."""
    lines = [f"digraph {_q(net.name)} {{", "  rankdir=LR;"]
    for p in sorted(net.places):
        label = p
        if marking is not None and marking[p]:
            label = f"{p} ({marking[p]})"
        lines.append(f"  {_q(p)} [shape=circle, label={_q(label)}];")
    for t in sorted(net.transitions):
        lines.append(f"  {_q(t)} [shape=box];")
    for t in sorted(net.transitions):
        for p in sorted(net.pre_of(t)):
            weight = net.pre_of(t)[p]
            attr = f" [label={_q(str(weight))}]" if weight > 1 else ""
            lines.append(f"  {_q(p)} -> {_q(t)}{attr};")
        for p in sorted(net.post_of(t)):
            weight = net.post_of(t)[p]
            attr = f" [label={_q(str(weight))}]" if weight > 1 else ""
            lines.append(f"  {_q(t)} -> {_q(p)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def run_dot(r: Run) -> str:
    """Conditions as circles, events as squares, ids paired with labels."""
    lines = ["digraph run {", "  rankdir=LR;"]
    for c in r.conditions:
        lines.append(f"  {_q(c)} [shape=circle, label={_q(c + ':' + r.cond_label[c])}];")
    for e in r.events:
        lines.append(f"  {_q(e)} [shape=box, label={_q(e + ':' + r.ev_label[e])}];")
    for src, dst in r.arcs:
        lines.append(f"  {_q(src)} -> {_q(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def marking_graph_dot(g: MarkingGraph) -> str:
    """Nodes named n0, n1, ... in breadth-first discovery order."""
    lines = [f"digraph {_q(g.net.name + ' markings')} {{"]
    index = {m: i for i, m in enumerate(g.nodes)}
    for i, m in enumerate(g.nodes):
        shape = ", peripheries=2" if m == g.initial else ""
        lines.append(f"  n{i} [label={_q(render_marking(m))}{shape}];")
    for step in g.edges:
        lines.append(
            f"  n{index[step.source]} -> n{index[step.target]} [label={_q(step.transition)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def structure_dot(net: Net, s: ConcurrencyStructure) -> str:
    """Net arcs solid, concurrency links dotted (and undirected)."""
    lines = [f"digraph {_q(net.name + ' concurrency')} {{"]
    for x in s.nodes:
        shape = "circle" if x in net.places else "box"
        lines.append(f"  {_q(x)} [shape={shape}];")
    present = set(s.nodes)
    for t in net.transitions:
        if t not in present:
            continue
        for p in sorted(net.pre_of(t)):
            if p in present:
                lines.append(f"  {_q(p)} -> {_q(t)};")
        for p in sorted(net.post_of(t)):
            if p in present:
                lines.append(f"  {_q(t)} -> {_q(p)};")
    for x, y in s.links:
        lines.append(f"  {_q(x)} -> {_q(y)} [style=dotted, dir=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
