"""Modules with two-faced labeled interfaces and their composition.

A module wraps a net (optionally marked) between a left and a right
interface of labeled elements. Composing a • b merges equally labeled
elements of a's right face and b's left face; mixed interfaces are
allowed, i.e. places and transitions may be merged in the same step as
long as each shared label pairs elements of one kind. The operator is
associative up to isomorphism.

Runs compose the same way: a run is a module whose left face holds its
minimal conditions and whose right face holds its maximal ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CompositionError, StructuralError
from .multiset import Multiset
from .net import Marking, Net
from .runs import Run


@dataclass(frozen=True)
class Interface:
    """Ordered labeling of interface elements; labels unique per face."""

    entries: tuple[tuple[str, str], ...] = ()  # (label, element id)

    def __post_init__(self):
        labels = [label for label, _ in self.entries]
        if len(labels) != len(set(labels)):
            raise StructuralError("duplicate label inside one interface")

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.entries)

    def element(self, label: str) -> str:
        for lab, elem in self.entries:
            if lab == label:
                return elem
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return any(lab == label for lab, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def interface(pairs: Iterable[tuple[str, str]] = ()) -> Interface:
    return Interface(tuple(pairs))


@dataclass(frozen=True)
class Module:
    """A net with an initial marking and two labeled faces."""

    net: Net
    initial: Marking = field(default_factory=Multiset)
    left: Interface = field(default_factory=Interface)
    right: Interface = field(default_factory=Interface)

    def __post_init__(self):
        known = set(self.net.places) | set(self.net.transitions)
        for face in (self.left, self.right):
            for label, elem in face.entries:
                if elem not in known:
                    raise StructuralError(
                        f"interface label {label!r} references unknown element {elem!r}"
                    )
        self.net.check_marking(self.initial)

    def kind(self, elem: str) -> str:
        return "place" if elem in self.net.places else "transition"


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: str, y: str):
        self.parent[self.find(x)] = self.find(y)


def _fresh(base: str, used: set[str]) -> str:
    if base not in used:
        return base
    k = 2
    while f"{base}_{k}" in used:
        k += 1
    return f"{base}_{k}"


def compose(a: Module, b: Module) -> Module:
    """Merge equally labeled elements of right(a) and left(b).

    Fused elements keep a's identity; markings on fused places add;
    the result's left face is left(a) followed by the unmatched part of
    left(b), the right face is right(b) followed by the unmatched part
    of right(a). Unfused elements of b whose ids clash with a's are
    renamed deterministically.
    """
    shared = [label for label in a.right.labels() if label in b.left]
    for label in shared:
        ea = a.right.element(label)
        eb = b.left.element(label)
        if a.kind(ea) != b.kind(eb):
            raise CompositionError(
                f"label {label!r} pairs a {a.kind(ea)} with a {b.kind(eb)}"
            )
    # fusion classes; multi-way merges are possible when one element
    # carries several shared labels
    uf = _UnionFind()
    for label in shared:
        uf.union("b:" + b.left.element(label), "a:" + a.right.element(label))
    classes: dict[str, list[str]] = {}
    for label in shared:
        for tagged in ("a:" + a.right.element(label), "b:" + b.left.element(label)):
            root = uf.find(tagged)
            members = classes.setdefault(root, [])
            if tagged not in members:
                members.append(tagged)

    a_order = {e: i for i, e in enumerate((*a.net.places, *a.net.transitions))}
    rep_of: dict[str, str] = {}  # tagged element -> representative (a element id)
    for members in classes.values():
        a_members = sorted(
            (m[2:] for m in members if m.startswith("a:")), key=a_order.__getitem__
        )
        rep = a_members[0]
        for m in members:
            rep_of[m] = rep

    def a_name(elem: str) -> str:
        return rep_of.get("a:" + elem, elem)

    used = {a_name(e) for e in (*a.net.places, *a.net.transitions)}
    b_name: dict[str, str] = {}
    for elem in (*b.net.places, *b.net.transitions):
        tagged = "b:" + elem
        if tagged in rep_of:
            b_name[elem] = rep_of[tagged]
        else:
            fresh = _fresh(elem, used)
            used.add(fresh)
            b_name[elem] = fresh

    places: list[str] = []
    for p in a.net.places:
        if a_name(p) == p:
            places.append(p)
    for p in b.net.places:
        if "b:" + p not in rep_of:
            places.append(b_name[p])
    transitions: list[str] = []
    for t in a.net.transitions:
        if a_name(t) == t:
            transitions.append(t)
    for t in b.net.transitions:
        if "b:" + t not in rep_of:
            transitions.append(b_name[t])

    pre: dict[str, Multiset] = {t: Multiset() for t in transitions}
    post: dict[str, Multiset] = {t: Multiset() for t in transitions}
    for t in a.net.transitions:
        name = a_name(t)
        pre[name] = pre[name] + Multiset(a_name(p) for p in a.net.pre_of(t).elements())
        post[name] = post[name] + Multiset(a_name(p) for p in a.net.post_of(t).elements())
    for t in b.net.transitions:
        name = b_name[t]
        pre[name] = pre[name] + Multiset(b_name[p] for p in b.net.pre_of(t).elements())
        post[name] = post[name] + Multiset(b_name[p] for p in b.net.post_of(t).elements())

    initial: dict[str, int] = {}
    for p in a.net.places:
        if a.initial[p]:
            name = a_name(p)
            initial[name] = initial.get(name, 0) + a.initial[p]
    for p in b.net.places:
        if b.initial[p]:
            name = b_name[p]
            initial[name] = initial.get(name, 0) + b.initial[p]

    left_entries = [(label, a_name(elem)) for label, elem in a.left.entries]
    left_entries += [
        (label, b_name[elem]) for label, elem in b.left.entries if label not in shared
    ]
    right_entries = [(label, b_name[elem]) for label, elem in b.right.entries]
    right_entries += [
        (label, a_name(elem)) for label, elem in a.right.entries if label not in shared
    ]
    for entries, side in ((left_entries, "left"), (right_entries, "right")):
        labels = [label for label, _ in entries]
        if len(labels) != len(set(labels)):
            dup = next(l for l in labels if labels.count(l) > 1)
            raise CompositionError(f"label {dup!r} would appear twice on the {side} face")

    net = Net(
        f"{a.net.name}•{b.net.name}",
        tuple(places),
        tuple(transitions),
        pre,
        post,
    )
    return Module(net, Multiset(initial), Interface(tuple(left_entries)), Interface(tuple(right_entries)))


def compose_chain(modules: Sequence[Module]) -> Module:
    """Left fold of compose; associativity makes the grouping irrelevant."""
    if not modules:
        raise StructuralError("cannot compose an empty chain")
    result = modules[0]
    for i, nxt in enumerate(modules[1:], start=1):
        try:
            result = compose(result, nxt)
        except CompositionError as exc:
            raise CompositionError(f"at chain position {i}: {exc}") from None
    return result


def run_module(r: Run) -> Module:
    """View a run as a module: minimal conditions left, maximal right.

    Face labels are the place labels of the boundary conditions, so
    runs of the same net compose along matching intermediate states.
    """
    pre = {e: Multiset(r.pre_conditions(e)) for e in r.events}
    post = {e: Multiset(r.post_conditions(e)) for e in r.events}
    net = Net("run", r.conditions, r.events, pre, post)
    for face_conds, side in ((r.minimal_conditions(), "left"), (r.maximal_conditions(), "right")):
        labels = [r.cond_label[c] for c in face_conds]
        if len(labels) != len(set(labels)):
            raise CompositionError(
                f"run has two {side}-boundary conditions with the same label"
            )
    left = Interface(tuple((r.cond_label[c], c) for c in r.minimal_conditions()))
    right = Interface(tuple((r.cond_label[c], c) for c in r.maximal_conditions()))
    return Module(net, Multiset(), left, right)


def compose_runs(a: Run, b: Run) -> Run:
    """Compose two runs by fusing b's minimal conditions with a's maximal
    conditions of equal label (oldest first); ids are renumbered c1../e1..
    in (a, then b) order."""
    available: dict[str, list[str]] = {}
    for c in a.maximal_conditions():
        available.setdefault(a.cond_label[c], []).append(c)
    fused: dict[str, str] = {}  # b condition -> a condition
    for c in b.minimal_conditions():
        stock = available.get(b.cond_label[c])
        if stock:
            fused[c] = stock.pop(0)

    new_id: dict[tuple[str, str], str] = {}
    conditions: list[str] = []
    cond_label: dict[str, str] = {}
    for c in a.conditions:
        cid = f"c{len(conditions) + 1}"
        new_id[("a", c)] = cid
        conditions.append(cid)
        cond_label[cid] = a.cond_label[c]
    for c in b.conditions:
        if c in fused:
            new_id[("b", c)] = new_id[("a", fused[c])]
            continue
        cid = f"c{len(conditions) + 1}"
        new_id[("b", c)] = cid
        conditions.append(cid)
        cond_label[cid] = b.cond_label[c]
    events: list[str] = []
    ev_label: dict[str, str] = {}
    for tag, run in (("a", a), ("b", b)):
        for e in run.events:
            eid = f"e{len(events) + 1}"
            new_id[(tag, e)] = eid
            events.append(eid)
            ev_label[eid] = run.ev_label[e]
    arcs: list[tuple[str, str]] = []
    for tag, run in (("a", a), ("b", b)):
        for src, dst in run.arcs:
            arcs.append((new_id[(tag, src)], new_id[(tag, dst)]))
    return Run(tuple(conditions), tuple(events), tuple(arcs), cond_label, ev_label)


def marking_run(net: Net, m0: Marking) -> Run:
    """The event-free run whose conditions spell out a marking."""
    net.check_marking(m0)
    conditions: list[str] = []
    labels: dict[str, str] = {}
    for p in net.places:
        for _ in range(m0[p]):
            cid = f"c{len(conditions) + 1}"
            conditions.append(cid)
            labels[cid] = p
    return Run(tuple(conditions), (), (), labels, {})


def modules_isomorphic(a: Module, b: Module) -> bool:
    """Structural equality up to renaming of elements.

    A bijection must preserve arcs with multiplicities, initial
    markings, and face labeling. Face labels force part of the map;
    iterated color refinement narrows the rest, and a backtracking
    search settles what refinement cannot.
    """
    if len(a.net.places) != len(b.net.places):
        return False
    if len(a.net.transitions) != len(b.net.transitions):
        return False
    if sorted(a.left.labels()) != sorted(b.left.labels()):
        return False
    if sorted(a.right.labels()) != sorted(b.right.labels()):
        return False

    colors_a, colors_b = _joint_colors(a, b)
    if sorted(colors_a.values()) != sorted(colors_b.values()):
        return False

    mapping: dict[str, str] = {}
    reverse: dict[str, str] = {}
    for face_a, face_b in ((a.left, b.left), (a.right, b.right)):
        for label, elem in face_a.entries:
            target = face_b.element(label)
            if mapping.get(elem, target) != target or reverse.get(target, elem) != elem:
                return False
            mapping[elem] = target
            reverse[target] = elem

    elems_a = [e for e in (*a.net.places, *a.net.transitions) if e not in mapping]
    by_color: dict[object, list[str]] = {}
    for e in (*b.net.places, *b.net.transitions):
        by_color.setdefault(colors_b[e], []).append(e)
    # forced pairs must agree on color
    for x, y in mapping.items():
        if colors_a[x] != colors_b[y]:
            return False
    elems_a.sort(key=lambda e: (len(by_color.get(colors_a[e], ())), str(colors_a[e])))

    def consistent(x: str, y: str) -> bool:
        if colors_a[x] != colors_b[y]:
            return False
        if x in a.net.places:
            if a.initial[x] != b.initial[y]:
                return False
            for t, u in mapping.items():
                if t in a.net.transitions:
                    if a.net.pre_of(t)[x] != b.net.pre_of(u)[y]:
                        return False
                    if a.net.post_of(t)[x] != b.net.post_of(u)[y]:
                        return False
        else:
            for p, q in mapping.items():
                if p in a.net.places:
                    if a.net.pre_of(x)[p] != b.net.pre_of(y)[q]:
                        return False
                    if a.net.post_of(x)[p] != b.net.post_of(y)[q]:
                        return False
        return True

    def search(i: int) -> bool:
        if i == len(elems_a):
            return True
        x = elems_a[i]
        for y in by_color.get(colors_a[x], ()):
            if y in reverse or not consistent(x, y):
                continue
            mapping[x] = y
            reverse[y] = x
            if search(i + 1):
                return True
            del mapping[x]
            del reverse[y]
        return False

    # validate forced assignments against each other before searching
    for x in list(mapping):
        if not consistent(x, mapping[x]):
            return False
    return search(0)


def _initial_color(m: Module, elem: str) -> tuple:
    faces = []
    for side, face in (("L", m.left), ("R", m.right)):
        for label, e in face.entries:
            if e == elem:
                faces.append((side, label))
    if elem in m.net.places:
        return ("place", m.initial[elem], tuple(sorted(faces)))
    return ("trans", 0, tuple(sorted(faces)))


def _joint_colors(a: Module, b: Module) -> tuple[dict[str, int], dict[str, int]]:
    """Color refinement run jointly over both modules.

    Colors are canonicalized through one shared table each round, so an
    integer color means the same thing in both modules. Refinement only
    splits classes, hence stabilizes once the class count stops growing.
    """
    tagged = [("a", a, e) for e in (*a.net.places, *a.net.transitions)]
    tagged += [("b", b, e) for e in (*b.net.places, *b.net.transitions)]
    table: dict[tuple, int] = {}
    color: dict[tuple[str, str], int] = {}
    for tag, m, e in tagged:
        key = _initial_color(m, e)
        color[(tag, e)] = table.setdefault(key, len(table))
    while True:
        table = {}
        new: dict[tuple[str, str], int] = {}
        for tag, m, e in tagged:
            net = m.net
            env = []
            if e in net.places:
                for t in net.transitions:
                    w_in = net.pre_of(t)[e]
                    w_out = net.post_of(t)[e]
                    if w_in or w_out:
                        env.append((w_in, w_out, color[(tag, t)]))
            else:
                for p in net.places:
                    w_in = net.pre_of(e)[p]
                    w_out = net.post_of(e)[p]
                    if w_in or w_out:
                        env.append((w_in, w_out, color[(tag, p)]))
            key = (color[(tag, e)], tuple(sorted(env)))
            new[(tag, e)] = table.setdefault(key, len(table))
        if len(set(new.values())) == len(set(color.values())):
            color = new
            break
        color = new
    out_a = {e: color[("a", e)] for e in (*a.net.places, *a.net.transitions)}
    out_b = {e: color[("b", e)] for e in (*b.net.places, *b.net.transitions)}
    return out_a, out_b
