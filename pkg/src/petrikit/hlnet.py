"""Predicate/transition nets over finite universes.

Places denote predicates and hold individual tokens; arcs carry term
inscriptions over a transition's variables. A set-sorted term never
travels as one token: wrapped in elm(...) it contributes every member
of its set value separately, which is what repairs the classic mistake
of putting a whole set on an arc.

High-level markings are multisets of (place, value) pairs; that
representation is also the canonical bijection to the marking of the
expanded elementary net, whose places are (place, value) pairs and
whose transitions are (transition, mode) pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .errors import CapacityError, EnablingError, SortError, StructuralError
from .multiset import Multiset
from .net import Marking, Net

Value = Union[str, frozenset]


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Const:
    """A declared symbol: a universe element or a universe name (its full set)."""

    symbol: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    func: str
    arg: "Term"


@dataclass(frozen=True)
class SetLit:
    items: tuple["Term", ...]


@dataclass(frozen=True)
class Elm:
    """Inscription operator spreading a set value into its elements."""

    arg: "Term"


Term = Union[Const, Var, App, SetLit, Elm]


# ---------------------------------------------------------------------------
# universes and interpretations


@dataclass(frozen=True)
class Universe:
    name: str
    elements: tuple[str, ...]

    def __post_init__(self):
        if not self.elements:
            raise StructuralError(f"universe {self.name!r} must not be empty")
        if len(set(self.elements)) != len(self.elements):
            raise StructuralError(f"universe {self.name!r} has duplicate elements")


@dataclass(frozen=True)
class FunctionDef:
    """A unary function symbol with an explicit finite graph."""

    name: str
    domain: str
    codomain: str
    set_valued: bool
    mapping: Mapping[str, Value]


@dataclass(frozen=True)
class Interpretation:
    """Universes plus interpreted function symbols.

    Every universe name doubles as a constant denoting its full element
    set, and every element name denotes itself; element names must
    therefore be unique across universes.
    """

    universes: tuple[Universe, ...]
    functions: Mapping[str, FunctionDef] = field(default_factory=dict)

    def __post_init__(self):
        names = [u.name for u in self.universes]
        if len(set(names)) != len(names):
            raise StructuralError("duplicate universe name")
        seen: dict[str, str] = {}
        for u in self.universes:
            for e in u.elements:
                if e in seen:
                    raise StructuralError(
                        f"element {e!r} declared in both {seen[e]!r} and {u.name!r}"
                    )
                if e in names:
                    raise StructuralError(f"{e!r} is both a universe name and an element")
                seen[e] = u.name
        for f in self.functions.values():
            dom = self.universe(f.domain)
            cod = self.universe(f.codomain)
            for e in dom.elements:
                if e not in f.mapping:
                    raise StructuralError(f"function {f.name!r} undefined on {e!r}")
                v = f.mapping[e]
                if f.set_valued:
                    if not isinstance(v, frozenset) or not v <= set(cod.elements):
                        raise StructuralError(
                            f"function {f.name!r}({e!r}) must be a subset of {f.codomain!r}"
                        )
                elif v not in cod.elements:
                    raise StructuralError(
                        f"function {f.name!r}({e!r}) must be an element of {f.codomain!r}"
                    )

    def universe(self, name: str) -> Universe:
        for u in self.universes:
            if u.name == name:
                return u
        raise StructuralError(f"unknown universe {name!r}")

    def universe_of_element(self, value: str) -> str | None:
        for u in self.universes:
            if value in u.elements:
                return u.name
        return None

    def constant(self, symbol: str) -> Value:
        for u in self.universes:
            if symbol == u.name:
                return frozenset(u.elements)
            if symbol in u.elements:
                return symbol
        raise SortError(f"unknown constant {symbol!r}")

    def element_key(self, value: str) -> tuple[int, int]:
        """Global ordering key: universe declaration order, then element order."""
        for i, u in enumerate(self.universes):
            if value in u.elements:
                return (i, u.elements.index(value))
        raise SortError(f"value {value!r} belongs to no universe")

    def value_key(self, value: Value):
        if isinstance(value, frozenset):
            return (1, tuple(sorted(self.element_key(v) for v in value)))
        return (0, self.element_key(value))


def render_value(value: Value, interp: Interpretation) -> str:
    if isinstance(value, frozenset):
        members = sorted(value, key=interp.element_key)
        return "{" + ",".join(members) + "}"
    return value


# ---------------------------------------------------------------------------
# net structure


@dataclass(frozen=True)
class VarDecl:
    """An element-sorted variable, or a set-sorted one with an explicit range."""

    name: str
    universe: str
    set_sorted: bool = False
    values: tuple[Value, ...] | None = None  # explicit range for set variables


@dataclass(frozen=True)
class HLPlace:
    name: str
    universe: str
    initial: tuple[Term, ...] = ()


@dataclass(frozen=True)
class HLTransition:
    name: str
    variables: tuple[VarDecl, ...] = ()
    pre: Mapping[str, tuple[Term, ...]] = field(default_factory=dict)
    post: Mapping[str, tuple[Term, ...]] = field(default_factory=dict)

    def variable(self, name: str) -> VarDecl:
        for v in self.variables:
            if v.name == name:
                return v
        raise SortError(f"transition {self.name!r} has no variable {name!r}")


@dataclass(frozen=True)
class HLNet:
    name: str
    places: tuple[HLPlace, ...]
    transitions: tuple[HLTransition, ...]

    def place(self, name: str) -> HLPlace:
        for p in self.places:
            if p.name == name:
                return p
        raise StructuralError(f"unknown place {name!r}")

    def transition(self, name: str) -> HLTransition:
        for t in self.transitions:
            if t.name == name:
                return t
        raise StructuralError(f"unknown transition {name!r}")


@dataclass(frozen=True)
class Mode:
    """A valuation of a transition's variables, in declaration order."""

    assignment: tuple[tuple[str, Value], ...]

    @property
    def mapping(self) -> dict[str, Value]:
        return dict(self.assignment)

    def value(self, var: str) -> Value:
        for name, v in self.assignment:
            if name == var:
                return v
        raise SortError(f"mode binds no variable {var!r}")


HLMarking = Multiset  # multiset over (place name, Value) pairs


# ---------------------------------------------------------------------------
# sorts


def infer_sort(
    term: Term, interp: Interpretation, variables: Mapping[str, VarDecl]
) -> tuple[str, str | None]:
    """Sort of a value-denoting term: ('elem'|'set', universe name).

    The empty set literal is polymorphic and reports universe None.
    elm(...) denotes no single value and is rejected here.
    """
    if isinstance(term, Const):
        for u in interp.universes:
            if term.symbol == u.name:
                return ("set", u.name)
        home = interp.universe_of_element(term.symbol)
        if home is None:
            raise SortError(f"unknown symbol {term.symbol!r}")
        return ("elem", home)
    if isinstance(term, Var):
        decl = variables.get(term.name)
        if decl is None:
            raise SortError(f"unbound variable {term.name!r}")
        return ("set" if decl.set_sorted else "elem", decl.universe)
    if isinstance(term, App):
        f = interp.functions.get(term.func)
        if f is None:
            raise SortError(f"unknown function {term.func!r}")
        arg_sort = infer_sort(term.arg, interp, variables)
        if arg_sort != ("elem", f.domain):
            raise SortError(
                f"{term.func!r} expects an element of {f.domain!r}, got {arg_sort}"
            )
        return ("set" if f.set_valued else "elem", f.codomain)
    if isinstance(term, SetLit):
        universes = set()
        for item in term.items:
            s = infer_sort(item, interp, variables)
            if s[0] != "elem":
                raise SortError("set literal members must be element-sorted")
            universes.add(s[1])
        if len(universes) > 1:
            raise SortError(f"set literal mixes universes {sorted(universes)}")
        return ("set", universes.pop() if universes else None)
    if isinstance(term, Elm):
        raise SortError("elm(...) may only appear at the top of an inscription")
    raise SortError(f"not a term: {term!r}")


def check_inscription(
    terms: Sequence[Term],
    universe: str,
    interp: Interpretation,
    variables: Mapping[str, VarDecl],
    context: str,
):
    """Every bare term must be an element of `universe`; every elm argument
    a set over it."""
    for term in terms:
        if isinstance(term, Elm):
            sort = infer_sort(term.arg, interp, variables)
            if sort[0] != "set" or sort[1] not in (None, universe):
                raise SortError(f"{context}: elm argument must be a set over {universe!r}")
        else:
            sort = infer_sort(term, interp, variables)
            if sort != ("elem", universe):
                raise SortError(
                    f"{context}: term must denote an element of {universe!r}, got {sort}"
                )


def validate_hlnet(net: HLNet, interp: Interpretation):
    """Static well-formedness: sorts, variable usage, ranges, groundness."""
    place_names = [p.name for p in net.places]
    if len(set(place_names)) != len(place_names):
        raise StructuralError("duplicate high-level place")
    trans_names = [t.name for t in net.transitions]
    if len(set(trans_names)) != len(trans_names):
        raise StructuralError("duplicate high-level transition")
    for p in net.places:
        interp.universe(p.universe)
        check_inscription(p.initial, p.universe, interp, {}, f"initial of {p.name!r}")
    for t in net.transitions:
        var_names = [v.name for v in t.variables]
        if len(set(var_names)) != len(var_names):
            raise StructuralError(f"transition {t.name!r} declares a variable twice")
        variables = {v.name: v for v in t.variables}
        for v in t.variables:
            universe = interp.universe(v.universe)
            if v.set_sorted:
                if not v.values:
                    raise StructuralError(
                        f"set variable {v.name!r} needs an explicit nonempty range"
                    )
                for val in v.values:
                    if not isinstance(val, frozenset) or not val <= set(universe.elements):
                        raise StructuralError(
                            f"range of {v.name!r} must contain subsets of {v.universe!r}"
                        )
            elif v.values is not None:
                raise StructuralError(f"element variable {v.name!r} cannot carry a range")
        for table, side in ((t.pre, "pre"), (t.post, "post")):
            for place_name, terms in table.items():
                place = net.place(place_name)
                check_inscription(
                    terms, place.universe, interp, variables,
                    f"{side} inscription of {t.name!r} at {place_name!r}",
                )


# ---------------------------------------------------------------------------
# evaluation


def eval_term(term: Term, mode: Mode, interp: Interpretation) -> Value:
    if isinstance(term, Const):
        return interp.constant(term.symbol)
    if isinstance(term, Var):
        return mode.value(term.name)
    if isinstance(term, App):
        f = interp.functions.get(term.func)
        if f is None:
            raise SortError(f"unknown function {term.func!r}")
        arg = eval_term(term.arg, mode, interp)
        if isinstance(arg, frozenset) or arg not in f.mapping:
            raise SortError(f"{term.func!r} is undefined on {arg!r}")
        return f.mapping[arg]
    if isinstance(term, SetLit):
        members = []
        for item in term.items:
            v = eval_term(item, mode, interp)
            if isinstance(v, frozenset):
                raise SortError("set literal members must be elements")
            members.append(v)
        return frozenset(members)
    if isinstance(term, Elm):
        raise SortError("elm(...) denotes no single value")
    raise SortError(f"not a term: {term!r}")


def eval_inscription(
    ins: Sequence[Term], mode: Mode, interp: Interpretation
) -> Multiset:
    """Multiset of values: plain terms contribute one token, elm(t) one
    token per member of t's set value."""
    out: list[Value] = []
    for term in ins:
        if isinstance(term, Elm):
            v = eval_term(term.arg, mode, interp)
            if not isinstance(v, frozenset):
                raise SortError(f"elm applied to non-set value {v!r}")
            out.extend(sorted(v, key=interp.element_key))
        else:
            out.append(eval_term(term, mode, interp))
    return Multiset(out)


def initial_marking(net: HLNet, interp: Interpretation) -> HLMarking:
    """Evaluate every place's initial inscription; tokens are (place, value)."""
    empty = Mode(())
    pairs: list[tuple[str, Value]] = []
    for p in net.places:
        for value, n in eval_inscription(p.initial, empty, interp).items():
            pairs.extend([(p.name, value)] * n)
    return Multiset(pairs)


def place_tokens(m: HLMarking, place: str) -> Multiset:
    """Tokens of one place within a high-level marking."""
    return Multiset({v: n for (p, v), n in m.items() if p == place})


def _demand(table: Mapping[str, tuple[Term, ...]], mode: Mode, interp: Interpretation) -> Multiset:
    pairs: dict[tuple[str, Value], int] = {}
    for place, terms in table.items():
        for value, n in eval_inscription(terms, mode, interp).items():
            pairs[(place, value)] = pairs.get((place, value), 0) + n
    return Multiset(pairs)


def hl_enabled(
    net: HLNet, interp: Interpretation, m: HLMarking, t: str, mode: Mode
) -> bool:
    """True iff every input place holds the evaluated input inscription."""
    return _demand(net.transition(t).pre, mode, interp) <= m


def hl_fire(
    net: HLNet, interp: Interpretation, m: HLMarking, t: str, mode: Mode
) -> HLMarking:
    """Subtract evaluated input inscriptions, add evaluated output ones."""
    trans = net.transition(t)
    need = _demand(trans.pre, mode, interp)
    if not need <= m:
        missing = need.deficiencies(m)
        raise EnablingError(
            f"transition {t!r} not enabled in this mode: missing {sorted(map(str, missing))}",
            transition=t,
        )
    return m - need + _demand(trans.post, mode, interp)


def all_modes(net: HLNet, interp: Interpretation, t: str) -> list[Mode]:
    """Every valuation of t's variables, lexicographic in declaration order."""
    trans = net.transition(t)
    ranges: list[list[Value]] = []
    for v in trans.variables:
        if v.set_sorted:
            ranges.append(list(v.values or ()))
        else:
            ranges.append(list(interp.universe(v.universe).elements))
    names = [v.name for v in trans.variables]
    return [
        Mode(tuple(zip(names, combo)))
        for combo in itertools.product(*ranges)
    ]


def hl_modes(
    net: HLNet, interp: Interpretation, m: HLMarking, t: str, cap: int
) -> tuple[list[Mode], bool]:
    """Enabled modes in lexicographic order, truncated at cap with a flag."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    enabled: list[Mode] = []
    truncated = False
    for mode in all_modes(net, interp, t):
        if hl_enabled(net, interp, m, t, mode):
            if len(enabled) < cap:
                enabled.append(mode)
            else:
                truncated = True
                break
    return enabled, truncated


# ---------------------------------------------------------------------------
# expansion to an elementary net


@dataclass(frozen=True)
class Expansion:
    """Elementary image of a high-level net plus the marking bijection."""

    net: Net
    initial: Marking
    place_ids: Mapping[tuple[str, Value], str]
    transition_ids: Mapping[tuple[str, Mode], str]

    def to_marking(self, hlm: HLMarking) -> Marking:
        return Multiset({self.place_ids[pair]: n for pair, n in hlm.items()})

    def to_hl_marking(self, m: Marking) -> HLMarking:
        reverse = {pid: pair for pair, pid in self.place_ids.items()}
        return Multiset({reverse[p]: n for p, n in m.items()})


def mode_id(mode: Mode, interp: Interpretation) -> str:
    return ",".join(render_value(v, interp) for _, v in mode.assignment)


def expand(net: HLNet, interp: Interpretation, cap: int = 100_000) -> Expansion:
    """Elementary net with (place, value) places and (transition, mode)
    transitions; arc multiplicities come from evaluated inscriptions.

    Raises CapacityError when the expansion would exceed `cap` nodes.
    """
    validate_hlnet(net, interp)
    place_ids: dict[tuple[str, Value], str] = {}
    places: list[str] = []
    for p in net.places:
        for v in interp.universe(p.universe).elements:
            pid = f"{p.name}({v})"
            place_ids[(p.name, v)] = pid
            places.append(pid)
    modes_per_trans = [(t, all_modes(net, interp, t.name)) for t in net.transitions]
    total = len(places) + sum(len(ms) for _, ms in modes_per_trans)
    if total > cap:
        raise CapacityError(
            f"expansion needs {total} nodes, more than the cap of {cap}"
        )
    transition_ids: dict[tuple[str, Mode], str] = {}
    transitions: list[str] = []
    pre: dict[str, Multiset] = {}
    post: dict[str, Multiset] = {}
    for t, modes in modes_per_trans:
        for mode in modes:
            tid = f"{t.name}({mode_id(mode, interp)})"
            transition_ids[(t.name, mode)] = tid
            transitions.append(tid)
            pre[tid] = Multiset(
                {
                    place_ids[pair]: n
                    for pair, n in _demand(t.pre, mode, interp).items()
                }
            )
            post[tid] = Multiset(
                {
                    place_ids[pair]: n
                    for pair, n in _demand(t.post, mode, interp).items()
                }
            )
    elementary = Net(net.name, tuple(places), tuple(transitions), pre, post)
    expansion = Expansion(elementary, Multiset(), place_ids, transition_ids)
    initial = expansion.to_marking(initial_marking(net, interp))
    return Expansion(elementary, initial, place_ids, transition_ids)


# ---------------------------------------------------------------------------
# the dining philosophers family


def _subsets(elements: Sequence[str]) -> list[frozenset]:
    """Nonempty subsets, ordered by size then membership order."""
    out: list[frozenset] = []
    for size in range(1, len(elements) + 1):
        for combo in itertools.combinations(elements, size):
            out.append(frozenset(combo))
    return out


def dining(n: int, variant: str = "basic") -> tuple[HLNet, Interpretation]:
    """Round-table philosophers over explicit universes P and F.

    basic: each philosopher needs the left fork l(p_i)=f_i and the
    right fork r(p_i)=f_(i mod n)+1. shared-sets: each philosopher
    picks up and returns a personal fork set S(p). free-sets: the fork
    set is a set variable ranging over the nonempty subsets of F; a
    `taken` place keeps forks conserved. Initial inscriptions are
    elm(P) and elm(F).
    """
    if n < 2:
        raise ValueError("need at least two philosophers")
    if variant not in ("basic", "shared-sets", "free-sets"):
        raise ValueError(f"unknown variant {variant!r}")
    phils = tuple(f"p{i}" for i in range(1, n + 1))
    forks = tuple(f"f{i}" for i in range(1, n + 1))
    universes = (Universe("P", phils), Universe("F", forks))
    left = {f"p{i}": f"f{i}" for i in range(1, n + 1)}
    right = {f"p{i}": f"f{i % n + 1}" for i in range(1, n + 1)}
    functions: dict[str, FunctionDef] = {
        "l": FunctionDef("l", "P", "F", False, left),
        "r": FunctionDef("r", "P", "F", False, right),
    }
    if variant == "shared-sets":
        shared = {p: frozenset({left[p], right[p]}) for p in phils}
        functions["S"] = FunctionDef("S", "P", "F", True, shared)
    interp = Interpretation(universes, functions)

    places = [
        HLPlace("thinking", "P", (Elm(Const("P")),)),
        HLPlace("eating", "P"),
        HLPlace("forks", "F", (Elm(Const("F")),)),
    ]
    x = Var("x")
    if variant == "basic":
        grab: tuple[Term, ...] = (App("l", x), App("r", x))
        variables = (VarDecl("x", "P"),)
        pick_pre = {"thinking": (x,), "forks": grab}
        pick_post = {"eating": (x,)}
        ret_pre = {"eating": (x,)}
        ret_post = {"thinking": (x,), "forks": grab}
    elif variant == "shared-sets":
        grab = (Elm(App("S", x)),)
        variables = (VarDecl("x", "P"),)
        pick_pre = {"thinking": (x,), "forks": grab}
        pick_post = {"eating": (x,)}
        ret_pre = {"eating": (x,)}
        ret_post = {"thinking": (x,), "forks": grab}
    else:  # free-sets
        if n > 12:
            raise CapacityError(
                f"free-sets range would hold {2 ** n - 1} subsets; limit is n <= 12"
            )
        places.append(HLPlace("taken", "F"))
        subset_range = tuple(_subsets(forks))
        variables = (VarDecl("x", "P"), VarDecl("Y", "F", True, subset_range))
        y = Var("Y")
        pick_pre = {"thinking": (x,), "forks": (Elm(y),)}
        pick_post = {"eating": (x,), "taken": (Elm(y),)}
        ret_pre = {"eating": (x,), "taken": (Elm(y),)}
        ret_post = {"thinking": (x,), "forks": (Elm(y),)}

    transitions = (
        HLTransition("pick-up", variables, pick_pre, pick_post),
        HLTransition("return", variables, ret_pre, ret_post),
    )
    net = HLNet(f"dining-{n}-{variant}", tuple(places), transitions)
    validate_hlnet(net, interp)
    return net, interp
