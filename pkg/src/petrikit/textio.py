"""Line-oriented textual formats for nets, modules, steps, and
predicate/transition nets.

Identifiers are bare when they only use [A-Za-z0-9_.-]; anything else
is double-quoted with backslash escapes. `#` starts a comment.
Serialization emits declarations in stored order and is byte
reproducible.
"""

from __future__ import annotations

import itertools
import re
from typing import Sequence

from .composition import Interface, Module
from .errors import ParseError
from .hlnet import (
    App,
    Const,
    Elm,
    FunctionDef,
    HLNet,
    HLPlace,
    HLTransition,
    Interpretation,
    SetLit,
    Term,
    Universe,
    Value,
    Var,
    VarDecl,
    render_value,
    validate_hlnet,
)
from .multiset import Multiset
from .net import Marking, Net
from .runs import Run

_BARE = re.compile(r"[A-Za-z0-9_.\-]+")
_PUNCT = ("->", "<=", ",", "=", ":", "(", ")", "{", "}", "⊆")


def quote_id(name: str) -> str:
    if name and _BARE.fullmatch(name):
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _tokenize(line: str, filename: str | None, lineno: int) -> list[tuple[str, str]]:
    """Tokens as (kind, text); kind is 'id', 'qid', or 'punct'."""
    tokens: list[tuple[str, str]] = []
    i = 0
    while i < len(line):
        ch = line[i]
        if ch in " \t":
            i += 1
            continue
        if ch == "#":
            break
        if ch == '"':
            j = i + 1
            out = []
            while j < len(line):
                if line[j] == "\\" and j + 1 < len(line):
                    out.append(line[j + 1])
                    j += 2
                    continue
                if line[j] == '"':
                    break
                out.append(line[j])
                j += 1
            else:
                raise ParseError("unterminated quoted identifier", filename, lineno)
            tokens.append(("qid", "".join(out)))
            i = j + 1
            continue
        two = line[i:i + 2]
        if two in ("->", "<="):
            tokens.append(("punct", two))
            i += 2
            continue
        if ch in ",=:(){}⊆":
            tokens.append(("punct", "<=" if ch == "⊆" else ch))
            i += 1
            continue
        m = _BARE.match(line, i)
        if not m:
            raise ParseError(f"unexpected character {ch!r}", filename, lineno)
        tokens.append(("id", m.group()))
        i = m.end()
    return tokens


class _Lines:
    """Tokenized nonempty lines with 1-based numbers."""

    def __init__(self, text: str, filename: str | None):
        self.filename = filename
        self.rows: list[tuple[int, list[tuple[str, str]]]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            tokens = _tokenize(line, filename, lineno)
            if tokens:
                self.rows.append((lineno, tokens))

    def error(self, message: str, lineno: int | None = None) -> ParseError:
        return ParseError(message, self.filename, lineno)


class _TokenCursor:
    def __init__(self, tokens: list[tuple[str, str]], filename: str | None, lineno: int):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.lineno = lineno

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.filename, self.lineno)

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of line")
        self.pos += 1
        return tok

    def expect_punct(self, text: str):
        tok = self.next()
        if tok != ("punct", text):
            raise self.error(f"expected {text!r}, got {tok[1]!r}")

    def take_punct(self, text: str) -> bool:
        if self.peek() == ("punct", text):
            self.pos += 1
            return True
        return False

    def ident(self, what: str = "identifier") -> str:
        tok = self.next()
        if tok[0] == "punct":
            raise self.error(f"expected {what}, got {tok[1]!r}")
        return tok[1]

    def nat(self, what: str = "number") -> int:
        tok = self.next()
        if tok[0] != "id" or not tok[1].isdigit():
            raise self.error(f"expected {what}, got {tok[1]!r}")
        return int(tok[1])

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected trailing {tok[1]!r}")

    def id_list(self) -> list[str]:
        items = []
        if self.peek() is None:
            return items
        items.append(self.ident())
        while self.take_punct(","):
            items.append(self.ident())
        return items


# ---------------------------------------------------------------------------
# nets and modules


def parse_net(text: str, filename: str | None = None) -> tuple[Net, Marking]:
    net, marking, faces = _parse_net_body(text, filename)
    if faces:
        raise ParseError("interface lines are only allowed in module files", filename, faces[0][3])
    return net, marking


def parse_module(text: str, filename: str | None = None) -> Module:
    net, marking, faces = _parse_net_body(text, filename)
    left = tuple((label, elem) for side, label, elem, _ in faces if side == "left")
    right = tuple((label, elem) for side, label, elem, _ in faces if side == "right")
    return Module(net, marking, Interface(left), Interface(right))


def _parse_net_body(text: str, filename: str | None):
    lines = _Lines(text, filename)
    name = ""
    places: list[str] = []
    initial: dict[str, int] = {}
    transitions: list[str] = []
    pre: dict[str, Multiset] = {}
    post: dict[str, Multiset] = {}
    faces: list[tuple[str, str, str, int]] = []
    current: str | None = None
    saw_header = False
    for lineno, tokens in lines.rows:
        cur = _TokenCursor(tokens, filename, lineno)
        kind, head = cur.next()
        if kind == "qid":
            raise cur.error("line must start with a keyword")
        if head == "net":
            if saw_header:
                raise cur.error("duplicate net header")
            saw_header = True
            name = cur.ident("net name")
            cur.done()
        elif head == "place":
            place = cur.ident("place name")
            if place in places:
                raise cur.error(f"duplicate place {place!r}")
            places.append(place)
            if cur.peek() == ("id", "init"):
                cur.next()
                initial[place] = cur.nat("initial token count")
            cur.done()
        elif head == "trans":
            trans = cur.ident("transition name")
            if trans in transitions:
                raise cur.error(f"duplicate transition {trans!r}")
            transitions.append(trans)
            pre[trans] = Multiset()
            post[trans] = Multiset()
            current = trans
            cur.done()
        elif head in ("pre", "post"):
            if current is None:
                raise cur.error(f"{head!r} before any transition")
            table = pre if head == "pre" else post
            table[current] = table[current] + Multiset(cur.id_list())
            cur.done()
        elif head in ("left", "right"):
            label = cur.ident("interface label")
            cur.expect_punct("=")
            elem = cur.ident("element")
            cur.done()
            faces.append((head, label, elem, lineno))
        else:
            raise cur.error(f"unknown keyword {head!r}")
    try:
        net = Net(name, tuple(places), tuple(transitions), pre, post)
        marking = Multiset(initial)
        net.check_marking(marking)
    except Exception as exc:
        raise ParseError(str(exc), filename) from None
    return net, marking, faces


def serialize_net(net: Net, marking: Marking | None = None) -> str:
    out = [f"net {quote_id(net.name)}"]
    marking = marking if marking is not None else Multiset()
    for p in net.places:
        if marking[p]:
            out.append(f"place {quote_id(p)} init {marking[p]}")
        else:
            out.append(f"place {quote_id(p)}")
    for t in net.transitions:
        out.append(f"trans {quote_id(t)}")
        for side, table in (("pre", net.pre_of(t)), ("post", net.post_of(t))):
            if table.total():
                items = ", ".join(
                    quote_id(p) for p in net.places for _ in range(table[p])
                )
                out.append(f"  {side} {items}")
    return "\n".join(out) + "\n"


def serialize_module(module: Module) -> str:
    out = [serialize_net(module.net, module.initial).rstrip("\n")]
    for label, elem in module.left.entries:
        out.append(f"left {quote_id(label)} = {quote_id(elem)}")
    for label, elem in module.right.entries:
        out.append(f"right {quote_id(label)} = {quote_id(elem)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# step files


def parse_steps(text: str, filename: str | None = None) -> tuple[str, list[Run]]:
    lines = _Lines(text, filename)
    name = "steps"
    steps: list[Run] = []
    current: dict | None = None

    def finish():
        if current is None:
            return
        conds: list[str] = []
        labels: dict[str, str] = {}
        arcs: list[tuple[str, str]] = []
        for place in current["pre"]:
            cid = f"c{len(conds) + 1}"
            conds.append(cid)
            labels[cid] = place
            arcs.append((cid, "e1"))
        for place in current["post"]:
            cid = f"c{len(conds) + 1}"
            conds.append(cid)
            labels[cid] = place
            arcs.append(("e1", cid))
        steps.append(
            Run(tuple(conds), ("e1",), tuple(arcs), labels, {"e1": current["trans"]})
        )

    for lineno, tokens in lines.rows:
        cur = _TokenCursor(tokens, filename, lineno)
        kind, head = cur.next()
        if kind == "qid":
            raise cur.error("line must start with a keyword")
        if head == "steps":
            name = cur.ident("name")
            cur.done()
        elif head == "step":
            finish()
            current = {"trans": cur.ident("transition name"), "pre": [], "post": []}
            cur.done()
        elif head in ("pre", "post"):
            if current is None:
                raise cur.error(f"{head!r} before any step")
            current[head].extend(cur.id_list())
        else:
            raise cur.error(f"unknown keyword {head!r}")
    finish()
    return name, steps


def serialize_steps(name: str, steps: Sequence[Run]) -> str:
    out = [f"steps {quote_id(name)}"]
    for step in steps:
        event = step.events[0]
        out.append(f"step {quote_id(step.ev_label[event])}")
        for side, conds in (("pre", step.pre_conditions(event)), ("post", step.post_conditions(event))):
            if conds:
                items = ", ".join(quote_id(step.cond_label[c]) for c in conds)
                out.append(f"  {side} {items}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# high-level nets


def _parse_term(cur: _TokenCursor, variables: set[str]) -> Term:
    kind, text = cur.next()
    if kind == "punct" and text == "{":
        items: list[Term] = []
        if not cur.take_punct("}"):
            items.append(_parse_term(cur, variables))
            while cur.take_punct(","):
                items.append(_parse_term(cur, variables))
            cur.expect_punct("}")
        return SetLit(tuple(items))
    if kind == "punct":
        raise cur.error(f"unexpected {text!r} in term")
    if cur.take_punct("("):
        arg = _parse_term(cur, variables)
        cur.expect_punct(")")
        if text == "elm":
            return Elm(arg)
        return App(text, arg)
    if text in variables:
        return Var(text)
    return Const(text)


def _parse_term_list(cur: _TokenCursor, variables: set[str]) -> tuple[Term, ...]:
    terms = [_parse_term(cur, variables)]
    while cur.take_punct(","):
        terms.append(_parse_term(cur, variables))
    return tuple(terms)


def _parse_value(cur: _TokenCursor) -> Value:
    if cur.take_punct("{"):
        members: list[str] = []
        if not cur.take_punct("}"):
            members.append(cur.ident("element"))
            while cur.take_punct(","):
                members.append(cur.ident("element"))
            cur.expect_punct("}")
        return frozenset(members)
    return cur.ident("value")


def _all_nonempty_subsets(elements: Sequence[str]) -> tuple[frozenset, ...]:
    out = []
    for size in range(1, len(elements) + 1):
        for combo in itertools.combinations(elements, size):
            out.append(frozenset(combo))
    return tuple(out)


def parse_hlnet(text: str, filename: str | None = None) -> tuple[HLNet, Interpretation]:
    lines = _Lines(text, filename)
    name = "hlnet"
    universes: list[Universe] = []
    functions: dict[str, FunctionDef] = {}
    places: list[HLPlace] = []
    trans: list[dict] = []

    def universe_named(uname: str, cur: _TokenCursor) -> Universe:
        for u in universes:
            if u.name == uname:
                return u
        raise cur.error(f"unknown universe {uname!r}")

    for lineno, tokens in lines.rows:
        cur = _TokenCursor(tokens, filename, lineno)
        kind, head = cur.next()
        if kind == "qid":
            raise cur.error("line must start with a keyword")
        if head == "hlnet":
            name = cur.ident("name")
            cur.done()
        elif head == "universe":
            uname = cur.ident("universe name")
            cur.expect_punct("=")
            cur.expect_punct("{")
            elements = [cur.ident("element")]
            while cur.take_punct(","):
                elements.append(cur.ident("element"))
            cur.expect_punct("}")
            cur.done()
            universes.append(Universe(uname, tuple(elements)))
        elif head == "function":
            fname = cur.ident("function name")
            cur.expect_punct(":")
            domain = cur.ident("domain universe")
            cur.expect_punct("->")
            set_valued = cur.peek() == ("id", "set")
            if set_valued:
                cur.next()
            codomain = cur.ident("codomain universe")
            universe_named(domain, cur)
            universe_named(codomain, cur)
            cur.expect_punct("{")
            mapping: dict[str, Value] = {}
            if not cur.take_punct("}"):
                while True:
                    arg = cur.ident("argument")
                    cur.expect_punct("->")
                    mapping[arg] = _parse_value(cur)
                    if not cur.take_punct(","):
                        break
                cur.expect_punct("}")
            cur.done()
            functions[fname] = FunctionDef(fname, domain, codomain, set_valued, mapping)
        elif head == "hlplace":
            pname = cur.ident("place name")
            cur.expect_punct(":")
            universe = cur.ident("universe")
            universe_named(universe, cur)
            init: tuple[Term, ...] = ()
            if cur.peek() == ("id", "init"):
                cur.next()
                init = _parse_term_list(cur, set())
            cur.done()
            places.append(HLPlace(pname, universe, init))
        elif head == "hltrans":
            tname = cur.ident("transition name")
            variables: list[VarDecl] = []
            while cur.peek() is not None:
                tok = cur.next()
                if tok == ("id", "var"):
                    vname = cur.ident("variable")
                    cur.expect_punct(":")
                    universe = cur.ident("universe")
                    universe_named(universe, cur)
                    variables.append(VarDecl(vname, universe))
                elif tok == ("id", "setvar"):
                    vname = cur.ident("variable")
                    if cur.take_punct("<="):
                        universe = cur.ident("universe")
                        values = _all_nonempty_subsets(universe_named(universe, cur).elements)
                    elif cur.peek() == ("id", "in") and cur.next():
                        universe = cur.ident("universe")
                        cur.expect_punct("{")
                        vals: list[Value] = []
                        while True:
                            vals.append(_parse_value(cur))
                            if not cur.take_punct(","):
                                break
                        cur.expect_punct("}")
                        universe_named(universe, cur)
                        values = tuple(v if isinstance(v, frozenset) else frozenset((v,)) for v in vals)
                    else:
                        raise cur.error("setvar needs '<= U' or 'in U { ... }'")
                    variables.append(VarDecl(vname, universe, True, values))
                else:
                    raise cur.error(f"expected var/setvar, got {tok[1]!r}")
            trans.append({"name": tname, "vars": tuple(variables), "pre": {}, "post": {}})
        elif head in ("pre", "post"):
            if not trans:
                raise cur.error(f"{head!r} before any hltrans")
            pname = cur.ident("place name")
            cur.expect_punct(":")
            terms = _parse_term_list(cur, {v.name for v in trans[-1]["vars"]})
            cur.done()
            table = trans[-1][head]
            table[pname] = table.get(pname, ()) + terms
        else:
            raise cur.error(f"unknown keyword {head!r}")

    interp = Interpretation(tuple(universes), functions)
    hl = HLNet(
        name,
        tuple(places),
        tuple(
            HLTransition(t["name"], t["vars"], t["pre"], t["post"]) for t in trans
        ),
    )
    try:
        validate_hlnet(hl, interp)
    except Exception as exc:
        raise ParseError(str(exc), filename) from None
    return hl, interp


def parse_assignments(text: str, filename: str | None = None) -> list[tuple[str, Value]]:
    """Parse 'x=p1, Y={f1,f2}' into (variable, value) pairs."""
    tokens = _tokenize(text, filename, 1)
    cur = _TokenCursor(tokens, filename, 1)
    out: list[tuple[str, Value]] = []
    if cur.peek() is None:
        return out
    while True:
        var = cur.ident("variable")
        cur.expect_punct("=")
        out.append((var, _parse_value(cur)))
        if not cur.take_punct(","):
            break
    cur.done()
    return out


def render_term(term: Term) -> str:
    if isinstance(term, Const):
        return quote_id(term.symbol)
    if isinstance(term, Var):
        return quote_id(term.name)
    if isinstance(term, App):
        return f"{quote_id(term.func)}({render_term(term.arg)})"
    if isinstance(term, SetLit):
        return "{" + ", ".join(render_term(i) for i in term.items) + "}"
    if isinstance(term, Elm):
        return f"elm({render_term(term.arg)})"
    raise TypeError(f"not a term: {term!r}")


def serialize_hlnet(net: HLNet, interp: Interpretation) -> str:
    out = [f"hlnet {quote_id(net.name)}"]
    for u in interp.universes:
        out.append(f"universe {quote_id(u.name)} = {{{', '.join(map(quote_id, u.elements))}}}")
    for fname in interp.functions:
        f = interp.functions[fname]
        dom = interp.universe(f.domain)
        cod = "set " + quote_id(f.codomain) if f.set_valued else quote_id(f.codomain)
        entries = ", ".join(
            f"{quote_id(e)} -> {render_value(f.mapping[e], interp)}" for e in dom.elements
        )
        out.append(f"function {quote_id(fname)}: {quote_id(f.domain)} -> {cod} {{ {entries} }}")
    for p in net.places:
        line = f"hlplace {quote_id(p.name)}: {quote_id(p.universe)}"
        if p.initial:
            line += " init " + ", ".join(render_term(t) for t in p.initial)
        out.append(line)
    for t in net.transitions:
        line = f"hltrans {quote_id(t.name)}"
        for v in t.variables:
            if v.set_sorted:
                full = _all_nonempty_subsets(interp.universe(v.universe).elements)
                if v.values == full:
                    line += f" setvar {quote_id(v.name)} <= {quote_id(v.universe)}"
                else:
                    vals = ", ".join(render_value(val, interp) for val in v.values or ())
                    line += f" setvar {quote_id(v.name)} in {quote_id(v.universe)} {{{vals}}}"
            else:
                line += f" var {quote_id(v.name)}: {quote_id(v.universe)}"
        out.append(line)
        for side in ("pre", "post"):
            table = t.pre if side == "pre" else t.post
            for p in net.places:
                if p.name in table:
                    terms = ", ".join(render_term(term) for term in table[p.name])
                    out.append(f"  {side} {quote_id(p.name)}: {terms}")
    return "\n".join(out) + "\n"
