"""Acceptance suite: one criterion per test, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` to see the report lines.
Every tolerance is exact: these are integer and structural statements.
"""

import io
import itertools
import random

import sympy

from petrikit.algebra import InvariantVector, place_invariants
from petrikit.cli import main as cli_main
from petrikit.composition import compose, compose_runs, marking_run, modules_isomorphic
from petrikit.concurrency import concurrency_structure, is_connected
from petrikit.examples import bakery, claim_settlement, light_fan, light_fan_steps, four_seasons
from petrikit.hlnet import dining, expand
from petrikit.multiset import Multiset
from petrikit.net import build_net, enabled, fire, fire_sequence, marking_graph, unfire
from petrikit.runs import causal_order, is_valid_run, linearizations, unfold
from petrikit.synthesis import synthesize

from test_composition import all_parenthesizations, random_modules
from test_hlnet import _hl_state_space


def _report(num: int, ok: bool, text: str):
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {text}")


def test_criterion_01_marking_equation_round_trip():
    ok = False
    try:
        rng = random.Random(1001)
        fired = 0
        for tag in range(200):
            num_p = rng.randint(1, 8)
            num_t = rng.randint(1, 6)
            places = [f"p{i}" for i in range(num_p)]
            transitions = []
            for j in range(num_t):
                pre = [rng.choice(places) for _ in range(rng.randint(0, 3))]
                post = [rng.choice(places) for _ in range(rng.randint(0, 3))]
                transitions.append((f"t{j}", pre, post))
            net = build_net(f"r{tag}", places, transitions)
            m0 = Multiset({p: rng.randint(0, 3) for p in places})
            for t in net.transitions:
                if enabled(net, m0, t):
                    assert unfire(net, fire(net, m0, t), t) == m0
                    fired += 1
        assert fired > 200
        ok = True
    finally:
        _report(1, ok, "unfire(fire(m,t),t) = m on 200 random nets, exact equality")


def test_criterion_02_bakery_cycle():
    ok = False
    try:
        net, m0 = bakery()
        trace = fire_sequence(net, m0, ["bake", "supply-to-aide", "move-to-shop", "sell"])
        assert trace[-1] == m0
        assert enabled(net, trace[-1], "bake")
        ok = True
    finally:
        _report(2, ok, "bakery sequence returns to M0 and M4 enables bake again")


def _brute_force_extensions(run):
    def reachable(src, dst, seen=None):
        if src == dst:
            return True
        seen = seen or set()
        for a, b in run.arcs:
            if a == src and b not in seen:
                seen.add(b)
                if reachable(b, dst, seen):
                    return True
        return False

    out = []
    for perm in itertools.permutations(run.events):
        position = {e: i for i, e in enumerate(perm)}
        if all(
            position[e] < position[f]
            for e in run.events
            for f in run.events
            if e != f and reachable(e, f)
        ):
            out.append([*perm])
    return out


def test_criterion_03_partial_order_of_second_bake():
    ok = False
    try:
        net, m0 = bakery()
        run = unfold(net, m0, ["bake", "supply-to-aide", "move-to-shop", "sell", "bake"])
        order = causal_order(run)
        supply, move, sell, bake2 = "e2", "e3", "e4", "e5"
        assert order.leq(supply, bake2)
        assert not order.comparable(bake2, move)
        assert not order.comparable(bake2, sell)
        seqs, truncated = linearizations(run, 1000)
        assert not truncated
        assert len(seqs) == 3
        oracle = _brute_force_extensions(run)
        assert len(oracle) == 3
        assert sorted(map(tuple, seqs)) == sorted(map(tuple, oracle))
        ok = True
    finally:
        _report(3, ok, "second bake unordered with move/sell; exactly 3 interleavings")


def test_criterion_04_four_seasons_concurrency():
    ok = False
    try:
        net, m0 = four_seasons()
        structures = {
            k: concurrency_structure(net, unfold(net, m0, ["t1", "t2", "t3", "t4"] * k))
            for k in (2, 3, 4)
        }
        assert is_connected(structures[3])
        assert len(structures[3].nodes) == 12
        assert structures[2].links == structures[3].links == structures[4].links
        assert is_connected(structures[2]) and is_connected(structures[4])
        ok = True
    finally:
        _report(4, ok, "four-seasons structure connected, verdict stable over 2/3/4 rounds")


def _in_span(basis, target) -> bool:
    if not basis:
        return all(x == 0 for x in target)
    m = sympy.Matrix([list(v) for v in basis]).T
    return m.rank() == m.row_join(sympy.Matrix(list(target))).rank()


def test_criterion_05_invariants():
    ok = False
    try:
        net, _ = light_fan()
        basis = [v.coeffs for v in place_invariants(net)]
        light = (1, 1, 0, 0)
        fan = (0, 0, 1, 1)
        assert len(basis) == 2
        assert _in_span(basis, light) and _in_span(basis, fan)
        assert _in_span([light, fan], basis[0]) and _in_span([light, fan], basis[1])

        rng = random.Random(1005)
        for n in (3, 4, 5):
            hl, interp = dining(n, "basic")
            expansion = expand(hl, interp)
            weights = {}
            for (place, _value), pid in expansion.place_ids.items():
                if place == "eating":
                    weights[pid] = 2
                elif place == "forks":
                    weights[pid] = 1
            coeffs = tuple(weights.get(p, 0) for p in expansion.net.places)
            exp_basis = [v.coeffs for v in place_invariants(expansion.net)]
            assert _in_span(exp_basis, coeffs)
            vec = InvariantVector(expansion.net.places, coeffs)
            assert vec.value(expansion.initial) == n
            for _ in range(100):
                m = expansion.initial
                trace = []
                for _ in range(rng.randint(0, 12)):
                    options = [t for t in expansion.net.transitions if enabled(expansion.net, m, t)]
                    if not options:
                        break
                    step = rng.choice(options)
                    trace.append(step)
                    m = fire(expansion.net, m, step)
                values = {vec.value(s) for s in fire_sequence(expansion.net, expansion.initial, trace)}
                assert values == {n}
        ok = True
    finally:
        _report(5, ok, "light/fan invariant span; 2*eating+forks constant n on dining(3..5)")


def test_criterion_06_composition_associativity():
    ok = False
    try:
        rng = random.Random(1006)
        for _ in range(300):
            a, b, c = random_modules(rng, 3)
            left_first = compose(compose(a, b), c)
            right_first = compose(a, compose(b, c))
            assert modules_isomorphic(left_first, right_first)
            for x, y in ((a, b), (b, c)):
                shared = [l for l in x.right.labels() if l in y.left]
                xy = compose(x, y)
                assert len(xy.left) == len(x.left) + len(y.left) - len(shared)
                assert len(xy.right) == len(x.right) + len(y.right) - len(shared)
        chain = claim_settlement()
        results = list(all_parenthesizations(chain))
        assert len(results) == 42
        for other in results[1:]:
            assert modules_isomorphic(results[0], other)
        ok = True
    finally:
        _report(6, ok, "300 random triples + claim chain associative; face arithmetic exact")


def test_criterion_07_light_fan_synthesis():
    ok = False
    try:
        steps = light_fan_steps()
        net = synthesize(steps, "light-fan")
        assert len(net.places) == 4
        assert len(net.transitions) == 4
        arcs = sum(net.pre_of(t).total() + net.post_of(t).total() for t in net.transitions)
        assert arcs == 12
        assert net.pre_of("fan-starts")["light-on"] == net.post_of("fan-starts")["light-on"] == 1
        assert net.pre_of("fan-stops")["light-off"] == net.post_of("fan-stops")["light-off"] == 1
        m0 = Multiset(["light-off", "fan-off"])
        by_label = {s.ev_label["e1"]: s for s in steps}
        for chain in (
            ["turn-light-on", "fan-starts", "turn-light-off", "fan-stops"],
            ["turn-light-on", "fan-starts", "turn-light-off", "turn-light-on"],
        ):
            run = marking_run(net, m0)
            for t in chain:
                run = compose_runs(run, by_label[t])
            assert is_valid_run(net, m0, run)
        graph = marking_graph(net, m0, 100)
        assert len(graph.nodes) == 4
        assert not graph.truncated
        ok = True
    finally:
        _report(7, ok, "synthesis: 4 places, 4 transitions, 12 arcs; chains valid; 4 states")


def test_criterion_08_hl_expansion_oracle():
    ok = False
    try:
        for n in (2, 3, 4, 5):
            hl, interp = dining(n, "basic")
            expansion = expand(hl, interp)
            hl_states, hl_edges = _hl_state_space(hl, interp)
            graph = marking_graph(expansion.net, expansion.initial, 100000)
            assert not graph.truncated
            assert len(graph.nodes) == len(hl_states)
            assert {expansion.to_marking(m) for m in hl_states} == set(graph.nodes)
            low_edges = {
                (expansion.to_marking(src), expansion.transition_ids[key], expansion.to_marking(dst))
                for src, key, dst in hl_edges
            }
            assert low_edges == {(s.source, s.transition, s.target) for s in graph.edges}
        ok = True
    finally:
        _report(8, ok, "dining(2..5): HL and expanded step relations isomorphic")


def test_criterion_09_hundred_philosophers():
    ok = False
    try:
        hl, interp = dining(100, "basic")
        expansion = expand(hl, interp)
        assert len(expansion.net.places) == 300
        assert len(expansion.net.transitions) == 200
        weights = {}
        for (place, _value), pid in expansion.place_ids.items():
            if place == "eating":
                weights[pid] = 2
            elif place == "forks":
                weights[pid] = 1
        vec = InvariantVector(
            expansion.net.places,
            tuple(weights.get(p, 0) for p in expansion.net.places),
        )
        seq = [f"pick-up(p{i})" for i in range(1, 100, 2)]
        assert len(seq) == 50
        trace = fire_sequence(expansion.net, expansion.initial, seq)
        for m in trace:
            assert vec.value(m) == 100
        eating = sum(trace[-1][p] for p in expansion.net.places if p.startswith("eating"))
        assert eating == 50
        ok = True
    finally:
        _report(9, ok, "dining(100): 300 places, 200 transitions, 50 eaters, invariant 100")


def _run_cli(*argv):
    out = io.StringIO()
    err = io.StringIO()
    code = cli_main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_criterion_10_cli_determinism(tmp_path, monkeypatch):
    ok = False
    try:
        monkeypatch.chdir(tmp_path)
        for name in ("bakery", "four-seasons", "light-fan", "producer-chain",
                     "claim-settlement", "coffee-house", "dining"):
            code, _, _ = _run_cli("examples", name, "--dir", str(tmp_path))
            assert code == 0
        goldens = [
            ("show", "bakery.net"),
            ("fire", "bakery.net", "--seq", "bake,supply-to-aide,move-to-shop,sell"),
            ("graph", "four-seasons.net"),
            ("graph", "light-fan.net", "--dot"),
            ("unfold", "bakery.net", "--seq", "bake,supply-to-aide,move-to-shop,sell,bake"),
            ("invariants", "four-seasons.net"),
            ("co", "four-seasons.net"),
            ("co", "four-seasons.net", "--dot"),
            ("linearize", "bakery.net", "--seq", "bake,supply-to-aide,move-to-shop,sell,bake"),
            ("compose", "producer.mod", "broker.mod", "client.mod"),
            ("compose", "claim-a.mod", "claim-b.mod", "claim-c.mod",
             "claim-d.mod", "claim-e.mod", "claim-f.mod"),
            ("compose", "guest.mod", "waiter.mod"),
            ("synthesize", "light-fan.steps", "--init", "light-off,fan-off"),
            ("hl", "modes", "dining-5-basic.hl", "--trans", "pick-up"),
            ("hl", "fire", "dining-5-basic.hl", "--trans", "pick-up", "--mode", "x=p1"),
            ("hl", "expand", "dining-5-basic.hl"),
        ]
        for argv in goldens:
            code_a, out_a, _ = _run_cli(*argv)
            code_b, out_b, _ = _run_cli(*argv)
            assert code_a == code_b == 0, argv
            assert out_a.encode() == out_b.encode(), argv

        # reorder declarations without changing relative place/trans order
        original = (tmp_path / "bakery.net").read_text(encoding="utf-8")
        lines = original.splitlines()
        header = [l for l in lines if l.startswith("net ")]
        place_lines = [l for l in lines if l.startswith("place ")]
        trans_blocks = []
        for i, line in enumerate(lines):
            if line.startswith("trans "):
                block = [line]
                for follow in lines[i + 1:]:
                    if follow.startswith(("  pre", "  post")):
                        block.append(follow)
                    else:
                        break
                trans_blocks.append(block)
        reordered = header + place_lines[:2]
        for i, block in enumerate(trans_blocks):
            reordered.extend(block)
            if i + 2 < len(place_lines):
                reordered.append(place_lines[i + 2])
        reordered.extend(place_lines[len(trans_blocks) + 2:])
        (tmp_path / "reordered.net").write_text("\n".join(reordered) + "\n", encoding="utf-8")
        for argv in goldens:
            if "bakery.net" not in argv:
                continue
            swapped = ["reordered.net" if a == "bakery.net" else a for a in argv]
            assert _run_cli(*argv)[1] == _run_cli(*swapped)[1], argv
        ok = True
    finally:
        _report(10, ok, "all CLI goldens byte-identical across runs and reorderings")
