import random

import pytest

from petrikit.errors import EnablingError, ReversalError, StructuralError
from petrikit.multiset import Multiset
from petrikit.net import (
    Net,
    build_net,
    enabled,
    fire,
    fire_sequence,
    marking_graph,
    unfire,
)


def test_net_rejects_undeclared_place_in_arcs():
    with pytest.raises(StructuralError):
        build_net("bad", ["p"], [("t", ["ghost"], [])])


def test_net_rejects_shared_place_transition_ids():
    with pytest.raises(StructuralError):
        build_net("bad", ["x"], [("x", [], [])])


def test_net_rejects_duplicate_declarations():
    with pytest.raises(StructuralError):
        Net("bad", ("p", "p"), (), {}, {})


def test_unknown_transition_is_structural_error(lightfan_net):
    net, m0 = lightfan_net
    with pytest.raises(StructuralError):
        enabled(net, m0, "no-such-transition")


# --- enabling --------------------------------------------------------------


def test_lightfan_turn_on_enabled_at_start(lightfan_net):
    net, m0 = lightfan_net
    assert enabled(net, m0, "turn-light-on")


def test_lightfan_fan_needs_light_on(lightfan_net):
    net, m0 = lightfan_net
    assert not enabled(net, m0, "fan-starts")


def test_empty_preset_always_enabled():
    net = build_net("source", ["p"], [("spawn", [], ["p"])])
    assert enabled(net, Multiset(), "spawn")


# --- firing ----------------------------------------------------------------


def test_bakery_bake_moves_token(bakery_net):
    net, m0 = bakery_net
    m1 = fire(net, m0, "bake")
    assert m1 == Multiset(["on-counter", "aide-free", "shop-empty"])


def test_fire_with_equal_pre_post_is_identity():
    net = build_net("idle", ["p"], [("noop", ["p"], ["p"])])
    m = Multiset(["p"])
    assert fire(net, m, "noop") == m


def test_four_seasons_first_step(seasons_net):
    net, m0 = seasons_net
    assert fire(net, m0, "t1") == Multiset(["a2", "b1", "b4"])


def test_fire_disabled_reports_deficient_places(bakery_net):
    net, m0 = bakery_net
    with pytest.raises(EnablingError) as err:
        fire(net, m0, "sell")
    assert "bread-in-shop" in err.value.deficient


# --- unfiring --------------------------------------------------------------


def test_unfire_reverses_fire(bakery_net):
    net, m0 = bakery_net
    assert unfire(net, fire(net, m0, "bake"), "bake") == m0


def test_lightfan_unfire_fan_starts(lightfan_net):
    net, _ = lightfan_net
    m = Multiset(["light-on", "fan-on"])
    assert unfire(net, m, "fan-starts") == Multiset(["light-on", "fan-off"])


def test_unfire_without_postset_tokens_raises():
    net = build_net("gen", ["p"], [("make", [], ["p"])])
    with pytest.raises(ReversalError):
        unfire(net, Multiset(), "make")


# --- sequences -------------------------------------------------------------


def test_bakery_cycle_returns_to_start(bakery_net):
    net, m0 = bakery_net
    trace = fire_sequence(net, m0, ["bake", "supply-to-aide", "move-to-shop", "sell"])
    assert len(trace) == 5
    assert trace[-1] == m0
    assert enabled(net, trace[-1], "bake")


def test_empty_sequence_gives_initial_marking(bakery_net):
    net, m0 = bakery_net
    assert fire_sequence(net, m0, []) == [m0]


def test_four_seasons_round_returns_to_start(seasons_net):
    net, m0 = seasons_net
    trace = fire_sequence(net, m0, ["t1", "t2", "t3", "t4"])
    assert trace[-1] == m0


def test_fire_sequence_reports_failing_index(bakery_net):
    net, m0 = bakery_net
    with pytest.raises(EnablingError) as err:
        fire_sequence(net, m0, ["bake", "bake"])
    assert err.value.index == 1


# --- marking graphs --------------------------------------------------------


def test_four_seasons_graph_is_a_cycle(seasons_net):
    net, m0 = seasons_net
    g = marking_graph(net, m0, 100)
    assert len(g.nodes) == 4
    assert len(g.edges) == 4
    assert not g.truncated
    targets = {step.target for step in g.edges}
    assert targets == set(g.nodes)  # every node has an incoming edge: a cycle


def test_graph_of_transitionless_net():
    net = build_net("still", ["p"], [])
    g = marking_graph(net, Multiset(["p"]), 10)
    assert len(g.nodes) == 1
    assert len(g.edges) == 0
    assert not g.truncated


def test_lightfan_graph_has_four_states(lightfan_net):
    net, m0 = lightfan_net
    g = marking_graph(net, m0, 100)
    assert len(g.nodes) == 4
    lights = {"light-off", "light-on"}
    fans = {"fan-off", "fan-on"}
    combos = {(next(p for p in m if p in lights), next(p for p in m if p in fans)) for m in g.nodes}
    assert len(combos) == 4


def test_graph_cap_truncates_and_closure_is_cap_independent(bakery_net):
    net, m0 = bakery_net
    capped = marking_graph(net, m0, 2)
    assert capped.truncated
    assert len(capped.nodes) == 2
    full_a = marking_graph(net, m0, 50)
    full_b = marking_graph(net, m0, 5000)
    assert full_a.nodes == full_b.nodes
    assert full_a.edges == full_b.edges
    assert not full_a.truncated


def test_graph_edges_follow_fire(seasons_net):
    net, m0 = seasons_net
    g = marking_graph(net, m0, 100)
    for step in g.edges:
        assert fire(net, step.source, step.transition) == step.target


def _random_net(rng: random.Random, tag: int):
    num_p = rng.randint(1, 8)
    num_t = rng.randint(1, 6)
    places = [f"p{tag}_{i}" for i in range(num_p)]
    transitions = []
    for j in range(num_t):
        pre = [rng.choice(places) for _ in range(rng.randint(0, 3))]
        post = [rng.choice(places) for _ in range(rng.randint(0, 3))]
        transitions.append((f"t{tag}_{j}", pre, post))
    net = build_net(f"random{tag}", places, transitions)
    m0 = Multiset({p: rng.randint(0, 3) for p in places})
    return net, m0


def test_fire_unfire_round_trip_randomized():
    rng = random.Random(20260810)
    checked = 0
    for tag in range(200):
        net, m0 = _random_net(rng, tag)
        for t in net.transitions:
            if enabled(net, m0, t):
                assert unfire(net, fire(net, m0, t), t) == m0
                checked += 1
    assert checked > 100


def test_fire_never_negative_randomized():
    rng = random.Random(7)
    for tag in range(50):
        net, m0 = _random_net(rng, tag)
        for t in net.transitions:
            if enabled(net, m0, t):
                m1 = fire(net, m0, t)
                assert all(n >= 0 for n in m1.values())
