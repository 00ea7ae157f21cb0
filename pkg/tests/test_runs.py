import itertools

import pytest

from petrikit.composition import compose_runs, marking_run
from petrikit.errors import EnablingError, StructuralError
from petrikit.multiset import Multiset
from petrikit.net import build_net, fire_sequence
from petrikit.runs import (
    Run,
    causal_order,
    is_valid_run,
    linearizations,
    run_violations,
    step_run,
    unfold,
)

BAKERY_WEEK = ["bake", "supply-to-aide", "move-to-shop", "sell", "bake"]


def _brute_force_extensions(run):
    """Oracle: filter all event permutations by pairwise path search."""

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
        ok = all(
            position[e] < position[f]
            for e in run.events
            for f in run.events
            if e != f and reachable(e, f)
        )
        if ok:
            out.append(list(perm))
    return out


# --- step runs ---------------------------------------------------------------


def test_step_run_bake(bakery_net):
    net, _ = bakery_net
    r = step_run(net, "bake")
    assert len(r.events) == 1
    assert len(r.conditions) == 2
    assert r.minimal_marking() == Multiset(["ready-to-bake"])
    assert r.maximal_marking() == Multiset(["on-counter"])


def test_step_run_fan_starts_duplicates_self_loop_place(lightfan_net):
    net, _ = lightfan_net
    r = step_run(net, "fan-starts")
    assert len(r.events) == 1
    assert len(r.conditions) == 4
    labels = sorted(r.cond_label.values())
    assert labels == ["fan-off", "fan-on", "light-on", "light-on"]


def test_step_run_of_detached_transition():
    net = build_net("tick", ["p"], [("tock", [], [])])
    r = step_run(net, "tock")
    assert len(r.events) == 1
    assert len(r.conditions) == 0


def test_step_run_unknown_transition(bakery_net):
    net, _ = bakery_net
    with pytest.raises(StructuralError):
        step_run(net, "ghost")


# --- unfolding ---------------------------------------------------------------


def test_unfold_second_bake_is_independent_of_shop(bakery_net):
    net, m0 = bakery_net
    r = unfold(net, m0, BAKERY_WEEK)
    order = causal_order(r)
    bake2, move, sell, supply = "e5", "e3", "e4", "e2"
    assert order.leq(supply, bake2)
    assert not order.comparable(bake2, move)
    assert not order.comparable(bake2, sell)


def test_unfold_empty_sequence_spells_marking(bakery_net):
    net, m0 = bakery_net
    r = unfold(net, m0, [])
    assert r.events == ()
    assert r.minimal_marking() == m0
    assert r.maximal_marking() == m0


def test_unfold_four_seasons_inner_condition_unordered_with_t2(seasons_net):
    net, m0 = seasons_net
    r = unfold(net, m0, ["t1", "t2", "t3"])
    order = causal_order(r)
    b1_conditions = [c for c in r.conditions if r.cond_label[c] == "b1"]
    assert len(b1_conditions) == 1
    t2_event = next(e for e in r.events if r.ev_label[e] == "t2")
    assert not order.comparable(b1_conditions[0], t2_event)


def test_unfold_is_deterministic(bakery_net):
    net, m0 = bakery_net
    a = unfold(net, m0, BAKERY_WEEK)
    b = unfold(net, m0, BAKERY_WEEK)
    assert a == b


def test_unfold_infeasible_sequence_reports_index(bakery_net):
    net, m0 = bakery_net
    with pytest.raises(EnablingError) as err:
        unfold(net, m0, ["bake", "sell"])
    assert err.value.index == 1


def test_unfold_matches_chained_step_composition(lightfan_net):
    net, m0 = lightfan_net
    seq = ["turn-light-on", "fan-starts", "turn-light-off", "fan-stops"]
    unfolded = unfold(net, m0, seq)
    chained = marking_run(net, m0)
    for t in seq:
        chained = compose_runs(chained, step_run(net, t))
    assert unfolded == chained


# --- validity ----------------------------------------------------------------


def test_unfold_output_is_valid(bakery_net):
    net, m0 = bakery_net
    r = unfold(net, m0, BAKERY_WEEK)
    assert is_valid_run(net, m0, r)


def test_lightfan_full_cycle_run_is_valid(lightfan_net):
    net, m0 = lightfan_net
    r = unfold(net, m0, ["turn-light-on", "fan-starts", "turn-light-off", "fan-stops"])
    assert is_valid_run(net, m0, r)
    assert r.maximal_marking() == m0


def test_branching_condition_is_invalid(bakery_net):
    net, m0 = bakery_net
    r = Run(
        conditions=("c1", "c2", "c3"),
        events=("e1", "e2"),
        arcs=(("c1", "e1"), ("c1", "e2"), ("e1", "c2"), ("e2", "c3")),
        cond_label={"c1": "ready-to-bake", "c2": "on-counter", "c3": "on-counter"},
        ev_label={"e1": "bake", "e2": "bake"},
    )
    problems = run_violations(net, Multiset(["ready-to-bake"]), r)
    assert any("conflict" in p for p in problems)


def test_wrong_labels_are_reported(bakery_net):
    net, m0 = bakery_net
    r = Run(
        conditions=("c1", "c2"),
        events=("e1",),
        arcs=(("c1", "e1"), ("e1", "c2")),
        cond_label={"c1": "ready-to-bake", "c2": "shop-empty"},
        ev_label={"e1": "bake"},
    )
    problems = run_violations(net, Multiset(["ready-to-bake"]), r)
    assert any("post-condition labels" in p for p in problems)


def test_minimal_marking_mismatch_detected(bakery_net):
    net, _ = bakery_net
    r = step_run(net, "bake")
    assert not is_valid_run(net, Multiset(["on-counter"]), r)


def test_cyclic_arcs_detected(bakery_net):
    net, _ = bakery_net
    r = Run(
        conditions=("c1", "c2"),
        events=("e1",),
        arcs=(("c1", "e1"), ("e1", "c2"), ("c2", "e1")),
        cond_label={"c1": "ready-to-bake", "c2": "on-counter"},
        ev_label={"e1": "bake"},
    )
    assert any("cycl" in p for p in run_violations(net, None, r))


# --- causal order ------------------------------------------------------------


def test_step_run_order_chain(bakery_net):
    net, _ = bakery_net
    r = step_run(net, "bake")
    order = causal_order(r)
    assert order.leq("c1", "e1")
    assert order.leq("e1", "c2")
    assert order.leq("c1", "c2")
    assert not order.leq("c2", "c1")


def test_causal_order_is_partial_order(bakery_net):
    net, m0 = bakery_net
    r = unfold(net, m0, BAKERY_WEEK)
    order = causal_order(r)
    elements = order.elements
    for x in elements:
        assert order.leq(x, x)  # reflexive
    for x in elements:
        for y in elements:
            if order.leq(x, y) and order.leq(y, x):
                assert x == y  # antisymmetric
            for z in elements:
                if order.leq(x, y) and order.leq(y, z):
                    assert order.leq(x, z)  # transitive


def test_siblings_are_incomparable(bakery_net):
    net, _ = bakery_net
    r = step_run(net, "supply-to-aide")
    order = causal_order(r)
    posts = r.post_conditions("e1")
    assert len(posts) == 2
    assert not order.comparable(posts[0], posts[1])


def test_causal_order_rejects_cycles():
    r = Run(
        conditions=("c1",),
        events=("e1",),
        arcs=(("c1", "e1"), ("e1", "c1")),
        cond_label={"c1": "p"},
        ev_label={"e1": "t"},
    )
    with pytest.raises(StructuralError):
        causal_order(r)


# --- linearizations ----------------------------------------------------------


def test_bakery_week_has_three_interleavings(bakery_net):
    net, m0 = bakery_net
    r = unfold(net, m0, BAKERY_WEEK)
    seqs, truncated = linearizations(r, 100)
    assert not truncated
    assert len(seqs) == 3
    oracle = _brute_force_extensions(r)
    assert seqs == sorted(oracle, key=lambda s: [r.events.index(e) for e in s])
    assert len(oracle) == 3


def test_chain_run_has_single_linearization(bakery_net):
    net, m0 = bakery_net
    r = unfold(net, m0, ["bake", "supply-to-aide"])
    seqs, truncated = linearizations(r, 10)
    assert seqs == [["e1", "e2"]]
    assert not truncated


def test_two_independent_events_have_two_orders():
    net = build_net(
        "pair",
        ["p", "q"],
        [("left", ["p"], []), ("right", ["q"], [])],
    )
    r = unfold(net, Multiset(["p", "q"]), ["left", "right"])
    seqs, _ = linearizations(r, 10)
    assert seqs == [["e1", "e2"], ["e2", "e1"]]


def test_linearization_cap_truncates(bakery_net):
    net, m0 = bakery_net
    r = unfold(net, m0, BAKERY_WEEK)
    seqs, truncated = linearizations(r, 2)
    assert len(seqs) == 2
    assert truncated


def test_every_linearization_replays_to_same_marking(bakery_net):
    net, m0 = bakery_net
    r = unfold(net, m0, BAKERY_WEEK)
    seqs, _ = linearizations(r, 100)
    finals = set()
    for seq in seqs:
        labels = [r.ev_label[e] for e in seq]
        finals.add(fire_sequence(net, m0, labels)[-1])
    assert len(finals) == 1
    assert finals.pop() == fire_sequence(net, m0, BAKERY_WEEK)[-1]


def test_label_conservation(bakery_net):
    net, m0 = bakery_net
    r = unfold(net, m0, BAKERY_WEEK)
    final = fire_sequence(net, m0, BAKERY_WEEK)[-1]
    for p in net.places:
        minimal = sum(1 for c in r.minimal_conditions() if r.cond_label[c] == p)
        produced = sum(
            1 for e in r.events for c in r.post_conditions(e) if r.cond_label[c] == p
        )
        consumed = sum(
            1 for e in r.events for c in r.pre_conditions(e) if r.cond_label[c] == p
        )
        assert minimal + produced - consumed == final[p]
