"""Deriving an elementary net from a set of local steps.

Each step is a single-event run; merging all occurrences of a condition
label into one place yields a net whose runs are exactly the step
compositions.
"""

from __future__ import annotations

from typing import Sequence

from .composition import compose_runs, marking_run
from .errors import SynthesisError
from .multiset import Multiset
from .net import Marking, Net
from .runs import Run, is_valid_run


def synthesize(steps: Sequence[Run], name: str = "synthesized") -> Net:
    """Merge equally labeled conditions across single-event steps.

    Places are the distinct condition labels in order of first
    appearance; each step contributes one transition whose pre/post
    multisets are the label multisets of its boundary conditions.
    """
    places: list[str] = []
    seen_places: set[str] = set()
    transitions: list[str] = []
    pre: dict[str, Multiset] = {}
    post: dict[str, Multiset] = {}
    for i, step in enumerate(steps):
        if len(step.events) != 1:
            raise SynthesisError(f"step {i} has {len(step.events)} events, expected exactly 1")
        event = step.events[0]
        t = step.ev_label[event]
        if t in pre:
            raise SynthesisError(f"duplicate transition label {t!r} across steps")
        transitions.append(t)
        pre[t] = Multiset(step.cond_label[c] for c in step.pre_conditions(event))
        post[t] = Multiset(step.cond_label[c] for c in step.post_conditions(event))
        for c in step.conditions:
            label = step.cond_label[c]
            if label not in seen_places:
                seen_places.add(label)
                places.append(label)
    return Net(name, tuple(places), tuple(transitions), pre, post)


def runs_round_trip(steps: Sequence[Run], seq: Sequence[str], m0: Marking) -> bool:
    """Check that chaining the named steps yields a valid run of the
    synthesized net from m0.

    The chain starts from the event-free run spelling out m0, so an
    empty sequence is trivially valid and a step whose preconditions
    are not yet offered leaves stray minimal conditions that fail the
    validity check.
    """
    net = synthesize(steps)
    by_label = {}
    for step in steps:
        by_label[step.ev_label[step.events[0]]] = step
    current = marking_run(net, m0)
    for t in seq:
        if t not in by_label:
            raise SynthesisError(f"sequence names unknown step {t!r}")
        current = compose_runs(current, by_label[t])
    return is_valid_run(net, m0, current)
