"""Bundled example systems.

The bakery, the four seasons, and the light/fan system are the small
elementary nets every analysis here cuts its teeth on; the producer
chain, claim settlement, and coffee house exercise module composition;
the dining philosophers live in petrikit.hlnet. Figure-level layouts
are not reproduced anywhere: tests bind to behavioral properties only.
"""

from __future__ import annotations

from .composition import Module
from .hlnet import dining
from .multiset import Multiset
from .net import Marking, Net, build_net
from .runs import Run, step_run
from .textio import (
    parse_module,
    serialize_hlnet,
    serialize_module,
    serialize_net,
    serialize_steps,
)

EXAMPLE_NAMES = (
    "bakery",
    "four-seasons",
    "light-fan",
    "producer-chain",
    "claim-settlement",
    "coffee-house",
    "dining",
)


def bakery() -> tuple[Net, Marking]:
    """One baker, one aide, one shop counter; a strictly cyclic economy."""
    net = build_net(
        "bakery",
        [
            "ready-to-bake",
            "on-counter",
            "aide-free",
            "aide-has-bread",
            "shop-empty",
            "bread-in-shop",
        ],
        [
            ("bake", ["ready-to-bake"], ["on-counter"]),
            ("supply-to-aide", ["on-counter", "aide-free"], ["ready-to-bake", "aide-has-bread"]),
            ("move-to-shop", ["aide-has-bread", "shop-empty"], ["aide-free", "bread-in-shop"]),
            ("sell", ["bread-in-shop"], ["shop-empty"]),
        ],
    )
    return net, Multiset(["ready-to-bake", "aide-free", "shop-empty"])


def four_seasons() -> tuple[Net, Marking]:
    """Four transitions in a cycle; outer places chain them, inner places
    span two of them, which is what knits the concurrency structure
    together."""
    net = build_net(
        "four-seasons",
        ["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"],
        [
            ("t1", ["a1", "b3"], ["a2", "b1"]),
            ("t2", ["a2", "b4"], ["a3", "b2"]),
            ("t3", ["a3", "b1"], ["a4", "b3"]),
            ("t4", ["a4", "b2"], ["a1", "b4"]),
        ],
    )
    return net, Multiset(["a1", "b3", "b4"])


def light_fan() -> tuple[Net, Marking]:
    """Bathroom light and fan: the fan only starts while the light is on
    and only stops while it is off, hence the self-loops."""
    net = build_net(
        "light-fan",
        ["light-off", "light-on", "fan-off", "fan-on"],
        [
            ("turn-light-on", ["light-off"], ["light-on"]),
            ("turn-light-off", ["light-on"], ["light-off"]),
            ("fan-starts", ["light-on", "fan-off"], ["light-on", "fan-on"]),
            ("fan-stops", ["light-off", "fan-on"], ["light-off", "fan-off"]),
        ],
    )
    return net, Multiset(["light-off", "fan-off"])


def light_fan_steps() -> list[Run]:
    """The four local steps the light/fan net is synthesized from."""
    net, _ = light_fan()
    return [step_run(net, t) for t in net.transitions]


_PRODUCER = """\
net producer
place p-ready init 1
place p-waiting
place p-producing
place p-done
place out-draft
place in-redo
place in-accepted
place out-product
trans make-offer
  pre p-ready
  post p-waiting, out-draft
trans handle-redo
  pre p-waiting, in-redo
  post p-ready
trans start-production
  pre p-waiting, in-accepted
  post p-producing
trans ship
  pre p-producing
  post p-done, out-product
right draft = out-draft
right redo = in-redo
right accepted = in-accepted
right product = out-product
"""

_BROKER = """\
net broker
place b-idle init 1
place b-waiting
place b-done
place ch-draft
place ch-redo
place ch-accepted
place ch-product
place out-offer
place in-reject
place in-accept
trans forward-offer
  pre b-idle, ch-draft
  post b-waiting, out-offer
trans relay-reject
  pre b-waiting, in-reject
  post b-idle, ch-redo
trans relay-accept
  pre b-waiting, in-accept
  post b-done, ch-accepted
left draft = ch-draft
left redo = ch-redo
left accepted = ch-accepted
left product = ch-product
right offer = out-offer
right reject = in-reject
right accept = in-accept
right product = ch-product
"""

_CLIENT = """\
net client
place c-idle init 1
place c-deciding
place c-waiting
place c-served
place ch-offer
place ch-reject
place ch-accept
place ch-product
trans consider
  pre c-idle, ch-offer
  post c-deciding
trans reject-offer
  pre c-deciding
  post c-idle, ch-reject
trans accept-offer
  pre c-deciding
  post c-waiting, ch-accept
trans receive-product
  pre c-waiting, ch-product
  post c-served
left offer = ch-offer
left reject = ch-reject
left accept = ch-accept
left product = ch-product
"""

_CLAIM_A = """\
net claim-a
place crashed init 1
place a-waiting
place a-report
trans report-accident
  pre crashed
  post a-waiting, a-report
right report = a-report
right driver-waiting = a-waiting
"""

_CLAIM_B = """\
net claim-b
place b-waiting
place b-has-car
trans hire-car
  pre b-waiting
  post b-waiting, b-has-car
left driver-waiting = b-waiting
right driver-waiting = b-waiting
"""

_CLAIM_C = """\
net claim-c
place c-waiting
place c-request
place c-info
place c-decision
place c-settled
trans answer-request
  pre c-waiting, c-request
  post c-waiting, c-info
trans receive-decision
  pre c-waiting, c-decision
  post c-settled
left driver-waiting = c-waiting
right info-request = c-request
right info = c-info
right decision = c-decision
"""

_CLAIM_D = """\
net claim-d
place ins-idle init 1
place d-report
place d-processing
trans receive-report
  pre ins-idle, d-report
  post d-processing
left report = d-report
right processing = d-processing
"""

_CLAIM_E = """\
net claim-e
place e-processing
place e-soliciting
place e-request
place e-info
trans solicit-info
  pre e-processing
  post e-soliciting, e-request
trans receive-info
  pre e-soliciting, e-info
  post e-processing
left processing = e-processing
left info-request = e-request
left info = e-info
right processing = e-processing
"""

_CLAIM_F = """\
net claim-f
place f-processing
place f-decision
place f-done
trans decide-and-inform
  pre f-processing
  post f-done, f-decision
left processing = f-processing
left decision = f-decision
"""

_GUEST = """\
net guest
place g-idle init 1
place g-wait-coffee
place g-wait-tea
place g-drinking
place g-order-coffee
place g-order-tea
place g-coffee
place g-tea
trans order-coffee
  pre g-idle
  post g-wait-coffee, g-order-coffee
trans order-tea
  pre g-idle
  post g-wait-tea, g-order-tea
trans take-coffee
  pre g-wait-coffee, g-coffee
  post g-drinking
trans take-tea
  pre g-wait-tea, g-tea
  post g-drinking
trans finish
  pre g-drinking
  post g-idle
right order-coffee = g-order-coffee
right order-tea = g-order-tea
right coffee = g-coffee
right tea = g-tea
"""

_WAITER = """\
net waiter
place w-idle init 1
place w-making-coffee
place w-making-tea
place w-order-coffee
place w-order-tea
place w-coffee
place w-tea
trans start-coffee
  pre w-idle, w-order-coffee
  post w-making-coffee
trans serve-coffee
  pre w-making-coffee
  post w-idle, w-coffee
trans start-tea
  pre w-idle, w-order-tea
  post w-making-tea
trans serve-tea
  pre w-making-tea
  post w-idle, w-tea
left order-coffee = w-order-coffee
left order-tea = w-order-tea
left coffee = w-coffee
left tea = w-tea
"""


def producer_chain() -> list[Module]:
    """Producer, broker, client; the product channel passes through the
    broker untouched (same place on both of its faces)."""
    return [
        parse_module(_PRODUCER, "producer.mod"),
        parse_module(_BROKER, "broker.mod"),
        parse_module(_CLIENT, "client.mod"),
    ]


def claim_settlement() -> list[Module]:
    """Six single-activity modules of a driver and an insurance company."""
    return [
        parse_module(_CLAIM_A, "claim-a.mod"),
        parse_module(_CLAIM_B, "claim-b.mod"),
        parse_module(_CLAIM_C, "claim-c.mod"),
        parse_module(_CLAIM_D, "claim-d.mod"),
        parse_module(_CLAIM_E, "claim-e.mod"),
        parse_module(_CLAIM_F, "claim-f.mod"),
    ]


def coffee_house() -> list[Module]:
    """A guest with choices and a waiter reacting to them."""
    return [parse_module(_GUEST, "guest.mod"), parse_module(_WAITER, "waiter.mod")]


def example_files(name: str, n: int = 5, variant: str = "basic") -> dict[str, str]:
    """Canonical file texts of a bundled example (serializer output)."""
    if name == "bakery":
        return {"bakery.net": serialize_net(*bakery())}
    if name == "four-seasons":
        return {"four-seasons.net": serialize_net(*four_seasons())}
    if name == "light-fan":
        return {
            "light-fan.net": serialize_net(*light_fan()),
            "light-fan.steps": serialize_steps("light-fan", light_fan_steps()),
        }
    if name == "producer-chain":
        names = ["producer.mod", "broker.mod", "client.mod"]
        return {f: serialize_module(m) for f, m in zip(names, producer_chain())}
    if name == "claim-settlement":
        names = [f"claim-{x}.mod" for x in "abcdef"]
        return {f: serialize_module(m) for f, m in zip(names, claim_settlement())}
    if name == "coffee-house":
        names = ["guest.mod", "waiter.mod"]
        return {f: serialize_module(m) for f, m in zip(names, coffee_house())}
    if name == "dining":
        hl, interp = dining(n, variant)
        return {f"dining-{n}-{variant}.hl": serialize_hlnet(hl, interp)}
    raise ValueError(f"unknown example {name!r}; choose from {', '.join(EXAMPLE_NAMES)}")
