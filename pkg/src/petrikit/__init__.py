"""petrikit: a toolkit for Petri nets and their partial-order semantics.

Elementary nets with the occurrence rule and marking graphs, distributed
runs with causal order and linearizations, the concurrency relation,
place invariants, modules with two-faced interfaces and associative
composition, net synthesis from local steps, and predicate/transition
nets with the elm operator and expansion to elementary nets.
"""

from .algebra import (
    IncidenceMatrix,
    InvariantVector,
    check_invariant,
    incidence,
    place_invariants,
    state_equation_check,
)
from .composition import (
    Interface,
    Module,
    compose,
    compose_chain,
    compose_runs,
    marking_run,
    modules_isomorphic,
    run_module,
)
from .concurrency import (
    ConcurrencyStructure,
    co,
    concurrency_structure,
    is_connected,
    place_transition_concurrent,
    propositions_concurrent,
)
from .errors import (
    CapacityError,
    CompositionError,
    EnablingError,
    ParseError,
    PetrikitError,
    ReversalError,
    SortError,
    StructuralError,
    SynthesisError,
    UndefinedRelationError,
)
from .hlnet import (
    HLNet,
    HLPlace,
    HLTransition,
    Interpretation,
    Mode,
    Universe,
    dining,
    eval_inscription,
    expand,
    hl_enabled,
    hl_fire,
    hl_modes,
    initial_marking,
)
from .multiset import Multiset
from .net import (
    GlobalStep,
    Marking,
    MarkingGraph,
    Net,
    build_net,
    enabled,
    fire,
    fire_sequence,
    marking,
    marking_graph,
    unfire,
)
from .runs import (
    CausalOrder,
    Run,
    causal_order,
    is_valid_run,
    linearizations,
    run_violations,
    step_run,
    unfold,
)
from .synthesis import runs_round_trip, synthesize

__version__ = "0.1.0"
