"""Switchable 1- and 2-colouring of (m, n)-mixed graphs under a group of
switch elements, with independently checkable certificates."""

from .certificate import (
    Lift,
    NoCertificate,
    Target,
    YesCertificate,
    format_certificate,
    load_certificate,
    parse_certificate,
)
from .errors import (
    InvalidInputError,
    InvariantError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    SwitchcolError,
)
from .graph import (
    Bipartition,
    MixedGraph,
    OddCycleWitness,
    SpanningForest,
    bipartition,
    fundamental_cycles,
    format_graph,
    load_graph,
    parse_graph,
    spanning_forest,
    validate,
)
from .group import (
    SwitchElement,
    SwitchGroup,
    arc_group_to_edge_group,
    closure,
    compose_action,
    format_group,
    identity,
    inverse,
    is_abelian,
    load_group,
    orbit,
    orbits,
    parse_group,
)
from .oracle import oracle_classes, oracle_decide_2col, reachable_configurations
from .solver import (
    arcs_to_edges,
    check_length_bound,
    decide_1col,
    decide_2col,
    edge_2col,
    lift_c4_witness,
    make_tree_monochromatic,
    np_gadget,
)
from .substitution import (
    check_class_stability,
    reconfiguration_component,
    substitution_classes,
)
from .switching import (
    SwitchSequence,
    apply_sequence,
    compress_abelian,
    invert_sequence,
    switch_set,
    switch_vertex,
)
from .verify import verify_certificate

__version__ = "0.1.0"
