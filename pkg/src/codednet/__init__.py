"""codednet: error-correction modeling of message transmission on networks.

Messages travel a network as codewords of a linear block code; every edge
corrupts each symbol independently with its own probability.  The package
classifies paths and whole networks by whether the expected corruption
stays within the code's correction capacity, labels spanning trees with
codewords to route without precomputed path tables, assembles coverings
whose members can each self-correct, and checks all of it against a seeded
Monte Carlo simulator.
"""

from .codes import (
    DecodeResult,
    LinearCode,
    PrimeField,
    Word,
    capacities,
    hamming_distance,
    load_code,
    parse_code_spec,
    simplex_code,
    weight,
)
from .covering import (
    Covering,
    CoveringSet,
    InfluenceReport,
    TransmissionPlan,
    construct_perfect,
    covering_set,
    influence,
    plan_transmission,
    radius,
    reachable_by_subset_check,
    size_bounds,
    validate_covering,
)
from .efficiency import (
    EfficiencyClass,
    NetworkReport,
    PathReport,
    classify_network,
    classify_path,
    expected_hamming,
    flip_prob_binary,
    flip_prob_binary_closed,
    flip_prob_qary,
    flip_prob_qary_closed,
    flip_state_sequence,
    network_report,
)
from .labeling import (
    Labeling,
    SpanningTree,
    assign_labels,
    complete_graph_labels,
    is_super_efficient,
    next_hop,
    route,
    tree_is_efficient,
)
from .network import (
    CodedNetwork,
    InfeasibleError,
    Path,
    SocialNetwork,
    TopologyType,
    ball,
    ball_vertices,
    load_edge_list,
    parse_edge_list,
    parse_probability,
    shortest_path,
    topology_type,
)
from .simulate import (
    ChannelModel,
    SimStats,
    TransmissionTrace,
    estimate_expected_hamming,
    path_stats,
    protocol_stats,
    simulate_path,
    simulate_protocol,
    transmit_edge,
)

__version__ = "0.1.0"
