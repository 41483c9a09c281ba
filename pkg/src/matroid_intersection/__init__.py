"""Oracle-call-efficient maximum common independent set solver.

Two matroids over one ground set, each visible only through an
independence oracle; the solver finds a maximum common independent set
with O(n r log^2 r) oracle calls via lazy BFS over the exchange graph,
returns a maximality certificate, and accounts for every call it makes.
"""

from .instances import (
    GENERATOR_FAMILIES,
    GroundSizeMismatchError,
    InstanceFile,
    InstanceFormatError,
    generate_instance,
    matroid_from_description,
    matroid_to_description,
    parse_instance,
)
from .matroids import (
    PHASES,
    AxiomReport,
    ConcurrentAccessError,
    CountingOracle,
    GraphicMatroid,
    GroundSetError,
    LinearMatroidGF2,
    MatroidOracle,
    OracleContractError,
    PartitionMatroid,
    UniformMatroid,
    axiom_check,
    rank,
)
from .reference import (
    BoundReport,
    ExchangeGraph,
    breadth_first_layers,
    brute_force_circuit,
    brute_force_max_common,
    budget_ratio,
    build_naive_exchange_graph,
    check_bounds,
    path_length_bound,
    total_length_bound,
)
from .solver import (
    AugmentingPath,
    BfsState,
    Certificate,
    NoCircuitError,
    OrderedGround,
    ReachableSet,
    RunStats,
    SolverInternalError,
    augment,
    certificate_from_reachable,
    compute_free_additions,
    fan_in_neighbors,
    fan_out_neighbors,
    lazy_bfs,
    min_dependent_prefix,
    shortest_augmenting_path,
    solve,
)

__version__ = "0.1.0"
