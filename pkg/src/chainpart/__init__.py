"""Contiguous partitioning of sparse-matrix row chains.

Rows keep their order; a partition is a monotone sequence of split
points.  The package covers bottleneck partitioning (minimize the most
expensive part), total-cost partitioning (minimize the sum, with
quadrangle-inequality speedups), column assignment for nonsymmetric
communication costs, dominance-counting range structures that back the
cost oracles, bandwidth-reducing reordering, and a benchmark harness.
"""

from .assign import assign_any_incident, assign_greedy_conn, assign_local
from .bench import StrategyResult, bench_suite, run_strategy, time_call
from .bottleneck import (
    BottleneckResult,
    bisect_partition,
    lazy_bisect_partition,
    nicol_partition,
)
from .costs import (
    AtomCounters,
    CostCoefficients,
    CostOracle,
    Objective,
    RangeAtoms,
    bounds_for,
    chains_on_chains,
    check_property,
    connectivity,
    edge_cut_partwise,
    hyperedge_cut_partwise,
    mono_symmetric,
    nonsym,
    nonsym_initial,
    partition_costs_direct,
    with_threshold,
    work,
)
from .costs import AtomSweep
from .dominance import (
    DominancePrefixSum,
    OfflineDominanceCounter,
    OnlineDominanceCounter,
    RankSpaceCounter,
    chazelle_params,
    constant_pass_params,
)
from .matrix import (
    CsrMatrix,
    MatrixFormatError,
    load_matrix_market,
    save_matrix_market,
    spmv,
    transpose,
)
from .partition import MapPartition, SplitPartition, load_partition
from .reorder import (
    bandwidth,
    permute,
    rcm_order,
    read_permutation,
    reorder_matrix,
    write_permutation,
)
from .total import (
    InfeasibleError,
    TotalResult,
    block_equally,
    block_partition,
    lws_dp,
    lws_quadrangle,
    partition_total,
    partition_total_fixed_k,
    partition_total_fixed_k_quadrangle,
)

__version__ = "0.1.0"

__all__ = [
    "AtomCounters",
    "AtomSweep",
    "BottleneckResult",
    "CostCoefficients",
    "CostOracle",
    "CsrMatrix",
    "DominancePrefixSum",
    "InfeasibleError",
    "MapPartition",
    "MatrixFormatError",
    "Objective",
    "OfflineDominanceCounter",
    "OnlineDominanceCounter",
    "RangeAtoms",
    "RankSpaceCounter",
    "SplitPartition",
    "StrategyResult",
    "TotalResult",
    "assign_any_incident",
    "assign_greedy_conn",
    "assign_local",
    "bandwidth",
    "bench_suite",
    "bisect_partition",
    "block_equally",
    "block_partition",
    "bounds_for",
    "chains_on_chains",
    "chazelle_params",
    "check_property",
    "connectivity",
    "constant_pass_params",
    "edge_cut_partwise",
    "hyperedge_cut_partwise",
    "lazy_bisect_partition",
    "load_matrix_market",
    "load_partition",
    "lws_dp",
    "lws_quadrangle",
    "mono_symmetric",
    "nicol_partition",
    "nonsym",
    "nonsym_initial",
    "partition_costs_direct",
    "partition_total",
    "partition_total_fixed_k",
    "partition_total_fixed_k_quadrangle",
    "permute",
    "rcm_order",
    "read_permutation",
    "reorder_matrix",
    "run_strategy",
    "save_matrix_market",
    "spmv",
    "time_call",
    "transpose",
    "with_threshold",
    "work",
    "write_permutation",
]
