"""Semiring-configurable pairwise distances and k-NN over sparse row matrices."""

from .engine import (
    DENSE_COLUMN_LIMIT,
    HASH_CAPACITY_CAP,
    ExecutionStrategy,
    StrategyKind,
    WorkspaceReport,
    allocate_output,
    auto_hash_capacity,
    choose_strategy,
    pairwise_generalized,
    pairwise_spmv_pass1,
    pairwise_spmv_pass2,
    plan_chunks,
    resolve_strategy,
    resolve_workers,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    IndexOutOfBounds,
    InvalidSpec,
    KTooLarge,
    MissingParam,
    NegativeOffset,
    NonMonotonicIndptr,
    ParseError,
    SemidistError,
    SizeOverflow,
    UnknownMetric,
    UnsupportedField,
    ValidationError,
)
from .generate import GenSpec, generate, parse_degree_dist
from .hashtable import EMPTY_SLOT, HashAccumulator, mix32
from .knn import (
    BatchPlan,
    NeighborResult,
    kneighbors,
    kneighbors_detail,
    plan_batches,
    select_topk,
)
from .metrics import (
    BINARY_PREFERRED,
    METRIC_NAMES,
    MetricSpec,
    SideStats,
    expansion_apply,
    metric_registry,
    pairwise_distances,
    pairwise_distances_detail,
)
from .mmio import read_matrix_market, write_matrix_market, write_output
from .semiring import (
    Semiring,
    absolute_difference,
    absolute_difference_power,
    canberra_ratio,
    dot_product,
    jensen_shannon_term,
    kl_divergence_term,
    max_absolute_difference,
    mismatch_indicator,
    tropical_min_plus,
)
from .sparse import (
    CooMatrix,
    CsrMatrix,
    DegreeStats,
    NormKind,
    NormVector,
    coo_to_csr,
    csr_to_coo,
    degree_stats,
    from_dense,
    row_norms,
    row_signed_sums,
    segment_reduce,
    slice_rows,
    validate_and_canonicalize,
)

__version__ = "0.1.0"
