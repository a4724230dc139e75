"""Betti-0 curves of sparse-correlation networks and two-group inference on them."""
from .data import (
    CenteredMatrix,
    DataMatrix,
    EdgeWeights,
    Mode,
    NormalizedMatrix,
    center_columns,
    edge_weights,
    load_csv,
    network_weights,
    normalize_columns,
)
from .filtration import (
    BettiCurve,
    Filtration,
    betti0_at,
    betti_curve,
    build_filtration,
    dfs_component_oracle,
    tree_betti_oracle,
)
from .inference import (
    AucSample,
    GroupComparisonResult,
    auc,
    compare_groups,
    jackknife_curves,
    rank_sum_test,
)
from .sim import SimConfig, random_tree, simulate_study1, simulate_study2
from .sparse import oracle_minimize, soft_threshold, sparse_correlation, support_graph

__version__ = "0.1.0"
