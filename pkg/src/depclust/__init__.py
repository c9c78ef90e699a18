"""Clusters of linearly dependent columns via the signature matrix ``I - A^+ A``."""

__version__ = "0.1.0"

from .dense import (
    RankPolicy,
    SvdConvergenceError,
    SvdFactors,
    null_space_basis,
    numeric_rank,
    pinv,
    pseudo_inverse,
    svd,
)
from .signature import (
    NumericalDegeneracyWarning,
    SignatureResult,
    independent_columns,
    signature_matrix,
)
from .graph import (
    ClusterPartition,
    DependencyGraph,
    cluster_of,
    clusters_of,
    dependency_graph,
    find_clusters,
)
from .relations import RelationBasis, canonicalize, minimal_relations, verify_relations
from .rank1 import UpdateCase, UpdateIngredients, classify_update, rank1_update_pinv
from .sensitivity import (
    LeastSquaresSolution,
    PerturbationReport,
    independent_column_bound,
    min_norm_lsq,
    perturb_column,
    sensitivity_report,
)
from .featsel import (
    Dataset,
    FeatureReport,
    ThresholdPolicy,
    irrelevant_removal,
    perturbation_screen,
    relevance_row,
    target_cluster,
)

__all__ = [
    "RankPolicy", "SvdConvergenceError", "SvdFactors", "null_space_basis", "numeric_rank",
    "pinv", "pseudo_inverse", "svd",
    "NumericalDegeneracyWarning", "SignatureResult", "independent_columns", "signature_matrix",
    "ClusterPartition", "DependencyGraph", "cluster_of", "clusters_of", "dependency_graph",
    "find_clusters",
    "RelationBasis", "canonicalize", "minimal_relations", "verify_relations",
    "UpdateCase", "UpdateIngredients", "classify_update", "rank1_update_pinv",
    "LeastSquaresSolution", "PerturbationReport", "independent_column_bound", "min_norm_lsq",
    "perturb_column", "sensitivity_report",
    "Dataset", "FeatureReport", "ThresholdPolicy", "irrelevant_removal", "perturbation_screen",
    "relevance_row", "target_cluster",
]
