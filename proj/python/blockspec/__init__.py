"""Adjacency-spectral partitioning of stochastic block model graphs."""

from ._core import (
    BlockspecError,
    KnowledgeMode,
    ModelConstants,
    SbmParams,
    __version__,
    compute_constants,
    embed,
    estimate_k_check,
    estimate_k_hat,
    estimate_rank,
    exact_min_sse,
    lloyd_cluster,
    misassignment_count,
    misassignment_fraction,
    numerical_rank,
    run_study,
    sample_graph,
    svd_embed,
)

__all__ = [
    "BlockspecError",
    "KnowledgeMode",
    "ModelConstants",
    "SbmParams",
    "__version__",
    "compute_constants",
    "embed",
    "estimate_k_check",
    "estimate_k_hat",
    "estimate_rank",
    "exact_min_sse",
    "lloyd_cluster",
    "misassignment_count",
    "misassignment_fraction",
    "numerical_rank",
    "run_study",
    "sample_graph",
    "svd_embed",
]
