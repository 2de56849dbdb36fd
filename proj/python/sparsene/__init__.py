"""Node embeddings for large undirected graphs.

The pipeline sparsifies the random-walk co-occurrence structure by path
sampling, assembles a sparse log-similarity matrix, and factorizes it with
a randomized truncated SVD. Desk-scale dense reference routines are
included for verification.
"""

from ._core import (
    Error,
    Graph,
    IncomparableError,
    NumericalError,
    ParamError,
    ParseError,
    RegimeError,
    ResourceError,
    SizeError,
    __version__,
    embed_graph,
    evaluate_embedding,
    exact_ppmi_matrix,
    exact_walk_matrix,
    load_edge_list,
    measure_epsilon,
    micro_macro_f1,
    suggest_sample_count,
    trunc_log,
    truncated_svd,
)

__all__ = [
    "Error",
    "Graph",
    "IncomparableError",
    "NumericalError",
    "ParamError",
    "ParseError",
    "RegimeError",
    "ResourceError",
    "SizeError",
    "__version__",
    "embed_graph",
    "evaluate_embedding",
    "exact_ppmi_matrix",
    "exact_walk_matrix",
    "load_edge_list",
    "measure_epsilon",
    "micro_macro_f1",
    "suggest_sample_count",
    "trunc_log",
    "truncated_svd",
]
