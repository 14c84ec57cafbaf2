"""Bayesian analysis of reversible Markov chains through edge-reinforced random walk."""

__version__ = "0.1.0"

from .logvalue import LogValue
from .graph import (
    Graph,
    build_graph,
    complete_graph,
    cycle_basis,
    enumerate_spanning_trees,
    line_graph,
    loop_transform,
)
from .paths import Path, SimplexPoint, TransitionCounts, make_path, transition_counts
from .prior import PriorParams, det_cycle_matrix, log_density, log_partition
from .errw import RandomSource, errw_path_log_prob, errw_sample_path
from .inference import (
    CountTable,
    ModelSpec,
    bayes_factor,
    log_marginal_competitor,
    log_marginal_reversible,
    posterior_update,
)
from .formatting import format_log10

__all__ = [
    "LogValue",
    "Graph",
    "build_graph",
    "complete_graph",
    "line_graph",
    "cycle_basis",
    "enumerate_spanning_trees",
    "loop_transform",
    "Path",
    "SimplexPoint",
    "TransitionCounts",
    "make_path",
    "transition_counts",
    "PriorParams",
    "det_cycle_matrix",
    "log_density",
    "log_partition",
    "RandomSource",
    "errw_path_log_prob",
    "errw_sample_path",
    "CountTable",
    "ModelSpec",
    "bayes_factor",
    "log_marginal_competitor",
    "log_marginal_reversible",
    "posterior_update",
    "format_log10",
]
