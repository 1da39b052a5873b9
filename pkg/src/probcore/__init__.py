"""Core decomposition of probabilistic graphs.

Each edge carries an independent existence probability. The central
notion is the eta-degree: the largest t such that a vertex keeps at
least t incident edges with probability eta or more. A (k, eta)-core is
a maximal subgraph where every vertex has eta-degree at least k within
the subgraph.

The package provides exact eta-degree computation, a bucket-based
peeling decomposition, a two-stage screening front end that shrinks the
graph before peeling, cohesion metrics over the extracted cores, and
threshold suggestion for the screening stages.
"""
from ._backend import available_backends, backend_name, set_backend, temporary_backend
from .cohesion import (
    CohesionReport,
    ComponentCohesion,
    max_core_report,
    probabilistic_clustering_coefficient,
    probabilistic_density,
    write_cohesion_report,
)
from .degrees import (
    DegreeDistribution,
    degree_pmf,
    eta_degree_clt_bound,
    eta_degree_exact,
    eta_degree_safe_floor,
    normal_quantile,
)
from .graph import (
    GraphFormatError,
    ProbabilisticGraph,
    connected_components,
    generate_random,
    induced_subgraph,
    parse_edge_list,
    write_edge_list,
)
from .peeling import (
    Decomposition,
    core_compute,
    read_decomposition,
    run_mpa,
    run_pa,
    write_decomposition,
)
from .screening import (
    ScreeningReport,
    clt_bounds,
    run_screening,
    safe_floors,
    stage1_filter,
    stage2_filter,
    write_screening_report,
)
from .thresholds import (
    BreakpointFit,
    percentile,
    segmented_breakpoint,
    suggest_stage1,
    suggest_stage2,
)

__version__ = "0.1.0"

__all__ = [
    "BreakpointFit",
    "CohesionReport",
    "ComponentCohesion",
    "Decomposition",
    "DegreeDistribution",
    "GraphFormatError",
    "ProbabilisticGraph",
    "ScreeningReport",
    "available_backends",
    "backend_name",
    "clt_bounds",
    "connected_components",
    "core_compute",
    "degree_pmf",
    "eta_degree_clt_bound",
    "eta_degree_exact",
    "eta_degree_safe_floor",
    "generate_random",
    "induced_subgraph",
    "max_core_report",
    "normal_quantile",
    "parse_edge_list",
    "percentile",
    "probabilistic_clustering_coefficient",
    "probabilistic_density",
    "read_decomposition",
    "run_mpa",
    "run_pa",
    "run_screening",
    "safe_floors",
    "segmented_breakpoint",
    "set_backend",
    "stage1_filter",
    "stage2_filter",
    "suggest_stage1",
    "suggest_stage2",
    "temporary_backend",
    "write_cohesion_report",
    "write_decomposition",
    "write_edge_list",
    "write_screening_report",
]
