"""Ergodic structure of web graphs and the choice of the PageRank damping factor."""

from .damping import (
    DampingReport,
    check_prop2,
    fairness_at,
    mass_bounds,
    reports_from_scalars,
    solve_cstar_pagerank,
    solve_cstar_quasi,
    solve_cstar_uniform,
)
from .errors import (
    ConvergenceError,
    DegenerateStructureError,
    DimensionError,
    FairDampError,
    GraphFormatError,
    NodeRangeError,
)
from .graph import TransitionOperator, WebGraph, apply_G, apply_P, ingest_edge_list, load_graph
from .pagerank import (
    MassCurve,
    PageRankVector,
    escc_mass_curve,
    evaluate_mass,
    mass_of,
    pagerank,
    pagerank_resolvent,
)
from .perturbation import (
    absorption_mass,
    aggregated_generator,
    class_stationary,
    limit_pagerank,
)
from .spectral import lambda_sequence, one_step_retention, quasi_stationary
from .structure import bow_tie, census, decompose, strongly_connected_components

__version__ = "0.1.0"
