"""Random-walk hitting times on undirected weighted graphs.

Exact moments and distributions come from truncated power series of the
target-reduced transition matrix; a seeded Monte Carlo simulator provides
an independent check.
"""

__version__ = "0.1.0"

from .analysis import (
    CommunitySplit,
    DistanceReport,
    HittingTable,
    SortedCurve,
    detect_split,
    hitting_table,
    pairwise_distances,
    sorted_curve,
)
from .errors import *  # noqa: F401,F403
from .graph import (
    Graph,
    clique_plus_pendant,
    format_edge_list,
    from_edge_list,
    is_connected,
    parse_edge_list,
    planted_labels,
    planted_two_community,
    read_edge_list,
    write_edge_list,
)
from .montecarlo import WalkStats, simulate
from .reduction import TargetReduction, reduce, spectral_radius_bound
from .solver import (
    HittingDistribution,
    HittingMoments,
    distribution,
    generating_function_value,
    moment,
    moments,
)
