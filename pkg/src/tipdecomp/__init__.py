"""Small seed sets that tip an entire network under the deterministic
threshold model, with exact baselines for small graphs and the experiment
harness around them."""

from .baselines import (
    CentralityScores,
    betweenness,
    closeness,
    degree_centrality,
    eigenvector_centrality,
    greedy_centrality_seed,
    pagerank,
    reichman_bound,
    shell_number,
)
from .decomp import DecompResult, tip_decomp, verify_decomposition
from .errors import (
    ConvergenceError,
    DegenerateFitError,
    GraphFormatError,
    NotApplicableError,
    SizeLimitError,
    TipDecompError,
    UndefinedMeasureError,
)
from .exact import IPModel, build_seed_ip, export_lp, min_seed_bruteforce, solve_seed_ip_small
from .generators import make_synthetic
from .graph import DirectedGraph, GraphBuilder, load_edge_list, read_edge_list, remove_nodes
from .heap import AddressablePriorityQueue
from .structure import Partition, PlanarFit, average_clustering, local_clustering, louvain, modularity, planar_fit
from .tipping import (
    AbsoluteCapped,
    ActivationTrace,
    FractionOfInDegree,
    ThresholdAssignment,
    activate_fixpoint,
    activate_step,
    compute_thresholds,
    covers,
    critical_mass_step,
)

__version__ = "0.1.0"
