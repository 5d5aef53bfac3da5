"""latticeorder: square/hexagonal order scores for 2D point lattices.

Pipeline: grayscale surface image -> region-grown indentation centers ->
normalized point cloud -> 0D/1D Rips persistence diagram -> order scores
(h0_bar, h1_bar) with the percent-square reading.
"""

from ._backend import backend_name
from .lattice import (
    LatticeSpec,
    NominalGridSpec,
    PerturbationSpec,
    Point2,
    PointCloud,
    gen_hexagonal,
    gen_nominal_grid,
    gen_square,
    perturb,
    scale_to_unit_box,
)
from .persistence import (
    DistanceMatrix,
    PersistenceDiagram,
    PersistencePair,
    build_rips_filtration,
    compute_h0,
    compute_h1,
    compute_persistence,
    enclosing_radius,
    pairwise_distances,
)
from .scores import (
    DiagramHistogram,
    OrderScores,
    compute_scores,
    h0_score,
    h0_variance,
    h1_score,
    h1_sum,
    histogram,
    interpret,
)

__version__ = "0.1.0"

__all__ = [
    "LatticeSpec",
    "NominalGridSpec",
    "PerturbationSpec",
    "Point2",
    "PointCloud",
    "gen_hexagonal",
    "gen_nominal_grid",
    "gen_square",
    "perturb",
    "scale_to_unit_box",
    "DistanceMatrix",
    "PersistenceDiagram",
    "PersistencePair",
    "build_rips_filtration",
    "compute_h0",
    "compute_h1",
    "compute_persistence",
    "enclosing_radius",
    "pairwise_distances",
    "DiagramHistogram",
    "OrderScores",
    "compute_scores",
    "h0_score",
    "h0_variance",
    "h1_score",
    "h1_sum",
    "histogram",
    "interpret",
    "backend_name",
    "__version__",
]
