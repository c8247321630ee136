"""Variation norms on unions of plane segments, homeomorphism, and transport."""

from .errors import DisconnectedError, ImproperRepresentationError, LgvarError, OffGraphError
from .functions import (
    KDelta,
    PiecewiseLinear,
    PolyXY,
    evaluate,
    make_k_delta,
    segment_variation,
    sup_norm,
)
from .geometry import (
    AffineSegMap,
    Line,
    Orientation,
    Point2,
    Segment,
    Side,
    affine_map,
    param_point,
    pt,
    segment_intersection,
    side_of_line,
)
from .graphs import (
    EdgeOrdering,
    HomeoCertificate,
    LinearGraph,
    Multigraph,
    edge_by_edge,
    graph_homeomorphic,
    matched_decompositions,
    multigraph_isomorphic,
    properize,
    smooth,
    subdivide_edge,
)
from .transport import Homeo, Transported, apply, apply_inverse, build_homeo, transport, verify_isometry
from .variation import (
    NormReport,
    PointList,
    SearchBudget,
    VfReport,
    check_decomposition,
    crossing_count,
    cvar,
    divergence_demo,
    lg_norm,
    lg_value,
    var_lower,
    var_upper,
    variation_factor,
)

__all__ = [name for name in dir() if not name.startswith("_")]
