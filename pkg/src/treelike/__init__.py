"""Tree-like plane curves: flattening, inflection bounds and curve-class counts."""

from .errors import (
    BadMultiplicity,
    CollidingDirections,
    DegenerateLeafCount,
    NotTreeLike,
    NotVertexCentered,
    OddLength,
    ParseError,
    PathReversing,
    RealizationFailed,
    SizeLimit,
    TangentialCrossing,
    TreeLikeError,
)
from .gauss import (
    DualTree,
    GaussDiagram,
    PlaneTree,
    gauss_to_plane_tree,
    is_tree_like,
    parse_gauss_code,
    plane_tree_to_gauss,
)
from .tree import (
    CoorientationLabels,
    CurveTraversal,
    NcpdTree,
    Passage,
    SymmetryInfo,
    canonical_code,
    coorientation,
    parse_ncpd,
    planar_automorphisms,
    plane_tree_code,
    traversal,
    validate_noncolliding,
    whitney_index,
)
from .inflect import (
    BoundReport,
    LocalCoorientation,
    connecting_paths,
    count_inflections,
    exact_minimum,
    is_admissible,
    is_nonflattening,
    joints,
    lower_bound_rev,
    min_inflections,
    standard_local_coorientation,
    upper_bound,
)
from .census import (
    CensusRow,
    census_table,
    count_total_ncpd,
    enumerate_ncpd,
    enumerate_plane_trees,
    exact_symmetry_counts,
    orbit_count,
)
from .render import RealizedCurve, numeric_inflections, realize, to_svg, verify_gauss

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
