"""Triangulated circle bundles over finite semi-simplicial bases.

Bundles are carried by local systems of necklaces; minimal bundles
correspond to binary 2-cocycles, spindle contraction reduces any bundle
to a minimal one, and prescribed Chern numbers are realized over closed
oriented surfaces.  Everything is exact integer arithmetic, verified by
Smith-normal-form homology of assembled total spaces.
"""

from .errors import (
    BeadNotFound,
    BoundExceeded,
    DanglingReference,
    EnumerationBound,
    IncoherentLocalSystem,
    IncompatibleFamily,
    InconsistentTriples,
    InvalidComplex,
    LastArc,
    LastColor,
    MalformedFile,
    MismatchedCarriers,
    NonOrientable,
    NotACocycle,
    NotBinary,
    NotClosedSurface,
    ScbError,
)
from .simplicial import (
    NAMED_BASES,
    SemiSimplicialSet,
    SimplexRef,
    StarSubcomplexMap,
    boundary_sphere,
    delta_torus,
    named_base,
    octahedron_sphere,
    standard_simplex,
    star,
)
from .homology import (
    FundamentalClass,
    HomologyGroups,
    IntCochain,
    IntMatrix,
    SmithForm,
    boundary_matrix,
    coboundary,
    cochain_from_json_dict,
    cochain_to_json_dict,
    cohomologous,
    connected_component_count,
    determinant,
    fundamental_class,
    homology_groups,
    is_cocycle,
    smith_normal_form,
    solve_linear,
    zero_cochain,
)
from .cyclic import (
    CircularPermutation,
    Necklace,
    Permutation,
    TripleOrderFamily,
    c01,
    default_enumeration_bound,
    enumerate_sc,
    insertion_extend,
    is_classical_necklace,
    is_degenerate_sc,
    kan_lifts,
    kan_survey,
    sc_normalized_homology,
)
from .bundle import (
    AssembledBundle,
    MinimalBundle,
    NecklaceLocalSystem,
    SingularProjection,
    TotalSpaceIndex,
    assemble,
    bundle_from_json_dict,
    bundle_to_json_dict,
    chern_cocycle,
    chern_number,
    check_projection_naturality,
    elementary_bundle,
    elementary_system,
    is_classical_bundle,
    minimal_from_cocycle,
    systems_equivalent,
    total_to_json_dict,
)
from .spindle import (
    ArcSelection,
    chern_cocycle_general,
    contract,
    default_selection,
    minimize,
    subdivide,
    validate_selection,
)
from .surface import (
    SurfaceOrientationData,
    build_surface_bundle,
    cocycle_for_chern,
    parity_check,
)

__version__ = "0.1.0"
