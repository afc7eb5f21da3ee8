"""Grassmannian persistence diagrams of 1-parameter simplicial filtrations."""

from .complex import (
    Chain,
    SimplicialComplex,
    adjoint_boundary,
    boundaries,
    boundary_matrix,
    cycles,
)
from .diagrams import (
    NumericalRankError,
    check_transversity_morphism,
    classical_pd,
    gpd_birth_death,
    gpd_laplacian,
    lifetime_check,
)
from .filtration import (
    INF,
    Filtration,
    GaloisConnection,
    LinearMetricPoset,
    Segment,
    SegmentPoset,
    check_galois,
    distortion,
    path_cost,
    pullback,
    pushforward,
    segments,
    vietoris_rips,
)
from .harmonic import (
    check_projection_isomorphism,
    harmonic_barcode,
    harmonic_space,
    harmonic_transition,
)
from .invariants import (
    SegmentDiagram,
    birth_death_space,
    check_intersection_monotone,
    laplacian_kernel,
    lk_diagram,
    persistent_betti,
    persistent_laplacian,
    zb_diagram,
)
from .inversion import (
    generic_mobius_inverse,
    goi,
    is_monoidal_inverse,
    mobius_equivalent,
    mobius_inverse_int,
    prhi,
    rhi,
)
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    families_transversal,
    intersect,
    is_transverse,
    ominus,
    orthocomplement,
    orthonormalize,
    project,
    sum_,
)
from .treegram import (
    Treegram,
    Ultrametric,
    gpd_to_treegram,
    treegram_of_filtration,
    treegram_to_gpd,
    ultrametric_from_treegram,
    vr_of_ultrametric,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "INF",
    "Chain",
    "Filtration",
    "GaloisConnection",
    "LinearMetricPoset",
    "NumericalRankError",
    "Segment",
    "SegmentDiagram",
    "SegmentPoset",
    "SimplicialComplex",
    "Subspace",
    "Treegram",
    "Ultrametric",
    "adjoint_boundary",
    "birth_death_space",
    "boundaries",
    "boundary_matrix",
    "check_galois",
    "check_intersection_monotone",
    "check_projection_isomorphism",
    "check_transversity_morphism",
    "classical_pd",
    "cycles",
    "distortion",
    "families_transversal",
    "generic_mobius_inverse",
    "goi",
    "gpd_birth_death",
    "gpd_laplacian",
    "gpd_to_treegram",
    "harmonic_barcode",
    "harmonic_space",
    "harmonic_transition",
    "intersect",
    "is_monoidal_inverse",
    "is_transverse",
    "laplacian_kernel",
    "lifetime_check",
    "lk_diagram",
    "mobius_equivalent",
    "mobius_inverse_int",
    "ominus",
    "orthocomplement",
    "orthonormalize",
    "path_cost",
    "persistent_betti",
    "persistent_laplacian",
    "prhi",
    "project",
    "pullback",
    "pushforward",
    "rhi",
    "segments",
    "sum_",
    "treegram_of_filtration",
    "treegram_to_gpd",
    "ultrametric_from_treegram",
    "vietoris_rips",
    "vr_of_ultrametric",
    "zb_diagram",
]
