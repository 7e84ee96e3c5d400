"""Discrete linear Weingarten surfaces from discrete holomorphic lattice data.

Builders for minimal surfaces in R^3, maximal surfaces in R^{2,1} and the
BrLW / BiLW family in H^3 and S^{2,1}; curvatures from mixed areas and from
Lie sphere geometry; singular vertex and face detection.
"""
from .analysis import Analysis, analyze
from .curvature import (
    FaceCurvatureField,
    edge_kappa_from_pair,
    face_HK_from_kappa,
    face_HK_mixed_area,
    weingarten_residual,
)
from .euclidean import (
    build_maximal,
    build_minimal,
    edge_kappa_maximal,
    edge_kappa_minimal,
    parallel_euclidean,
    parallel_kappa,
)
from .lattice import (
    DiscreteHolomorphicFunction,
    LatticeDomain,
    cross_ratio,
    gen_exp,
    gen_linear,
    load,
    save,
    validate,
)
from .lie_sphere import curvature_sphere_and_kappa, curvature_spheres, lift, validate_legendre
from .mesh import EdgeCurvatureField, SpaceformMesh
from .projection import project
from .singularity import (
    SingularityReport,
    circumcircle_transversality,
    classify_cgc,
    cmc1_face_criterion,
    fps_vertices,
    singular_faces_causal,
)
from .weingarten import (
    WeingartenParams,
    build_pair,
    edge_kappa_weingarten,
    integrate_frame,
    parallel_hyperbolic,
)

__version__ = "0.1.0"

__all__ = [
    "Analysis", "analyze",
    "FaceCurvatureField", "edge_kappa_from_pair", "face_HK_from_kappa", "face_HK_mixed_area",
    "weingarten_residual",
    "build_maximal", "build_minimal", "edge_kappa_maximal", "edge_kappa_minimal",
    "parallel_euclidean", "parallel_kappa",
    "DiscreteHolomorphicFunction", "LatticeDomain", "cross_ratio", "gen_exp", "gen_linear",
    "load", "save", "validate",
    "curvature_sphere_and_kappa", "curvature_spheres", "lift", "validate_legendre",
    "EdgeCurvatureField", "SpaceformMesh", "project",
    "SingularityReport", "circumcircle_transversality", "classify_cgc", "cmc1_face_criterion",
    "fps_vertices", "singular_faces_causal",
    "WeingartenParams", "build_pair", "edge_kappa_weingarten", "integrate_frame", "parallel_hyperbolic",
]
