"""Orthogonal separation coordinates and Stäckel systems on spheres."""

from .assoc import (
    LEAF,
    Dissection,
    SeriesTable,
    Tree,
    catalan,
    devadoss_read,
    dissection_to_tree,
    dyslexic_canonical,
    enumerate_trees,
    face_counts_bruteforce,
    format_tree,
    mosaic_compose,
    parse_tree,
    tree_to_dissection,
)
from .coords import (
    LabeledTree,
    elliptic_point,
    elliptic_roots,
    orthogonality_check,
    polyspherical_point,
    sckt_eigen_oracle,
    sphere_compose,
    tree_coords_forward,
    tree_coords_inverse,
)
from .exactpoly import Poly, PolyMatrix, exact_rank, matrix_commutator, poisson_bracket, poly_eval
from .killing import (
    KillingVector,
    apply_permutation,
    kij_matrix,
    kij_phase,
    verify_independence,
    verify_kd_relations,
)
from .staeckel import (
    Partition,
    StaeckelSpan,
    adjugate_oracle,
    compose_spans,
    elliptic_span,
    gaudin_span,
    jm_span,
    staeckel_from_tree,
    verify_span,
)

__version__ = "0.1.0"
