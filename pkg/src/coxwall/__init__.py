"""Exact computations with Coxeter groups seen through their walls."""

from .coxeter_core import (
    INFINITY,
    CoxeterMatrix,
    CoxeterSystem,
    GroupElement,
    invert,
    is_reduced,
    left_descents,
    length,
    multiply,
    new_system,
    normal_form,
)
from .ball import CayleyBall, enumerate_ball
from .walls import (
    HalfSpace,
    Wall,
    check_axiom_M,
    geodesic_report,
    is_between,
    is_geodesic_path,
    side_of,
    wall_of_edge,
    wall_of_generator,
    walls_separating,
    wallspace_graph,
)
from .classification import (
    ComponentType,
    DiagramAutomorphism,
    DiagramType,
    HyperbolicityReport,
    Nerve,
    RigidityReport,
    SpecialSubset,
    classify,
    diagram_automorphisms,
    gram_definiteness,
    is_hyperbolic,
    is_rigid,
    nerve,
    order_of_finite,
    rigidity_witnesses,
)
from .even_polytopes import (
    AndreevReport,
    CoxeterCell,
    Face,
    ParallelClass,
    PolyhedronTableEntry,
    andreev_check,
    cellulation_data,
    coxeter_cell,
    even_polyhedra_table,
    parallel_classes,
    verify_simple,
)
from .complexes import (
    CellCensus,
    LinkGraph,
    bourdon_system,
    cell_census,
    davis_vertex_link,
    link_complete_bipartite,
    link_cycle,
    matrix_from_graph,
    system_from_graph,
    validate_kL,
)
from .automorphisms import (
    DisjointnessReport,
    HSet,
    PartialAutomorphism,
    StarFixingWitness,
    build_wall_fixing_automorphism,
    compute_H,
    finite_star,
    halfspace_A,
    star_fixing_automorphisms,
    verify_disjoint,
)
from .errors import (
    AngleRange,
    BadRank,
    CoxwallError,
    KTooSmall,
    MatrixShape,
    NotAWitness,
    NotFinite,
    OddK,
    OddP,
    ParseError,
    RadiusTooSmall,
    ResourceLimit,
    SystemMismatch,
    UnknownCellulation,
    UnknownGenerator,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "CoxeterMatrix",
    "CoxeterSystem",
    "GroupElement",
    "CayleyBall",
    "enumerate_ball",
    "new_system",
    "normal_form",
    "multiply",
    "invert",
    "length",
    "left_descents",
    "is_reduced",
    "Wall",
    "HalfSpace",
    "wall_of_edge",
    "wall_of_generator",
    "side_of",
    "walls_separating",
    "is_between",
    "is_geodesic_path",
    "geodesic_report",
    "check_axiom_M",
    "wallspace_graph",
    "SpecialSubset",
    "ComponentType",
    "DiagramType",
    "Nerve",
    "HyperbolicityReport",
    "RigidityReport",
    "DiagramAutomorphism",
    "classify",
    "order_of_finite",
    "nerve",
    "is_hyperbolic",
    "is_rigid",
    "diagram_automorphisms",
    "rigidity_witnesses",
    "gram_definiteness",
    "Face",
    "CoxeterCell",
    "ParallelClass",
    "AndreevReport",
    "PolyhedronTableEntry",
    "coxeter_cell",
    "parallel_classes",
    "verify_simple",
    "cellulation_data",
    "andreev_check",
    "even_polyhedra_table",
    "LinkGraph",
    "CellCensus",
    "link_cycle",
    "link_complete_bipartite",
    "matrix_from_graph",
    "system_from_graph",
    "davis_vertex_link",
    "validate_kL",
    "bourdon_system",
    "cell_census",
    "StarFixingWitness",
    "HSet",
    "DisjointnessReport",
    "PartialAutomorphism",
    "finite_star",
    "star_fixing_automorphisms",
    "halfspace_A",
    "compute_H",
    "verify_disjoint",
    "build_wall_fixing_automorphism",
    "CoxwallError",
    "MatrixShape",
    "UnknownGenerator",
    "SystemMismatch",
    "ResourceLimit",
    "RadiusTooSmall",
    "NotFinite",
    "BadRank",
    "UnknownCellulation",
    "AngleRange",
    "OddK",
    "KTooSmall",
    "OddP",
    "NotAWitness",
    "ParseError",
    "__version__",
]
