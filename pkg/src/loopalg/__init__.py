"""Exact-arithmetic toolkit for parahoric filtrations of loop algebras,
local Hitchin images, Kostant-section certificates and the rigid irregular
connection on the punctured line."""

from .errors import (
    ContainmentViolation,
    CyclicFailure,
    DiagramMismatch,
    InvalidCoordinatesError,
    LoopAlgError,
    MismatchError,
    NoCertificateError,
    NotOperShapeError,
    SurjectivityFailure,
    UnsupportedTwistedError,
    UnsupportedTypeError,
    WindowUnderflowError,
)
from .affine import (
    AffineRoot,
    KacGrading,
    MPLattice,
    Parahoric,
    build_parahoric,
    graded_principal_triple,
    hyperspecial,
    is_principal,
    iwahori,
    kac_grading,
    moy_prasad,
    orthogonal_lattice,
)
from .hitchin import (
    HitchinImage,
    HitchinValue,
    InvariantSystem,
    chevalley_map,
    hitchin_bounds,
    invariant_system,
    kostant_section,
    residue_diagram,
    torus_invariant_generator,
    verify_containment,
    verify_rs_image,
    verify_surjectivity,
)
from .laurent import LaurentPoly, OrderBound, TwistedElement, laurent_arith, ramified_pullback, residue
from .opers import (
    Oper,
    check_irregular_type,
    check_residue_rs,
    cyclic_ode,
    fg_connection,
    gauge_reduce,
    global_hitchin_base,
    global_oper_space,
    make_oper,
    slope_certificate,
)
from .rootdata import (
    CartanType,
    Degrees,
    PrincipalTriple,
    RootDatum,
    build_root_datum,
    centralizer_basis,
    dual_root_datum,
    fundamental_degrees,
    is_regular_semisimple,
    principal_triple,
)

__all__ = [
    "AffineRoot",
    "CartanType",
    "ContainmentViolation",
    "CyclicFailure",
    "Degrees",
    "DiagramMismatch",
    "HitchinImage",
    "HitchinValue",
    "InvalidCoordinatesError",
    "InvariantSystem",
    "KacGrading",
    "LaurentPoly",
    "LoopAlgError",
    "MPLattice",
    "MismatchError",
    "NoCertificateError",
    "NotOperShapeError",
    "Oper",
    "OrderBound",
    "Parahoric",
    "PrincipalTriple",
    "RootDatum",
    "SurjectivityFailure",
    "TwistedElement",
    "UnsupportedTwistedError",
    "UnsupportedTypeError",
    "WindowUnderflowError",
    "build_parahoric",
    "build_root_datum",
    "centralizer_basis",
    "check_irregular_type",
    "check_residue_rs",
    "chevalley_map",
    "cyclic_ode",
    "dual_root_datum",
    "fg_connection",
    "fundamental_degrees",
    "gauge_reduce",
    "global_hitchin_base",
    "global_oper_space",
    "graded_principal_triple",
    "hitchin_bounds",
    "hyperspecial",
    "invariant_system",
    "is_principal",
    "is_regular_semisimple",
    "iwahori",
    "kac_grading",
    "kostant_section",
    "laurent_arith",
    "make_oper",
    "moy_prasad",
    "orthogonal_lattice",
    "principal_triple",
    "ramified_pullback",
    "residue",
    "residue_diagram",
    "slope_certificate",
    "torus_invariant_generator",
    "verify_containment",
    "verify_rs_image",
    "verify_surjectivity",
]
