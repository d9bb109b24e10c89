"""Exact quaternionic certificates for surfaces carrying two circle families.

The package factors bivariate quaternionic polynomials that represent sums of
six real squares, turning each representation into a replayable certificate,
and provides numerical generators and checkers for the surface families those
factorizations parametrize:

- ``scalar``    -- exact arithmetic in iterated real square-root extensions of
  the rationals, plus a binary64 fallback backend.
- ``quatpoly``  -- quaternions and bivariate quaternion-coefficient
  polynomials over those scalars.
- ``realpoly``  -- division, gcd and exact univariate factorization helpers
  for real (center-valued) polynomials.
- ``solver``    -- six-square tuples, norm-product triples, the certificate
  search for bidegree (2,2) tuples, and the reducibility classifier for
  polynomials linear in the second variable.
- ``surface``   -- circle-pair surface samplers (Euclidean translational,
  spherical product, quartic implicit), iso-curve circularity checks, circle
  and sphere fitting, inversion, and OBJ/CSV export.
- ``plotting``  -- matplotlib renderings of samples and check reports.
- ``cli``       -- the ``bicircle`` command-line front end.
"""

from __future__ import annotations

from .errors import (
    AntipodalDegeneracy,
    BicircleError,
    CenterSingularity,
    ConstraintViolated,
    DegenerateCurve,
    DegreeOutOfRange,
    DependentRadicands,
    DivisionByZero,
    DivisorZero,
    EmptyIntersection,
    ExactnessUnavailable,
    HypothesisViolated,
    IncompatibleTowers,
    InvariantViolated,
    LeadingCoefficientNotInvertible,
    NegativeRadicand,
    NoExactSquareRoot,
    NonRealNorm,
    NoSplit,
    NotDivisible,
    ParseError,
    PoleSingularity,
    PolyError,
    ScalarError,
    SolverError,
    SurfaceError,
    TowerDepthExceeded,
)
from .scalar import (
    EMPTY_TOWER,
    FieldElement,
    FieldTower,
    FloatScalar,
    as_scalar,
    get_tower,
    merge_towers,
    parse_scalar,
    sqrt_adjoin,
)
from .quatpoly import QPoly, Quaternion, U, V, real_poly, univariate
from .realpoly import (
    RealFactorization,
    bivariate_gcd,
    divides,
    factor_real_univariate,
    gcd_with_components,
    monic,
    try_divide,
    univariate_gcd,
)
from .solver import (
    DivideCommon,
    Irreducible,
    PythTuple,
    RealTimesConstant,
    Reducible,
    Relabel,
    ShiftByT,
    SolveCertificate,
    SwapPR,
    Triple,
    is_reducible_linear_v,
    solve_22,
    solve_linear_in_v,
    solve_univariate,
    split_bilinear,
    transform,
    triple_to_tuple,
    tuple_from_ABCD,
    tuple_to_triple,
)
from .surface import (
    Circle3D,
    CircleS2,
    DarbouxCyclide,
    SurfaceSample,
    check_iso_circles,
    eval_cyclide,
    export_csv,
    export_obj,
    fit_circle,
    gen_clifford,
    gen_euclidean,
    invert,
    phi_eval,
    sample_cyclide,
    sphere_determinant,
    stereo_project_tuple,
)

__version__ = "1.0.0"

__all__ = [
    "AntipodalDegeneracy",
    "BicircleError",
    "CenterSingularity",
    "Circle3D",
    "CircleS2",
    "ConstraintViolated",
    "DarbouxCyclide",
    "DegenerateCurve",
    "DegreeOutOfRange",
    "DependentRadicands",
    "DivideCommon",
    "DivisionByZero",
    "DivisorZero",
    "EMPTY_TOWER",
    "EmptyIntersection",
    "ExactnessUnavailable",
    "FieldElement",
    "FieldTower",
    "FloatScalar",
    "HypothesisViolated",
    "IncompatibleTowers",
    "InvariantViolated",
    "Irreducible",
    "LeadingCoefficientNotInvertible",
    "NegativeRadicand",
    "NoExactSquareRoot",
    "NonRealNorm",
    "NoSplit",
    "NotDivisible",
    "ParseError",
    "PoleSingularity",
    "PolyError",
    "PythTuple",
    "QPoly",
    "Quaternion",
    "RealFactorization",
    "RealTimesConstant",
    "Reducible",
    "Relabel",
    "ScalarError",
    "ShiftByT",
    "SolveCertificate",
    "SolverError",
    "SurfaceError",
    "SurfaceSample",
    "SwapPR",
    "TowerDepthExceeded",
    "Triple",
    "U",
    "V",
    "as_scalar",
    "bivariate_gcd",
    "check_iso_circles",
    "divides",
    "eval_cyclide",
    "export_csv",
    "export_obj",
    "factor_real_univariate",
    "fit_circle",
    "gcd_with_components",
    "gen_clifford",
    "gen_euclidean",
    "get_tower",
    "invert",
    "is_reducible_linear_v",
    "merge_towers",
    "monic",
    "parse_scalar",
    "phi_eval",
    "real_poly",
    "sample_cyclide",
    "solve_22",
    "solve_linear_in_v",
    "solve_univariate",
    "sphere_determinant",
    "split_bilinear",
    "sqrt_adjoin",
    "stereo_project_tuple",
    "transform",
    "triple_to_tuple",
    "try_divide",
    "tuple_from_ABCD",
    "tuple_to_triple",
    "univariate",
    "univariate_gcd",
]
