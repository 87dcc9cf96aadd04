"""F-polynomials of indecomposable representations of affine D~n quivers."""
from .laurent import LaurentPoly, NotDivisible, parse_fraction, parse_laurent, render_fraction
from .quiver import DimVec, NotARoot, OutOfCategory, QuiverDn, classify_root, delta, positive_real_roots
from .coeffq import CoeffQuiver, build_rank2_chain, build_snake, gen_function, snake_recursion
from .formulas import cc_variable, f_delta, f_homog, f_root, reflection_chain
from .oracle import MatrixRep, fpoly_oracle, homogeneous_rep, reflect_rep, rep_from_root, tree_module

__all__ = [
    "CoeffQuiver",
    "DimVec",
    "LaurentPoly",
    "MatrixRep",
    "NotARoot",
    "NotDivisible",
    "OutOfCategory",
    "QuiverDn",
    "build_rank2_chain",
    "build_snake",
    "cc_variable",
    "classify_root",
    "delta",
    "f_delta",
    "f_homog",
    "f_root",
    "fpoly_oracle",
    "gen_function",
    "homogeneous_rep",
    "parse_fraction",
    "parse_laurent",
    "positive_real_roots",
    "reflect_rep",
    "reflection_chain",
    "render_fraction",
    "rep_from_root",
    "snake_recursion",
    "tree_module",
]
