"""Generalized operator radii of complex matrices.

Computes the numerical radius, the Euclidean/q-radius, the f-operator
radius and the (generalized) Davis-Wielandt radius of tuples of square
complex matrices, together with the operator decompositions they are
built from (modulus, polar, Aluthge, Cartesian) and a property-based
verifier for a catalog of radius inequalities.
"""

from .linalg import (
    ShapeError,
    HermitianError,
    ConvergenceError,
    SpectrumDomainError,
    EigenDecomposition,
    PolarParts,
    as_operator,
    arithmetic,
    hermitian_eig,
    jacobi_eigh,
    operator_norm,
    abs_op,
    polar_decompose,
    aluthge,
    cartesian,
    apply_map_hermitian,
    encode_matrix,
    decode_matrix,
)
from .scalarmap import ScalarMap, builtin, from_spec, invert_numeric, certify_flags
from .radius import (
    RadiusEstimate,
    OptimizerOptions,
    numerical_radius,
    f_radius,
    q_radius,
    davis_wielandt,
    oracle_radius,
)
from .bounds import (
    BoundSpec,
    BoundCheckResult,
    catalog,
    evaluate_bound,
    check_furuta_pointwise,
)
from .harness import EnsembleSpec, SuiteReport, generate, run_suite

__version__ = "0.1.0"

__all__ = [
    "ShapeError",
    "HermitianError",
    "ConvergenceError",
    "SpectrumDomainError",
    "EigenDecomposition",
    "PolarParts",
    "as_operator",
    "arithmetic",
    "hermitian_eig",
    "jacobi_eigh",
    "operator_norm",
    "abs_op",
    "polar_decompose",
    "aluthge",
    "cartesian",
    "apply_map_hermitian",
    "encode_matrix",
    "decode_matrix",
    "ScalarMap",
    "builtin",
    "from_spec",
    "invert_numeric",
    "certify_flags",
    "RadiusEstimate",
    "OptimizerOptions",
    "numerical_radius",
    "f_radius",
    "q_radius",
    "davis_wielandt",
    "oracle_radius",
    "BoundSpec",
    "BoundCheckResult",
    "catalog",
    "evaluate_bound",
    "check_furuta_pointwise",
    "EnsembleSpec",
    "SuiteReport",
    "generate",
    "run_suite",
]
