"""Exact variational calculus for differential equations on the formal punctured disc."""

from .diffpoly import (
    DiffPoly,
    jet_partial,
    render,
    scale_dependent,
    substitute_solution,
    total_derivative,
    variational_derivative,
)
from .errors import (
    DivisionByJetError,
    EmptyExactRangeError,
    InconsistencyError,
    InsufficientPrecisionError,
    NonIntegerExponentError,
    NonIntegrableError,
    OrderTooHighError,
    ParseError,
    VarformError,
    WindowError,
    ZeroDenominatorError,
)
from .laurent import LaurentSeries, antiderivative, compare, ddz, residue
from .linops import (
    CohomologyDims,
    LinOp,
    adjoint,
    apply,
    compose,
    is_self_adjoint,
    linearize_at,
    residue_pairing,
    tangent_cohomology_dims,
    universal_linearization,
)
from .loopspace import (
    LoopExpansion,
    LoopPoly,
    Window,
    cross_integrability,
    euler_lagrange_identity_check,
    expand_on_loops,
    order2_integrand,
    partial_wrt,
    symplectic_closedness_check,
)
from .parser import ParsedEquation, parse_equation, parse_operator_coeffs, parse_poly, parse_series
from .varcalc import (
    HelmholtzReport,
    LagrangianResult,
    equivalent_mod_total_derivative,
    helmholtz_check,
    is_total_derivative,
    is_variational,
    quadratic_action,
    vainberg_tonti,
)

__version__ = "0.1.0"
