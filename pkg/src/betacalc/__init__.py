"""Quantum (beta-) calculus on orbits of a map with an attracting fixed point.

Submodules: :mod:`~betacalc.beta_map` (maps, orbits, lattices),
:mod:`~betacalc.quantum_calc` (derivatives, integrals, lattice functions),
:mod:`~betacalc.special` (beta-exponentials and trigonometric functions),
:mod:`~betacalc.slp` (Sturm-Liouville problems) and :mod:`~betacalc.cli`.
"""
from .beta_map import (
    DEFAULT_TOL,
    REAL_LINE,
    BetaMap,
    Interval,
    Lattice,
    Tolerances,
    ValidationReport,
    build_lattice,
    invert,
    iterate,
    validate,
)
from .errors import (
    BetaCalcError,
    ConfigError,
    DegenerateBC,
    DepthExceeded,
    EigenNoConvergence,
    InvalidExponent,
    InvalidInterval,
    InvalidParameter,
    LatticeMismatch,
    NoConvergence,
    NonFiniteSample,
    NonFiniteValue,
    NumericalError,
    OutOfRange,
    PoleEncountered,
    RealityViolation,
    SeriesDivergence,
    TruncationCapWarning,
)
from .functions import Builtin, Constant, Polynomial, parse_function
from .quantum_calc import (
    LatticeFunction,
    Support,
    adjoint_residual,
    beta_derivative,
    beta_integral,
    beta_integral_from_s0,
    beta_inverse_derivative,
    change_of_variables_residual,
    fundamental_theorem_residual,
    inner_product,
    integration_by_parts_residual,
    inverse_weight,
    lp_norm,
    make_support,
)
from .slp import (
    DiscreteOperator,
    SlpProblem,
    SlpSolution,
    apply_ell,
    assemble,
    bracket,
    check_self_adjoint,
    lagrange_residual,
    solve,
)
from .special import KINDS, evaluate, exp_big, exp_small, special_function, trig

__version__ = "0.1.0"
