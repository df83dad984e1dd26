"""Resonances and invariants of compactly supported Schrodinger potentials.

Subpackages: ``potential`` (potential types, norms, inequalities),
``resonances`` (argument-principle search and oracles), ``invariants``
(heat and wave invariants).  Modules: ``freeresolvent``,
``birman_schwinger``, ``determinant``, ``cli``.
"""
from .determinant import D_derivative, D_of_lambda, Evaluator, verify_continuity
from .errors import (BudgetExceededError, ConvergenceError, InequalityViolation, IsoresError,
                     NonSmoothPotentialError, PoleProximityError, ResolutionError,
                     ValidationError, ZeroOnBoundaryError)
from .kernels import BACKEND
from .potential import BumpSum, BumpTerm, GridSampled, SquareWell, zero_potential
from .resonances import (ResonanceSet, SearchRegion, compare_resonance_sets, count_zeros,
                         locate_resonances)

__version__ = "0.1.0"

__all__ = ["D_derivative", "D_of_lambda", "Evaluator", "verify_continuity",
           "BudgetExceededError", "ConvergenceError", "InequalityViolation", "IsoresError",
           "NonSmoothPotentialError", "PoleProximityError", "ResolutionError",
           "ValidationError", "ZeroOnBoundaryError", "BACKEND", "BumpSum", "BumpTerm",
           "GridSampled", "SquareWell", "zero_potential", "ResonanceSet", "SearchRegion",
           "compare_resonance_sets", "count_zeros", "locate_resonances", "__version__"]
