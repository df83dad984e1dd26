"""Heat and wave invariants: closed forms, a symbolic density engine (d = 1),
a numerical heat-trace oracle, and the wave constants."""
from .heat import (Calibration, HeatFit, calibrate, fit_heat_coefficients, heat_invariant_closed,
                   heat_invariant_symbolic, heat_trace_oracle, kappa_exact)
from .report import (EqualityReport, InvariantVector, heat_invariants, invariant_vector,
                     verify_invariants_equal, wave_trace_expansion)
from .symbolic import (DifferentialPolynomial, SymbolicTerm, c_jk, canonicalize, density,
                       hp_apply_H, hp_power_at_zero, leading_coefficient, reduce_integral)
from .wave import M_constant, N_constant, WaveConstant, wave_constant, wave_constants

__all__ = ["Calibration", "HeatFit", "calibrate", "fit_heat_coefficients",
           "heat_invariant_closed", "heat_invariant_symbolic", "heat_trace_oracle",
           "kappa_exact", "EqualityReport", "InvariantVector", "heat_invariants",
           "invariant_vector", "verify_invariants_equal", "wave_trace_expansion",
           "DifferentialPolynomial", "SymbolicTerm", "c_jk", "canonicalize", "density",
           "hp_apply_H", "hp_power_at_zero", "leading_coefficient", "reduce_integral",
           "M_constant", "N_constant", "WaveConstant", "wave_constant", "wave_constants"]
