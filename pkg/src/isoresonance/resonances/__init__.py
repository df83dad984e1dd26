"""Resonance search: argument-principle engine, determinant zeros, oracles."""
from .contour import (MemoFunction, SearchRegion, Zero, count_zeros, locate_zeros, merge_zeros,
                      newton, winding)
from .finder import (IsoReport, ResonanceSet, bound_state_region, compare_resonance_sets,
                     locate_resonances)
from .oracles import (box_eigenvalue_near, box_half_width, dirichlet_box_eigenvalues,
                      matching_function, square_well_bound_states, swave_matching,
                      swave_oracle_3d, transfer_matrix_oracle_1d)

__all__ = ["MemoFunction", "SearchRegion", "Zero", "count_zeros", "locate_zeros", "merge_zeros",
           "newton", "winding", "IsoReport", "ResonanceSet", "bound_state_region",
           "compare_resonance_sets", "locate_resonances", "box_eigenvalue_near",
           "box_half_width", "dirichlet_box_eigenvalues", "matching_function",
           "square_well_bound_states", "swave_matching", "swave_oracle_3d",
           "transfer_matrix_oracle_1d"]
