"""Compactly supported potentials: types, norms, index sets, inequalities."""
from .core import (BumpSum, BumpTerm, GridSampled, Potential, SquareWell, dumps, evaluate,
                   from_dict, load, loads, random_bump_sum, reflect, sample, save, scale,
                   to_dict, translate, values, zero_potential)
from .norms import (FrechetIndexing, derivative, derivative_norm, frechet_metric, lp_norm,
                    sobolev_norm, sup_norm)
from .indexsets import MultiIndexTuple, brute_force_index_set, enumerate_index_set
from .inequalities import InequalityCheck, InequalityReport, verify_inequality_suite
