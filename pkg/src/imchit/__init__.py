"""Expected hitting-time bounds for imprecise Markov chains.

Models specify one credal polytope of transition distributions per state;
the package computes the tight lower and upper bounds on the expected
number of steps until a target set is first entered, over all transition
matrices compatible with the model.
"""

from .bench import (BenchConfig, TrialRecord, iteration_histogram,
                    random_model, run_experiment, write_csv)
from .errors import (EmptyTarget, ImcError, Infeasible, InfeasibleRow,
                     MaxIterationsExceeded, NonStochasticVertex,
                     ReachabilityViolation, SelectorOutOfRange,
                     SingularSystem, TargetIsWholeSpace, TooManyCombinations)
from .linsolve import HittingTimeVector, solve_precise
from .lp import LpSolution, minimize_row, minimize_row_vrep, vertex_from_basis
from .model import (Constraint, Model, Policy, RowPolytopeH, RowPolytopeV,
                    StateSpace, TargetSet, TransitionMatrix, ValidationIssue,
                    ValidationReport, load_model, model_from_dict,
                    model_to_dict, policy_to_matrix, save_model, validate)
from .reachability import ReachabilityReport, check_reachability
from .solvers import (IterationStat, SolveReport, fixed_point_residual,
                      initial_policy, iter_extreme_solutions, solve_brute,
                      solve_policy, solve_value)
from .transition import (OperatorResult, lower_apply, lower_apply_n,
                         upper_apply, upper_apply_n)

__version__ = "0.1.0"

__all__ = [
    "BenchConfig", "Constraint", "EmptyTarget", "HittingTimeVector",
    "ImcError", "Infeasible", "InfeasibleRow", "IterationStat", "LpSolution",
    "MaxIterationsExceeded", "Model", "NonStochasticVertex", "OperatorResult",
    "Policy", "ReachabilityReport", "ReachabilityViolation", "RowPolytopeH",
    "RowPolytopeV", "SelectorOutOfRange", "SingularSystem", "SolveReport",
    "StateSpace", "TargetIsWholeSpace", "TargetSet", "TooManyCombinations",
    "TransitionMatrix", "TrialRecord", "ValidationIssue", "ValidationReport",
    "check_reachability", "fixed_point_residual", "initial_policy",
    "iter_extreme_solutions", "iteration_histogram", "load_model",
    "lower_apply", "lower_apply_n", "minimize_row", "minimize_row_vrep",
    "model_from_dict", "model_to_dict", "policy_to_matrix", "random_model",
    "run_experiment", "save_model", "solve_brute", "solve_policy",
    "solve_precise", "solve_value", "upper_apply", "upper_apply_n",
    "validate", "vertex_from_basis", "write_csv",
]
