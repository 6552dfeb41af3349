"""Path-slicing local search for the TSP with pluggable QUBO solvers."""
from .construction import DegenerateHullError, convex_hull, convex_hull_insertion
from .core import Segment, Tour, TourViolation, splice_segment, tour_length, validate_tour
from .experiment import ExperimentReport, ExperimentSettings, emit_report, run_experiment
from .qls import QlsConfig, QlsTrace, improve_slice, run_qls
from .qubo import Qubo, build_slice_qubo, decode_solution, default_penalty
from .slicing import SlicePlan, Strategy, embed_on_circle, plan_for_iteration
from .solvers import SaParams, SolverResult, permutation_oracle, solve_exact, solve_sa
from .tsplib import Instance, Metric, build_distance_matrix, builtin_instance, distance, parse_instance

__version__ = "0.1.0"
