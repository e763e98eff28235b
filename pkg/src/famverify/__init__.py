"""Decide parameterised ZX, ZH and ZW diagram equations by finite checking."""

from .checker import CheckRecord, Report, check_simple, run_plan, symbolic_check
from .diagram import (
    AngleLinear, Diagram, End, EquationFamily, Node, PolyPhase, compose, identity,
    instantiate_bangbox, instantiate_phase, is_separated, is_simple, is_well_nested,
    nesting_order, separable_pair, tensor,
)
from .errors import *  # noqa: F401,F403
from .fileformat import parse_equation_file, report_to_json, serialize
from .interp import degree_bound, diagram_degree, interpret_exact, interpret_family, interpret_simple
from .phasepoly import DegreePair, GaussianRational, LaurentPoly, PolyMatrix, quotient_reduce
from .planner import (
    Assignment, Settings, VerificationPlan, alpha_remove, bang_remove, bbox_bound, build_plan,
    choose_points, grid_size,
)

__version__ = "0.1.0"
