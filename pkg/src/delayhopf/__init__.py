"""Hopf bifurcation curves for oscillators with delayed self-feedback.

Three routes to the critical (k, T) pairs of the Duffing, van der Pol and
Erneux-Grasman systems: closed forms from the undelayed and delayed slow
flows, Newton continuation on the characteristic systems, and direct DDE
simulation with bisection.  The command line front end (``delayhopf``)
serializes everything as CSV.
"""

from .charsolve import (
    CurvePoint,
    CurveTarget,
    SweepPlan,
    SweepResult,
    continuation_sweep,
    erneux_pairing_report,
    exact_char_system,
    newton_solve,
    slowflow_char_residual,
    slowflow_char_system,
)
from .ddesim import (
    ClassifyTolerances,
    HistoryBuffer,
    LongRunClass,
    LongRunKind,
    Trajectory,
    classify_long_run,
    detect_hopf_bisection,
    integrate,
    integrate_slowflow,
)
from .hopf_analytic import (
    Branch,
    ClosedFormBranch,
    HopfPoint,
    Method,
    approach1_delays,
    approach1_points,
    approach2_delays,
    approach2_omega,
    closed_form_branches,
    series_partial_sum,
)
from .slowflow import PlaneState, PolarState, cartesian_rhs, linearized_cartesian_rhs, polar_rhs
from .systems import (
    FullState,
    ResidualPair,
    SystemKind,
    SystemSpec,
    exact_char_residual,
    full_rhs,
)

__all__ = [
    "Branch",
    "ClassifyTolerances",
    "ClosedFormBranch",
    "CurvePoint",
    "CurveTarget",
    "FullState",
    "HistoryBuffer",
    "HopfPoint",
    "LongRunClass",
    "LongRunKind",
    "Method",
    "PlaneState",
    "PolarState",
    "ResidualPair",
    "SweepPlan",
    "SweepResult",
    "SystemKind",
    "SystemSpec",
    "Trajectory",
    "approach1_delays",
    "approach1_points",
    "approach2_delays",
    "approach2_omega",
    "cartesian_rhs",
    "classify_long_run",
    "closed_form_branches",
    "continuation_sweep",
    "detect_hopf_bisection",
    "erneux_pairing_report",
    "exact_char_residual",
    "exact_char_system",
    "full_rhs",
    "integrate",
    "integrate_slowflow",
    "linearized_cartesian_rhs",
    "newton_solve",
    "polar_rhs",
    "series_partial_sum",
    "slowflow_char_residual",
    "slowflow_char_system",
]
