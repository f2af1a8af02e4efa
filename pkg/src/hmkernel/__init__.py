"""Kernelization for high-multiplicity scheduling through huge N-fold integer programs."""

from .errors import BoxTooLarge, BudgetExceeded, Infeasible, LiftInfeasible, StateSpaceTooLarge
from .instance import Objective, SchedulingInstance, parse_instance, serialize_instance
from .nfold import build_model
from .pipeline import Kernel, RunReport, kernelize

__all__ = [
    "BoxTooLarge", "BudgetExceeded", "Infeasible", "LiftInfeasible", "StateSpaceTooLarge",
    "Objective", "SchedulingInstance", "parse_instance", "serialize_instance",
    "build_model", "Kernel", "RunReport", "kernelize",
]
