"""Interaction-picture wave packets on the line.

Exact solutions for perturbations whose adjoint series closes, a
split-step reference integrator and classical trajectories to compare
them against.
"""
from .errors import IplabError
from .scenarios import Scenario, PRESETS
from .special_functions import BumpFunction, SwitchingProfile, kelly_normalize
from .exact_solver import ExactSolution, solve

__version__ = "0.1.0"

__all__ = ["IplabError", "Scenario", "PRESETS", "BumpFunction", "SwitchingProfile",
           "kelly_normalize", "ExactSolution", "solve", "__version__"]
