"""Scenario presets: unperturbed Hamiltonian, perturbation and initial packet."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import ConfigurationError
from .operator_algebra import (
    DiffOperator, EffectiveHamiltonian, ScaledPerturbation, effective_hamiltonian,
    free_hamiltonian, momentum, oscillator_hamiltonian,
)
from .special_functions import BumpFunction, SwitchingProfile, kelly_normalize

# name -> (unperturbed Hamiltonian, spatial part of the perturbation)
PRESETS = {
    "free-kick": ("free", "momentum"),
    "constant-field": ("free", "position"),
    "driven-oscillator": ("oscillator", "position"),
    "kicked-oscillator": ("oscillator", "momentum"),
}


def _default_bump():
    return kelly_normalize(-1.0, 1.0)


@dataclass(frozen=True)
class Scenario:
    """One perturbed problem: H = H0 + strength * theta(t) * spatial.

    ``spatial`` is x for the field scenarios and -i d for the kick
    scenarios.
    """

    name: str
    strength: float = 1.0
    profile: SwitchingProfile = field(default_factory=SwitchingProfile)
    bump: BumpFunction = field(default_factory=_default_bump)

    def __post_init__(self):
        if self.name not in PRESETS:
            raise ConfigurationError(
                f"unknown scenario {self.name!r}; choose from {sorted(PRESETS)}"
            )

    @property
    def h0_kind(self) -> str:
        return PRESETS[self.name][0]

    @property
    def perturbation_kind(self) -> str:
        return PRESETS[self.name][1]

    @property
    def oscillator(self) -> bool:
        return self.h0_kind == "oscillator"

    def h0(self) -> DiffOperator:
        return oscillator_hamiltonian() if self.oscillator else free_hamiltonian()

    def spatial(self) -> DiffOperator:
        return DiffOperator.x() if self.perturbation_kind == "position" else momentum()

    def perturbation(self) -> ScaledPerturbation:
        return ScaledPerturbation(self.spatial(), self.strength, self.profile)

    @cached_property
    def effective(self) -> EffectiveHamiltonian:
        return effective_hamiltonian(self.h0(), self.perturbation())

    def envelope(self, t: float) -> float:
        return self.strength * self.profile(t)
