"""Time-of-flight coincidence planning for a pair of trapped-charge detectors.

The single-shot timing resolution is one trap period dT = 2*pi/omega, so a
baseline L gives a velocity error dv = v^2*dT/L and an energy resolution
dE = m*v*dv.  All formulas are nonrelativistic; required_baseline flags
inputs where that assumption starts to degrade instead of silently
correcting them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .trap import TrapConfig
from .units import C_SI, ENERGY, LENGTH, SPEED, TIME, ParticleSpecies, Quantity

RELATIVISTIC_ENERGY_FRACTION = 0.05  # warn above E = 0.05 * m c^2


@dataclass(frozen=True)
class TofSetup:
    trap: TrapConfig
    baseline: Quantity
    projectile: ParticleSpecies

    def __post_init__(self):
        if self.baseline.dim != LENGTH or not self.baseline.value > 0:
            raise ConfigError(f"baseline must be a positive length, got {self.baseline}")


@dataclass(frozen=True)
class BaselineResult:
    length: Quantity
    relativistic_warning: bool  # nonrelativistic formula stretched past 5% of mc^2


def trap_period(trap: TrapConfig) -> Quantity:
    return Quantity(2.0 * math.pi / trap.omega.value, TIME, "ns")


def velocity_resolution(setup: TofSetup, v: Quantity) -> Quantity:
    """dv = v^2 * dT / L."""
    if v.dim != SPEED or not 0 < v.value < C_SI:
        raise ConfigError(f"v must be a speed in (0, c), got {v}")
    dt = trap_period(setup.trap).value
    return Quantity(v.value**2 * dt / setup.baseline.value, SPEED, "m/s")


def required_baseline(
    energy: Quantity, d_energy: Quantity, trap: TrapConfig, projectile: ParticleSpecies
) -> BaselineResult:
    """Baseline needed to resolve kinetic energy E to dE: L = sqrt((2E)^3/m)*dT/dE."""
    for q, name in ((energy, "energy"), (d_energy, "d_energy")):
        if q.dim != ENERGY or not q.value > 0:
            raise ConfigError(f"{name} must be a positive energy, got {q}")
    m = projectile.mass_si
    dt = trap_period(trap).value
    length = math.sqrt((2.0 * energy.value) ** 3 / m) * dt / d_energy.value
    warn = energy.value > RELATIVISTIC_ENERGY_FRACTION * m * C_SI**2
    return BaselineResult(Quantity(length, LENGTH, "mm"), relativistic_warning=warn)


def energy_resolution(setup: TofSetup, energy: Quantity) -> Quantity:
    """dE = m * v * dv at v = sqrt(2E/m); exact inverse of required_baseline.

    No relativity guard here: the formula is applied as-is so the
    required_baseline round trip stays algebraically exact.
    """
    if energy.dim != ENERGY or not energy.value > 0:
        raise ConfigError(f"energy must be a positive energy, got {energy}")
    m = setup.projectile.mass_si
    v = math.sqrt(2.0 * energy.value / m)
    dt = trap_period(setup.trap).value
    dv = v**2 * dt / setup.baseline.value
    return Quantity(m * v * dv, ENERGY, "eV")
