"""Trap description, quantum-limited thresholds, duty-cycle and heating estimates.

Conventions: TrapConfig.omega is always an angular frequency (rad/s).  Callers
working from a frequency in cycles per second must multiply by 2*pi themselves
(the CLI exposes both --omega and --freq-hz for exactly this reason).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConfigError
from .units import (
    FREQUENCY,
    HBAR_SI,
    LENGTH,
    MOMENTUM,
    ParticleSpecies,
    Quantity,
)


class TrapKind(enum.Enum):
    PENNING = "penning"
    PAUL = "paul"


@dataclass(frozen=True)
class TrapConfig:
    """A trap with one monitored harmonic mode.

    kind carries no behavioral difference (micromotion is neglected); it is
    kept for reporting.  n_sensors multiplies event rates linearly.
    """

    kind: TrapKind
    omega: Quantity  # angular frequency of the monitored mode, rad/s
    species: ParticleSpecies
    electrode_distance: Quantity | None = None
    heating_rate: Quantity | None = None  # phonons/s
    n_sensors: int = 1

    def __post_init__(self):
        if self.omega.dim != FREQUENCY or not self.omega.value > 0:
            raise ConfigError(f"omega must be a positive angular frequency, got {self.omega}")
        if self.electrode_distance is not None and not (
            self.electrode_distance.dim == LENGTH and self.electrode_distance.value > 0
        ):
            raise ConfigError("electrode_distance must be a positive length")
        if self.heating_rate is not None and (
            self.heating_rate.dim != FREQUENCY or self.heating_rate.value < 0
        ):
            raise ConfigError("heating_rate must be a nonnegative rate (phonons/s)")
        if self.n_sensors < 1:
            raise ConfigError(f"n_sensors must be >= 1, got {self.n_sensors}")


@dataclass(frozen=True)
class ThresholdReport:
    """Quantum-limited threshold of the monitored mode.

    dp_sql**2 / (2 m) equals energy_threshold by construction.
    """

    dp_sql: Quantity
    energy_threshold: Quantity
    x0: Quantity  # ground-state wavefunction size


def sql_threshold(trap: TrapConfig) -> ThresholdReport:
    """Minimum resolvable momentum kick and the matching energy threshold.

    dp = sqrt(2 hbar m omega), energy = hbar omega, x0 = sqrt(hbar / (2 m omega)).
    """
    m = trap.species.mass_si
    w = trap.omega.value
    dp = math.sqrt(2.0 * HBAR_SI * m * w)
    return ThresholdReport(
        dp_sql=Quantity(dp, MOMENTUM, "eV/c"),
        energy_threshold=Quantity(dp * dp / (2.0 * m), (1, 2, -2, 0), "eV"),
        x0=Quantity(math.sqrt(HBAR_SI / (2.0 * m * w)), LENGTH, "m"),
    )


def energy_deposit(dp: Quantity, species: ParticleSpecies) -> Quantity:
    """Energy a momentum kick dp deposits on a free particle: dp^2 / (2 m)."""
    if dp.dim != MOMENTUM:
        raise ConfigError(f"dp must be a momentum, got {dp}")
    if dp.value < 0:
        raise ConfigError("dp must be nonnegative")
    return Quantity(dp.value**2 / (2.0 * species.mass_si), (1, 2, -2, 0), "eV")


def duty_cycle_max(trap: TrapConfig) -> Quantity:
    """Longest quiet listening window: Q/omega = 1/heating_rate.

    Beyond this, a spurious heating phonon is expected and the detector must
    be re-prepared.
    """
    if trap.heating_rate is None or trap.heating_rate.value <= 0:
        raise ConfigError("duty_cycle_max needs a positive heating_rate on the trap")
    return Quantity(1.0 / trap.heating_rate.value, (0, 0, 1, 0), "s")


def scale_heating_rate(
    reference: TrapConfig, new_d: Quantity, new_species: ParticleSpecies
) -> Quantity:
    """Extrapolate a measured heating rate to a new electrode distance and species.

    Gamma' = Gamma * (d_ref/d_new)^4 * (m_ref/m_new): anomalous-heating rates
    fall steeply with electrode distance and rise for lighter particles.
    """
    if reference.electrode_distance is None or reference.heating_rate is None:
        raise ConfigError("reference trap needs electrode_distance and heating_rate")
    if new_d.dim != LENGTH or not new_d.value > 0:
        raise ConfigError(f"new electrode distance must be a positive length, got {new_d}")
    ratio_d = reference.electrode_distance.value / new_d.value
    ratio_m = reference.species.mass_si / new_species.mass_si
    return Quantity(reference.heating_rate.value * ratio_d**4 * ratio_m, FREQUENCY, "1/s")
