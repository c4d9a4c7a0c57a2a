"""Single fly-by Coulomb kinematics: impulse, cross-section, acceptance.

Two impulse conventions coexist on purpose.  The small-angle momentum kick
integrated exactly along a straight-line pass is 2*lambda/(b*v); the headline
formula used throughout the rate estimates is lambda/(b*v).  PAPER_EQ2 is the
default so every quoted number reproduces; EXACT_TRANSVERSE is what the ODE
oracle physically measures.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConfigError
from .trap import TrapConfig, sql_threshold
from .units import (
    ALPHA,
    AREA,
    C_SI,
    HBARC_SI,
    LENGTH,
    MOMENTUM,
    SPEED,
    ParticleSpecies,
    Quantity,
)


class ImpulseConvention(enum.Enum):
    PAPER_EQ2 = "paper"          # dp = lambda / (b v)
    EXACT_TRANSVERSE = "exact"   # dp = 2 lambda / (b v)

    @property
    def factor(self) -> float:
        return 1.0 if self is ImpulseConvention.PAPER_EQ2 else 2.0


class VminMode(enum.Enum):
    PAPER_LINEAR = "paper"         # v_min = dp / m_target
    REDUCED_MASS = "reduced-mass"  # v_min = dp / (2 mu)


def coulomb_strength_si(q1_e: float, q2_e: float) -> float:
    """|lambda| = alpha |q1 q2| hbar c in SI (energy times length)."""
    return ALPHA * abs(q1_e * q2_e) * HBARC_SI


@dataclass(frozen=True)
class FlybyEvent:
    """One straight-line pass of a projectile by a trapped target."""

    b: Quantity  # impact parameter
    v: Quantity  # relative speed
    projectile: ParticleSpecies
    target: ParticleSpecies

    def __post_init__(self):
        if self.b.dim != LENGTH or not self.b.value > 0:
            raise ConfigError(f"impact parameter must be a positive length, got {self.b}")
        if self.v.dim != SPEED or not 0 < self.v.value < C_SI:
            raise ConfigError(f"speed must satisfy 0 < v < c, got {self.v}")


def impulse(event: FlybyEvent, convention: ImpulseConvention = ImpulseConvention.PAPER_EQ2) -> Quantity:
    """Momentum kick delivered to the target during the fly-by."""
    lam = coulomb_strength_si(event.projectile.charge_e, event.target.charge_e)
    dp = convention.factor * lam / (event.b.value * event.v.value)
    return Quantity(dp, MOMENTUM, "eV/c")


def flyby_time(event: FlybyEvent) -> Quantity:
    """tau = b/v, the window over which most of the impulse arrives."""
    return Quantity(event.b.value / event.v.value, (0, 0, 1, 0), "s")


@dataclass(frozen=True)
class ImpulsiveCheck:
    ok: bool
    margin: float  # omega * tau; impulsive limit needs this << 1


def impulsive_ok(event: FlybyEvent, trap: TrapConfig) -> ImpulsiveCheck:
    """Whether the trap mode is slow enough to treat the kick as instantaneous."""
    margin = trap.omega.value * flyby_time(event).value
    return ImpulsiveCheck(ok=margin < 0.1, margin=margin)


def threshold_impact_parameter(
    trap: TrapConfig,
    q_chi: float,
    v: Quantity,
    convention: ImpulseConvention = ImpulseConvention.PAPER_EQ2,
) -> Quantity:
    """Impact parameter at which the kick equals the SQL threshold."""
    if v.dim != SPEED or not 0 < v.value < C_SI * (1 + 1e-12):
        raise ConfigError(f"speed must satisfy 0 < v <= c, got {v}")
    lam = coulomb_strength_si(q_chi, trap.species.charge_e)
    dp_th = sql_threshold(trap).dp_sql.value
    return Quantity(convention.factor * lam / (v.value * dp_th), LENGTH, "nm")


def effective_cross_section(
    trap: TrapConfig,
    q_chi: float,
    v: Quantity,
    convention: ImpulseConvention = ImpulseConvention.PAPER_EQ2,
) -> Quantity:
    """sigma_eff = 4 pi b_th^2, the disk within which a pass trips the detector."""
    b_th = threshold_impact_parameter(trap, q_chi, v, convention)
    return Quantity(4.0 * math.pi * b_th.value**2, AREA, "nm2")


def acceptance(dp: Quantity, dp_th: Quantity) -> float:
    """Fraction of isotropically-oriented kicks of size dp seen on a single axis."""
    if dp_th.dim != MOMENTUM or dp.dim != MOMENTUM:
        raise ConfigError("acceptance expects momenta")
    if dp_th.value < 0:
        raise ConfigError("threshold momentum must be nonnegative")
    if dp.value <= dp_th.value:
        return 0.0
    return math.sqrt(1.0 - (dp_th.value / dp.value) ** 2)


def v_min(
    dp: Quantity,
    target: ParticleSpecies,
    mode: VminMode = VminMode.PAPER_LINEAR,
    projectile: ParticleSpecies | None = None,
) -> Quantity:
    """Slowest projectile able to deliver momentum dp to the target."""
    if dp.dim != MOMENTUM or dp.value < 0:
        raise ConfigError(f"dp must be a nonnegative momentum, got {dp}")
    return Quantity(dp.value / kinematic_momentum_per_speed(target, mode, projectile), SPEED, "m/s")


def kinematic_momentum_per_speed(
    target: ParticleSpecies,
    mode: VminMode = VminMode.PAPER_LINEAR,
    projectile: ParticleSpecies | None = None,
) -> float:
    """Coefficient k in the kinematic bound dp <= k * v (SI kg).

    PAPER_LINEAR: k = m_target.  REDUCED_MASS: k = 2 mu, the standard
    head-on maximum for elastic two-body transfer.
    """
    if mode is VminMode.PAPER_LINEAR:
        return target.mass_si
    if projectile is None:
        raise ConfigError("REDUCED_MASS v_min needs the projectile species")
    mt, mp = target.mass_si, projectile.mass_si
    return 2.0 * mt * mp / (mt + mp)
