"""Invert rates into minimum detectable charge and detectable-flux curves.

Because every rate scales exactly as q_chi^2 with all other factors fixed,
the smallest detectable charge follows from one rate evaluation at q = 1:
    q_min = sqrt(n_required / (t_obs * R(q=1))).
Charge inversion is done in log space so q_min stays meaningful even where
the unit-charge rate underflows float64 (deep thermal tails); the linear
q_min column then saturates to inf while log10_q_min remains finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, NoSensitivityError
from .kinematics import ImpulseConvention, VminMode, effective_cross_section
from .rates import MdmModel, RateResult, integrated_rate
from .trap import TrapConfig
from .units import C_SI, ENERGY, RATE, SPEED, TIME, ParticleSpecies, Quantity, quantity
from .velocity import MaxwellBoltzmann, VelocityDistribution


@dataclass(frozen=True)
class Exposure:
    """Observation time and the expected-event count called a detection."""

    t_obs: Quantity = quantity(1.0, "day")
    n_required: float = 3.0  # ~95% CL Poisson background-free; 1.0 for flux curves

    def __post_init__(self):
        if self.t_obs.dim != TIME or not self.t_obs.value > 0:
            raise ConfigError(f"t_obs must be a positive time, got {self.t_obs}")
        if not self.n_required > 0:
            raise ConfigError(f"n_required must be positive, got {self.n_required}")


@dataclass(frozen=True)
class MinCharge:
    q_min: float          # units of e; inf if beyond float64 range
    log10_q_min: float    # always finite for a live configuration
    rate_unit_charge: RateResult


def min_charge(
    model: MdmModel,
    trap: TrapConfig,
    exposure: Exposure,
    apply_acceptance: bool = True,
    vmin_mode: VminMode = VminMode.PAPER_LINEAR,
    convention: ImpulseConvention = ImpulseConvention.PAPER_EQ2,
) -> MinCharge:
    """Smallest charge giving n_required expected events in t_obs.

    model.q_chi is ignored; the rate is evaluated at unit charge and inverted.
    Raises NoSensitivityError when the unit-charge rate is exactly zero.
    """
    r1 = integrated_rate(
        replace(model, q_chi=1.0),
        trap,
        apply_acceptance=apply_acceptance,
        vmin_mode=vmin_mode,
        convention=convention,
    )
    if not math.isfinite(r1.log_rate):
        raise NoSensitivityError("no sensitivity: zero rate at unit charge")
    ln_qmin = 0.5 * (
        math.log(exposure.n_required) - math.log(exposure.t_obs.value) - r1.log_rate
    )
    try:
        q_min = math.exp(ln_qmin)
    except OverflowError:
        q_min = math.inf
    return MinCharge(q_min=q_min, log10_q_min=ln_qmin / math.log(10.0), rate_unit_charge=r1)


@dataclass(frozen=True)
class SensitivityCurve:
    masses_gev: np.ndarray
    q_min: np.ndarray
    log10_q_min: np.ndarray
    metadata: dict

    def __post_init__(self):
        if len(self.masses_gev) != len(self.q_min):
            raise ConfigError("mass grid and q_min lengths differ")


def sensitivity_curve(
    masses_gev,
    trap: TrapConfig,
    dist: VelocityDistribution,
    exposure: Exposure,
    f_q: float = 4e-3,
    rho_dm: Quantity | None = None,
    apply_acceptance: bool = True,
    vmin_mode: VminMode = VminMode.PAPER_LINEAR,
    convention: ImpulseConvention = ImpulseConvention.PAPER_EQ2,
) -> SensitivityCurve:
    """q_min across a mass grid.

    A thermal distribution is re-parameterized with each grid mass (its shape
    depends on the projectile mass); halo and monochromatic distributions are
    mass-independent and used as given.  Kinematically dead masses yield NaN
    rows instead of aborting the sweep.
    """
    masses = np.asarray(masses_gev, dtype=float)
    if masses.ndim != 1 or len(masses) == 0 or np.any(np.diff(masses) <= 0):
        raise ConfigError("mass grid must be a nonempty strictly increasing 1-D array")
    from .rates import DEFAULT_RHO_DM

    rho = rho_dm if rho_dm is not None else DEFAULT_RHO_DM
    q_vals = np.empty_like(masses)
    log_vals = np.empty_like(masses)
    for i, m_gev in enumerate(masses):
        m = quantity(m_gev, "GeV/c2")
        dist_m = replace(dist, mass=m) if isinstance(dist, MaxwellBoltzmann) else dist
        model = MdmModel(m_chi=m, q_chi=1.0, dist=dist_m, f_q=f_q, rho_dm=rho)
        try:
            mc = min_charge(
                model,
                trap,
                exposure,
                apply_acceptance=apply_acceptance,
                vmin_mode=vmin_mode,
                convention=convention,
            )
            q_vals[i], log_vals[i] = mc.q_min, mc.log10_q_min
        except NoSensitivityError:
            q_vals[i] = log_vals[i] = math.nan
    meta = {
        "trap_omega_rad_s": trap.omega.value,
        "trap_species": trap.species.label,
        "n_sensors": trap.n_sensors,
        "distribution": type(dist).__name__,
        "t_obs_day": exposure.t_obs.to_value("day"),
        "n_required": exposure.n_required,
        "f_q": f_q,
        "rho_dm_gev_cm3": rho.to_value("GeV/cm3"),
        "apply_acceptance": apply_acceptance,
        "vmin_mode": vmin_mode.value,
        "impulse_convention": convention.value,
    }
    return SensitivityCurve(masses, q_vals, log_vals, meta)


@dataclass(frozen=True)
class FluxCurve:
    energies_ev: np.ndarray
    flux_cm2_day: np.ndarray
    metadata: dict


def speed_from_kinetic_energy(energy: Quantity, species: ParticleSpecies) -> Quantity:
    """Relativistic speed for a given kinetic energy: v = c*sqrt(1-(1+E/mc^2)^-2)."""
    if energy.dim != ENERGY or not energy.value > 0:
        raise ConfigError(f"kinetic energy must be positive, got {energy}")
    x = energy.value / (species.mass_si * C_SI**2)
    v = C_SI * math.sqrt(max(1.0 - 1.0 / (1.0 + x) ** 2, 0.0))
    return Quantity(min(v, C_SI), SPEED, "m/s")


def flux_curve(
    energies_ev,
    trap: TrapConfig,
    projectile: ParticleSpecies,
    rate_target: Quantity | None = None,
    convention: ImpulseConvention = ImpulseConvention.PAPER_EQ2,
) -> FluxCurve:
    """Flux of ambient projectiles that crosses the threshold at rate_target.

    Phi_min(E) = rate_target / sigma_eff(v(E)); no acceptance factor, matching
    the convention that every above-threshold crossing counts.
    """
    energies = np.asarray(energies_ev, dtype=float)
    if np.any(energies <= 0):
        raise ConfigError("energies must be positive")
    target = rate_target if rate_target is not None else quantity(1.0, "1/day")
    if target.dim != RATE or not target.value > 0:
        raise ConfigError("rate_target must be a positive rate")
    flux = np.empty_like(energies)
    for i, e_ev in enumerate(energies):
        v = speed_from_kinetic_energy(quantity(e_ev, "eV"), projectile)
        sigma = effective_cross_section(trap, abs(projectile.charge_e), v, convention)
        flux[i] = (target / sigma).to_value("1/cm2/day")
    meta = {
        "trap_omega_rad_s": trap.omega.value,
        "trap_species": trap.species.label,
        "projectile": projectile.label,
        "rate_target_per_day": target.to_value("1/day"),
        "impulse_convention": convention.value,
    }
    return FluxCurve(energies, flux, meta)
