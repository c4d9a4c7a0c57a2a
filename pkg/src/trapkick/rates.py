"""Millicharged-particle number density and Rutherford event rates.

The differential rate above a momentum transfer dp is
    dR/ddp = n * 2*pi*lambda^2 / dp^3 * eta(v_min(dp)),
with lambda = alpha*q_chi*|q_target|*hbar*c (doubled under the exact-transverse
impulse convention) and v_min the slowest projectile able to deliver dp.

Integration runs in log(dp) to tame the dp^-3 spectrum.  For the thermal
distribution (whose eta decays as a Gaussian and can underflow long before the
physics becomes uninteresting) the exponential peak is factored out
analytically, so the natural log of the rate stays finite even when the rate
itself is below the smallest float64.  RateResult carries both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy import integrate

from .errors import ConfigError, NoSensitivityError, QuadratureError
from .kinematics import ImpulseConvention, VminMode, coulomb_strength_si, kinematic_momentum_per_speed
from .trap import TrapConfig, sql_threshold
from .units import (
    C_SI,
    MASS,
    MASS_DENSITY_ENERGYLIKE,
    MOMENTUM,
    NUMBER_DENSITY,
    RATE,
    ParticleSpecies,
    Quantity,
    quantity,
)
from .velocity import (
    MaxwellBoltzmann,
    VelocityDistribution,
    eta_si,
    support_max_speed_si,
)

DEFAULT_RHO_DM = quantity(0.3, "GeV/cm3")
DEFAULT_F_Q = 4e-3


@dataclass(frozen=True)
class MdmModel:
    """Ambient charged-particle population: mass, charge, abundance, kinematics."""

    m_chi: Quantity
    q_chi: float
    dist: VelocityDistribution
    f_q: float = DEFAULT_F_Q
    rho_dm: Quantity = DEFAULT_RHO_DM

    def __post_init__(self):
        if self.m_chi.dim != MASS or not self.m_chi.value > 0:
            raise ConfigError(f"m_chi must be a positive mass, got {self.m_chi}")
        if not self.q_chi > 0:
            raise ConfigError(f"q_chi must be positive, got {self.q_chi}")
        if not 0 < self.f_q <= 1:
            raise ConfigError(f"f_q must be in (0, 1], got {self.f_q}")
        if self.rho_dm.dim != MASS_DENSITY_ENERGYLIKE or not self.rho_dm.value > 0:
            raise ConfigError("rho_dm must be a positive mass density (e.g. GeV/cm3)")

    def projectile(self) -> ParticleSpecies:
        return ParticleSpecies(self.m_chi, self.q_chi, "mdm")


@dataclass(frozen=True)
class RateResult:
    """Integrated event rate plus the conventions that produced it.

    log_rate is ln(rate / (1/s)) and stays finite in regimes where the rate
    itself underflows float64; it is -inf only when the configuration is
    kinematically dead.
    """

    rate: Quantity
    log_rate: float
    dp_th: Quantity
    apply_acceptance: bool
    vmin_mode: VminMode
    convention: ImpulseConvention
    n_sensors: int


def number_density(model: MdmModel) -> Quantity:
    """n = (rho_dm / m_chi) * f_q."""
    n_si = model.rho_dm.value / (model.m_chi.value * C_SI**2) * model.f_q
    return Quantity(n_si, NUMBER_DENSITY, "1/cm3")


def _lambda_k_si(model: MdmModel, trap: TrapConfig, convention: ImpulseConvention) -> float:
    return convention.factor * coulomb_strength_si(model.q_chi, trap.species.charge_e)


def differential_rate(
    model: MdmModel,
    trap: TrapConfig,
    dp: Quantity,
    vmin_mode: VminMode = VminMode.PAPER_LINEAR,
    convention: ImpulseConvention = ImpulseConvention.PAPER_EQ2,
) -> Quantity:
    """Events per unit time per unit momentum transfer at dp, for one sensor."""
    if dp.dim != MOMENTUM or not dp.value > 0:
        raise ConfigError(f"dp must be a positive momentum, got {dp}")
    n_si = number_density(model).value
    lam = _lambda_k_si(model, trap, convention)
    c_kin = kinematic_momentum_per_speed(trap.species, vmin_mode, model.projectile())
    val = n_si * 2.0 * math.pi * lam**2 / dp.value**3 * eta_si(model.dist, dp.value / c_kin)
    return Quantity(val, (-1, -1, 0, 0), None)


def _integrate_hard_support(drdp, a, dp_max, kink, rtol):
    """Rate integral in u = ln(dp) over a finite kinematic support."""
    lo, hi = math.log(a), math.log(dp_max)

    def g(u):
        dp = math.exp(u)
        return drdp(dp) * dp

    pts = None
    if kink is not None and a < kink < dp_max:
        pts = [math.log(kink)]
    val, abserr = integrate.quad(
        g, lo, hi, points=pts, epsabs=0.0, epsrel=0.1 * rtol, limit=400, full_output=1
    )[:2]
    if val != 0.0 and abserr > rtol * abs(val):
        raise QuadratureError(
            "rate quadrature did not reach the requested tolerance",
            partial=val,
            abserr=abserr,
        )
    return val


def _integrate_mb_shifted(beta_a2, apply_acceptance, rtol):
    """Tail-stable factor I = int_0^inf e^{-2u} e^{-beta*a^2*(e^{2u}-1)} f_A du.

    Accumulates fixed-width segments in u until the running tail is below
    1e-9 of the total, which bounds the truncation error well under rtol.
    """

    def g(u):
        shifted = beta_a2 * math.expm1(2.0 * u) + 2.0 * u
        if shifted > 745.0:
            return 0.0
        f_a = math.sqrt(-math.expm1(-2.0 * u)) if apply_acceptance else 1.0
        return math.exp(-shifted) * f_a

    total = 0.0
    err = 0.0
    width = 2.0 / max(1.0, beta_a2)  # track the decay scale of the integrand
    for k in range(25):
        seg, seg_err = integrate.quad(
            g, k * width, (k + 1) * width, epsabs=0.0, epsrel=0.1 * rtol, limit=200,
            full_output=1,
        )[:2]
        total += seg
        err += seg_err
        if total > 0.0 and abs(seg) < 1e-9 * total:
            break
    if total != 0.0 and err > rtol * abs(total):
        raise QuadratureError(
            "thermal rate quadrature did not reach the requested tolerance",
            partial=total,
            abserr=err,
        )
    return total


def integrated_rate(
    model: MdmModel,
    trap: TrapConfig,
    apply_acceptance: bool = True,
    vmin_mode: VminMode = VminMode.PAPER_LINEAR,
    convention: ImpulseConvention = ImpulseConvention.PAPER_EQ2,
    rtol: float = 1e-6,
) -> RateResult:
    """Total above-threshold event rate for the trap's n_sensors."""
    dp_th = sql_threshold(trap).dp_sql.value
    n_si = number_density(model).value
    lam = _lambda_k_si(model, trap, convention)
    c_kin = kinematic_momentum_per_speed(trap.species, vmin_mode, model.projectile())
    dist = model.dist

    if isinstance(dist, MaxwellBoltzmann):
        sigma = dist.sigma_si
        beta = 1.0 / (2.0 * (sigma * c_kin) ** 2)  # eta = S * exp(-beta*dp^2)
        s_pref = math.sqrt(2.0 / math.pi) / sigma
        beta_a2 = beta * dp_th**2
        shifted = _integrate_mb_shifted(beta_a2, apply_acceptance, rtol)
        if shifted <= 0.0:
            log_rate = -math.inf
        else:
            log_rate = (
                math.log(n_si * 2.0 * math.pi * lam**2 * s_pref)
                - 2.0 * math.log(dp_th)
                - beta_a2
                + math.log(shifted)
                + math.log(trap.n_sensors)
            )
        rate = math.exp(log_rate) if log_rate > -745.0 else 0.0
    else:
        v_sup = support_max_speed_si(dist)
        dp_max = c_kin * v_sup
        if not dp_max > dp_th:
            rate, log_rate = 0.0, -math.inf
        else:
            def drdp(dp):
                val = n_si * 2.0 * math.pi * lam**2 / dp**3 * eta_si(dist, dp / c_kin)
                if apply_acceptance:
                    val *= math.sqrt(max(1.0 - (dp_th / dp) ** 2, 0.0))
                return val

            kink = None
            if hasattr(dist, "v_esc"):
                kink = c_kin * (dist.v_esc.value - dist.v_earth.value)
            rate = trap.n_sensors * _integrate_hard_support(drdp, dp_th, dp_max, kink, rtol)
            log_rate = math.log(rate) if rate > 0.0 else -math.inf

    return RateResult(
        rate=Quantity(rate, RATE, "1/s"),
        log_rate=log_rate,
        dp_th=Quantity(dp_th, MOMENTUM, "eV/c"),
        apply_acceptance=apply_acceptance,
        vmin_mode=vmin_mode,
        convention=convention,
        n_sensors=trap.n_sensors,
    )


def rate_at_unit_charge(model: MdmModel, trap: TrapConfig, **kwargs) -> RateResult:
    """integrated_rate evaluated at q_chi = 1 (rates scale exactly as q^2)."""
    return integrated_rate(replace(model, q_chi=1.0), trap, **kwargs)


def require_alive(result: RateResult) -> RateResult:
    if not math.isfinite(result.log_rate):
        raise NoSensitivityError(
            "zero event rate at unit charge: configuration is kinematically dead"
        )
    return result
