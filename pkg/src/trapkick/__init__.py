"""Sensitivity forecasting for trapped electrons/ions used as impulse detectors."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DimensionError,
    IntegrationError,
    NoSensitivityError,
    QuadratureError,
    TrapkickError,
)
from .units import (
    BE9_ION,
    ELECTRON,
    PROTON,
    ParticleSpecies,
    Quantity,
    builtin_species,
    convert,
    custom_species,
    quantity,
    species_by_name,
)
from .trap import (
    ThresholdReport,
    TrapConfig,
    TrapKind,
    duty_cycle_max,
    energy_deposit,
    scale_heating_rate,
    sql_threshold,
)
from .kinematics import (
    FlybyEvent,
    ImpulseConvention,
    VminMode,
    acceptance,
    effective_cross_section,
    flyby_time,
    impulse,
    impulsive_ok,
    threshold_impact_parameter,
    v_min,
)
from .velocity import (
    MaxwellBoltzmann,
    Monochromatic,
    StandardHalo,
    dist_from_config,
    eta,
    mean_inverse_speed,
    sample,
    speed_pdf,
)
from .rates import MdmModel, RateResult, differential_rate, integrated_rate, number_density
from .sensitivity import (
    Exposure,
    FluxCurve,
    MinCharge,
    SensitivityCurve,
    flux_curve,
    min_charge,
    sensitivity_curve,
)
from .tof import TofSetup, energy_resolution, required_baseline, velocity_resolution
from .validate import (
    McRun,
    McSpectrum,
    OdeScenario,
    analytic_bin_rates,
    free_oscillator_energy_drift,
    mc_spectrum,
    ode_flyby,
    probe_charge_for_linearity,
    validate_impulse_regime,
)
