"""Brute-force oracles: ODE fly-bys and Monte-Carlo event generation.

The ODE side integrates a trapped charge through a single fly-by with full
(non-linearized) Coulomb forcing and local error control, in nondimensional
units (lengths in b, times in tau = b/v).  It measures the momentum actually
deposited in a chosen mode and compares it with the straight-line transverse
impulse 2*lambda/(b*v), mapping out where the impulsive approximation holds.

The MC side throws projectiles sampled from a velocity distribution at a
transverse sampling disk, computes each kick from the selected impulse
convention with the kinematic speed floor applied per event, and accumulates
a weighted momentum-transfer histogram whose normalization is directly
comparable to the analytic differential rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import _kernels
from .errors import ConfigError, IntegrationError
from .kinematics import ImpulseConvention, VminMode, coulomb_strength_si, kinematic_momentum_per_speed
from .rates import MdmModel, number_density
from .trap import TrapConfig, sql_threshold
from .units import (
    ALPHA,
    C_SI,
    FREQUENCY,
    HBARC_SI,
    LENGTH,
    MOMENTUM,
    SPEED,
    ParticleSpecies,
    Quantity,
    quantity,
)
from .velocity import eta_si, sample

_AXES = {"x": 0, "y": 1, "z": 2}

MAX_ODE_SPEED_FRACTION = 0.1  # oracle is nonrelativistic


def _linear_response_envelope(omega_tau: float) -> float:
    """Scale of the post-kick displacement amplitude in units of kappa*b."""
    return min(100.0, 2.0 / omega_tau + 2.0)


def probe_charge_for_linearity(
    omega: Quantity,
    b: Quantity,
    target: ParticleSpecies,
    omega_tau_max: float,
    displacement_budget: float = 1e-3,
    target_charge_e: float | None = None,
) -> float:
    """Projectile charge keeping the target displacement below budget*b.

    The fly-by oracle should be run in the linear-response regime when
    checking the impulse formula; this sizes the coupling so the worst case
    over an omega*tau sweep stays small.
    """
    qt = abs(target.charge_e) if target_charge_e is None else abs(target_charge_e)
    worst = omega_tau_max**2 * _linear_response_envelope(omega_tau_max)
    lam_max = displacement_budget * target.mass_si * b.value**3 * omega.value**2 / worst
    return lam_max / (ALPHA * qt * HBARC_SI)


@dataclass(frozen=True)
class OdeScenario:
    """One fly-by integration: trap mode, geometry, coupling, tolerances.

    Geometry: the projectile moves along +x at closest-approach offset b*y-hat;
    the target starts at rest at the origin of an isotropic harmonic well.
    """

    omega: Quantity
    target: ParticleSpecies
    projectile_charge_e: float
    b: Quantity
    v: Quantity
    monitored_axis: str = "y"
    rtol: float = 1e-10
    window_tau: float = 50.0
    max_steps: int = 5_000_000

    def __post_init__(self):
        if self.omega.dim != FREQUENCY or not self.omega.value > 0:
            raise ConfigError("omega must be a positive angular frequency")
        if self.b.dim != LENGTH or not self.b.value > 0:
            raise ConfigError("b must be a positive length")
        if self.v.dim != SPEED or not 0 < self.v.value <= MAX_ODE_SPEED_FRACTION * C_SI:
            raise ConfigError(
                f"ODE oracle requires 0 < v <= {MAX_ODE_SPEED_FRACTION} c, got {self.v}"
            )
        if self.projectile_charge_e == 0:
            raise ConfigError("projectile charge must be nonzero")
        if self.monitored_axis not in _AXES:
            raise ConfigError(f"monitored_axis must be one of {sorted(_AXES)}")

    @property
    def tau_si(self) -> float:
        return self.b.value / self.v.value

    @property
    def omega_tau(self) -> float:
        return self.omega.value * self.tau_si


@dataclass(frozen=True)
class FlybyOdeResult:
    dp_mode: Quantity           # momentum amplitude delivered to the monitored mode
    dE_mode: Quantity
    dp_expected: Quantity       # straight-line transverse impulse 2|lambda|/(b v)
    ratio: float                # dp_mode / dp_expected
    p_final_si: np.ndarray      # instantaneous final momentum per axis (SI)
    amplitude_si: np.ndarray    # mode momentum amplitude per axis (SI)
    diagnostics: dict


def ode_flyby(scenario: OdeScenario) -> FlybyOdeResult:
    """Integrate one fly-by and report the momentum delivered to the mode.

    The mode momentum amplitude sqrt(p^2 + (m*omega*x)^2) is phase-free, so
    it is the meaningful "delivered momentum" whatever the arrival time of
    the projectile relative to the trap oscillation.
    """
    m = scenario.target.mass_si
    b = scenario.b.value
    tau = scenario.tau_si
    s = scenario.omega_tau
    lam_signed = ALPHA * scenario.projectile_charge_e * scenario.target.charge_e * HBARC_SI
    kappa = lam_signed * tau**2 / (m * b**3)

    amp_x = abs(kappa) * _linear_response_envelope(s)
    amp_u = 3.0 * abs(kappa)
    amp_w = 4.0 * kappa**2 + 1e-300
    atol = scenario.rtol * np.array([amp_x, amp_x, amp_x, amp_u, amp_u, amp_u, amp_w])

    y0 = np.zeros(7)
    w = scenario.window_tau
    y, nsteps, nrejected, status = _kernels.flyby_rk45(
        y0, -w, w, s, kappa, scenario.rtol, atol, 1e-3, scenario.max_steps
    )
    if status != _kernels.STATUS_OK:
        reason = "step-size underflow" if status == _kernels.STATUS_STEP_UNDERFLOW else "step budget exhausted"
        raise IntegrationError(
            f"fly-by integration failed: {reason}",
            diagnostics={"nsteps": nsteps, "nrejected": nrejected, "omega_tau": s},
        )

    p_unit = m * b / tau  # converts scaled velocity U to SI momentum
    pos = y[0:3]
    vel = y[3:6]
    p_final = p_unit * vel
    amplitude = p_unit * np.sqrt(vel**2 + (s * pos) ** 2)
    energy_scaled = 0.5 * float(np.dot(vel, vel)) + 0.5 * s * s * float(np.dot(pos, pos))
    work_scaled = y[6]
    denom = max(abs(energy_scaled), abs(work_scaled), 1e-300)
    energy_residual = abs(energy_scaled - work_scaled) / denom

    axis = _AXES[scenario.monitored_axis]
    dp_mode = float(amplitude[axis])
    dp_expected = 2.0 * abs(lam_signed) / (b * scenario.v.value)
    return FlybyOdeResult(
        dp_mode=Quantity(dp_mode, MOMENTUM, "eV/c"),
        dE_mode=Quantity(dp_mode**2 / (2.0 * m), (1, 2, -2, 0), "eV"),
        dp_expected=Quantity(dp_expected, MOMENTUM, "eV/c"),
        ratio=dp_mode / dp_expected,
        p_final_si=p_final,
        amplitude_si=amplitude,
        diagnostics={
            "omega_tau": s,
            "kappa": kappa,
            "nsteps": int(nsteps),
            "nrejected": int(nrejected),
            "final_displacement_over_b": float(np.linalg.norm(pos)),
            "energy_work_residual": energy_residual,
            "window_tau": w,
            "rtol": scenario.rtol,
            "kernel": _kernels.ACTIVE_KERNEL_PATH,
        },
    )


def free_oscillator_energy_drift(
    n_periods: float = 100.0, omega_tau: float = 1.0, rtol: float = 1e-13
) -> float:
    """Relative mode-energy drift of the integrator with the coupling off.

    Secular energy error grows roughly linearly with steps, so holding the
    drift under 1e-9 over 100 periods needs a per-step tolerance a couple of
    orders tighter than the fly-by default.
    """
    s = omega_tau
    y0 = np.zeros(7)
    y0[2] = 1.0  # displaced along z, away from the (silent) projectile line
    atol = rtol * np.ones(7)
    t1 = n_periods * 2.0 * math.pi / s
    y, nsteps, nrejected, status = _kernels.flyby_rk45(
        y0, 0.0, t1, s, 0.0, rtol, atol, 1e-3, 50_000_000
    )
    if status != _kernels.STATUS_OK:
        raise IntegrationError("free-oscillator drift run failed", diagnostics={"status": status})
    e0 = 0.5 * s * s
    e1 = 0.5 * float(np.dot(y[3:6], y[3:6])) + 0.5 * s * s * float(np.dot(y[0:3], y[0:3]))
    return abs(e1 - e0) / e0


@dataclass(frozen=True)
class RegimePoint:
    omega_tau: float
    ratio: float
    dp_mode_si: float
    dp_expected_si: float
    nsteps: int


def validate_impulse_regime(
    omega_tau_values=None,
    target: ParticleSpecies | None = None,
    omega: Quantity = quantity(1e8, "rad/s"),
    b: Quantity = quantity(1.0, "um"),
    projectile_charge_e: float | None = None,
    rtol: float = 1e-10,
) -> list[RegimePoint]:
    """Sweep omega*tau at fixed b and coupling by varying the projectile speed.

    The returned ratio dp_mode/(2 lambda/(b v)) tends to 1 in the impulsive
    limit and is suppressed once the fly-by lasts longer than a trap period.
    """
    from .units import ELECTRON

    tgt = target if target is not None else ELECTRON
    values = np.geomspace(1e-5, 10.0, 13) if omega_tau_values is None else np.asarray(
        omega_tau_values, dtype=float
    )
    if np.any(values <= 0):
        raise ConfigError("omega*tau values must be positive")
    q = projectile_charge_e
    if q is None:
        q = probe_charge_for_linearity(omega, b, tgt, float(values.max()))
    rows = []
    for s in values:
        v = omega.value * b.value / s
        if v > MAX_ODE_SPEED_FRACTION * C_SI:
            raise ConfigError(
                f"omega*tau={s:g} needs v={v:g} m/s > 0.1c; lower omega or raise b"
            )
        res = ode_flyby(
            OdeScenario(
                omega=omega,
                target=tgt,
                projectile_charge_e=q,
                b=b,
                v=Quantity(v, SPEED, "m/s"),
                rtol=rtol,
            )
        )
        rows.append(
            RegimePoint(
                omega_tau=float(s),
                ratio=res.ratio,
                dp_mode_si=res.dp_mode.value,
                dp_expected_si=res.dp_expected.value,
                nsteps=res.diagnostics["nsteps"],
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Monte-Carlo spectrum
# ---------------------------------------------------------------------------

_CHUNK = 1 << 20


@dataclass(frozen=True)
class McRun:
    """Monte-Carlo sampling of the fly-by momentum spectrum.

    b_cut = None uses the per-event sampling disk whose edge kick equals a
    tenth of the trap threshold, which guarantees every bin of the histogram
    window is fully covered for every sampled speed.  An explicit b_cut uses
    one fixed disk for all events (coverage then depends on speed; fine for
    monochromatic runs).
    """

    model: MdmModel
    trap: TrapConfig
    n_samples: int
    seed: int
    b_cut: Quantity | None = None
    vmin_mode: VminMode = VminMode.PAPER_LINEAR
    convention: ImpulseConvention = ImpulseConvention.PAPER_EQ2
    bins_per_decade: int = 6
    decades_below_threshold: float = 1.0
    decades_above_threshold: float = 1.5

    def __post_init__(self):
        if self.n_samples < 1:
            raise ConfigError("n_samples must be >= 1")
        if self.b_cut is not None and (
            self.b_cut.dim != LENGTH or not self.b_cut.value > 0
        ):
            raise ConfigError("b_cut must be a positive length")


@dataclass(frozen=True)
class McSpectrum:
    edges_si: np.ndarray          # momentum bin edges, kg m/s
    counts: np.ndarray
    rate_density: np.ndarray      # events/s per (kg m/s), already n_sensors-scaled
    stat_err: np.ndarray
    sum_w: np.ndarray
    sum_w2: np.ndarray
    above_threshold_rate: float   # events/s with dp >= dp_th
    above_threshold_err: float
    axial_above_threshold_rate: float  # events/s with |dp_z| >= dp_th
    acceptance_empirical: np.ndarray   # per bin: axial-pass weight fraction
    acceptance_eq4: np.ndarray         # per bin: sqrt(1 - dp_th^2/dp^2) at center
    dp_th_si: float
    meta: dict = field(default_factory=dict)


def mc_spectrum(run: McRun) -> McSpectrum:
    """Sample n_samples fly-bys and histogram the momentum kicks.

    Deterministic given (seed, n_samples, config): chunking is fixed and all
    randomness flows from one numpy Generator.
    """
    trap, model = run.trap, run.model
    dp_th = sql_threshold(trap).dp_sql.value
    lam = run.convention.factor * coulomb_strength_si(model.q_chi, trap.species.charge_e)
    c_kin = kinematic_momentum_per_speed(trap.species, run.vmin_mode, model.projectile())
    n_si = number_density(model).value * trap.n_sensors

    dp_floor = dp_th * 10.0 ** (-run.decades_below_threshold)
    v_floor = dp_floor / c_kin
    b_cut_fixed = run.b_cut.value if run.b_cut is not None else -1.0

    span = run.decades_below_threshold + run.decades_above_threshold
    nbins = max(1, round(span * run.bins_per_decade))
    edges = dp_floor * np.logspace(0.0, span, nbins + 1)

    counts = np.zeros(nbins, dtype=np.int64)
    sum_w = np.zeros(nbins)
    sum_w2 = np.zeros(nbins)
    sum_w_axial = np.zeros(nbins)
    above_rate = 0.0
    above_var = 0.0
    axial_rate = 0.0

    w_pref = n_si * math.pi / run.n_samples
    rng = np.random.default_rng(run.seed)
    kernel = _kernels.mc_events

    remaining = run.n_samples
    dp = np.empty(_CHUNK)
    dpz = np.empty(_CHUNK)
    wts = np.empty(_CHUNK)
    while remaining > 0:
        m = min(_CHUNK, remaining)
        remaining -= m
        vel = sample(model.dist, rng, m)
        vmag = np.sqrt(np.einsum("ij,ij->i", vel, vel))
        with np.errstate(divide="ignore", invalid="ignore"):
            vhatz = np.where(vmag > 0, vel[:, 2] / vmag, 0.0)
        u_disk = rng.random(m)
        phi = rng.uniform(0.0, 2.0 * math.pi, m)
        kernel(
            vmag, vhatz, u_disk, phi, lam, dp_floor, c_kin, v_floor,
            b_cut_fixed, w_pref, dp[:m], dpz[:m], wts[:m],
        )
        keep = wts[:m] > 0.0
        dpk = dp[:m][keep]
        wk = wts[:m][keep]
        counts += np.histogram(dpk, edges)[0]
        sum_w += np.histogram(dpk, edges, weights=wk)[0]
        sum_w2 += np.histogram(dpk, edges, weights=wk * wk)[0]
        axial = np.abs(dpz[:m][keep]) >= dp_th
        sum_w_axial += np.histogram(dpk[axial], edges, weights=wk[axial])[0]
        above = dpk >= dp_th
        above_rate += float(np.sum(wk[above]))
        above_var += float(np.sum(wk[above] ** 2))
        axial_rate += float(np.sum(wk[axial & above]))

    widths = np.diff(edges)
    with np.errstate(invalid="ignore", divide="ignore"):
        acc_emp = np.where(sum_w > 0, sum_w_axial / sum_w, np.nan)
    centers = np.sqrt(edges[:-1] * edges[1:])
    acc_eq4 = np.where(
        centers > dp_th, np.sqrt(np.maximum(1.0 - (dp_th / centers) ** 2, 0.0)), 0.0
    )
    return McSpectrum(
        edges_si=edges,
        counts=counts,
        rate_density=sum_w / widths,
        stat_err=np.sqrt(sum_w2) / widths,
        sum_w=sum_w,
        sum_w2=sum_w2,
        above_threshold_rate=above_rate,
        above_threshold_err=math.sqrt(above_var),
        axial_above_threshold_rate=axial_rate,
        acceptance_empirical=acc_emp,
        acceptance_eq4=acc_eq4,
        dp_th_si=dp_th,
        meta={
            "seed": run.seed,
            "n_samples": run.n_samples,
            "kernel": _kernels.ACTIVE_KERNEL_PATH,
            "vmin_mode": run.vmin_mode.value,
            "impulse_convention": run.convention.value,
            "b_cut_m": None if run.b_cut is None else run.b_cut.value,
        },
    )


def analytic_bin_rates(run: McRun, edges_si=None) -> np.ndarray:
    """Bin-integrated analytic rate (events/s per bin) matching mc_spectrum.

    Integrates the differential Rutherford rate over each histogram bin with
    the same conventions the MC applies, for direct per-bin comparison.
    """
    trap, model = run.trap, run.model
    lam = run.convention.factor * coulomb_strength_si(model.q_chi, trap.species.charge_e)
    c_kin = kinematic_momentum_per_speed(trap.species, run.vmin_mode, model.projectile())
    n_si = number_density(model).value * trap.n_sensors
    if edges_si is None:
        edges_si = mc_bin_edges(run)
    dist = model.dist

    def drdp(dp):
        return n_si * 2.0 * math.pi * lam**2 / dp**3 * eta_si(dist, dp / c_kin)

    from .velocity import support_max_speed_si

    dp_kin_edge = c_kin * support_max_speed_si(dist)
    out = np.empty(len(edges_si) - 1)
    for i, (lo, hi) in enumerate(zip(edges_si[:-1], edges_si[1:])):
        if lo >= dp_kin_edge:
            out[i] = 0.0
            continue
        hi_eff = min(hi, dp_kin_edge)
        pts = None
        val, _ = integrate.quad(
            drdp, lo, hi_eff, points=pts, epsabs=0.0, epsrel=1e-9, limit=200, full_output=1
        )[:2]
        out[i] = val
    return out


def mc_bin_edges(run: McRun) -> np.ndarray:
    dp_th = sql_threshold(run.trap).dp_sql.value
    dp_floor = dp_th * 10.0 ** (-run.decades_below_threshold)
    span = run.decades_below_threshold + run.decades_above_threshold
    nbins = max(1, round(span * run.bins_per_decade))
    return dp_floor * np.logspace(0.0, span, nbins + 1)
