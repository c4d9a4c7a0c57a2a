"""Command-line front end.

Subcommands: threshold, xsec, rate, sensitivity, flux, tof, validate.
Configuration may come from a JSON file (--config, schema-checked, unknown
keys rejected) with individual flags taking precedence.  Frequencies are
deliberately split into --omega (rad/s, taken literally) and --freq-hz
(cycles/s, multiplied by 2*pi) so either reading of a quoted trap frequency
can be requested explicitly.

Exit codes: 0 success, 1 configuration/validation error, 2 numeric failure.
Errors are mirrored as one-line JSON on stderr for machine consumption.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np
import jsonschema

from .errors import (
    ConfigError,
    IntegrationError,
    NoSensitivityError,
    QuadratureError,
    TrapkickError,
)
from .io import write_curve, write_manifest
from .kinematics import ImpulseConvention, VminMode, effective_cross_section
from .rates import MdmModel, differential_rate, integrated_rate
from .sensitivity import Exposure, flux_curve, sensitivity_curve
from .tof import TofSetup, energy_resolution, required_baseline, velocity_resolution
from .trap import TrapConfig, TrapKind, duty_cycle_max, sql_threshold
from .units import (
    C_SI,
    Quantity,
    SPEED,
    custom_species,
    quantity,
    species_by_name,
)
from .validate import McRun, OdeScenario, mc_spectrum, analytic_bin_rates, ode_flyby, validate_impulse_regime

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "trap": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["penning", "paul"]},
                "species": {"type": "string"},
                "species_mass_gev": {"type": "number"},
                "species_charge_e": {"type": "number"},
                "omega_rad_s": {"type": "number"},
                "freq_hz": {"type": "number"},
                "n_sensors": {"type": "integer", "minimum": 1},
                "heating_rate_per_s": {"type": "number"},
                "electrode_distance_m": {"type": "number"},
            },
        },
        "model": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "m_chi_gev": {"type": "number"},
                "q_chi": {"type": "number"},
                "f_q": {"type": "number"},
                "rho_gev_cm3": {"type": "number"},
            },
        },
        "distribution": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "type": {"enum": ["mb", "halo", "mono"]},
                "T_K": {"type": "number"},
                "v0_kms": {"type": "number"},
                "vesc_kms": {"type": "number"},
                "vearth_kms": {"type": "number"},
                "v_kms": {"type": "number"},
                "direction": {"type": "array", "items": {"type": "number"}},
            },
        },
        "exposure": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_obs_day": {"type": "number"},
                "n_required": {"type": "number"},
            },
        },
        "conventions": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "impulse": {"enum": ["paper", "exact"]},
                "vmin": {"enum": ["paper", "reduced-mass"]},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["csv", "json"]},
            },
        },
        "seed": {"type": "integer"},
    },
}


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}") from exc
    return cfg


def _pick(flag_value, cfg_block: dict, key, default=None):
    """Flag beats config beats default."""
    if flag_value is not None:
        return flag_value
    return cfg_block.get(key, default)


def _omega_from(args, trap_cfg: dict) -> Quantity:
    flag_omega = getattr(args, "omega", None)
    flag_freq = getattr(args, "freq_hz", None)
    if flag_omega is not None and flag_freq is not None:
        raise ConfigError("give either --omega or --freq-hz, not both")
    if flag_omega is not None:
        return quantity(float(flag_omega), "rad/s")
    if flag_freq is not None:
        return quantity(2.0 * math.pi * float(flag_freq), "rad/s")
    if "omega_rad_s" in trap_cfg and "freq_hz" in trap_cfg:
        raise ConfigError("config trap block has both omega_rad_s and freq_hz")
    if "omega_rad_s" in trap_cfg:
        return quantity(float(trap_cfg["omega_rad_s"]), "rad/s")
    if "freq_hz" in trap_cfg:
        return quantity(2.0 * math.pi * float(trap_cfg["freq_hz"]), "rad/s")
    raise ConfigError("a trap frequency is required (--omega rad/s or --freq-hz)")


def _species_from(args, trap_cfg: dict, flag="species"):
    name = _pick(getattr(args, flag, None), trap_cfg, "species", "electron")
    mass_gev = _pick(getattr(args, "species_mass_gev", None), trap_cfg, "species_mass_gev")
    charge = _pick(getattr(args, "species_charge_e", None), trap_cfg, "species_charge_e")
    if mass_gev is not None or charge is not None:
        if mass_gev is None or charge is None:
            raise ConfigError("custom species needs both --species-mass-gev and --species-charge-e")
        return custom_species(quantity(float(mass_gev), "GeV/c2"), float(charge), name or "custom")
    return species_by_name(name)


def _trap_from(args, cfg: dict) -> tuple[TrapConfig, dict]:
    trap_cfg = cfg.get("trap", {})
    omega = _omega_from(args, trap_cfg)
    species = _species_from(args, trap_cfg)
    kind = TrapKind(_pick(getattr(args, "kind", None), trap_cfg, "kind", "penning"))
    n_sensors = int(_pick(getattr(args, "n_sensors", None), trap_cfg, "n_sensors", 1))
    heating = _pick(getattr(args, "heating_rate_per_s", None), trap_cfg, "heating_rate_per_s")
    dist_m = _pick(getattr(args, "electrode_distance_m", None), trap_cfg, "electrode_distance_m")
    trap = TrapConfig(
        kind=kind,
        omega=omega,
        species=species,
        electrode_distance=quantity(float(dist_m), "m") if dist_m is not None else None,
        heating_rate=quantity(float(heating), "1/s") if heating is not None else None,
        n_sensors=n_sensors,
    )
    resolved = {
        "kind": kind.value,
        "species": species.label,
        "omega_rad_s": omega.value,
        "n_sensors": n_sensors,
        "heating_rate_per_s": heating,
        "electrode_distance_m": dist_m,
    }
    return trap, resolved


def _dist_block_from(args, cfg: dict) -> dict:
    block = dict(cfg.get("distribution", {"type": "halo"}))
    kind = getattr(args, "dist", None)
    if kind is not None:
        block = {"type": kind} if block.get("type") != kind else block
        block["type"] = kind
    per_flag = {
        "temp_k": "T_K",
        "v_kms": "v_kms",
        "v0_kms": "v0_kms",
        "vesc_kms": "vesc_kms",
        "vearth_kms": "vearth_kms",
    }
    for attr, key in per_flag.items():
        val = getattr(args, attr, None)
        if val is not None:
            block[key] = val
    block.setdefault("type", "halo")
    if block["type"] == "mb":
        block.setdefault("T_K", 300.0)
    allowed = {
        "mb": {"type", "T_K"},
        "halo": {"type", "v0_kms", "vesc_kms", "vearth_kms"},
        "mono": {"type", "v_kms", "direction"},
    }[block["type"]]
    block = {k: v for k, v in block.items() if k in allowed}
    return block


def _model_from(args, cfg: dict, dist) -> tuple[MdmModel, dict]:
    model_cfg = cfg.get("model", {})
    m_chi = float(_pick(getattr(args, "m_chi_gev", None), model_cfg, "m_chi_gev", 1.0))
    q_chi = float(_pick(getattr(args, "q_chi", None), model_cfg, "q_chi", 1e-3))
    f_q = float(_pick(getattr(args, "f_q", None), model_cfg, "f_q", 4e-3))
    rho = float(_pick(getattr(args, "rho_gev_cm3", None), model_cfg, "rho_gev_cm3", 0.3))
    model = MdmModel(
        m_chi=quantity(m_chi, "GeV/c2"),
        q_chi=q_chi,
        dist=dist,
        f_q=f_q,
        rho_dm=quantity(rho, "GeV/cm3"),
    )
    return model, {"m_chi_gev": m_chi, "q_chi": q_chi, "f_q": f_q, "rho_gev_cm3": rho}


def _conventions_from(args, cfg: dict):
    conv_cfg = cfg.get("conventions", {})
    impulse = _pick(getattr(args, "impulse_convention", None), conv_cfg, "impulse", "paper")
    vmin = _pick(getattr(args, "vmin_mode", None), conv_cfg, "vmin", "paper")
    return ImpulseConvention(impulse), VminMode(vmin)


def _build_dist(args, cfg, model_mass):
    from .velocity import dist_from_config

    block = _dist_block_from(args, cfg)
    return dist_from_config(block, mass=model_mass), block


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def cmd_threshold(args, cfg) -> int:
    trap, resolved = _trap_from(args, cfg)
    rep = sql_threshold(trap)
    print(f"dp_sql = {rep.dp_sql.to_value('eV/c'):.6g} eV/c")
    print(f"energy_threshold = {rep.energy_threshold.to_value('eV'):.6g} eV "
          f"({rep.energy_threshold.to_value('ueV'):.6g} ueV)")
    print(f"x0 = {rep.x0.to_value('m'):.6g} m")
    if trap.heating_rate is not None and trap.heating_rate.value > 0:
        print(f"duty_cycle_max = {duty_cycle_max(trap).to_value('s'):.6g} s")
    return 0


def cmd_xsec(args, cfg) -> int:
    trap, resolved = _trap_from(args, cfg)
    conv, _ = _conventions_from(args, cfg)
    if args.v_over_c is not None and args.v_kms is not None:
        raise ConfigError("give either --v-over-c or --v-kms, not both")
    if args.v_over_c is not None:
        v = Quantity(float(args.v_over_c) * C_SI, SPEED, "m/s")
    elif args.v_kms is not None:
        v = quantity(float(args.v_kms), "km/s")
    else:
        raise ConfigError("a projectile speed is required (--v-over-c or --v-kms)")
    sigma = effective_cross_section(trap, args.q, v, conv)
    print(f"sigma_eff = {sigma.to_value('nm2'):.6g} nm2")
    return 0


def cmd_rate(args, cfg) -> int:
    trap, trap_resolved = _trap_from(args, cfg)
    conv, vmin_mode = _conventions_from(args, cfg)
    m_chi_gev = float(_pick(args.m_chi_gev, cfg.get("model", {}), "m_chi_gev", 1.0))
    dist, dist_block = _build_dist(args, cfg, quantity(m_chi_gev, "GeV/c2"))
    model, model_resolved = _model_from(args, cfg, dist)
    apply_acc = not args.no_acceptance
    result = integrated_rate(model, trap, apply_acceptance=apply_acc,
                             vmin_mode=vmin_mode, convention=conv)
    per_day = result.rate.to_value("1/day")
    print(f"dp_th = {result.dp_th.to_value('eV/c'):.6g} eV/c")
    print(f"rate = {result.rate.to_value('1/s'):.6g} /s ({per_day:.6g} /day)")
    print(f"log_rate = {result.log_rate:.6g} (ln of rate in 1/s)")
    if args.spectrum_out:
        dp_th = result.dp_th.value
        grid = dp_th * np.logspace(0.0, args.spectrum_decades, args.spectrum_points)
        drdp = np.array([
            differential_rate(model, trap, Quantity(dp, (1, 1, -1, 0)), vmin_mode, conv).value
            for dp in grid
        ])
        ev_c = quantity(1.0, "eV/c").value
        cols = {
            "dp_eV_c": grid / ev_c,
            "dRdp_per_s_per_eVc": drdp * ev_c,
        }
        meta = {
            "subcommand": "rate",
            "impulse_convention": conv.value,
            "vmin_mode": vmin_mode.value,
            "apply_acceptance": apply_acc,
            **{f"trap.{k}": v for k, v in trap_resolved.items()},
            **{f"model.{k}": v for k, v in model_resolved.items()},
            **{f"distribution.{k}": v for k, v in dist_block.items()},
        }
        out = write_curve(args.spectrum_out, cols, meta, args.format)
        write_manifest(out, meta)
        print(f"wrote {out}")
    return 0


def cmd_sensitivity(args, cfg) -> int:
    trap, trap_resolved = _trap_from(args, cfg)
    conv, vmin_mode = _conventions_from(args, cfg)
    dist, dist_block = _build_dist(args, cfg, quantity(1.0, "GeV/c2"))
    model_cfg = cfg.get("model", {})
    f_q = float(_pick(args.f_q, model_cfg, "f_q", 4e-3))
    rho = float(_pick(args.rho_gev_cm3, model_cfg, "rho_gev_cm3", 0.3))
    exp_cfg = cfg.get("exposure", {})
    exposure = Exposure(
        t_obs=quantity(float(_pick(args.t_obs_day, exp_cfg, "t_obs_day", 1.0)), "day"),
        n_required=float(_pick(args.n_required, exp_cfg, "n_required", 3.0)),
    )
    masses = np.geomspace(args.m_min_gev, args.m_max_gev, args.n_masses)
    curve = sensitivity_curve(
        masses, trap, dist, exposure,
        f_q=f_q, rho_dm=quantity(rho, "GeV/cm3"),
        apply_acceptance=not args.no_acceptance,
        vmin_mode=vmin_mode, convention=conv,
    )
    cols = {
        "m_chi_GeV": curve.masses_gev,
        "q_min": curve.q_min,
        "log10_q_min": curve.log10_q_min,
    }
    meta = {"subcommand": "sensitivity", **{f"curve.{k}": v for k, v in curve.metadata.items()},
            **{f"distribution.{k}": v for k, v in dist_block.items()}}
    out = write_curve(args.out, cols, meta, args.format)
    write_manifest(out, meta)
    print(f"wrote {out}")
    return 0


def cmd_flux(args, cfg) -> int:
    trap, trap_resolved = _trap_from(args, cfg)
    conv, _ = _conventions_from(args, cfg)
    projectile = species_by_name(args.projectile)
    energies = np.geomspace(args.e_min_ev, args.e_max_ev, args.n_energies)
    curve = flux_curve(energies, trap, projectile,
                       rate_target=quantity(args.rate_per_day, "1/day"),
                       convention=conv)
    cols = {"E_eV": curve.energies_ev, "flux_cm2_day": curve.flux_cm2_day}
    meta = {"subcommand": "flux", **{f"curve.{k}": v for k, v in curve.metadata.items()}}
    out = write_curve(args.out, cols, meta, args.format)
    write_manifest(out, meta)
    print(f"wrote {out}")
    return 0


def cmd_tof(args, cfg) -> int:
    trap, _ = _trap_from(args, cfg)
    projectile = _species_from(args, cfg.get("trap", {}))
    energy = quantity(args.energy_ev, "eV")
    de = quantity(args.de_ev, "eV")
    res = required_baseline(energy, de, trap, projectile)
    print(f"required_baseline = {res.length.to_value('mm'):.6g} mm"
          + (" [warning: relativistic input, formula degrades]" if res.relativistic_warning else ""))
    if args.baseline_mm is not None:
        setup = TofSetup(trap, quantity(args.baseline_mm, "mm"), projectile)
        v = math.sqrt(2.0 * energy.value / projectile.mass_si)
        dv = velocity_resolution(setup, Quantity(v, SPEED, "m/s"))
        de_at = energy_resolution(setup, energy)
        print(f"velocity_resolution = {dv.to_value('m/s'):.6g} m/s at v = {v:.6g} m/s")
        print(f"energy_resolution = {de_at.to_value('eV'):.6g} eV at L = {args.baseline_mm:g} mm")
    return 0


def cmd_validate_ode(args, cfg) -> int:
    omega = _omega_from(args, cfg.get("trap", {}))
    target = _species_from(args, cfg.get("trap", {}))
    values = args.omega_tau if args.omega_tau else None
    rows = validate_impulse_regime(
        omega_tau_values=values,
        target=target,
        omega=omega,
        b=quantity(args.b_um, "um"),
        projectile_charge_e=args.q_proj,
        rtol=args.rtol,
    )
    for r in rows:
        print(f"omega_tau = {r.omega_tau:.3e}  ratio = {r.ratio:.6f}  steps = {r.nsteps}")
    if args.out:
        cols = {
            "omega_tau": [r.omega_tau for r in rows],
            "ratio": [r.ratio for r in rows],
        }
        meta = {
            "subcommand": "validate ode",
            "omega_rad_s": omega.value,
            "b_um": args.b_um,
            "target": target.label,
            "rtol": args.rtol,
        }
        out = write_curve(args.out, cols, meta, args.format)
        write_manifest(out, meta)
        print(f"wrote {out}")
    return 0


def cmd_validate_mc(args, cfg) -> int:
    trap, trap_resolved = _trap_from(args, cfg)
    conv, vmin_mode = _conventions_from(args, cfg)
    m_chi_gev = float(_pick(args.m_chi_gev, cfg.get("model", {}), "m_chi_gev", 1.0))
    dist, dist_block = _build_dist(args, cfg, quantity(m_chi_gev, "GeV/c2"))
    model, model_resolved = _model_from(args, cfg, dist)
    seed = int(_pick(args.seed, cfg, "seed", 1))
    run = McRun(
        model=model,
        trap=trap,
        n_samples=int(args.n),
        seed=seed,
        b_cut=quantity(args.b_cut_nm, "nm") if args.b_cut_nm is not None else None,
        vmin_mode=vmin_mode,
        convention=conv,
    )
    spec = mc_spectrum(run)
    analytic = analytic_bin_rates(run, spec.edges_si)
    widths = np.diff(spec.edges_si)
    print(f"above-threshold rate = {spec.above_threshold_rate:.6g} /s "
          f"+/- {spec.above_threshold_err:.3g}")
    rate = integrated_rate(model, trap, apply_acceptance=False,
                           vmin_mode=vmin_mode, convention=conv)
    print(f"analytic rate        = {rate.rate.to_value('1/s'):.6g} /s")
    ok = spec.sum_w > 0
    if np.any(ok):
        ratio = np.divide(spec.sum_w, analytic, out=np.ones_like(analytic), where=analytic > 0)
        worst = np.nanmax(np.abs(ratio[ok & (spec.counts >= 100)] - 1.0)) if np.any(
            ok & (spec.counts >= 100)) else math.nan
        print(f"worst bin |mc/analytic - 1| (bins with >=100 counts) = {worst:.4f}")
    if args.out:
        ev_c = quantity(1.0, "eV/c").value
        cols = {
            "dp_bin_lo": spec.edges_si[:-1] / ev_c,
            "dp_bin_hi": spec.edges_si[1:] / ev_c,
            "rate_density": spec.rate_density * ev_c,
            "stat_err": spec.stat_err * ev_c,
        }
        meta = {
            "subcommand": "validate mc",
            "dp_unit": "eV/c",
            "rate_density_unit": "1/s/(eV/c)",
            "seed": seed,
            "n_samples": run.n_samples,
            "impulse_convention": conv.value,
            "vmin_mode": vmin_mode.value,
            **{f"trap.{k}": v for k, v in trap_resolved.items()},
            **{f"model.{k}": v for k, v in model_resolved.items()},
            **{f"distribution.{k}": v for k, v in dist_block.items()},
        }
        out = write_curve(args.out, cols, meta, args.format)
        write_manifest(out, meta, seed=seed)
        print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_trap_flags(p):
    p.add_argument("--omega", type=float, help="monitored-mode angular frequency, rad/s")
    p.add_argument("--freq-hz", type=float, help="monitored-mode frequency in Hz (times 2*pi)")
    p.add_argument("--species", type=str, help="trapped species (electron, proton, Be9+)")
    p.add_argument("--species-mass-gev", type=float, help="custom species mass, GeV/c^2")
    p.add_argument("--species-charge-e", type=float, help="custom species charge, units of e")
    p.add_argument("--kind", choices=["penning", "paul"], help="trap kind (reporting only)")
    p.add_argument("--n-sensors", type=int, help="number of monitored charges")
    p.add_argument("--heating-rate-per-s", type=float, help="heating rate, phonons/s")
    p.add_argument("--electrode-distance-m", type=float, help="electrode distance, m")


def _add_convention_flags(p):
    p.add_argument("--impulse-convention", choices=["paper", "exact"],
                   help="impulse formula: lambda/(b v) or the exact 2x")
    p.add_argument("--vmin-mode", choices=["paper", "reduced-mass"],
                   help="kinematic floor: dp/m_target or dp/(2 mu)")


def _add_model_flags(p):
    p.add_argument("--m-chi-gev", type=float, help="projectile mass, GeV/c^2")
    p.add_argument("--q-chi", type=float, help="projectile charge, units of e")
    p.add_argument("--f-q", type=float, help="charged fraction of the mass density")
    p.add_argument("--rho-gev-cm3", type=float, help="local mass density, GeV/cm^3")


def _add_dist_flags(p):
    p.add_argument("--dist", choices=["mb", "halo", "mono"], help="velocity distribution")
    p.add_argument("--temp-k", type=float, help="thermal temperature, K")
    p.add_argument("--v-kms", type=float, help="monochromatic speed, km/s")
    p.add_argument("--v0-kms", type=float, help="halo dispersion parameter, km/s")
    p.add_argument("--vesc-kms", type=float, help="halo escape speed, km/s")
    p.add_argument("--vearth-kms", type=float, help="Earth speed in the halo frame, km/s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trapkick",
        description="Impulse-detection thresholds, rates, and sensitivity for trapped charges",
    )
    parser.add_argument("--config", type=str, help="JSON config file (flags override it)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("threshold", help="quantum-limited momentum/energy threshold")
    _add_trap_flags(p)
    p.set_defaults(handler=cmd_threshold)

    p = sub.add_parser("xsec", help="effective cross-section for an above-threshold kick")
    _add_trap_flags(p)
    _add_convention_flags(p)
    p.add_argument("--q", type=float, default=1.0, help="projectile charge, units of e")
    p.add_argument("--v-over-c", type=float, help="projectile speed as a fraction of c")
    p.add_argument("--v-kms", type=float, help="projectile speed, km/s")
    p.set_defaults(handler=cmd_xsec)

    p = sub.add_parser("rate", help="integrated above-threshold event rate")
    _add_trap_flags(p)
    _add_convention_flags(p)
    _add_model_flags(p)
    _add_dist_flags(p)
    p.add_argument("--no-acceptance", action="store_true", help="skip the single-axis factor")
    p.add_argument("--spectrum-out", type=str, help="write (dp, dR/ddp) CSV here")
    p.add_argument("--spectrum-points", type=int, default=64)
    p.add_argument("--spectrum-decades", type=float, default=1.5)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(handler=cmd_rate)

    p = sub.add_parser("sensitivity", help="minimum detectable charge vs mass")
    _add_trap_flags(p)
    _add_convention_flags(p)
    _add_dist_flags(p)
    p.add_argument("--f-q", type=float)
    p.add_argument("--rho-gev-cm3", type=float)
    p.add_argument("--m-min-gev", type=float, default=1e-3)
    p.add_argument("--m-max-gev", type=float, default=1e3)
    p.add_argument("--n-masses", type=int, default=25)
    p.add_argument("--t-obs-day", type=float)
    p.add_argument("--n-required", type=float)
    p.add_argument("--no-acceptance", action="store_true")
    p.add_argument("--out", type=str, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(handler=cmd_sensitivity)

    p = sub.add_parser("flux", help="detectable ambient-particle flux vs kinetic energy")
    _add_trap_flags(p)
    _add_convention_flags(p)
    p.add_argument("--projectile", type=str, default="electron")
    p.add_argument("--e-min-ev", type=float, default=1e-3)
    p.add_argument("--e-max-ev", type=float, default=1e9)
    p.add_argument("--n-energies", type=int, default=61)
    p.add_argument("--rate-per-day", type=float, default=1.0)
    p.add_argument("--out", type=str, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(handler=cmd_flux)

    p = sub.add_parser("tof", help="time-of-flight baseline and resolution")
    _add_trap_flags(p)
    p.add_argument("--energy-ev", type=float, required=True)
    p.add_argument("--de-ev", type=float, required=True)
    p.add_argument("--baseline-mm", type=float)
    p.set_defaults(handler=cmd_tof)

    p = sub.add_parser("validate", help="brute-force oracles")
    vsub = p.add_subparsers(dest="validate_kind", required=True)

    q = vsub.add_parser("ode", help="fly-by ODE check of the impulse approximation")
    _add_trap_flags(q)
    q.add_argument("--omega-tau", type=float, action="append",
                   help="omega*tau point (repeatable); default sweep 1e-5..10")
    q.add_argument("--b-um", type=float, default=1.0, help="impact parameter, um")
    q.add_argument("--q-proj", type=float, help="projectile charge (default: auto linear probe)")
    q.add_argument("--rtol", type=float, default=1e-10)
    q.add_argument("--out", type=str)
    q.add_argument("--format", choices=["csv", "json"], default="csv")
    q.set_defaults(handler=cmd_validate_ode)

    q = vsub.add_parser("mc", help="Monte-Carlo check of the rate spectrum")
    _add_trap_flags(q)
    _add_convention_flags(q)
    _add_model_flags(q)
    _add_dist_flags(q)
    q.add_argument("--n", type=float, default=1e6, help="number of sampled events")
    q.add_argument("--seed", type=int)
    q.add_argument("--b-cut-nm", type=float, help="fixed sampling disk radius, nm")
    q.add_argument("--out", type=str)
    q.add_argument("--format", choices=["csv", "json"], default="csv")
    q.set_defaults(handler=cmd_validate_mc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.handler(args, cfg)
    except ConfigError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    except (QuadratureError, IntegrationError, NoSensitivityError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    except TrapkickError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
