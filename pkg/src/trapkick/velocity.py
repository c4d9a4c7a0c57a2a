"""Projectile velocity distributions, the eta integral, and sampling.

eta(v_min) = integral of f(v)/v over speeds above v_min.  It multiplies the
Rutherford momentum spectrum, so it is the one place the velocity distribution
enters the analytic rates.

Three variants:

* MaxwellBoltzmann -- gas thermalized in the lab frame.  eta has the closed
  form sqrt(2 m / (pi k T)) * exp(-m v_min^2 / (2 k T)).
* StandardHalo -- galactic truncated Maxwellian boosted to the Earth frame.
  eta is evaluated by adaptive quadrature of the boosted speed density (a
  closed form exists and is used as a cross-check in the tests, but a single
  quadrature path means fewer branches to get wrong).
* Monochromatic -- a beam or a single-speed isotropic bath; eta = 1/v above
  the cutoff.

Sampling draws lab-frame velocity vectors (n, 3) in m/s from a caller-supplied
numpy Generator, so results are deterministic given a seed and streams can be
split across workers by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConfigError, QuadratureError
from .units import C_SI, ENERGY, INVERSE_SPEED, MASS, SPEED, Quantity, quantity

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class MaxwellBoltzmann:
    """Thermal gas at rest in the lab.  temperature is k_B*T (built from the
    "K" unit); mass is the projectile mass."""

    temperature: Quantity
    mass: Quantity

    def __post_init__(self):
        if self.temperature.dim != ENERGY or not self.temperature.value > 0:
            raise ConfigError("temperature must be positive (pass quantity(T, 'K'))")
        if self.mass.dim != MASS or not self.mass.value > 0:
            raise ConfigError("mass must be a positive mass")

    @property
    def sigma_si(self) -> float:
        """1D velocity standard deviation sqrt(kT/m), m/s."""
        return math.sqrt(self.temperature.value / self.mass.value)


@dataclass(frozen=True)
class StandardHalo:
    """Truncated Maxwellian in the galactic frame, boosted by the Earth velocity.

    Requires v_earth < v_esc (true for any sane parameter choice; the default
    220/544/232 km/s set is the usual halo convention).
    """

    v0: Quantity = quantity(220.0, "km/s")
    v_esc: Quantity = quantity(544.0, "km/s")
    v_earth: Quantity = quantity(232.0, "km/s")

    def __post_init__(self):
        for name in ("v0", "v_esc", "v_earth"):
            q = getattr(self, name)
            if q.dim != SPEED or not 0 < q.value < C_SI:
                raise ConfigError(f"{name} must be a speed in (0, c), got {q}")
        if not self.v_earth.value < self.v_esc.value:
            raise ConfigError("v_earth must be below v_esc")

    @property
    def norm_esc(self) -> float:
        """Normalization deficit of the truncated Maxwellian."""
        z = self.v_esc.value / self.v0.value
        return math.erf(z) - 2.0 * z * math.exp(-z * z) / _SQRT_PI

    @property
    def max_speed_si(self) -> float:
        return self.v_esc.value + self.v_earth.value


@dataclass(frozen=True)
class Monochromatic:
    """Single-speed projectiles: isotropic if direction is None, else a beam."""

    speed: Quantity
    direction: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.speed.dim != SPEED or not 0 < self.speed.value < C_SI:
            raise ConfigError(f"speed must be in (0, c), got {self.speed}")
        if self.direction is not None:
            n = math.sqrt(sum(x * x for x in self.direction))
            if n == 0:
                raise ConfigError("direction must be a nonzero vector")


VelocityDistribution = MaxwellBoltzmann | StandardHalo | Monochromatic


# ---------------------------------------------------------------------------
# Speed densities
# ---------------------------------------------------------------------------

def speed_pdf(dist: VelocityDistribution, v_si):
    """Lab-frame speed density [s/m].  Vectorized over v_si.

    Monochromatic has a delta-function density and is rejected here.
    """
    v = np.asarray(v_si, dtype=float)
    if isinstance(dist, MaxwellBoltzmann):
        s2 = dist.sigma_si**2
        return (
            4.0 * math.pi * v**2 * (2.0 * math.pi * s2) ** -1.5 * np.exp(-(v**2) / (2.0 * s2))
        )
    if isinstance(dist, StandardHalo):
        v0, ve, vesc = dist.v0.value, dist.v_earth.value, dist.v_esc.value
        upper = np.minimum(v + ve, vesc)
        out = (
            v
            / (_SQRT_PI * v0 * ve * dist.norm_esc)
            * (np.exp(-((v - ve) ** 2) / v0**2) - np.exp(-(upper**2) / v0**2))
        )
        return np.where((v >= 0) & (v <= dist.max_speed_si), np.maximum(out, 0.0), 0.0)
    raise ConfigError("monochromatic distributions have no speed density")


# ---------------------------------------------------------------------------
# eta
# ---------------------------------------------------------------------------

def mb_eta_si(dist: MaxwellBoltzmann, vmin_si: float) -> float:
    """Closed form: sqrt(2 m / (pi k T)) * exp(-m v_min^2 / (2 k T))."""
    s = dist.sigma_si
    return math.sqrt(2.0 / math.pi) / s * math.exp(-(vmin_si**2) / (2.0 * s * s))


def _halo_eta_si(dist: StandardHalo, vmin_si: float) -> float:
    if vmin_si >= dist.max_speed_si:
        return 0.0
    v0, ve, vesc = dist.v0.value, dist.v_earth.value, dist.v_esc.value
    norm = _SQRT_PI * v0 * ve * dist.norm_esc

    def integrand(v):
        upper = min(v + ve, vesc)
        return (math.exp(-((v - ve) ** 2) / v0**2) - math.exp(-(upper**2) / v0**2)) / norm

    kink = vesc - ve
    pts = [kink] if vmin_si < kink < dist.max_speed_si else None
    val, abserr = integrate.quad(
        integrand, vmin_si, dist.max_speed_si, points=pts, epsabs=0.0, epsrel=1e-10,
        limit=200, full_output=1,
    )[:2]
    floor = 1e-16 / v0
    if abs(val) < floor:
        return max(val, 0.0)
    if abserr > 1e-8 * abs(val):
        raise QuadratureError(
            f"halo eta quadrature did not converge at v_min={vmin_si:g} m/s",
            partial=val,
            abserr=abserr,
        )
    return val


def eta_si(dist: VelocityDistribution, vmin_si: float) -> float:
    """Float fast path for eta, SI (s/m)."""
    if vmin_si < 0:
        raise ConfigError("v_min must be nonnegative")
    if isinstance(dist, MaxwellBoltzmann):
        return mb_eta_si(dist, vmin_si)
    if isinstance(dist, StandardHalo):
        return _halo_eta_si(dist, vmin_si)
    v = dist.speed.value
    return 1.0 / v if v > vmin_si else 0.0


def eta(dist: VelocityDistribution, v_min: Quantity) -> Quantity:
    """Mean inverse speed above v_min: integral of f(v)/v over v > v_min."""
    if v_min.dim != SPEED:
        raise ConfigError(f"v_min must be a speed, got {v_min}")
    return Quantity(eta_si(dist, v_min.value), INVERSE_SPEED, "s/m")


def mean_inverse_speed(dist: VelocityDistribution) -> Quantity:
    """eta at zero threshold."""
    return eta(dist, quantity(0.0, "m/s"))


def support_max_speed_si(dist: VelocityDistribution) -> float:
    """Largest speed with nonzero density (inf for the thermal gas)."""
    if isinstance(dist, MaxwellBoltzmann):
        return math.inf
    if isinstance(dist, StandardHalo):
        return dist.max_speed_si
    return dist.speed.value


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _isotropic_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    cos_t = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    sin_t = np.sqrt(1.0 - cos_t**2)
    return np.column_stack((sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t))


def sample(dist: VelocityDistribution, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n lab-frame velocity vectors, shape (n, 3), m/s."""
    if isinstance(dist, MaxwellBoltzmann):
        return rng.normal(0.0, dist.sigma_si, (n, 3))
    if isinstance(dist, StandardHalo):
        v0, vesc, ve = dist.v0.value, dist.v_esc.value, dist.v_earth.value
        sigma = v0 / math.sqrt(2.0)
        out = np.empty((n, 3))
        filled = 0
        while filled < n:
            draw = rng.normal(0.0, sigma, (max(n - filled, 1024), 3))
            keep = draw[np.einsum("ij,ij->i", draw, draw) < vesc * vesc]
            take = min(len(keep), n - filled)
            out[filled : filled + take] = keep[:take]
            filled += take
        out[:, 2] -= ve  # boost galactic -> lab (Earth moves at +v_e z-hat)
        return out
    v = dist.speed.value
    if dist.direction is None:
        return v * _isotropic_directions(rng, n)
    d = np.asarray(dist.direction, dtype=float)
    d = d / np.linalg.norm(d)
    return np.tile(v * d, (n, 1))


# ---------------------------------------------------------------------------
# JSON config block
# ---------------------------------------------------------------------------

def dist_from_config(block: dict, mass: Quantity | None = None) -> VelocityDistribution:
    """Build a distribution from its JSON block.

    {"type":"mb","T_K":300} | {"type":"halo","v0_kms":220,"vesc_kms":544,
    "vearth_kms":232} | {"type":"mono","v_kms":...,"direction":[x,y,z]?}

    The thermal variant needs the projectile mass, supplied separately
    (it lives in the model block).
    """
    known = {
        "mb": {"type", "T_K"},
        "halo": {"type", "v0_kms", "vesc_kms", "vearth_kms"},
        "mono": {"type", "v_kms", "direction"},
    }
    kind = block.get("type")
    if kind not in known:
        raise ConfigError(f"distribution type must be one of {sorted(known)}, got {kind!r}")
    extra = set(block) - known[kind]
    if extra:
        raise ConfigError(f"unknown keys in distribution block: {sorted(extra)}")
    if kind == "mb":
        if mass is None:
            raise ConfigError("thermal distribution needs the projectile mass")
        return MaxwellBoltzmann(quantity(float(block["T_K"]), "K"), mass)
    if kind == "halo":
        return StandardHalo(
            quantity(float(block.get("v0_kms", 220.0)), "km/s"),
            quantity(float(block.get("vesc_kms", 544.0)), "km/s"),
            quantity(float(block.get("vearth_kms", 232.0)), "km/s"),
        )
    direction = block.get("direction")
    return Monochromatic(
        quantity(float(block["v_kms"]), "km/s"),
        tuple(float(x) for x in direction) if direction is not None else None,
    )
