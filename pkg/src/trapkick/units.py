"""Dimension-checked quantities, physical constants, and particle species.

Internally every Quantity stores its magnitude in SI base units; named units
(eV, GeV/c2, nm2, ...) are views applied at the boundaries.  Dimensions are
tracked as integer exponent vectors over (mass, length, time, charge).
Temperature is not a base dimension: the unit "K" maps to k_B kelvin, an
energy, which is the only way temperature enters the physics here.

Constants are pinned to CODATA-2018 and exposed both as plain floats (for
numeric kernels) and as Quantity objects (for dimension-checked formulas).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, DimensionError

# ---------------------------------------------------------------------------
# CODATA-2018 constants, SI floats.  Single source for the whole package.
# ---------------------------------------------------------------------------

CONSTANTS_ID = "CODATA-2018"

C_SI = 299792458.0                 # speed of light, m/s (exact)
E_CHARGE_SI = 1.602176634e-19      # elementary charge, C (exact)
H_SI = 6.62607015e-34              # Planck constant, J s (exact)
HBAR_SI = H_SI / (2.0 * math.pi)   # reduced Planck constant, J s
KB_SI = 1.380649e-23               # Boltzmann constant, J/K (exact)
ALPHA = 7.2973525693e-3            # fine-structure constant
M_E_SI = 9.1093837015e-31          # electron mass, kg
M_P_SI = 1.67262192369e-27         # proton mass, kg
AMU_SI = 1.66053906660e-27         # atomic mass unit, kg
EV_SI = E_CHARGE_SI                # 1 eV in J
HBARC_SI = HBAR_SI * C_SI          # J m

DAY_SI = 86400.0

# Base dimension exponent order: (mass, length, time, charge)
Dim = tuple
DIMENSIONLESS = (0, 0, 0, 0)
MASS = (1, 0, 0, 0)
LENGTH = (0, 1, 0, 0)
TIME = (0, 0, 1, 0)
CHARGE = (0, 0, 0, 1)
SPEED = (0, 1, -1, 0)
INVERSE_SPEED = (0, -1, 1, 0)
MOMENTUM = (1, 1, -1, 0)
ENERGY = (1, 2, -2, 0)
FREQUENCY = (0, 0, -1, 0)
AREA = (0, 2, 0, 0)
NUMBER_DENSITY = (0, -3, 0, 0)
RATE = (0, 0, -1, 0)
FLUX = (0, -2, -1, 0)
MASS_DENSITY_ENERGYLIKE = (1, -1, -2, 0)  # energy / volume, as in GeV/cm^3

_DIM_NAMES = ("M", "L", "T", "Q")


def _dim_str(dim):
    parts = [f"{n}^{e}" for n, e in zip(_DIM_NAMES, dim) if e != 0]
    return "[" + " ".join(parts) + "]" if parts else "[1]"


@dataclass(frozen=True)
class Quantity:
    """A physical value: SI magnitude plus a dimension exponent vector.

    ``unit`` is a display hint only; it never affects arithmetic.
    """

    value: float
    dim: Dim
    unit: str | None = field(default=None, compare=False)

    # -- arithmetic ---------------------------------------------------------

    def _require_same_dim(self, other, opname):
        if self.dim != other.dim:
            raise DimensionError(
                f"cannot {opname} {_dim_str(self.dim)} and {_dim_str(other.dim)}",
                dim_left=self.dim,
                dim_right=other.dim,
            )

    def __add__(self, other):
        if not isinstance(other, Quantity):
            return NotImplemented
        self._require_same_dim(other, "add")
        return Quantity(self.value + other.value, self.dim, self.unit)

    def __sub__(self, other):
        if not isinstance(other, Quantity):
            return NotImplemented
        self._require_same_dim(other, "subtract")
        return Quantity(self.value - other.value, self.dim, self.unit)

    def __mul__(self, other):
        if isinstance(other, Quantity):
            dim = tuple(a + b for a, b in zip(self.dim, other.dim))
            return Quantity(self.value * other.value, dim)
        if isinstance(other, (int, float)):
            return Quantity(self.value * other, self.dim, self.unit)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            dim = tuple(a - b for a, b in zip(self.dim, other.dim))
            return Quantity(self.value / other.value, dim)
        if isinstance(other, (int, float)):
            return Quantity(self.value / other, self.dim, self.unit)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float)):
            dim = tuple(-a for a in self.dim)
            return Quantity(other / self.value, dim)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            raise DimensionError("only integer powers keep dimensions integral")
        dim = tuple(a * n for a in self.dim)
        return Quantity(self.value**n, dim)

    def sqrt(self):
        if any(e % 2 for e in self.dim):
            raise DimensionError(f"sqrt of {_dim_str(self.dim)} has non-integer dimensions")
        dim = tuple(e // 2 for e in self.dim)
        return Quantity(math.sqrt(self.value), dim)

    def __neg__(self):
        return Quantity(-self.value, self.dim, self.unit)

    def __abs__(self):
        return Quantity(abs(self.value), self.dim, self.unit)

    def _compare(self, other, op):
        if not isinstance(other, Quantity):
            return NotImplemented
        self._require_same_dim(other, "compare")
        return op(self.value, other.value)

    def __lt__(self, other):
        return self._compare(other, lambda a, b: a < b)

    def __le__(self, other):
        return self._compare(other, lambda a, b: a <= b)

    def __gt__(self, other):
        return self._compare(other, lambda a, b: a > b)

    def __ge__(self, other):
        return self._compare(other, lambda a, b: a >= b)

    def __float__(self):
        if self.dim != DIMENSIONLESS:
            raise DimensionError(f"{_dim_str(self.dim)} quantity is not a plain number")
        return self.value

    # -- unit views ---------------------------------------------------------

    def to_value(self, unit):
        """Magnitude of this quantity expressed in ``unit`` (name or Quantity)."""
        u = unit_of(unit) if isinstance(unit, str) else unit
        if self.dim != u.dim:
            raise DimensionError(
                f"cannot express {_dim_str(self.dim)} in {_dim_str(u.dim)}",
                dim_left=self.dim,
                dim_right=u.dim,
            )
        return self.value / u.value

    def __str__(self):
        if self.unit is not None:
            return f"{self.to_value(self.unit):.6g} {self.unit}"
        return f"{self.value:.6g} {_dim_str(self.dim)}"


# ---------------------------------------------------------------------------
# Unit registry
# ---------------------------------------------------------------------------

def _u(value, dim):
    return Quantity(value, dim)


UNITS: dict[str, Quantity] = {
    # mass
    "kg": _u(1.0, MASS),
    "g": _u(1e-3, MASS),
    "u": _u(AMU_SI, MASS),
    "eV/c2": _u(EV_SI / C_SI**2, MASS),
    "keV/c2": _u(1e3 * EV_SI / C_SI**2, MASS),
    "MeV/c2": _u(1e6 * EV_SI / C_SI**2, MASS),
    "GeV/c2": _u(1e9 * EV_SI / C_SI**2, MASS),
    # length
    "m": _u(1.0, LENGTH),
    "cm": _u(1e-2, LENGTH),
    "mm": _u(1e-3, LENGTH),
    "um": _u(1e-6, LENGTH),
    "nm": _u(1e-9, LENGTH),
    "fm": _u(1e-15, LENGTH),
    "km": _u(1e3, LENGTH),
    # time
    "s": _u(1.0, TIME),
    "ms": _u(1e-3, TIME),
    "us": _u(1e-6, TIME),
    "ns": _u(1e-9, TIME),
    "day": _u(DAY_SI, TIME),
    "hr": _u(3600.0, TIME),
    # frequency (both plain cycles/s and angular share the 1/T dimension;
    # the 2*pi bookkeeping is done explicitly at the CLI / TrapConfig level)
    "Hz": _u(1.0, FREQUENCY),
    "rad/s": _u(1.0, FREQUENCY),
    "1/s": _u(1.0, RATE),
    "1/day": _u(1.0 / DAY_SI, RATE),
    # speed
    "m/s": _u(1.0, SPEED),
    "km/s": _u(1e3, SPEED),
    "c": _u(C_SI, SPEED),
    "s/m": _u(1.0, INVERSE_SPEED),
    # energy
    "J": _u(1.0, ENERGY),
    "eV": _u(EV_SI, ENERGY),
    "neV": _u(1e-9 * EV_SI, ENERGY),
    "ueV": _u(1e-6 * EV_SI, ENERGY),
    "meV": _u(1e-3 * EV_SI, ENERGY),
    "keV": _u(1e3 * EV_SI, ENERGY),
    "MeV": _u(1e6 * EV_SI, ENERGY),
    "GeV": _u(1e9 * EV_SI, ENERGY),
    "K": _u(KB_SI, ENERGY),
    "eV*s": _u(EV_SI, (1, 2, -1, 0)),
    # momentum
    "kg*m/s": _u(1.0, MOMENTUM),
    "eV/c": _u(EV_SI / C_SI, MOMENTUM),
    "keV/c": _u(1e3 * EV_SI / C_SI, MOMENTUM),
    "MeV/c": _u(1e6 * EV_SI / C_SI, MOMENTUM),
    "GeV/c": _u(1e9 * EV_SI / C_SI, MOMENTUM),
    # area
    "m2": _u(1.0, AREA),
    "cm2": _u(1e-4, AREA),
    "nm2": _u(1e-18, AREA),
    # densities and fluxes
    "1/m3": _u(1.0, NUMBER_DENSITY),
    "1/cm3": _u(1e6, NUMBER_DENSITY),
    "GeV/cm3": _u(1e9 * EV_SI / 1e-6, MASS_DENSITY_ENERGYLIKE),
    "1/m2/s": _u(1.0, FLUX),
    "1/cm2/s": _u(1e4, FLUX),
    "1/cm2/day": _u(1e4 / DAY_SI, FLUX),
    # charge
    "C": _u(1.0, CHARGE),
    "e": _u(E_CHARGE_SI, CHARGE),
}

_ALIASES = {
    "µeV": "ueV",
    "µm": "um",
    "amu": "u",
    "sec": "s",
    "days": "day",
}


def unit_of(name: str) -> Quantity:
    """Look up a unit by name."""
    key = _ALIASES.get(name, name)
    try:
        return UNITS[key]
    except KeyError:
        raise ConfigError(f"unknown unit {name!r}") from None


def quantity(value: float, unit: str) -> Quantity:
    """Build a Quantity from a magnitude and a unit name."""
    u = unit_of(unit)
    return Quantity(value * u.value, u.dim, unit)


def convert(q: Quantity, target_unit: str) -> Quantity:
    """Re-express ``q`` in ``target_unit``.

    The physical value is untouched (storage stays SI); only the display
    unit changes.  Dimension mismatch raises DimensionError naming both
    exponent vectors.
    """
    u = unit_of(target_unit)
    if q.dim != u.dim:
        raise DimensionError(
            f"cannot convert {_dim_str(q.dim)} to {target_unit!r} {_dim_str(u.dim)}",
            dim_left=q.dim,
            dim_right=u.dim,
        )
    return Quantity(q.value, q.dim, target_unit)


# Quantity-valued constants.  No k_B Quantity: the "K" unit already carries it,
# so temperatures are energies from the moment they enter.
c = Quantity(C_SI, SPEED, "m/s")
hbar = Quantity(HBAR_SI, (1, 2, -1, 0))
e_charge = Quantity(E_CHARGE_SI, CHARGE, "C")
hbarc = Quantity(HBARC_SI, (1, 3, -2, 0))


# ---------------------------------------------------------------------------
# Particle species
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParticleSpecies:
    """A projectile or trapped target: mass, charge in units of e, label."""

    mass: Quantity
    charge_e: float
    label: str

    def __post_init__(self):
        if self.mass.dim != MASS:
            raise DimensionError(f"species mass must be a mass, got {_dim_str(self.mass.dim)}")
        if not self.mass.value > 0:
            raise ConfigError(f"species mass must be positive, got {self.mass}")

    @property
    def mass_si(self) -> float:
        return self.mass.value


def custom_species(mass: Quantity, charge_e: float, label: str = "custom") -> ParticleSpecies:
    return ParticleSpecies(mass=mass, charge_e=charge_e, label=label)


ELECTRON = ParticleSpecies(quantity(M_E_SI, "kg"), -1.0, "electron")
PROTON = ParticleSpecies(quantity(M_P_SI, "kg"), +1.0, "proton")
BE9_ION = ParticleSpecies(quantity(9.0121831 * AMU_SI, "kg"), +1.0, "Be9+")


def builtin_species() -> dict[str, ParticleSpecies]:
    """Catalog of built-in species keyed by label."""
    return {s.label: s for s in (ELECTRON, PROTON, BE9_ION)}


def species_by_name(name: str) -> ParticleSpecies:
    """Case-insensitive lookup into the built-in catalog."""
    catalog = {k.lower(): v for k, v in builtin_species().items()}
    try:
        return catalog[name.lower()]
    except KeyError:
        raise ConfigError(
            f"unknown species {name!r}; built-ins: {sorted(builtin_species())}"
        ) from None
