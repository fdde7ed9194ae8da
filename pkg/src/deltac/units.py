"""Unit systems for the physical layer.

``EV_ANGSTROM`` measures energy in eV and length in angstrom with hbar = 1,
so masses carry units of eV^-1 angstrom^-2 (m c^2 / (hbar c)^2).
"""

from __future__ import annotations

from dataclasses import dataclass

HBAR_C_EV_ANGSTROM = 1973.269804
ELECTRON_REST_ENERGY_EV = 510998.95
HBAR_SI = 1.054571817e-34
ELECTRON_MASS_SI = 9.1093837015e-31
EV_IN_JOULE = 1.602176634e-19
ANGSTROM_IN_METRE = 1e-10


@dataclass(frozen=True)
class UnitSystem:
    name: str
    hbar: float
    electron_mass: float
    energy_unit_eV: float
    length_unit_angstrom: float

    def energy_to_eV(self, value: float) -> float:
        return value * self.energy_unit_eV

    def length_to_angstrom(self, value: float) -> float:
        return value * self.length_unit_angstrom

    def energy_from_eV(self, value: float) -> float:
        return value / self.energy_unit_eV

    def length_from_angstrom(self, value: float) -> float:
        return value / self.length_unit_angstrom


EV_ANGSTROM = UnitSystem("eV-angstrom", 1.0,
                         ELECTRON_REST_ENERGY_EV / HBAR_C_EV_ANGSTROM ** 2, 1.0, 1.0)
SI = UnitSystem("SI", HBAR_SI, ELECTRON_MASS_SI, 1 / EV_IN_JOULE, 1 / ANGSTROM_IN_METRE)
NATURAL = UnitSystem("natural", 1.0, 1.0, 1.0, 1.0)

SYSTEMS = {u.name: u for u in (EV_ANGSTROM, SI, NATURAL)}
