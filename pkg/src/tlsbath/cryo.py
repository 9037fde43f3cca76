"""Cryogenic measurement budget: photon thermalization along the input line,
stage heat loads, and thermal impedances between the sample and the cold bath.

Powers in watts, temperatures in kelvin, frequencies in Hz. Attenuations are
power ratios expressed in dB.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .constants import HBAR, KB_OVER_H, LORENTZ_NUMBER
from .errors import DomainError, ModelValidityWarning

__all__ = [
    "ChainStage",
    "bose_occupancy",
    "default_input_chain",
    "occupancy_cascade",
    "endpoint_occupancy",
    "chain_dissipation",
    "total_attenuation_db",
    "attenuate_dbm",
    "dbm_to_watts",
    "watts_to_dbm",
    "kapitza_resistance",
    "kapitza_step",
    "wiedemann_franz_step",
    "helium3_heat_capacity",
    "thermal_time_constant",
    "dissipated_power",
    "circulating_power",
    "passive_conduction_load",
]

# 3He/metal boundary: R_K * T ~ 41.5 K^2/W for the sample cell geometry
KAPITZA_COEFFICIENT = 41.5
# Fermi-liquid heat capacity of 0.1 mol 3He, C = HEAT_CAPACITY_SLOPE * T
HEAT_CAPACITY_SLOPE = 2.3


@dataclass(frozen=True)
class ChainStage:
    """One thermalization point on the input line.

    attenuation_db is the lumped attenuator mounted at the stage;
    cable_loss_db is the loss of the cable run arriving at it, treated as
    thermalized at the stage temperature.
    """

    name: str
    temperature: float
    attenuation_db: float = 0.0
    cable_loss_db: float = 0.0

    def __post_init__(self):
        if self.temperature <= 0:
            raise DomainError(f"stage {self.name!r} temperature must be positive")
        if self.attenuation_db < 0 or self.cable_loss_db < 0:
            raise DomainError(f"stage {self.name!r} losses must be non-negative")

    @property
    def loss_db(self) -> float:
        return self.attenuation_db + self.cable_loss_db


def default_input_chain() -> list[ChainStage]:
    """Input line of the demagnetization fridge: 60 dB of attenuators plus
    6 dB of cable loss, ending at the nuclear stage."""
    return [
        ChainStage("RTP", 300.0),
        ChainStage("PT1P", 50.0, 0.0, 1.0),
        ChainStage("PT2P", 4.0, 10.0, 1.0),
        ChainStage("SP", 0.8, 10.0, 1.0),
        ChainStage("CP", 0.1, 20.0, 1.0),
        ChainStage("MCP", 0.013, 20.0, 1.5),
        ChainStage("ANDRP", 0.001, 0.0, 0.5),
    ]


def bose_occupancy(frequency: float, temperature: float) -> float:
    """Bose-Einstein mean photon number at the given frequency and
    temperature. Zero temperature is allowed and gives zero."""
    if frequency <= 0:
        raise DomainError("frequency must be positive")
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    if temperature == 0.0:
        return 0.0
    x = frequency / (KB_OVER_H * temperature)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def occupancy_cascade(frequency: float,
                      stages: list[ChainStage]) -> list[tuple[str, float]]:
    """Photon occupancy seen looking toward the sample after each stage.

    The first stage sources its equilibrium occupancy; each later stage
    attenuates what arrives and adds its own thermal emission:
    n -> n / A + (1 - 1/A) n_stage. A lossless chain passes the source
    occupancy through unchanged.
    """
    if not stages:
        raise DomainError("chain must contain at least one stage")
    out = []
    n = bose_occupancy(frequency, stages[0].temperature)
    out.append((stages[0].name, n))
    for stage in stages[1:]:
        a = 10.0 ** (stage.loss_db / 10.0)
        n = n / a + (1.0 - 1.0 / a) * bose_occupancy(frequency, stage.temperature)
        out.append((stage.name, n))
    return out


def endpoint_occupancy(frequency: float, stages: list[ChainStage]) -> float:
    """Occupancy at the far end of the chain."""
    return occupancy_cascade(frequency, stages)[-1][1]


def chain_dissipation(input_power: float,
                      stages: list[ChainStage]) -> list[tuple[str, float]]:
    """Power deposited at each stage by a signal of the given input power.

    The first stage is the source and dissipates nothing; the returned list
    ends with an extra ("delivered", power) entry. Entries sum to the input
    power exactly.
    """
    if input_power < 0:
        raise DomainError("input power must be non-negative")
    if not stages:
        raise DomainError("chain must contain at least one stage")
    rows = [(stages[0].name, 0.0)]
    p = input_power
    for stage in stages[1:]:
        a = 10.0 ** (stage.loss_db / 10.0)
        p_out = p / a
        rows.append((stage.name, p - p_out))
        p = p_out
    rows.append(("delivered", p))
    return rows


def total_attenuation_db(stages: list[ChainStage]) -> float:
    return sum(s.loss_db for s in stages)


def attenuate_dbm(level_dbm: float, loss_db: float) -> float:
    """Signal level after a lossy section; plain dB arithmetic."""
    if loss_db < 0:
        raise DomainError("loss must be non-negative")
    return level_dbm - loss_db


def dbm_to_watts(level_dbm: float) -> float:
    return 1e-3 * 10.0 ** (level_dbm / 10.0)


def watts_to_dbm(power: float) -> float:
    if power <= 0:
        raise DomainError("power must be positive")
    return 10.0 * math.log10(power / 1e-3)


def kapitza_resistance(temperature: float,
                       coefficient: float = KAPITZA_COEFFICIENT) -> float:
    """Boundary resistance of the metal/3He interface, K/W.

    R_K = coefficient / T: the acoustic-mismatch T^-3 law softened by the
    measured near-1/T behaviour of sintered cells in the sub-mK range.
    """
    if temperature <= 0:
        raise DomainError("temperature must be positive")
    if coefficient <= 0:
        raise DomainError("coefficient must be positive")
    return coefficient / temperature


def kapitza_step(power: float, cold_temperature: float,
                 coefficient: float = KAPITZA_COEFFICIENT) -> float:
    """Temperature on the hot side of the boundary for a steady heat flow.

    Linear-response estimate with the resistance evaluated at the cold side;
    adequate while the step stays small against the absolute temperature.
    """
    if power < 0:
        raise DomainError("power must be non-negative")
    return cold_temperature + kapitza_resistance(cold_temperature, coefficient) * power


def wiedemann_franz_step(power: float, resistance: float,
                         cold_temperature: float,
                         lorentz: float = LORENTZ_NUMBER) -> float:
    """Hot-end temperature of a metal link carrying a steady heat flow.

    Integrating k ~ L0 T / R gives T_hot = sqrt(T_cold^2 + 2 R Q / L0).
    resistance is the electrical resistance of the link in ohms.
    """
    if power < 0:
        raise DomainError("power must be non-negative")
    if resistance <= 0 or lorentz <= 0:
        raise DomainError("resistance and Lorentz number must be positive")
    if cold_temperature < 0:
        raise DomainError("cold temperature must be non-negative")
    return math.sqrt(cold_temperature**2 + 2.0 * resistance * power / lorentz)


def helium3_heat_capacity(temperature: float, moles: float = 0.1) -> float:
    """Heat capacity of liquid 3He in the Fermi-liquid regime, J/K.

    Linear in temperature; the slope is calibrated for 0.1 mol and scaled
    by the amount of substance. Warns when used above 10 mK where the
    linear form degrades.
    """
    if temperature <= 0:
        raise DomainError("temperature must be positive")
    if moles <= 0:
        raise DomainError("moles must be positive")
    if temperature > 0.010:
        warnings.warn(
            "linear 3He heat capacity used above 10 mK",
            ModelValidityWarning,
            stacklevel=2,
        )
    return HEAT_CAPACITY_SLOPE * temperature * (moles / 0.1)


def thermal_time_constant(temperature: float, moles: float = 0.1,
                          coefficient: float = KAPITZA_COEFFICIENT) -> float:
    """Relaxation time of the helium volume through the boundary resistance,
    R_K(T) * C(T). Temperature-independent for R ~ 1/T and C ~ T."""
    return kapitza_resistance(temperature, coefficient) * helium3_heat_capacity(
        temperature, moles
    )


def dissipated_power(photon_number: float, frequency: float, qi: float) -> float:
    """Internal dissipation of a driven resonator, watts.

    pi N hbar omega0^2 / (2 Qi) with omega0 = 2 pi f0: the stored energy
    leaking at the internal loss rate.
    """
    if photon_number < 0:
        raise DomainError("photon number must be non-negative")
    if frequency <= 0 or qi <= 0:
        raise DomainError("frequency and Qi must be positive")
    omega0 = 2.0 * math.pi * frequency
    return math.pi * photon_number * HBAR * omega0**2 / (2.0 * qi)


def circulating_power(photon_number: float, frequency: float) -> float:
    """Power circulating in the resonator, N hbar omega0^2, watts."""
    if photon_number < 0:
        raise DomainError("photon number must be non-negative")
    if frequency <= 0:
        raise DomainError("frequency must be positive")
    omega0 = 2.0 * math.pi * frequency
    return photon_number * HBAR * omega0**2


def passive_conduction_load(area: float, length: float, k0: float,
                            exponent: float, hot_temperature: float,
                            cold_temperature: float) -> float:
    """Steady conduction through a support with k(T) = k0 T^exponent, watts.

    Q = (A/L) k0 (T_hot^(m+1) - T_cold^(m+1)) / (m+1); exponent -1 is out of
    range for this closed form.
    """
    if area <= 0 or length <= 0 or k0 <= 0:
        raise DomainError("geometry and conductivity must be positive")
    if hot_temperature <= cold_temperature or cold_temperature < 0:
        raise DomainError("need hot_temperature > cold_temperature >= 0")
    m = exponent + 1.0
    if m == 0.0:
        raise DomainError("exponent -1 needs the logarithmic form")
    return (area / length) * k0 * (hot_temperature**m - cold_temperature**m) / m
