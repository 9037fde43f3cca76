"""Noise and thermal budgets for immersion-cooled superconducting resonators.

Submodules
----------
gtm
    Interacting-bath noise and loss model: relaxation and dephasing rates,
    saturation photon numbers, Qi and S_y versus drive and temperature.
bath
    Telegraph-fluctuator ensembles, trace synthesis, Pound-loop readout.
spectral
    Overlapping Allan variance, 1/f level extraction, segmented periodogram.
cryo
    Input-chain photon occupancy, dissipation budgets, thermal impedances.
dielectric
    Filling factors, immersion frequency shifts, loss bounds, ESR thermometry.
fitkit
    Levenberg-Marquardt core and the model-specific fits built on it.
config, cli, io
    TOML run configs, the command-line scenarios, CSV trace formats.
"""

__version__ = "0.1.0"

from . import bath, config, cryo, dielectric, fitkit, gtm, io, spectral
from .errors import (
    DomainError,
    ModelValidityWarning,
    SaturatedRegimeError,
    UnstableLoopError,
    UsageError,
)

__all__ = [
    "__version__",
    "bath",
    "config",
    "cryo",
    "dielectric",
    "fitkit",
    "gtm",
    "io",
    "spectral",
    "DomainError",
    "ModelValidityWarning",
    "SaturatedRegimeError",
    "UnstableLoopError",
    "UsageError",
]
