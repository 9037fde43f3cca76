"""Dielectric response of the immersion liquid and spin-bath thermometry.

Frequencies in Hz, temperatures in kelvin. Loss tangents and filling factors
are dimensionless.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from .constants import KB_OVER_H
from .errors import DomainError, ModelValidityWarning

__all__ = [
    "FieldSample",
    "load_field_samples",
    "filling_factor",
    "fill_freq_shift",
    "film_freq_shift",
    "pressure_eps",
    "LossBound",
    "loss_tangent_bound",
    "t1_bound",
    "esr_peak_ratio",
    "esr_equivalent_temperature",
    "he3_bcs_gap",
    "EPS_HELIUM3",
    "EPS_SAPPHIRE",
    "HYDROGEN_HYPERFINE",
]

EPS_HELIUM3 = 1.0426  # saturated vapor pressure, GHz band
EPS_SAPPHIRE = 10.4
HYDROGEN_HYPERFINE = 1.42e9  # Hz, atomic hydrogen ground-state splitting


@dataclass(frozen=True)
class FieldSample:
    """One cell of an electrostatic field map: region label, relative
    permittivity, |E|^2, and the cell volume (any consistent units)."""

    region: str
    eps: float
    e_squared: float
    volume: float

    def __post_init__(self):
        if self.eps < 1.0:
            raise DomainError("relative permittivity below 1")
        if self.e_squared < 0 or self.volume <= 0:
            raise DomainError("need e_squared >= 0 and volume > 0")

    @property
    def energy(self) -> float:
        return self.eps * self.e_squared * self.volume


def load_field_samples(path: str | Path) -> list[FieldSample]:
    """Read a field map from CSV with columns region,eps,e_squared,volume."""
    samples = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            samples.append(
                FieldSample(
                    region=row["region"].strip(),
                    eps=float(row["eps"]),
                    e_squared=float(row["e_squared"]),
                    volume=float(row["volume"]),
                )
            )
    if not samples:
        raise DomainError(f"no field samples in {path}")
    return samples


def filling_factor(samples: list[FieldSample], region: str = "helium") -> float:
    """Fraction of the electric energy stored in the named region."""
    total = math.fsum(s.energy for s in samples)
    if total <= 0:
        raise DomainError("field map carries no electric energy")
    part = math.fsum(s.energy for s in samples if s.region == region)
    if part == 0.0:
        warnings.warn(f"region {region!r} absent from field map",
                      ModelValidityWarning, stacklevel=2)
    return part / total


def fill_freq_shift(resonance: float, filling: float,
                    eps: float = EPS_HELIUM3) -> float:
    """Resonance shift when the region fills with dielectric, Hz (negative).

    First-order perturbation: delta nu = -(F/2)(eps - 1) nu0.
    """
    if resonance <= 0:
        raise DomainError("resonance must be positive")
    if not 0 <= filling <= 1:
        raise DomainError("filling factor must lie in [0, 1]")
    if eps < 1.0:
        raise DomainError("relative permittivity below 1")
    return -0.5 * filling * (eps - 1.0) * resonance


def film_freq_shift(resonance: float, filling: float, coverage: float,
                    eps: float = EPS_HELIUM3) -> float:
    """Shift from a thin film wetting only part of the field region:
    the full-immersion shift scaled by the covered energy fraction."""
    if not 0 <= coverage <= 1:
        raise DomainError("coverage must lie in [0, 1]")
    return coverage * fill_freq_shift(resonance, filling, eps)


def pressure_eps(density_ratio: float, eps0: float = EPS_HELIUM3) -> float:
    """Permittivity after compressing the liquid by the given density ratio.

    Clausius-Mossotti with fixed molecular polarizability: the reduced
    polarization q = r (eps0-1)/(eps0+2) maps to eps = (1+2q)/(1-q).
    """
    if density_ratio <= 0:
        raise DomainError("density ratio must be positive")
    if eps0 < 1.0:
        raise DomainError("relative permittivity below 1")
    q = density_ratio * (eps0 - 1.0) / (eps0 + 2.0)
    if q >= 1.0:
        raise DomainError("density ratio beyond the Clausius-Mossotti pole")
    return (1.0 + 2.0 * q) / (1.0 - q)


@dataclass(frozen=True)
class LossBound:
    """Upper bound on the added dielectric loss, as F tan(delta) and, where a
    filling factor was supplied, tan(delta)."""

    f_tan_delta: float
    tan_delta: float | None
    resolvable: bool


def loss_tangent_bound(qi_full, qi_empty,
                       filling: float | None = None) -> LossBound:
    """Bound the loss tangent of the filling liquid from single-photon Qi.

    F tan(delta) <= 1/mean(Qi_full) - 1/mean(Qi_empty). When scatter makes
    the difference non-positive the added loss is unresolvable; the signed
    value is returned with resolvable=False and a warning.
    """
    qf = [float(q) for q in qi_full]
    qe = [float(q) for q in qi_empty]
    if not qf or not qe:
        raise DomainError("need at least one Qi value on each side")
    if min(qf) <= 0 or min(qe) <= 0:
        raise DomainError("Qi values must be positive")
    bound = 1.0 / (math.fsum(qf) / len(qf)) - 1.0 / (math.fsum(qe) / len(qe))
    resolvable = bound > 0
    if not resolvable:
        warnings.warn("added loss below measurement scatter",
                      ModelValidityWarning, stacklevel=2)
    tan_delta = None
    if filling is not None:
        if not 0 < filling <= 1:
            raise DomainError("filling factor must lie in (0, 1]")
        tan_delta = bound / filling
    return LossBound(bound, tan_delta, resolvable)


def t1_bound(resonance: float, f_tan_delta: float) -> float:
    """Qubit relaxation-time bound implied by a dielectric loss level,
    T1 <= 1/(nu0 F tan(delta)), seconds.

    Convention note: quoting against 1/(2 pi nu0 F tan delta) would be a
    factor 2 pi shorter; this uses the plain-frequency form.
    """
    if resonance <= 0 or f_tan_delta <= 0:
        raise DomainError("resonance and loss must be positive")
    return 1.0 / (resonance * f_tan_delta)


def esr_peak_ratio(temperature: float,
                   splitting: float = HYDROGEN_HYPERFINE) -> tuple[float, float]:
    """Boltzmann intensity ratio of the upper to lower hyperfine transition.

    Returns (ratio, normalized) with normalized = ratio / (1 + ratio), the
    fraction of the total intensity in the upper peak. Serves as a primary
    thermometer around the equivalent temperature of the splitting.
    """
    if temperature <= 0:
        raise DomainError("temperature must be positive")
    if splitting <= 0:
        raise DomainError("splitting must be positive")
    x = splitting / (KB_OVER_H * temperature)
    ratio = 0.0 if x > 700.0 else math.exp(-x)
    return ratio, ratio / (1.0 + ratio)


def esr_equivalent_temperature(splitting: float = HYDROGEN_HYPERFINE) -> float:
    """Temperature at which the peak ratio falls to 1/e, h A / k_B."""
    if splitting <= 0:
        raise DomainError("splitting must be positive")
    return splitting / KB_OVER_H


def he3_bcs_gap(temperature: float, t_c: float = 0.9e-3) -> float:
    """Superfluid 3He pair-breaking gap as a frequency, Hz.

    BCS-like interpolation 3.06 k_B T_c sqrt(1 - T/T_c) / h, zero at and
    above T_c (with a warning: the normal state has no gap).
    """
    if temperature < 0 or t_c <= 0:
        raise DomainError("need temperature >= 0 and t_c > 0")
    if temperature >= t_c:
        warnings.warn("above the superfluid transition; gap is zero",
                      ModelValidityWarning, stacklevel=2)
        return 0.0
    return 3.06 * KB_OVER_H * t_c * math.sqrt(1.0 - temperature / t_c)
