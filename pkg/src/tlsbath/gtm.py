"""Tunneling-state bath model for frequency noise in superconducting resonators.

Rates and energies are handled as ordinary frequencies (Hz); temperatures in
kelvin; fields in V/m. The one-phonon relaxation rate is evaluated in SI
internally and converted on return.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .constants import DEBYE, ELECTRON_VOLT, HBAR, KB_OVER_H, PLANCK
from .errors import DomainError, SaturatedRegimeError

__all__ = [
    "MaterialAcoustics",
    "TLSParams",
    "BathConfig",
    "DriveState",
    "SAPPHIRE",
    "HELIUM3_SVP",
    "HELIUM3_5BAR",
    "vacuum_default",
    "helium_default",
    "phonon_relax_rate",
    "relax_rate_ratio",
    "elastic_interaction",
    "dephasing_rate",
    "dephasing_rate_raw",
    "critical_field",
    "critical_photon_number",
    "single_photon_rabi",
    "saturation_ratio",
    "activated_fluctuator_count",
    "noise_magnitude",
    "crossover_temperature",
    "crossover_noise_model",
    "qi_gtm",
    "qi_empirical",
    "with_noise_reference",
]


@dataclass(frozen=True)
class MaterialAcoustics:
    """Acoustic host medium for one-phonon relaxation.

    density : kg/m^3
    sound_velocity : m/s (isotropic effective value)
    deformation_potential : J (coupling of the tunneling states to strain)
    """

    density: float
    sound_velocity: float
    deformation_potential: float

    def __post_init__(self):
        if self.density <= 0 or self.sound_velocity <= 0:
            raise DomainError("density and sound velocity must be positive")
        if self.deformation_potential <= 0:
            raise DomainError("deformation potential must be positive")


@dataclass(frozen=True)
class TLSParams:
    """A single tunneling state: energy splitting and tunneling element in Hz,
    dipole moment projection in debye."""

    energy: float
    tunneling: float
    dipole_projection: float

    def __post_init__(self):
        if self.energy <= 0:
            raise DomainError("energy must be positive")
        if not 0 < self.tunneling <= self.energy:
            raise DomainError("tunneling element must satisfy 0 < tunneling <= energy")
        if self.dipole_projection <= 0:
            raise DomainError("dipole projection must be positive")


@dataclass(frozen=True)
class BathConfig:
    """Ensemble-level bath parameters.

    gamma2_anchor pins the dephasing power law: (temperature_K, rate_Hz).
    nc_calibration is kappa in N_c = kappa * Gamma_1 * Gamma_2(T); the default
    puts N_c at one photon for the vacuum defaults at the anchor temperature.
    noise_scale is the single overall calibration constant for noise_magnitude.
    """

    mu: float = 0.25
    chi: float = 4e-4
    gamma2_anchor: tuple[float, float] = (0.075, 3.0e6)
    gamma1: float = 300.0
    gamma1_min: float = 1.0e2
    gamma1_max: float = 1.0e3
    fluct_density: float = 2.387e25  # 1/(m^3 K); activated count 10 at 0.1 K with r0=1e-8
    interaction_radius: float = 1.0e-8
    u0: float = 1.0e10
    p_gamma: float = 1.0
    c_const: float = math.e
    f_tan_delta: float = 4.0e-5
    nc_calibration: float = 1.0 / (300.0 * 3.0e6)
    noise_scale: float = 1.0

    def __post_init__(self):
        if not 0 <= self.mu < 1:
            raise DomainError("mu must lie in [0, 1)")
        if self.gamma1_min <= 0 or self.gamma1_max <= self.gamma1_min:
            raise DomainError("relaxation-rate window must satisfy 0 < min < max")
        if not self.gamma1_min <= self.gamma1 <= self.gamma1_max:
            raise DomainError("gamma1 must lie within [gamma1_min, gamma1_max]")
        t_k, rate = self.gamma2_anchor
        if t_k <= 0 or rate <= 0:
            raise DomainError("dephasing anchor must have positive temperature and rate")
        for name in ("chi", "fluct_density", "interaction_radius", "u0",
                     "p_gamma", "c_const", "f_tan_delta", "nc_calibration",
                     "noise_scale"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")


@dataclass(frozen=True)
class DriveState:
    """Resonator drive: mean photon number and resonance frequency (Hz)."""

    photon_number: float
    resonance: float

    def __post_init__(self):
        if self.photon_number < 0:
            raise DomainError("photon number must be non-negative")
        if self.resonance <= 0:
            raise DomainError("resonance frequency must be positive")

    def field_ratio(self, bath: BathConfig, temperature: float) -> float:
        """Drive field over the saturation field at this temperature."""
        return saturation_ratio(self, bath, temperature)


SAPPHIRE = MaterialAcoustics(4.0e3, 1.0e4, 1.0 * ELECTRON_VOLT)
HELIUM3_SVP = MaterialAcoustics(60.0, 200.0, 1.0e-3 * ELECTRON_VOLT)
# +30% density and sound velocity relative to saturated vapor pressure
HELIUM3_5BAR = MaterialAcoustics(60.0 * 1.3, 200.0 * 1.3, 1.0e-3 * ELECTRON_VOLT)


def vacuum_default() -> BathConfig:
    """Bath parameters for a resonator in vacuum."""
    return BathConfig()


def helium_default() -> BathConfig:
    """Bath parameters for an immersed resonator: relaxation faster by 1e3."""
    return BathConfig(gamma1=3.0e5, gamma1_min=1.0e5, gamma1_max=1.0e6)


def _coth(x: float) -> float:
    if x > 350.0:
        return 1.0
    return 1.0 / math.tanh(x)


def phonon_relax_rate(tls: TLSParams, medium: MaterialAcoustics,
                      temperature: float) -> float:
    """One-phonon relaxation rate of a tunneling state, Hz.

    Gamma_1 = M^2 d0^2 E / (2 pi rho hbar^4 v^5) * coth(E / 2 k_B T),
    with the splitting E and tunneling element d0 given as frequencies and
    converted to energies internally. temperature = 0 gives the spontaneous
    rate (coth -> 1).
    """
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    e_j = PLANCK * tls.energy
    d0_j = PLANCK * tls.tunneling
    m = medium.deformation_potential
    rate = (m * m * d0_j * d0_j * e_j) / (
        2.0 * math.pi * medium.density * HBAR**4 * medium.sound_velocity**5
    )
    if temperature == 0.0:
        return rate
    x = tls.energy / (2.0 * KB_OVER_H * temperature)
    return rate * _coth(x)


def relax_rate_ratio(medium_a: MaterialAcoustics,
                     medium_b: MaterialAcoustics) -> float:
    """Ratio Gamma_1(a)/Gamma_1(b) for identical states in two media.

    Only the material factors survive: (M_a/M_b)^2 (rho_b/rho_a) (v_b/v_a)^5.
    """
    return (
        (medium_a.deformation_potential / medium_b.deformation_potential) ** 2
        * (medium_b.density / medium_a.density)
        * (medium_b.sound_velocity / medium_a.sound_velocity) ** 5
    )


def elastic_interaction(medium: MaterialAcoustics) -> float:
    """Strength of the 1/r^3 phonon-mediated coupling between tunneling
    states, U0 = M^2 / (rho v^2), divided by the Planck constant (Hz m^3)."""
    m = medium.deformation_potential
    u0_j = m * m / (medium.density * medium.sound_velocity**2)
    return u0_j / PLANCK


def dephasing_rate(bath: BathConfig, temperature: float,
                   nu0: float | None = None) -> float:
    """Spectral-diffusion dephasing rate Gamma_2(T), Hz.

    Anchored power law Gamma_2 = rate_anchor * (T / T_anchor)^(1 + mu). The
    probe frequency nu0 is accepted for interface symmetry; in the anchored
    form its mu-power is absorbed into the anchor rate (see
    dephasing_rate_raw for the explicit prefactor form).
    """
    if temperature <= 0:
        raise DomainError("temperature must be positive")
    t_anchor, rate_anchor = bath.gamma2_anchor
    return rate_anchor * (temperature / t_anchor) ** (1.0 + bath.mu)


def dephasing_rate_raw(chi: float, c0: float, gamma1_min: float,
                       gamma1_max: float, temperature: float, nu0: float,
                       mu: float) -> float:
    """Dephasing rate from the microscopic prefactor form.

    Gamma_2 = c0 * chi * ln(gamma1_max/gamma1_min) * T^(1+mu) / nu0^mu with
    temperature expressed as a frequency via k_B/h. Useful for checking an
    anchor choice against microscopic inputs.
    """
    if temperature <= 0 or nu0 <= 0:
        raise DomainError("temperature and probe frequency must be positive")
    if gamma1_max <= gamma1_min or gamma1_min <= 0:
        raise DomainError("relaxation-rate window must satisfy 0 < min < max")
    t_hz = KB_OVER_H * temperature
    return c0 * chi * math.log(gamma1_max / gamma1_min) * t_hz ** (1.0 + mu) / nu0**mu


def critical_field(gamma1: float, gamma2: float, dipole_projection: float) -> float:
    """Saturation field E_c = h sqrt(Gamma_1 Gamma_2) / (2 d), V/m.

    dipole_projection in debye. Defined so the Rabi rate 2 d E / h equals
    sqrt(Gamma_1 Gamma_2) at E = E_c.
    """
    if gamma1 <= 0 or gamma2 <= 0:
        raise DomainError("rates must be positive")
    if dipole_projection <= 0:
        raise DomainError("dipole projection must be positive")
    d = dipole_projection * DEBYE
    return PLANCK * math.sqrt(gamma1 * gamma2) / (2.0 * d)


def critical_photon_number(bath: BathConfig, temperature: float,
                           nu0: float | None = None) -> float:
    """Photon number at which the drive field reaches the saturation field.

    N_c = kappa * Gamma_1 * Gamma_2(T); scales as T^(1+mu).
    """
    return bath.nc_calibration * bath.gamma1 * dephasing_rate(bath, temperature, nu0)


def single_photon_rabi(bath: BathConfig) -> float:
    """Rabi rate per square-root photon implied by the N_c calibration, Hz.

    At N = N_c the Rabi rate equals sqrt(Gamma_1 Gamma_2), so
    Omega_1 = sqrt(N/kappa)/sqrt(N) = kappa^(-1/2).
    """
    return 1.0 / math.sqrt(bath.nc_calibration)


def saturation_ratio(drive: DriveState, bath: BathConfig,
                     temperature: float) -> float:
    """Drive field over saturation field, sqrt(N / N_c(T))."""
    n_c = critical_photon_number(bath, temperature, drive.resonance)
    return math.sqrt(drive.photon_number / n_c)


def activated_fluctuator_count(bath: BathConfig, temperature: float) -> float:
    """Mean number of thermally active fluctuators within one interaction
    volume: (4 pi / 3) * density * r0^3 * T. Linear in temperature."""
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    return (4.0 * math.pi / 3.0) * bath.fluct_density * bath.interaction_radius**3 * temperature


def noise_magnitude(bath: BathConfig, drive: DriveState, temperature: float,
                    frequency: float, regime_override: str | None = None) -> float:
    """Fractional-frequency noise PSD S_y(f) of the interacting bath, 1/Hz.

    Branches (all carrying the 1/f envelope and the overall noise_scale):

    - relaxation-limited, Gamma_2(T) <= 2 Gamma_1: S ~ T / Gamma_1
    - weak drive: S ~ T / Gamma_2(T)^2, i.e. T^(-1-2mu)
    - strong drive: S ~ T sqrt(Gamma_1 / Gamma_2(T)), i.e. T^((1-mu)/2)

    Without regime_override the relaxation condition is checked first,
    otherwise the weak-drive branch is used, and the result is multiplied by
    the saturation factor (1 + N/N_c(T))^(-1/2). With regime_override in
    {"weak", "strong", "relaxation"} the pure branch is returned without the
    saturation factor (the strong branch already encodes drive saturation).
    """
    if temperature <= 0:
        raise DomainError("temperature must be positive")
    if frequency <= 0:
        raise DomainError("frequency must be positive")
    g1 = bath.gamma1
    g2 = dephasing_rate(bath, temperature)
    envelope = bath.noise_scale / frequency

    def branch(name: str) -> float:
        if name == "relaxation":
            return temperature / g1
        if name == "weak":
            return temperature / (g2 * g2)
        if name == "strong":
            return temperature * math.sqrt(g1 / g2)
        raise DomainError(f"unknown regime {name!r}")

    if regime_override is not None:
        return envelope * branch(regime_override)

    if g2 <= 2.0 * g1:
        base = branch("relaxation")
    else:
        base = branch("weak")
    n_c = critical_photon_number(bath, temperature, drive.resonance)
    return envelope * base / math.sqrt(1.0 + drive.photon_number / n_c)


def crossover_temperature(bath: BathConfig, drive: DriveState,
                          kind: str = "saturation") -> float:
    """Temperature separating the low- and high-temperature noise regimes.

    kind="saturation": drive broadening overtakes dephasing, Rabi rate
    sqrt(N/kappa) = Gamma_2(T_x); scales as N^(1/(2+2mu)).
    kind="relaxation": dephasing falls to the relaxation floor,
    Gamma_2(T_x) = 2 Gamma_1; drive-independent.
    """
    t_anchor, rate_anchor = bath.gamma2_anchor
    if kind == "saturation":
        if drive.photon_number <= 0:
            raise DomainError("saturation crossover needs a positive photon number")
        omega_r = math.sqrt(drive.photon_number / bath.nc_calibration)
        return t_anchor * (omega_r / rate_anchor) ** (1.0 / (1.0 + bath.mu))
    if kind == "relaxation":
        return t_anchor * (2.0 * bath.gamma1 / rate_anchor) ** (1.0 / (1.0 + bath.mu))
    raise DomainError(f"unknown crossover kind {kind!r}")


def crossover_noise_model(temperature, t_x: float, mu: float = 0.25,
                          low_exponent: float = 0.25, s_at_tx: float = 1.0,
                          photon_number: float = 0.0,
                          n_c_at_tx: float | None = None):
    """Observed-phenomenology noise level versus temperature.

    Piecewise power law continuous at the crossover t_x: exponent
    -(1 + 2 mu) above, low_exponent below. Drive enters only through a
    temperature-independent level factor (1 + N / N_c(t_x))^(-1/2), so the
    crossover location does not move with power. Accepts scalar or array
    temperature.
    """
    import numpy as np

    t = np.asarray(temperature, dtype=float)
    if np.any(t <= 0) or t_x <= 0:
        raise DomainError("temperatures must be positive")
    hi = (t / t_x) ** (-(1.0 + 2.0 * mu))
    lo = (t / t_x) ** low_exponent
    s = s_at_tx * np.where(t > t_x, hi, lo)
    if photon_number > 0:
        if n_c_at_tx is None or n_c_at_tx <= 0:
            raise DomainError("drive factor needs a positive n_c_at_tx")
        s = s / math.sqrt(1.0 + photon_number / n_c_at_tx)
    if np.isscalar(temperature):
        return float(s)
    return s


def qi_gtm(bath: BathConfig, drive: DriveState, temperature: float) -> float:
    """Internal quality factor in the interacting-bath model.

    1/Q_i = p_gamma * F tan(delta) * ln(c sqrt(N_c(T) / N)). Valid for
    0 < N < c^2 N_c(T); beyond that the logarithm changes sign and the model
    is out of range (SaturatedRegimeError).
    """
    n = drive.photon_number
    if n <= 0:
        raise DomainError("photon number must be positive")
    n_c = critical_photon_number(bath, temperature, drive.resonance)
    arg = bath.c_const * math.sqrt(n_c / n)
    if arg <= 1.0:
        raise SaturatedRegimeError(
            f"photon number {n:g} at or beyond saturation scale "
            f"{bath.c_const**2 * n_c:g}"
        )
    inv_q = bath.p_gamma * bath.f_tan_delta * math.log(arg)
    return 1.0 / inv_q


def qi_empirical(f_tan_delta: float, photon_number: float, n_c: float,
                 alpha: float) -> float:
    """Empirical saturation form: 1/Q = F tan(delta) / (1 + N/n_c)^alpha."""
    if f_tan_delta <= 0 or n_c <= 0:
        raise DomainError("f_tan_delta and n_c must be positive")
    if photon_number < 0:
        raise DomainError("photon number must be non-negative")
    if not 0 < alpha <= 1:
        raise DomainError("alpha must lie in (0, 1]")
    inv_q = f_tan_delta / (1.0 + photon_number / n_c) ** alpha
    return 1.0 / inv_q


def with_noise_reference(bath: BathConfig, drive: DriveState, temperature: float,
                         frequency: float, s_target: float) -> BathConfig:
    """Return a copy of bath whose noise_scale makes noise_magnitude hit
    s_target at the given reference point."""
    base = noise_magnitude(bath, drive, temperature, frequency)
    return replace(bath, noise_scale=bath.noise_scale * s_target / base)
