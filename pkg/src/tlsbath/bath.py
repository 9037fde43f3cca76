"""Random-telegraph bath synthesis and tracked readout.

A bath is an ensemble of two-state fluctuators, each switching out of its
current state at switch_rate (so holding times are exponential with mean
1/switch_rate and the autocovariance decays as exp(-2*switch_rate*|tau|)).
Amplitudes are calibrated so a log-uniform ensemble reproduces a target 1/f
level h_minus1 in the one-sided fractional-frequency PSD, S_y(f) = h_minus1/f
over the plateau band.

Every fluctuator owns an independent counter-based PRNG substream keyed by
(trace_seed, stream_id); traces are reproducible across backends, batch
sizes, and ensemble slicing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from . import _kernels_py
from .backend import kernels
from .errors import (
    DomainError,
    ModelValidityWarning,
    UnstableLoopError,
    UsageError,
)

__all__ = [
    "Fluctuator",
    "FluctuatorEnsemble",
    "FrequencyTrace",
    "calibrate_amplitude",
    "expected_h_minus1",
    "sample_bath",
    "toggle_probability",
    "synthesize",
    "synthesize_trace",
    "simulate_pound_loop",
    "flip_indices",
    "rtn_psd",
    "rtn_autocorr",
    "ensemble_psd",
]


@dataclass(frozen=True)
class Fluctuator:
    """One telegraph fluctuator: values +-amplitude, switching out of either
    state at switch_rate (Hz). stream_id keys its PRNG substream and is kept
    on the fluctuator so sub-ensembles keep their streams."""

    amplitude: float
    switch_rate: float
    initial_state: int
    stream_id: int

    def __post_init__(self):
        if self.amplitude < 0:
            raise DomainError("amplitude must be non-negative")
        if self.switch_rate <= 0:
            raise DomainError("switch rate must be positive")
        if self.initial_state not in (-1, 1):
            raise DomainError("initial state must be -1 or +1")
        if self.stream_id < 0:
            raise DomainError("stream id must be non-negative")


@dataclass(frozen=True)
class FluctuatorEnsemble:
    """Ordered fluctuator collection with its design rate band and the seed
    that drew it. Iterates and slices like a sequence (slices give plain
    lists)."""

    fluctuators: tuple
    gamma_min: float
    gamma_max: float
    seed: int

    def __post_init__(self):
        if not 0 < self.gamma_min < self.gamma_max:
            raise DomainError("need 0 < gamma_min < gamma_max")
        object.__setattr__(self, "fluctuators", tuple(self.fluctuators))
        for f in self.fluctuators:
            if not self.gamma_min <= f.switch_rate <= self.gamma_max:
                raise DomainError(
                    f"switch rate {f.switch_rate} outside "
                    f"[{self.gamma_min}, {self.gamma_max}]"
                )

    def __len__(self):
        return len(self.fluctuators)

    def __iter__(self):
        return iter(self.fluctuators)

    def __getitem__(self, key):
        got = self.fluctuators[key]
        return list(got) if isinstance(key, slice) else got


@dataclass
class FrequencyTrace:
    """Uniformly sampled fractional-frequency record y_k = nu_k/nu_mean - 1.

    nu_mean carries the carrier so absolute frequencies can be recovered;
    seed records how the samples were generated (None for measured or
    derived traces without one).
    """

    samples: np.ndarray
    dt: float
    nu_mean: float = 1.0
    start_time: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1 or self.samples.size < 2:
            raise DomainError("trace needs a 1-d array of >= 2 samples")
        if self.dt <= 0:
            raise DomainError("dt must be positive")
        if self.nu_mean <= 0:
            raise DomainError("nu_mean must be positive")

    def __len__(self):
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.start_time + self.dt * np.arange(self.samples.size)


def calibrate_amplitude(h_minus1: float, n_fluct: int, gamma_min: float,
                        gamma_max: float) -> float:
    """Common amplitude giving a log-uniform ensemble the 1/f plateau
    S_y(f) = h_minus1/f (one-sided): a = sqrt(h_minus1 ln(gmax/gmin) / n).

    A rate span under two decades still returns a value but warns: the
    plateau is then too narrow to be usefully 1/f.
    """
    if h_minus1 < 0:
        raise DomainError("h_minus1 must be non-negative")
    if n_fluct < 1:
        raise DomainError("need at least one fluctuator")
    if not 0 < gamma_min < gamma_max:
        raise DomainError("need 0 < gamma_min < gamma_max")
    if gamma_max / gamma_min < 100.0:
        warnings.warn(
            "rate span under two decades; 1/f plateau will be narrow",
            ModelValidityWarning,
            stacklevel=2,
        )
    return math.sqrt(h_minus1 * math.log(gamma_max / gamma_min) / n_fluct)


def expected_h_minus1(fluctuators, gamma_min: float | None = None,
                      gamma_max: float | None = None) -> float:
    """Plateau 1/f level implied by an equal-amplitude log-uniform ensemble.

    The design band can be passed explicitly; otherwise the observed rate
    extremes stand in for it (a slight underestimate of the log span for
    small ensembles).
    """
    if not fluctuators:
        raise DomainError("empty ensemble")
    rates = [f.switch_rate for f in fluctuators]
    if gamma_min is None:
        gamma_min = min(rates)
    if gamma_max is None:
        gamma_max = max(rates)
    if not 0 < gamma_min < gamma_max:
        raise DomainError("need 0 < gamma_min < gamma_max")
    n = len(fluctuators)
    a_sq = math.fsum(f.amplitude**2 for f in fluctuators) / n
    return n * a_sq / math.log(gamma_max / gamma_min)


def sample_bath(n_fluct: int, gamma_min: float, gamma_max: float,
                h_minus1: float, seed: int) -> FluctuatorEnsemble:
    """Draw an ensemble: switch rates log-uniform on [gamma_min, gamma_max],
    equal calibrated amplitudes, fair-coin initial states. Consecutive
    stream_ids are assigned in draw order; n_fluct = 0 gives an empty
    ensemble."""
    if n_fluct < 0:
        raise DomainError("n_fluct must be non-negative")
    if not 0 < gamma_min < gamma_max:
        raise DomainError("need 0 < gamma_min < gamma_max")
    if n_fluct == 0:
        return FluctuatorEnsemble((), gamma_min, gamma_max, seed)
    amp = calibrate_amplitude(h_minus1, n_fluct, gamma_min, gamma_max)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed])))
    rates = gamma_min * (gamma_max / gamma_min) ** rng.random(n_fluct)
    states = np.where(rng.random(n_fluct) < 0.5, 1, -1)
    return FluctuatorEnsemble(
        tuple(
            Fluctuator(amp, float(rates[i]), int(states[i]), i)
            for i in range(n_fluct)
        ),
        gamma_min,
        gamma_max,
        seed,
    )


def toggle_probability(switch_rate: float, dt: float) -> float:
    """Probability that the state observed at consecutive samples differs:
    (1 - exp(-2 gamma dt)) / 2. Saturates at 1/2 for gamma dt >> 1."""
    if switch_rate <= 0 or dt <= 0:
        raise DomainError("switch rate and dt must be positive")
    return -math.expm1(-2.0 * switch_rate * dt) / 2.0


def _stream(seed: int, stream_id: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence([seed, stream_id]))
    )


def synthesize(fluctuators, n_samples: int, dt: float, seed: int) -> np.ndarray:
    """Sum the ensemble's telegraph signals on a uniform sampling grid.

    Returns the n_samples fractional-frequency values (all zero for an empty
    ensemble). Deterministic in (fluctuators, n_samples, dt, seed): each
    fluctuator consumes only its own substream, so ensembles superpose
    exactly and sub-ensembles reproduce their share bit-for-bit on either
    backend.
    """
    if n_samples < 1:
        raise DomainError("need at least one sample")
    if dt <= 0:
        raise DomainError("dt must be positive")
    steps = np.zeros(n_samples)
    base = 0.0
    for f in fluctuators:
        p = toggle_probability(f.switch_rate, dt)
        if p <= 0.0 or f.amplitude == 0.0:
            base += f.amplitude * f.initial_state
            continue
        base += kernels.accumulate_fluctuator(
            steps, f.amplitude, f.initial_state, p, _stream(seed, f.stream_id)
        )
    trace = np.cumsum(steps)
    trace += base
    return trace


def synthesize_trace(ensemble, duration: float, dt: float, seed: int,
                     nu_mean: float = 1.0,
                     start_time: float = 0.0) -> FrequencyTrace:
    """Synthesize round(duration/dt) samples and wrap them in a trace record
    carrying dt, carrier, and seed."""
    if dt <= 0:
        raise DomainError("dt must be positive")
    n_samples = int(round(duration / dt))
    if n_samples < 2:
        raise DomainError("duration must cover at least two samples")
    y = synthesize(ensemble, n_samples, dt, seed)
    return FrequencyTrace(y, dt, nu_mean=nu_mean, start_time=start_time,
                          seed=seed)


def simulate_pound_loop(true_trace: FrequencyTrace, loop_gain: float,
                        meas_noise_sigma: float, gate_time: float,
                        seed: int | None = None) -> FrequencyTrace:
    """Track a trace with a discrete-time integral controller.

    Each gate the loop measures the gate-averaged true value plus white
    noise of rms meas_noise_sigma and corrects by loop_gain * gate_time
    times the error, starting from zero. Output is the tracked record at
    gate_time cadence; for a static input the error decays by a factor
    (1 - loop_gain*gate_time) per gate.
    """
    if loop_gain <= 0:
        raise DomainError("loop gain must be positive")
    if meas_noise_sigma < 0:
        raise DomainError("measurement noise sigma must be non-negative")
    if gate_time < true_trace.dt:
        raise DomainError("gate time must be at least the trace dt")
    ratio = gate_time / true_trace.dt
    per_gate = int(round(ratio))
    if abs(ratio - per_gate) > 1e-9 * ratio:
        raise UsageError(
            f"gate time {gate_time} is not an integer multiple of "
            f"dt {true_trace.dt}"
        )
    alpha = loop_gain * gate_time
    if alpha >= 2.0:
        raise UnstableLoopError(
            f"loop_gain * gate_time = {alpha:.3g} >= 2 diverges"
        )
    n_gates = true_trace.samples.size // per_gate
    if n_gates < 2:
        raise UsageError("trace too short for two gates")
    clipped = true_trace.samples[: n_gates * per_gate]
    measured = clipped.reshape(n_gates, per_gate).mean(axis=1)
    if meas_noise_sigma > 0:
        if seed is None:
            raise DomainError("seed required when measurement noise is on")
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(seed))
        )
        measured = measured + meas_noise_sigma * rng.standard_normal(n_gates)
    tracked = lfilter([alpha], [1.0, -(1.0 - alpha)], measured)
    return FrequencyTrace(
        tracked,
        gate_time,
        nu_mean=true_trace.nu_mean,
        start_time=true_trace.start_time,
        seed=seed,
    )


def flip_indices(fluctuator: Fluctuator, n_samples: int, dt: float,
                 seed: int) -> np.ndarray:
    """Sample indices where this fluctuator's state changes in the trace that
    synthesize(...) would produce with the same seed."""
    if n_samples < 1 or dt <= 0:
        raise DomainError("need n_samples >= 1 and dt > 0")
    p = toggle_probability(fluctuator.switch_rate, dt)
    gen = _stream(seed, fluctuator.stream_id)
    return _kernels_py.toggle_positions(p, n_samples, gen)


def rtn_psd(amplitude: float, switch_rate: float, frequencies) -> np.ndarray:
    """Two-sided Lorentzian PSD of one telegraph fluctuator,
    S(f) = a^2 4 gamma / (4 gamma^2 + (2 pi f)^2); integrates to a^2 over
    all f in (-inf, inf). Multiply by 2 to compare with one-sided spectra.
    """
    if amplitude < 0 or switch_rate <= 0:
        raise DomainError("need amplitude >= 0 and switch rate > 0")
    f = np.asarray(frequencies, dtype=float)
    return amplitude**2 * 4.0 * switch_rate / (
        4.0 * switch_rate**2 + (2.0 * math.pi * f) ** 2
    )


def rtn_autocorr(amplitude: float, switch_rate: float, lags) -> np.ndarray:
    """Autocovariance a^2 exp(-2 gamma |tau|) of one fluctuator."""
    if amplitude < 0 or switch_rate <= 0:
        raise DomainError("need amplitude >= 0 and switch rate > 0")
    tau = np.asarray(lags, dtype=float)
    return amplitude**2 * np.exp(-2.0 * switch_rate * np.abs(tau))


def ensemble_psd(fluctuators, frequencies) -> np.ndarray:
    """One-sided PSD of the summed ensemble; independent fluctuators add in
    power, so this is 2 * sum of rtn_psd."""
    f = np.asarray(frequencies, dtype=float)
    out = np.zeros_like(f)
    for fl in fluctuators:
        out += rtn_psd(fl.amplitude, fl.switch_rate, f)
    return 2.0 * out
