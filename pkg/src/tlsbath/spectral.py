"""Allan-variance and periodogram estimators for fractional-frequency traces.

The overlapping Allan variance is the primary statistic: block means at every
offset, squared differences between blocks one averaging time apart, variance
= half their mean. A strict non-overlapping variant is kept for comparison
with the textbook adjacent-difference formula. The 1/f magnitude h_minus1
comes from averaging the (flat) Allan variance across a stated tau window,
sigma_y^2 = 2 ln(2) h_minus1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bath import FrequencyTrace
from .errors import ModelValidityWarning, UsageError

__all__ = [
    "AllanSpectrum",
    "OneOverFEstimate",
    "log_tau_grid",
    "overlapping_avar",
    "strict_si_avar",
    "extract_h_minus1",
    "psd_periodogram",
]

TWO_LN_2 = 2.0 * math.log(2.0)

# tau above duration/5 leaves too few independent differences to estimate a
# variance; such taus are dropped with a warning rather than reported.
MAX_TAU_FRACTION = 5

# overlapping differences separated by less than 2n samples share data; the
# effective sample count divides the term count by this correlation length
OVERLAP_CORRELATION_FACTOR = 2


@dataclass
class AllanSpectrum:
    """Allan variance on a tau grid with per-tau standard errors and the
    number of squared differences behind each point."""

    taus: np.ndarray
    sigma2: np.ndarray
    stderr: np.ndarray
    n_terms: np.ndarray

    def __post_init__(self):
        self.taus = np.asarray(self.taus, dtype=float)
        self.sigma2 = np.asarray(self.sigma2, dtype=float)
        self.stderr = np.asarray(self.stderr, dtype=float)
        self.n_terms = np.asarray(self.n_terms, dtype=int)
        if not (
            self.taus.shape == self.sigma2.shape == self.stderr.shape
            == self.n_terms.shape
        ):
            raise UsageError("Allan spectrum fields must share one shape")
        if self.taus.size and np.any(np.diff(self.taus) <= 0):
            raise UsageError("taus must be strictly increasing")
        if np.any(self.sigma2 < 0):
            raise UsageError("sigma2 must be non-negative")
        if np.any(self.n_terms < 1):
            raise UsageError("each point needs at least one term")


@dataclass(frozen=True)
class OneOverFEstimate:
    """1/f magnitude from a flat Allan-variance window.

    a0 is the equivalent angular-frequency PSD magnitude, always exactly
    2*pi*h_minus1.
    """

    h_minus1: float
    a0: float
    stderr: float
    tau_range: tuple

    def __post_init__(self):
        if self.h_minus1 < 0:
            raise UsageError("h_minus1 must be non-negative")


def _tau_to_n(tau: float, dt: float) -> int:
    ratio = tau / dt
    n = int(round(ratio))
    if n < 1 or abs(ratio - n) > 1e-9 * max(ratio, 1.0):
        raise UsageError(f"tau {tau} is not a positive multiple of dt {dt}")
    return n


def _validate_taus(taus) -> np.ndarray:
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or taus.size == 0:
        raise UsageError("need a 1-d non-empty tau grid")
    if np.any(np.diff(taus) <= 0):
        raise UsageError("taus must be strictly increasing")
    return taus


def log_tau_grid(dt: float, tau_lo: float, tau_hi: float,
                 per_decade: int = 4) -> np.ndarray:
    """Averaging times spaced ~evenly in log between tau_lo and tau_hi,
    snapped to exact multiples of dt (duplicates dropped)."""
    if dt <= 0 or not 0 < tau_lo < tau_hi:
        raise UsageError("need dt > 0 and 0 < tau_lo < tau_hi")
    if per_decade < 1:
        raise UsageError("per_decade must be at least 1")
    count = max(2, int(round(per_decade * math.log10(tau_hi / tau_lo))) + 1)
    want = np.logspace(math.log10(tau_lo), math.log10(tau_hi), count)
    mult = np.unique(np.maximum(1, np.round(want / dt).astype(np.int64)))
    return mult * dt


def overlapping_avar(trace: FrequencyTrace, taus) -> AllanSpectrum:
    """Overlapping Allan variance of a trace on the given tau grid.

    For tau = n*dt, block means are taken at every sample offset and
    differenced at lag n; sigma2 = mean(diff^2)/2. The standard error scales
    the spread of the squared terms by an effective count: terms closer than
    2n samples overlap and are not independent.

    Taus that leave fewer than two differences, or exceed a fifth of the
    duration, are omitted with a ModelValidityWarning.
    """
    taus = _validate_taus(taus)
    y = np.asarray(trace.samples, dtype=float)
    y = y - y.mean()
    cum = np.concatenate(([0.0], np.cumsum(y)))
    kept_tau, kept_s2, kept_se, kept_terms = [], [], [], []
    for tau in taus:
        n = _tau_to_n(tau, trace.dt)
        if n > y.size // MAX_TAU_FRACTION:
            warnings.warn(
                f"tau={tau:g}s omitted: longer than 1/{MAX_TAU_FRACTION} "
                "of the trace",
                ModelValidityWarning,
                stacklevel=2,
            )
            continue
        means = (cum[n:] - cum[:-n]) / n
        diffs = means[n:] - means[:-n]
        if diffs.size < 2:
            warnings.warn(
                f"tau={tau:g}s omitted: fewer than two differences",
                ModelValidityWarning,
                stacklevel=2,
            )
            continue
        terms = 0.5 * diffs * diffs
        n_eff = max(1, diffs.size // (OVERLAP_CORRELATION_FACTOR * n))
        kept_tau.append(tau)
        kept_s2.append(terms.mean())
        kept_se.append(terms.std(ddof=1) / math.sqrt(n_eff))
        kept_terms.append(diffs.size)
    return AllanSpectrum(
        np.array(kept_tau), np.array(kept_s2), np.array(kept_se),
        np.array(kept_terms, dtype=int),
    )


def strict_si_avar(trace: FrequencyTrace, taus) -> AllanSpectrum:
    """Non-overlapping Allan variance: adjacent disjoint n-sample means,
    sigma2 = sum(diff^2) / (2 (M-1)) over M blocks. Noisier than the
    overlapping estimator but matches the textbook formula term for term."""
    taus = _validate_taus(taus)
    y = np.asarray(trace.samples, dtype=float)
    y = y - y.mean()
    kept_tau, kept_s2, kept_se, kept_terms = [], [], [], []
    for tau in taus:
        n = _tau_to_n(tau, trace.dt)
        if n > y.size // MAX_TAU_FRACTION:
            warnings.warn(
                f"tau={tau:g}s omitted: longer than 1/{MAX_TAU_FRACTION} "
                "of the trace",
                ModelValidityWarning,
                stacklevel=2,
            )
            continue
        m_blocks = y.size // n
        diffs = np.diff(y[: m_blocks * n].reshape(m_blocks, n).mean(axis=1))
        if diffs.size < 2:
            warnings.warn(
                f"tau={tau:g}s omitted: fewer than two differences",
                ModelValidityWarning,
                stacklevel=2,
            )
            continue
        terms = 0.5 * diffs * diffs
        kept_tau.append(tau)
        kept_s2.append(terms.mean())
        kept_se.append(terms.std(ddof=1) / math.sqrt(diffs.size))
        kept_terms.append(diffs.size)
    return AllanSpectrum(
        np.array(kept_tau), np.array(kept_s2), np.array(kept_se),
        np.array(kept_terms, dtype=int),
    )


def extract_h_minus1(avar: AllanSpectrum, tau_lo: float, tau_hi: float,
                     exclude: tuple | None = None) -> OneOverFEstimate:
    """Average a flat Allan-variance window into a 1/f magnitude.

    h_minus1 = mean(sigma2)/(2 ln 2) over grid points in [tau_lo, tau_hi];
    stderr is the corresponding standard deviation (it reflects how flat the
    window really is, so a telegraph bump inside the window inflates it).
    An exclusion interval can mask known disturbances, but the remaining
    window still needs three points spanning a decade.
    """
    if not 0 < tau_lo < tau_hi:
        raise UsageError("need 0 < tau_lo < tau_hi")
    if tau_hi / tau_lo < 10.0:
        raise UsageError("extraction window must span at least one decade")
    sel = (avar.taus >= tau_lo) & (avar.taus <= tau_hi)
    if exclude is not None:
        lo, hi = exclude
        if not lo < hi:
            raise UsageError("exclusion window must have lo < hi")
        sel &= ~((avar.taus >= lo) & (avar.taus <= hi))
    picked = avar.sigma2[sel]
    if picked.size < 3:
        raise UsageError(
            "extraction window must cover at least three grid points"
        )
    kept = avar.taus[sel]
    if kept.max() / kept.min() < 10.0:
        raise UsageError("surviving grid points span less than a decade")
    h = picked.mean() / TWO_LN_2
    stderr = picked.std(ddof=1) / TWO_LN_2
    return OneOverFEstimate(h, 2.0 * math.pi * h, stderr, (tau_lo, tau_hi))


def psd_periodogram(trace: FrequencyTrace, n_segments: int = 1):
    """Segment-averaged one-sided periodogram (rectangular window).

    The trace splits into n_segments equal non-overlapping segments, each
    mean-detrended; leftover samples are dropped. DC is removed; the
    remaining bins integrate to the detrended variance exactly
    (sum(psd)*df = mean over segments of the segment variance).

    Returns (freqs, psd) with freqs in Hz and psd one-sided in 1/Hz.
    """
    if n_segments < 1:
        raise UsageError("n_segments must be at least 1")
    y = np.asarray(trace.samples, dtype=float)
    seg_len = y.size // n_segments
    if seg_len < 16:
        raise UsageError(
            f"{n_segments} segments of a {y.size}-sample trace are shorter "
            "than 16 samples"
        )
    freqs = np.fft.rfftfreq(seg_len, trace.dt)[1:]
    acc = np.zeros(freqs.size)
    scale = 2.0 * trace.dt / seg_len
    for k in range(n_segments):
        seg = y[k * seg_len : (k + 1) * seg_len]
        seg = seg - seg.mean()
        power = scale * np.abs(np.fft.rfft(seg)[1:]) ** 2
        if seg_len % 2 == 0:
            power[-1] *= 0.5  # Nyquist bin has no mirror
        acc += power
    return freqs, acc / n_segments
