"""CSV import and export.

Trace files carry one comment header line with the sampling metadata, then
bare time,value pairs. Spectra get ordinary column-header CSVs. All floats
are written with repr, the shortest digits that round-trip exactly, so
rewriting identical data produces identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .bath import FrequencyTrace
from .errors import UsageError

__all__ = [
    "write_trace_csv",
    "read_trace_csv",
    "write_avar_csv",
    "write_psd_csv",
]


def _fmt(value) -> str:
    return repr(float(value))


def write_trace_csv(path, trace: FrequencyTrace) -> None:
    """Write `# dt=<s> nu_mean=<Hz> seed=<int>` then time,y rows.

    A trace without a seed records seed=-1.
    """
    seed = -1 if trace.seed is None else int(trace.seed)
    lines = [f"# dt={_fmt(trace.dt)} nu_mean={_fmt(trace.nu_mean)} seed={seed}"]
    times = trace.times
    for k in range(trace.samples.size):
        lines.append(f"{_fmt(times[k])},{_fmt(trace.samples[k])}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace_csv(path) -> FrequencyTrace:
    """Read a trace written by write_trace_csv."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise UsageError(f"{path}: missing trace header line")
    meta = {}
    for token in lines[0].lstrip("#").split():
        key, _, raw = token.partition("=")
        if not raw:
            raise UsageError(f"{path}: malformed header token {token!r}")
        meta[key] = raw
    try:
        dt = float(meta["dt"])
        nu_mean = float(meta["nu_mean"])
        seed = int(meta["seed"])
    except (KeyError, ValueError) as exc:
        raise UsageError(f"{path}: bad trace header: {exc}") from exc
    rows = [line for line in lines[1:] if line.strip()]
    if len(rows) < 2:
        raise UsageError(f"{path}: trace needs at least two samples")
    times = np.empty(len(rows))
    samples = np.empty(len(rows))
    for i, row in enumerate(rows):
        t_str, _, y_str = row.partition(",")
        try:
            times[i] = float(t_str)
            samples[i] = float(y_str)
        except ValueError as exc:
            raise UsageError(f"{path}: bad row {i + 2}: {row!r}") from exc
    return FrequencyTrace(
        samples,
        dt,
        nu_mean=nu_mean,
        start_time=float(times[0]),
        seed=None if seed < 0 else seed,
    )


def write_avar_csv(path, spectrum) -> None:
    """Write tau,sigma2,stderr,n_terms rows."""
    lines = ["tau,sigma2,stderr,n_terms"]
    for i in range(spectrum.taus.size):
        lines.append(
            f"{_fmt(spectrum.taus[i])},{_fmt(spectrum.sigma2[i])},"
            f"{_fmt(spectrum.stderr[i])},{int(spectrum.n_terms[i])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_psd_csv(path, freqs, psd) -> None:
    """Write freq,psd rows."""
    freqs = np.asarray(freqs, dtype=float)
    psd = np.asarray(psd, dtype=float)
    if freqs.shape != psd.shape:
        raise UsageError("frequency and psd arrays must match")
    lines = ["freq,psd"]
    for i in range(freqs.size):
        lines.append(f"{_fmt(freqs[i])},{_fmt(psd[i])}")
    Path(path).write_text("\n".join(lines) + "\n")
