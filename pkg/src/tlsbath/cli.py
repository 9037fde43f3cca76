"""Command-line front end: scenario execution, CSV and report emission.

Exit codes: 0 success, 1 domain errors (inputs outside physical range),
2 usage errors (bad arguments, malformed or inconsistent configs). Errors
print one machine-parsable stderr line: `tlsbath: error[<kind>]: <message>`.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__, cryo, dielectric, fitkit, gtm, spectral
from . import bath as bathmod
from . import io as iomod
from .backend import backend_name
from .config import (
    SCENARIOS,
    SEED_BATH,
    SEED_LOOP,
    SEED_SCENARIO,
    SEED_TRACE,
    apply_overrides,
    derive_seed,
    effective_toml,
    load_config,
    resolved,
    validate_config,
)
from .errors import DomainError, UsageError

OUT_ROOT_ENV = "TLSBATH_OUT_ROOT"


@dataclass
class RunContext:
    cfg: dict
    out_dir: Path
    seed: int
    workers: int
    config_dir: Path

    def get(self, section: str, key: str):
        return resolved(self.cfg, section, key)

    def path(self, relative: str) -> Path:
        # data paths in configs resolve against the config file
        p = Path(relative)
        return p if p.is_absolute() else self.config_dir / p


def _pmap(fn, items, workers: int):
    """Order-preserving map, threaded when workers > 1. Results are indexed,
    never reduced, so worker count cannot change any output."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(value) -> str:
    return repr(float(value))


def _bath_from_cfg(ctx: RunContext) -> gtm.BathConfig:
    preset = ctx.get("bath", "preset")
    base = gtm.helium_default() if preset == "helium" else gtm.vacuum_default()
    kwargs = {}
    for key in ("mu", "chi", "gamma1", "gamma1_min", "gamma1_max",
                "fluct_density", "interaction_radius", "u0", "p_gamma",
                "c_const", "f_tan_delta", "nc_calibration", "noise_scale"):
        value = ctx.get("bath", key)
        if value is not None:
            kwargs[key] = value
    anchor_t = ctx.get("bath", "gamma2_anchor_temperature")
    anchor_r = ctx.get("bath", "gamma2_anchor_rate")
    if anchor_t is not None or anchor_r is not None:
        t0, r0 = base.gamma2_anchor
        kwargs["gamma2_anchor"] = (
            anchor_t if anchor_t is not None else t0,
            anchor_r if anchor_r is not None else r0,
        )
    return replace(base, **kwargs)


def _scenario_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence([seed, SEED_SCENARIO]))
    )


def _write_rows(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(rows)
    path.write_text("\n".join(lines) + "\n")


def _avar_analysis(ctx: RunContext, trace) -> list:
    """Allan-variance stage shared by the avar scenario and the synthesize
    pipeline; writes avar.csv (and psd.csv when segments is set)."""
    taus = spectral.log_tau_grid(
        trace.dt,
        ctx.get("avar", "tau_lo"),
        ctx.get("avar", "tau_hi"),
        ctx.get("avar", "per_decade"),
    )
    avar = spectral.overlapping_avar(trace, taus)
    iomod.write_avar_csv(ctx.out_dir / "avar.csv", avar)
    lines = [f"avar: avar.csv ({avar.taus.size} taus)"]
    extract_lo = ctx.get("avar", "extract_lo")
    extract_hi = ctx.get("avar", "extract_hi")
    if (extract_lo is None) != (extract_hi is None):
        raise UsageError("avar.extract_lo and avar.extract_hi go together")
    if extract_lo is not None:
        exclude_lo = ctx.get("avar", "exclude_lo")
        exclude_hi = ctx.get("avar", "exclude_hi")
        if (exclude_lo is None) != (exclude_hi is None):
            raise UsageError(
                "avar.exclude_lo and avar.exclude_hi go together"
            )
        exclude = None if exclude_lo is None else (exclude_lo, exclude_hi)
        est = spectral.extract_h_minus1(avar, extract_lo, extract_hi,
                                        exclude=exclude)
        lines.append(
            f"h_minus1: {_fmt(est.h_minus1)} +- {_fmt(est.stderr)} "
            f"(tau {_fmt(extract_lo)}..{_fmt(extract_hi)} s)"
        )
        lines.append(f"a0 = 2 pi h_minus1: {_fmt(est.a0)}")
    segments = ctx.get("avar", "segments")
    if segments is not None:
        freqs, psd = spectral.psd_periodogram(trace, segments)
        iomod.write_psd_csv(ctx.out_dir / "psd.csv", freqs, psd)
        lines.append(f"psd: psd.csv ({segments} segments)")
    return lines


def _scn_synth(ctx: RunContext):
    n_fluct = ctx.get("synth", "n_fluct")
    gamma_min = ctx.get("synth", "gamma_min")
    gamma_max = ctx.get("synth", "gamma_max")
    h_target = ctx.get("synth", "h_minus1")
    ensemble = bathmod.sample_bath(
        n_fluct, gamma_min, gamma_max, h_target,
        seed=derive_seed(ctx.seed, SEED_BATH),
    )
    fluctuators = list(ensemble)
    bump_amp = ctx.get("synth", "bump_amplitude")
    bump_rate = ctx.get("synth", "bump_rate")
    if (bump_amp is None) != (bump_rate is None):
        raise UsageError("synth.bump_amplitude and synth.bump_rate go together")
    if bump_amp is not None:
        fluctuators.append(
            bathmod.Fluctuator(bump_amp, bump_rate, 1, n_fluct)
        )
    trace = bathmod.synthesize_trace(
        fluctuators,
        ctx.get("synth", "duration"),
        ctx.get("synth", "dt"),
        derive_seed(ctx.seed, SEED_TRACE),
        nu_mean=ctx.get("synth", "nu_mean"),
    )
    iomod.write_trace_csv(ctx.out_dir / "trace.csv", trace)
    lines = [
        f"fluctuators: {len(fluctuators)}",
        f"amplitude target h_minus1: {_fmt(h_target)}",
        f"kernel backend: {backend_name()}",
        f"trace: trace.csv ({trace.samples.size} samples, dt {_fmt(trace.dt)} s)",
    ]
    if fluctuators:
        lines.insert(
            2,
            "ensemble-implied h_minus1: "
            f"{_fmt(bathmod.expected_h_minus1(fluctuators, gamma_min, gamma_max))}",
        )
    if bump_amp is not None:
        lines.append(
            f"injected telegraph disturbance: amplitude {_fmt(bump_amp)}, "
            f"rate {_fmt(bump_rate)} Hz"
        )
    plot = [
        "set datafile separator ','",
        "set xlabel 'time (s)'",
        "set ylabel 'fractional frequency'",
        "plot 'trace.csv' using 1:2 with lines title 'trace'",
    ]
    if ctx.get("loop", "enabled"):
        tracked = bathmod.simulate_pound_loop(
            trace,
            ctx.get("loop", "gain"),
            ctx.get("loop", "noise_sigma"),
            ctx.get("loop", "gate_time"),
            seed=derive_seed(ctx.seed, SEED_LOOP),
        )
        iomod.write_trace_csv(ctx.out_dir / "tracked.csv", tracked)
        lines.append(
            f"tracked readout: tracked.csv ({tracked.samples.size} gates, "
            f"gate {_fmt(tracked.dt)} s)"
        )
        plot[-1] += ", 'tracked.csv' using 1:2 with lines title 'tracked'"
    if "avar" in ctx.cfg:
        lines.extend(_avar_analysis(ctx, trace))
    return lines, "\n".join(plot) + "\n"


def _scn_avar(ctx: RunContext):
    trace_rel = ctx.get("avar", "trace")
    if trace_rel is None:
        raise UsageError("avar.trace is required for the avar scenario")
    trace = iomod.read_trace_csv(ctx.path(trace_rel))
    lines = [f"trace: {trace_rel} ({trace.samples.size} samples)"]
    lines.extend(_avar_analysis(ctx, trace))
    plot = [
        "set datafile separator ','",
        "set logscale xy",
        "set xlabel 'tau (s)'",
        "set ylabel 'Allan variance'",
        "plot 'avar.csv' skip 1 using 1:2:3 with yerrorlines title 'avar'",
    ]
    return lines, "\n".join(plot) + "\n"


def _scn_fit_qn(ctx: RunContext):
    bath_cfg = _bath_from_cfg(ctx)
    temperature = ctx.get("fit_qn", "temperature")
    resonance = ctx.get("fit_qn", "resonance")
    model = ctx.get("fit_qn", "model")
    grid = np.logspace(
        math.log10(ctx.get("fit_qn", "n_min")),
        math.log10(ctx.get("fit_qn", "n_max")),
        ctx.get("fit_qn", "points"),
    )
    qi_clean = np.array([
        gtm.qi_gtm(bath_cfg, gtm.DriveState(n, resonance), temperature)
        for n in grid
    ])
    noise_fraction = ctx.get("fit_qn", "noise_fraction")
    rng = _scenario_rng(ctx.seed)
    qi_obs = qi_clean * np.exp(noise_fraction * rng.standard_normal(grid.size))
    fit = fitkit.fit_qi_vs_n(grid, qi_obs, model=model)
    if model == "gtm":
        loss_slope, n_sat = fit.params
        inv_q = 0.5 * loss_slope * (np.log(n_sat) - np.log(grid))
        qi_fit = 1.0 / inv_q
        n_sat_true = bath_cfg.c_const**2 * gtm.critical_photon_number(
            bath_cfg, temperature, resonance
        )
        truth = [
            f"true saturation photon number: {_fmt(n_sat_true)}",
            f"fitted saturation photon number: {_fmt(n_sat)} "
            f"+- {_fmt(fit.stderr[1])}",
            f"fitted loss slope: {_fmt(loss_slope)} +- {_fmt(fit.stderr[0])}",
        ]
    else:
        f_td, n_c, alpha = fit.params
        qi_fit = np.array([
            gtm.qi_empirical(f_td, n, n_c, alpha) for n in grid
        ])
        truth = [
            f"fitted f_tan_delta: {_fmt(f_td)} +- {_fmt(fit.stderr[0])}",
            f"fitted n_c: {_fmt(n_c)} +- {_fmt(fit.stderr[1])}",
            f"fitted alpha: {_fmt(alpha)} +- {_fmt(fit.stderr[2])}",
        ]
    rows = [
        f"{_fmt(grid[i])},{_fmt(qi_clean[i])},{_fmt(qi_obs[i])},{_fmt(qi_fit[i])}"
        for i in range(grid.size)
    ]
    _write_rows(
        ctx.out_dir / "qi_curve.csv",
        "photon_number,qi_model,qi_observed,qi_fit",
        rows,
    )
    lines = [
        f"model: {model}",
        f"points: {grid.size} over [{_fmt(grid[0])}, {_fmt(grid[-1])}] photons",
        *truth,
        f"converged: {fit.converged} after {fit.n_iter} steps",
    ]
    if fit.flags:
        lines.append("flags: " + ", ".join(fit.flags))
    plot = [
        "set datafile separator ','",
        "set logscale x",
        "set xlabel 'photon number'",
        "set ylabel 'internal Q'",
        "plot 'qi_curve.csv' skip 1 using 1:3 with points title 'observed',"
        " 'qi_curve.csv' skip 1 using 1:4 with lines title 'fit'",
    ]
    return lines, "\n".join(plot) + "\n"


def _scn_fit_noise(ctx: RunContext):
    s0 = ctx.get("fit_noise", "s0")
    n_c = ctx.get("fit_noise", "n_c")
    grid = np.logspace(
        math.log10(ctx.get("fit_noise", "n_min")),
        math.log10(ctx.get("fit_noise", "n_max")),
        ctx.get("fit_noise", "points"),
    )
    s_clean = s0 / np.sqrt(1.0 + grid / n_c)
    noise_fraction = ctx.get("fit_noise", "noise_fraction")
    rng = _scenario_rng(ctx.seed)
    s_obs = s_clean * np.exp(noise_fraction * rng.standard_normal(grid.size))
    fit = fitkit.fit_noise_vs_n(grid, s_obs)
    s_fit = fit.params[0] / np.sqrt(1.0 + grid / fit.params[1])
    rows = [
        f"{_fmt(grid[i])},{_fmt(s_clean[i])},{_fmt(s_obs[i])},{_fmt(s_fit[i])}"
        for i in range(grid.size)
    ]
    _write_rows(
        ctx.out_dir / "noise_curve.csv",
        "photon_number,s_model,s_observed,s_fit",
        rows,
    )
    lines = [
        f"true level and knee: s0 {_fmt(s0)}, n_c {_fmt(n_c)}",
        f"fitted s0: {_fmt(fit.params[0])} +- {_fmt(fit.stderr[0])}",
        f"fitted n_c: {_fmt(fit.params[1])} +- {_fmt(fit.stderr[1])}",
        f"converged: {fit.converged} after {fit.n_iter} steps",
    ]
    if fit.flags:
        lines.append("flags: " + ", ".join(fit.flags))
    plot = [
        "set datafile separator ','",
        "set logscale xy",
        "set xlabel 'photon number'",
        "set ylabel 'S_y'",
        "plot 'noise_curve.csv' skip 1 using 1:3 with points title 'observed',"
        " 'noise_curve.csv' skip 1 using 1:4 with lines title 'fit'",
    ]
    return lines, "\n".join(plot) + "\n"


def _scn_sweep_temp(ctx: RunContext):
    bath_cfg = _bath_from_cfg(ctx)
    t_x = ctx.get("sweep", "t_x")
    low_exponent = ctx.get("sweep", "low_exponent")
    s_at_tx = ctx.get("sweep", "s_at_tx")
    drives = ctx.get("sweep", "photon_numbers")
    if not drives:
        raise UsageError("sweep.photon_numbers must not be empty")
    n_c_at_tx = ctx.get("sweep", "n_c_at_tx")
    if n_c_at_tx is None:
        n_c_at_tx = gtm.critical_photon_number(bath_cfg, t_x)
    t_grid = np.logspace(
        math.log10(ctx.get("sweep", "t_min")),
        math.log10(ctx.get("sweep", "t_max")),
        ctx.get("sweep", "points"),
    )

    def level(photons: float) -> np.ndarray:
        return gtm.crossover_noise_model(
            t_grid, t_x, bath_cfg.mu, low_exponent, s_at_tx,
            photon_number=photons, n_c_at_tx=n_c_at_tx,
        )

    curves = _pmap(level, drives, ctx.workers)
    rows = []
    for photons, curve in zip(drives, curves):
        for i in range(t_grid.size):
            rows.append(f"{_fmt(t_grid[i])},{_fmt(photons)},{_fmt(curve[i])}")
    _write_rows(
        ctx.out_dir / "sweep.csv", "temperature_k,photon_number,s_y", rows
    )
    lines = [
        f"temperatures: {t_grid.size} points "
        f"[{_fmt(t_grid[0])}, {_fmt(t_grid[-1])}] K",
        f"crossover temperature: {_fmt(t_x)} K "
        f"(exponents +{_fmt(low_exponent)} below, "
        f"-{_fmt(1.0 + 2.0 * bath_cfg.mu)} above)",
        f"n_c at crossover: {_fmt(n_c_at_tx)}",
    ]
    for photons, curve in zip(drives, curves):
        peak = t_grid[int(np.argmax(curve))]
        lines.append(
            f"drive {_fmt(photons)} photons: peak S_y at {_fmt(peak)} K"
        )
    plot = [
        "set datafile separator ','",
        "set logscale xy",
        "set xlabel 'temperature (K)'",
        "set ylabel 'S_y'",
        "plot 'sweep.csv' skip 1 using 1:3 with points title 'S_y(T)'",
    ]
    return lines, "\n".join(plot) + "\n"


def _stages_from_cfg(ctx: RunContext):
    raw = ctx.get("chain", "stages")
    if raw is None:
        return cryo.default_input_chain()
    stages = []
    for row in raw:
        stages.append(cryo.ChainStage(
            row["name"],
            float(row["temperature"]),
            float(row.get("attenuation_db", 0.0)),
            float(row.get("cable_loss_db", 0.0)),
        ))
    return stages


def _scn_budget(ctx: RunContext):
    frequency = ctx.get("chain", "frequency")
    stages = _stages_from_cfg(ctx)
    cascade = cryo.occupancy_cascade(frequency, stages)
    input_power = ctx.get("chain", "input_power")
    dissipated = None
    delivered = None
    if input_power is not None:
        budget = cryo.chain_dissipation(input_power, stages)
        delivered = budget[-1][1]
        dissipated = [power for _, power in budget[:-1]]
    rows = []
    for i, (stage, (name, occupancy)) in enumerate(zip(stages, cascade)):
        row = (
            f"{name},{_fmt(stage.temperature)},{_fmt(stage.attenuation_db)},"
            f"{_fmt(stage.cable_loss_db)},{_fmt(occupancy)}"
        )
        if dissipated is not None:
            row += f",{_fmt(dissipated[i])}"
        rows.append(row)
    header = "stage,temperature_k,attenuation_db,cable_loss_db,occupancy"
    if dissipated is not None:
        header += ",dissipated_w"
    _write_rows(ctx.out_dir / "budget.csv", header, rows)
    lines = [
        f"frequency: {_fmt(frequency)} Hz",
        f"total line loss: {_fmt(cryo.total_attenuation_db(stages))} dB",
        f"endpoint occupancy: {_fmt(cascade[-1][1])}",
    ]
    if delivered is not None:
        lines.append(f"input power: {_fmt(input_power)} W")
        lines.append(f"power delivered to sample: {_fmt(delivered)} W")
    plot = [
        "set datafile separator ','",
        "set logscale y",
        "set xlabel 'stage'",
        "set ylabel 'photon occupancy'",
        "plot 'budget.csv' skip 1 using 0:5:xtic(1) with linespoints "
        "title 'occupancy'",
    ]
    return lines, "\n".join(plot) + "\n"


def _scn_dielectric(ctx: RunContext):
    fields_rel = ctx.get("dielectric", "fields")
    if fields_rel is None:
        packaged = resources.files("tlsbath") / "configs/data/fields_immersion.csv"
        samples = dielectric.load_field_samples(str(packaged))
        fields_name = "packaged fields_immersion.csv"
    else:
        samples = dielectric.load_field_samples(ctx.path(fields_rel))
        fields_name = fields_rel
    resonance = ctx.get("dielectric", "resonance")
    coverage = ctx.get("dielectric", "coverage")
    pressure_ratio = ctx.get("dielectric", "pressure_ratio")
    filling = dielectric.filling_factor(samples)
    full_shift = dielectric.fill_freq_shift(resonance, filling)
    film_shift = dielectric.film_freq_shift(resonance, filling, coverage)
    eps_pressurized = dielectric.pressure_eps(pressure_ratio)
    relax_suppression = pressure_ratio**-6
    quantities = [
        ("filling_factor", filling),
        ("fill_shift_hz", full_shift),
        ("film_shift_hz", film_shift),
        ("pressurized_eps", eps_pressurized),
        ("relax_suppression", relax_suppression),
    ]
    lines = [
        f"field samples: {fields_name} ({len(samples)} regions)",
        f"filling factor: {_fmt(filling)}",
        f"full-immersion shift: {_fmt(full_shift)} Hz",
        f"thin-film shift (coverage {_fmt(coverage)}): {_fmt(film_shift)} Hz",
        f"pressurized eps (density x{_fmt(pressure_ratio)}): "
        f"{_fmt(eps_pressurized)}",
        f"relaxation suppression at pressure: {_fmt(relax_suppression)}",
    ]
    qi_full = ctx.get("dielectric", "qi_full")
    qi_empty = ctx.get("dielectric", "qi_empty")
    if (qi_full is None) != (qi_empty is None):
        raise UsageError(
            "dielectric.qi_full and dielectric.qi_empty go together"
        )
    if qi_full is not None:
        bound = dielectric.loss_tangent_bound(qi_full, qi_empty,
                                              filling=filling)
        quantities.append(("f_tan_delta_bound", bound.f_tan_delta))
        lines.append(
            f"added loss bound F tan(delta): {_fmt(bound.f_tan_delta)}"
            + ("" if bound.resolvable else " (below scatter, unresolved)")
        )
        if bound.resolvable:
            quantities.append(("tan_delta_bound", bound.tan_delta))
            t1 = dielectric.t1_bound(resonance, bound.f_tan_delta)
            quantities.append(("t1_bound_s", t1))
            lines.append(f"tan(delta) bound: {_fmt(bound.tan_delta)}")
            lines.append(f"qubit T1 bound: {_fmt(t1)} s")
    splitting = ctx.get("dielectric", "splitting")
    esr_kwargs = {} if splitting is None else {"splitting": splitting}
    t_grid = np.logspace(
        math.log10(ctx.get("dielectric", "t_min")),
        math.log10(ctx.get("dielectric", "t_max")),
        ctx.get("dielectric", "points"),
    )
    esr_rows = []
    for t in t_grid:
        ratio, normalized = dielectric.esr_peak_ratio(t, **esr_kwargs)
        esr_rows.append(f"{_fmt(t)},{_fmt(ratio)},{_fmt(normalized)}")
    _write_rows(
        ctx.out_dir / "esr.csv", "temperature_k,ratio,normalized", esr_rows
    )
    t_eq = dielectric.esr_equivalent_temperature(**esr_kwargs)
    lines.append(f"esr unit-ratio temperature: {_fmt(t_eq)} K")
    _write_rows(
        ctx.out_dir / "dielectric.csv",
        "quantity,value",
        [f"{name},{_fmt(value)}" for name, value in quantities],
    )
    plot = [
        "set datafile separator ','",
        "set logscale x",
        "set xlabel 'temperature (K)'",
        "set ylabel 'upper/lower peak ratio'",
        "plot 'esr.csv' skip 1 using 1:2 with lines title 'esr ratio'",
    ]
    return lines, "\n".join(plot) + "\n"


_SCENARIO_FN = {
    "synth": _scn_synth,
    "avar": _scn_avar,
    "fit-qn": _scn_fit_qn,
    "fit-noise": _scn_fit_noise,
    "sweep-temp": _scn_sweep_temp,
    "budget": _scn_budget,
    "dielectric": _scn_dielectric,
}


def _resolve_out_dir(arg_out, scenario: str) -> Path:
    if arg_out:
        return Path(arg_out)
    root = os.environ.get(OUT_ROOT_ENV)
    base = Path(root) if root else Path("tlsbath-out")
    return base / scenario


def _cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
    except UsageError as exc:
        print(str(exc))
        return 1
    except OSError as exc:
        raise UsageError(f"cannot read {args.config}: {exc}") from exc
    apply_overrides(cfg, args.overrides)
    diagnostics = validate_config(cfg)
    for line in diagnostics:
        print(line)
    if diagnostics:
        print(f"{len(diagnostics)} problem(s) in {args.config}")
        return 1
    print(f"{args.config}: ok")
    return 0


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read {args.config}: {exc}") from exc
    apply_overrides(cfg, args.overrides)
    if args.seed is not None:
        cfg.setdefault("run", {})["seed"] = args.seed
    diagnostics = validate_config(cfg)
    if diagnostics:
        raise UsageError(
            f"invalid config {args.config}: " + "; ".join(diagnostics)
        )
    scenario = cfg["run"]["scenario"]
    if scenario != args.command:
        raise UsageError(
            f"config names scenario {scenario!r} but the command line "
            f"says {args.command!r}"
        )
    seed = resolved(cfg, "run", "seed")
    workers = resolved(cfg, "run", "workers")
    out_dir = _resolve_out_dir(args.out or resolved(cfg, "run", "out"),
                               scenario)
    out_dir.mkdir(parents=True, exist_ok=True)
    ctx = RunContext(cfg, out_dir, seed, workers,
                     Path(args.config).resolve().parent)
    echo = effective_toml(cfg, scenario)
    (out_dir / "effective_config.toml").write_text(echo)
    started = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        lines, plot = _SCENARIO_FN[scenario](ctx)
    elapsed = time.perf_counter() - started
    (out_dir / "plot.gp").write_text(plot)
    digest = hashlib.sha256(echo.encode("utf-8")).hexdigest()
    report = [
        f"tlsbath {__version__}",
        f"scenario: {scenario}",
        f"seed: {seed}",
        f"workers: {workers}",
        f"config sha256: {digest}",
        f"elapsed: {elapsed:.3f} s",
    ]
    if caught:
        report.append("warnings:")
        report.extend(
            f"  {w.category.__name__}: {w.message}" for w in caught
        )
    else:
        report.append("warnings: none")
    report.append("-- results --")
    report.extend(lines)
    (out_dir / "report.txt").write_text("\n".join(report) + "\n")
    print(f"{scenario}: wrote {out_dir}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tlsbath",
        description="Bath-noise scenarios: synthesis, spectra, fits, "
                    "cryogenic budgets, dielectric bounds.",
    )
    parser.add_argument(
        "command",
        choices=SCENARIOS + ("validate",),
        help="scenario to run, or validate to check a config",
    )
    parser.add_argument("--config", required=True, help="TOML config path")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one config key (repeatable)",
    )
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--seed", type=int, help="override run.seed")
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_run(args)
    except UsageError as exc:
        message = str(exc).replace("\n", " ")
        print(f"tlsbath: error[usage]: {message}", file=sys.stderr)
        return 2
    except DomainError as exc:
        message = str(exc).replace("\n", " ")
        print(f"tlsbath: error[domain]: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
