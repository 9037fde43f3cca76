"""Run configuration: TOML loading, schema validation, overrides, echo.

A config is a two-level TOML document: sections of scalar keys (plus a few
lists, and the chain's array of stage tables). The schema is closed; unknown
sections or keys are diagnostics. validate() never raises on content, it
returns the list of problems with dotted-path addresses.
"""

from __future__ import annotations

import math
from pathlib import Path

try:
    import tomllib
except ImportError:  # 3.10
    import tomli as tomllib

import numpy as np

from .errors import UsageError

__all__ = [
    "SCENARIOS",
    "load_config",
    "apply_overrides",
    "validate_config",
    "effective_toml",
    "derive_seed",
    "SEED_BATH",
    "SEED_TRACE",
    "SEED_LOOP",
    "SEED_SCENARIO",
]

SCENARIOS = (
    "synth",
    "avar",
    "fit-qn",
    "fit-noise",
    "sweep-temp",
    "budget",
    "dielectric",
)

# PRNG roles hung off the run seed; each consumer derives its own integer
SEED_BATH = 0
SEED_TRACE = 1
SEED_LOOP = 2
SEED_SCENARIO = 3

_NUM = (int, float)

# section -> key -> (accepted types, default or REQUIRED)
_REQUIRED = object()

_SCHEMA = {
    "run": {
        "scenario": (str, _REQUIRED),
        "seed": (int, 0),
        "workers": (int, 1),
        "out": (str, None),
    },
    "bath": {
        "preset": (str, "vacuum"),
        "mu": (_NUM, None),
        "chi": (_NUM, None),
        "gamma2_anchor_temperature": (_NUM, None),
        "gamma2_anchor_rate": (_NUM, None),
        "gamma1": (_NUM, None),
        "gamma1_min": (_NUM, None),
        "gamma1_max": (_NUM, None),
        "fluct_density": (_NUM, None),
        "interaction_radius": (_NUM, None),
        "u0": (_NUM, None),
        "p_gamma": (_NUM, None),
        "c_const": (_NUM, None),
        "f_tan_delta": (_NUM, None),
        "nc_calibration": (_NUM, None),
        "noise_scale": (_NUM, None),
    },
    "synth": {
        "n_fluct": (int, 1000),
        "gamma_min": (_NUM, 1e-4),
        "gamma_max": (_NUM, 1e4),
        "h_minus1": (_NUM, 1e-17),
        "duration": (_NUM, 5e4),
        "dt": (_NUM, 0.05),
        "nu_mean": (_NUM, 1.0),
        "bump_amplitude": (_NUM, None),
        "bump_rate": (_NUM, None),
    },
    "loop": {
        "enabled": (bool, False),
        "gain": (_NUM, 10.0),
        "gate_time": (_NUM, 0.05),
        "noise_sigma": (_NUM, 0.0),
    },
    "avar": {
        "trace": (str, None),
        "tau_lo": (_NUM, 1.0),
        "tau_hi": (_NUM, 1e3),
        "per_decade": (int, 4),
        "extract_lo": (_NUM, None),
        "extract_hi": (_NUM, None),
        "exclude_lo": (_NUM, None),
        "exclude_hi": (_NUM, None),
        "segments": (int, None),
    },
    "sweep": {
        "t_min": (_NUM, 1e-3),
        "t_max": (_NUM, 0.25),
        "points": (int, 60),
        "t_x": (_NUM, 0.08),
        "low_exponent": (_NUM, 0.25),
        "s_at_tx": (_NUM, 1.0),
        "photon_numbers": (list, (0.0,)),
        "n_c_at_tx": (_NUM, None),
    },
    "fit_qn": {
        "n_min": (_NUM, 1e-3),
        "n_max": (_NUM, 1.0),
        "points": (int, 20),
        "temperature": (_NUM, 0.075),
        "resonance": (_NUM, 6e9),
        "noise_fraction": (_NUM, 0.01),
        "model": (str, "gtm"),
    },
    "fit_noise": {
        "n_min": (_NUM, 1e-1),
        "n_max": (_NUM, 1e4),
        "points": (int, 25),
        "s0": (_NUM, 1e-17),
        "n_c": (_NUM, 50.0),
        "noise_fraction": (_NUM, 0.05),
    },
    "chain": {
        "frequency": (_NUM, 6e9),
        "input_power": (_NUM, None),
        "stages": (list, None),
    },
    "dielectric": {
        "fields": (str, None),
        "resonance": (_NUM, 5.839e9),
        "coverage": (_NUM, 0.037),
        "pressure_ratio": (_NUM, 1.3),
        "qi_full": (list, None),
        "qi_empty": (list, None),
        "t_min": (_NUM, 1e-3),
        "t_max": (_NUM, 0.3),
        "points": (int, 100),
        "splitting": (_NUM, None),
    },
}

_STAGE_KEYS = {
    "name": str,
    "temperature": _NUM,
    "attenuation_db": _NUM,
    "cable_loss_db": _NUM,
}

# physical-range invariants checked by validate; execution never sees values
# that fail these
_POSITIVE = {
    "bath.chi", "bath.gamma1", "bath.gamma1_min", "bath.gamma1_max",
    "bath.gamma2_anchor_temperature", "bath.gamma2_anchor_rate",
    "bath.fluct_density", "bath.interaction_radius", "bath.u0",
    "bath.p_gamma", "bath.c_const", "bath.f_tan_delta",
    "bath.nc_calibration", "bath.noise_scale",
    "synth.gamma_min", "synth.gamma_max", "synth.duration", "synth.dt",
    "synth.nu_mean", "synth.bump_rate",
    "loop.gain", "loop.gate_time",
    "avar.tau_lo", "avar.tau_hi", "avar.extract_lo", "avar.extract_hi",
    "avar.exclude_lo", "avar.exclude_hi",
    "sweep.t_min", "sweep.t_max", "sweep.t_x", "sweep.s_at_tx",
    "sweep.n_c_at_tx",
    "fit_qn.n_min", "fit_qn.n_max", "fit_qn.temperature", "fit_qn.resonance",
    "fit_noise.n_min", "fit_noise.n_max", "fit_noise.s0", "fit_noise.n_c",
    "chain.frequency",
    "dielectric.resonance", "dielectric.pressure_ratio", "dielectric.t_min",
    "dielectric.t_max", "dielectric.splitting",
}
_NON_NEGATIVE = {
    "synth.h_minus1", "synth.bump_amplitude",
    "loop.noise_sigma",
    "fit_qn.noise_fraction", "fit_noise.noise_fraction",
    "chain.input_power",
    "run.seed",
}
_INT_MIN = {
    "run.workers": 1,
    "synth.n_fluct": 0,
    "avar.per_decade": 1,
    "avar.segments": 1,
    "sweep.points": 2,
    "fit_qn.points": 3,
    "fit_noise.points": 3,
    "dielectric.points": 2,
}
# closed intervals for the few bounded keys
_UNIT_RANGE = {
    "dielectric.coverage": (0.0, 1.0),
    "bath.mu": (0.0, 1.0),
}

# sections each scenario actually reads (run is global)
_SCENARIO_SECTIONS = {
    "synth": ("synth", "loop"),
    "avar": ("avar",),
    "fit-qn": ("fit_qn", "bath"),
    "fit-noise": ("fit_noise",),
    "sweep-temp": ("sweep", "bath"),
    "budget": ("chain",),
    "dielectric": ("dielectric",),
}


def load_config(path) -> dict:
    """Parse a TOML config file. Parse failures are usage errors."""
    raw = Path(path).read_bytes()
    try:
        return tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise UsageError(f"{path}: not valid TOML: {exc}") from exc


def parse_override(text: str):
    """Split one --set argument into (section, key, value).

    The value is parsed as a TOML literal; anything that does not parse
    stays a plain string.
    """
    key_path, eq, raw = text.partition("=")
    if not eq:
        raise UsageError(f"override {text!r} needs key=value")
    parts = key_path.strip().split(".")
    if len(parts) != 2 or not all(parts):
        raise UsageError(
            f"override key {key_path!r} must look like section.key"
        )
    raw = raw.strip()
    try:
        value = tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw
    return parts[0], parts[1], value


def apply_overrides(cfg: dict, overrides) -> dict:
    """Apply --set pairs onto a parsed config (returns the same dict)."""
    for text in overrides:
        section, key, value = parse_override(text)
        cfg.setdefault(section, {})[key] = value
    return cfg


def _check_scalar(diags, addr, value, want):
    if want is bool:
        if not isinstance(value, bool):
            diags.append(f"{addr}: expected a boolean")
        return
    if want is int:
        if isinstance(value, bool) or not isinstance(value, int):
            diags.append(f"{addr}: expected an integer")
        return
    if want is _NUM:
        if isinstance(value, bool) or not isinstance(value, _NUM):
            diags.append(f"{addr}: expected a number")
        elif not math.isfinite(float(value)):
            diags.append(f"{addr}: must be finite")
        return
    if want is str:
        if not isinstance(value, str):
            diags.append(f"{addr}: expected a string")
        return
    if want is list:
        if not isinstance(value, list):
            diags.append(f"{addr}: expected an array")
        return
    raise AssertionError(f"unhandled schema type {want!r}")


def _check_stages(diags, stages):
    for i, stage in enumerate(stages):
        addr = f"chain.stages[{i}]"
        if not isinstance(stage, dict):
            diags.append(f"{addr}: expected a table")
            continue
        for key in stage:
            if key not in _STAGE_KEYS:
                diags.append(f"{addr}.{key}: unknown key")
        for key in ("name", "temperature"):
            if key not in stage:
                diags.append(f"{addr}.{key}: required")
        for key, want in _STAGE_KEYS.items():
            if key in stage:
                _check_scalar(diags, f"{addr}.{key}", stage[key], want)
        for key in ("attenuation_db", "cable_loss_db"):
            value = stage.get(key, 0)
            if isinstance(value, _NUM) and not isinstance(value, bool) \
                    and value < 0:
                diags.append(f"{addr}.{key}: must be non-negative")
        temp = stage.get("temperature")
        if isinstance(temp, _NUM) and not isinstance(temp, bool) and temp <= 0:
            diags.append(f"{addr}.temperature: must be positive")


def _cross_checks(diags, cfg):
    def num(section, key):
        value = cfg.get(section, {}).get(key)
        if isinstance(value, bool) or not isinstance(value, _NUM):
            return None
        return float(value)

    for addr in sorted(_POSITIVE):
        section, key = addr.split(".")
        value = num(section, key)
        if value is not None and value <= 0:
            diags.append(f"{addr}: must be positive")
    for addr in sorted(_NON_NEGATIVE):
        section, key = addr.split(".")
        value = num(section, key)
        if value is not None and value < 0:
            diags.append(f"{addr}: must be non-negative")
    for addr, minimum in _INT_MIN.items():
        section, key = addr.split(".")
        value = cfg.get(section, {}).get(key)
        if isinstance(value, int) and not isinstance(value, bool) \
                and value < minimum:
            diags.append(f"{addr}: must be at least {minimum}")
    for addr, (lo, hi) in _UNIT_RANGE.items():
        section, key = addr.split(".")
        value = num(section, key)
        if value is not None and not lo <= value <= hi:
            diags.append(f"{addr}: must lie in [{lo:g}, {hi:g}]")

    pairs = [
        ("synth", "gamma_min", "gamma_max"),
        ("bath", "gamma1_min", "gamma1_max"),
        ("avar", "tau_lo", "tau_hi"),
        ("sweep", "t_min", "t_max"),
        ("fit_qn", "n_min", "n_max"),
        ("fit_noise", "n_min", "n_max"),
        ("dielectric", "t_min", "t_max"),
    ]
    for section, lo_key, hi_key in pairs:
        lo, hi = num(section, lo_key), num(section, hi_key)
        if lo is not None and hi is not None and lo >= hi:
            diags.append(
                f"{section}.{lo_key} must be below {section}.{hi_key}"
            )
    preset = cfg.get("bath", {}).get("preset")
    if isinstance(preset, str) and preset not in ("vacuum", "helium"):
        diags.append("bath.preset: expected vacuum or helium")
    model = cfg.get("fit_qn", {}).get("model")
    if isinstance(model, str) and model not in ("gtm", "empirical"):
        diags.append("fit_qn.model: expected gtm or empirical")
    scenario = cfg.get("run", {}).get("scenario")
    if isinstance(scenario, str) and scenario not in SCENARIOS:
        diags.append(
            "run.scenario: expected one of " + ", ".join(SCENARIOS)
        )
    for section, key in (("dielectric", "qi_full"), ("dielectric", "qi_empty"),
                         ("sweep", "photon_numbers")):
        values = cfg.get(section, {}).get(key)
        if isinstance(values, list):
            for i, v in enumerate(values):
                if isinstance(v, bool) or not isinstance(v, _NUM):
                    diags.append(f"{section}.{key}[{i}]: expected a number")


def validate_config(cfg: dict) -> list:
    """Schema and invariant diagnostics, dotted-path addressed. Empty means
    the config is runnable."""
    diags = []
    if not isinstance(cfg, dict):
        return ["config: expected a table of sections"]
    for section, content in cfg.items():
        if section not in _SCHEMA:
            diags.append(f"{section}: unknown section")
            continue
        if not isinstance(content, dict):
            diags.append(f"{section}: expected a table")
            continue
        for key, value in content.items():
            if key not in _SCHEMA[section]:
                diags.append(f"{section}.{key}: unknown key")
                continue
            want, _ = _SCHEMA[section][key]
            _check_scalar(diags, f"{section}.{key}", value, want)
    if "run" not in cfg or "scenario" not in cfg.get("run", {}):
        diags.append("run.scenario: required")
    stages = cfg.get("chain", {}).get("stages")
    if isinstance(stages, list):
        _check_stages(diags, stages)
    _cross_checks(diags, cfg)
    return diags


def resolved(cfg: dict, section: str, key: str):
    """Value of section.key with the schema default filled in."""
    want, default = _SCHEMA[section][key]
    value = cfg.get(section, {}).get(key, default)
    if value is _REQUIRED:
        raise UsageError(f"{section}.{key} is required")
    if want is _NUM and value is not None:
        return float(value)
    if want is list and value is not None:
        return list(value)
    return value


def effective_config(cfg: dict, scenario: str) -> dict:
    """Fully resolved config for the echo: schema defaults filled in for the
    sections this scenario reads, in schema order."""
    sections = ("run",) + _SCENARIO_SECTIONS[scenario]
    out = {}
    for section in _SCHEMA:
        if section not in sections and section not in cfg:
            continue
        body = {}
        for key in _SCHEMA[section]:
            value = resolved(cfg, section, key)
            if value is not None:
                body[key] = value
        out[section] = body
    # the echo records what actually ran
    out["run"]["scenario"] = scenario
    return out


def _toml_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        text = repr(value)
        return text if ("." in text or "e" in text or "inf" in text
                        or "nan" in text) else text + ".0"
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_scalar(v) for v in value) + "]"
    raise UsageError(f"cannot serialize {value!r} to TOML")


def effective_toml(cfg: dict, scenario: str) -> str:
    """Echoed effective config as TOML text; reparsing it reproduces the
    run exactly."""
    resolved_cfg = effective_config(cfg, scenario)
    lines = []
    for section, body in resolved_cfg.items():
        tables = {
            k: v for k, v in body.items()
            if isinstance(v, list) and v and isinstance(v[0], dict)
        }
        lines.append(f"[{section}]")
        for key, value in body.items():
            if key in tables:
                continue
            lines.append(f"{key} = {_toml_scalar(value)}")
        lines.append("")
        for key, rows in tables.items():
            for row in rows:
                lines.append(f"[[{section}.{key}]]")
                for k, v in row.items():
                    lines.append(f"{k} = {_toml_scalar(v)}")
                lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def derive_seed(seed: int, role: int) -> int:
    """Independent integer seed for one PRNG role of a run."""
    state = np.random.SeedSequence([seed, role]).generate_state(2, np.uint64)
    return int(state[0])
