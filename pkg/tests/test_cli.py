from importlib import resources

import numpy as np
import pytest

from tlsbath import cli
from tlsbath.io import read_trace_csv


def shipped(name):
    return str(resources.files("tlsbath") / "configs" / name)


def write_cfg(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


SMALL_SYNTH = """
[run]
scenario = "synth"
seed = 4

[synth]
n_fluct = 20
gamma_min = 0.01
gamma_max = 10.0
h_minus1 = 1e-6
duration = 100.0
dt = 0.05

[avar]
tau_lo = 0.25
tau_hi = 5.0
"""


def test_validate_shipped_configs_exit_zero(capsys):
    for name in ("fig3a_helium.toml", "fig4c_ncscaling.toml",
                 "figS2_budget.toml", "noise_closure.toml"):
        assert cli.main(["validate", "--config", shipped(name)]) == 0
    out = capsys.readouterr().out
    assert out.count(": ok") == 4


def test_validate_reports_faults(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH + "\n[bogus]\nx = 1\n")
    assert cli.main(["validate", "--config", path]) == 1
    out = capsys.readouterr().out
    assert "bogus" in out


def test_validate_fault_via_override(capsys):
    code = cli.main([
        "validate", "--config", shipped("figS2_budget.toml"),
        "--set", "chain.frequency=-1",
    ])
    assert code == 1
    assert "chain.frequency" in capsys.readouterr().out


def test_scenario_mismatch_is_usage_error(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH)
    assert cli.main(["avar", "--config", path]) == 2
    err = capsys.readouterr().err
    assert err.startswith("tlsbath: error[usage]:")
    assert err.count("\n") == 1


def test_invalid_config_is_usage_error(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH)
    code = cli.main(["synth", "--config", path, "--set", "synth.dt=-0.05",
                     "--out", str(tmp_path / "out")])
    assert code == 2
    assert "synth.dt" in capsys.readouterr().err


def test_unknown_override_key_rejected(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH)
    code = cli.main(["synth", "--config", path, "--set", "synth.bogus=1",
                     "--out", str(tmp_path / "out")])
    assert code == 2
    assert "synth.bogus" in capsys.readouterr().err


def test_domain_error_exit_code(tmp_path, capsys):
    # vacuum bath saturates near N = c^2 kappa Gamma1 Gamma2; 1e6 photons is
    # far beyond it
    path = write_cfg(tmp_path, """
[run]
scenario = "fit-qn"

[fit_qn]
n_min = 1.0
n_max = 1e6
points = 5
""")
    code = cli.main(["fit-qn", "--config", path,
                     "--out", str(tmp_path / "out")])
    assert code == 1
    assert capsys.readouterr().err.startswith("tlsbath: error[domain]:")


def test_synth_run_artifacts(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH)
    out = tmp_path / "out"
    assert cli.main(["synth", "--config", path, "--out", str(out)]) == 0
    capsys.readouterr()
    for name in ("trace.csv", "avar.csv", "report.txt",
                 "effective_config.toml", "plot.gp"):
        assert (out / name).exists(), name
    report = (out / "report.txt").read_text()
    assert "scenario: synth" in report
    assert "kernel backend:" in report
    trace = read_trace_csv(out / "trace.csv")
    assert trace.samples.size == 2000
    # nothing written outside the output directory
    assert sorted(p.name for p in tmp_path.iterdir()) == ["out", "run.toml"]


def test_reruns_byte_identical(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert cli.main(["synth", "--config", path, "--out", str(out1)]) == 0
    assert cli.main(["synth", "--config", path, "--out", str(out2)]) == 0
    capsys.readouterr()
    for name in ("trace.csv", "avar.csv", "effective_config.toml"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_seed_flag_changes_trace(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cli.main(["synth", "--config", path, "--out", str(out1), "--seed", "1"])
    cli.main(["synth", "--config", path, "--out", str(out2), "--seed", "2"])
    capsys.readouterr()
    t1 = read_trace_csv(out1 / "trace.csv")
    t2 = read_trace_csv(out2 / "trace.csv")
    assert not np.array_equal(t1.samples, t2.samples)
    # and the echo records the seed actually used
    assert "seed = 1" in (out1 / "effective_config.toml").read_text()


def test_rerun_from_echoed_config(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert cli.main(["synth", "--config", path, "--out", str(out1),
                     "--set", "synth.n_fluct=10"]) == 0
    echoed = str(out1 / "effective_config.toml")
    assert cli.main(["synth", "--config", echoed, "--out", str(out2)]) == 0
    capsys.readouterr()
    assert (out1 / "trace.csv").read_bytes() == \
        (out2 / "trace.csv").read_bytes()
    assert (out1 / "avar.csv").read_bytes() == (out2 / "avar.csv").read_bytes()


def test_override_reflected_in_echo(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH)
    out = tmp_path / "out"
    cli.main(["synth", "--config", path, "--out", str(out),
              "--set", "synth.h_minus1=2e-6", "--set", "loop.enabled=true",
              "--set", "loop.gain=2.0"])
    capsys.readouterr()
    echo = (out / "effective_config.toml").read_text()
    assert "h_minus1 = 2e-06" in echo
    assert "enabled = true" in echo
    assert (out / "tracked.csv").exists()


def test_empty_bath_pipeline_zero_avar(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL_SYNTH)
    out = tmp_path / "out"
    assert cli.main(["synth", "--config", path, "--out", str(out),
                     "--set", "synth.n_fluct=0"]) == 0
    capsys.readouterr()
    rows = (out / "avar.csv").read_text().splitlines()[1:]
    assert rows
    assert all(float(r.split(",")[1]) == 0.0 for r in rows)


def test_avar_scenario_reads_trace(tmp_path, capsys):
    synth_cfg = write_cfg(tmp_path, SMALL_SYNTH, "synth.toml")
    out1 = tmp_path / "s"
    cli.main(["synth", "--config", synth_cfg, "--out", str(out1)])
    # trace path relative to the config file's directory
    avar_cfg = write_cfg(tmp_path, """
[run]
scenario = "avar"

[avar]
trace = "s/trace.csv"
tau_lo = 0.25
tau_hi = 5.0
segments = 4
""", "avar.toml")
    out2 = tmp_path / "a"
    assert cli.main(["avar", "--config", avar_cfg, "--out", str(out2)]) == 0
    capsys.readouterr()
    assert (out2 / "avar.csv").read_bytes() == \
        (out1 / "avar.csv").read_bytes()
    assert (out2 / "psd.csv").exists()


def test_missing_trace_key(tmp_path, capsys):
    avar_cfg = write_cfg(tmp_path, "[run]\nscenario = \"avar\"\n")
    assert cli.main(["avar", "--config", avar_cfg,
                     "--out", str(tmp_path / "out")]) == 2
    assert "avar.trace" in capsys.readouterr().err


def test_out_root_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TLSBATH_OUT_ROOT", str(tmp_path / "root"))
    monkeypatch.chdir(tmp_path)
    path = write_cfg(tmp_path, SMALL_SYNTH)
    assert cli.main(["synth", "--config", path]) == 0
    capsys.readouterr()
    assert (tmp_path / "root" / "synth" / "trace.csv").exists()


def test_budget_run(tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["budget", "--config", shipped("figS2_budget.toml"),
                     "--out", str(out)]) == 0
    capsys.readouterr()
    rows = (out / "budget.csv").read_text().splitlines()
    assert rows[0] == ("stage,temperature_k,attenuation_db,cable_loss_db,"
                       "occupancy,dissipated_w")
    final = rows[-1].split(",")
    assert final[0] == "ANDRP"
    assert float(final[4]) < 1e-3
    # dissipation rows plus delivered power conserve the input exactly
    report = (out / "report.txt").read_text()
    delivered = float(report.split("power delivered to sample: ")[1].split()[0])
    dissipated = sum(float(r.split(",")[5]) for r in rows[1:])
    assert dissipated + delivered == pytest.approx(1e-3, rel=1e-12)


def test_dielectric_run(tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["dielectric", "--config",
                     shipped("dielectric_bounds.toml"),
                     "--out", str(out)]) == 0
    capsys.readouterr()
    quantities = dict(
        row.split(",") for row in
        (out / "dielectric.csv").read_text().splitlines()[1:]
    )
    assert float(quantities["filling_factor"]) == pytest.approx(0.10, rel=1e-9)
    assert float(quantities["fill_shift_hz"]) == pytest.approx(-12.437e6,
                                                               rel=1e-3)
    esr = (out / "esr.csv").read_text().splitlines()
    assert len(esr) == 101
    ratios = [float(r.split(",")[1]) for r in esr[1:]]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))


def test_sweep_workers_do_not_change_output(tmp_path, capsys):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cfg = shipped("fig3a_helium.toml")
    assert cli.main(["sweep-temp", "--config", cfg, "--out", str(out1),
                     "--set", "sweep.points=12"]) == 0
    assert cli.main(["sweep-temp", "--config", cfg, "--out", str(out2),
                     "--set", "sweep.points=12", "--set", "run.workers=4"]) == 0
    capsys.readouterr()
    assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()


def test_fit_noise_run(tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["fit-noise", "--config", shipped("fig3b_noise_vs_n.toml"),
                     "--out", str(out)]) == 0
    capsys.readouterr()
    report = (out / "report.txt").read_text()
    fitted = float(report.split("fitted n_c: ")[1].split()[0])
    assert 50.0 / 1.5 < fitted < 50.0 * 1.5
