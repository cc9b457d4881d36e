import math

import numpy as np
import pytest
import yaml

from spinpair.cli import (
    CSV_COLUMNS,
    SUMMARY_COLUMNS,
    compute_trace,
    dominant_frequency,
    load_preset,
    main,
    preset_ids,
    run_single,
    run_sweep,
    trace_stats,
)
from spinpair.config import parse_config
from spinpair.errors import AdmissibilityError, ConfigError

SINUSOID = {"kind": "sinusoid", "amplitude": 2.0, "frequency": 50.0, "phase": math.pi / 50}


def write_yaml(tmp_path, name, data):
    path = tmp_path / f"{name}.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


def ic1_data(**overrides):
    data = {
        "mode": "ic1",
        "initial_state": "pp",
        "time": {"t_end": 2.0, "samples": 41},
        "ic1": {"k": 0.5, "omega_plus": dict(SINUSOID), "lambda_z": 0.4},
    }
    data.update(overrides)
    return data


# --- presets ------------------------------------------------------------------

def test_preset_suite_parses():
    ids = preset_ids()
    assert len(ids) == 26
    for expected in ("fig1b", "fig2", "fig8a", "fig9", "fig11a", "fig13"):
        assert expected in ids
    for preset_id in ids:
        cfg = load_preset(preset_id)
        assert cfg.name == preset_id


def test_load_preset_unknown():
    with pytest.raises(ConfigError):
        load_preset("fig99")


def test_figures_list(capsys):
    assert main(["figures", "--list"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == preset_ids()


# --- trace computation ----------------------------------------------------------

def test_trace_shape_and_grid():
    cfg = parse_config(ic1_data(), "case")
    trace = compute_trace(cfg)
    assert trace.times.shape == (41,)
    assert trace.times[0] == 0.0
    assert trace.times[-1] == 2.0
    assert trace.amplitudes.shape == (41, 4)
    assert np.allclose(trace.norms, 1.0, atol=1e-12)
    assert np.all(trace.concurrences >= 0.0)
    assert np.all(trace.concurrences <= 1.0 + 1e-12)


def test_numeric_matches_proportional_closed_form():
    numeric = {
        "mode": "numeric",
        "initial_state": "pp",
        "time": {"t_end": 2.0, "samples": 41},
        "numeric": {
            "omega_plus": dict(SINUSOID),
            "lambda_m": {"kind": "scaled", "factor": 0.5, "base": dict(SINUSOID)},
            "lambda_z": 0.4,
        },
    }
    exact = compute_trace(parse_config(ic1_data(), "a"))
    rk4 = compute_trace(parse_config(numeric, "b"))
    assert np.max(np.abs(exact.amplitudes - rk4.amplitudes)) < 1e-5
    assert np.max(np.abs(exact.concurrences - rk4.concurrences)) < 1e-5


def test_numeric_echo_injects_step():
    numeric = {
        "mode": "numeric",
        "initial_state": "pp",
        "time": {"t_end": 1.0, "samples": 11},
        "numeric": {"omega_plus": dict(SINUSOID)},
    }
    trace = compute_trace(parse_config(numeric, "case"))
    assert trace.echo["numeric"]["step"] == pytest.approx((2 * math.pi / 50.0) / 200.0)
    override = compute_trace(parse_config(numeric, "case"), step_override=1e-3)
    assert override.echo["numeric"]["step"] == 1e-3


def test_step_override_rejected_outside_numeric():
    cfg = parse_config(ic1_data(), "case")
    with pytest.raises(ConfigError):
        compute_trace(cfg, step_override=1e-3)


def test_explicit_amplitude_initial_state():
    r = math.sqrt(0.5)
    numeric = {
        "mode": "numeric",
        "initial_state": [[r, 0.0], [0.0, r], 0.0, 0.0],
        "time": {"t_end": 0.5, "samples": 6},
        "numeric": {"omega_plus": dict(SINUSOID)},
    }
    trace = compute_trace(parse_config(numeric, "case"))
    assert trace.amplitudes[0, 0] == complex(r)
    assert trace.amplitudes[0, 1] == complex(0.0, r)


def test_perturbation_requires_pp_initial():
    data = {
        "mode": "perturbation",
        "initial_state": "mm",
        "time": {"t_end": 1.0, "samples": 11},
        "perturbation": {
            "omega_plus": 5.0,
            "drive": {"kind": "sinusoid", "amplitude": 0.25, "frequency": 10.5},
        },
    }
    with pytest.raises(ConfigError):
        compute_trace(parse_config(data, "case"))


def test_perturbation_norm_reported_not_enforced():
    data = {
        "mode": "perturbation",
        "initial_state": "pp",
        "time": {"t_end": 30.0, "samples": 301},
        "perturbation": {
            "omega_plus": 5.0,
            "drive": {"kind": "sinusoid", "amplitude": 0.025, "frequency": 10.5},
        },
    }
    trace = compute_trace(parse_config(data, "case"))
    assert np.max(trace.norms) > 1.0
    assert np.max(np.abs(trace.norms - 1.0)) < 0.05


def test_rwa_rejects_other_subspace():
    data = {
        "mode": "rwa",
        "initial_state": "pm",
        "time": {"t_end": 1.0, "samples": 11},
        "rwa": {
            "mode": "lambda_drive",
            "static_value": 5.0,
            "drive": {"kind": "sinusoid", "amplitude": 0.25, "frequency": 10.5},
            "theta10": 0.0,
        },
    }
    with pytest.raises(ConfigError):
        compute_trace(parse_config(data, "case"))


def test_inadmissible_rate_matched_run_is_refused():
    data = {
        "mode": "ic2",
        "initial_state": "pp",
        "time": {"t_end": 1.0, "samples": 11},
        "ic2": {
            "kappa": 0.1,
            "theta10": math.pi / 4,
            "lambda_m": {"kind": "sinusoid", "amplitude": 128.0, "frequency": 10.0},
        },
    }
    with pytest.raises(AdmissibilityError, match="confinement bound"):
        compute_trace(parse_config(data, "case"))


# --- statistics -----------------------------------------------------------------

def test_dominant_frequency_recovers_sinusoid_rate():
    t = np.linspace(0.0, 10.0, 2001)
    assert dominant_frequency(t, np.sin(7.0 * t)) == pytest.approx(7.0, rel=0.05)


def test_trace_stats_keys():
    trace = compute_trace(parse_config(ic1_data(), "case"))
    stats = trace_stats(trace)
    assert set(stats) == set(SUMMARY_COLUMNS) - {"value"}
    assert stats["oscillation_amplitude"] == pytest.approx(
        float(np.max(trace.concurrences) - np.min(trace.concurrences))
    )


# --- file output ------------------------------------------------------------------

def test_trace_csv_layout(tmp_path, trace_reader):
    cfg = parse_config(ic1_data(), "case")
    path = run_single(cfg, tmp_path)
    assert path == tmp_path / "case.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    echo = [ln for ln in lines if ln.startswith("# ")]
    keys = [ln[2:].split(":", 1)[0] for ln in echo]
    assert keys == sorted(keys)
    assert "ic1.k" in keys
    header = lines[len(echo)]
    assert header == ",".join(CSV_COLUMNS)
    cols = trace_reader(path)
    assert cols["t"].size == 41
    assert np.allclose(cols["norm"], 1.0, atol=1e-12)


def test_run_is_byte_deterministic(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert main(["figures", "fig1b", "--output", str(a)]) == 0
    assert main(["figures", "fig1b", "--output", str(b)]) == 0
    assert (a / "fig1b.csv").read_bytes() == (b / "fig1b.csv").read_bytes()


def test_sweep_outputs_and_thread_invariance(tmp_path, trace_reader):
    cfg = load_preset("fig2")
    serial = tmp_path / "serial"
    threaded = tmp_path / "threaded"
    paths = run_sweep(cfg, serial, threads=1)
    run_sweep(cfg, threaded, threads=3)
    names = sorted(p.name for p in paths)
    assert names == ["fig2_10.csv", "fig2_2.csv", "fig2_6.csv", "fig2_summary.csv"]
    for name in names:
        assert (serial / name).read_bytes() == (threaded / name).read_bytes()
    summary = trace_reader(serial / "fig2_summary.csv")
    assert list(summary) == list(SUMMARY_COLUMNS)
    assert np.array_equal(summary["value"], [2.0, 6.0, 10.0])


def test_sweep_requires_sweep_block(tmp_path):
    cfg = parse_config(ic1_data(), "case")
    with pytest.raises(ConfigError):
        run_sweep(cfg, tmp_path)


# --- entry point -----------------------------------------------------------------

def test_main_run_and_errors(tmp_path, capsys):
    path = write_yaml(tmp_path, "case", ic1_data())
    assert main(["run", str(path), "--output", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert str(tmp_path / "case.csv") in out

    assert main(["run", str(tmp_path / "absent.yaml")]) == 2
    assert "error:" in capsys.readouterr().err

    sweep_path = write_yaml(
        tmp_path,
        "swept",
        ic1_data(sweep={"parameter": "ic1.k", "values": [0.5, 1.0]}),
    )
    assert main(["run", str(sweep_path)]) == 2
    assert "simulate sweep" in capsys.readouterr().err

    assert main(["figures", "fig99"]) == 2
    assert "unknown preset" in capsys.readouterr().err

    assert main(["run", str(path), "--step", "0.001"]) == 2
    assert "numeric" in capsys.readouterr().err


def test_main_sweep_writes_summary(tmp_path, capsys):
    path = write_yaml(
        tmp_path,
        "swept",
        ic1_data(
            time={"t_end": 1.0, "samples": 101},
            sweep={"parameter": "ic1.omega_plus.amplitude", "values": [2.0, 6.0]},
        ),
    )
    outdir = tmp_path / "out"
    assert main(["sweep", str(path), "--output", str(outdir)]) == 0
    assert (outdir / "swept_summary.csv").is_file()
    assert (outdir / "swept_2.csv").is_file()
    assert (outdir / "swept_6.csv").is_file()
