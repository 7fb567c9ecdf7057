import json

import numpy as np
import pytest

from rads import cli
from rads.config import PAPER_DEFAULT_TEXT, ConfigError, load_default, loads

from cases import MALFORMED


def invoke(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_superradiance_outputs(tmp_path, capsys):
    code, out, _ = invoke(capsys, "superradiance", "--n", 4, "--out", tmp_path)
    assert code == 0 and "f_N/f_1 = 2.000000" in out
    header = (tmp_path / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t_ns,p1_q0,p1_q1,p1_q2,p1_q3,p1_q4,photon_p1,photon_mean"
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["frequency_mhz"] == pytest.approx(54.0, rel=1e-6)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["experiment"] == "superradiance" and manifest["n"] == 4
    assert manifest["config_digest"] == load_default().digest
    assert (tmp_path / "plot.py").exists()


def test_reruns_are_byte_identical(tmp_path, capsys):
    for d in ("a", "b"):
        assert invoke(capsys, "subradiance", "--n", 3, "--out", tmp_path / d)[0] == 0
    assert (tmp_path / "a/trajectory.csv").read_bytes() == (tmp_path / "b/trajectory.csv").read_bytes()


def test_subradiance_reports_no_oscillation(tmp_path, capsys):
    code, out, _ = invoke(capsys, "subradiance", "--n", 8, "--m", 3, "--out", tmp_path)
    assert code == 0 and "no oscillation detected" in out


@pytest.mark.parametrize("argv", [["subradiance", "--n", 8, "--m", 8], ["subradiance", "--n", 1],
                                  ["superradiance", "--n", 11], ["absorb", "--n", 2],
                                  ["scaling", "--ns", 1, 2], ["scaling", "--ns", 1, 2, 40]])
def test_out_of_range_arguments_exit_2(argv, tmp_path, capsys):
    code, _, err = invoke(capsys, *argv, "--out", tmp_path)
    assert code == 2 and err.startswith("rads:")


def test_switch_and_absorb(tmp_path, capsys):
    assert invoke(capsys, "switch", "--n", 2, "--t-store", 20, "--out", tmp_path / "s")[0] == 0
    s = json.loads((tmp_path / "s/summary.json").read_text())
    assert s["pre_switch_photon_max"] < 1e-6
    assert s["post_switch_frequency_mhz"] == pytest.approx(2 * 2**0.5 * 13.5, rel=5e-3)
    assert "axvline" in (tmp_path / "s/plot.py").read_text()
    assert invoke(capsys, "absorb", "--n", 6, "--out", tmp_path / "a")[0] == 0
    a = json.loads((tmp_path / "a/summary.json").read_text())
    assert a["frequency_mhz"] == pytest.approx(54.0, rel=1e-2)


def test_singlet_with_disorder(tmp_path, capsys):
    code, out, _ = invoke(capsys, "singlet", "--photon", 1, "--disorder", 5, "--crosstalk", 0.2,
                          "--seed", 1, "--out", tmp_path)
    assert code == 0
    s = json.loads((tmp_path / "summary.json").read_text())
    assert s["exchange_fraction_of_two_quanta"] < 0.1
    m = json.loads((tmp_path / "manifest.json").read_text())
    assert m["seed"] == 1 and m["disorder_g_pct"] == 5


def test_scaling_with_disorder(tmp_path, capsys):
    code, out, _ = invoke(capsys, "scaling", "--disorder", 5, "--seed", 1, "--out", tmp_path)
    assert code == 0
    s = json.loads((tmp_path / "scaling.json").read_text())
    assert abs(s["exponent"] - 0.5) < 0.02
    rows = (tmp_path / "frequencies.csv").read_text().splitlines()
    assert rows[0] == "n,frequency_mhz,amplitude,residual_rms" and len(rows) == 11


def test_render_then_run_matches_named_command(tmp_path, capsys):
    sched = tmp_path / "sr.sched"
    assert invoke(capsys, "render", "superradiance", "--n", 3, "-o", sched)[0] == 0
    assert invoke(capsys, "run", sched, "--out", tmp_path / "r")[0] == 0
    assert invoke(capsys, "superradiance", "--n", 3, "--out", tmp_path / "n")[0] == 0
    assert (tmp_path / "r/trajectory.csv").read_bytes() == (tmp_path / "n/trajectory.csv").read_bytes()


def test_render_to_stdout(capsys):
    code, out, _ = invoke(capsys, "render", "singlet", "--photon", 1)
    assert code == 0 and out.startswith("rads-schedule v1\n") and "excite r 1" in out


@pytest.mark.parametrize("text,line", MALFORMED[:6])
def test_run_rejects_malformed_with_location(text, line, tmp_path, capsys):
    path = tmp_path / "bad.sched"
    path.write_text(text)
    code, _, err = invoke(capsys, "run", path, "--out", tmp_path / "o")
    assert code == 3 and f"line {line}, column" in err


def test_run_missing_file(tmp_path, capsys):
    assert invoke(capsys, "run", tmp_path / "nope.sched")[0] == 3


def test_run_sample_beyond_duration(tmp_path, capsys):
    path = tmp_path / "late.sched"
    path.write_text("qubits 1\nsegment 10ns resonant: 1\nsample at 5 50\n")
    code, _, err = invoke(capsys, "run", path)
    assert code == 3 and "line 3" in err and "50" in err


def test_verify(tmp_path, capsys):
    invoke(capsys, "superradiance", "--n", 2, "--out", tmp_path)
    csv = tmp_path / "trajectory.csv"
    assert invoke(capsys, "verify", csv)[0] == 0
    lines = csv.read_text().splitlines()
    cells = lines[5].split(",")
    cells[-1] = str(float(cells[-1]) + 1e-6)
    lines[5] = ",".join(cells)
    csv.write_text("\n".join(lines) + "\n")
    code, out, _ = invoke(capsys, "verify", csv)
    assert code == 1 and "line 6" in out
    assert invoke(capsys, "verify", tmp_path / "missing.csv")[0] == 2


def test_config_file_and_env_override(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "dev.ini"
    cfg.write_text("[device]\ng_mhz = 10\nn_qubits = 5\n")
    invoke(capsys, "superradiance", "--n", 1, "--config", cfg, "--out", tmp_path / "a")
    assert json.loads((tmp_path / "a/summary.json").read_text())["frequency_mhz"] == pytest.approx(20.0, rel=1e-6)
    monkeypatch.setenv("RADS_CONFIG", str(cfg))
    invoke(capsys, "superradiance", "--n", 1, "--out", tmp_path / "b")
    assert json.loads((tmp_path / "b/summary.json").read_text())["frequency_mhz"] == pytest.approx(20.0, rel=1e-6)
    assert invoke(capsys, "superradiance", "--n", 5, "--out", tmp_path / "c")[0] == 2


@pytest.mark.parametrize("text", ["[device]\ncolour = red\n", "[extra]\n", "[device]\ng_mhz = -1\n",
                                  "[engine]\nname = euler\n", "[device]\nn_max = lots\n",
                                  "not an ini file"])
def test_bad_config_exits_2(text, tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(text)
    code, _, err = invoke(capsys, "superradiance", "--n", 1, "--config", cfg, "--out", tmp_path)
    assert code == 2 and "config" in err


def test_negative_disorder_exits_2(tmp_path, capsys):
    assert invoke(capsys, "singlet", "--disorder", -1, "--out", tmp_path)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["superradiance"])
    assert exc.value.code == 2


def test_digest_stable_under_reordering():
    reordered = "[engine]\nname = reference\n\n[device]\nn_qubits = 11\nomega_r_ghz = 5.69\n"
    plain = "[device]\nomega_r_ghz = 5.69\nn_qubits = 11\n\n[engine]\nname = reference\n"
    assert loads(reordered).digest == loads(plain).digest
    assert loads(plain).digest != loads("[device]\nomega_r_ghz = 5.7\n").digest
    assert loads(PAPER_DEFAULT_TEXT).digest == load_default().digest


def test_config_values():
    cfg = loads("[device]\nn_qubits = 3\ng_mhz = 10, 11, 12\ncrosstalk_mhz = 0, 0.1, 0; 0.1, 0, 0; 0, 0, 0\n"
                "[disorder]\ng_pct = 5\nseed = 2\n")
    assert cfg.base.g_mhz == (10, 11, 12)
    assert cfg.base.chi_mhz[0, 1] == 0.1
    assert cfg.device == cfg.base.with_disorder(5, 0, seed=2)
    with pytest.raises(ConfigError):
        loads("[device]\nn_qubits = 3\ng_mhz = 1, 2\n")
