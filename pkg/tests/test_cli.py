import io
import json
import math

import numpy as np
import pytest

from quietzone.cli import FIGURES, default_N, run
from quietzone.fieldgrid import read_csv, read_pgm
from quietzone.geometry import symmetric_config


def _run(argv):
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def _diag_rows(text):
    lines = text.strip().splitlines()
    assert lines[0] == "n,abs_F,abs_A_plus_E,weighted"
    assert lines[-1].startswith("sigma_r,")
    return [[float(v) for v in line.split(",")] for line in lines[1:-1]]


def test_default_n_rule():
    assert default_N(symmetric_config(3, 1.0, 1.0)) == max(10, math.ceil(1.0 * 1.5) + 20)
    assert default_N(symmetric_config(4, 1.0, 0.01)) >= 10


def test_diagnose_far_field_example(capsys):
    code, text = _run(["diagnose", "--symmetric", "3,1", "--k", "1", "--psi-deg", "7", "--N", "10"])
    assert code == 0
    rows = _diag_rows(text)
    assert len(rows) == 21
    assert max(r[1] for r in rows) < 1e-12
    err = capsys.readouterr().err
    assert "# resolved: M=3 b=1" in err and "psi=7deg N=10 P=adaptive" in err


def test_diagnose_warns_on_near_field(capsys):
    code, _ = _run(["diagnose", "--symmetric", "4,1", "--k", "1", "--N", "10"])
    assert code == 0
    assert "warning" in capsys.readouterr().err


def test_diagnose_is_deterministic(tmp_path):
    argv = ["diagnose", "--symmetric", "4,1", "--k", "2", "--psi-deg", "17", "--N", "20",
            "--out", str(tmp_path)]
    a = _run(argv)[1]
    first = (tmp_path / "diagnose.csv").read_bytes()
    b = _run(argv)[1]
    assert a == b
    assert first == (tmp_path / "diagnose.csv").read_bytes()


def test_amplitudes_json(tmp_path):
    code, text = _run(["amplitudes", "--symmetric", "3,1", "--k", "1", "--N", "2"])
    assert code == 0
    data = json.loads(text)
    assert data["M"] == 3 and data["N"] == 2 and len(data["values"]) == 15
    code, text = _run(["amplitudes", "--symmetric", "3,1", "--k", "1", "--N", "2", "--out", str(tmp_path)])
    assert code == 0 and text == ""
    assert json.loads((tmp_path / "amplitudes.json").read_text()) == data


def test_config_file_and_coefficient_file(tmp_path):
    cfg = symmetric_config(3, 1.0, 1.0)
    (tmp_path / "cfg.json").write_text(cfg.to_json())
    (tmp_path / "inc.json").write_text(json.dumps([[0, 1.0, 0.0], [1, 0.0, 1.0], [-1, 0.0, 1.0]]))
    code, text = _run(["diagnose", "--config", str(tmp_path / "cfg.json"),
                       "--coeff-file", str(tmp_path / "inc.json"), "--N", "8"])
    assert code == 0
    assert max(r[1] for r in _diag_rows(text)) < 1e-8


def test_field_writes_artifacts(tmp_path):
    code, text = _run(["field", "--symmetric", "4,1", "--k", "2", "--psi-deg", "17", "--N", "60",
                       "--mode", "abs", "--clip", "2", "--nx", "21", "--out", str(tmp_path)])
    assert code == 0
    assert text.split() == [str(tmp_path / "field.csv"), str(tmp_path / "field.pgm")]
    rows = read_csv(tmp_path / "field.csv")
    assert len(rows) == 21 * 21
    centre = rows[10 * 21 + 10]
    assert centre[0] == pytest.approx(0.0, abs=1e-12) and abs(centre[2]) < 1e-6
    assert read_pgm(tmp_path / "field.pgm").shape == (21, 21)
    assert (tmp_path / "field.pgm").read_bytes().startswith(b"P5\n21 21\n65535\n")


def test_field_incident_only(tmp_path):
    code, _ = _run(["field", "--symmetric", "4,1", "--k", "2", "--what", "incident", "--nx", "5",
                    "--out", str(tmp_path)])
    assert code == 0
    vals = [r[2] for r in read_csv(tmp_path / "field.csv")]
    assert np.allclose(np.abs(vals), 1.0)


def test_scatter_cloaked_exterior_is_plane_wave(tmp_path):
    code, text = _run(["scatter", "--symmetric", "5,4", "--k", "5", "--psi-deg", "17", "--N", "60",
                       "--cyl-radius", "1", "--cyl-bc", "hard", "--cloak", "on", "--nx", "31",
                       "--out", str(tmp_path)])
    assert code == 0
    assert float(text.splitlines()[0].split(",")[1]) < 1e-20
    rows = read_csv(tmp_path / "scatter.csv")
    psi = math.radians(17)
    far = [(x, y, z) for x, y, z, flag in rows if flag == "" and math.hypot(x, y) > 8.0]
    assert far
    for x, y, z in far:
        ref = np.exp(5j * (x * math.cos(psi) + y * math.sin(psi)))
        assert abs(z - ref) < 1e-6
    assert any(flag == "X" for *_, flag in rows)


def test_scatter_uncloaked_scatters(tmp_path):
    code, text = _run(["scatter", "--symmetric", "5,4", "--k", "5", "--cyl-bc", "soft", "--cloak", "off",
                       "--nx", "11", "--out", str(tmp_path)])
    assert code == 0
    assert float(text.splitlines()[0].split(",")[1]) > 0.1


def test_reproduce_list_and_unknown(capsys):
    code, text = _run(["reproduce", "list"])
    assert code == 0
    assert all(fig in text for fig in FIGURES)
    code, _ = _run(["reproduce", "fig99"])
    assert code == 2
    assert "figx5" in capsys.readouterr().err


def test_reproduce_sweep(tmp_path):
    code, text = _run(["reproduce", "fig6", "--out", str(tmp_path)])
    assert code == 0
    lines = (tmp_path / "fig6.csv").read_text().splitlines()
    assert lines[0] == "M,k,N,n,abs_F"
    assert len(lines) == 1 + 2 * 3 * 21


def test_reproduce_render(tmp_path):
    code, text = _run(["reproduce", "figx4", "--out", str(tmp_path), "--nx", "15"])
    assert code == 0
    assert read_pgm(tmp_path / "figx4.pgm").shape == (15, 15)


def test_reproduce_scatter_pair(tmp_path):
    code, _ = _run(["reproduce", "fig12", "--out", str(tmp_path), "--nx", "9"])
    assert code == 0
    assert (tmp_path / "fig12_off.pgm").exists() and (tmp_path / "fig12_on.csv").exists()


@pytest.mark.parametrize("argv", [
    ["diagnose", "--symmetric", "3,1"],                       # no k
    ["diagnose", "--symmetric", "2,1", "--k", "1"],           # M < 3
    ["diagnose", "--symmetric", "3", "--k", "1"],
    ["diagnose", "--symmetric", "3,1", "--k", "-1"],
    ["diagnose", "--symmetric", "3,1", "--k", "1", "--N", "-1"],
    ["diagnose", "--config", "/nonexistent.json"],
    ["diagnose", "--symmetric", "3,1", "--k", "1", "--bogus"],
    ["frobnicate"],
    ["field", "--symmetric", "3,1", "--k", "1", "--nx", "0"],
])
def test_validation_errors_exit_2(argv, tmp_path):
    if argv[0] == "field":
        argv = argv + ["--out", str(tmp_path)]
    assert _run(argv)[0] == 2


def test_truncation_error_exit_3():
    code, _ = _run(["amplitudes", "--symmetric", "4,1", "--k", "1", "--N", "10", "--P", "4"])
    assert code == 3


def test_plane_wave_alias():
    a = _run(["amplitudes", "--symmetric", "3,1", "--k", "1", "--N", "2", "--psi-deg", "30"])[1]
    b = _run(["amplitudes", "--symmetric", "3,1", "--k", "1", "--N", "2", "--plane-wave-deg", "30"])[1]
    assert a == b
