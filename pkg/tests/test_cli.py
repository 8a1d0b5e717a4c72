import json
import math
import subprocess
import sys

import numpy as np
import pytest

from sector_rkhs.cli import main


@pytest.fixture
def g1(tmp_path):
    tau = np.linspace(0.0, 1.0, 101)
    p = tmp_path / "g1.csv"
    p.write_text("tau,g_re\n" + "".join(f"{float(v)!r},1.0\n" for v in tau))
    return p


def _read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [list(map(float, r.split(","))) for r in lines[1:]]


def test_forward_heat_anchor(g1, tmp_path):
    out = tmp_path / "o"
    assert main(["forward", "--from-g", str(g1), "--alpha", "1", "--t", "1", "--points", "1", "--quantity", "T", "--out", str(out)]) == 0
    header, rows = _read_csv(out / "forward.csv")
    assert header == ["x_or_z_re", "z_im", "u_re", "u_im"]
    assert rows[0][2] == pytest.approx(math.erfc(0.5), rel=1e-8)
    side = json.loads((out / "forward.json").read_text())
    assert side["passed"] and "quadrature" in side["tables"]


def test_forward_default_quantity(g1, tmp_path):
    # u = t^alpha L_t g; with t = 1 this is the transform of tau^alpha g
    assert main(["forward", "--from-g", str(g1), "--alpha", "1", "--points", "lin:0.5:2:4", "--out", str(tmp_path)]) == 0
    _, rows = _read_csv(tmp_path / "forward.csv")
    assert len(rows) == 4 and all(r[2] > 0 for r in rows)


def test_forward_complex_points(g1, tmp_path):
    assert main(["forward", "--from-g", str(g1), "--alpha", "1.5", "--points", "1+0.3j,0.8-0.1j", "--out", str(tmp_path)]) == 0


def test_exit_codes(g1, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    bad = tmp_path / "bad.csv"
    bad.write_text("tau,g_re\n0.5,1\n0.2,1\n")
    o = ["--out", str(tmp_path)]
    assert main(["forward", "--from-g", str(empty), "--points", "1"] + o) == 2
    assert main(["forward", "--from-g", str(bad), "--points", "1"] + o) == 2
    assert main(["forward", "--from-g", str(g1), "--alpha", "3", "--points", "1+0.5j"] + o) == 3
    assert main(["inverse", "--builtin-F", "bogus"] + o) == 2
    assert main(["inverse", "--alpha", "2", "--tau", "0.5,1.0"] + o) == 3
    assert main(["verify", "--suite", "nope"] + o) == 2
    assert main(["no-such-command"]) == 2
    assert main(["kernel-eval", "--alpha", "-1", "--z", "1"] + o) == 3
    assert main(["isometry-check", "--alpha", "1", "--mesh", "1,2"] + o) == 2


def test_tolerance_failure_exit(tmp_path):
    # a deliberately coarse mesh cannot meet a 1e-9 isometry tolerance
    assert main(["isometry-check", "--alpha", "1", "--mesh", "1e-2,10,1e-2,4", "--tol", "1e-9", "--out", str(tmp_path)]) == 4


def test_kernel_eval_spot(tmp_path):
    assert main(["kernel-eval", "--kind", "rkhs", "--alpha", "2", "--z", "1", "--w", "1", "--out", str(tmp_path)]) == 0
    header, rows = _read_csv(tmp_path / "kernel-eval.csv")
    assert header == ["z_re", "z_im", "value_re", "value_im"]
    assert rows[0][2] == pytest.approx(math.exp(-2) / 4, rel=1e-13)


def test_specfun_eval(tmp_path, capsys):
    assert main(["specfun-eval", "--func", "erfc_alpha", "--args", "1,0.5", "--out", str(tmp_path)]) == 0
    assert float(capsys.readouterr().out.splitlines()[0]) == pytest.approx(math.erfc(0.5), rel=1e-13)
    assert main(["specfun-eval", "--func", "gamma", "--args", "1,2", "--out", str(tmp_path)]) == 2


def test_laplace_and_pde(tmp_path):
    assert main(["laplace-check", "--alpha", "1.5", "--out", str(tmp_path)]) == 0
    assert main(["pde-compare", "--alpha", "2", "--g", "tau", "--M", "200", "--tol", "1e-2", "--out", str(tmp_path)]) == 0
    header, _ = _read_csv(tmp_path / "pde-compare.csv")
    assert header == ["x", "t", "u", "u_analytic"]


def test_inverse_kernel_section(tmp_path):
    args = ["inverse", "--alpha", "1", "--builtin-F", "kernel-section", "--w", "0.8+0.2j", "--N", "8,16",
            "--tau", "0.2,0.5,0.8", "--out", str(tmp_path)]
    assert main(args) == 0
    rep = json.loads((tmp_path / "inverse.json").read_text())
    errs = [r[1] for r in rep["tables"]["roundtrip"]["rows"]]
    assert errs[1] < errs[0]


def test_inverse_roundtrip_from_csv(tmp_path):
    # a short table keeps the per-piece transform cheap
    g = tmp_path / "g.csv"
    g.write_text("tau,g_re\n" + "".join(f"{float(v)!r},1.0\n" for v in np.linspace(0.0, 1.0, 11)))
    args = ["inverse", "--alpha", "2", "--from-g", str(g), "--N", "4,8", "--out", str(tmp_path)]
    assert main(args) == 0
    header, rows = _read_csv(tmp_path / "inverse.csv")
    assert header[:3] == ["tau", "g_re", "g_im"] and "N8_re" in header


def test_verify_specfun(tmp_path):
    assert main(["verify", "--suite", "specfun", "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "verify-specfun.json").read_text())["passed"]


def _strip_time(text):
    d = json.loads(text)
    d.pop("wall_time", None)
    return json.dumps(d, sort_keys=True)


def test_determinism(tmp_path):
    runs = []
    for k in range(2):
        out = tmp_path / str(k)
        assert main(["reproduce-check", "--alpha", "1", "--seed", "7", "--mesh", "1e-4,50,1e-5,6", "--tol", "1e-2", "--out", str(out)]) == 0
        runs.append(_strip_time((out / "reproduce-check.json").read_text()))
    assert runs[0] == runs[1]
    assert json.loads(runs[0])["parameters"]["seed"] == 7


def test_console_script(tmp_path):
    r = subprocess.run([sys.executable, "-m", "sector_rkhs.cli", "verify", "--suite", "nope", "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 2 and "unknown suite" in r.stderr
