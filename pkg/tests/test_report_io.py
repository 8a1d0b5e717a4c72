import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sector_rkhs.io_csv import InputError, atomic_write, csv_text, read_signal_csv, read_table, write_csv
from sector_rkhs.parallel import for_chunks, worker_count
from sector_rkhs.report import DiagnosticsReport

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.lists(st.tuples(finite, finite, finite), min_size=1, max_size=20))
@settings(max_examples=50, deadline=None)
def test_csv_float_round_trip(tmp_path_factory, rows):
    p = tmp_path_factory.mktemp("csv") / "t.csv"
    write_csv(p, ["a", "b", "c"], rows)
    header, arr = read_table(p)
    assert header == ["a", "b", "c"]
    np.testing.assert_array_equal(arr, np.array(rows, dtype=float))


def test_csv_is_lf_utf8(tmp_path):
    p = write_csv(tmp_path / "x.csv", ["tau", "g_re"], [[0.0, 1.0], [0.5, 2.0]])
    raw = p.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    assert csv_text(["a"], [[0.1]]) == "a\n0.1\n"


def test_signal_csv(tmp_path):
    p = tmp_path / "g.csv"
    p.write_text("tau,g_re,g_im\n0,1,0\n0.5,1,0.5\n1,1,1\n")
    tau, g = read_signal_csv(p)
    assert g.dtype.kind == "c" and g[2] == 1 + 1j
    p.write_text("t,g\n0,1\n1,1\n")
    with pytest.raises(InputError):
        read_signal_csv(p)
    p.write_text("tau,g_re\n0,1\n0,1\n")
    with pytest.raises(InputError):
        read_signal_csv(p)
    p.write_text("tau,g_re\n0,abc\n1,1\n")
    with pytest.raises(InputError):
        read_signal_csv(p)
    with pytest.raises(InputError):
        read_signal_csv(tmp_path / "missing.csv")


def test_atomic_write_leaves_no_temp(tmp_path):
    atomic_write(tmp_path / "a.json", "{}\n")
    assert [f.name for f in tmp_path.iterdir()] == ["a.json"]


def _sample_report():
    rep = DiagnosticsReport("demo", {"alpha": 1.5, "points": [1 + 2j, 0.5], "arr": np.float64(0.25)})
    rep.check("rel", 1.0000001, target=1.0, tolerance=1e-6, mode="rel")
    rep.check("bound", 3e-4, tolerance=1e-3)
    rep.check("order", 1.97, tolerance=1.9, mode="min")
    rep.check("flag", False, mode="true")
    tab = rep.table("conv", ["N", "error"])
    tab.add(4, 0.1)
    tab.add(np.int64(8), np.float64(0.025))
    rep.note("a note")
    return rep.finish()


def test_report_round_trip():
    rep = _sample_report()
    back = DiagnosticsReport.from_json(rep.to_json())
    assert back.to_dict() == rep.to_dict()
    assert back.to_json() == rep.to_json()


def test_report_verdicts_rederived():
    rep = _sample_report()
    d = rep.to_dict()
    assert [c["passed"] for c in d["checks"]] == [True, True, True, False]
    assert not rep.passed and [r.name for r in rep.failures()] == ["flag"]
    d["checks"][3]["value"] = True
    assert DiagnosticsReport.from_dict(d).passed


def test_report_nan_fails():
    rep = DiagnosticsReport("x")
    rep.check("nan", math.nan, tolerance=1.0)
    assert not rep.passed


def test_chunks_cover_range(monkeypatch):
    for threads in ("1", "3"):
        monkeypatch.setenv("SECTOR_RKHS_THREADS", threads)
        assert worker_count() == int(threads)
        out = np.zeros(103)

        def body(sl):
            out[sl] = np.arange(sl.start, sl.stop)

        for_chunks(body, 103, 10)
        np.testing.assert_array_equal(out, np.arange(103))
    monkeypatch.setenv("SECTOR_RKHS_THREADS", "x")
    with pytest.raises(ValueError):
        worker_count()
