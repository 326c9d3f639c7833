import json

import numpy as np

from fracdelay import SystemParams, ba_region, boundary_curve, region_scan, simulate_linear, solve_branches
from fracdelay import io as fio


def test_float_format_round_trips():
    for x in (0.1, 1 / 3, -2.5e-300, 1e300, np.pi):
        s = fio.fmt_float(x)
        assert float(s) == x
        assert len(s.split("e")[0].replace("-", "").replace(".", "")) == 17
    assert fio.fmt_float(float("nan")) == "nan"


def test_curve_csv(tmp_path):
    c = boundary_curve(0.5, 2.0, 1, 64)
    p = tmp_path / "c.csv"
    p.write_text(fio.curve_text(c))
    header, rows = fio.read_csv(p)
    assert header == ["t", "re", "im"] and len(rows) == 65
    back = np.array([complex(float(r[1]), float(r[2])) for r in rows])
    np.testing.assert_array_equal(back, c.points)


def test_trajectory_json_complex_objects():
    traj = simulate_linear(SystemParams(0.5, a=0.4 + 0.4j, b=18.3), 50)
    d = json.loads(fio.trajectory_text(traj, "json"))
    assert d["params"]["a"] == {"re": 0.4, "im": 0.4}
    assert d["verdict"] == traj.verdict.value
    back = np.array([fio.complex_from_json(s) for s in d["samples"]])
    np.testing.assert_array_equal(back, traj.samples)


def test_nan_becomes_null():
    d = json.loads(fio.json_text({"x": float("nan"), "y": np.array([1.0, np.inf])}))
    assert d == {"x": None, "y": [1.0, None]}


def test_ba_segments():
    text = fio.ba_text(ba_region(0.5, 1, N=100))
    segs = {line.split(",")[0] for line in text.splitlines()[1:]}
    assert segs == {"parametric", "upper", "lower"}


def test_scan_json_round_trip():
    scan = region_scan(0.5, 2.0, 1, (-2, 1.5), (-1, 1), (5, 4), validate=True, N=2000)
    back = fio.scan_from_json(fio.scan_text(scan, "json"))
    np.testing.assert_array_equal(back.verdicts, scan.verdicts)
    np.testing.assert_array_equal(back.simulated, scan.simulated)
    assert back.agreement == scan.agreement


def test_branches_csv_columns():
    text = fio.branches_text(solve_branches(2, [0.3, 0.5]))
    lines = text.splitlines()
    assert lines[0] == "alpha,branch_index,b"
    assert len(lines) == 1 + 5 * 2
