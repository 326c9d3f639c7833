"""CSV and JSON export of every result type.

CSV floats use 17 significant digits so files round-trip bit for bit.
Complex values become ``re``/``im`` column pairs in CSV and ``{"re", "im"}``
objects in JSON.  Non-finite floats are written as ``nan``/``inf`` in CSV and
``null`` in JSON.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Sequence

import numpy as np

from .bifurcation import BifurcationBranch
from .classify import ScanResult
from .curves import BaRegion, BoundaryCurve
from .simulate import BifurcationSweep, Trajectory

FORMATS = ("csv", "json")


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def _cell(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return ""
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _jsonable(v.real), "im": _jsonable(v.imag)}
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    if hasattr(v, "value") and isinstance(getattr(v, "value"), str):
        return v.value
    return v


def json_text(obj: Any) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def _params_dict(p) -> dict:
    return {"alpha": p.alpha, "a": complex(p.a), "b": p.b, "tau": p.tau,
            "x0": complex(p.x0), "prehistory": p.prehistory.value}


# ---------------------------------------------------------------- writers

def trajectory_text(traj: Trajectory, fmt: str = "csv") -> str:
    s = np.asarray(traj.samples, dtype=complex)
    if fmt == "csv":
        return csv_text(["t", "re", "im"], ((t, v.real, v.imag) for t, v in enumerate(s)))
    mp = traj.map
    return json_text({
        "params": _params_dict(traj.params),
        "map": None if mp is None else {"kind": mp.kind, "param": mp.param, "slope": mp.slope},
        "verdict": traj.verdict,
        "t_escape": traj.t_escape,
        "tail_max": traj.tail_max,
        "decay_exponent": traj.decay_exponent,
        "samples": s,
    })


def curve_text(curve: BoundaryCurve, fmt: str = "csv") -> str:
    if fmt == "csv":
        return csv_text(["t", "re", "im"], zip(curve.ts, curve.points.real, curve.points.imag))
    return json_text({"alpha": curve.alpha, "b": curve.b, "tau": curve.tau,
                      "t": curve.ts, "points": curve.points})


def ba_rows(region: BaRegion):
    for t, b, a in region.parametric:
        yield ("parametric", t, b, a)
    for b, a in zip(region.line_b, region.line_upper):
        yield ("upper", float("nan"), b, a)
    for b, a in zip(region.line_b, region.line_lower):
        yield ("lower", float("nan"), b, a)


def ba_text(region: BaRegion, fmt: str = "csv", band: tuple | None = None) -> str:
    if fmt == "csv":
        return csv_text(["segment", "t", "b", "a"], ba_rows(region))
    out = {
        "alpha": region.alpha, "tau": region.tau,
        "parametric": {"t": region.parametric[:, 0], "b": region.parametric[:, 1], "a": region.parametric[:, 2]},
        "line_b": region.line_b, "upper": region.line_upper, "lower": region.line_lower,
    }
    if band is not None:
        out["asymptotic_band"] = {"b": band[0], "lower": band[1], "upper": band[2]}
    return json_text(out)


def scan_text(scan: ScanResult, fmt: str = "csv") -> str:
    header = ["re", "im", "verdict", "winding", "min_dist"]
    if scan.simulated is not None:
        header.append("simulated")
    if fmt == "csv":
        rows = []
        for i, y in enumerate(scan.im):
            for j, x in enumerate(scan.re):
                row = [x, y, scan.verdicts[i, j], int(scan.winding[i, j]), scan.min_dist[i, j]]
                if scan.simulated is not None:
                    row.append(scan.simulated[i, j])
                rows.append(row)
        return csv_text(header, rows)
    return json_text({
        "alpha": scan.alpha, "b": scan.b, "tau": scan.tau,
        "re": scan.re, "im": scan.im,
        "verdicts": scan.verdicts, "winding": scan.winding, "min_dist": scan.min_dist,
        "simulated": scan.simulated, "steps": scan.steps, "agreement": scan.agreement,
    })


def branches_text(branches: Sequence[BifurcationBranch], fmt: str = "csv") -> str:
    if fmt == "csv":
        rows = [(a, br.index, b) for br in branches for a, b in zip(br.alphas, br.bs)]
        return csv_text(["alpha", "branch_index", "b"], rows)
    return json_text({
        "tau": branches[0].tau if branches else None,
        "branches": [{"index": br.index, "constant": br.constant, "alphas": br.alphas, "bs": br.bs}
                     for br in branches],
    })


def bifdiag_text(sweep: BifurcationSweep, fmt: str = "csv") -> str:
    if fmt == "csv":
        rows = [(v, x) for v, tail in zip(sweep.values, sweep.tails) for x in tail]
        return csv_text(["param", "x"], rows)
    return json_text({
        "kind": sweep.kind, "alpha": sweep.alpha, "b": sweep.b, "tau": sweep.tau,
        "values": sweep.values, "tails": [np.asarray(t) for t in sweep.tails],
        "fixed_point": sweep.fixed_point_mask(),
    })


def residual_text(ts, residuals, fmt: str = "csv") -> str:
    if fmt == "csv":
        return csv_text(["t", "residual"], zip(ts, residuals))
    return json_text({"t": np.asarray(ts), "residual": np.asarray(residuals)})


# ---------------------------------------------------------------- readers

def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def complex_from_json(obj) -> complex:
    return complex(obj["re"], obj["im"])


def scan_from_json(text: str) -> ScanResult:
    """Rebuild a ``ScanResult`` from ``scan_text(..., "json")`` output."""
    d = json.loads(text)
    sim = d.get("simulated")
    return ScanResult(
        alpha=d["alpha"], b=d["b"], tau=d["tau"],
        re=np.array(d["re"], dtype=float), im=np.array(d["im"], dtype=float),
        verdicts=np.array(d["verdicts"], dtype=str),
        winding=np.array(d["winding"], dtype=int),
        min_dist=np.array(d["min_dist"], dtype=float),
        simulated=None if sim is None else np.array(sim, dtype=str),
        steps=d.get("steps"),
        agreement=d.get("agreement") or {},
    )
