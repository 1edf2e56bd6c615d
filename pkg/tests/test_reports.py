import json
import math

import pytest

from gmseq.membership import BetaSpec, defect_profile, dyadic_grid
from gmseq.reports import (
    CONVERGENCE_HEADER,
    DEFECT_HEADER,
    convergence_dict,
    convergence_rows,
    defect_dict,
    defect_rows,
    format_real,
    write_csv,
    write_json,
)
from gmseq.sequences import constant, power_log
from gmseq.series import ConvergenceReport


@pytest.mark.parametrize(
    "x",
    [0.0, 1 / 3, 0.1, 17 / 48, math.pi, 1e-300, 5e-324, -2.5e17, 123456.789],
)
def test_format_real_round_trips(x):
    assert float(format_real(x)) == x


def test_format_real_seventeen_digits():
    assert format_real(0.25) == "2.5000000000000000e-01"
    assert format_real(float("inf")) == "inf"
    assert math.isnan(float(format_real(float("nan"))))


def _sample_defect():
    return defect_profile(power_log(1, 0), 1, BetaSpec.star(1, 2.0), dyadic_grid(16))


def test_write_csv_structure(tmp_path):
    rep = _sample_defect()
    path = tmp_path / "defect.csv"
    write_csv(path, DEFECT_HEADER, defect_rows(rep))
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "m,lhs,beta,ratio"
    assert len(lines) == 1 + len(rep.samples)
    first = lines[1].split(",")
    assert first[0] == "1"
    assert float(first[3]) == rep.samples[0].ratio


def test_write_csv_byte_identical(tmp_path):
    rep = _sample_defect()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(a, DEFECT_HEADER, defect_rows(rep))
    write_csv(b, DEFECT_HEADER, defect_rows(rep))
    assert a.read_bytes() == b.read_bytes()


def test_defect_json_nonfinite_becomes_null(tmp_path):
    rep = defect_profile(constant(0.0), 1, BetaSpec.star(1, 2.0), [1, 2, 4])
    payload = defect_dict(rep)
    payload["ratio"][-1] = math.inf  # exercise the policy
    path = tmp_path / "d.json"
    write_json(path, payload)
    loaded = json.loads(path.read_text())
    assert loaded["ratio"][-1] is None


def test_convergence_serialization(tmp_path):
    rep = ConvergenceReport(
        n_grid=[16, 32],
        eps1=[0.5, 0.25],
        eps2=[],
        sup_remainder=[0.2, 0.1],
        side_condition_partials=[0.0, 0.0],
        nbn_sup=[0.5, 0.25],
        verdict="inconclusive",
    )
    rows = convergence_rows(rep)
    assert len(rows) == 2
    assert math.isnan(rows[0][2])  # eps2 column filled with nan when unused
    path = tmp_path / "c.json"
    write_json(path, convergence_dict(rep))
    loaded = json.loads(path.read_text())
    assert sorted(loaded.keys()) == sorted(
        [
            "n_grid",
            "eps1",
            "eps2",
            "sup_remainder",
            "side_condition_partials",
            "nbn_sup",
            "verdict",
        ]
    )
    assert loaded["eps2"] == []
    csv_path = tmp_path / "c.csv"
    write_csv(csv_path, CONVERGENCE_HEADER, rows)
    header = csv_path.read_text().splitlines()[0]
    assert header == "n,eps1,eps2,sup_remainder,side_condition_partial,nbn_sup"


def test_write_json_byte_identical(tmp_path):
    rep = _sample_defect()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_json(a, defect_dict(rep))
    write_json(b, defect_dict(rep))
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().endswith(b"\n")
