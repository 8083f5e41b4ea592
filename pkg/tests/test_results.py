import math

import pytest

from dilemma.results import HEADER, emit_csv, read_csv
from dilemma.simulation import SweepPoint, SweepResult


def make_result(agents=("sarsa",), grid=(0.5,)):
    res = SweepResult("demo", 100, 0.2, 3)
    for i, a in enumerate(agents):
        for j, p in enumerate(grid):
            res.points.append(SweepPoint(a, p, -2000.123456789 - i - j / 3, 1.0 / 7, 0.5 + j / 100,
                                         0.01 / 3, 50))
    return res


def lines(path):
    return path.read_text(encoding="utf-8").split("\n")[:-1]


def test_single_point_two_rows(tmp_path):
    path = tmp_path / "r.csv"
    emit_csv(make_result(), path)
    rows = lines(path)
    assert rows[0] == ",".join(HEADER)
    assert len(rows) == 3
    assert path.read_bytes().count(b"\r") == 0


def test_row_count_and_order(tmp_path):
    grid = tuple(round(k * 0.05, 12) for k in range(21))
    path = tmp_path / "r.csv"
    emit_csv(make_result(("sarsa", "avgq", "eu"), grid), path)
    rows = [r.split(",") for r in lines(path)[1:]]
    assert len(rows) == 126
    keys = [(r[1], float(r[2]), r[3]) for r in rows]
    assert keys == sorted(keys)


def test_empty_result_header_only(tmp_path):
    path = tmp_path / "r.csv"
    emit_csv(SweepResult("none", 10, 0.2, 0), path)
    assert lines(path) == [",".join(HEADER)]
    assert read_csv(path).points == []


def test_nine_significant_digits(tmp_path):
    path = tmp_path / "r.csv"
    emit_csv(make_result(), path)
    first = lines(path)[1].split(",")
    assert first[4] == "-2000.12346"
    assert first[5] == "0.142857143"


def test_round_trip(tmp_path):
    res = make_result(("sarsa", "avgq"), (0.0, 0.35, 1.0))
    path = tmp_path / "r.csv"
    emit_csv(res, path)
    back = read_csv(path)
    assert (back.experiment, back.steps, back.window, back.seed) == ("demo", 100, 0.2, 3)
    ours = {(p.agent, p.probability): p for p in res.points}
    assert len(back.points) == len(ours)
    for p in back.points:
        q = ours[(p.agent, p.probability)]
        assert p.runs == q.runs
        for got, want in [(p.mean_payout, q.mean_payout), (p.payout_se, q.payout_se),
                          (p.repair_freq, q.repair_freq), (p.repair_se, q.repair_se)]:
            # exactly the 9-significant-digit rounding of the original
            assert got == float(f"{want:.9g}")
            assert math.isclose(got, want, rel_tol=5e-9)


def test_bad_header_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("a,b\n")
    with pytest.raises(ValueError):
        read_csv(path)
