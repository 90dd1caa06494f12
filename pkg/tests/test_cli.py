import json
import math

import pytest

from coarray_codebook import cli
from coarray_codebook.bounds import BoundsError
from coarray_codebook.figure3 import COLUMNS, figure3_sweep, to_csv


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_figure3_fixed_q_small():
    rows = {r["N_sigma"]: r for r in figure3_sweep(4, 4, "fixed-Q", 3)}
    assert sorted(rows) == list(range(7, 13))
    assert rows[7]["upper"] == 2 and rows[7]["exact"] == 2
    assert rows[8]["lower"] == 2 and rows[8]["lower_applicable"]
    assert rows[12]["lower"] == 1
    assert rows[9]["lower"] is None and not rows[9]["lower_applicable"]


def test_figure3_fixed_q_20x20():
    rows = figure3_sweep(20, 20, "fixed-Q", 12)
    assert [r["N_sigma"] for r in rows] == list(range(39, 241))
    assert all(r["upper"] == 43758 for r in rows)
    assert rows[-1]["lower"] == 1
    # plotted curve uses L = max(2, floor(N_sigma / N_rx))
    assert rows[0]["lower_plotted"] == math.comb(18, 10)
    by_sigma = {r["N_sigma"]: r for r in rows}
    assert by_sigma[61]["lower_plotted"] == math.comb(17, 9)
    assert by_sigma[60]["lower"] == math.comb(17, 9)


def test_figure3_fixed_nsigma_shape():
    rows = figure3_sweep(20, 20, "fixed-NSigma", 200)
    assert [r["Q"] for r in rows] == list(range(10, 21))
    upper = [r["upper"] for r in rows]
    lower = [r["lower"] for r in rows]
    for curve in (upper, lower):
        for a, b, c in zip(curve, curve[1:], curve[2:]):
            assert b * b >= a * c  # log-concave
    peak = max(upper)
    assert peak == math.comb(18, 9) == 48620
    assert [r["Q"] for r in rows if r["upper"] == peak] == [11]
    assert rows[0]["upper"] == rows[2]["upper"] == math.comb(18, 8)


def test_figure3_errors():
    with pytest.raises(BoundsError):
        figure3_sweep(4, 4, "fixed-Q", 1)
    with pytest.raises(BoundsError):
        figure3_sweep(4, 4, "fixed-NSigma", 17)
    with pytest.raises(ValueError):
        figure3_sweep(4, 4, "diagonal", 3)


def test_figure3_csv_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["figure3", "--ntx", "20", "--nrx", "20", "--mode", "fixed-Q", "--q", "12",
                         "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert lines[1] == "39,12,43758,,43758,false,43758"
    assert lines[-1] == "240,12,43758,1,,true,1"


GOLDEN_FIG3_SMALL = """N_sigma,Q,upper,lower,exact,lower_applicable,lower_plotted
7,3,2,,2,false,2
8,3,2,2,,true,2
9,3,2,,,false,2
10,3,2,,,false,2
11,3,2,,,false,2
12,3,2,1,,true,1
"""


def test_figure3_golden(capsys):
    code, out, _ = run(capsys, "figure3", "--ntx", "4", "--nrx", "4", "--mode", "fixed-Q", "--q", "3")
    assert code == 0
    assert out == GOLDEN_FIG3_SMALL == to_csv(figure3_sweep(4, 4, "fixed-Q", 3))


def test_figure3_json(capsys):
    code, out, _ = run(capsys, "figure3", "--ntx", "20", "--nrx", "20", "--mode", "fixed-NSigma",
                       "--nsigma", "200", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and rows[1]["upper"] == "48620" and rows[1]["Q"] == 11


def test_sumset(capsys):
    code, out, _ = run(capsys, "sumset", "--tx", "0,4,8", "--rx", "0,1,2,3")
    doc = json.loads(out)
    assert code == 0 and doc["size"] == 12 and doc["contiguous"]


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--tx", "0,1,2,3", "--rx", "0,1,2,3", "--q", "3")
    doc = json.loads(out)
    assert doc["codewords"] == [[0, 1, 3], [0, 2, 3]] and doc["kind"] == "constrained"
    assert doc["bits"] == 1
    code, out, _ = run(capsys, "enumerate", "--tx", "0,4,8", "--q", "2")
    assert json.loads(out)["kind"] == "unconstrained"


def test_bounds_command(capsys):
    code, out, _ = run(capsys, "bounds", "--q", "12", "--ntx", "20", "--nrx", "20", "--nsigma", "39")
    doc = json.loads(out)
    assert doc["upper"] == "43758" and doc["exact"] == "43758"


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "--kind", "nested", "--ntx", "5", "--nrx", "4", "--nsigma", "12")
    doc = json.loads(out)
    assert doc["tx"] == [0, 1, 2, 4, 8] and doc["core"] == [0, 4, 8]
    assert doc["sum_set"] == list(range(12))
    code, out, err = run(capsys, "construct", "--kind", "nested", "--ntx", "4", "--nrx", "4", "--nsigma", "7")
    assert code == 1 and "integer L" in json.loads(err)["error"]


def test_search_command(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--q", "3", "--ntx", "4", "--nrx", "4", "--nsigma", "7")
    doc = json.loads(out)
    assert code == 0 and doc["search"]["optimum"] == "2"
    assert doc["search"]["bound_check"] == "within-bounds"
    code, out2, _ = run(capsys, "search", "--q", "3", "--ntx", "4", "--nrx", "4", "--nsigma", "7",
                        "--threads", "2", "--no-reflect-dedup")
    assert json.loads(out2)["search"]["optimum"] == "2"
    tuples = tmp_path / "t.json"
    tuples.write_text(json.dumps([{"Q": 3, "N_tx": 4, "N_rx": 4, "N_sigma": 7},
                                  {"Q": 2, "N_tx": 4, "N_rx": 4, "N_sigma": 12}]))
    code, out, _ = run(capsys, "search", "--tuples", str(tuples))
    entries = json.loads(out)
    assert code == 1 and "error" in entries[1] and entries[0]["search"]["optimum"] == "2"


def test_search_errors(capsys):
    code, _, err = run(capsys, "search", "--q", "2", "--ntx", "4", "--nrx", "4", "--nsigma", "12")
    assert code == 1 and "inadmissible" in json.loads(err)["error"]
    code, _, err = run(capsys, "search", "--q", "3", "--ntx", "4", "--nrx", "4")
    assert code == 1 and "--nsigma" in json.loads(err)["error"]


def test_simulate(capsys, tmp_path):
    desc = tmp_path / "run.json"
    desc.write_text(json.dumps({"tx": [0, 1, 2, 3, 4, 5], "rx": [0, 1, 2, 3, 4, 5], "Q": 4,
                                "snr_db": [0, 30], "trials": 200, "seed": 1}))
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["simulate", "--descriptor", str(desc), "--out", str(out_a)]) == 0
    assert cli.main(["simulate", "--descriptor", str(desc), "--out", str(out_b)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    lines = out_a.read_text().splitlines()
    assert lines[0] == "snr_db,ser,trials" and len(lines) == 3
    assert lines[2] == "30,0.0,200"
