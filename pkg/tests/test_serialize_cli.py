import json

import pytest

from toricdiag import serialize as ser
from toricdiag.applications import SplittingType
from toricdiag.cli import UsageError, main, parse_sheaf, parse_window
from toricdiag.cohom import SheafSpec, cohomology_table
from toricdiag.diagonal import build_R
from toricdiag.monad import build_monad
from toricdiag.toric import build_variety, hirzebruch
from toricdiag.warmup import build_pn_warmup


def test_complex_roundtrip():
    X = build_variety(1, [0, 2])
    for c in (build_R(X).complex, build_monad(X, SheafSpec.of((1, 1))).complex, build_pn_warmup(2)):
        back = ser.complex_from_dict(json.loads(ser.dumps(ser.complex_to_dict(c))))
        assert back == c


def test_table_and_splitting_roundtrip():
    t = cohomology_table(hirzebruch(2), SheafSpec.of((0, 0), (-1, -2)), ((-3, 3), (-3, 3)))
    assert ser.table_from_dict(json.loads(ser.dumps(ser.table_to_dict(t)))).entries == t.entries
    st = SplittingType((((1, 0), 2), ((-2, 1), 1)))
    assert ser.splitting_from_dict(ser.splitting_to_dict(st)) == st


def test_m2_export_shape():
    text = ser.complex_to_m2(build_R(hirzebruch(1)).complex)
    assert text.startswith(("S = QQ[", "S = ZZ/"))
    assert "chainComplex" in text and text.count("= map(") == 2


def test_text_table_grid():
    t = cohomology_table(build_variety(1, [0]), SheafSpec.of((0, 0)), ((-1, 1), (-1, 1)))
    lines = ser.table_to_text(t).splitlines()
    assert lines[0].startswith("h^0")
    assert lines[1].split("|")[1].split() == ["0", "2", "4"]


def test_parse_helpers():
    assert parse_window("-3:3") == ((-3, 3), (-3, 3))
    assert parse_window("-1:2,0:4") == ((-1, 2), (0, 4))
    assert parse_sheaf("0,0;-1,-2:2") == (((0, 0), 1), ((-1, -2), 2))
    for bad in ("3", "1:2:3", "a:b"):
        with pytest.raises(UsageError):
            parse_window(bad)
    with pytest.raises(UsageError):
        parse_sheaf("1,2,3")


def test_cli_resolve(capsys):
    assert main(["resolve", "--r", "1", "--a", "1"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert [len(t) for t in d["terms"]] == [5, 10, 5]


def test_cli_cohomology(capsys):
    assert main(["cohomology", "--r", "1", "--a", "0", "--sheaf", "0,0", "--window", "-2:2",
                 "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["rows"][0]["entries"]["1,1"] == 4
    assert main(["cohomology", "--r", "1", "--a", "1", "--window", "1:1,1:1"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["rows"][0]["entries"]["1,1"] == 5  # x_i y_0 (2) plus x^2 y_1 (3)


@pytest.mark.parametrize("argv", [["resolve", "--r", "1", "--a", "2,1"],
                                  ["resolve", "--r", "0", "--a", "1"],
                                  ["resolve", "--r", "1", "--a", "x"],
                                  ["cohomology", "--r", "1", "--a", "0", "--window", "3"],
                                  ["bogus"], []])
def test_cli_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_cli_monad_nonacyclic(capsys):
    assert main(["monad", "--r", "1", "--a", "0", "--sheaf", "-1,-1"]) == 1


def test_cli_split(capsys):
    assert main(["split", "--r", "1", "--a", "0", "--sheaf", "0,0;-1,-2:2"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["verdict"]["conclusion"] == "splits as candidate"
    assert main(["split", "--r", "1", "--a", "0", "--sheaf", "0,0;-1,-2:2",
                 "--candidate", "0,0;-1,-2"]) == 1


def test_cli_deterministic(capsys, tmp_path):
    outs = []
    for jobs in ("1", "2"):
        p = tmp_path / f"out{jobs}.json"
        assert main(["verify", "--r", "1", "--a", "1", "--suite", "exactness",
                     "--jobs", jobs, "--output", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    a = main(["resolve", "--r", "1", "--a", "0,1", "--format", "m2"]), capsys.readouterr().out
    b = main(["resolve", "--r", "1", "--a", "0,1", "--format", "m2"]), capsys.readouterr().out
    assert a == b


def test_cli_warmup_compare(capsys):
    assert main(["warmup", "--n", "2", "--compare"]) == 0
    assert json.loads(capsys.readouterr().out)["ok"]


def test_cli_verify_hirzebruch(capsys):
    assert main(["verify", "--r", "1", "--a", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["ok"]


def test_cli_verify_reports_b1_failure(capsys):
    assert main(["verify", "--r", "1", "--a", "0,3", "--suite", "b1"]) == 1
    assert json.loads(capsys.readouterr().out)["b1"]["nonvanishing"]
