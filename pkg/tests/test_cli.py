import json

import pytest

from normform.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sieve_csv(capsys, tmp_path):
    code, out, _ = call(capsys, "sieve", "--n", "1", "--x", "20", "--cache-dir", str(tmp_path))
    assert code == 0
    assert out.splitlines() == ["p", "2", "5", "13", "17"]


def test_expsum_row(capsys):
    code, out, _ = call(capsys, "expsum", "--n", "1", "--poly", "0,1", "--q", "2", "--a", "1")
    header, row = out.splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert code == 0 and float(rec["re"]) == -2 and float(rec["im"]) == 0


def test_varcheck_json(capsys):
    code, out, _ = call(capsys, "varcheck", "--seed", "7", "--count", "40")
    doc = json.loads(out)
    assert code == 0 and doc["violations"] == 0 and doc["seed"] == 7


def test_exit_codes(capsys):
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "sieve", "--n", "1")[0] == 2
    assert call(capsys, "sieve", "--n", "1", "--x", str(10**9), "--no-cache")[0] == 3
    assert call(capsys, "residue", "--n", "1", "--p", "7", "--b", "1")[0] == 2
    assert call(capsys, "iw", "--rho", "0.5", "--N", "16")[0] == 2


def test_json_tables_validate(capsys, tmp_path):
    cache = ["--cache-dir", str(tmp_path)]
    cases = [
        ["iw", "--rho", "0.5", "--N", "32"],
        ["iw", "--rho", "0.5", "--N", "32", "--q-cap", "50", "--heights"],
        ["residue", "--n", "1", "--p", "13", "--b", "7"],
        ["residue", "--n", "1", "--Q", "5", "--b", "2", "--x", "20000", *cache],
        ["avg", "--n", "1", "--scales", "8,20", "--N", "8", "--point", "5", *cache],
        ["vaughan", "--n", "1", "--x", "60"],
        ["minor-arc", "--n", "1", "--alphas", "1/3", "--xs", "10000", *cache],
        ["major-arc", "--n", "1", "--a", "1", "--q", "2", "--xs", "10000,20000", *cache],
        ["spectrum-scan", "--n", "1", "--x", "4096", "--grid", "256", "--what", "khat", *cache],
        ["expsum", "--n", "1", "--q", "30", "--decay"],
    ]
    for argv in cases:
        code, out, err = call(capsys, *argv, "--format", "json")
        assert code == 0, (argv, err)
        doc = json.loads(out)
        assert doc["command"] == argv[0] and doc["rows"]
    code, out, _ = call(capsys, "avg", "--n", "1", "--scales", "8,20", "--N", "8", "--point", "5",
                        "--format", "json", *cache)
    assert json.loads(out)["rows"] == [[8, 0.5, 0.0], [20, 0.5, 0.0]]


def test_outputs_are_deterministic(tmp_path, capsys):
    paths = []
    for i in range(2):
        path = tmp_path / f"out{i}.json"
        assert run(["varcheck", "--seed", "3", "--count", "20", "--out", str(path)]) == 0
        paths.append(path.read_bytes())
    assert paths[0] == paths[1]
    for i in range(2):
        path = tmp_path / f"scan{i}.csv"
        assert run(["spectrum-scan", "--n", "1", "--x", "5000", "--grid", "256", "--out", str(path),
                    "--cache-dir", str(tmp_path)]) == 0
    assert (tmp_path / "scan0.csv").read_bytes() == (tmp_path / "scan1.csv").read_bytes()
    assert (tmp_path / "scan0.csv").read_text().splitlines()[0] == "alpha,err"


def test_cache_directory_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("NORMFORM_CACHE", str(tmp_path))
    code, out, _ = call(capsys, "sieve", "--n", "5", "--x", "100")
    assert code == 0 and out.splitlines()[1:] == ["5", "29", "41", "61", "89"]
    assert [p.name for p in tmp_path.iterdir()] == ["pn_n5_x100.pnsv"]
