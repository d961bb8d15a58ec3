import csv
import hashlib
import io
import json

import pytest

from veechsalem.cli import main

FAST = [
    ["salem", "table", "--family", "2qinf", "--q", "7"],
    ["salem", "verify-word", "--family", "2qinf", "--q", "7", "--word", "t^3.s"],
    ["salem", "search", "--family", "2qinf", "--q", "7", "--blocks", "2", "--exp", "4"],
    ["salem", "witness", "--q", "5", "--sigma", "2", "--blocks", "4", "--exp", "4"],
    ["dyn", "lyapunov", "--q", "5", "--steps", "200", "--samples", "4"],
    ["dyn", "contract", "--q", "5", "--samples", "2"],
    ["dyn", "track", "--q", "5", "--bits", "bin:0101"],
    ["dyn", "dimension", "--directions", "8", "--depth", "12"],
    ["dyn", "ratio", "--q", "5", "--nu1", "2", "--nu2", "1"],
    ["flow", "orbit", "--n", "5", "--direction", "0.3", "--start", "0:0.1,0.05", "--T", "5"],
    ["flow", "saddles", "--n", "5", "--L", "2", "--kappa"],
    ["flow", "cylinders", "--n", "8", "--direction", "side:0"],
    ["flow", "iet", "--n", "5", "--direction", "0.3", "--depth", "50"],
    ["flow", "weyl", "--n", "5", "--direction", "0.3", "--nu", "0.4", "--T", "100",
     "--samples", "2", "--grid", "0"],
    ["flow", "normalize", "--n", "5"],
]


NO_CSV = {("salem", "verify-word"), ("salem", "witness"), ("dyn", "ratio"), ("flow", "normalize")}


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


@pytest.mark.parametrize("fmt", ["json", "csv", "text"])
@pytest.mark.parametrize("argv", FAST, ids=lambda a: "-".join(a[:2]))
def test_subcommands_render_every_format(argv, fmt, capsys):
    if fmt == "csv" and tuple(argv[:2]) in NO_CSV:
        rc, _, err = run(argv + ["--format", fmt], capsys)
        assert rc == 2 and "no CSV output" in err
        return
    rc, out, err = run(argv + ["--format", fmt], capsys)
    assert rc == 0, err
    assert out.strip()
    if fmt == "json":
        json.loads(out)
    elif fmt == "csv":
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) >= 1


def test_table_layout(capsys):
    rc, out, _ = run(["salem", "table", "--family", "2qinf", "--q", "7"], capsys)
    assert rc == 0
    lines = out.splitlines()
    assert "| q |" in lines[1].replace("   ", " ").replace("  ", " ")
    assert any("x^3 - 2*x^2 - x + 1" in ln for ln in lines)
    assert any("2.247, 0.5550, -0.8019" in ln for ln in lines)


def test_non_salem_word_exits_1(capsys):
    rc, out, _ = run(["salem", "verify-word", "--q", "7", "--word", "s.t", "--format", "json"], capsys)
    assert rc == 1 and json.loads(out)["salem"] is False


@pytest.mark.parametrize("argv", [["--bogus"], [], ["salem"], ["flow", "orbit", "--n", "x"]])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as ei:
        main(argv)
    assert ei.value.code == 2


def test_domain_error_exits_1(capsys):
    rc, _, err = run(["flow", "normalize", "--n", "6"], capsys)
    assert rc == 1 and "ValueError" in err


def test_sigma_is_one_based(capsys):
    rc, _, err = run(["dyn", "lyapunov", "--q", "5", "--sigma", "1", "--steps", "10",
                      "--samples", "2"], capsys)
    assert rc == 0, err
    rc, out, _ = run(["dyn", "lyapunov", "--q", "5", "--sigma", "2", "--steps", "200",
                      "--samples", "4", "--format", "json"], capsys)
    assert rc == 0 and "0." in out


def test_output_is_deterministic(capsys):
    argv = ["dyn", "construct", "--q", "5", "--bits", "bin:" + "01" * 10, "--format", "json"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    argv = ["flow", "weyl", "--n", "5", "--direction", "0.3", "--nu", "0.4", "--T", "200",
            "--samples", "3", "--grid", "4", "--seed", "9"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


def test_out_file_and_manifest(tmp_path, capsys):
    out = tmp_path / "cyl.json"
    rc, stdout, _ = run(["flow", "cylinders", "--n", "8", "--direction", "side:0", "--out", str(out)],
                        capsys)
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["commensurable"] is True
    man = json.loads((tmp_path / "cyl.json.manifest.json").read_text())
    assert man["argv"][:2] == ["flow", "cylinders"]
    assert {"config", "seeds", "versions", "wall_time"} <= set(man)
    digest = hashlib.sha256(out.read_bytes()).hexdigest()
    assert digest in json.dumps(man)


def test_csv_suffix_selects_format(tmp_path, capsys):
    out = tmp_path / "weyl.csv"
    rc, _, _ = run(["flow", "weyl", "--n", "5", "--direction", "0.3", "--nu", "0.4", "--T", "100",
                    "--samples", "2", "--grid", "2", "--out", str(out)], capsys)
    assert rc == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["scale", "magnitude", "T"] and len(rows) == 3


def test_construct_feeds_weyl(tmp_path, capsys):
    grid = tmp_path / "dir.json"
    rc, _, err = run(["dyn", "construct", "--q", "5", "--bits", "bin:" + "01" * 20,
                      "--targets", "geometric:0.3", "--surface-n", "5", "--out", str(grid)],
                     capsys)
    assert rc == 0, err
    surf = json.loads(grid.read_text())["surface"]
    rc, out, err = run(["flow", "weyl", "--n", "5", "--nu", str(grid), "--T", "200", "--samples",
                        "2", "--region", "polygon:0", "--format", "json"], capsys)
    assert rc == 0, err
    data = json.loads(out)
    assert len(data["rows"]) == 1000
    assert data["nu"] == surf["nu"] and surf["n"] == 5


def test_verify_runs_a_test_module(capsys):
    rc, _, _ = run(["verify", "--tag", "exactfield"], capsys)
    assert rc == 0
