import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from critblaschke import cli


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_n1(tmp_path, capsys):
    f = write(tmp_path / "i.json", {"n": 1, "points": [[0.5, 0]]})
    code, out, _ = run(["solve", f], capsys)
    doc = json.loads(out)
    assert code == 0
    re, im = doc["a"][0]
    assert abs(re + 0.8) < 1e-12 and abs(im) < 1e-12
    assert doc["report"]["accurately_solved"]
    assert len(doc["zeros"]) == 2 and len(doc["critical_points"]) == 1


def test_solve_three_points_to_file(tmp_path, capsys):
    f = write(tmp_path / "i.json", {"n": 3, "points": [[0.3, 0], [-0.2, 0.4], [0.1, -0.5]]})
    out = tmp_path / "sol.json"
    code, stdout, _ = run(["solve", f, "--out", str(out), "--no-transform", "--tol", "1e-12"], capsys)
    assert code == 0 and stdout == ""
    doc = json.loads(out.read_text())
    assert doc["report"]["accurately_solved"] and doc["report"]["max_error"] < 0.5e-4
    assert doc["transformed"] is False


def test_solve_csv(tmp_path, capsys):
    f = write(tmp_path / "i.json", {"n": 2, "points": [[0.3, 0], [-0.2, 0.4]]})
    code, out, _ = run(["solve", f, "--format", "csv"], capsys)
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and rows[0]["solved"] == "1"


def test_solve_duplicate_points(tmp_path, capsys):
    f = write(tmp_path / "i.json", {"n": 2, "points": [[0.5, 0], [0.5, 0]]})
    code, _, err = run(["solve", f], capsys)
    assert code == 2 and "duplicate critical points" in err


def test_solve_failure_exit_code(tmp_path, capsys):
    f = write(tmp_path / "i.json", {"n": 3, "points": [[0.3, 0], [-0.2, 0.4], [0.1, -0.5]]})
    code, _, err = run(["solve", f, "--max-iter", "1"], capsys)
    assert code == 1 and "max_iterations" in err


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"n": 2,\n "points": [[0.5, 0] [0.2, 0]]}', "line 2"),
        ('{"n": 2, "points": [[0.5, 0], [0.2]]}', "entry 1"),
        ('{"n": 3, "points": [[0.5, 0], [0.2, 0]]}', "field 'n'"),
        ('{"points": [[0.5, 0]]}', "missing field 'n'"),
        ('{"n": 1}', "missing field 'points'"),
        ('{"n": 1, "points": [[1.5, 0]]}', "unit disk"),
    ],
)
def test_solve_format_errors(tmp_path, capsys, text, fragment):
    f = tmp_path / "bad.json"
    f.write_text(text)
    code, _, err = run(["solve", str(f)], capsys)
    assert code == 2 and fragment in err


def test_gen_disk_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["gen", "disk", "-n", "20", "-r", "0.99", "--seed", "7", "--out", str(a)]) == 0
    assert cli.main(["gen", "disk", "-n", "20", "-r", "0.99", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    doc = json.loads(a.read_text())
    z = np.array([complex(*p) for p in doc["points"]])
    assert doc["n"] == 20 and np.all(np.abs(z) < 0.99)


def test_gen_cluster_and_circle(capsys):
    _, out, _ = run(["gen", "cluster", "-n", "10"], capsys)
    z = np.array([complex(*p) for p in json.loads(out)["points"]])
    assert abs(z.mean() - (1 + 1j) / 3) < 0.3
    _, out, _ = run(["gen", "circle", "-n", "50", "-r", "0.95"], capsys)
    z = np.array([complex(*p) for p in json.loads(out)["points"]])
    np.testing.assert_allclose(np.abs(z), 0.95)


def test_verify_n1(tmp_path, capsys):
    a = write(tmp_path / "a.json", {"n": 1, "a": [[-0.8, 0]]})
    p = write(tmp_path / "p.json", {"n": 1, "points": [[0.5, 0]]})
    code, out, _ = run(["verify", a, p], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["max_error"] <= 1e-12 and doc["accurate"]


def test_verify_mismatched_n(tmp_path, capsys):
    a = write(tmp_path / "a.json", {"n": 2, "a": [[-0.8, 0], [0.1, 0]]})
    p = write(tmp_path / "p.json", {"n": 1, "points": [[0.5, 0]]})
    code, _, err = run(["verify", a, p], capsys)
    assert code == 2 and "n=2" in err


def test_verify_blaschke_form(tmp_path, capsys):
    inner = np.convolve([-2, 1], [-0.3, 1])  # numerator z (z - 2)(z - 0.3)
    a = write(tmp_path / "a.json", {"n": 2, "a": [[float(c), 0.0] for c in inner[:-1]]})
    p = write(tmp_path / "p.json", {"n": 2, "points": [[0.1, 0], [0.2, 0]]})
    code, out, _ = run(["verify", a, p], capsys)
    assert code == 0 and json.loads(out)["classification"] == "blaschke_form"


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_bench_rows_summary_and_determinism(tmp_path, capsys):
    args = ["bench", "custom", "-N", "3", "--n", "4", "6", "--both", "--seed", "11"]
    assert cli.main(args + ["--out", str(tmp_path / "one")]) == 0
    assert cli.main(args + ["--out", str(tmp_path / "two"), "--jobs", "2"]) == 0
    capsys.readouterr()
    rows1, rows2 = read_rows(tmp_path / "one.csv"), read_rows(tmp_path / "two.csv")
    assert list(rows1[0].keys()) == list(cli.CSV_HEADER)
    assert len(rows1) == 3 * 4
    strip = lambda rows: [{k: v for k, v in r.items() if k != "cpu_seconds"} for r in rows]
    assert strip(rows1) == strip(rows2)
    summary = json.loads((tmp_path / "one.json").read_text())
    assert len(summary["configs"]) == 4
    for cfg, chunk in zip(summary["configs"], [rows1[i : i + 3] for i in range(0, 12, 3)]):
        for key in ("iterations", "cpu_seconds", "max_error", "max_abs_derivative"):
            vals = np.array([float(r[key]) for r in chunk])
            assert cfg[key] == [vals.min(), float(np.median(vals)), vals.max()]
        assert cfg["solved_percent"] == 100.0 * sum(int(r["solved"]) for r in chunk) / 3
        assert cfg["transformed"] == (chunk[0]["transformed"] == "1")


def test_bench_suite_configurations():
    parser = cli.build_parser()
    cfgs = cli.suite_configs(parser.parse_args(["bench", "test1"]))
    assert [(c.n, c.r, c.transformed) for c in cfgs] == [(20, 0.99, True), (20, 0.99, False)]
    cfgs = cli.suite_configs(parser.parse_args(["bench", "test2"]))
    assert [c.r for c in cfgs] == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
    assert all(c.n == 30 and c.transformed for c in cfgs)
    cfgs = cli.suite_configs(parser.parse_args(["bench", "test3"]))
    assert [c.n for c in cfgs] == [10, 20, 30, 40, 50, 60]
    cfgs = cli.suite_configs(parser.parse_args(["bench", "test4"]))
    assert [(c.family, c.n, c.transformed) for c in cfgs] == [
        ("cluster", 10, True), ("cluster", 10, False), ("circle", 50, True), ("circle", 50, False)]


def test_bench_interrupt_flushes_partial(tmp_path, capsys, monkeypatch):
    real = cli.run_instance
    calls = []

    def flaky(job):
        calls.append(job)
        if len(calls) == 3:
            raise KeyboardInterrupt
        return real(job)

    monkeypatch.setattr(cli, "run_instance", flaky)
    code = cli.main(["bench", "custom", "-N", "5", "--n", "3", "--out", str(tmp_path / "p")])
    assert code == 130
    assert len(read_rows(tmp_path / "p.csv")) == 2
    summary = json.loads((tmp_path / "p.json").read_text())
    assert summary["complete"] is False and summary["configs"][0]["instances"] == 2


def test_module_entry_point(tmp_path):
    f = write(tmp_path / "i.json", {"n": 1, "points": [[0.5, 0]]})
    proc = subprocess.run([sys.executable, "-m", "critblaschke", "solve", f],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["report"]["accurately_solved"]
