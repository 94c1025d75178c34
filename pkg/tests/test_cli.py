import csv
import io

import pytest

from binchange.cli import main, parse_list
from binchange.detector import Detector, DetectorConfig
from binchange.evalharness import CSV_COLUMNS


def read_rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_parse_list():
    assert parse_list("1..10", float, 1) == [float(i) for i in range(1, 11)]
    assert parse_list("100000..1000000", int) == list(range(100_000, 1_000_001, 100_000))
    assert parse_list("0..0.9:0.3", float) == [0.0, 0.3, 0.6, 0.9]
    assert parse_list("0,0.1, 0.5", float) == [0.0, 0.1, 0.5]
    assert parse_list("", float) == []


def test_synth_step(tmp_path):
    out = tmp_path / "step.txt"
    assert main(["synth", "--kind", "step", "--length", "200000", "--seed", "1", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 200_000 and set(lines) == {"0", "1"}
    truth = read_rows(str(out) + ".truth.csv")
    assert truth[0] == ["position"] and len(truth) == 20


def test_synth_stdout_and_determinism(capsys, tmp_path):
    assert main(["synth", "--kind", "ind", "--length", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 10 and set(lines) <= {"0", "1"}
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (a, b):
        main(["synth", "--kind", "slope", "--length", "20000", "--seed", "3", "-o", str(p)])
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.txt.truth.csv").read_bytes() == (tmp_path / "b.txt.truth.csv").read_bytes()


def test_synth_invalid_spec_is_usage_error(tmp_path):
    assert main(["synth", "--kind", "step", "--length", "15000", "-o", str(tmp_path / "x")]) == 1


def test_detect_constant(tmp_path):
    src = tmp_path / "zeros.txt"
    src.write_text("0\n" * 1000)
    out = tmp_path / "ev.csv"
    assert main(["detect", "-i", str(src), "-o", str(out)]) == 0
    assert read_rows(out) == [["detected_at", "split_at", "score", "direction", "window_len"]]


def test_detect_step_matches_library(tmp_path):
    src = tmp_path / "step.txt"
    main(["synth", "--kind", "step", "--length", "200000", "--seed", "1", "-o", str(src)])
    out = tmp_path / "ev.csv"
    assert main(["detect", "-i", str(src), "-o", str(out), "--tau", "6", "--eps", "0"]) == 0
    rows = read_rows(out)[1:]
    assert 17 <= len(rows) <= 21
    bits = [int(x) for x in src.read_text().split()]
    events = list(Detector(DetectorConfig(tau=6, eps=0)).run(bits))
    assert [[str(e.detected_at), str(e.split_at), repr(e.score), e.direction, str(e.window_len)] for e in events] == rows


def test_detect_malformed_line(tmp_path, capsys):
    src = tmp_path / "bad.txt"
    src.write_text("0\n1\n2\n1\n")
    assert main(["detect", "-i", str(src)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_detect_missing_file_is_input_error(tmp_path):
    assert main(["detect", "-i", str(tmp_path / "nope.txt")]) == 2


@pytest.mark.parametrize("args", [["detect", "--eps", "1.5"], ["detect", "--tau", "-1"], ["nosuch"], ["detect", "--bogus"]])
def test_usage_errors(args):
    assert main(args) == 1


def test_experiment_empty_grid(capsys):
    assert main(["experiment", "--eps", ""]) == 0
    assert capsys.readouterr().out == ",".join(CSV_COLUMNS) + "\n"
    assert main(["experiment", "--lengths", ""]) == 0
    assert capsys.readouterr().out == ",".join(CSV_COLUMNS) + "\n"


def test_experiment_grid(tmp_path):
    out = tmp_path / "m.csv"
    args = ["experiment", "--workload", "step", "--length", "20000", "--tau", "5..6", "--eps", "0,0.5", "-o", str(out)]
    assert main(args) == 0
    rows = list(csv.DictReader(open(out)))
    assert [(float(r["tau"]), float(r["eps"])) for r in rows] == [(5, 0), (5, 0.5), (6, 0), (6, 0.5)]


def test_experiment_lengths(capsys):
    assert main(["experiment", "--workload", "hill", "--lengths", "2000..6000:2000", "--tau", "1000", "--no-ratios"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [int(r["length"]) for r in rows] == [2000, 4000, 6000]
    assert all(r["detected"] == "0" for r in rows)


def test_bench_zero_work(capsys):
    assert main(["bench", "--pushes", "0", "--lengths", ""]) == 0
    assert "pushes: 0" in capsys.readouterr().out


def test_bench_csv(capsys):
    assert main(["bench", "--pushes", "20000", "--lengths", "5000,20000", "--eps", "0,0.5", "--format", "csv", "--repeats", "1"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    kinds = [r["kind"] for r in rows]
    assert kinds.count("query") == 4 and kinds.count("exponent") == 2
    merges = next(r for r in rows if r["kind"] == "merges")
    assert float(merges["value"]) <= 1.0
