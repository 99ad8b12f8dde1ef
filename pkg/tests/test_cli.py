import json

import pytest

from uniflab.cli import main, EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR
from uniflab.callbacks import SuiteCallback, SuiteMetricsLogger, ReplayWriter
from uniflab.crosscheck import Check, SUITES, DEFAULT_SIZE, run_suite, run_crosscheck, _agrees
from uniflab.models import xor_linear
from uniflab.models.decision import Solvable, Unsolvable
from uniflab.modules.term import ZERO
from uniflab.loader import format_problem, read_dimacs, read_problem
from uniflab.models.reductions import sat3_to_r1_disunif
from conftest import XOR_EXAMPLE

DIMACS = "p cnf 3 2\n1 -2 3 0\n-1 -2 3 0\n"
GRAPH = "p edge 4 4\ne 1 3\ne 1 2\ne 2 3\ne 3 4\n"
K4 = "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n"


def json_lines(out):
    return [json.loads(line) for line in out.splitlines() if line.startswith("{")]


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


class FakeLogger(object):
    def __init__(self):
        self.metrics = []
        self.saved = 0

    def log_metrics(self, metrics, step=None):
        self.metrics.append((step, metrics))

    def save(self):
        self.saved += 1


def test_solve_prints_unifier(write, capsys):
    assert main(["solve", write("xor.txt", XOR_EXAMPLE)]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "solvable (xor-linear)"
    assert out[1].startswith("  x1 -> ")
    assert out[2].startswith("  x2 -> ")


def test_solve_json(write, capsys):
    assert main(["solve", write("xor.txt", XOR_EXAMPLE), "--json"]) == EXIT_OK
    report, = json_lines(capsys.readouterr().out)
    assert report["solvable"] is True
    assert report["backend"] == "xor-linear"
    assert set(report["unifier"]) == {"x1", "x2"}
    assert report["fail_rule"] is None
    assert "elapsed_ms" in report


def test_solve_unsolvable(write, capsys):
    path = write("clash.txt", "theory r1\nvars X\neq X = a\neq X = b\n")
    assert main(["solve", path]) == EXIT_NEGATIVE
    assert capsys.readouterr().out.startswith("unsolvable [F4] (asym-syntactic)")
    assert main(["solve", path, "--json"]) == EXIT_NEGATIVE
    report, = json_lines(capsys.readouterr().out)
    assert report["fail_rule"] == "F4"
    assert report["unifier"] is None
    assert report["trace"] is None
    assert "reason" in report


def test_solve_directory_reports_each_file(tmp_path, capsys):
    (tmp_path / "a.txt").write_text(XOR_EXAMPLE)
    (tmp_path / "b.txt").write_text("theory r1\nvars X\neq X = a\neq X = b\n")
    assert main(["solve", str(tmp_path), "--json"]) == EXIT_NEGATIVE
    reports = json_lines(capsys.readouterr().out)
    assert [r["solvable"] for r in reports] == [True, False]
    assert reports[0]["file"].endswith("a.txt")


@pytest.mark.parametrize("argv", [
    ["solve", "does-not-exist.txt"],
    ["normalize", "u + a", "--theory", "custom", "--consts", "a", "--rule", "x + a"],
    ["normalize", "h(a", "--theory", "r1"],
])
def test_errors_exit_with_two(argv, capsys):
    assert main(argv) == EXIT_ERROR
    assert capsys.readouterr().err.startswith("error: ")


def test_solve_rejects_malformed_file(write, capsys):
    assert main(["solve", write("bad.txt", "theory r1\nfoo\n")]) == EXIT_ERROR
    assert "bad.txt:2:" in capsys.readouterr().err


def test_reduce_to_stdout_and_file(write, tmp_path, capsys):
    source = write("f.cnf", DIMACS)
    assert main(["reduce", source, "--kind", "3sat"]) == EXIT_OK
    assert capsys.readouterr().out == format_problem(sat3_to_r1_disunif(read_dimacs(DIMACS)))
    target = tmp_path / "out" / "f.txt"
    assert main(["reduce", source, "--kind", "3sat", "-o", str(target)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "Wrote 5 items over 3 variables to {}".format(target)
    assert read_problem(target) == sat3_to_r1_disunif(read_dimacs(DIMACS))


def test_reduced_coloring_is_solvable(write, tmp_path, capsys):
    target = tmp_path / "col.txt"
    assert main(["reduce", write("g.edges", GRAPH), "--kind", "3col", "-o", str(target)]) == EXIT_OK
    assert main(["solve", str(target)]) == EXIT_OK
    assert "solvable (acun-ground)" in capsys.readouterr().out


def test_oracle(write, capsys):
    assert main(["oracle", write("g.edges", GRAPH), "--kind", "3col", "--json"]) == EXIT_OK
    verdict, = json_lines(capsys.readouterr().out)
    assert verdict["satisfiable"] is True
    assert set(verdict["witness"]) == {"1", "2", "3", "4"}
    assert main(["oracle", write("k4.edges", K4), "--kind", "3col"]) == EXIT_NEGATIVE
    assert capsys.readouterr().out.strip() == "3col: no witness"


def test_normalize(capsys):
    assert main(["normalize", "h(a)", "--theory", "r1"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "f(a, c)"
    argv = ["normalize", "u + a", "--theory", "custom", "--consts", "a", "--rule", "x + a -> x", "--json"]
    assert main(argv) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"theory": "custom", "normal_form": "u"}


def test_empty_crosscheck_passes(tmp_path, capsys):
    argv = ["crosscheck", "--size", "0", "--log_dir", str(tmp_path), "--no_progress", "--json"]
    assert main(argv) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    assert [r["suite"] for r in rows] == list(SUITES)
    assert all(r["checked"] == 0 and r["mismatches"] == 0 for r in rows)


def test_crosscheck_is_repeatable(tmp_path, capsys):
    argv = ["crosscheck", "--suites", "xor-grid", "snf-properties", "--size", "5", "--seed", "7",
            "--log_dir", str(tmp_path), "--no_progress", "--json"]
    assert main(argv) == EXIT_OK
    first = json_lines(capsys.readouterr().out)
    assert main(argv) == EXIT_OK
    assert json_lines(capsys.readouterr().out) == first
    assert first[0]["checked"] == 5


@pytest.mark.parametrize("name", [
    "r1-reduction", "nae-reduction", "snf-properties", "r1-lemmas", "asym-syntactic-grid",
    "xor-grid", "acunh-ground-grid", "acunh-automata-grid",
])
def test_suites_agree_on_small_runs(name):
    summary = run_suite(name, size=3, seed=11, progress=False)
    assert summary["checked"] > 0
    assert summary["mismatches"] == 0, summary["details"]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_crosscheck(["no-such-suite"], size=1)


def test_mismatches_reach_callbacks(monkeypatch, tmp_path, xor_example):
    def broken_suite(size, seed, **_):
        yield Check(True, "", xor_example, {"solvable": True})
        yield Check(False, "solver disagrees", xor_example, {"solvable": False})

    class Recorder(SuiteCallback):
        def __init__(self):
            self.events = []

        def on_suite_start(self, suite, size):
            self.events.append("start")

        def on_mismatch(self, suite, index, problem, detail):
            self.events.append(("mismatch", index, detail))

        def on_suite_end(self, suite, summary):
            self.events.append("end")

    monkeypatch.setitem(SUITES, "broken", broken_suite)
    fake, recorder = FakeLogger(), Recorder()
    replay = ReplayWriter(str(tmp_path / "replay"))
    metrics = SuiteMetricsLogger(fake, every_n_instances=1)
    summary = run_suite("broken", size=2, callbacks=[recorder, replay, metrics], progress=False)

    assert (summary["checked"], summary["mismatches"]) == (2, 1)
    assert summary["details"] == ["solver disagrees"]
    assert recorder.events == ["start", ("mismatch", 1, "solver disagrees"), "end"]
    assert replay.written == [tmp_path / "replay" / "broken-0001.txt"]
    assert read_problem(replay.written[0]) == xor_example
    assert fake.saved == 1
    assert metrics.rows == [["broken", 2, 1, summary["elapsed_ms"]]]
    assert fake.metrics[-1][1]["broken/mismatches"] == 1.0


def test_failed_crosscheck_exits_negative(monkeypatch, tmp_path, capsys):
    def broken_suite(size, seed, **_):
        yield Check(False, "always wrong")

    monkeypatch.setitem(SUITES, "broken", broken_suite)
    argv = ["crosscheck", "--suites", "broken", "--size", "1", "--log_dir", str(tmp_path), "--no_progress"]
    assert main(argv) == EXIT_NEGATIVE
    assert "always wrong" in capsys.readouterr().out


def test_injected_bug_is_caught(xor_example):
    from uniflab.models.dispatch import solve_problem
    decision, _ = solve_problem(xor_example, inject_bug=True)
    assert not decision.solvable
    assert decision.fail_rule == "verification"


def test_trace_is_a_list_when_requested(write, capsys):
    path = write("clash.txt", "theory r1\nvars X\neq X = a\neq X = b\n")
    assert main(["solve", path, "--json", "--trace"]) == EXIT_NEGATIVE
    report, = json_lines(capsys.readouterr().out)
    assert isinstance(report["trace"], list) and report["trace"]


def test_unverified_unifier_exits_with_two(monkeypatch, write, capsys):
    def wrong(problem, inject_bug=False):
        return Solvable({v: ZERO for v in problem.variables}, "xor-linear")

    monkeypatch.setattr(xor_linear, "decide_disunif_acun", wrong)
    assert main(["solve", write("xor.txt", XOR_EXAMPLE)]) == EXIT_ERROR
    assert "does not verify" in capsys.readouterr().err


def test_xor_grid_at_default_size():
    summary = run_suite("xor-grid", size=DEFAULT_SIZE, seed=42, progress=False)
    assert summary["checked"] == DEFAULT_SIZE
    assert summary["mismatches"] == 0, summary["details"]


def test_snf_suite_checks_more_matrices_than_instances():
    assert run_suite("snf-properties", size=2, seed=3, progress=False)["checked"] == 5
    assert run_suite("snf-properties", size=0, seed=3, progress=False)["checked"] == 0


def test_bounded_negative_from_complete_backend_is_a_mismatch(xor_example):
    sigma = {"x1": ZERO, "x2": ZERO, "x3": ZERO}
    oracle = Solvable(sigma, "ground-search-depth-0", bounded=True)
    decision = Unsolvable("gave up", "acunh-snf", bounded=True)
    assert _agrees(xor_example, decision, oracle)[0]
    ok, why = _agrees(xor_example, decision, oracle, complete=True)
    assert not ok
    assert why.startswith("solver found nothing")
