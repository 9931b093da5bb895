import json
import subprocess
import sys

import pytest

from dynwild.cli import CommandError, main, run_script


class TestRunScript:
    def test_general_worked_example(self):
        out, report = run_script(
            "general", b"aabbccba", b"a?b?c",
            ["QUERY", "SUB P 1 b", "QUERY", "SUB T 1 b", "QUERY"], tau=3,
        )
        assert out == ["MATCH", "NOMATCH", "MATCH"]
        assert report["mode"] == "general" and report["n"] == 8

    def test_rangepair_pairquery(self):
        out, _ = run_script("rangepair", b"abab", None, ["PAIRQUERY 1 4 a b 0"])
        assert out == ["2"]

    def test_rangepair_update_then_query(self):
        out, _ = run_script(
            "rangepair", b"abab", None,
            ["SUB T 2 a", "PAIRQUERY 1 4 a a 0", "PAIRQUERY 1 4 a b 0"],
        )
        assert out == ["1", "1"]

    def test_two_mode_counts(self):
        out, _ = run_script(
            "two", b"aabbccba", b"a???c",
            ["COUNT", "QUERY", "INS P 1 ?", "COUNT", "DEL P 1", "SUB P 1 ?", "COUNT"],
        )
        assert out == ["2", "MATCH", "1", "2"]

    def test_sparse_mode(self):
        out, _ = run_script(
            "sparse", b"cabyzacde", b"?b??a", ["QUERY", "SUB T 6 x", "QUERY"],
        )
        assert out == ["MATCH", "NOMATCH"]

    def test_dump(self):
        out, _ = run_script("general", b"ab", b"a", ["DUMP"], tau=1)
        assert out == ["DUMP T=ab P=a"]

    def test_blank_lines_skipped(self):
        out, _ = run_script("general", b"ab", b"a", ["", "QUERY", "  "], tau=1)
        assert out == ["MATCH"]

    def test_malformed_command_cites_line(self):
        with pytest.raises(CommandError, match="line 2"):
            run_script("general", b"ab", b"a", ["QUERY", "SUB X 1 a"])

    def test_mode_violations(self):
        with pytest.raises(CommandError, match="only valid in mode two"):
            run_script("general", b"ab", b"a", ["INS P 1 a"])
        with pytest.raises(CommandError, match="only valid in mode rangepair"):
            run_script("general", b"ab", b"a", ["PAIRQUERY 1 2 a b 0"])
        with pytest.raises(CommandError, match="not valid in mode rangepair"):
            run_script("rangepair", b"ab", None, ["QUERY"])

    def test_engine_errors_carry_line_numbers(self):
        with pytest.raises(CommandError, match="line 1"):
            run_script("sparse", b"abcd", b"?b", ["SUB P 1 x"])

    def test_report_shape(self):
        _, report = run_script("two", b"abab", b"a?", ["QUERY"])
        assert set(report) == {"mode", "backend", "n", "m", "k", "counters", "wallMillis"}
        assert report["counters"]["queries"] == 1


class TestMainEntry:
    def run_cli(self, args, stdin=""):
        proc = subprocess.run(
            [sys.executable, "-m", "dynwild.cli", *args],
            input=stdin, capture_output=True, text=True,
        )
        return proc

    def test_run_with_report(self):
        proc = self.run_cli(
            ["run", "--mode", "general", "--text", "aabbccba",
             "--pattern", "a?b?c", "--tau", "3", "--report"],
            stdin="QUERY\nSUB P 1 b\nQUERY\nSUB T 1 b\nQUERY\n",
        )
        assert proc.returncode == 0
        lines = proc.stdout.splitlines()
        assert lines[:3] == ["MATCH", "NOMATCH", "MATCH"]
        report = json.loads(lines[3])
        assert report["mode"] == "general"

    def test_bad_script_exits_nonzero(self):
        proc = self.run_cli(
            ["run", "--mode", "general", "--text", "ab", "--pattern", "a"],
            stdin="FROB\n",
        )
        assert proc.returncode == 2
        assert "line 1" in proc.stderr

    def test_ov_subcommand(self):
        proc = self.run_cli(["ov", "--check", "--report"], stdin="10\n01\n")
        assert proc.returncode == 0
        lines = proc.stdout.splitlines()
        assert lines[0] == "TRUE"
        report = json.loads(lines[1])
        assert report["counters"]["queries"] == 2

    def test_ov_false_instance(self):
        proc = self.run_cli(["ov", "--check"], stdin="11\n11\n")
        assert proc.stdout.splitlines()[0] == "FALSE"

    def test_text_file_loading(self, tmp_path):
        tf = tmp_path / "text.txt"
        tf.write_bytes(b"abab\n")
        sf = tmp_path / "script.txt"
        sf.write_text("PAIRQUERY 1 4 a b 0\n")
        proc = self.run_cli(
            ["run", "--mode", "rangepair", "--text-file", str(tf), str(sf)]
        )
        assert proc.returncode == 0
        assert proc.stdout.splitlines() == ["2"]


class TestBench:
    def test_deterministic_counters(self):
        proc1 = subprocess.run(
            [sys.executable, "-m", "dynwild.cli", "bench", "--mode", "general",
             "--n", "60", "--updates", "40", "--seed", "7"],
            capture_output=True, text=True,
        )
        proc2 = subprocess.run(
            [sys.executable, "-m", "dynwild.cli", "bench", "--mode", "general",
             "--n", "60", "--updates", "40", "--seed", "7"],
            capture_output=True, text=True,
        )
        r1 = json.loads(proc1.stdout)
        r2 = json.loads(proc2.stdout)
        assert r1["counters"] == r2["counters"]

    def test_rangepair_amortization_visible(self):
        proc = subprocess.run(
            [sys.executable, "-m", "dynwild.cli", "bench", "--mode", "rangepair",
             "--n", "200", "--updates", "300", "--seed", "1"],
            capture_output=True, text=True,
        )
        report = json.loads(proc.stdout)
        B = max(1, round(200 ** 0.5))
        delta = max(1, B // 2)
        M = (200 + B - 1) // B
        assert report["counters"]["rebuilds"] <= 300 / delta + M
        assert report["counters"]["last_near_touches"] <= 2 * B
