"""The numba kernels and the plain-Python fallback must be interchangeable."""

import json
import os
import subprocess
import sys

import pytest

_SCRIPT = r"""
import json
from dynwild._backend import backend_name
from dynwild.cli import run_script
from dynwild.hardness import OVInstance, ov_solve_via_matcher

results = {"backend": backend_name()}
out, _ = run_script("general", b"aabbccba", b"a?b?c",
                    ["QUERY", "SUB P 1 b", "QUERY", "SUB T 1 b", "QUERY"], tau=3)
results["general"] = out
out, _ = run_script("two", b"abcabcab", b"a?c",
                    ["COUNT", "SUB T 4 z", "COUNT", "INS P 1 ?", "COUNT"])
results["two"] = out
out, _ = run_script("sparse", b"cabyzacde", b"?b??a",
                    ["QUERY", "SUB T 6 x", "QUERY"])
results["sparse"] = out
out, _ = run_script("rangepair", b"abracadabra", None,
                    ["PAIRQUERY 1 11 a b 0", "SUB T 2 a", "PAIRQUERY 1 11 a a 0"])
results["rangepair"] = out
results["ov"] = ov_solve_via_matcher(OVInstance([(1, 0, 1), (0, 1, 0)]))[0]
print(json.dumps(results))
"""


def _run_with_backend(backend: str) -> dict:
    env = dict(os.environ, DYNWILD_BACKEND=backend)
    proc = subprocess.run([sys.executable, "-c", _SCRIPT],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_backends_produce_identical_outputs():
    got = {b: _run_with_backend(b) for b in ("numba", "python")}
    assert got["numba"]["backend"] == "numba"
    assert got["python"]["backend"] == "python"
    for key in ("general", "two", "sparse", "rangepair", "ov"):
        assert got["numba"][key] == got["python"][key], key


def test_unknown_backend_rejected():
    env = dict(os.environ, DYNWILD_BACKEND="fortran")
    proc = subprocess.run(
        [sys.executable, "-c", "import dynwild"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode != 0
    assert "DYNWILD_BACKEND" in proc.stderr


def test_compare_backends_bench_agrees():
    proc = subprocess.run(
        [sys.executable, "-m", "dynwild.cli", "bench", "--mode", "two",
         "--n", "150", "--updates", "60", "--seed", "3", "--compare-backends"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    assert report["countersAgree"] is True
    assert set(report["backends"]) == {"numba", "python"}
