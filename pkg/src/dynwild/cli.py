"""Command-line front end: script replay, OV harness, benchmarks.

Line protocol (whitespace-separated, 1-based positions, one-byte
symbols, '?' = wildcard, '#' reserved):

    SUB T <pos> <sym>     substitute in the text
    SUB P <pos> <sym>     substitute in the pattern
    INS P <pos> <sym>     insert into the pattern        (mode two)
    DEL P <pos>           delete from the pattern        (mode two)
    QUERY                 -> MATCH | NOMATCH
    COUNT                 -> integer                     (mode two)
    PAIRQUERY l r a b d   -> integer                     (mode rangepair)
    DUMP                  -> one state line

One output line is printed per QUERY/COUNT/PAIRQUERY; with ``--report``
a JSON object with instrumentation counters follows the final command.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time
from collections import Counter

import numpy as np

from ._backend import backend_name
from .hardness import OVInstance, ov_brute, ov_solve_via_matcher
from .hashing import WILDCARD_BYTE
from .matcher_general import GeneralMatcher, default_tau
from .matcher_sparse import SparseMatcher
from .matcher_two import TwoMatcher
from .range_pair import RangePairStructure

MODES = ("general", "two", "sparse", "rangepair")


class CommandError(ValueError):
    """A malformed or mode-violating script command."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _parse_sym(tok: str, lineno: int) -> str:
    if len(tok) != 1:
        raise CommandError(lineno, f"symbol must be a single character, got {tok!r}")
    return tok


def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CommandError(lineno, f"{what} must be an integer, got {tok!r}") from None


class _RangePairSession:
    """Mode 'rangepair': raw byte symbols mapped to dense codes.

    The whole script is known up front, so the code alphabet covers the
    initial sequence plus every symbol the script mentions.
    """

    def __init__(self, text: bytes, script: list[str],
                 block_size: int | None, rebuild_threshold: int | None):
        symbols = set(text)
        for line in script:
            toks = line.split()
            if toks and toks[0] == "SUB" and len(toks) == 4 and len(toks[3]) == 1:
                symbols.add(ord(toks[3]))
            if toks and toks[0] == "PAIRQUERY" and len(toks) == 6:
                for t in toks[3:5]:
                    if len(t) == 1:
                        symbols.add(ord(t))
        self.codes = {b: i for i, b in enumerate(sorted(symbols))}
        n = len(text)
        if n == 0:
            raise ValueError("mode rangepair needs a non-empty sequence")
        B = block_size if block_size is not None else max(1, round(n ** 0.5))
        delta = rebuild_threshold if rebuild_threshold is not None else max(1, B // 2)
        mapped = [self.codes[b] for b in text]
        self.text = bytearray(text)
        self.rp = RangePairStructure(mapped, min(B, n), min(delta, B, n),
                                     alphabet_size=len(self.codes))

    def sub(self, pos: int, sym: str) -> None:
        self.rp.update(pos, self.codes[ord(sym)])
        self.text[pos - 1] = ord(sym)

    def pairquery(self, l: int, r: int, a: str, b: str, d: int) -> int:
        ca = self.codes.get(ord(a), -1)
        cb = self.codes.get(ord(b), -1)
        return self.rp.query(l, r, ca, cb, d)


def run_script(mode: str, text: bytes, pattern: bytes | None, script: list[str], *,
               tau: int | None = None, block_size: int | None = None,
               rebuild_threshold: int | None = None, k: int | None = None,
               seed: int = 0, oracle: str = "multiset") -> tuple[list[str], dict]:
    """Replay a command script; returns (output lines, instrumentation report)."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.perf_counter()
    engine = None
    session = None
    if mode == "rangepair":
        if pattern is not None:
            raise ValueError("mode rangepair takes no pattern")
        session = _RangePairSession(text, script, block_size, rebuild_threshold)
    else:
        if pattern is None:
            raise ValueError(f"mode {mode} requires a pattern")
        if mode == "general":
            engine = GeneralMatcher(text, pattern, k=k, tau=tau, seed=seed, oracle=oracle)
        elif mode == "two":
            engine = TwoMatcher(text, pattern, tau=tau, block_size=block_size,
                                rebuild_threshold=rebuild_threshold, seed=seed)
        else:
            engine = SparseMatcher(text, pattern, seed=seed)

    out: list[str] = []
    for lineno, line in enumerate(script, start=1):
        toks = line.split()
        if not toks:
            continue
        verb = toks[0].upper()
        try:
            if verb == "SUB":
                if len(toks) != 4 or toks[1] not in ("T", "P"):
                    raise CommandError(lineno, "usage: SUB T|P <pos> <sym>")
                pos = _parse_int(toks[2], lineno, "position")
                sym = _parse_sym(toks[3], lineno)
                if mode == "rangepair":
                    if toks[1] != "T":
                        raise CommandError(lineno, "mode rangepair has no pattern")
                    session.sub(pos, sym)
                elif toks[1] == "T":
                    engine.substitute_text(pos, sym)
                else:
                    engine.substitute_pattern(pos, sym)
            elif verb == "INS":
                if mode != "two":
                    raise CommandError(lineno, "INS is only valid in mode two")
                if len(toks) != 4 or toks[1] != "P":
                    raise CommandError(lineno, "usage: INS P <pos> <sym>")
                engine.insert_pattern(_parse_int(toks[2], lineno, "position"),
                                      _parse_sym(toks[3], lineno))
            elif verb == "DEL":
                if mode != "two":
                    raise CommandError(lineno, "DEL is only valid in mode two")
                if len(toks) != 3 or toks[1] != "P":
                    raise CommandError(lineno, "usage: DEL P <pos>")
                engine.delete_pattern(_parse_int(toks[2], lineno, "position"))
            elif verb == "QUERY":
                if mode == "rangepair":
                    raise CommandError(lineno, "QUERY is not valid in mode rangepair")
                out.append("MATCH" if engine.query().matched else "NOMATCH")
            elif verb == "COUNT":
                if mode != "two":
                    raise CommandError(lineno, "COUNT is only valid in mode two")
                out.append(str(engine.query().count))
            elif verb == "PAIRQUERY":
                if mode != "rangepair":
                    raise CommandError(lineno, "PAIRQUERY is only valid in mode rangepair")
                if len(toks) != 6:
                    raise CommandError(lineno, "usage: PAIRQUERY <l> <r> <a> <b> <d>")
                l = _parse_int(toks[1], lineno, "l")
                r = _parse_int(toks[2], lineno, "r")
                a = _parse_sym(toks[3], lineno)
                b = _parse_sym(toks[4], lineno)
                d = _parse_int(toks[5], lineno, "d")
                out.append(str(session.pairquery(l, r, a, b, d)))
            elif verb == "DUMP":
                out.append(_dump(mode, engine, session))
            else:
                raise CommandError(lineno, f"unknown verb {verb!r}")
        except CommandError:
            raise
        except (ValueError, IndexError) as exc:
            raise CommandError(lineno, str(exc)) from exc

    report = _report(mode, engine, session, k, t0)
    return out, report


def _dump(mode: str, engine, session) -> str:
    if mode == "rangepair":
        return "DUMP X=" + session.text.decode("latin-1")
    if mode == "general":
        return ("DUMP T=" + engine.index.text.decode("latin-1")
                + " P=" + engine.pattern.p.decode("latin-1"))
    if mode == "two":
        p = bytearray(b"?" * engine.m)
        for pos, sym in engine.C.items():
            p[pos - 1] = sym
        return ("DUMP T=" + engine.index.text.decode("latin-1")
                + " P=" + p.decode("latin-1"))
    return ("DUMP T=" + engine.text.decode("latin-1")
            + " P=" + engine.pattern.decode("latin-1"))


def _report(mode: str, engine, session, k: int | None, t0: float) -> dict:
    counters: Counter = Counter()
    n = m = kk = None
    if mode == "rangepair":
        counters.update(session.rp.counters)
        n = session.rp.n
    else:
        counters.update(engine.counters)
        if mode == "general":
            counters["oracle_window_refreshes"] = getattr(
                engine.oracle, "window_refreshes", 0)
            n, m, kk = engine.index.n, engine.pattern.m, engine.k
        elif mode == "two":
            if engine.rp is not None:
                counters.update({"rp_" + c: v for c, v in engine.rp.counters.items()})
            n, m = engine.n, engine.m
        else:
            n, m = engine.n, engine.m
    return {
        "mode": mode,
        "backend": backend_name(),
        "n": n,
        "m": m,
        "k": kk,
        "counters": dict(sorted(counters.items())),
        "wallMillis": (time.perf_counter() - t0) * 1000.0,
    }


# ---------------------------------------------------------------------------
# Benchmarks
# ---------------------------------------------------------------------------


def _bench_stream(mode: str, n: int, updates: int, sigma: int, seed: int,
                  tau: int | None) -> dict:
    """One deterministic random workload; returns the instrumentation report."""
    from .hashing import warm_kernels

    warm_kernels()  # keep JIT compilation out of the measured window
    rnd = random.Random(seed)
    alpha = [chr(97 + t) for t in range(sigma)]
    text = "".join(rnd.choice(alpha) for _ in range(n))
    t0 = time.perf_counter()
    if mode == "rangepair":
        B = max(1, round(n ** 0.5))
        rp = RangePairStructure([rnd.randrange(sigma) for _ in range(n)],
                                B, max(1, B // 2), alphabet_size=sigma)
        for _ in range(updates):
            rp.update(rnd.randrange(n) + 1, rnd.randrange(sigma))
            l = rnd.randint(1, n)
            r = rnd.randint(l, n)
            rp.query(l, r, rnd.randrange(sigma), rnd.randrange(sigma),
                     rnd.randint(0, max(0, r - l)))
        counters = dict(sorted(rp.counters.items()))
        shape = {"n": n, "m": None, "k": None}
    elif mode == "two":
        m = max(1, min(n, 8))
        pat = ["?"] * m
        pat[0] = alpha[0]
        if m > 2:
            pat[m // 2] = alpha[min(1, sigma - 1)]
        eng = TwoMatcher(text, "".join(pat), tau=tau)
        for _ in range(updates):
            eng.substitute_text(rnd.randrange(n) + 1, rnd.choice(alpha))
            eng.query()
        counters = dict(sorted({**eng.counters,
                                **{"rp_" + c: v for c, v in eng.rp.counters.items()}}.items()))
        shape = {"n": n, "m": eng.m, "k": None}
    elif mode == "sparse":
        m = max(1, min(n, 16))
        pat = [rnd.choice(alpha) if t % 3 == 0 else "?" for t in range(m)]
        eng = SparseMatcher(text, "".join(pat))
        solid = [q for q in eng.C]
        for _ in range(updates):
            if solid and rnd.random() < 0.3:
                eng.substitute_pattern(rnd.choice(solid), rnd.choice(alpha))
            else:
                eng.substitute_text(rnd.randrange(n) + 1, rnd.choice(alpha))
            eng.query()
        counters = dict(sorted(eng.counters.items()))
        shape = {"n": n, "m": eng.m, "k": None}
    else:
        m = max(1, min(n, 10))
        k = 3
        pat = list("".join(rnd.choice(alpha) for _ in range(m)))
        pat[rnd.randrange(m)] = "?"
        eng = GeneralMatcher(text, "".join(pat), k=k, tau=tau)
        wilds = lambda: len(eng.index.wildcard_positions()) + eng.pattern.wildcard_count
        for _ in range(updates):
            if rnd.random() < 0.5:
                sym = rnd.choice(alpha + (["?"] if wilds() < k else []))
                eng.substitute_text(rnd.randrange(n) + 1, sym)
            else:
                sym = rnd.choice(alpha + (["?"] if wilds() < k else []))
                eng.substitute_pattern(rnd.randrange(m) + 1, sym)
            eng.query()
        counters = dict(sorted(eng.counters.items()))
        shape = {"n": n, "m": m, "k": k}
    return {
        "mode": mode,
        "backend": backend_name(),
        **shape,
        "seed": seed,
        "updates": updates,
        "counters": counters,
        "wallMillis": (time.perf_counter() - t0) * 1000.0,
    }


def _bench_compare(args) -> dict:
    """Run the same workload under each backend in a subprocess."""
    sub = {}
    for backend in ("numba", "python"):
        cmd = [sys.executable, "-m", "dynwild.cli", "bench",
               "--mode", args.mode, "--n", str(args.n),
               "--updates", str(args.updates), "--sigma", str(args.sigma),
               "--seed", str(args.seed)]
        if args.tau is not None:
            cmd += ["--tau", str(args.tau)]
        env = dict(os.environ, DYNWILD_BACKEND=backend)
        proc = subprocess.run(cmd, capture_output=True, text=True, env=env)
        if proc.returncode != 0:
            raise RuntimeError(f"{backend} backend bench failed: {proc.stderr}")
        sub[backend] = json.loads(proc.stdout)
    same = sub["numba"]["counters"] == sub["python"]["counters"]
    return {
        "mode": args.mode,
        "countersAgree": same,
        "speedup": sub["python"]["wallMillis"] / max(sub["numba"]["wallMillis"], 1e-9),
        "backends": sub,
    }


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dynwild",
                                 description="dynamic wildcard matching toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="replay an update/query script")
    runp.add_argument("--mode", choices=MODES, required=True)
    src = runp.add_mutually_exclusive_group(required=True)
    src.add_argument("--text", help="inline text")
    src.add_argument("--text-file", help="text file (raw bytes, one trailing newline stripped)")
    runp.add_argument("--pattern", help="inline pattern ('?' marks wildcards)")
    runp.add_argument("--pattern-file")
    runp.add_argument("--tau", type=int)
    runp.add_argument("--block-size", type=int)
    runp.add_argument("--rebuild-threshold", type=int)
    runp.add_argument("--k", type=int, help="wildcard budget (mode general)")
    runp.add_argument("--seed", type=int, default=0)
    runp.add_argument("--oracle", choices=("multiset", "scan"), default="multiset")
    runp.add_argument("--report", action="store_true")
    runp.add_argument("script", nargs="?", help="script file (default: stdin)")

    ovp = sub.add_parser("ov", help="orthogonal-vectors reduction harness")
    ovp.add_argument("--file", help="instance file: one 0/1 vector per line (default: stdin)")
    ovp.add_argument("--tau", type=int)
    ovp.add_argument("--check", action="store_true",
                     help="also run the brute-force solver and verify agreement")
    ovp.add_argument("--report", action="store_true")

    bp = sub.add_parser("bench", help="deterministic random workload benchmark")
    bp.add_argument("--mode", choices=MODES, default="rangepair")
    bp.add_argument("--n", type=int, default=500)
    bp.add_argument("--updates", type=int, default=500)
    bp.add_argument("--sigma", type=int, default=4)
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--tau", type=int)
    bp.add_argument("--compare-backends", action="store_true",
                    help="run once per backend in subprocesses and compare")
    return ap


def _read_text(args) -> bytes:
    if args.text is not None:
        return args.text.encode("latin-1")
    with open(args.text_file, "rb") as fh:
        raw = fh.read()
    return raw[:-1] if raw.endswith(b"\n") else raw


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        pattern = None
        if args.pattern is not None:
            pattern = args.pattern.encode("latin-1")
        elif args.pattern_file is not None:
            with open(args.pattern_file, "rb") as fh:
                raw = fh.read()
            pattern = raw[:-1] if raw.endswith(b"\n") else raw
        if args.script:
            with open(args.script, "r") as fh:
                script = fh.read().splitlines()
        else:
            script = sys.stdin.read().splitlines()
        try:
            out, report = run_script(
                args.mode, _read_text(args), pattern, script,
                tau=args.tau, block_size=args.block_size,
                rebuild_threshold=args.rebuild_threshold,
                k=args.k, seed=args.seed, oracle=args.oracle,
            )
        except CommandError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except (ValueError, IndexError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        for line in out:
            print(line)
        if args.report:
            print(json.dumps(report))
        return 0

    if args.command == "ov":
        data = open(args.file).read() if args.file else sys.stdin.read()
        lines = [ln.strip() for ln in data.splitlines() if ln.strip()]
        try:
            vectors = [[int(c) for c in ln] for ln in lines]
            inst = OVInstance(vectors)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        t0 = time.perf_counter()
        ans, counters = ov_solve_via_matcher(inst, tau=args.tau)
        print("TRUE" if ans else "FALSE")
        if args.check:
            want = ov_brute(inst)
            if want != ans:
                print(f"error: matcher answer {ans} disagrees with brute force {want}",
                      file=sys.stderr)
                return 1
        if args.report:
            print(json.dumps({
                "mode": "ov", "backend": backend_name(),
                "n": inst.n, "d": inst.d,
                "counters": counters,
                "wallMillis": (time.perf_counter() - t0) * 1000.0,
            }))
        return 0

    # bench
    if args.compare_backends:
        print(json.dumps(_bench_compare(args), indent=2))
    else:
        print(json.dumps(_bench_stream(args.mode, args.n, args.updates,
                                       args.sigma, args.seed, args.tau)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
