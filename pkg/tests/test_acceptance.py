"""Acceptance gate.  Every criterion yields one ``PASS``/``FAIL`` line.

Under pytest the lines are collected and printed in the terminal summary;
``python tests/test_acceptance.py`` prints them directly.  All comparisons are
exact (integer Betti numbers, zero tolerance); the wall-clock budgets are the
only non-exact quantities.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from kunneth.bar import BarEngine
from kunneth.bv import DiagEngine
from kunneth.combinatorics import perms
from kunneth.e2 import chain_complex, character, e2_page
from kunneth.modules import check_module_axioms, circle_module, module_from_operad
from kunneth.operads import ass_operad, check_operad_axioms, ger_operad

sys.path.insert(0, str(Path(__file__).parent))
from simplicial import face_identity_failures, linear  # noqa: E402

A4 = ass_operad(4)
R1 = module_from_operad(A4, 4)
S1 = circle_module(4, A4)
FACTORS = {"r1": R1, "s1": S1}

PLANAR = {2: (1, 1), 3: (1, 3, 2), 4: (1, 6, 11, 6)}
PLANAR_BUDGET = {2: 10.0, 3: 10.0, 4: 600.0}
CYLINDER = {1: (1, 1), 2: (1, 3, 2), 3: (1, 6, 11, 6)}
TORUS_2 = (1, 4, 5, 2)
TORUS_BUDGET = 60.0


def betti(left: str, right: str, k: int) -> tuple[tuple, float]:
    t0 = time.perf_counter()
    table = e2_page(FACTORS[left], FACTORS[right], k, 2 * k)
    return table.totals(), time.perf_counter() - t0


def _line(n: int, title: str, ok: bool, detail: str) -> str:
    return f"[{n}] {'PASS' if ok else 'FAIL'}  {title}: {detail}"


# ---------------------------------------------------------------- criteria

def criterion_1():
    notes, ok = [], True
    for k, want in PLANAR.items():
        got, secs = betti("r1", "r1", k)
        good = got == want and secs < PLANAR_BUDGET[k]
        ok &= good
        notes.append(f"k={k} {got} in {secs:.2f}s")
    return ok, "; ".join(notes)


def criterion_2():
    notes, ok = [], True
    for k, want in CYLINDER.items():
        got, _ = betti("s1", "r1", k)
        ok &= got == want
        notes.append(f"k={k} {got} (want {want})")
    return ok, "; ".join(notes)


def criterion_3():
    got, secs = betti("s1", "s1", 2)
    return got == TORUS_2 and secs < TORUS_BUDGET, f"k=2 {got} (want {TORUS_2}) in {secs:.2f}s"


def criterion_4():
    notes, ok = [], True
    for left, right, ks in (("r1", "r1", (2, 3, 4)), ("s1", "s1", (1, 2, 3))):
        for k in ks:
            got, _ = betti(left, right, k)
            chi = sum((-1) ** d * b for d, b in enumerate(got))
            ok &= chi == 0
            notes.append(f"{left}x{right} k={k} chi={chi}")
    return ok, "; ".join(notes)


def _bar_checks(fail):
    for name, mod in FACTORS.items():
        for mode in ("reduced", "sequential"):
            for k in (1, 2, 3):
                eng = BarEngine(mod, k, mode, normalized=False)
                for p in (2, 3):
                    bad = face_identity_failures(lambda q, i, w: eng.face(i, w), eng.level(p).labels(), p)
                    if bad:
                        fail(f"bar face identities {name} {mode} k={k} p={p}: {len(bad)}")
                for p in (0, 1, 2):
                    for w in eng.level(p).labels():
                        for j in range(p + 1):
                            sw = eng.degeneracy(j, w)
                            if eng.face(j, sw) != {w: 1} or eng.face(j + 1, sw) != {w: 1}:
                                fail(f"bar d s = id {name} {mode} k={k} p={p}")
                h = BarEngine(mod, k, mode).homology(2)
                if {pq for pq in h if pq[0]} or {q: d for (_, q), d in h.items()} != mod.component(k).dims_by_degree():
                    fail(f"bar resolution {name} {mode} k={k}: {h}")


def _diag_checks(fail):
    pairs = {"rr": (R1, R1), "sr": (S1, R1), "ss": (S1, S1)}
    for name, (left, right) in pairs.items():
        for mode in ("reduced", "sequential"):
            for k in (1, 2, 3):
                eng = DiagEngine(left, right, k, mode=mode, normalized=False)
                for p in (2, 3):
                    if face_identity_failures(eng.face, eng.level(p).labels(), p):
                        fail(f"diagonal face identities {name} {mode} k={k} p={p}")
                # d^2 = 0 at every computed bidegree (raises on failure)
                try:
                    chain_complex(left, right, k, 3, mode=mode)
                except ValueError as exc:
                    fail(f"d^2 {name} {mode} k={k}: {exc}")
                # equivariance of every face
                norm = DiagEngine(left, right, k, mode=mode)
                top = norm.max_level()
                for p in range(1, 3 if top is None else min(top, 3) + 1):
                    if mode == "sequential" and k == 3 and p > 2:
                        continue
                    for sigma in perms(k):
                        for w in norm.level(p).labels():
                            for i in range(p + 1):
                                lhs = linear(lambda v: norm.act(sigma, v), norm.face(p, i, w))
                                rhs = linear(lambda v: norm.face(p, i, v), norm.act(sigma, w))
                                if lhs != rhs:
                                    fail(f"equivariance {name} {mode} k={k} p={p} i={i}")
            a = e2_page(left, right, 2, 2, mode="sequential").entries
            b = e2_page(left, right, 2, 2, mode="sequential", normalized=False).entries
            if a != b:
                fail(f"normalized vs unnormalized {name}: {a} vs {b}")
        for k in (1, 2, 3):
            page = e2_page(left, right, k, 4 * k)
            per_q = {}
            for (p, q), v in page.entries.items():
                per_q[q] = per_q.get(q, 0) + (-1) ** p * v
            hopf = character(left, right, k, tuple(range(1, k + 1)))
            if {q: v for q, v in hopf.items() if v} != {q: v for q, v in per_q.items() if v}:
                fail(f"Hopf trace at identity {name} k={k}")


def criterion_5():
    failures: list[str] = []
    t0 = time.perf_counter()
    for rep in (check_operad_axioms(ass_operad(4), 4), check_operad_axioms(ger_operad(4), 4),
                check_module_axioms(R1, 4), check_module_axioms(S1, 4)):
        if not rep.ok:
            failures.append(str(rep).splitlines()[0])
    _bar_checks(failures.append)
    _diag_checks(failures.append)
    detail = f"{len(failures)} failing checks in {time.perf_counter() - t0:.1f}s"
    if failures:
        detail += ": " + "; ".join(failures[:5])
    return not failures, detail


def criterion_6():
    argv = [sys.executable, "-m", "kunneth", "e2", "--left", "s1", "--right", "s1", "--points", "2",
            "--max-degree", "3", "--format", "json"]
    env = {k: v for k, v in os.environ.items() if k != "KUNNETH_CACHE_DIR"}
    runs = [subprocess.run(argv, capture_output=True, env=env, check=False) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and bool(runs[0].stdout)
    codes = [r.returncode for r in runs]
    return same and codes == [0, 0], f"{len(runs[0].stdout)} bytes, identical={same}, exit codes {codes}"


CRITERIA = [
    (1, "planar ladder Conf_k(R^2), k=2..4", criterion_1),
    (2, "cylinder Conf_k(S^1 x R), k=1..3", criterion_2),
    (3, "torus Conf_2(T^2) = (1,4,5,2)", criterion_3),
    (4, "Euler characteristics vanish", criterion_4),
    (5, "exhaustive property suites", criterion_5),
    (6, "byte-identical JSON reruns", criterion_6),
]


@pytest.mark.parametrize("n,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(n, title, fn, acceptance_log):
    ok, detail = fn()
    line = _line(n, title, ok, detail)
    acceptance_log.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = []
    for n, title, fn in CRITERIA:
        ok, detail = fn()
        results.append(ok)
        print(_line(n, title, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
