"""Acceptance criteria 1-12, one PASS/FAIL line each (printed past pytest's capture).

Criterion 12 is a stretch goal: its outcome is reported, never asserted.  The
17-crossing part runs only when KH_STRETCH=1 because it needs about 5 minutes
and 3 GB.
"""

import os
import random
import time

import pytest

from khtorsion import braid as br
from khtorsion.algebra import IntMatrix, rank, rank_mod_p, reduce_complex, smith_normal_form
from khtorsion.braid import BraidWord, closure
from khtorsion.budget import MemoryBudget
from khtorsion.cli import exhaustive_words
from khtorsion.complex import build_differentials, check_parity, verify_d_squared
from khtorsion.families import family
from khtorsion.homology import compute, framed_table, torsion_summary
from khtorsion.polynomial import bracket, graded_euler

from conftest import KNOTS, random_corpus
from oracle import PUBLISHED, khovanov_homology, table_dict


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    return emit


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def classical(w, reduce=True):
    return compute(w, reduce=reduce).table.to_classical()


def test_criterion_01_soundness(report):
    t0 = time.perf_counter()
    bad = []
    for w in random_corpus():
        C = build_differentials(closure(w))
        if not (verify_d_squared(C) and check_parity(C)):
            bad.append(w)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 120
    report(1, ok, f"200 closures, d^2 = 0 and parity, {elapsed:.1f}s (< 120s)")
    assert ok, bad


def test_criterion_02_unknot(report):
    tables = [table_dict(classical(KNOTS[k])) for k in ("unknot0", "unknot1", "unknot2")]
    ok = all(t == {(0, -1): (1, []), (0, 1): (1, [])} for t in tables)
    report(2, ok, "Z at (0,-1) and (0,1) for 0-, 1- and 2-crossing presentations")
    assert ok


def test_criterion_03_trefoil(report):
    T, elapsed = timed(classical, KNOTS["trefoil"])
    w = KNOTS["trefoil"]
    ok = (table_dict(T) == PUBLISHED["trefoil"] == khovanov_homology(w.strands, w.letters)
          and torsion_summary(T) == [(3, 7, 2)] and elapsed < 1)
    report(3, ok, f"matches published table, single Z_2 at (3,7), {elapsed:.3f}s (< 1s)")
    assert ok


@pytest.mark.parametrize("name", ["hopf", "figure8"])
def test_criterion_04_hopf_figure_eight(report, name):
    w = KNOTS[name]
    T, elapsed = timed(classical, w)
    oracle = khovanov_homology(w.strands, w.letters)
    ok = table_dict(T) == oracle == PUBLISHED[name] and elapsed < 5
    report(4, ok, f"{name}: matches brute-force oracle and published table, {elapsed:.3f}s (< 5s)")
    assert ok


def test_criterion_05_8_19(report):
    w = br.torus_word(3, 4)
    r, elapsed = timed(compute, w, reduce=True)
    T = r.table.to_classical()
    orders = {t for _, _, t in torsion_summary(T)}
    euler = graded_euler(r.table) == bracket(closure(w))
    ok = elapsed < 60 and orders == {2} and euler and table_dict(T) == PUBLISHED["8_19"]
    report(5, ok, f"T(3,4) in {elapsed:.2f}s (< 60s), torsion orders {sorted(orders)}, Euler {euler}")
    assert ok


def test_criterion_06_euler_identity(report):
    named = [KNOTS[k] for k in ("unknot0", "unknot1", "unknot2", "trefoil", "hopf", "figure8")]
    named.append(br.torus_word(3, 4))
    bad = [w for w in named + random_corpus()
           if graded_euler(compute(w).table) != bracket(closure(w))]
    ok = not bad
    report(6, ok, f"bracket = graded Euler on {len(named)} named + 200 corpus diagrams")
    assert ok, bad


def test_criterion_07_invariance(report):
    stabilized = [BraidWord(2, (1, 1, 1)), BraidWord(3, (1, 1, 1, 2)), BraidWord(3, (1, 1, 1, -2)),
                  BraidWord(3, (2, 1, 1, 1))]
    tables = [classical(w) for w in stabilized]
    markov = all(t == tables[0] for t in tables)
    conj = True
    for w in random_corpus(count=20, max_strands=4, max_length=7, seed=8):
        g = BraidWord(w.strands, (1,))
        conj &= classical(w) == classical(g * w * g.inverse())
    knots = [w for w in random_corpus() if w.components() == 1 and len(w) <= 8]
    mirror = True
    for w in knots:
        ranks = classical(w).rational_poincare()
        flipped = {(-i, -j): r for (i, j), r in ranks.items()}
        mirror &= classical(w.inverse()).rational_poincare() == flipped
    ok = markov and conj and mirror
    report(7, ok, f"stabilization {markov}, conjugation {conj}, mirror ranks on {len(knots)} knots {mirror}")
    assert ok


def _unimodular(rng, n):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(12):
        i, j = rng.sample(range(n), 2)
        f = rng.choice((-2, -1, 1, 2))
        u[i] = [x + f * y for x, y in zip(u[i], u[j])]
    return IntMatrix.from_dense(u)


def test_criterion_08_snf(report):
    rng = random.Random(8)
    ok = True
    for _ in range(50):
        m = IntMatrix.from_dense([[rng.randint(-5, 5) for _ in range(6)] for _ in range(6)])
        f = smith_normal_form(m).invariant_factors
        g = smith_normal_form(_unimodular(rng, 6) @ m @ _unimodular(rng, 6)).invariant_factors
        ok &= f == g
        ok &= all(b % a == 0 for a, b in zip(f, f[1:]))
        ok &= rank(m) == len(f)
        ok &= all(rank_mod_p(m, p) == sum(1 for d in f if d % p) for p in (2, 3, 5, 7))
    report(8, ok, "50 random 6x6 trials: unimodular invariance, divisibility, rank, rank mod p")
    assert ok


def test_criterion_09_reduction(report):
    bad = []
    for w in random_corpus():
        D = closure(w)
        C = build_differentials(D)
        if framed_table(reduce_complex(C), D.writhe) != framed_table(C, D.writhe):
            bad.append(w)
    t0 = time.perf_counter()
    for q in range(2, 10):
        compute(br.torus_word(2, q), reduce=True)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    report(9, ok, f"reduction preserves homology on 200 diagrams; T(2,q) q<=9 in {elapsed:.2f}s (< 30s)")
    assert ok, bad


def test_criterion_10_expansion_identity(report):
    w, expanded = br.expansion_identity(3)
    ok = (w.letters == (1, 2, 2, 1) and expanded.letters == (1, 2, 1, 2, 1, 2, -1, -1)
          and classical(w) == classical(expanded))
    report(10, ok, "s1s2s2s1 and (s1s2)^3 s1^-2 have identical classical tables")
    assert ok


def test_criterion_11_three_braid_scan(report):
    t0 = time.perf_counter()
    orders = set()
    count = 0
    for _, w in exhaustive_words(3, 8):
        orders |= {t for _, _, t in torsion_summary(classical(w))}
        count += 1
    elapsed = time.perf_counter() - t0
    ok = orders <= {2} and elapsed < 1800
    report(11, ok, f"{count} classes of 3-braids up to length 8, torsion orders {sorted(orders)}, "
                   f"{elapsed:.1f}s (< 30 min)")
    assert ok


def test_criterion_12_stretch(report):
    lines = []
    for m in (0, 1):
        if m == 1 and os.environ.get("KH_STRETCH") != "1":
            lines.append("conj4(1): not run (set KH_STRETCH=1)")
            continue
        w = family(f"conj4({m})")
        try:
            r, elapsed = timed(compute, w, reduce=True, budget=MemoryBudget(16384))
            tors = torsion_summary(r.table.to_classical())
            orders = sorted({t for _, _, t in tors})
            lines.append(f"conj4({m}) {len(w)} crossings: {elapsed:.1f}s, torsion orders {orders}, "
                         f"Z_3 present {any(t % 3 == 0 for t in orders)}")
        except MemoryError as e:
            lines.append(f"conj4({m}): budget exhausted ({e})")
    report(12, True, "(stretch, reported only) " + "; ".join(lines))
