"""
Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.  Two
published numbers do not reproduce; those tests are strict xfails that still
print FAIL with the computed value.
"""

import itertools
import time

import numpy as np
import pytest

from stellar.classical import classical_count
from stellar.commutative import is_fully_commutative, is_fully_commutative_oracle
from stellar.criteria import build_bad_tables, palindromic_vector, smooth_vector, sweep
from stellar.e8 import E8_J, sample_run
from stellar.embeddings import embedding_hits
from stellar.group import weyl_group
from stellar.poincare import ONE, PoincarePolynomial, asymmetry_depth, factor_trace
from stellar.root_system import build
from stellar.subsystems import enumerate_subsystems, span_closure
from stellar.weyl import (bits_to_list, element_from_inversion_set, from_word, inverse,
                          inversion_set, is_biconvex, min_coset_reps, reflection)

STELLAR = ("B2", "G2", "A3", "B3", "C3", "D4")


def report(number, title, ok, detail=""):
    line = f"[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  ({detail})"
    print(line)
    return ok


def _counts():
    table = build_bad_tables()
    return ({t: len(table.smooth_bad[t]) for t in STELLAR},
            {t: len(table.rational_bad[t]) for t in STELLAR})


# 1 -----------------------------------------------------------------------------

def test_criterion_01_counts_table():
    t0 = time.time()
    smooth, rational = _counts()
    elapsed = time.time() - t0
    expected_s = {"B2": 1, "G2": 5, "A3": 2, "B3": 20, "C3": 20}
    expected_r = {"B2": 0, "G2": 0, "A3": 2, "B3": 14, "C3": 14}
    ok = all(smooth[t] == expected_s[t] and rational[t] == expected_r[t] for t in expected_s)
    ok &= elapsed < 10
    assert report(1, "counts table for B2, G2, A3, B3, C3", ok,
                  f"{smooth} / {rational}, {elapsed:.1f}s")


@pytest.mark.xfail(strict=True, reason="D4 has 84 singular elements by three independent oracles, not 49")
def test_criterion_01_counts_table_d4():
    smooth, rational = _counts()
    ok = smooth["D4"] == 49 and rational["D4"] == 49
    report(1, "counts table D4 = 49", ok, f"computed {smooth['D4']} / {rational['D4']}")
    assert ok


# 2 -----------------------------------------------------------------------------

@pytest.mark.parametrize("letter,expected", [("B", 268), ("C", 270)])
def test_criterion_02_rank_four_counts(letter, expected):
    t0 = time.time()
    G = weyl_group(build(letter, 4))
    n = int((~smooth_vector(G)).sum())
    elapsed = time.time() - t0
    ok = n == expected and elapsed < 60
    assert report(2, f"{letter}4 non-smooth count", ok, f"{n}, {elapsed:.1f}s")


# 3 -----------------------------------------------------------------------------

def test_criterion_03_minimal_lists():
    table = build_bad_tables()   # self-check compares against the word lists
    sizes = tuple(len(table.smooth_min[t]) for t in STELLAR)
    rsizes = tuple(len(table.rational_min[t]) for t in ("A3", "B3", "D4"))
    ok = sizes == (1, 5, 2, 6, 6, 1) and rsizes == (2, 14, 1)
    assert report(3, "minimal forbidden lists", ok, f"smooth {sizes}, rational {rsizes}")


# 4 -----------------------------------------------------------------------------

def test_criterion_04_g2():
    G = weyl_group(build("G", 2))
    singular = {G[i].reduced_word() for i in np.flatnonzero(~smooth_vector(G))}
    listed = {(1, 2, 1), (1, 2, 1, 2), (2, 1, 2, 1), (1, 2, 1, 2, 1), (2, 1, 2, 1, 2)}
    ok = singular == listed and bool(palindromic_vector(G).all()) and G.size == 12
    assert report(4, "G2 singular set and rational smoothness", ok, f"{len(singular)} singular")


# 5 -----------------------------------------------------------------------------

SWEEP_TYPES = [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("A", 4), ("B", 4), ("C", 4), ("D", 5),
               ("F", 4), ("G", 2)]
SWEEP_LIMIT = {("F", 4): 600, ("D", 5): 1800}


@pytest.mark.parametrize("key", SWEEP_TYPES, ids=[f"{a}{n}" for a, n in SWEEP_TYPES])
def test_criterion_05_method_agreement(key):
    t0 = time.time()
    sw = sweep(build(*key))
    elapsed = time.time() - t0
    bad = sw.disagreements()
    ok = not bad and elapsed < SWEEP_LIMIT.get(key, 600)
    detail = f"{sw.group.size} elements, {len(bad)} disagreements, {elapsed:.1f}s"
    assert report(5, f"method agreement on {key[0]}{key[1]}", ok, detail)


# 6 -----------------------------------------------------------------------------

def test_criterion_06_peterson():
    results = {}
    for key in (("A", 3), ("A", 4), ("D", 4), ("D", 5)):
        G = weyl_group(build(*key))
        results[f"{key[0]}{key[1]}"] = bool(np.array_equal(smooth_vector(G), palindromic_vector(G)))
    assert report(6, "smooth = rationally smooth in simply-laced types", all(results.values()),
                  str(results))


# 7 -----------------------------------------------------------------------------

@pytest.mark.xfail(strict=True, reason="D7 has 9474 smooth elements by brute-force palindromy, not 9479")
def test_criterion_07_d7_count():
    t0 = time.time()
    n = classical_count("D", 7)
    elapsed = time.time() - t0
    ok = n == 9479 and elapsed < 300
    report(7, "D7 smooth count = 9479", ok, f"computed {n}, {elapsed:.1f}s")
    assert ok


# 8 -----------------------------------------------------------------------------

def test_criterion_08_e8_quotient_and_sample():
    t0 = time.time()
    reps = min_coset_reps(build("E", 8), E8_J)
    elapsed = time.time() - t0
    ok = len(reps) == 2160 and elapsed < 60
    report(8, "E8 quotient by D7", ok, f"{len(reps)} representatives, {elapsed:.1f}s")
    t0 = time.time()
    rep = sample_run(1000, seed=0, depth=5)
    ok_sample = rep.ok and rep.max_depth <= 5
    report(8, "E8 sampled u.v products", ok_sample,
           f"{rep.singular}/{rep.samples} singular, all confirmed={rep.confirmed == rep.singular}, "
           f"depths {rep.depth_counts}, {time.time() - t0:.1f}s")
    assert ok and ok_sample


# 9 -----------------------------------------------------------------------------

@pytest.mark.parametrize("key", [("B", 4), ("D", 5), ("F", 4)], ids=["B4", "D5", "F4"])
def test_criterion_09_factorisation(key):
    G = weyl_group(build(*key))
    pal = palindromic_vector(G)
    polys = G.all_poincare()
    failures = 0
    for i in range(G.size):
        steps = factor_trace(G[i])
        if steps is None:
            failures += bool(pal[i])
            continue
        prod = ONE
        for s in steps:
            prod = prod * s.factor
        matches = prod == PoincarePolynomial.of(polys[i])
        failures += matches != bool(pal[i])
    assert report(9, f"recursive factorisation on {key[0]}{key[1]}", failures == 0,
                  f"{int(pal.sum())} rationally smooth, {failures} failures")


# 10 ----------------------------------------------------------------------------

def _max_depth(key):
    G = weyl_group(build(*key))
    depths = [asymmetry_depth(PoincarePolynomial.of(c)) for c in G.all_poincare()]
    return max((d for d in depths if d is not None), default=0)


def test_criterion_10_asymmetry_depth():
    t0 = time.time()
    found = {f"A{n}": _max_depth(("A", n)) for n in range(2, 7)}
    ok = all(found[f"A{n}"] <= n - 2 for n in range(2, 7))
    found["F4"] = _max_depth(("F", 4))
    found["B5"] = _max_depth(("B", 5))
    ok &= found["F4"] <= 3 and found["B5"] <= 6
    assert report(10, "asymmetry depth bounds", ok, f"{found}, {time.time() - t0:.1f}s")


# 11 ----------------------------------------------------------------------------

def test_criterion_11_properness():
    rs = build("C", 3)
    G = weyl_group(rs)
    pal = palindromic_vector(G)
    loose = int((embedding_hits(G.inv_matrix, rs, ("A3",), proper=False) & pal).sum())
    strict = int((embedding_hits(G.inv_matrix, rs, ("A3",), proper=True) & pal).sum())
    ok = loose >= 1 and strict == 0
    assert report(11, "properness filter in C3", ok,
                  f"{loose} false positives without it, {strict} with it")


# 12 ----------------------------------------------------------------------------

def _inversion_properties(key):
    rs = build(*key)
    G = weyl_group(rs)
    violations = 0
    n = rs.num_positive
    for i in range(G.size):
        w = G[i]
        bits = inversion_set(w)
        violations += not is_biconvex(rs, bits)
        violations += element_from_inversion_set(rs, bits) != w
        direct = {w.apply(rs.neg(a)) for a in range(n) if w.apply(rs.neg(a)) < n}
        by_reflection = {a for a in range(n) if (reflection(rs, a) * w).length < w.length}
        word = w.reduced_word()
        prefix = {from_word(rs, word[:k]).apply(rs.simple_index[a - 1]) for k, a in enumerate(word)}
        violations += not (direct == by_reflection == prefix == set(bits_to_list(bits)))
    return violations


def _parabolic_form_violations():
    rs = build("B", 3)
    G = weyl_group(rs)
    els = [G[i] for i in range(G.size)]
    violations = checked = 0
    for d in enumerate_subsystems(rs, 3):
        target = set(d.positive)
        conj = None
        for J in itertools.combinations(range(1, 4), d.rank):
            phiJ = set(span_closure(rs, [rs.simple_index[j - 1] for j in J]).positive)
            for v in els:
                if not any(v.has_left_descent(j) for j in J) and {v.apply(a) for a in target} == phiJ:
                    conj = (set(J), v)
                    break
            if conj:
                break
        if conj is None:
            continue
        J, v1 = conj
        for w in els:
            restricted = set(bits_to_list(inversion_set(w))) & target
            for u in (x for x in els if x.support() <= J):
                pulled = {inverse(v1).apply(a) for a in bits_to_list(inversion_set(u))}
                v2 = inverse(u) * v1 * w
                violations += (restricted == pulled) != (not any(v2.has_left_descent(j) for j in J))
                checked += 1
    return violations, checked


def test_criterion_12_property_suites():
    inv = {f"{a}{n}": _inversion_properties((a, n)) for a, n in (("B", 3), ("C", 3), ("D", 4), ("F", 4), ("G", 2))}
    parabolic, checked = _parabolic_form_violations()
    fc = {}
    for key in (("A", 3), ("B", 3), ("D", 4)):
        G = weyl_group(build(*key))
        pattern = [is_fully_commutative(G[i]) for i in range(G.size)]
        oracle = [is_fully_commutative_oracle(G[i]) for i in range(G.size)]
        fc[f"{key[0]}{key[1]}"] = (sum(p != o for p, o in zip(pattern, oracle)), sum(pattern))
    ok = (sum(inv.values()) == 0 and parabolic == 0 and checked > 0
          and all(v == 0 for v, _ in fc.values()) and fc["A3"][1] == 14)
    assert report(12, "property suites", ok,
                  f"inversion {inv}, parabolic form {parabolic}/{checked}, fully commutative {fc}")
