"""The nine acceptance criteria, each with its instance count, tolerance
and time budget.  Every test records one PASS/FAIL line, printed in the
terminal summary (and directly when run as a script)."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import min_blocks_bruteforce
from scalent.instances import random_eps, random_space
from scalent.lab import (check_composition, check_decomposition, scaling_row, suite_adic,
                         suite_estimate, suite_folner, suite_partitions, suite_upper_bound,
                         suite_window_oracle)
from scalent.semimetric import eps_entropy_exact

SEED = 20240601


def record(number, name, ok, seconds, budget, detail):
    status = "PASS" if ok and seconds < budget else "FAIL"
    line = (f"criterion {number}: {status} {name}: {detail} "
            f"({seconds:.1f}s, budget {budget:.0f}s)")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert seconds < budget, line


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def test_criterion_1_oracle_equivalence():
    def run():
        rng = np.random.default_rng(SEED)
        bad = []
        for i in range(200):
            sp = random_space(rng, int(rng.integers(1, 13)))
            eps = random_eps(rng)
            if eps_entropy_exact(sp, eps).blocks != min_blocks_bruteforce(sp, eps):
                bad.append(i)
        return bad
    bad, sec = timed(run)
    record(1, "exact solver vs exhaustive enumeration", not bad, sec, 120,
           f"200 spaces (<= 12 atoms), {200 - len(bad)}/200 agree")


def test_criterion_2_partitions_part1():
    res, sec = timed(suite_partitions, SEED, parts=(1,))
    ok = res.checked == 500 and res.passed and res.undecided == 0
    record(2, "H_eps(rho_xi) <= H(xi)/eps", ok, sec, 120,
           f"{res.checked} instances, {len(res.failures)} violations, {res.undecided} undecided")


def test_criterion_3_partitions_part2_and_averaging():
    def run():
        return suite_partitions(SEED, parts=(2,)), suite_upper_bound(SEED)
    (p2, avg), sec = timed(run)
    ok = p2.checked == 200 and avg.checked == 200 and p2.passed and avg.passed
    ok = ok and p2.undecided == avg.undecided == 0
    record(3, "part 2 and averaging lemma", ok, sec, 300,
           f"part 2: {p2.checked} instances, {len(p2.failures)} violations; "
           f"averaging: {avg.checked} instances, {len(avg.failures)} violations")


def test_criterion_4_estimate():
    res, sec = timed(suite_estimate, SEED)
    ok = res.checked == 130 and res.passed and res.undecided == 0
    record(4, "product estimate", ok, sec, 600,
           f"100 exact (k <= 3) + 30 sampled (k <= 8) families, {len(res.failures)} violations")


def test_criterion_5_window_oracle():
    res, sec = timed(suite_window_oracle, SEED)
    record(5, "window law recursion vs enumeration of V_4", res.passed, sec, 300,
           f"16 sigma prefixes, all |S| <= 4, all k: {res.checked} laws, "
           f"{len(res.failures)} with nonzero total variation")


def test_criterion_6_adic_invariance():
    res, sec = timed(suite_adic, SEED)
    record(6, "adic map bijective, measure preserving, o + 1", res.passed, sec, 60,
           f"{res.checked} (sigma, N <= 10) cases, {len(res.failures)} failures")


def test_criterion_7_scaling_dichotomy():
    def run():
        notes, ok = [], True
        # zeros: the two constant words, Φ = log2 2 = 1 exactly
        for eps in (Fraction(1, 4), Fraction(1, 8), Fraction(49, 100)):
            for n in range(1, 1025):
                r = scaling_row("zeros", n, eps)
                if not (r["tag"] == "exact" and r["lower_blocks"] == r["upper_blocks"] == 2):
                    ok = False
                    notes.append(f"zeros n={n} eps={eps}")
        notes.append("zeros: Phi = 1 for n <= 1024")
        for n in (4, 8, 12):
            r = scaling_row("ones", n, Fraction(1, 10))
            good = r["tag"] == "exact" and r["phi_lower"] >= 0.1 * n
            ok &= good
            notes.append(f"ones n={n}: Phi={r['phi_lower']:.2f}")
        worst = 0.0
        for t in range(11):
            r = scaling_row("alternating", 2 ** t, Fraction(1, 8), mode="sampled",
                            samples=100_000, seed=7)
            ends = [r["phi_lower"], r["phi_upper"]]
            if r["tag"] != "sampled" or None in ends:
                ok = False
                continue
            dev = max(abs(math.log2(max(p, 1e-12)) - t / 2) for p in ends)
            worst = max(worst, dev)
        ok &= worst <= 1.5
        notes.append(f"alternating: max |log2 Phi - t/2| = {worst:.2f} over both bounds")
        return ok, notes
    (ok, notes), sec = timed(run)
    record(7, "scaling dichotomy", ok, sec, 900, "; ".join(notes))


def test_criterion_8_folner_certificate():
    res, sec = timed(suite_folner, SEED)
    ok = res.passed and res.checked == 80
    record(8, "Folner reduction certificate", ok, sec, 120,
           f"20 staircase families ({res.checked} windows), {len(res.failures)} failures, "
           f"{res.notes['removed_points']} points removed")


def test_criterion_9_coinduction():
    def run():
        return check_decomposition(SEED), check_composition(SEED)
    ((dc, db), (cc, cb)), sec = timed(run)
    ok = dc == 1000 and db == 0 and cc == 500 and cb == 0
    record(9, "coinduction decomposition and composition", ok, sec, 120,
           f"{dc} pairs over 10 windows, {db} mismatches; {cc} compositions, {cb} mismatches")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
