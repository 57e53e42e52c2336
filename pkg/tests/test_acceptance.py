"""Acceptance criteria 1-10, each at its stated tolerance and runtime.

Every test records one pass/fail line (printed in the terminal summary)
before asserting.
"""
import math
import time

import numpy as np

from qcorr.cli import main
from qcorr.correlation import (SetPartition, check_araki_lieb, check_partition_invariance,
                               check_pure_tripartite_identities, check_strong_subadditivity,
                               classical_quantum_bounds, index_of_correlation, lambda_parameter, pairwise_expansion)
from qcorr.entropy import EntropyTable
from qcorr.ghz_audit import audit_simultaneous_optimality, check_ghz_form, maximize_index
from qcorr.partitions import enumerate_integer_partitions, enumerate_set_partitions, hardy_ramanujan_estimate
from qcorr.states import (bell, classical_correlated, ghz, product_state, random_mixed, random_pure, w_state)


def euler_partition_numbers(n_max):
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        k, total = 1, 0
        while k * (3 * k - 1) // 2 <= n:
            sign = 1 if k % 2 else -1
            total += sign * p[n - k * (3 * k - 1) // 2]
            if k * (3 * k + 1) // 2 <= n:
                total += sign * p[n - k * (3 * k + 1) // 2]
            k += 1
        p[n] = total
    return p


def spawn(seed, count):
    return np.random.SeedSequence(seed).spawn(count)


def ensemble_state(dims, seq, max_rank=None):
    """Alternates pure and Ginibre mixed states; ``max_rank`` caps the mixed
    rank for large dimensions."""
    rng = np.random.default_rng(seq)
    if rng.integers(2) == 0:
        return random_pure(dims, rng)
    dim = math.prod(dims)
    cap = dim if max_rank is None else min(dim, max_rank)
    return random_mixed(dims, int(rng.integers(1, cap + 1)), rng)


def test_criterion_01_canonical_values(acceptance):
    t0 = time.perf_counter()
    prod = product_state([random_mixed((2,), seed=1), random_mixed((3,), seed=2)])
    vals = {"bell": index_of_correlation(bell()), "mixture": index_of_correlation(classical_correlated(2)),
            "product": index_of_correlation(prod)}
    errs = [abs(vals["bell"] - 2), abs(vals["mixture"] - 1), abs(vals["product"])]
    ok = max(errs) <= 1e-9
    acceptance(1, ok, f"Bell {vals['bell']:.12f}, mixture {vals['mixture']:.12f}, product {vals['product']:.1e} "
                      f"(max err {max(errs):.1e}, {time.perf_counter() - t0:.3f} s)")
    assert ok


def test_criterion_02_one_bit_gap(acceptance):
    t0 = time.perf_counter()
    gaps, worst = [], -math.inf
    for n in range(2, 9):
        b = classical_quantum_bounds([1.0] * n)
        gaps.append(b.quantum_max - b.classical_max)
        max_rank = None if n <= 5 else 8
        for seq in spawn(200 + n, 200):
            st = ensemble_state((2,) * n, seq, max_rank)
            s = EntropyTable(st)
            singles = [s([j]) for j in range(n)]
            excess = index_of_correlation(st, table=s) - classical_quantum_bounds(singles).quantum_max
            worst = max(worst, excess)
    elapsed = time.perf_counter() - t0
    ok = all(g == 1.0 for g in gaps) and worst <= 1e-8 and elapsed < 30
    acceptance(2, ok, f"gap {set(gaps)} bits for n=2..8; max I - quantum_max over 1400 states {worst:.2e} "
                      f"({elapsed:.1f} s)")
    assert ok


def test_criterion_03_partition_invariance(acceptance):
    t0 = time.perf_counter()
    parts = enumerate_set_partitions(4)
    two_two = [p for p in parts if len(p) == 2 and all(len(b) == 2 for b in p.blocks)]
    worst = 0.0
    for seq in spawn(3, 50):
        st = ensemble_state((2, 2, 2, 2), seq)
        s = EntropyTable(st)
        ref = parts[0]
        for p in parts[1:]:
            res = check_partition_invariance(st, ref, p, table=s)
            worst = max(worst, res.difference, abs(res.sum_second - res.index))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 20
    acceptance(3, ok, f"all {len(parts)} set partitions of 4 qubits ({len(two_two)} of shape 2|2) on 50 states; "
                      f"max disagreement {worst:.2e} ({elapsed:.1f} s)")
    assert ok


def test_criterion_04_tripartite_identities(acceptance):
    t0 = time.perf_counter()
    dims_cycle = [(2, 2, 2), (2, 3, 4), (2, 2, 3), (3, 3, 3)]
    worst_lambda = worst_identity = 0.0
    for i, seq in enumerate(spawn(4, 100)):
        st = random_pure(dims_cycle[i % 4], seq)
        s = EntropyTable(st)
        worst_lambda = max(worst_lambda, abs(lambda_parameter(st, table=s)))
        res = check_pure_tripartite_identities(st, table=s)
        worst_identity = max(worst_identity, max(-v.slack for v in res.verdicts if v.name != "lambda_zero"))
    lam3 = lambda_parameter(classical_correlated(3))
    elapsed = time.perf_counter() - t0
    ok = worst_lambda <= 1e-8 and worst_identity <= 1e-8 and abs(lam3 - 1) <= 1e-8 and elapsed < 10
    acceptance(4, ok, f"max |Lambda| {worst_lambda:.2e}, worst identity slack {-worst_identity:.2e} on 100 pure "
                      f"states; Lambda(classical3) {lam3:.12f} ({elapsed:.1f} s)")
    assert ok


def test_criterion_05_ssa_and_araki_lieb(acceptance):
    t0 = time.perf_counter()
    worst = math.inf
    groups = [([0], [1]), ([0], [2]), ([1], [2]), ([0], [1, 2]), ([1], [0, 2]), ([2], [0, 1])]
    for i, seq in enumerate(spawn(5, 500)):
        dims = (2, 2, 2) if i % 2 == 0 else (2, 3, 4)
        rng = np.random.default_rng(seq)
        st = random_mixed(dims, int(rng.integers(1, math.prod(dims) + 1)), rng)
        s = EntropyTable(st)
        worst = min(worst, check_strong_subadditivity(st, table=s).min_slack)
        for a, b in groups:
            worst = min(worst, check_araki_lieb(st, a, b, table=s).min_slack)
    elapsed = time.perf_counter() - t0
    ok = worst >= -1e-8 and elapsed < 30
    acceptance(5, ok, f"500 mixed states over (2,2,2) and (2,3,4); minimum slack {worst:.2e} ({elapsed:.1f} s)")
    assert ok


def test_criterion_06_pairwise_expansion(acceptance):
    t0 = time.perf_counter()
    worst_sum = 0.0
    for i, seq in enumerate(spawn(6, 500)):
        n = 2 + i % 5
        st = ensemble_state((2,) * n, seq, None if n <= 4 else 16)
        s = EntropyTable(st)
        worst_sum = max(worst_sum, abs(sum(pairwise_expansion(st, table=s)) - index_of_correlation(st, table=s)))
    worst_ghz = 0.0
    for n in range(2, 9):
        prof = pairwise_expansion(ghz(n))
        worst_ghz = max(worst_ghz, max(abs(a - b) for a, b in zip(prof, [2.0] + [1.0] * (n - 2))))
    elapsed = time.perf_counter() - t0
    ok = worst_sum <= 1e-8 and worst_ghz <= 1e-8 and elapsed < 60
    acceptance(6, ok, f"telescoping error {worst_sum:.2e} on 500 states (n=2..6); GHZ profile error "
                      f"{worst_ghz:.2e} for n=2..8 ({elapsed:.1f} s)")
    assert ok


def test_criterion_07_ghz_audit(acceptance):
    t0 = time.perf_counter()
    parts, ok = [], True
    for n in (3, 4):
        res = audit_simultaneous_optimality(n, trials=1000, seed=0, starts=4)
        d = res.details
        ok &= d["non_ghz_achievers"] == 0 and d["converged_ghz"] == d["converged_starts"]
        parts.append(f"n={n}: {d['non_ghz_achievers']} non-GHZ sample achievers, "
                     f"{d['converged_ghz']}/{d['converged_starts']} converged optima GHZ")
    w_rejected = not check_ghz_form(w_state(3))
    ok &= w_rejected
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    acceptance(7, ok, "; ".join(parts) + f"; W rejected {w_rejected} ({elapsed:.1f} s)")
    assert ok


def test_criterion_08_maximisation(acceptance):
    t0 = time.perf_counter()
    r2 = maximize_index(2, starts=20, seed=0)
    r3 = maximize_index(3, starts=20, seed=0)
    six = index_of_correlation(product_state([ghz(3), ghz(3)]))
    elapsed = time.perf_counter() - t0
    ok = r2.best_objective >= 1.99 and r3.best_objective >= 2.99 and abs(six - 6) <= 1e-9 and elapsed < 120
    acceptance(8, ok, f"n=2 best {r2.best_objective:.10f}, n=3 best {r3.best_objective:.10f}, "
                      f"ghz3 x ghz3 {six:.12f} ({elapsed:.1f} s)")
    assert ok


def test_criterion_09_partition_counting(acceptance):
    t0 = time.perf_counter()
    oracle = euler_partition_numbers(30)
    mismatches = [n for n in range(1, 31) if len(enumerate_integer_partitions(n)) != oracle[n]]
    p50 = len(enumerate_integer_partitions(50))
    ratio = hardy_ramanujan_estimate(50) / p50
    elapsed = time.perf_counter() - t0
    ok = not mismatches and p50 == 204226 and 1.0 <= ratio <= 1.10 and elapsed < 5
    acceptance(9, ok, f"p(1..30) mismatches {mismatches}; p(50) {p50}; ratio {ratio:.5f} ({elapsed:.2f} s)")
    assert ok


def test_criterion_10_determinism(acceptance, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"verify{i}.json"
        code = main(["verify", "--seed", "42", "--out", str(path)])
        outs.append((code, path.read_bytes()))
    ok = outs[0] == outs[1] and outs[0][0] == 0
    acceptance(10, ok, f"two verify runs (seed 42, 100 trials/check) identical: {outs[0][1] == outs[1][1]}, "
                       f"{len(outs[0][1])} bytes, exit {outs[0][0]}")
    assert ok
