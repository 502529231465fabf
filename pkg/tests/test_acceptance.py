"""Acceptance suite: eleven criteria, each with its own tolerance and time limit.

Every test prints one ``[PASS]``/``[FAIL]`` line (also when pytest captures
output) and then asserts. ``python3 tests/test_acceptance.py`` prints the
lines without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from math import comb, factorial

import numpy as np
import pytest

from biaslab.bias import (
    BiasSet,
    SimpleGraph,
    count_biased_cliques,
    count_biased_graphs,
    is_biased_graph,
    is_scarce,
    iter_biased_cliques,
    make_rng,
    max_stable_set,
    random_scarce_set,
)
from biaslab.bounds import bounds_report
from biaslab.compression import build_scheme, compress, reconstruct
from biaslab.containers import check_container, container_params, run_containers
from biaslab.cycles import catalog_for, cycle_count_by_length, enumerate_cycles, num_edges
from biaslab.labelling import (
    AbelianGroup,
    Polynomial,
    ZeroPatternSystem,
    abelian_labellable,
    balanced_set,
    graph_system,
    random_labelling,
    zero_patterns,
)
from biaslab.overlap import build_overlap, compute_sn_and_bounds, theta_triples
from biaslab.rings import (
    enumerate_diamond_rings,
    labelled_ring_check,
    monte_carlo,
    ring_hamiltons,
    trial_rng,
)

GROUPS = [(2,), (6,), (0,), (0, 0), (2, 0, 6), (3, 4), (0, 5)]


def _report(capsys, number: int, ok: bool, elapsed: float, limit: float, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail} ({elapsed:.2f}s, limit {limit:g}s)"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


def _run(capsys, number, limit, body):
    t = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - t
    ok = ok and elapsed < limit
    _report(capsys, number, ok, elapsed, limit, detail)
    assert ok, detail


# --- criteria --------------------------------------------------------------------


def criterion_1():
    bad = []
    for n in range(3, 9):
        cat = enumerate_cycles(n)
        for k in range(3, n + 1):
            got = len(cat.ids_of_length(k))
            if got != factorial(n) // (2 * k * factorial(n - k)) or got != cycle_count_by_length(n, k):
                bad.append((n, k, got))
    v5 = len(enumerate_cycles(5))
    return not bad and v5 == 37, f"per-length cycle counts n=3..8 exact, |V(Omega_5)| = {v5}, mismatches {bad}"


def criterion_2():
    g3 = count_biased_graphs(3)
    omega = build_overlap(catalog_for(4))
    triples = list(theta_triples(omega))
    oracle = sum(
        1
        for m in range(1 << 7)
        if all((m >> a & 1) + (m >> b & 1) + (m >> c & 1) != 2 for a, b, c in triples)
    )
    k4 = count_biased_cliques(4)
    return g3 == 9 and k4 == oracle, f"count_biased_graphs(3) = {g3}, |K_4| = {k4} vs subset oracle {oracle}"


def criterion_3():
    failures = [n for n in range(5, 201) if not compute_sn_and_bounds(n).bounds_ok]
    return not failures, f"S_n and |V(Omega_n)| bounds for n = 5..200, failures {failures}"


def criterion_4():
    r4 = max_stable_set(build_overlap(catalog_for(4)), "all_optima")
    cat5 = catalog_for(5)
    r5 = max_stable_set(build_overlap(cat5), "all_optima")
    hams = list(cat5.ids_of_length(5))
    ok = (
        r4.size == 3
        and r4.unique
        and r5.size == 12 == factorial(4) // 2
        and r5.unique
        and r5.optima == [hams]
    )
    return ok, f"alpha(Omega_4) = {r4.size} unique={r4.unique}, alpha(Omega_5) = {r5.size} unique={r5.unique} (Hamilton set)"


def criterion_5():
    runs = failures = 0
    for n in (5, 6):
        omega = build_overlap(catalog_for(n))
        params = {a: container_params(n, a=a) for a in (5, 10, 20)}
        rng = make_rng(2024 + n)
        for _ in range(1000):
            B = random_scarce_set(omega, rng)
            for a, p in params.items():
                runs += 1
                t = run_containers(B, omega, p, keep_states=False)
                terminated = t.i0 <= omega.vertex_count
                checks = check_container(B, omega, p)
                if not (terminated and checks["set_in_container"] and checks["container_reproduced"]):
                    failures += 1
    return failures == 0, f"{runs} container runs (n in 5,6; a in 5,10,20): {failures} failures"


def criterion_6():
    detail = []
    ok = True
    for n in (4, 5):
        cat = catalog_for(n)
        omega = build_overlap(cat)
        scheme = build_scheme(cat, omega)
        keys = set()
        total = scarce = bad = 0
        for mk in iter_biased_cliques(omega):
            B = BiasSet(cat, mk)
            total += 1
            Bp = compress(B, scheme)
            X = mk & scheme.short_mask
            keys.add((Bp.members, X))
            if reconstruct(Bp, X, scheme) != B:
                bad += 1
            scarce += is_scarce(B, omega)
        collisions = total - len(keys)
        ok = ok and bad == 0 and collisions == 0
        detail.append(f"n={n}: {total} cliques, {bad} failed, {collisions} collisions")
        if n == 4:
            bound = scarce * 2**scheme.r
            ok = ok and total <= bound
            detail.append(f"|K_4| = {total} <= |S_4| 2^r = {scarce}*2^{scheme.r} = {bound}")
    return ok, "; ".join(detail)


def criterion_7():
    rnd = random.Random(77)
    bad = 0
    for trial in range(1000):
        n = rnd.choice((3, 4, 5, 6))
        edges = rnd.getrandbits(num_edges(n)) if trial % 3 else (1 << num_edges(n)) - 1
        G = SimpleGraph(n, edges)
        group = AbelianGroup(GROUPS[trial % len(GROUPS)])
        L = random_labelling(G, group, np.random.default_rng(trial))
        B = balanced_set(G, L)
        dec = abelian_labellable(G, B)
        if not (is_biased_graph(G, B) and dec.labellable and balanced_set(G, dec.labelling).members == B.members):
            bad += 1
    return bad == 0, f"1000 random abelian labellings (n <= 6): {bad} failures"


def criterion_8():
    system, _ = graph_system(SimpleGraph.complete(4))
    rep = zero_patterns(system, 3)
    single = zero_patterns(ZeroPatternSystem([Polynomial.from_dict({(0,): 1})], 1), 3)
    ok = (
        (rep.M, rep.N, rep.D) == (7, 6, 4)
        and rep.count <= comb(rep.M * rep.D + rep.N, rep.N)
        and single.count == 2
        and single.rbg_bound == comb(1, 1) == 1
    )
    return ok, (
        f"K_4 over F_3: |Z| = {rep.count} <= C(MD+N, N) = {rep.comparison_bound}; "
        f"single variable: |Z| = {single.count} > C(1,1) = {single.rbg_bound} (logged discrepancy)"
    )


def criterion_9():
    counts = {}
    four = True
    for n in (6, 7):
        cat = catalog_for(n)
        rings = enumerate_diamond_rings(n, cat)
        counts[n] = len(rings)
        for R in rings:
            four = four and len(ring_hamiltons(R, cat)) == 4
    G = SimpleGraph.complete(6)
    rings6 = enumerate_diamond_rings(6)
    bad = 0
    for t in range(200):
        L = random_labelling(G, AbelianGroup(GROUPS[t % len(GROUPS)]), trial_rng(99, t))
        bad += not labelled_ring_check(L, rings6)
    ok = counts == {6: 45, 7: 630} and four and bad == 0
    return ok, f"ring counts {counts}, four Hamiltons each: {four}, labellings with a bad ring: {bad}/200"


def criterion_10():
    rep = monte_carlo(7, 200, seed=1)
    dev = abs(rep.mean_bad - 157.5)
    positive = sum(1 for x in rep.values if x > 0)
    ok = dev <= 5 * rep.stderr and positive >= 1 and float(rep.expected) == 157.5
    return ok, (
        f"mean X = {rep.mean_bad:.3f}, |mean - 157.5| = {dev:.3f} <= 5*stderr = {5 * rep.stderr:.3f}; "
        f"fraction X > 0 = {rep.fraction_positive:.3f}"
    )


def criterion_11():
    failures = []
    for n in range(3, 31):
        c = bounds_report(n).checks
        if not c["lower_le_main_upper"] or not c["two_n_factorial_plus_one_le_n_to_n"]:
            failures.append(n)
        if n >= 18 and not c["compression_ratio_le_half_root"]:
            failures.append(n)
    return not failures, f"bounds checks for n = 3..30, failures {failures}"


LIMITS = {1: 10, 2: 1, 3: 1, 4: 60, 5: 60, 6: 600, 7: 300, 8: 60, 9: 120, 10: 60, 11: 1}
CRITERIA = {k: globals()[f"criterion_{k}"] for k in LIMITS}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    _run(capsys, number, LIMITS[number], CRITERIA[number])


def test_stretch_mis_omega6(capsys):
    """Not gating: alpha(Omega_6) = 60 with the Hamilton set as the only optimum."""
    t = time.perf_counter()
    cat = catalog_for(6)
    r = max_stable_set(build_overlap(cat), "all_optima")
    ok = r.size == 60 and r.unique and r.optima == [list(cat.ids_of_length(6))]
    with capsys.disabled():
        print(f"\n[{'INFO' if ok else 'WARN'}] stretch: alpha(Omega_6) = {r.size}, unique={r.unique} "
              f"({time.perf_counter() - t:.2f}s)")


if __name__ == "__main__":
    results = []
    for k in sorted(CRITERIA):
        try:
            _run(None, k, LIMITS[k], CRITERIA[k])
            results.append(True)
        except AssertionError:
            results.append(False)
    sys.exit(0 if all(results) else 1)
