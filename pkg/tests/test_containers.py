from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from biaslab.bias import BiasSet, make_rng, random_scarce_set
from biaslab.containers import (
    check_container,
    container_params,
    container_step,
    fingerprint_container,
    run_containers,
    select_pivot,
)
from biaslab.cycles import catalog_for
from biaslab.overlap import build_overlap

OMEGA = {n: build_overlap(catalog_for(n)) for n in (4, 5, 6)}


def _float_a(n):
    L = math.log2(n)
    return (1 + 2 * math.sqrt(L / n)) * math.factorial(n - 1) / 2


@pytest.mark.parametrize("n,expected", [(5, 28), (6, 138), (7, 815), (12, 41776021)])
def test_threshold_floor(n, expected):
    p = container_params(n)
    assert p.a_floor == expected
    # the float value is nowhere near an integer here, so it is a fair check
    assert math.floor(_float_a(n)) == expected
    assert p.s_floor == math.floor(4 * math.factorial(n - 1) / math.sqrt(n * math.log2(n)))
    assert not p.overrides


def test_overrides_are_exact():
    p = container_params(6, a=10)
    assert p.a_floor == 10 and p.overrides == {"a"}
    assert container_params(6, a=Fraction(21, 2)).a_floor == 10
    assert container_params(6, a="19/2").a_floor == 9
    q = container_params(6, s=3, alpha=Fraction(1, 2))
    assert q.s_floor == 3 and q.overrides == {"s", "alpha"}
    with pytest.raises(ValueError):
        container_params(2)


def _pure_int_run(K, omega, params):
    S, A = 0, (1 << omega.vertex_count) - 1
    while True:
        S2, A2 = container_step(S, A, K, params, omega)
        if (S2, A2) == (S, A):
            return S, A
        S, A = S2, A2


@pytest.mark.parametrize("n", [5, 6])
@pytest.mark.parametrize("a", [5, 10, 20])
def test_incremental_route_matches_step_function(n, a):
    omega = OMEGA[n]
    params = container_params(n, a=a)
    rng = make_rng(100 + n + a)
    for _ in range(15):
        B = random_scarce_set(omega, rng)
        t = run_containers(B, omega, params)
        assert (t.fingerprint, t.container) == _pure_int_run(B.members, omega, params)
        # states: S grows, A shrinks, and each state follows from the last
        for (S0, A0), (S1, A1) in zip(t.states, t.states[1:]):
            assert S0 & ~S1 == 0 and A1 & ~A0 == 0
            assert container_step(S0, A0, B, params, omega) == (S1, A1)
        assert len(t.states) == t.i0 + 1


def test_pivot_rule():
    omega = OMEGA[5]
    full = (1 << 37) - 1
    degs = omega.degrees().tolist()
    top = max(degs)
    assert select_pivot(full, omega) == degs.index(top)
    with pytest.raises(ValueError):
        select_pivot(0, omega)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 6]), st.sampled_from([5, 10, 20, 40]), st.integers(0, 2**31))
def test_container_properties(n, a, seed):
    omega = OMEGA[n]
    params = container_params(n, a=a)
    B = random_scarce_set(omega, make_rng(seed))
    checks = check_container(B, omega, params)
    assert all(checks.values()), checks
    fp, ct = fingerprint_container(B, omega, params)
    assert fp & ~B.members == 0 and B.members & ~ct == 0


def test_stop_size_respected():
    omega = OMEGA[6]
    params = container_params(6, a=20)
    for seed in range(20):
        B = random_scarce_set(omega, make_rng(seed))
        t = run_containers(B, omega, params)
        sizes = [A.bit_count() for _, A in t.states]
        # every non-final state is above the threshold
        assert all(s > 20 for s in sizes[:-1])


def test_trivial_and_empty():
    omega = OMEGA[4]
    p = container_params(4)
    assert p.a_floor >= 7
    t = run_containers(0, omega, p)
    assert t.trivial and t.i0 == 0 and t.container == (1 << 7) - 1
    # empty K at n=5 just peels vertices until the threshold
    q = container_params(5, a=10)
    t = run_containers(BiasSet(catalog_for(5), 0), OMEGA[5], q)
    assert t.fingerprint == 0 and t.container.bit_count() == 10


def test_trace_json():
    omega = OMEGA[5]
    t = run_containers(BiasSet.from_ids(omega.catalog, range(25, 37)), omega, container_params(5, a=5))
    js = t.to_json(full=True)
    assert js["fingerprint_size"] == len(js["fingerprint"])
    assert js["container_size"] == len(js["container"])
    assert len(js["states"]) == js["i0"] + 1
