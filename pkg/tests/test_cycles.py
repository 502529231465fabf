from __future__ import annotations

from itertools import combinations, permutations
from math import factorial

import pytest
from hypothesis import given, strategies as st

from biaslab.cycles import (
    canonical_cycle,
    catalog_for,
    cycle_count_by_length,
    cycle_from_edges,
    edge_index,
    edge_list,
    enumerate_cycles,
    hamilton_ids,
    iter_bits,
    mask_of,
    num_edges,
)


def _least_traversal(seq):
    """Lexicographically least of the 2k rotations and reflections."""
    k = len(seq)
    cands = []
    for s in (list(seq), list(reversed(seq))):
        for r in range(k):
            cands.append(tuple(s[r:] + s[:r]))
    return min(cands)


def _brute_cycles(n):
    """Every closed walk on distinct vertices, reduced to its edge set."""
    seen = set()
    for k in range(3, n + 1):
        for sub in combinations(range(1, n + 1), k):
            for perm in permutations(sub):
                pairs = frozenset(frozenset((perm[i], perm[(i + 1) % k])) for i in range(k))
                seen.add(pairs)
    return seen


def test_edge_index_is_lexicographic_rank():
    for n in range(2, 9):
        pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
        assert [edge_index(u, v, n) for u, v in pairs] == list(range(len(pairs)))
        assert [edge_index(v, u, n) for u, v in pairs] == list(range(len(pairs)))
        assert [(e.u, e.v) for e in edge_list(n)] == pairs
        assert num_edges(n) == len(pairs)


@pytest.mark.parametrize("u,v,n", [(1, 1, 4), (0, 2, 4), (2, 5, 4)])
def test_edge_index_rejects_bad_pairs(u, v, n):
    with pytest.raises(ValueError):
        edge_index(u, v, n)


def test_bit_helpers_round_trip():
    idx = [0, 3, 4, 17, 64, 65]
    assert list(iter_bits(mask_of(idx))) == idx
    assert list(iter_bits(0)) == []


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_catalog_matches_brute_force(n):
    cat = enumerate_cycles(n)
    brute = _brute_cycles(n)
    ours = {frozenset(frozenset(p) for p in c.edge_pairs()) for c in cat}
    assert ours == brute
    assert len(cat) == len(brute)


@pytest.mark.parametrize("n", range(3, 9))
def test_counts_per_length(n):
    cat = enumerate_cycles(n)
    for k in range(3, n + 1):
        ids = cat.ids_of_length(k)
        assert len(ids) == factorial(n) // (2 * k * factorial(n - k))
        assert all(cat[i].length == k for i in ids)


def test_small_catalog_sizes():
    assert [len(enumerate_cycles(n)) for n in range(1, 9)] == [0, 0, 1, 7, 37, 197, 1172, 8018]


def test_catalog_order_and_canonical_form():
    cat = enumerate_cycles(6)
    keys = [c.sort_key() for c in cat]
    assert keys == sorted(keys)
    for c in cat:
        assert c.vertices == _least_traversal(c.vertices)
        assert c.edges.bit_count() == c.length
        assert cat.id_of(c) == cat.id_by_edges(c.edges)


def test_k4_listing():
    cat = enumerate_cycles(4)
    assert [c.vertices for c in cat] == [
        (1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4),
        (1, 2, 3, 4), (1, 2, 4, 3), (1, 3, 2, 4),
    ]
    assert hamilton_ids(cat) == {4, 5, 6}


@given(st.permutations(list(range(1, 8))), st.integers(3, 7), st.integers(0, 6), st.booleans())
def test_canonical_cycle_invariant_under_traversal(perm, k, shift, flip):
    seq = list(perm[:k])
    alt = seq[shift % k :] + seq[: shift % k]
    if flip:
        alt.reverse()
    a, b = canonical_cycle(seq, 7), canonical_cycle(alt, 7)
    assert a == b and a.edges == b.edges
    assert a.vertices == _least_traversal(seq)
    assert cycle_from_edges(a.edges, 7) == a


@pytest.mark.parametrize("seq", [[1, 2], [1, 2, 2], [0, 1, 2], [1, 2, 9]])
def test_canonical_cycle_rejects(seq):
    with pytest.raises(ValueError):
        canonical_cycle(seq, 5)


def test_cycle_from_edges_rejects_non_cycles():
    n = 6
    two_triangles = canonical_cycle([1, 2, 3], n).edges | canonical_cycle([4, 5, 6], n).edges
    with pytest.raises(ValueError):
        cycle_from_edges(two_triangles, n)
    path = 1 << edge_index(1, 2, n) | 1 << edge_index(2, 3, n)
    with pytest.raises(ValueError):
        cycle_from_edges(path, n)


def test_cycle_count_by_length_domain():
    assert cycle_count_by_length(5, 5) == 12
    with pytest.raises(ValueError):
        cycle_count_by_length(5, 6)
    with pytest.raises(ValueError):
        cycle_count_by_length(5, 2)


def test_cycles_within():
    cat = catalog_for(5)
    k4 = 0
    for u, v in combinations(range(1, 5), 2):
        k4 |= 1 << edge_index(u, v, 5)
    inside = cat.cycles_within(k4)
    assert len(inside) == 7
    assert all(5 not in cat[i].vertices for i in inside)
