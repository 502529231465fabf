"""Cycles of the complete graph K_n on vertex set [n] = {1, ..., n}.

Edges and vertices are stored as Python-int bitsets: edge (u, v) with u < v
occupies bit ``edge_index(u, v, n)`` (its rank in lexicographic order of
pairs), vertex v occupies bit ``v - 1``.

Every cycle is held in canonical form: the vertex sequence starts at the
minimum vertex and the smaller of its two neighbours comes second. The
catalog sorts cycles by (length, canonical sequence); the position in that
list is the cycle's id and the id order is the total order used by every
other module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial
from typing import Iterable, Iterator, NamedTuple, Sequence


class EdgeId(NamedTuple):
    u: int
    v: int
    index: int


def edge_index(u: int, v: int, n: int) -> int:
    """Rank of the pair {u, v} among all pairs of [n] in lexicographic order."""
    if u > v:
        u, v = v, u
    if u == v or u < 1 or v > n:
        raise ValueError(f"invalid edge ({u}, {v}) for n={n}")
    return (u - 1) * n - (u - 1) * u // 2 + (v - u - 1)


def edge_list(n: int) -> list[EdgeId]:
    """All edges of K_n ordered by dense index."""
    out = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            out.append(EdgeId(u, v, len(out)))
    return out


def num_edges(n: int) -> int:
    return comb(n, 2) if n >= 2 else 0


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class Cycle:
    n: int
    vertices: tuple[int, ...]
    edges: int = field(compare=False)
    vmask: int = field(compare=False)

    @property
    def length(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def edge_pairs(self) -> list[tuple[int, int]]:
        """Edges as (u, v) pairs following the canonical traversal."""
        vs = self.vertices
        k = len(vs)
        return [(vs[i], vs[(i + 1) % k]) for i in range(k)]

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.vertices), self.vertices)


def _normalize(seq: Sequence[int]) -> tuple[int, ...]:
    k = len(seq)
    i = min(range(k), key=seq.__getitem__)
    fwd = tuple(seq[(i + j) % k] for j in range(k))
    bwd = (fwd[0],) + tuple(reversed(fwd[1:]))
    return fwd if fwd[1] < bwd[1] else bwd


def _make(n: int, vs: tuple[int, ...]) -> Cycle:
    k = len(vs)
    emask = 0
    for i in range(k):
        emask |= 1 << edge_index(vs[i], vs[(i + 1) % k], n)
    return Cycle(n, vs, emask, mask_of(v - 1 for v in vs))


def canonical_cycle(seq: Sequence[int], n: int | None = None) -> Cycle:
    """Canonical form of the cycle traversing ``seq`` (closing back to the start).

    ``n`` defaults to ``max(seq)``; it fixes the edge indexing.
    """
    seq = tuple(int(v) for v in seq)
    if len(seq) < 3:
        raise ValueError(f"a cycle needs at least 3 vertices, got {len(seq)}")
    if len(set(seq)) != len(seq):
        raise ValueError(f"repeated vertex in {seq}")
    if n is None:
        n = max(seq)
    if min(seq) < 1 or max(seq) > n:
        raise ValueError(f"vertex out of range [1, {n}] in {seq}")
    return _make(n, _normalize(seq))


def cycle_from_edges(emask: int, n: int) -> Cycle:
    """Trace an edge bitset that forms a single cycle into a canonical Cycle."""
    edges = edge_list(n)
    adj: dict[int, list[int]] = {}
    for i in iter_bits(emask):
        e = edges[i]
        adj.setdefault(e.u, []).append(e.v)
        adj.setdefault(e.v, []).append(e.u)
    if len(adj) < 3 or any(len(nb) != 2 for nb in adj.values()):
        raise ValueError("edge set is not 2-regular")
    start = min(adj)
    seq = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        seq.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(seq) != len(adj):
        raise ValueError("edge set is disconnected")
    return _make(n, _normalize(seq))


def cycle_count_by_length(n: int, k: int) -> int:
    """Number of k-cycles of K_n, n!/(2k(n-k)!)."""
    if not 3 <= k <= n:
        raise ValueError(f"need 3 <= k <= n, got k={k}, n={n}")
    return factorial(n) // (2 * k * factorial(n - k))


class CycleCatalog:
    """All cycles of K_n in id order (length first, then canonical sequence)."""

    def __init__(self, n: int, cycles: list[Cycle]):
        self.n = n
        self.cycles = cycles
        self._by_vertices = {c.vertices: i for i, c in enumerate(cycles)}
        self._by_edges = {c.edges: i for i, c in enumerate(cycles)}
        self._length_start: dict[int, int] = {}
        for i, c in enumerate(cycles):
            self._length_start.setdefault(c.length, i)

    def __len__(self) -> int:
        return len(self.cycles)

    def __getitem__(self, i: int) -> Cycle:
        return self.cycles[i]

    def __iter__(self) -> Iterator[Cycle]:
        return iter(self.cycles)

    def id_of(self, c: Cycle | Sequence[int]) -> int:
        if not isinstance(c, Cycle):
            c = canonical_cycle(c, self.n)
        return self._by_vertices[c.vertices]

    def id_by_edges(self, emask: int) -> int | None:
        return self._by_edges.get(emask)

    def ids_of_length(self, k: int) -> range:
        if k not in self._length_start:
            return range(0)
        start = self._length_start[k]
        return range(start, start + cycle_count_by_length(self.n, k))

    @property
    def all_mask(self) -> int:
        return (1 << len(self.cycles)) - 1

    def cycles_within(self, emask: int) -> list[int]:
        """Ids of cycles whose edges all lie in the edge set ``emask``."""
        return [i for i, c in enumerate(self.cycles) if c.edges & ~emask == 0]


def _cycles_of_length(n: int, k: int) -> list[tuple[int, ...]]:
    out = []
    for subset in combinations(range(1, n + 1), k):
        first, rest = subset[0], subset[1:]
        for perm in permutations(rest):
            # second < last picks one of the two traversal directions
            if perm[0] < perm[-1]:
                out.append((first,) + perm)
    out.sort()
    return out


def enumerate_cycles(n: int) -> CycleCatalog:
    """Catalog of every cycle of K_n; empty for n < 3."""
    cycles = []
    for k in range(3, n + 1):
        cycles.extend(_make(n, vs) for vs in _cycles_of_length(n, k))
    return CycleCatalog(n, cycles)


@lru_cache(maxsize=None)
def catalog_for(n: int) -> CycleCatalog:
    """Shared catalog per n; catalogs are never mutated."""
    return enumerate_cycles(n)


def hamilton_ids(catalog: CycleCatalog) -> set[int]:
    return set(catalog.ids_of_length(catalog.n))


def hamilton_mask(catalog: CycleCatalog) -> int:
    return mask_of(catalog.ids_of_length(catalog.n))
