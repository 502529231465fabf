"""The overlap graph on the cycles of K_n.

Two distinct cycles are adjacent when some theta subgraph of K_n contains
both of them. That happens exactly when their common edges form a single
path with at least one edge and they share no vertex off that path. In
counts: ``shared_edges >= 1`` and ``shared_vertices == shared_edges + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from math import factorial
from typing import Iterator

import numpy as np

from biaslab.cycles import (
    Cycle,
    CycleCatalog,
    cycle_count_by_length,
    cycle_from_edges,
    edge_index,
)

DEFAULT_MAX_N = 9


class SizeGuardError(ValueError):
    """Requested construction is beyond the configured size cap."""


def cycles_adjacent(c1: Cycle, c2: Cycle) -> bool:
    if c1.n != c2.n:
        raise ValueError("cycles come from different complete graphs")
    if c1.vertices == c2.vertices:
        raise ValueError("a cycle is not adjacent to itself")
    ce = (c1.edges & c2.edges).bit_count()
    cv = (c1.vmask & c2.vmask).bit_count()
    return ce >= 1 and cv == ce + 1


def third_cycle(c1: Cycle, c2: Cycle) -> Cycle:
    """The remaining cycle of the theta subgraph formed by two adjacent cycles."""
    if not cycles_adjacent(c1, c2):
        raise ValueError(f"{c1.vertices} and {c2.vertices} are not adjacent")
    return cycle_from_edges(c1.edges ^ c2.edges, c1.n)


@dataclass
class OverlapGraph:
    """Overlap graph in compressed row form over catalog ids."""

    catalog: CycleCatalog
    offsets: np.ndarray  # int64, length V + 1
    neighbors: np.ndarray  # uint32, length 2E, each row sorted
    edge_count: int = field(init=False)

    def __post_init__(self):
        self.edge_count = int(len(self.neighbors)) // 2

    @property
    def n(self) -> int:
        return self.catalog.n

    @property
    def vertex_count(self) -> int:
        return len(self.catalog)

    def neighbors_of(self, i: int) -> np.ndarray:
        return self.neighbors[self.offsets[i] : self.offsets[i + 1]]

    def degree(self, i: int) -> int:
        return int(self.offsets[i + 1] - self.offsets[i])

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def nbr_masks(self) -> list[int]:
        """Neighbourhood of each vertex as an int bitset over ids."""
        out = []
        for i in range(self.vertex_count):
            m = 0
            for j in self.neighbors_of(i).tolist():
                m |= 1 << j
            out.append(m)
        return out

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.nbr_masks[i] >> j & 1)

    def third(self, i: int, j: int) -> int:
        """Id of the third cycle of the theta through adjacent ids i, j."""
        cyc = self.catalog.cycles
        k = self.catalog.id_by_edges(cyc[i].edges ^ cyc[j].edges)
        if k is None or not self.adjacent(i, j):
            raise ValueError(f"ids {i} and {j} are not adjacent")
        return k

    def __eq__(self, other) -> bool:
        if not isinstance(other, OverlapGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.neighbors, other.neighbors)
        )


def _csr(rows: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    offsets = np.zeros(len(rows) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(r) for r in rows])
    flat = [j for r in rows for j in r]
    return offsets, np.asarray(flat, dtype=np.uint32)


def _pairwise_rows(catalog: CycleCatalog) -> list[list[int]]:
    N = len(catalog)
    if catalog.n > 11:
        raise SizeGuardError("pairwise method packs edge sets into 64 bits (n <= 11)")
    E = np.array([c.edges for c in catalog], dtype=np.uint64)
    V = np.array([c.vmask for c in catalog], dtype=np.uint64)
    rows: list[list[int]] = [[] for _ in range(N)]
    for i in range(N):
        ce = np.bitwise_count(E[i] & E[i + 1 :])
        cv = np.bitwise_count(V[i] & V[i + 1 :])
        hits = np.nonzero((ce >= 1) & (cv == ce + 1))[0] + (i + 1)
        for j in hits.tolist():
            rows[i].append(j)
            rows[j].append(i)
    for r in rows:
        r.sort()
    return rows


def _extension_rows(catalog: CycleCatalog) -> list[list[int]]:
    """Neighbours of C = a subpath P of C (>= 1 edge) closed up by a new path
    whose interior avoids V(C)."""
    n = catalog.n
    eidx = [[0] * (n + 1) for _ in range(n + 1)]
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if u != v:
                eidx[u][v] = 1 << edge_index(u, v, n)
    rows: list[list[int]] = []
    for c in catalog:
        vs = c.vertices
        k = len(vs)
        outside = [v for v in range(1, n + 1) if v not in vs]
        closers = []  # interior sequences for the closing path, with their edge masks
        for m in range(0, len(outside) + 1):
            for seq in permutations(outside, m):
                inner = 0
                for a, b in zip(seq, seq[1:]):
                    inner |= eidx[a][b]
                closers.append((seq, inner))
        nbrs = []
        for i in range(k):
            pmask = 0
            for L in range(1, k):
                pmask |= eidx[vs[(i + L - 1) % k]][vs[(i + L) % k]]
                a, b = vs[i], vs[(i + L) % k]
                for seq, inner in closers:
                    if seq:
                        qmask = inner | eidx[b][seq[0]] | eidx[seq[-1]][a]
                    elif 2 <= L <= k - 2:
                        qmask = eidx[a][b]
                    else:
                        continue
                    nbrs.append(catalog.id_by_edges(pmask | qmask))
        nbrs.sort()
        rows.append(nbrs)
    return rows


def build_overlap(
    catalog: CycleCatalog, method: str = "pairwise", max_n: int = DEFAULT_MAX_N
) -> OverlapGraph:
    """Build the overlap graph; ``pairwise`` and ``extension`` give identical graphs."""
    if catalog.n > max_n:
        raise SizeGuardError(f"n={catalog.n} exceeds the overlap-graph cap {max_n}")
    if method == "pairwise":
        rows = _pairwise_rows(catalog)
    elif method == "extension":
        rows = _extension_rows(catalog)
    else:
        raise ValueError(f"unknown method {method!r}")
    offsets, nbrs = _csr(rows)
    return OverlapGraph(catalog, offsets, nbrs)


def theta_triples(omega: OverlapGraph) -> Iterator[tuple[int, int, int]]:
    """Every theta triple once, as increasing ids, in lexicographic order."""
    cyc = omega.catalog.cycles
    by_edges = omega.catalog.id_by_edges
    for a in range(omega.vertex_count):
        ea = cyc[a].edges
        for b in omega.neighbors_of(a).tolist():
            if b <= a:
                continue
            c = by_edges(ea ^ cyc[b].edges)
            if c > b:
                yield (a, b, c)


# --- S_n and the vertex-count bounds ---------------------------------------

_E_TERMS = 60
E_LOWER = sum(Fraction(1, factorial(k)) for k in range(_E_TERMS))
# tail sum_{k >= m} 1/k! < 2/m!
E_UPPER = E_LOWER + Fraction(2, factorial(_E_TERMS))


@dataclass
class OverlapStats:
    n: int
    vertex_count: int
    s_n: Fraction
    checks: dict[str, bool]
    edge_count: int | None = None

    @property
    def bounds_ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "s_n": f"{self.s_n.numerator}/{self.s_n.denominator}",
            "s_n_float": float(self.s_n),
            "checks": self.checks,
            "bounds_ok": self.bounds_ok,
        }


def overlap_vertex_count(n: int) -> int:
    return sum(cycle_count_by_length(n, k) for k in range(3, n + 1))


def compute_sn_and_bounds(n: int, omega: OverlapGraph | None = None) -> OverlapStats:
    """S_n exactly, plus the two-sided bounds on S_n and on |V(Omega_n)|.

    e enters only through the rational enclosure [E_LOWER, E_UPPER], always
    on the side that makes each check harder, so a True flag is rigorous.
    """
    if n < 3:
        raise ValueError("S_n is defined for n >= 3")
    s_n = sum(Fraction(1, factorial(k) * (n - k)) for k in range(n - 2))
    vc = overlap_vertex_count(n)
    if Fraction(factorial(n), 2) * s_n != vc:
        raise AssertionError("vertex count disagrees with (n!/2) S_n")
    f = Fraction(factorial(n - 1))
    checks = {
        "sn_lower": E_UPPER / n < s_n,
        "sn_upper": s_n < E_LOWER / n + Fraction(5, n * n),
        "vertex_lower": E_UPPER / 2 * f < vc,
        "vertex_upper": vc < 2 * f,
    }
    edge_count = None
    if omega is not None:
        if omega.n != n:
            raise ValueError("overlap graph order mismatch")
        edge_count = omega.edge_count
    return OverlapStats(n, vc, s_n, checks, edge_count)
