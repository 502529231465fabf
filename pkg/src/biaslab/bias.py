"""Bias sets over the cycle catalog: validation, scarcity, stable sets, counting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from biaslab.cycles import CycleCatalog, enumerate_cycles, hamilton_mask, iter_bits, mask_of, num_edges
from biaslab.overlap import OverlapGraph, SizeGuardError, build_overlap, theta_triples


@dataclass(frozen=True)
class BiasSet:
    catalog: CycleCatalog
    members: int = 0

    @classmethod
    def from_ids(cls, catalog: CycleCatalog, ids: Iterable[int]) -> "BiasSet":
        ids = list(ids)
        if any(not 0 <= i < len(catalog) for i in ids):
            raise ValueError("cycle id out of range for this catalog")
        return cls(catalog, mask_of(ids))

    def ids(self) -> list[int]:
        return list(iter_bits(self.members))

    def __contains__(self, i: int) -> bool:
        return bool(self.members >> i & 1)

    def __len__(self) -> int:
        return self.members.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiasSet):
            return NotImplemented
        return self.catalog.n == other.catalog.n and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.catalog.n, self.members))

    def to_json(self) -> dict:
        return {
            "ids": self.ids(),
            "cycles": [list(self.catalog[i].vertices) for i in self],
        }


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: int  # bitset over dense edge indices

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, (1 << num_edges(n)) - 1)

    @property
    def edge_count(self) -> int:
        return self.edges.bit_count()


def _check_same_n(B: BiasSet, omega: OverlapGraph) -> None:
    if B.catalog.n != omega.n:
        raise ValueError("bias set and overlap graph have different n")


def is_biased_clique(B: BiasSet, omega: OverlapGraph) -> bool:
    """No theta triple meets B in exactly two cycles."""
    _check_same_n(B, omega)
    nbr = omega.nbr_masks
    for a in B:
        for b in iter_bits(nbr[a] & B.members):
            if b > a and omega.third(a, b) not in B:
                return False
    return True


def is_biased_graph(G: SimpleGraph, B: BiasSet) -> bool:
    """Theta property for (G, B), checked directly on pairs of members."""
    cat = B.catalog
    if cat.n != G.n:
        raise ValueError("graph and bias set have different n")
    cyc = cat.cycles
    ids = B.ids()
    for i in ids:
        if cyc[i].edges & ~G.edges:
            raise ValueError(f"balanced cycle {cyc[i].vertices} uses a non-edge of G")
    for x, i in enumerate(ids):
        ci = cyc[i]
        for j in ids[x + 1 :]:
            cj = cyc[j]
            ce = (ci.edges & cj.edges).bit_count()
            if ce and (ci.vmask & cj.vmask).bit_count() == ce + 1:
                if cat.id_by_edges(ci.edges ^ cj.edges) not in B:
                    return False
    return True


def spanned_edges(B: BiasSet, omega: OverlapGraph) -> int:
    _check_same_n(B, omega)
    nbr = omega.nbr_masks
    return sum((nbr[a] & B.members).bit_count() for a in B) // 2


def is_scarce(B: BiasSet, omega: OverlapGraph) -> bool:
    return spanned_edges(B, omega) == 0


# --- maximum stable sets ---------------------------------------------------


@dataclass
class StableSetResult:
    size: int
    witness: list[int]
    optima: list[list[int]] | None = None
    complete: bool = True  # False when the optima cap cut enumeration short

    @property
    def unique(self) -> bool | None:
        if self.optima is None or not self.complete:
            return None
        return len(self.optima) == 1


DEFAULT_OPTIMA_CAP = 10_000


def max_stable_set(
    omega: OverlapGraph, mode: str = "one_witness", cap: int = DEFAULT_OPTIMA_CAP
) -> StableSetResult:
    """Exact maximum stable set of the overlap graph.

    Bitset branch and bound on the complement graph (stable sets of omega are
    cliques there), with greedy colouring bounds. A colour class is a clique
    of omega, so the number of classes bounds the stable set from above.
    Modes: ``size_only``, ``one_witness``, ``all_optima`` (up to ``cap``).
    """
    if mode not in ("size_only", "one_witness", "all_optima"):
        raise ValueError(f"unknown mode {mode!r}")
    N = omega.vertex_count
    if N == 0:
        return StableSetResult(0, [], [[]] if mode == "all_optima" else None)
    deg = omega.degrees()
    # lowest-degree vertices of omega (highest complement degree) first; ties by id
    order = sorted(range(N), key=lambda v: (int(deg[v]), v))
    pos = {v: i for i, v in enumerate(order)}
    full = (1 << N) - 1
    nbr = omega.nbr_masks
    conflict = []  # conflict[i]: omega-neighbours of relabelled vertex i, relabelled
    for v in order:
        m = 0
        for u in iter_bits(nbr[v]):
            m |= 1 << pos[u]
        conflict.append(m)
    collect = False
    best = [0]
    best_sets: list[int] = []
    overflow = [False]

    def colour(P: int) -> tuple[list[int], list[int]]:
        verts, cols = [], []
        U, k = P, 0
        while U:
            k += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= conflict[v]  # class stays a clique of omega
                Q &= ~low
                U &= ~low
                verts.append(v)
                cols.append(k)
        return verts, cols

    def expand(cur: int, size: int, P: int) -> None:
        if P == 0:
            if size > best[0]:
                best[0] = size
                best_sets[:] = [cur]
            elif collect and size == best[0]:
                if len(best_sets) >= cap:
                    overflow[0] = True
                else:
                    best_sets.append(cur)
            return
        verts, cols = colour(P)
        for i in range(len(verts) - 1, -1, -1):
            bound = size + cols[i]
            if bound < best[0] or (bound == best[0] and not collect):
                return
            v = verts[i]
            expand(cur | 1 << v, size + 1, P & ~conflict[v] & ~(1 << v))
            P &= ~(1 << v)

    # seed with a greedy stable set so early pruning bites
    greedy, avail = 0, full
    while avail:
        low = avail & -avail
        v = low.bit_length() - 1
        greedy |= low
        avail &= ~conflict[v] & ~low
    best[0] = greedy.bit_count()
    best_sets.append(greedy)
    expand(0, 0, full)
    if mode == "all_optima":
        # second pass keeps every set of the optimum size
        collect = True
        best_sets.clear()
        expand(0, 0, full)

    def unlabel(m: int) -> list[int]:
        return sorted(order[i] for i in iter_bits(m))

    witness = unlabel(best_sets[0])
    optima = sorted(unlabel(m) for m in best_sets) if collect else None
    if mode == "size_only":
        witness = []
    return StableSetResult(best[0], witness, optima, not overflow[0])


# --- exact counting of theta-valid bias sets ---------------------------------


def _triples_by_member(triples: Iterable[tuple[int, int, int]], N: int) -> list[list[tuple[int, int]]]:
    by = [[] for _ in range(N)]
    for a, b, c in triples:
        by[a].append((b, c))
        by[b].append((a, c))
        by[c].append((a, b))
    return by


def iter_theta_valid(ids: list[int], triples: list[tuple[int, int, int]], N: int) -> Iterator[int]:
    """Every subset B of ``ids`` meeting no triple in exactly two members.

    Backtracks over ``ids`` in the given order. A decided pair in a triple
    forces the third cycle: two members force it in, a member and a
    non-member force it out.
    """
    by = _triples_by_member(triples, N)
    state = [-1] * N
    trail: list[int] = []

    def assign(c: int, val: int) -> bool:
        queue = [(c, val)]
        while queue:
            x, v = queue.pop()
            sx = state[x]
            if sx != -1:
                if sx != v:
                    return False
                continue
            state[x] = v
            trail.append(x)
            for y, z in by[x]:
                sy, sz = state[y], state[z]
                if sy == -1 and sz == -1:
                    continue
                if sy != -1 and sz != -1:
                    if v + sy + sz == 2:
                        return False
                    continue
                known, free = (sy, z) if sy != -1 else (sz, y)
                if v == 1 and known == 1:
                    queue.append((free, 1))
                elif v + known == 1:
                    queue.append((free, 0))
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            state[trail.pop()] = -1

    def rec(k: int) -> Iterator[int]:
        while k < len(ids) and state[ids[k]] != -1:
            k += 1
        if k == len(ids):
            m = 0
            for i in ids:
                if state[i] == 1:
                    m |= 1 << i
            yield m
            return
        c = ids[k]
        for val in (0, 1):
            mark = len(trail)
            if assign(c, val):
                yield from rec(k + 1)
            undo(mark)

    yield from rec(0)


def iter_biased_cliques(omega: OverlapGraph) -> Iterator[int]:
    """Member bitsets of every biased clique of K_n, in backtracking order."""
    triples = list(theta_triples(omega))
    return iter_theta_valid(list(range(omega.vertex_count)), triples, omega.vertex_count)


def count_biased_cliques(n: int, max_n: int = 5, omega: OverlapGraph | None = None) -> int:
    if n > max_n:
        raise SizeGuardError(f"exact clique counting is capped at n={max_n}")
    if n < 3:
        return 1
    if omega is None:
        omega = build_overlap(enumerate_cycles(n))
    return sum(1 for _ in iter_biased_cliques(omega))


def count_biased_graphs(n: int, max_n: int = 4) -> int:
    """Number of simple biased graphs (G, B) with V(G) = [n]."""
    if n > max_n:
        raise SizeGuardError(f"exact biased-graph counting is capped at n={max_n}")
    m = num_edges(n)
    if n < 3:
        return 1 << m
    omega = build_overlap(enumerate_cycles(n))
    cat = omega.catalog
    triples = list(theta_triples(omega))
    total = 0
    for g in range(1 << m):
        ids = cat.cycles_within(g)
        inside = mask_of(ids)
        sub = [t for t in triples if all(inside >> x & 1 for x in t)]
        total += sum(1 for _ in iter_theta_valid(ids, sub, len(cat)))
    return total


# --- sampling ----------------------------------------------------------------


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; identical streams on every platform."""
    return np.random.Generator(np.random.Philox(seed))


def hamilton_coin_mask(catalog: CycleCatalog, p: float, rng: np.random.Generator) -> int:
    hams = catalog.ids_of_length(catalog.n)
    draws = rng.random(len(hams)) < p
    return mask_of(i for i, keep in zip(hams, draws.tolist()) if keep)


def sample_bias(
    catalog: CycleCatalog,
    model: str = "hamilton_coin",
    p: float = 0.5,
    seed: int = 0,
    omega: OverlapGraph | None = None,
) -> BiasSet:
    """Random biased clique: a p-coin per Hamilton cycle, or a greedy maximal
    stable set grown along a random id order."""
    rng = make_rng(seed)
    if model == "hamilton_coin":
        return BiasSet(catalog, hamilton_coin_mask(catalog, p, rng))
    if model == "greedy_stable":
        if omega is None:
            omega = build_overlap(catalog)
        nbr = omega.nbr_masks
        members = 0
        for i in rng.permutation(len(catalog)).tolist():
            if not nbr[i] & members:
                members |= 1 << i
        return BiasSet(catalog, members)
    raise ValueError(f"unknown model {model!r}")


def random_scarce_set(omega: OverlapGraph, rng: np.random.Generator, keep: float = 0.5) -> BiasSet:
    """A greedy maximal stable set along a random order, thinned by keep-coins."""
    nbr = omega.nbr_masks
    members = 0
    for i in rng.permutation(omega.vertex_count).tolist():
        if not nbr[i] & members:
            members |= 1 << i
    thinned = mask_of(i for i in iter_bits(members) if rng.random() < keep)
    return BiasSet(omega.catalog, thinned)


def hamilton_set(catalog: CycleCatalog) -> BiasSet:
    return BiasSet(catalog, hamilton_mask(catalog))
