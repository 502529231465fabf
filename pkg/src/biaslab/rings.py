"""Diamond rings in K_n and the bad-ring Monte Carlo.

A spanning diamond ring is read off any of its Hamilton cycles: each diamond
occupies four consecutive positions (tip, x, y, tip') and adds the chords
tip-y and x-tip'. The two windows are separated by paths of g1, g2 >= 0
edges with g1 + g2 = n - 6. Swapping x and y inside either window gives the
four Hamilton cycles of the ring.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from biaslab.bias import BiasSet
from biaslab.cycles import CycleCatalog, canonical_cycle, catalog_for, edge_index, edge_list, iter_bits
from biaslab.labelling import EdgeLabelling, balanced_set, signed_vector
from biaslab.overlap import SizeGuardError

MAX_RING_N = 9


@dataclass(frozen=True)
class DiamondRing:
    n: int
    edges: int
    diamonds: tuple[tuple[int, int, int, int], tuple[int, int, int, int]]  # (tip, x, y, tip')
    paths: tuple[tuple[int, ...], tuple[int, ...]]  # tip' of one diamond ... tip of the other
    hamiltons: tuple[int, int, int, int] = field(compare=False)

    def diamond_edges(self, k: int) -> list[tuple[int, int]]:
        t, x, y, s = self.diamonds[k]
        return [(t, x), (t, y), (x, y), (x, s), (y, s)]

    def to_json(self) -> dict:
        return {
            "diamonds": [list(d) for d in self.diamonds],
            "paths": [list(p) for p in self.paths],
            "hamiltons": list(self.hamiltons),
        }


def expected_ring_count(n: int) -> int:
    return math.factorial(n) * (n - 5) // 16 if n >= 6 else 0


def enumerate_diamond_rings(n: int, catalog: CycleCatalog | None = None, max_n: int = MAX_RING_N) -> list[DiamondRing]:
    """Every n-vertex diamond ring subgraph of K_n once, sorted by Hamilton ids."""
    if n > max_n:
        raise SizeGuardError(f"ring enumeration is capped at n={max_n}")
    if n < 6:
        return []
    if catalog is None:
        catalog = catalog_for(n)
    found: dict[int, DiamondRing] = {}
    for hid in catalog.ids_of_length(n):
        seq = list(catalog[hid].vertices)
        base = catalog[hid].edges
        for i in range(n):
            for g1 in range(n - 5):
                j = (i + 3 + g1) % n
                w1 = tuple(seq[(i + d) % n] for d in range(4))
                w2 = tuple(seq[(j + d) % n] for d in range(4))
                mask = base
                for t, x, y, s in (w1, w2):
                    mask |= 1 << edge_index(t, y, n) | 1 << edge_index(x, s, n)
                if mask in found:
                    continue
                hams = []
                for f1, f2 in product((False, True), repeat=2):
                    s2 = list(seq)
                    if f1:
                        a, b = (i + 1) % n, (i + 2) % n
                        s2[a], s2[b] = s2[b], s2[a]
                    if f2:
                        a, b = (j + 1) % n, (j + 2) % n
                        s2[a], s2[b] = s2[b], s2[a]
                    hams.append(catalog.id_of(canonical_cycle(s2, n)))
                p1 = tuple(seq[(i + 3 + d) % n] for d in range(g1 + 1))
                p2 = tuple(seq[(j + 3 + d) % n] for d in range(n - 6 - g1 + 1))
                found[mask] = DiamondRing(n, mask, (w1, w2), (p1, p2), tuple(sorted(hams)))
    return sorted(found.values(), key=lambda r: r.hamiltons)


def hamilton_cycles_in(edges: int, n: int) -> list[tuple[int, ...]]:
    """Canonical vertex sequences of all Hamilton cycles of a graph on [n], by DFS."""
    adj = {v: [] for v in range(1, n + 1)}
    elist = edge_list(n)
    for e in iter_bits(edges):
        ed = elist[e]
        adj[ed.u].append(ed.v)
        adj[ed.v].append(ed.u)
    out = set()
    path = [1]
    used = {1}

    def dfs(v):
        if len(path) == n:
            if 1 in adj[v]:
                out.add(canonical_cycle(path, n).vertices)
            return
        for w in adj[v]:
            if w not in used:
                used.add(w)
                path.append(w)
                dfs(w)
                path.pop()
                used.discard(w)

    dfs(1)
    return sorted(out)


def ring_hamiltons(R: DiamondRing, catalog: CycleCatalog) -> tuple[int, int, int, int]:
    """The four Hamilton cycle ids of R, confirmed by exhaustive search inside R."""
    found = tuple(sorted(catalog.id_of(seq) for seq in hamilton_cycles_in(R.edges, R.n)))
    if len(found) != 4 or found != R.hamiltons:
        raise ValueError(f"malformed ring: {len(found)} Hamilton cycles")
    return found


def is_bad_ring(B: BiasSet, R: DiamondRing) -> bool:
    return sum(1 for h in R.hamiltons if h in B) == 3


def ring_dependency(R: DiamondRing, catalog: CycleCatalog) -> tuple[int, int, int, int] | None:
    """Signs c with sum c_i v_i = 0 over the signed vectors of R's Hamilton cycles."""
    vecs = [signed_vector(catalog[h]) for h in R.hamiltons]
    for signs in product((1, -1), repeat=3):
        c = (1,) + signs
        total: dict[int, int] = {}
        for ci, v in zip(c, vecs):
            for e, s in v.items():
                total[e] = total.get(e, 0) + ci * s
        if not any(total.values()):
            return c
    return None


def dependent_pairs(rings: list[DiamondRing]) -> int:
    """Unordered pairs of distinct rings that share a Hamilton cycle."""
    by_ham: dict[int, list[int]] = {}
    for k, R in enumerate(rings):
        for h in R.hamiltons:
            by_ham.setdefault(h, []).append(k)
    pairs = set()
    for ks in by_ham.values():
        for a in range(len(ks)):
            for b in range(a + 1, len(ks)):
                pairs.add((ks[a], ks[b]))
    return len(pairs)


def labelled_ring_check(L: EdgeLabelling, rings: list[DiamondRing]) -> bool:
    """True iff no ring has exactly three balanced Hamilton cycles under L."""
    B = balanced_set(L.graph, L)
    return not any(is_bad_ring(B, R) for R in rings)


# --- Monte Carlo ---------------------------------------------------------------


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


@dataclass
class McReport:
    n: int
    trials: int
    seed: int
    mean_bad: float
    expected: Fraction
    stderr: float | None
    fraction_positive: float
    ring_count: int
    values: list[int] | None = None

    @property
    def z_score(self) -> float | None:
        if not self.stderr:
            return None
        return (self.mean_bad - float(self.expected)) / self.stderr

    def to_json(self, include_values: bool = False) -> dict:
        out = {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "ring_count": self.ring_count,
            "mean_bad": self.mean_bad,
            "expected": f"{self.expected.numerator}/{self.expected.denominator}",
            "expected_float": float(self.expected),
            "stderr": self.stderr,
            "z_score": self.z_score,
            "fraction_positive": self.fraction_positive,
        }
        if include_values and self.values is not None:
            out["values"] = self.values
        return out


def monte_carlo(n: int, trials: int, seed: int, p: float = 0.5, threads: int = 1, max_n: int = MAX_RING_N) -> McReport:
    """Bad-ring counts X under independent p-coins on the Hamilton cycles.

    Trial t draws from its own Philox stream keyed by (seed, t), so results
    do not depend on ``threads``.
    """
    if not 6 <= n <= max_n:
        raise SizeGuardError(f"Monte Carlo needs 6 <= n <= {max_n}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    catalog = catalog_for(n)
    rings = enumerate_diamond_rings(n, catalog)
    hams = catalog.ids_of_length(n)
    quads = np.array([[h - hams.start for h in R.hamiltons] for R in rings], dtype=np.int64)

    def one(t: int) -> int:
        drawn = trial_rng(seed, t).random(len(hams)) < p
        return int(np.count_nonzero(drawn[quads].sum(axis=1) == 3))

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            values = list(pool.map(one, range(trials)))
    else:
        values = [one(t) for t in range(trials)]
    arr = np.array(values, dtype=np.float64)
    stderr = float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else None
    expected = Fraction(math.factorial(n) * (n - 5), 64)
    if p != 0.5:
        expected = Fraction(len(rings)) * 4 * Fraction(p) ** 3 * (1 - Fraction(p))
    return McReport(
        n,
        trials,
        seed,
        float(arr.mean()),
        expected,
        stderr,
        float(np.mean(arr > 0)),
        len(rings),
        values,
    )
