"""Group labellings of graphs on [n] and the biased graphs they induce.

Traversing edge uv from u to v contributes gamma(uv) when v > u and its
inverse otherwise; a cycle is balanced when the product is the identity.
Abelian labellability is decided exactly: B arises from an abelian
labelling iff no cycle outside B has its signed edge vector in the integer
lattice spanned by the vectors of B, and Z^E / lattice is then a witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, prod
from typing import Sequence, Union

import numpy as np

from biaslab.bias import BiasSet, SimpleGraph
from biaslab.cycles import Cycle, CycleCatalog, catalog_for, edge_index, iter_bits, mask_of
from biaslab.lattice import hermite_basis, homomorphism_kernel, in_lattice, quotient
from biaslab.overlap import overlap_vertex_count

DEFAULT_CYCLE_CAP = 10**6
DEFAULT_BRUTE_CAP = 10**7
DEFAULT_WITNESS_CAP = 10**8


class CapExceeded(ValueError):
    pass


# --- groups ------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianGroup:
    """Z^s + Z_q1 + ...; a modulus 0 is a copy of Z."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(q) for q in self.moduli))
        if any(q < 0 for q in self.moduli):
            raise ValueError("moduli must be non-negative")

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(v % q if q else v for v, q in zip(x, self.moduli))

    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def add(self, x, y) -> tuple[int, ...]:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x) -> tuple[int, ...]:
        return self.reduce([-a for a in x])

    def is_identity(self, x) -> bool:
        return not any(self.reduce(x))

    @property
    def finite(self) -> bool:
        return all(q > 0 for q in self.moduli)

    @property
    def order(self) -> int | None:
        return prod(self.moduli) if self.finite else None

    def elements(self) -> list[tuple[int, ...]]:
        if not self.finite:
            raise ValueError("infinite group")
        return list(itertools.product(*(range(q) for q in self.moduli)))

    def random_element(self, rng: np.random.Generator, spread: int = 3) -> tuple[int, ...]:
        return tuple(
            int(rng.integers(q)) if q else int(rng.integers(-spread, spread + 1)) for q in self.moduli
        )

    def to_finite_group(self) -> "FiniteGroup":
        els = self.elements()
        index = {e: i for i, e in enumerate(els)}
        table = [[index[self.add(a, b)] for b in els] for a in els]
        return FiniteGroup(table)

    def to_json(self) -> dict:
        return {"moduli": list(self.moduli)}


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group by Cayley table over elements 0..order-1."""

    table: tuple[tuple[int, ...], ...]
    identity_index: int = field(init=False)
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        T = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", T)
        k = len(T)
        if k == 0 or any(len(row) != k for row in T):
            raise ValueError("Cayley table must be square and non-empty")
        if any(not 0 <= x < k for row in T for x in row):
            raise ValueError("table entry out of range")
        ids = [e for e in range(k) if all(T[e][x] == x and T[x][e] == x for x in range(k))]
        if len(ids) != 1:
            raise ValueError("no two-sided identity")
        e = ids[0]
        inv = []
        for x in range(k):
            ys = [y for y in range(k) if T[x][y] == e and T[y][x] == e]
            if not ys:
                raise ValueError(f"element {x} has no inverse")
            inv.append(ys[0])
        for a in range(k):
            for b in range(k):
                ab = T[a][b]
                for c in range(k):
                    if T[ab][c] != T[a][T[b][c]]:
                        raise ValueError("table is not associative")
        object.__setattr__(self, "identity_index", e)
        object.__setattr__(self, "inverse", tuple(inv))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def identity(self) -> int:
        return self.identity_index

    def is_identity(self, x: int) -> bool:
        return x == self.identity_index

    def elements(self) -> list[int]:
        return list(range(self.order))

    def random_element(self, rng: np.random.Generator, spread: int = 0) -> int:
        return int(rng.integers(self.order))

    def to_json(self) -> dict:
        return {"cayley_table": [list(r) for r in self.table]}


def symmetric_group(k: int) -> FiniteGroup:
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    # (p * q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    return FiniteGroup(table)


def cyclic_group(q: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % q for b in range(q)] for a in range(q)])


Group = Union[AbelianGroup, FiniteGroup]


# --- labellings and sigma ----------------------------------------------------


@dataclass
class EdgeLabelling:
    graph: SimpleGraph
    group: Group
    gamma: dict[int, object]  # dense edge index -> group element

    def __post_init__(self):
        missing = [e for e in iter_bits(self.graph.edges) if e not in self.gamma]
        if missing:
            raise ValueError(f"edges {missing} are unlabelled")
        if isinstance(self.group, AbelianGroup):
            self.gamma = {e: self.group.reduce(x) for e, x in self.gamma.items()}

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "gamma": {str(e): (list(x) if isinstance(x, tuple) else x) for e, x in sorted(self.gamma.items())},
        }


def identity_labelling(G: SimpleGraph, group: Group) -> EdgeLabelling:
    return EdgeLabelling(G, group, {e: group.identity() for e in iter_bits(G.edges)})


def random_labelling(G: SimpleGraph, group: Group, rng: np.random.Generator, spread: int = 3) -> EdgeLabelling:
    return EdgeLabelling(G, group, {e: group.random_element(rng, spread) for e in iter_bits(G.edges)})


def signed_vector(C: Cycle) -> dict[int, int]:
    """+1 on edges the canonical traversal crosses upward (small to large)."""
    out = {}
    for u, v in C.edge_pairs():
        out[edge_index(u, v, C.n)] = 1 if v > u else -1
    return out


def _dense(sv: dict[int, int], positions: dict[int, int]) -> list[int]:
    vec = [0] * len(positions)
    for e, s in sv.items():
        vec[positions[e]] = s
    return vec


def sigma_of_sequence(seq: Sequence[int], L: EdgeLabelling, n: int):
    """sigma for an arbitrary traversal v_1 ... v_k v_1 of a cycle."""
    G = L.group
    k = len(seq)
    steps = []
    for i in range(k):
        u, v = seq[i], seq[(i + 1) % k]
        e = edge_index(u, v, n)
        if e not in L.gamma:
            raise ValueError(f"edge ({u}, {v}) is unlabelled")
        x = L.gamma[e]
        steps.append(x if v > u else (G.neg(x) if isinstance(G, AbelianGroup) else G.inverse[x]))
    acc = G.identity()
    for x in steps:
        acc = G.add(acc, x) if isinstance(G, AbelianGroup) else G.mul(acc, x)
    return acc


def sigma(C: Cycle, L: EdgeLabelling):
    return sigma_of_sequence(C.vertices, L, C.n)


def _cycle_ids(G: SimpleGraph, catalog: CycleCatalog, cap: int) -> list[int]:
    if overlap_vertex_count(G.n) > cap:
        raise CapExceeded(f"K_{G.n} has more than {cap} cycles")
    return catalog.cycles_within(G.edges)


def balanced_set(G: SimpleGraph, L: EdgeLabelling, cap: int = DEFAULT_CYCLE_CAP) -> BiasSet:
    cat = catalog_for(G.n)
    grp = L.group
    ids = [i for i in _cycle_ids(G, cat, cap) if grp.is_identity(sigma(cat[i], L))]
    return BiasSet(cat, mask_of(ids))


# --- abelian labellability ---------------------------------------------------


@dataclass
class LabellabilityDecision:
    labellable: bool
    group: AbelianGroup | None = None
    labelling: EdgeLabelling | None = None
    violating_cycle: int | None = None

    def to_json(self, catalog: CycleCatalog | None = None) -> dict:
        out: dict = {"labellable": self.labellable}
        if self.labellable:
            out["witness"] = self.labelling.to_json()
        else:
            out["violating_cycle"] = self.violating_cycle
            if catalog is not None:
                out["violating_cycle_vertices"] = list(catalog[self.violating_cycle].vertices)
        return out


def _edge_positions(G: SimpleGraph) -> dict[int, int]:
    return {e: k for k, e in enumerate(iter_bits(G.edges))}


def abelian_labellable(G: SimpleGraph, B: BiasSet, cap: int = DEFAULT_CYCLE_CAP) -> LabellabilityDecision:
    cat = catalog_for(G.n)
    if B.catalog.n != G.n:
        raise ValueError("graph and bias set have different n")
    ids = _cycle_ids(G, cat, cap)
    if B.members & ~mask_of(ids):
        raise ValueError("bias set contains a cycle that is not a cycle of G")
    pos = _edge_positions(G)
    m = len(pos)
    vec = {i: _dense(signed_vector(cat[i]), pos) for i in ids}
    gens = [vec[i] for i in ids if i in B]
    basis, pivots = hermite_basis(gens, m)
    for i in ids:
        if i not in B and in_lattice(vec[i], basis, pivots):
            return LabellabilityDecision(False, violating_cycle=i)
    qt = quotient(basis, m)
    keep = [i for i, d in enumerate(qt.moduli) if d != 1]
    group = AbelianGroup(tuple(qt.moduli[i] for i in keep))
    gamma = {}
    for e, k in pos.items():
        img = qt.image([int(j == k) for j in range(m)])
        gamma[e] = tuple(img[i] for i in keep)
    L = EdgeLabelling(G, group, gamma)
    if balanced_set(G, L, cap).members != B.members:
        raise AssertionError("witness labelling does not reproduce the bias set")
    return LabellabilityDecision(True, group, L)


def brute_force_labellable(
    G: SimpleGraph, B: BiasSet, group: Group, cap: int = DEFAULT_BRUTE_CAP
) -> bool:
    """Exhaustive search over every labelling E(G) -> group."""
    if isinstance(group, AbelianGroup):
        group = group.to_finite_group()
    pos = _edge_positions(G)
    m = len(pos)
    if group.order**m > cap:
        raise CapExceeded(f"{group.order}^{m} labellings exceed the cap {cap}")
    cat = catalog_for(G.n)
    ids = _cycle_ids(G, cat, DEFAULT_CYCLE_CAP)
    # each cycle as (edge position, upward?) steps in canonical order
    walks = []
    for i in ids:
        steps = [(pos[edge_index(u, v, G.n)], v > u) for u, v in cat[i].edge_pairs()]
        walks.append((steps, i in B))
    T, inv, e = group.table, group.inverse, group.identity_index
    for labels in itertools.product(range(group.order), repeat=m):
        for steps, want in walks:
            acc = e
            for k, up in steps:
                acc = T[acc][labels[k] if up else inv[labels[k]]]
            if (acc == e) != want:
                break
        else:
            return True
    return False


# --- polynomials and zero patterns -------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Sparse integer polynomial; a monomial is a sorted tuple of variable indices."""

    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_dict(cls, d: dict) -> "Polynomial":
        return cls(tuple(sorted((tuple(sorted(m)), c) for m, c in d.items() if c)))

    @property
    def degree(self) -> int:
        return max((len(m) for m, _ in self.terms), default=0)

    @property
    def variables(self) -> set[int]:
        return {x for m, _ in self.terms for x in m}

    def evaluate(self, point, q: int | None = None):
        """Value at ``point`` (sequence or mapping over variable indices), over
        the rationals when q is None and over F_q otherwise."""
        total = 0
        for mono, c in self.terms:
            t = c
            for x in mono:
                try:
                    t = t * point[x]
                except (KeyError, IndexError):
                    raise ValueError(f"no value for variable {x}") from None
                if q is not None:
                    t %= q
            total += t
        return total % q if q is not None else total

    def rename(self, mapping: dict[int, int]) -> "Polynomial":
        return Polynomial.from_dict({tuple(mapping[x] for x in m): c for m, c in self.terms})


def cycle_polynomial(C: Cycle) -> Polynomial:
    """Product of X_e over descending steps minus product over ascending steps."""
    down, up = [], []
    for u, v in C.edge_pairs():
        (down if u > v else up).append(edge_index(u, v, C.n))
    return Polynomial.from_dict({tuple(down): 1, tuple(up): -1})


@dataclass
class ZeroPatternSystem:
    polynomials: list[Polynomial]
    num_vars: int
    degree: int | None = None  # declared degree bound; defaults to the true maximum

    def __post_init__(self):
        true_deg = max((p.degree for p in self.polynomials), default=0)
        if self.degree is None:
            self.degree = true_deg
        elif self.degree < true_deg:
            raise ValueError("declared degree below the actual degree")
        if any(x >= self.num_vars for p in self.polynomials for x in p.variables):
            raise ValueError("polynomial uses a variable outside the system")


def graph_system(G: SimpleGraph, cap: int = DEFAULT_CYCLE_CAP) -> tuple[ZeroPatternSystem, list[int]]:
    """f_C for every cycle of G over G's own edge variables, degree bound D = n."""
    cat = catalog_for(G.n)
    ids = _cycle_ids(G, cat, cap)
    pos = _edge_positions(G)
    polys = [cycle_polynomial(cat[i]).rename(pos) for i in ids]
    return ZeroPatternSystem(polys, len(pos), degree=max(G.n, 1)), ids


@dataclass
class ZeroPatternReport:
    q: int
    M: int
    N: int
    D: int
    patterns: list[tuple[int, ...]]
    rbg_bound: int
    comparison_bound: int

    @property
    def count(self) -> int:
        return len(self.patterns)

    @property
    def exceeds_rbg_bound(self) -> bool:
        return self.count > self.rbg_bound

    def to_json(self) -> dict:
        return {
            "field": f"F_{self.q}",
            "M": self.M,
            "N": self.N,
            "D": self.D,
            "count": self.count,
            "bound_MD_choose_N": self.rbg_bound,
            "bound_MD_plus_N_choose_N": self.comparison_bound,
            "exceeds_MD_choose_N": self.exceeds_rbg_bound,
            "within_MD_plus_N_choose_N": self.count <= self.comparison_bound,
            "patterns": [list(p) for p in self.patterns],
        }


def zero_patterns(system: ZeroPatternSystem, q: int, cap: int = DEFAULT_WITNESS_CAP, chunk: int = 1 << 16) -> ZeroPatternReport:
    """Every zero pattern over F_q, by exhaustive evaluation at all q^N witnesses."""
    if q < 2 or any(q % d == 0 for d in range(2, int(q**0.5) + 1)):
        raise ValueError(f"{q} is not prime")
    N, M = system.num_vars, len(system.polynomials)
    total = q**N
    if total > cap:
        raise CapExceeded(f"{q}^{N} witnesses exceed the cap {cap}")
    seen: set[tuple[int, ...]] = set()
    powers = q ** np.arange(N, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        W = (idx[:, None] // powers[None, :]) % q
        nonzero = np.zeros((len(idx), M), dtype=bool)
        for i, poly in enumerate(system.polynomials):
            val = np.zeros(len(idx), dtype=np.int64)
            for mono, c in poly.terms:
                t = np.full(len(idx), c % q, dtype=np.int64)
                for x in mono:
                    t = (t * W[:, x]) % q
                val = (val + t) % q
            nonzero[:, i] = val != 0
        for row in np.unique(nonzero, axis=0):
            seen.add(tuple(int(i) for i in np.flatnonzero(row)))
    D = system.degree
    return ZeroPatternReport(q, M, N, D, sorted(seen), comb(M * D, N), comb(M * D + N, N))


def abelian_pattern_decomposition(G: SimpleGraph, L: EdgeLabelling, cap: int = DEFAULT_CYCLE_CAP) -> list[BiasSet]:
    """Sets P_1..P_m (m = |E(G)|) whose union is the unbalanced cycles.

    The subgroup generated by the labels is presented as Z/d_1 + ... + Z/d_m
    via a Smith decomposition of the kernel of Z^E -> group; P_i holds the
    cycles whose image has a nonzero i-th coordinate. Nontrivial coordinates
    come first, trivial padding after.
    """
    if not isinstance(L.group, AbelianGroup):
        raise ValueError("pattern decomposition needs an abelian labelling")
    cat = catalog_for(G.n)
    ids = _cycle_ids(G, cat, cap)
    pos = _edge_positions(G)
    m = len(pos)
    edges = list(pos)
    images = [list(L.gamma[e]) for e in edges]
    kernel = homomorphism_kernel(images, L.group.moduli)
    qt = quotient(kernel, m)
    order = sorted(range(m), key=lambda i: (qt.moduli[i] == 1, i))
    masks = [0] * m
    for c in ids:
        img = qt.image(_dense(signed_vector(cat[c]), pos))
        for slot, i in enumerate(order):
            if img[i]:
                masks[slot] |= 1 << c
    parts = [BiasSet(cat, mk) for mk in masks]
    union = 0
    for mk in masks:
        union |= mk
    unbalanced = mask_of(ids) & ~balanced_set(G, L, cap).members
    if union != unbalanced:
        raise AssertionError("pattern union differs from the unbalanced cycles")
    return parts
