"""Container algorithm on the overlap graph.

Starting from (S, A) = (empty, all cycles), each step looks at the pivot, the
member of A with the most neighbours inside A (smallest id on ties):

* ``|A| <= a``: stop;
* pivot in K: add it to S and delete its neighbours from A (the pivot stays);
* otherwise: delete the pivot from A.

The fixed point gives the fingerprint S and the container A. For a stable
set B run with K = B, B lies inside its container, and running again with
K = fingerprint reproduces the same container.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from biaslab.cycles import iter_bits
from biaslab.overlap import OverlapGraph

PRECISION_BITS = 128


def _as_members(x) -> int:
    return x if isinstance(x, int) else x.members


def _certified_floor(f) -> int:
    """floor of a real given as an mpmath interval expression; precision grows
    until both interval ends agree."""
    prec = PRECISION_BITS
    iv = mpmath.iv
    while True:
        saved = iv.prec
        iv.prec = prec
        try:
            v = f(iv)
            lo, hi = math.floor(v.a), math.floor(v.b)
        finally:
            iv.prec = saved
        if lo == hi:
            return lo
        prec *= 2
        if prec > 1 << 14:
            # value is an exact integer to within 2^-16384; treat it as one
            return hi


@dataclass(frozen=True)
class ContainerParams:
    n: int
    alpha: mpmath.mpf
    s: mpmath.mpf
    a: mpmath.mpf
    a_floor: int  # |A| > a  iff  |A| > a_floor
    s_floor: int
    overrides: frozenset = field(default_factory=frozenset)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alpha": mpmath.nstr(self.alpha, 20),
            "s": mpmath.nstr(self.s, 20),
            "a": mpmath.nstr(self.a, 20),
            "a_floor": self.a_floor,
            "s_floor": self.s_floor,
            "overrides": sorted(self.overrides),
        }


def container_params(n: int, a=None, s=None, alpha=None) -> ContainerParams:
    """alpha = 2 sqrt(log n / n), s = 4(n-1)!/sqrt(n log n),
    a = (1 + alpha)(n-1)!/2, binary logs. Overrides are taken as exact rationals."""
    if n < 3:
        raise ValueError("container parameters need n >= 3")
    fact = math.factorial(n - 1)

    def alpha_of(ctx):
        return 2 * ctx.sqrt((ctx.log(n) / ctx.log(2)) / n)

    def s_of(ctx):
        return 4 * ctx.mpf(fact) / ctx.sqrt(n * (ctx.log(n) / ctx.log(2)))

    def a_of(ctx):
        return (1 + alpha_of(ctx)) * ctx.mpf(fact) / 2

    overrides = set()
    with mpmath.workprec(PRECISION_BITS):
        if alpha is None:
            alpha_v = alpha_of(mpmath.mp)
        else:
            overrides.add("alpha")
            fal = Fraction(alpha)
            alpha_v = mpmath.mpf(fal.numerator) / fal.denominator
        if s is None:
            s_v, s_floor = s_of(mpmath.mp), _certified_floor(s_of)
        else:
            overrides.add("s")
            fs = Fraction(s)
            s_v, s_floor = mpmath.mpf(fs.numerator) / fs.denominator, math.floor(fs)
        if a is None:
            a_v, a_floor = a_of(mpmath.mp), _certified_floor(a_of)
        else:
            overrides.add("a")
            fa = Fraction(a)
            a_v, a_floor = mpmath.mpf(fa.numerator) / fa.denominator, math.floor(fa)
    return ContainerParams(n, alpha_v, s_v, a_v, a_floor, s_floor, frozenset(overrides))


def select_pivot(A, omega: OverlapGraph) -> int:
    """Member of A of maximum degree in the induced subgraph; smallest id on ties."""
    A = _as_members(A)
    if not A:
        raise ValueError("pivot of an empty set")
    nbr = omega.nbr_masks
    best, best_deg = -1, -1
    for v in iter_bits(A):
        d = (nbr[v] & A).bit_count()
        if d > best_deg:
            best, best_deg = v, d
    return best


def container_step(S, A, K, params: ContainerParams, omega: OverlapGraph) -> tuple[int, int]:
    S, A, K = _as_members(S), _as_members(A), _as_members(K)
    if A.bit_count() <= params.a_floor:
        return S, A
    pivot = select_pivot(A, omega)
    if K >> pivot & 1:
        return S | 1 << pivot, A & ~omega.nbr_masks[pivot]
    return S, A & ~(1 << pivot)


@dataclass
class ContainerTrace:
    states: list[tuple[int, int]]  # (S_i, A_i) for i = 0..i0
    i0: int
    fingerprint: int
    container: int
    trivial: bool  # |V(omega)| <= a, so the algorithm stopped at step 0

    def summary(self) -> dict:
        return {
            "i0": self.i0,
            "fingerprint_size": self.fingerprint.bit_count(),
            "container_size": self.container.bit_count(),
            "trivial": self.trivial,
            "a_sizes": [a.bit_count() for _, a in self.states],
        }

    def to_json(self, full: bool = False) -> dict:
        out = self.summary()
        if full:
            out["fingerprint"] = list(iter_bits(self.fingerprint))
            out["container"] = list(iter_bits(self.container))
            out["states"] = [[list(iter_bits(s)), list(iter_bits(a))] for s, a in self.states]
        return out


def run_containers(B, omega: OverlapGraph, params: ContainerParams, keep_states: bool = True) -> ContainerTrace:
    """Iterate the step from (empty, V(omega)) with K = B until nothing changes.

    Induced degrees are maintained incrementally; the pivot is the first
    argmax, which is the smallest id among the maximum-degree members.
    """
    K = _as_members(B)
    N = omega.vertex_count
    offsets, nbrs = omega.offsets, omega.neighbors
    deg = np.diff(offsets).astype(np.int64)
    alive = np.ones(N, dtype=bool)
    S, A = 0, (1 << N) - 1
    size = N
    states = [(S, A)]
    i0 = 0
    while size > params.a_floor and size > 0:
        pivot = int(np.argmax(np.where(alive, deg, -1)))
        if K >> pivot & 1:
            row = nbrs[offsets[pivot] : offsets[pivot + 1]]
            removed = row[alive[row]]
            newS = S | 1 << pivot
        else:
            removed = np.array([pivot], dtype=np.uint32)
            newS = S
        if newS == S and len(removed) == 0:
            break
        for x in removed.tolist():
            A &= ~(1 << x)
            alive[x] = False
            deg[nbrs[offsets[x] : offsets[x + 1]]] -= 1
        size -= len(removed)
        S = newS
        i0 += 1
        if keep_states:
            states.append((S, A))
        if len(removed) == 0:
            # pivot in K with no neighbours left in A: f is now constant
            break
    if not keep_states:
        states = [(S, A)]
    return ContainerTrace(states, i0, S, A, trivial=(N <= params.a_floor))


def fingerprint_container(B, omega: OverlapGraph, params: ContainerParams) -> tuple[int, int]:
    t = run_containers(B, omega, params, keep_states=False)
    return t.fingerprint, t.container


def check_container(B, omega: OverlapGraph, params: ContainerParams) -> dict[str, bool]:
    """The properties a stable set must have against its own container."""
    K = _as_members(B)
    first = run_containers(K, omega, params, keep_states=False)
    again = run_containers(first.fingerprint, omega, params, keep_states=False)
    return {
        "fingerprint_in_set": first.fingerprint & ~K == 0,
        "set_in_container": K & ~first.container == 0,
        "container_reproduced": again.container == first.container,
        "fingerprint_reproduced": again.fingerprint == first.fingerprint,
    }
