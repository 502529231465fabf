"""Compression of biased cliques to scarce ones, and the matching inverse.

A theta triple (C1, C2, C3), ids increasing, always has C1 among the short
cycles (length <= floor(2(n+1)/3)). Compression deletes C1 and C3 from
every triple lying wholly inside B. Given the compressed set and B's short
cycles, B is rebuilt by scanning ids in order: a long cycle belongs to B if
it survived compression or closes a triple whose two smaller cycles are
already in B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from biaslab.bias import BiasSet, is_biased_clique, is_scarce
from biaslab.cycles import CycleCatalog, cycle_count_by_length, iter_bits, mask_of
from biaslab.overlap import OverlapGraph, theta_triples


def short_threshold(n: int) -> int:
    return 2 * (n + 1) // 3


def short_count(n: int) -> int:
    """r = number of cycles of K_n with length at most floor(2(n+1)/3)."""
    return sum(cycle_count_by_length(n, k) for k in range(3, min(n, short_threshold(n)) + 1))


def short_count_bound(n: int) -> Fraction:
    """(n-1)! n^2 / (6 floor(n/3)!)"""
    return Fraction(factorial(n - 1) * n * n, 6 * factorial(n // 3))


@dataclass
class CompressionScheme:
    catalog: CycleCatalog
    omega: OverlapGraph
    threshold: int
    short_mask: int
    triples: list[tuple[int, int, int]]
    by_largest: dict[int, list[tuple[int, int]]]

    @property
    def r(self) -> int:
        return self.short_mask.bit_count()

    def summary(self) -> dict:
        return {
            "n": self.catalog.n,
            "threshold": self.threshold,
            "r": self.r,
            "r_bound": str(short_count_bound(self.catalog.n)),
            "triples": len(self.triples),
        }


def build_scheme(catalog: CycleCatalog, omega: OverlapGraph) -> CompressionScheme:
    t = short_threshold(catalog.n)
    short = mask_of(i for i, c in enumerate(catalog) if c.length <= t)
    triples = list(theta_triples(omega))
    by_largest: dict[int, list[tuple[int, int]]] = {}
    for a, b, c in triples:
        if not short >> a & 1:
            raise AssertionError(f"triple {(a, b, c)} has no short cycle")
        by_largest.setdefault(c, []).append((a, b))
    return CompressionScheme(catalog, omega, t, short, triples, by_largest)


def compress(B: BiasSet, scheme: CompressionScheme) -> BiasSet:
    omega = scheme.omega
    if not is_biased_clique(B, omega):
        raise ValueError("compress expects a biased clique")
    nbr = omega.nbr_masks
    drop = 0
    for a in B:
        for b in iter_bits(nbr[a] & B.members):
            if b > a:
                c = omega.third(a, b)
                if c > b and c in B:
                    drop |= 1 << a | 1 << c
    out = BiasSet(B.catalog, B.members & ~drop)
    if not is_scarce(out, omega):
        raise AssertionError("compressed set is not scarce")
    return out


def reconstruct(Bp: BiasSet, X, scheme: CompressionScheme) -> BiasSet | None:
    """The unique biased clique B with compress(B) = Bp and B ∩ C' = X, or None."""
    X = X if isinstance(X, int) else X.members
    if X & ~scheme.short_mask:
        return None
    members = 0
    for c in range(len(scheme.catalog)):
        if scheme.short_mask >> c & 1:
            inside = X >> c & 1
        else:
            inside = Bp.members >> c & 1 or any(
                members >> a & 1 and members >> b & 1 for a, b in scheme.by_largest.get(c, ())
            )
        if inside:
            members |= 1 << c
    B = BiasSet(Bp.catalog, members)
    if not is_biased_clique(B, scheme.omega):
        return None
    if compress(B, scheme).members != Bp.members:
        return None
    return B
