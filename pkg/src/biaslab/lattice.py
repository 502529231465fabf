"""Integer lattices in Z^m given by generating rows, in exact Python ints.

``hermite_basis`` returns a row echelon basis (positive pivots, entries above
each pivot reduced into [0, pivot)), which answers membership. ``quotient``
presents Z^m / L through a Smith decomposition: with P R Q = diag(d), a
vector x lies in L iff every coordinate of xQ is divisible by its d_i
(d_i = 0 means the coordinate must vanish).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Vector = list[int]


def hermite_basis(rows: Sequence[Sequence[int]], m: int) -> tuple[list[Vector], list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns (basis, pivot_columns); zero rows are dropped.
    """
    A = [list(r) for r in rows if any(r)]
    for r in A:
        if len(r) != m:
            raise ValueError(f"row of length {len(r)}, expected {m}")
    basis: list[Vector] = []
    pivots: list[int] = []
    top = 0
    for col in range(m):
        while True:
            live = [i for i in range(top, len(A)) if A[i][col]]
            if not live:
                break
            p = min(live, key=lambda i: abs(A[i][col]))
            A[top], A[p] = A[p], A[top]
            pr = A[top]
            rest = [i for i in range(top + 1, len(A)) if A[i][col]]
            if not rest:
                break
            for i in rest:
                q = A[i][col] // pr[col]
                Ai = A[i]
                for j in range(col, m):
                    Ai[j] -= q * pr[j]
        if top < len(A) and A[top][col]:
            pr = A[top]
            if pr[col] < 0:
                for j in range(col, m):
                    pr[j] = -pr[j]
            for i in range(top):
                q = A[i][col] // pr[col]
                if q:
                    Ai = A[i]
                    for j in range(col, m):
                        Ai[j] -= q * pr[j]
            pivots.append(col)
            top += 1
            # rows that became zero sink out of play
            A = A[:top] + [r for r in A[top:] if any(r)]
    basis = A[:top]
    return basis, pivots


def in_lattice(v: Sequence[int], basis: list[Vector], pivots: list[int]) -> bool:
    """Membership by reduction against a Hermite basis."""
    w = list(v)
    for row, col in zip(basis, pivots):
        if w[col] % row[col]:
            return False
        q = w[col] // row[col]
        if q:
            for j in range(col, len(w)):
                w[j] -= q * row[j]
    return not any(w)


def lattice_coefficients(v: Sequence[int], basis: list[Vector], pivots: list[int]) -> list[int] | None:
    """Integer c with sum c_i basis_i = v, or None when v is not in the lattice."""
    w = list(v)
    coeffs = []
    for row, col in zip(basis, pivots):
        if w[col] % row[col]:
            return None
        q = w[col] // row[col]
        coeffs.append(q)
        if q:
            for j in range(col, len(w)):
                w[j] -= q * row[j]
    return coeffs if not any(w) else None


def smith_decomposition(rows: Sequence[Sequence[int]], m: int) -> tuple[list[int], list[Vector]]:
    """Invariant factors d (length m, zeros for the free part) and a unimodular
    m x m matrix Q with P R Q = diag(d) for some unimodular P."""
    M = [list(r) for r in rows]
    r = len(M)
    Q = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_cols(a, b):
        if a != b:
            for row in M:
                row[a], row[b] = row[b], row[a]
            for row in Q:
                row[a], row[b] = row[b], row[a]

    def col_sub(j, t, q):  # col_j -= q * col_t
        for row in M:
            row[j] -= q * row[t]
        for row in Q:
            row[j] -= q * row[t]

    t = 0
    while t < min(r, m):
        cand = [(abs(M[i][j]), i, j) for i in range(t, r) for j in range(t, m) if M[i][j]]
        if not cand:
            break
        _, i, j = min(cand)
        M[t], M[i] = M[i], M[t]
        swap_cols(t, j)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, r):
                if M[i][t]:
                    q = M[i][t] // p
                    Mi, Mt = M[i], M[t]
                    for j in range(t, m):
                        Mi[j] -= q * Mt[j]
                    dirty = dirty or M[i][t] != 0
            for j in range(t + 1, m):
                if M[t][j]:
                    col_sub(j, t, M[t][j] // p)
                    dirty = dirty or M[t][j] != 0
            if dirty:
                cand = [(abs(M[i][t]), i, t) for i in range(t, r) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t, m) if M[t][j]]
                _, i, j = min(cand)
                M[t], M[i] = M[i], M[t]
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, m) if M[i][j] % p),
                None,
            )
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad])]
        if M[t][t] < 0:
            M[t] = [-a for a in M[t]]
        t += 1
    d = [M[i][i] for i in range(t)] + [0] * (m - t)
    return d, Q


@dataclass
class Quotient:
    """Z^m / L as Z/d_1 + ... + Z/d_m, through x -> xQ reduced per coordinate."""

    moduli: list[int]  # 0 marks a free coordinate; 1 a trivial one
    Q: list[Vector]

    def image(self, x: Sequence[int]) -> list[int]:
        m = len(self.moduli)
        out = []
        for i in range(m):
            s = sum(x[k] * self.Q[k][i] for k in range(m) if x[k])
            d = self.moduli[i]
            out.append(s % d if d else s)
        return out

    def contains(self, x: Sequence[int]) -> bool:
        return not any(self.image(x))


def quotient(rows: Sequence[Sequence[int]], m: int) -> Quotient:
    basis, _ = hermite_basis(rows, m)
    d, Q = smith_decomposition(basis, m)
    return Quotient(d, Q)


def homomorphism_kernel(images: Sequence[Sequence[int]], moduli: Sequence[int]) -> list[Vector]:
    """Generators of {x in Z^m : sum_e x_e images[e] = 0 in Z/q_1 + ... + Z/q_k}."""
    m, k = len(images), len(moduli)
    rows = [list(images[e]) + [int(e == f) for f in range(m)] for e in range(m)]
    for j, q in enumerate(moduli):
        if q:
            rows.append([q * int(i == j) for i in range(k)] + [0] * m)
    basis, pivots = hermite_basis(rows, k + m)
    return [row[k:] for row, col in zip(basis, pivots) if col >= k]
