from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from biaslab.lattice import (
    hermite_basis,
    homomorphism_kernel,
    in_lattice,
    lattice_coefficients,
    quotient,
    smith_decomposition,
)


def _sympy_invariants(rows, m):
    """(rank, product of nonzero invariant factors, sorted factors > 1)."""
    if not rows:
        return 0, 1, []
    D = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
    nz = [d for d in diag if d]
    prod = 1
    for d in nz:
        prod *= d
    return len(nz), prod, sorted(d for d in nz if d > 1)


def _oracle_member(v, rows, m):
    # v is in L iff adding it changes neither rank nor torsion order
    return _sympy_invariants(rows, m)[:2] == _sympy_invariants(rows + [list(v)], m)[:2]


matrices = st.integers(1, 5).flatmap(
    lambda m: st.tuples(
        st.just(m),
        st.lists(st.lists(st.integers(-6, 6), min_size=m, max_size=m), min_size=0, max_size=5),
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices, st.integers(0, 2**31))
def test_membership_against_sympy(mr, seed):
    m, rows = mr
    rnd = random.Random(seed)
    basis, pivots = hermite_basis(rows, m)
    for r in rows:
        assert in_lattice(r, basis, pivots)
    for _ in range(4):
        if rows and rnd.random() < 0.5:
            v = [0] * m
            for r in rows:
                c = rnd.randint(-3, 3)
                v = [a + c * b for a, b in zip(v, r)]
        else:
            v = [rnd.randint(-4, 4) for _ in range(m)]
        got = in_lattice(v, basis, pivots)
        assert got == _oracle_member(v, rows, m)
        coeffs = lattice_coefficients(v, basis, pivots)
        assert (coeffs is not None) == got
        if got:
            w = [0] * m
            for c, b in zip(coeffs, basis):
                w = [a + c * x for a, x in zip(w, b)]
            assert w == v


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_hermite_shape(mr):
    m, rows = mr
    basis, pivots = hermite_basis(rows, m)
    assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
    for k, (row, col) in enumerate(zip(basis, pivots)):
        assert row[col] > 0 and not any(row[:col])
        for above in basis[:k]:
            assert 0 <= above[col] < row[col]
    assert len(basis) == _sympy_invariants(rows, m)[0]


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_against_sympy(mr):
    m, rows = mr
    d, Q = smith_decomposition(rows, m)
    assert len(d) == m
    rank, prod, big = _sympy_invariants(rows, m)
    nz = [x for x in d if x]
    assert len(nz) == rank
    assert sorted(x for x in nz if x > 1) == big
    # divisibility chain on the nonzero part
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert abs(Matrix(Q).det()) == 1
    # every row of R Q is diagonal-compatible and the diagonal lattice is reached
    RQ = [[sum(r[k] * Q[k][j] for k in range(m)) for j in range(m)] for r in rows]
    for row in RQ:
        assert all((x % di == 0) if di else x == 0 for x, di in zip(row, d))
    if RQ:
        hb, hp = hermite_basis(RQ, m)
        for i, di in enumerate(d):
            if di:
                assert in_lattice([di * int(j == i) for j in range(m)], hb, hp)


@settings(max_examples=100, deadline=None)
@given(matrices, st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_quotient_agrees_with_membership(mr, v):
    m, rows = mr
    v = v[:m]
    basis, pivots = hermite_basis(rows, m)
    qt = quotient(rows, m)
    assert qt.contains(v) == in_lattice(v, basis, pivots)


def test_known_quotients():
    # Z^2 / <(2, 0), (0, 3)> = Z_6
    qt = quotient([[2, 0], [0, 3]], 2)
    assert sorted(qt.moduli) == [1, 6]
    # Z^3 / <(1, 1, 0)> = Z^2
    qt = quotient([[1, 1, 0]], 3)
    assert sorted(qt.moduli) == [0, 0, 1]
    assert hermite_basis([], 3) == ([], [])
    with pytest.raises(ValueError):
        hermite_basis([[1, 2]], 3)


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 4),
    st.lists(st.sampled_from([0, 2, 3, 4, 6]), min_size=1, max_size=3),
    st.integers(0, 2**31),
)
def test_homomorphism_kernel(m, moduli, seed):
    rnd = random.Random(seed)
    k = len(moduli)
    images = [[rnd.randint(-3, 3) for _ in range(k)] for _ in range(m)]

    def image(x):
        out = []
        for j, q in enumerate(moduli):
            s = sum(x[e] * images[e][j] for e in range(m))
            out.append(s % q if q else s)
        return out

    kernel = homomorphism_kernel(images, moduli)
    for g in kernel:
        assert not any(image(g))
    basis, pivots = hermite_basis(kernel, m)
    for _ in range(30):
        x = [rnd.randint(-6, 6) for _ in range(m)]
        assert in_lattice(x, basis, pivots) == (not any(image(x)))
