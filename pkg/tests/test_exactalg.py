from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from oddkh.exactalg import (
    GroupMapError,
    IntMatrix,
    NonFreeQuotientError,
    PresentedGroup,
    cokernel_invariants,
    compose,
    determinant,
    elementary_divisors,
    exterior_basis,
    induced_exterior_map,
    rank_mod2,
    smith_normal_form,
    wedge_left,
    wedge_right,
)

matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def _sympy_divisors(rows):
    m = sympy.Matrix(rows)
    if m.is_zero_matrix:
        return []
    return sorted(abs(int(x)) for x in invariant_factors(m) if x != 0)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_smith_form_matches_sympy(rows):
    m = IntMatrix.from_dense(rows)
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(determinant(u.to_dense())) == 1
    assert abs(determinant(v.to_dense())) == 1
    diag = [d[i, i] for i in range(min(d.shape)) if d[i, i]]
    assert all(x > 0 for x in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert d.nnz == len(diag)
    assert diag == _sympy_divisors(rows)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_sparse_divisors_match_dense(rows):
    m = IntMatrix.from_dense(rows)
    assert elementary_divisors(m) == _sympy_divisors(rows)


def test_sparse_divisors_large_random():
    rng = random.Random(7)
    for _ in range(20):
        r, c = rng.randint(10, 30), rng.randint(10, 30)
        rows = [[rng.choice([0, 0, 0, 1, -1, 2]) for _ in range(c)] for _ in range(r)]
        assert elementary_divisors(IntMatrix.from_dense(rows)) == _sympy_divisors(rows)


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_rank_mod2(rows):
    m = IntMatrix.from_dense(rows)
    assert rank_mod2(m) == _gf2_rank(rows)
    assert rank_mod2(m) <= len(elementary_divisors(m))


def _gf2_rank(rows):
    vecs = [sum((x % 2) << j for j, x in enumerate(r)) for r in rows]
    rank = 0
    while vecs:
        v = vecs.pop()
        if v:
            rank += 1
            low = v & -v
            vecs = [w ^ v if w & low else w for w in vecs]
    return rank


@given(matrices)
@settings(max_examples=50, deadline=None)
def test_determinant_matches_sympy(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    assert determinant(sq) == int(sympy.Matrix(sq).det())


def test_cokernel_invariants():
    assert cokernel_invariants(IntMatrix.from_dense([[2, 0], [0, 3]])) == (0, [6])
    assert cokernel_invariants(IntMatrix.from_dense([[2], [0]])) == (1, [2])
    assert cokernel_invariants(IntMatrix(2, 0)) == (2, [])


def test_text_round_trip():
    m = IntMatrix.from_dense([[1, 0, -2], [0, 0, 0], [3, 4, 5]])
    assert IntMatrix.from_text(m.to_text()) == m


def test_transpose_and_arithmetic():
    a = IntMatrix.from_dense([[1, 2], [3, 4], [5, 6]])
    assert a.transpose().to_dense() == [[1, 3, 5], [2, 4, 6]]
    assert (a - a).is_zero()
    assert (a + a).to_dense() == [[2, 4], [6, 8], [10, 12]]


def test_exterior_basis_order():
    assert exterior_basis(3) == [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]


def test_wedge_signs():
    e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert wedge_left(e[0], {0b010: 1}) == {0b011: 1}
    assert wedge_left(e[1], {0b001: 1}) == {0b011: -1}
    assert wedge_right({0b001: 1}, e[1]) == {0b011: 1}
    assert wedge_left(e[0], {0b001: 1}) == {}


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_wedge_anticommutes(u, v):
    a = wedge_left(u, {0: 1})
    b = wedge_left(v, {0: 1})
    assert wedge_left(v, a) == {m: -c for m, c in wedge_left(u, b).items()}
    assert wedge_right(a, v) == wedge_left(u, b)
    assert wedge_left(u, a) == {}


def test_presented_group_basics():
    g = PresentedGroup(3, IntMatrix.from_columns(3, [[1, -1, 0]]))
    assert g.rank == 2
    assert g.is_zero([1, -1, 0])
    assert not g.is_zero([1, 0, 0])
    assert g.coords([1, 0, 0]) == g.coords([0, 1, 0])
    for j in range(g.rank):
        assert g.coords(g.lift(j)) == tuple(int(i == j) for i in range(g.rank))


def test_presented_group_rejects_torsion():
    with pytest.raises(NonFreeQuotientError):
        PresentedGroup(2, IntMatrix.from_columns(2, [[2, 0]]))


def test_induced_map_checks_relations():
    src = PresentedGroup(2)
    dst = PresentedGroup(2, IntMatrix.from_columns(2, [[1, 1]]))
    m = induced_exterior_map(src, dst, IntMatrix.identity(2))
    assert m.src_rank == 2 and m.dst_rank == 1
    with pytest.raises(GroupMapError):
        induced_exterior_map(dst, src, IntMatrix.identity(2))
    # modulo the prefactor the same map is fine
    w = induced_exterior_map(dst, src, IntMatrix.identity(2), wedge_prefactor=[1, 1])
    assert w.shift == 1


def test_induced_maps_are_functorial():
    rng = random.Random(3)
    for _ in range(20):
        f = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        g = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        free = PresentedGroup(3)
        mf = induced_exterior_map(free, free, IntMatrix.from_dense(f))
        mg = induced_exterior_map(free, free, IntMatrix.from_dense(g))
        gf = (IntMatrix.from_dense(g) @ IntMatrix.from_dense(f))
        assert compose(mg, mf).images == induced_exterior_map(free, free, gf).images
        # top exterior power is the determinant
        assert mf.apply(0b111).get(0b111, 0) == determinant(f)
