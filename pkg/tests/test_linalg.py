import random

import pytest

from perihom.field import F2, QQ, Field
from perihom.generator import random_matrix
from perihom.linalg import (
    LinAlgError, Matrix, Subspace, analyze_endo, complement_within,
    gim_naive, gker_naive, image, kernel, map_subspace, preimage, rank,
    rref, solve,
)

F5 = Field("Fp", 5)


def mat(F, rows):
    return Matrix.from_rows(F, [[F.of(x) for x in r] for r in rows])


def test_rref_rank_q():
    m = mat(QQ, [[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(m) == 2
    r, rk, pivots = rref(m)
    assert rk == 2 and pivots == [0, 1]


def test_rank_f5():
    m = mat(F5, [[1, 2], [3, 6]])
    # second row is 3x the first mod 5
    assert rank(m) == 1


def test_kernel_image_dimensions():
    m = mat(QQ, [[1, 0, 1], [0, 1, 1]])
    assert kernel(m).dim == 1
    assert image(m).dim == 2
    assert kernel(m).contains((QQ.of(1), QQ.of(1), QQ.of(-1)))


def test_solve_consistent_and_inconsistent():
    m = mat(QQ, [[1, 1], [0, 1], [1, 0]])
    b = (QQ.of(2), QQ.of(1), QQ.of(1))
    x = solve(m, b)
    assert m.mul_vec(x) == b
    assert solve(m, (QQ.of(1), QQ.of(0), QQ.of(0))) is None


def test_matrix_algebra_roundtrip():
    a = mat(F5, [[1, 2], [3, 4]])
    b = mat(F5, [[0, 1], [1, 0]])
    assert (a @ b).to_json() == [[2, 1], [4, 3]]
    assert (a + b - b).data == a.data
    assert a.transpose().transpose().data == a.data


def test_subspace_add_intersect_perp():
    s1 = Subspace.from_columns(QQ, 3, [(QQ.of(1), QQ.of(0), QQ.of(0))])
    s2 = Subspace.from_columns(QQ, 3, [(QQ.of(0), QQ.of(1), QQ.of(0))])
    assert s1.add(s2).dim == 2
    assert s1.intersect(s2).dim == 0
    assert s1.perp().dim == 2
    assert s1.add(s2).intersect(s1) == s1


def test_subspace_canonical_equality():
    a = Subspace.from_columns(F2, 2, [(1, 1), (1, 0)])
    b = Subspace.from_columns(F2, 2, [(0, 1), (1, 0)])
    assert a == b and a.dim == 2


def test_preimage_and_map_subspace():
    m = mat(QQ, [[1, 0, 0], [0, 1, 0]])
    s = Subspace.from_columns(QQ, 2, [(QQ.of(1), QQ.of(0))])
    pre = preimage(m, s)
    assert pre.dim == 2  # span{e1, e3}
    assert map_subspace(m, pre) == s


def test_complement_within_orthogonal():
    outer = Subspace.full_space(QQ, 3)
    inner = Subspace.from_columns(QQ, 3, [(QQ.of(1), QQ.of(1), QQ.of(0))])
    c, degenerate = complement_within(inner, outer)
    assert not degenerate
    assert c.dim == 2
    assert inner.add(c) == outer
    # orthogonal-first: the complement is inner's perp
    assert c == inner.perp()


def test_complement_within_degenerate_f2():
    # (1,1) is self-orthogonal over F2, forcing the echelon fallback
    outer = Subspace.full_space(F2, 2)
    inner = Subspace.from_columns(F2, 2, [(1, 1)])
    c, degenerate = complement_within(inner, outer)
    assert degenerate
    assert c.dim == 1 and inner.add(c) == outer
    assert inner.intersect(c).dim == 0


def test_analyze_endo_nilpotent():
    m = mat(QQ, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    a = analyze_endo(m)
    assert a.gim.dim == 0 and a.gker.dim == 3


def test_analyze_endo_invertible():
    m = mat(F5, [[2, 1], [1, 1]])
    a = analyze_endo(m)
    assert a.gim.dim == 2 and a.gker.dim == 0
    # restricted inverse really inverts m on gim coordinates
    prod_cols = []
    for c in a.restricted_inverse.columns():
        prod_cols.append(m.mul_vec(a.gim.basis.mul_vec(c)))
    back = Matrix.from_columns(F5, prod_cols, 2)
    assert back.data == a.gim.basis.data


def test_analyze_endo_mixed_decomposition():
    m = mat(QQ, [[1, 1, 0], [0, 0, 1], [0, 0, 0]])
    a = analyze_endo(m)
    assert a.gim.dim == 1 and a.gker.dim == 2
    assert a.gim.add(a.gker).dim == 3
    assert a.gim.intersect(a.gker).dim == 0


def test_analyze_endo_matches_naive_oracle_random():
    rng = random.Random(7)
    for _ in range(60):
        F = (QQ, F2, F5)[rng.randrange(3)]
        d = rng.randint(1, 8)
        m = random_matrix(rng, F, d, d)
        a = analyze_endo(m)
        assert a.gim == gim_naive(m)
        assert a.gker == gker_naive(m)
        assert a.gim.add(a.gker) == Subspace.full_space(F, d)


def test_analyze_endo_rejects_non_square():
    with pytest.raises(LinAlgError):
        analyze_endo(mat(QQ, [[1, 2, 3], [4, 5, 6]]))


def test_gim_component_splits_vector():
    m = mat(QQ, [[1, 1], [0, 0]])
    a = analyze_endo(m)
    v = (QQ.of(1), QQ.of(1))
    g = a.gim_component(v)
    assert a.gim.contains(g)
    rest = tuple(QQ.sub(x, y) for x, y in zip(v, g))
    assert a.gker.contains(rest)
