import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monocoh.abelian import (
    AbHom,
    CompositionNotZero,
    FgAbelianGroup,
    IntMatrix,
    LatticeSubquotient,
    NotContained,
    canonicalize,
    direct_sum_canonical,
    homology_at,
    lattice_intersection,
    smith_normal_form,
    snf_invariants,
    span_echelon,
    subquotient,
    vec_to_col,
)


def snf_checks(m):
    u, s, v = smith_normal_form(m)
    assert (u @ m) @ v == s
    assert abs(u.det()) == 1
    assert abs(v.det()) == 1
    diag = [s.at(i, i) for i in range(min(s.rows, s.cols))]
    for i in range(s.rows):
        for j in range(s.cols):
            if i != j:
                assert s.at(i, j) == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    assert diag == nz + [0] * (len(diag) - len(nz))
    return diag


def test_snf_zero_matrix():
    m = IntMatrix.from_rows([[0]])
    u, s, v = smith_normal_form(m)
    assert s == IntMatrix.from_rows([[0]])
    assert u == IntMatrix.identity(1)
    assert v == IntMatrix.identity(1)


def test_snf_identity():
    m = IntMatrix.identity(3)
    _, s, _ = smith_normal_form(m)
    assert s == IntMatrix.identity(3)


def test_snf_2x2_example():
    m = IntMatrix.from_rows([[2, 4], [6, 8]])
    diag = snf_checks(m)
    assert diag == [2, 4]


@pytest.mark.parametrize(
    "rows, diag",
    [
        ([[1, 0], [0, 1]], [1, 1]),
        ([[2, 0], [0, 3]], [1, 6]),
        ([[4, 0], [0, 6]], [2, 12]),
        ([[0, 0], [0, 0]], [0, 0]),
        ([[3, 1], [1, 3]], [1, 8]),
    ],
)
def test_snf_small_cases(rows, diag):
    assert snf_checks(IntMatrix.from_rows(rows)) == diag


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(1, 4),
    st.data(),
)
def test_snf_random(r, c, data):
    entries = data.draw(
        st.lists(st.integers(-9, 9), min_size=r * c, max_size=r * c)
    )
    snf_checks(IntMatrix(r, c, entries))


def test_sparse_invariants_match_dense():
    m = IntMatrix.from_rows([[2, 4, 0], [6, 8, 2], [0, 2, 2]])
    diag = snf_checks(m)
    rank, invs = snf_invariants(m.columns_sparse(), 3)
    assert rank == sum(1 for d in diag if d)
    assert invs == [d for d in diag if d > 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_sparse_invariants_random(r, c, data):
    entries = data.draw(
        st.lists(st.integers(-6, 6), min_size=r * c, max_size=r * c)
    )
    m = IntMatrix(r, c, entries)
    diag = [d for d in snf_checks(m) if d]
    rank, invs = snf_invariants(m.columns_sparse(), r)
    assert rank == len(diag)
    assert invs == [d for d in diag if d > 1]


def test_canonicalize_free():
    assert canonicalize(FgAbelianGroup.free(2)) == (2, ())


def test_canonicalize_z2():
    g = FgAbelianGroup(1, IntMatrix.from_rows([[2]]))
    assert canonicalize(g) == (0, (2,))


def test_canonicalize_2x4():
    g = FgAbelianGroup(2, IntMatrix.from_rows([[2, 0], [0, 4]]))
    assert canonicalize(g) == (0, (2, 4))


def test_canonicalize_invariance_under_generator_permutation():
    rel = IntMatrix.from_rows([[2, 1], [0, 3], [4, 0]])
    g = FgAbelianGroup(3, rel)
    perm = IntMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    g2 = FgAbelianGroup(3, perm @ rel)
    assert g.canonical == g2.canonical


def test_canonicalize_invariance_under_redundant_relation():
    rel = IntMatrix.from_rows([[2, 1], [0, 3], [4, 0]])
    g = FgAbelianGroup(3, rel)
    extra = [a + b for a, b in zip(rel.column(0), rel.column(1))]
    rel2 = IntMatrix.from_columns(
        [dict(enumerate(rel.column(0))), dict(enumerate(rel.column(1))), dict(enumerate(extra))], 3
    )
    assert FgAbelianGroup(3, rel2).canonical == g.canonical


def test_element_arithmetic_z4():
    g = FgAbelianGroup.from_invariants([4])
    assert len(g.elements) == 4
    a = g.reduce((3,))
    b = g.reduce((2,))
    assert g.equal(g.add(a, b), g.reduce((1,)))
    assert g.is_zero_elem(g.smul(4, a))


def test_element_enumeration_infinite():
    g = FgAbelianGroup(2, IntMatrix.from_columns([{0: 2}], 2))  # Z/2 + Z
    it = g.iter_elements()
    seen = [next(it) for _ in range(8)]
    assert len(set(seen)) == 8


def test_homology_doubling():
    z = FgAbelianGroup.free(1)
    zero = FgAbelianGroup.zero()
    f = AbHom(z, z, IntMatrix.from_rows([[2]]))
    g = AbHom(z, zero, IntMatrix.zeros(0, 1))
    assert homology_at(f, g).canonical == (0, (2,))


def test_homology_identity_case():
    z = FgAbelianGroup.free(1)
    zero = FgAbelianGroup.zero()
    f = AbHom(zero, z, IntMatrix.zeros(1, 0))
    g = AbHom(z, zero, IntMatrix.zeros(0, 1))
    assert homology_at(f, g).canonical == (1, ())


def test_homology_rejects_nonzero_composition():
    z = FgAbelianGroup.free(1)
    one = AbHom(z, z, IntMatrix.from_rows([[1]]))
    with pytest.raises(CompositionNotZero):
        homology_at(one, one)


def test_homology_zero_maps_returns_middle():
    a = FgAbelianGroup.free(1)
    b = FgAbelianGroup.from_invariants([6], free_rank=1)
    c = FgAbelianGroup.free(2)
    f = AbHom.zero(a, b)
    g = AbHom.zero(b, c)
    assert homology_at(f, g).canonical == b.canonical


def test_subquotient_2z_over_4z():
    amb = FgAbelianGroup.free(1)
    sq = subquotient(
        amb, IntMatrix.from_rows([[2]]), IntMatrix.from_rows([[4]])
    )
    assert sq.group.canonical == (0, (2,))
    # lift chooses a representative inside the subgroup lattice
    rep = sq.lift(sq.classify(vec_to_col((2,))))
    assert sq.contains(rep)
    assert not sq.class_is_zero(vec_to_col((2,)))


def test_subquotient_equal_lattices_trivial():
    amb = FgAbelianGroup.free(2)
    gens = IntMatrix.from_rows([[2, 0], [0, 3]])
    sq = subquotient(amb, gens, gens)
    assert sq.group.is_trivial()


def test_subquotient_rejects_noncontained():
    amb = FgAbelianGroup.free(1)
    with pytest.raises(NotContained):
        subquotient(amb, IntMatrix.from_rows([[4]]), IntMatrix.from_rows([[2]]))


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_subquotient_order_is_determinant_ratio(data):
    # random full-rank 3x3 sub lattice and a multiple of it as quotient
    sub = data.draw(
        st.lists(st.integers(-4, 4), min_size=9, max_size=9).filter(
            lambda e: IntMatrix(3, 3, e).det() != 0
        )
    )
    k = data.draw(st.integers(1, 3))
    sub_m = IntMatrix(3, 3, sub)
    quot_m = IntMatrix(3, 3, [k * x for x in sub])
    sq = subquotient(FgAbelianGroup.free(3), sub_m, quot_m)
    assert sq.group.order() == abs(quot_m.det()) // abs(sub_m.det())


def test_lattice_intersection():
    a = [vec_to_col((2, 0)), vec_to_col((0, 3))]
    b = [vec_to_col((3, 0)), vec_to_col((0, 2))]
    inter = lattice_intersection(a, b)
    ech = span_echelon(inter)
    assert ech.contains(vec_to_col((6, 0)))
    assert ech.contains(vec_to_col((0, 6)))
    assert not ech.contains(vec_to_col((2, 0)))
    assert not ech.contains(vec_to_col((3, 0)))


def test_direct_sum_canonical():
    assert direct_sum_canonical((0, (2,)), (0, (3,))) == (0, (6,))
    assert direct_sum_canonical((1, (2,)), (0, (2, 4))) == (1, (2, 2, 4))
