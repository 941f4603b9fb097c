import itertools

import pytest

from conftest import A3, C2, C3, S3, Z2M, z2_swap, zmod_signed, zmod_trivial
from monocoh.abelian import (
    AbHom,
    FgAbelianGroup,
    IntMatrix,
    lattice_intersection,
    span_echelon,
    vec_to_col,
)
from monocoh.modules import (
    GModule,
    ModuleError,
    NotEquivariant,
    NotExact,
    NotSemilinear,
    SemilinearModule,
    induced_eval,
    induced_module,
    invariant_subquotient,
    invariants_of,
    preimage_under,
    ses_with_section,
)
from monocoh.monoids import coset_rep_map, submonoid


def test_gmodule_rejects_non_multiplicative_action():
    car = FgAbelianGroup.from_invariants([5])
    with pytest.raises(ModuleError):
        # "action" of the C2 generator is multiplication by 2, but 2*2 != 1 mod 5
        GModule(C2, car, {0: [[1]], 1: [[2]]})


def test_gmodule_monoid_action_need_not_be_invertible():
    # (Z/2,*): the absorbing element kills Z/2
    car = FgAbelianGroup.from_invariants([2])
    m = GModule(Z2M, car, {0: [[0]], 1: [[1]]})
    assert m.act(0, (1,)) == (0,)


def test_invariants_trivial_subset():
    m = z2_swap(C2, [0, 1])
    group, inc = invariants_of(m, [C2.identity])
    assert group.canonical == (2, ())


def test_invariants_trivial_action():
    m = zmod_trivial(S3, 4)
    group, _ = invariants_of(m, range(6))
    assert group.canonical == (0, (4,))


def test_invariants_swap_diagonal():
    m = z2_swap(C2, [0, 1])
    group, inc = invariants_of(m, [0, 1])
    assert group.canonical == (1, ())
    # the inclusion lands on the diagonal
    gen = inc.matrix.column(0)
    assert gen[0] == gen[1] != 0


def test_invariants_two_routes_agree():
    # joint kernel vs iterated pairwise intersection of kernels
    m = zmod_signed(S3, 3, [0, 1, 1, 1, 0, 0])
    joint = invariant_subquotient(m, range(6))
    per_elem = []
    eye = IntMatrix.identity(1)
    for g in range(6):
        diff = m.action[g] - eye
        sq = invariant_subquotient(m, [g])
        per_elem.append([dict(b) for b in sq.basis])
    inter = per_elem[0]
    for cols in per_elem[1:]:
        inter = lattice_intersection(inter, cols)
    ech = span_echelon(inter)
    assert span_echelon(joint.basis).pivot_rows() == ech.pivot_rows()
    got = FgAbelianGroup(1, IntMatrix.from_columns(
        [{0: next(iter(b.values()))} for b in ech.basis()], 1))
    assert joint.group.canonical == (0, (3,)) or joint.group.canonical == (0, ())


def test_induced_from_whole_group():
    rep = coset_rep_map(S3, range(6))
    sub, amb_of, loc_of = submonoid(S3, range(6))
    a = zmod_signed(sub, 3, [0, 1, 1, 1, 0, 0])
    ind = induced_module(S3, rep, a, loc_of)
    assert ind.carrier.canonical == a.carrier.canonical
    for g in range(6):
        assert ind.action[g] == a.action[loc_of[g]]


def test_induced_trivial_subgroup_of_c2_gives_swap():
    rep = coset_rep_map(C2, [0])
    sub, amb_of, loc_of = submonoid(C2, [0])
    a = GModule.trivial(sub, FgAbelianGroup.free(1))
    ind = induced_module(C2, rep, a, loc_of)
    assert ind.carrier.canonical == (2, ())
    assert ind.action[1] == IntMatrix.from_rows([[0, 1], [1, 0]])


def test_induced_s3_a3_dimension_count():
    rep = coset_rep_map(S3, A3)
    sub, amb_of, loc_of = submonoid(S3, A3)
    # A3 = C3 acting on Z/3 trivially (only order-3 automorphism of Z/3 is trivial)
    a = zmod_trivial(sub, 3)
    ind = induced_module(S3, rep, a, loc_of)
    assert ind.carrier.canonical == (0, (3, 3))


def test_induced_translation_law():
    # the defining law (g.f)(s) = f(s*g), checked exhaustively through eval
    rep = coset_rep_map(S3, A3)
    sub, amb_of, loc_of = submonoid(S3, A3)
    a = zmod_trivial(sub, 3)
    ind = induced_module(S3, rep, a, loc_of)
    car = ind.carrier
    for vec in [(1, 0), (0, 1), (2, 1)]:
        for g in range(6):
            moved = ind.act(g, vec)
            for sigma in range(6):
                lhs = induced_eval(rep, a, loc_of, moved, sigma)
                rhs = induced_eval(rep, a, loc_of, car.reduce(vec), S3.mul(sigma, g))
                assert a.carrier.equal(lhs, rhs)


def test_ses_split():
    a = zmod_trivial(C2, 2)
    c = zmod_trivial(C2, 3)
    b = GModule.trivial(C2, FgAbelianGroup.from_invariants([2, 3]))
    inject = AbHom(a.carrier, b.carrier, IntMatrix.from_rows([[1], [0]]))
    surject = AbHom(b.carrier, c.carrier, IntMatrix.from_rows([[0, 1]]))
    ses = ses_with_section(a, b, c, inject, surject)
    for ce in c.carrier.elements:
        assert c.carrier.equal(surject.apply(ses.section(ce)), ce)


def test_ses_z_to_z_to_z2():
    a = GModule.trivial(C2, FgAbelianGroup.free(1))
    b = GModule.trivial(C2, FgAbelianGroup.free(1))
    c = zmod_trivial(C2, 2)
    inject = AbHom(a.carrier, b.carrier, IntMatrix.from_rows([[2]]))
    surject = AbHom(b.carrier, c.carrier, IntMatrix.from_rows([[1]]))
    ses = ses_with_section(a, b, c, inject, surject)
    assert ses.section((1,)) == (1,)
    assert ses.section((0,)) == (0,)


def test_ses_rejects_non_equivariant():
    a = zmod_signed(C2, 4, [0, 1])  # Z/4 inversion
    b = zmod_trivial(C2, 4)
    c = GModule.trivial(C2, FgAbelianGroup.zero())
    inject = AbHom(a.carrier, b.carrier, IntMatrix.from_rows([[1]]))
    surject = AbHom(b.carrier, c.carrier, IntMatrix.zeros(0, 1))
    with pytest.raises(NotEquivariant) as ei:
        ses_with_section(a, b, c, inject, surject)
    assert ei.value.witness[0] == "inject"


def test_ses_rejects_non_exact():
    a = zmod_trivial(C2, 2)
    b = zmod_trivial(C2, 4)
    c = zmod_trivial(C2, 4)
    inject = AbHom(a.carrier, b.carrier, IntMatrix.from_rows([[2]]))
    surject = AbHom(b.carrier, c.carrier, IntMatrix.from_rows([[2]]))  # not onto
    with pytest.raises(NotExact):
        ses_with_section(a, b, c, inject, surject)


def test_preimage_under():
    a = FgAbelianGroup.free(1)
    b = FgAbelianGroup.free(1)
    hom = AbHom(a, b, IntMatrix.from_rows([[2]]))
    assert preimage_under(hom, (6,)) == (3,)
    with pytest.raises(Exception):
        preimage_under(hom, (3,))


def test_semilinear_trivial_instance():
    sm = SemilinearModule.integers_mod_trivial(C2, 4)
    assert sm.ring.size == 4


def test_semilinear_rejects_violation():
    sm = SemilinearModule.integers_mod_trivial(C2, 2)
    ring = sm.ring
    bad_scalar = dict(sm.scalar)
    # corrupt: 1 * 1 = 0
    bad_scalar[(1, (1,))] = (0,)
    with pytest.raises(NotSemilinear):
        SemilinearModule(C2, ring, sm.module, sm.ring_action, bad_scalar)
