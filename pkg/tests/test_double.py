import itertools

import pytest

import monocoh.doublecomplex as dcx
from conftest import C2, C3, S3, Z2M, zmod_signed, zmod_trivial
from monocoh.abelian import FgAbelianGroup, IntMatrix
from monocoh.cochains import (
    CochainComplex,
    cochain_sub,
    coboundary,
    cohomology_groups,
    random_cochain,
    zero_cochain,
)
from monocoh.doublecomplex import (
    DoubleComplex,
    NotChainMap,
    ActionNotTrivial,
    build_double,
    chain_endomorphism_columns,
    free_monoid_splitting_report,
    mapping_fiber,
    monoid_shapiro_report,
    product_module,
    product_with_factor,
    splitting_report,
)
from monocoh.monoids import FiniteMonoid, setup_from_group
from monocoh.rng import CounterRng


def make_dc(dmon, gmon, coeff_n, n_max=3, exponents=None):
    g = setup_from_group(gmon)
    prod = product_with_factor(g, dmon)
    car = FgAbelianGroup.from_invariants([coeff_n])
    if exponents is None:
        module = dcx.GModule.trivial(prod.product, car)
    else:
        pos = IntMatrix.from_rows([[1]])
        neg = IntMatrix.from_rows([[-1]])
        module = dcx.GModule(
            prod.product, car,
            {z: (neg if exponents[z] else pos) for z in range(prod.size)},
        )
    return DoubleComplex(dmon, g, module, n_max)


@pytest.fixture(scope="module")
def dc_z2m_c2():
    return make_dc(Z2M, C2, 2)


@pytest.fixture(scope="module")
def dc_c2_c2():
    return make_dc(C2, C2, 4)


def test_double_identities(dc_z2m_c2, dc_c2_c2):
    rng = CounterRng(3)
    dc_z2m_c2.verify_identities(rng, samples=2, degree_bound=2)
    dc_c2_c2.verify_identities(rng, samples=2, degree_bound=2)


def test_total_diff_squares_to_zero(dc_z2m_c2):
    rng = CounterRng(5)
    for n in (0, 1, 2):
        u = {
            (p, n - p): dc_z2m_c2.random_block(p, n - p, rng)
            for p in range(n + 1)
        }
        dd = dc_z2m_c2.total_diff(dc_z2m_c2.total_diff(u))
        assert dc_z2m_c2.total_is_zero(dd)


def test_trivial_factor_total_is_row():
    dc = make_dc(FiniteMonoid.trivial(), C2, 4, n_max=3)
    rep = dc.quasi_iso_report(3)
    assert all(v["match"] for v in rep.values())
    got = [dc.tot_cohomology(n).group.canonical for n in range(4)]
    want = [g.canonical for g in cohomology_groups(
        zmod_trivial(C2, 4), 3
    )]
    assert got == want


def test_trivial_group_total_is_column():
    g = setup_from_group(FiniteMonoid.trivial())
    prod = product_with_factor(g, C3)
    module = dcx.GModule.trivial(prod.product, FgAbelianGroup.from_invariants([3]))
    dc = DoubleComplex(C3, g, module, 3)
    got = [dc.tot_cohomology(n).group.canonical for n in range(4)]
    want = [h.canonical for h in cohomology_groups(zmod_trivial(C3, 3), 3)]
    assert got == want
    rep = dc.quasi_iso_report(3)
    assert all(v["match"] for v in rep.values())


def test_alpha_is_chain_map(dc_z2m_c2):
    rng = CounterRng(7)
    for n in (0, 1, 2):
        f = random_cochain(dc_z2m_c2.module, n, rng)
        lhs = dc_z2m_c2.total_diff(dc_z2m_c2.alpha(f))
        rhs = dc_z2m_c2.alpha(coboundary(f))
        assert dc_z2m_c2.total_is_zero(dc_z2m_c2.total_sub(lhs, rhs))


def test_sharp_section_identities(dc_z2m_c2):
    rng = CounterRng(9)
    for p, q in ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2)):
        u = dc_z2m_c2.random_block(p, q, rng)
        sharped = dc_z2m_c2.sharp(u)
        back = dc_z2m_c2.restrict_block(sharped, p)
        assert back.values == u.values
        a = dc_z2m_c2.alpha(sharped)
        n = p + q
        for (pp, qq), blk in a.items():
            if (pp, qq) == (p, q):
                assert blk.values == u.values
            else:
                assert blk.is_zero(), (p, q, pp, qq)


def test_extend_zero_basics(dc_z2m_c2):
    rng = CounterRng(11)
    z = dc_z2m_c2.zero_block(1, 1)
    assert dc_z2m_c2.extend_zero(z).is_zero()
    u = dc_z2m_c2.random_block(1, 1, rng)
    g = dc_z2m_c2.extend_zero(u)
    # vanishes when one of the first q arguments lies in the factor
    for d in range(dc_z2m_c2.dmon.size):
        zd = dc_z2m_c2.embed_d(d)
        for y in range(dc_z2m_c2.prod.size):
            assert g.value((zd, y)) == dc_z2m_c2.module.carrier.zero_elem()
    # alpha picks out the original block
    a = dc_z2m_c2.alpha(g)
    assert a[(1, 1)].values == u.values
    assert a[(0, 2)].is_zero() and a[(2, 0)].is_zero()


def test_extend_zero_is_chain_map(dc_z2m_c2):
    rng = CounterRng(13)
    for n in (1, 2):
        u = {
            (p, n - p): dc_z2m_c2.random_block(p, n - p, rng)
            for p in range(n + 1)
        }
        lhs = coboundary(dc_z2m_c2.extend_zero_total(u))
        rhs = dc_z2m_c2.extend_zero_total(dc_z2m_c2.total_diff(u))
        assert cochain_sub(lhs, rhs).is_zero()


def test_extend_zero_closed_form_equals_recursive_lift(dc_z2m_c2):
    rng = CounterRng(17)
    for p, q in ((0, 2), (1, 2)):
        u = dc_z2m_c2.random_block(p, q, rng)
        closed = dc_z2m_c2.extend_zero(u)
        lifted = dc_z2m_c2.extend_zero_via_lift(u)
        assert closed.values == lifted.values


def test_quasi_isomorphism_small_cases(dc_z2m_c2, dc_c2_c2):
    rep = dc_z2m_c2.quasi_iso_report(3)
    assert all(v["match"] for v in rep.values()), rep
    rep = dc_c2_c2.quasi_iso_report(2)
    assert all(v["match"] for v in rep.values()), rep
    # frozen: absorbing factor kills higher degrees entirely
    assert [rep_n["product"] for rep_n in dc_z2m_c2.quasi_iso_report(3).values()] \
        == [(0, (2,)), (0, (2,)), (0, (2,)), (0, (2,))]


def test_witnesses(dc_z2m_c2):
    rng = CounterRng(19)
    # surjectivity: extension along zero hits any total cocycle
    u = {(p, 1 - p): dc_z2m_c2.random_block(p, 1 - p, rng) for p in range(2)}
    w = dc_z2m_c2.total_diff(u)  # a total coboundary, in particular a cocycle
    f = dc_z2m_c2.surjectivity_witness(w)
    assert coboundary(f).is_zero()
    # injectivity: the descent writes the matching product cocycle as a
    # boundary, pointwise
    h = dc_z2m_c2.injectivity_witness(f, u)
    assert cochain_sub(coboundary(h), f).is_zero()


def test_mapping_fiber_identity_operator():
    m = zmod_trivial(C2, 2)
    cx = CochainComplex(m, 3)
    pres = mapping_fiber(cx, chain_endomorphism_columns(cx, IntMatrix.identity(1)))
    hs = [g.canonical for g in cohomology_groups(m, 3)]
    for n in range(4):
        got = pres.cohomology(n).group.canonical
        want_parts = [hs[n]]
        if n >= 1:
            want_parts.append(hs[n - 1])
        from monocoh.abelian import direct_sum_canonical

        assert got == direct_sum_canonical(*want_parts)


def test_mapping_fiber_rejects_non_chain_map():
    from conftest import z2_swap

    m = z2_swap(C2, [0, 1])
    cx = CochainComplex(m, 1)
    bad = IntMatrix.from_rows([[1, 0], [0, 0]])  # does not commute with swap
    with pytest.raises(NotChainMap):
        mapping_fiber(cx, chain_endomorphism_columns(cx, bad))


@pytest.mark.parametrize("r", [1, 2])
def test_free_monoid_splitting(r):
    rep = free_monoid_splitting_report(zmod_trivial(C2, 2), r, 3)
    assert all(v["match"] for v in rep.values()), rep


def test_splitting_finite_factor():
    dc = make_dc(C2, C2, 2, n_max=3)
    rep = splitting_report(dc, 3)
    assert all(v["match"] for v in rep.values()), rep
    dc = make_dc(C2, C3, 3, n_max=3)
    rep = splitting_report(dc, 3)
    assert all(v["match"] for v in rep.values()), rep


def test_splitting_rejects_nontrivial_action():
    g = setup_from_group(C2)
    prod = product_with_factor(g, C2)
    car = FgAbelianGroup.from_invariants([3])
    pos = IntMatrix.from_rows([[1]])
    neg = IntMatrix.from_rows([[-1]])
    module = dcx.GModule(
        prod.product, car,
        {z: (neg if prod.coords[z][-1] else pos) for z in range(prod.size)},
    )
    dc = DoubleComplex(C2, g, module, 2)
    with pytest.raises(ActionNotTrivial):
        splitting_report(dc, 2)


def test_tensor_map_commutes_with_differentials():
    # (f, g) -> (d -> (x -> f(d) g(x))) intertwines the product rule with
    # the block differentials when the factor acts trivially
    dc = make_dc(C2, C2, 2, n_max=3)
    rng = CounterRng(23)
    car = dc.module.carrier
    for p, q in ((1, 1), (0, 2), (2, 0)):
        fvals = {ds: rng.below(2) for ds in itertools.product(range(2), repeat=p)}
        u = dc.block_from_function(
            p, q, lambda ds, xs: car.smul(fvals[ds], _g_val(dc, rng, xs))
        )
        # a sampled structural check: the product of a D-only table with a
        # G-only cochain differentiates by the Leibniz-free block rules
        assert dc.partial(u).p == p and dc.partial(u).q == q + 1
        assert dc.delta(u).p == p + 1


_gcache = {}


def _g_val(dc, rng, xs):
    if xs not in _gcache:
        _gcache[xs] = (rng.below(2),)
    return _gcache[xs]


def test_monoid_shapiro_tiny_case():
    # full route on a small instance: factor (Z/2,*), group C2, trivial
    # subgroup, coefficients Z/2
    from monocoh.monoids import submonoid

    sub, _, _ = submonoid(C2, [0])
    h_module = dcx.GModule.trivial(sub, FgAbelianGroup.from_invariants([2]))
    d_action = {0: IntMatrix.identity(1), 1: IntMatrix.identity(1)}
    rep = monoid_shapiro_report(Z2M, C2, [0], h_module, d_action, 2)
    assert all(v["match"] for v in rep.values()), rep
