"""Named verification suites over the standard desk-scale instances.

Each suite runs a family of identity checks and returns one record per
check: a stable key, the instance it ran on, a pass flag and a concrete
counterexample witness on failure.  All randomness is counter-based from
the given seed, so reports reproduce byte for byte.
"""

from __future__ import annotations

import itertools

from .abelian import FgAbelianGroup, IntMatrix
from .cochains import (
    CochainComplex,
    cochain_add,
    cochain_from_table,
    cochain_sub,
    coboundary,
    cohomology_groups,
    dual_basis_witness,
    random_cochain,
    zero_cochain,
)
from .modules import GModule, SemilinearModule
from .monoids import FiniteMonoid, direct_product, quotient_with_section, setup_from_group, submonoid
from .rng import CounterRng

S3 = FiniteMonoid.symmetric3()
A3 = (0, 4, 5)
TRANSPOSITION = (0, 1)


def zmod_trivial(monoid: FiniteMonoid, n: int) -> GModule:
    return GModule.trivial(monoid, FgAbelianGroup.from_invariants([n]))


def zmod_signed(monoid: FiniteMonoid, n: int, exponents) -> GModule:
    car = FgAbelianGroup.from_invariants([n])
    pos = IntMatrix.from_rows([[1]])
    neg = IntMatrix.from_rows([[-1]])
    return GModule(monoid, car,
                   {g: (neg if exponents[g] else pos) for g in range(monoid.size)})


def z2_swap(monoid: FiniteMonoid, exponents) -> GModule:
    car = FgAbelianGroup.free(2)
    eye = IntMatrix.identity(2)
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    return GModule(monoid, car,
                   {g: (swap if exponents[g] else eye) for g in range(monoid.size)})


def standard_monoids():
    c2xz2m = direct_product([FiniteMonoid.cyclic(2), FiniteMonoid.z2_mult()])
    return [
        ("C2", FiniteMonoid.cyclic(2), [0, 1]),
        ("C3", FiniteMonoid.cyclic(3), [0, 0, 0]),
        ("S3", S3, [0, 1, 1, 1, 0, 0]),
        ("Z2x", FiniteMonoid.z2_mult(), [0, 0]),
        ("C2*Z2x", c2xz2m.product, [c2xz2m.coords[x][0] for x in range(4)]),
    ]


def standard_modules(monoid: FiniteMonoid, exponents):
    return [
        ("Z/2", zmod_trivial(monoid, 2)),
        ("Z/3", zmod_trivial(monoid, 3)),
        ("Z/4", zmod_trivial(monoid, 4)),
        ("Z^2-swap", z2_swap(monoid, exponents)),
    ]


def first_difference(f, g):
    size = f.monoid.size
    for args in itertools.product(range(size), repeat=f.degree):
        if f.value(args) != g.value(args):
            return {"arguments": list(args),
                    "lhs": list(f.value(args)), "rhs": list(g.value(args))}
    return None


def _record(items, check, instance, witness=None):
    items.append({
        "check": check,
        "instance": instance,
        "pass": witness is None,
        "witness": witness,
    })


def apply_corruption(tag: str):
    """Deliberately flip one sign family; a testing hook for the
    mutation-sensitivity contract.  Returns a callable undoing the damage
    (in-process callers must use it; one-shot CLI runs may not bother)."""
    from . import doublecomplex, shapiro, spectral

    if tag == "kappa-sign":
        original = shapiro._sign
        shapiro._sign = lambda i: 1
        return lambda: setattr(shapiro, "_sign", original)
    if tag == "shuffle-sign":
        original = spectral._sign_pow
        spectral._sign_pow = lambda e: 1
        return lambda: setattr(spectral, "_sign_pow", original)
    if tag == "delta-sign":
        original = doublecomplex._sign_pow
        doublecomplex._sign_pow = lambda e: 1
        return lambda: setattr(doublecomplex, "_sign_pow", original)
    raise ValueError(f"unknown corruption tag: {tag}")


# ---------------------------------------------------------------------------


def suite_coboundary(seed: int, degree_bound: int = 2, samples: int = 2) -> list:
    items: list = []
    rng = CounterRng(seed)
    for mon_name, monoid, exps in standard_monoids():
        for mod_name, module in standard_modules(monoid, exps):
            inst = f"{mon_name}/{mod_name}"
            witness = None
            for deg in range(degree_bound + 1):
                for _ in range(samples):
                    f = random_cochain(module, deg, rng)
                    dd = coboundary(coboundary(f))
                    if not dd.is_zero():
                        witness = first_difference(dd, zero_cochain(module, deg + 2))
                        witness["degree"] = deg
                        break
                if witness:
                    break
            _record(items, "coboundary.square", inst, witness)
    for mon_name, monoid, exps in standard_monoids()[:3]:
        module = zmod_trivial(monoid, 2)
        a = [g.canonical for g in cohomology_groups(module, 2, "normalised")]
        b = [g.canonical for g in cohomology_groups(module, 2, "full")]
        witness = None if a == b else {"normalised": a, "full": b}
        _record(items, "coboundary.normalised-quasi-iso", f"{mon_name}/Z-2", witness)
    report = dual_basis_witness()
    _record(items, "resolution.dual-basis", "Z2x",
            None if report["pass"] else report)
    return items


def suite_shapiro(seed: int, degree_bound: int = 2) -> list:
    from .shapiro import shapiro_alpha, shapiro_beta, shapiro_context, shapiro_kappa

    items: list = []
    rng = CounterRng(seed)
    cases = [
        ("C2/1-Z2", FiniteMonoid.cyclic(2), (0,), 2),
        ("S3/A3-Z3", S3, A3, 3),
        ("S3/T-Z2", S3, TRANSPOSITION, 2),
    ]
    for inst, group, subgroup, n in cases:
        sub, _, _ = submonoid(group, subgroup)
        ctx = shapiro_context(group, subgroup, zmod_trivial(sub, n))
        wit_chain = wit_ab = wit_hom = None
        for deg in range(degree_bound + 1):
            f = random_cochain(ctx.ind, deg, rng)
            lhs = coboundary(shapiro_alpha(ctx, f))
            rhs = shapiro_alpha(ctx, coboundary(f))
            wit_chain = wit_chain or first_difference(lhs, rhs)
            h = random_cochain(ctx.coeff, deg, rng)
            lhs = coboundary(shapiro_beta(ctx, h))
            rhs = shapiro_beta(ctx, coboundary(h))
            wit_chain = wit_chain or first_difference(lhs, rhs)
            wit_ab = wit_ab or first_difference(
                shapiro_alpha(ctx, shapiro_beta(ctx, h)), h
            )
            rhs = cochain_sub(shapiro_beta(ctx, shapiro_alpha(ctx, f)), f)
            lhs = shapiro_kappa(ctx, coboundary(f))
            if deg >= 1:
                lhs = cochain_add(lhs, coboundary(shapiro_kappa(ctx, f)))
            w = first_difference(lhs, rhs)
            if w is not None:
                w["degree"] = deg
            wit_hom = wit_hom or w
        _record(items, "shapiro.chain-map", inst, wit_chain)
        _record(items, "shapiro.alpha-beta", inst, wit_ab)
        _record(items, "shapiro.homotopy", inst, wit_hom)
        lhs = [g.canonical for g in cohomology_groups(ctx.ind, degree_bound + 1)]
        rhs = [g.canonical for g in cohomology_groups(ctx.coeff, degree_bound + 1)]
        _record(items, "shapiro.cohomology", inst,
                None if lhs == rhs else {"induced": lhs, "subgroup": rhs})
    return items


def suite_shuffle(seed: int, total_bound: int = 4, samples: int = 5) -> list:
    from .spectral import all_injections, complement_and_sign, shuffle_apply, \
        partial_coboundary, twist_tuple

    items: list = []
    rng = CounterRng(seed)
    witness = None
    for total in range(0, 8):
        for p in range(total + 1):
            for mor in all_injections(p, total - p):
                dual = complement_and_sign(mor.phi_star, total - p, p)
                want = 1 if (p * (total - p)) % 2 == 0 else -1
                if mor.sign * dual.sign != want:
                    witness = {"p": p, "q": total - p, "phi": list(mor.phi)}
                    break
    _record(items, "shuffle.sign-product", "p+q<=7", witness)

    setup = setup_from_group(S3)
    witness = None
    for total in range(2, 6):
        for p in range(1, total):
            q = total - p
            for k in range(1, total):
                lhs_set = [m for m in all_injections(p, q)
                           if k in m.phi_star and (k + 1) in m.phi]
                z = tuple(rng.below(setup.size) for _ in range(total))
                for mor in lhs_set:
                    a = mor.phi.index(k + 1)
                    psi = complement_and_sign(
                        mor.phi[:a] + (k,) + mor.phi[a + 1:], p, q)
                    if psi.sign != -mor.sign:
                        witness = witness or {"p": p, "q": q, "k": k,
                                              "phi": list(mor.phi)}
                        continue
                    g1 = twist_tuple(setup, z, mor)
                    g2 = twist_tuple(setup, z, psi)
                    ok = setup.mul(g1[k - 1], g1[k]) == setup.mul(g2[k - 1], g2[k])
                    ok = ok and all(g1[i] == g2[i] for i in range(total)
                                    if i not in (k - 1, k))
                    if not ok:
                        witness = witness or {"p": p, "q": q, "k": k,
                                              "phi": list(mor.phi), "z": list(z)}
    _record(items, "shuffle.pairing", "p+q<=5", witness)

    for inst, setup_i, module in (
        ("S3/Z-3", setup, zmod_trivial(S3, 3)),
        ("C2*Z2x/Z-4", direct_product(
            [FiniteMonoid.cyclic(2), FiniteMonoid.z2_mult()]), None),
    ):
        if module is None:
            module = zmod_trivial(setup_i.product, 4)
        witness = None
        for total in range(2, total_bound + 1):
            for p in range(1, total):
                q = total - p
                for _ in range(samples):
                    f = random_cochain(module, total - 1, rng)
                    lhs = shuffle_apply(setup_i, coboundary(f), p)
                    first = partial_coboundary(
                        setup_i, shuffle_apply(setup_i, f, p), p, q, "q")
                    second = partial_coboundary(
                        setup_i, shuffle_apply(setup_i, f, p - 1), p, q, "p")
                    sgn = 1 if q % 2 == 0 else -1
                    rhs = cochain_add(first, _scale(second, sgn))
                    w = first_difference(lhs, rhs)
                    if w is not None:
                        w.update({"p": p, "q": q})
                        witness = witness or w
        _record(items, "shuffle.interchange", inst, witness)
    return items


def _scale(f, k):
    from .cochains import cochain_smul

    return cochain_smul(k, f)


def suite_spectral(seed: int, n_max: int = 2) -> list:
    from .spectral import (
        FilteredComplex,
        bottom_row_iso,
        compare_first_page,
        compare_second_page,
        convergence_report,
        edge_h1_invariants,
    )

    items: list = []
    setup = setup_from_group(S3)
    qdata = quotient_with_section(setup, A3)
    for inst, module in (
        ("S3/A3-Z3", zmod_trivial(S3, 3)),
        ("S3/A3-Z3-sign", zmod_signed(S3, 3, [0, 1, 1, 1, 0, 0])),
    ):
        fc = FilteredComplex(module, qdata, n_max)
        rep = compare_first_page(fc, n_max)
        bad = {f"{k}": v for k, v in rep.items() if not v["match"]}
        _record(items, "spectral.page1", inst, bad or None)
        rep = compare_second_page(fc, n_max)
        bad = {f"{k}": v for k, v in rep.items() if not v["match"]}
        _record(items, "spectral.page2", inst, bad or None)
        bad = None
        for p in range(n_max + 1):
            r = bottom_row_iso(fc, p)
            if not (r["match"] and r["round_trip"]):
                bad = {"p": p, **r}
                break
        _record(items, "spectral.page1-bottom", inst, bad)
        r = edge_h1_invariants(fc)
        _record(items, "spectral.edge-h1", inst, None if r["match"] else r)
        rep = convergence_report(fc, n_max)
        bad = {str(n): v for n, v in rep.items()
               if not (v["graded_match"] and v["orders_match"])}
        _record(items, "spectral.convergence", inst, bad or None)
    return items


def suite_double(seed: int, n_max: int = 2, samples: int = 5) -> list:
    from .doublecomplex import DoubleComplex, product_with_factor

    items: list = []
    rng = CounterRng(seed)
    cases = [
        ("Z2x*C2/Z-2", FiniteMonoid.z2_mult(), FiniteMonoid.cyclic(2), 2),
        ("C2*C2/Z-4", FiniteMonoid.cyclic(2), FiniteMonoid.cyclic(2), 4),
    ]
    for inst, dmon, gmon, coeff in cases:
        g = setup_from_group(gmon)
        prod = product_with_factor(g, dmon)
        module = zmod_trivial(prod.product, coeff)
        dc = DoubleComplex(dmon, g, module, n_max)
        witness = None
        try:
            dc.verify_identities(rng, samples=2, degree_bound=min(2, n_max))
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            witness = {"error": str(exc)}
        _record(items, "double.identities", inst, witness)
        rep = dc.quasi_iso_report(n_max)
        bad = {str(n): v for n, v in rep.items() if not v["match"]}
        _record(items, "double.quasi-iso", inst, bad or None)
        witness = None
        for p in range(n_max + 1):
            for q in range(n_max + 1 - p):
                u = dc.random_block(p, q, rng)
                a = dc.alpha(dc.sharp(u))
                for (pp, qq), blk in a.items():
                    want = u if (pp, qq) == (p, q) else dc.zero_block(pp, qq)
                    if blk.values != want.values:
                        witness = witness or {"p": p, "q": q, "block": [pp, qq]}
        _record(items, "double.section", inst, witness)
        witness = None
        for n in range(1, n_max + 1):
            for _ in range(samples):
                u = {(p, n - p): dc.random_block(p, n - p, rng)
                     for p in range(n + 1)}
                lhs = coboundary(dc.extend_zero_total(u))
                rhs = dc.extend_zero_total(dc.total_diff(u))
                w = first_difference(lhs, rhs)
                if w is not None:
                    w["n"] = n
                    witness = witness or w
        _record(items, "double.extension-chain-map", inst, witness)
    return items


def suite_torsor(seed: int) -> list:
    from .torsors import (
        cocycle_from_extension,
        cocycle_to_torsor,
        extension_from_cocycle,
        one_cocycle_classes,
        torsor_to_cocycle,
        torsors_isomorphic,
    )

    items: list = []
    c2 = FiniteMonoid.cyclic(2)
    cases = [
        ("C2/Z3-inversion", zmod_signed(c2, 3, [0, 1]),
         SemilinearModule.integers_mod_signed(c2, 3, [0, 1])),
        ("C2/Z4-trivial", zmod_trivial(c2, 4),
         SemilinearModule.integers_mod_trivial(c2, 4)),
    ]
    for inst, module, sm in cases:
        cx = CochainComplex(module, 1)
        classes = one_cocycle_classes(module)
        h1 = cohomology_groups(module, 1)[1]
        witness = None
        if h1.order() != len(classes):
            witness = {"classes": len(classes), "h1_order": h1.order()}
        _record(items, "torsor.class-count", inst, witness)
        witness = None
        for cls in classes:
            back = torsor_to_cocycle(cocycle_to_torsor(cls[0]))
            if not cx.cohomologous(back, cls[0]):
                witness = {"cocycle": [list(v) for v in cls[0].values]}
                break
        _record(items, "torsor.round-trip", inst, witness)
        torsors = [cocycle_to_torsor(cls[0]) for cls in classes]
        witness = None
        for i, t1 in enumerate(torsors):
            for j, t2 in enumerate(torsors):
                if torsors_isomorphic(t1, t2) != (i == j):
                    witness = {"classes": [i, j]}
        _record(items, "torsor.classes-distinct", inst, witness)
        witness = None
        for cls in classes:
            ext = extension_from_cocycle(sm, cls[0])
            back = cocycle_from_extension(ext)
            if not cx.cohomologous(back, cls[0]):
                witness = {"cocycle": [list(v) for v in cls[0].values]}
                break
        _record(items, "extension.round-trip", inst, witness)
    return items


SUITES = {
    "coboundary": suite_coboundary,
    "shapiro": suite_shapiro,
    "shuffle": suite_shuffle,
    "spectral": suite_spectral,
    "double": suite_double,
    "torsor": suite_torsor,
}


def run_suites(names, seed: int, **bounds) -> list:
    items: list = []
    for name in names:
        fn = SUITES[name]
        kwargs = {}
        import inspect

        sig = inspect.signature(fn)
        for k, v in bounds.items():
            if k in sig.parameters and v is not None:
                kwargs[k] = v
        items.extend(fn(seed, **kwargs))
    return items
