"""The double complex of a product monoid D x G and its comparison with the
row complex.

Blocks are normalised tables D^p x G^q -> A; the D-direction differential
carries the conjugation convention (trivial for an honest direct product),
the G-direction is the usual coboundary on the inner arguments.  The
comparison maps are the blockwise shuffle-restriction and the section
reading a block as a product cochain; extension along zero provides the
chain-level quasi-inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .abelian import FgAbelianGroup, LatticeSubquotient, PresentedComplex, col_addmul
from .cochains import Cochain, CochainComplex, cochain_from_table, coboundary
from .modules import GModule, restrict_module
from .monoids import (
    FiniteMonoid,
    QuotientData,
    SetupMonoid,
    direct_product,
    quotient_with_section,
    submonoid,
)
from .spectral import lift_cochain, shuffle_apply


class DoubleComplexError(Exception):
    pass


class DNotCommutative(DoubleComplexError):
    pass


class NotChainMap(DoubleComplexError):
    pass


class ActionNotTrivial(DoubleComplexError):
    pass


def _sign_pow(exponent: int) -> int:
    # isolated so the mutation-sensitivity suite can corrupt it
    return -1 if exponent % 2 else 1


def product_with_factor(g: SetupMonoid, d: FiniteMonoid) -> SetupMonoid:
    """The product monoid with d appended as a last commutative factor."""
    if not d.is_commutative():
        raise DNotCommutative("the appended factor must be commutative")
    return direct_product([g.group_part, *g.monoid_parts, d])


@dataclass(frozen=True)
class BiCochain:
    """A normalised table D^p x G^q -> A (values reduced)."""

    p: int
    q: int
    dsize: int
    gsize: int
    values: tuple = field(repr=False)

    def value(self, ds, xs) -> tuple:
        idx = 0
        for y in ds:
            idx = idx * self.dsize + y
        for x in xs:
            idx = idx * self.gsize + x
        return self.values[idx]

    def is_zero(self) -> bool:
        zero = self.values[0] if self.values else ()
        return all(not any(v) for v in self.values)


class DoubleComplex:
    """C^{p,q} = p-tables over D of q-cochains of G, with coefficients in a
    module over the product monoid."""

    def __init__(self, dmon: FiniteMonoid, g: SetupMonoid, module: GModule,
                 n_max: int) -> None:
        prod = product_with_factor(g, dmon)
        if module.monoid.table != prod.product.table:
            raise ValueError("module must live over the product monoid")
        self.dmon = dmon
        self.g = g
        self.module = module
        self.prod = prod
        self.n_max = n_max
        normal = [
            prod.coord_index[(*g.coords[x], dmon.identity)]
            for x in range(g.size)
        ]
        # the comparison maps assume the representative of the coset of d is
        # exactly (1, d), so fix the section rather than relying on a policy
        ident_coords = (g.group_part.identity,
                        *(m.identity for m in g.monoid_parts))
        section = [prod.coord_index[(*ident_coords, d)] for d in range(dmon.size)]
        self.qdata = quotient_with_section(prod, normal, section)
        self._dstar_rank = [None] * dmon.size
        k = 0
        for d in range(dmon.size):
            if d != dmon.identity:
                self._dstar_rank[d] = k
                k += 1
        self._gstar_rank = [None] * g.size
        k = 0
        for x in range(g.size):
            if x != g.identity:
                self._gstar_rank[x] = k
                k += 1
        # quotient elements <-> D elements
        self.d_of_coset = [None] * self.qdata.quotient.size
        self.coset_of_d = [None] * dmon.size
        for d in range(dmon.size):
            c = self.qdata.proj[self.embed_d(d)]
            self.d_of_coset[c] = d
            self.coset_of_d[d] = c
        self._tot_pres: PresentedComplex | None = None
        self._row_cx: CochainComplex | None = None

    # -- element plumbing

    def embed_d(self, d: int) -> int:
        return self.prod.coord_index[
            (self.g.group_part.identity,
             *(m.identity for m in self.g.monoid_parts), d)
        ]

    def embed_g(self, x: int) -> int:
        return self.prod.coord_index[(*self.g.coords[x], self.dmon.identity)]

    def pair(self, d: int, x: int) -> int:
        return self.prod.coord_index[(*self.g.coords[x], d)]

    def proj_d(self, z: int) -> int:
        return self.prod.coords[z][-1]

    def proj_g(self, z: int) -> int:
        return self.g.coord_index[self.prod.coords[z][:-1]]

    # -- blocks

    def zero_block(self, p: int, q: int) -> BiCochain:
        count = self.dmon.size ** p * self.g.size ** q
        zero = self.module.carrier.zero_elem()
        return BiCochain(p, q, self.dmon.size, self.g.size, (zero,) * count)

    def block_from_function(self, p: int, q: int, fn) -> BiCochain:
        car = self.module.carrier
        vals = []
        for ds in itertools.product(range(self.dmon.size), repeat=p):
            for xs in itertools.product(range(self.g.size), repeat=q):
                if self.dmon.identity in ds or self.g.identity in xs:
                    vals.append(car.zero_elem())
                else:
                    vals.append(car.reduce(fn(ds, xs)))
        return BiCochain(p, q, self.dmon.size, self.g.size, tuple(vals))

    def random_block(self, p: int, q: int, rng) -> BiCochain:
        car = self.module.carrier
        elems = car.elements
        return self.block_from_function(
            p, q, lambda ds, xs: elems[rng.below(len(elems))]
        )

    def block_add(self, u: BiCochain, v: BiCochain) -> BiCochain:
        car = self.module.carrier
        return BiCochain(u.p, u.q, u.dsize, u.gsize,
                         tuple(car.add(a, b) for a, b in zip(u.values, v.values)))

    def block_sub(self, u: BiCochain, v: BiCochain) -> BiCochain:
        car = self.module.carrier
        return BiCochain(u.p, u.q, u.dsize, u.gsize,
                         tuple(car.sub(a, b) for a, b in zip(u.values, v.values)))

    # -- differentials

    def delta(self, u: BiCochain) -> BiCochain:
        """The D-direction coboundary C^{p,q} -> C^{p+1,q}; the leading term
        acts through the module and conjugates the inner arguments (a no-op
        for an honest product, kept for the convention)."""
        p, q = u.p, u.q
        car = self.module.carrier
        m = car.ngens
        vals = []
        for ds in itertools.product(range(self.dmon.size), repeat=p + 1):
            y1 = self.embed_d(ds[0])
            for xs in itertools.product(range(self.g.size), repeat=q):
                conj = tuple(
                    self.proj_g(self.prod.conjugate(y1, self.embed_g(x)))
                    for x in xs
                )
                acc = list(self.module.action[y1].apply(u.value(ds[1:], conj)))
                sign = 1
                for i in range(1, p + 1):
                    sign = _sign_pow(i)
                    merged = ds[: i - 1] + (self.dmon.mul(ds[i - 1], ds[i]),) + ds[i + 1 :]
                    v = u.value(merged, xs)
                    for a in range(m):
                        acc[a] += sign * v[a]
                sign = _sign_pow(p + 1)
                v = u.value(ds[:p], xs)
                for a in range(m):
                    acc[a] += sign * v[a]
                vals.append(car.reduce(tuple(acc)))
        return BiCochain(p + 1, q, self.dmon.size, self.g.size, tuple(vals))

    def partial(self, u: BiCochain) -> BiCochain:
        """The G-direction coboundary C^{p,q} -> C^{p,q+1}."""
        p, q = u.p, u.q
        car = self.module.carrier
        m = car.ngens
        vals = []
        for ds in itertools.product(range(self.dmon.size), repeat=p):
            for xs in itertools.product(range(self.g.size), repeat=q + 1):
                x1 = self.embed_g(xs[0])
                acc = list(self.module.action[x1].apply(u.value(ds, xs[1:])))
                sign = 1
                for i in range(1, q + 1):
                    sign = _sign_pow(i)
                    merged = xs[: i - 1] + (self.g.mul(xs[i - 1], xs[i]),) + xs[i + 1 :]
                    v = u.value(ds, merged)
                    for a in range(m):
                        acc[a] += sign * v[a]
                sign = _sign_pow(q + 1)
                v = u.value(ds, xs[:q])
                for a in range(m):
                    acc[a] += sign * v[a]
                vals.append(car.reduce(tuple(acc)))
        return BiCochain(p, q + 1, self.dmon.size, self.g.size, tuple(vals))

    def verify_identities(self, rng, samples: int = 2, degree_bound: int = 2) -> None:
        """delta^2 = 0, partial^2 = 0 and commutation, on random blocks."""
        for p in range(degree_bound + 1):
            for q in range(degree_bound + 1 - p):
                for _ in range(samples):
                    u = self.random_block(p, q, rng)
                    if not self.delta(self.delta(u)).is_zero():
                        raise DoubleComplexError(f"delta^2 != 0 at ({p}, {q})")
                    if not self.partial(self.partial(u)).is_zero():
                        raise DoubleComplexError(f"partial^2 != 0 at ({p}, {q})")
                    lhs = self.delta(self.partial(u))
                    rhs = self.partial(self.delta(u))
                    if not self.block_sub(lhs, rhs).is_zero():
                        raise DoubleComplexError(
                            f"differentials do not commute at ({p}, {q})"
                        )

    # -- total complex elements

    def total_zero(self, n: int) -> dict:
        return {(p, n - p): self.zero_block(p, n - p) for p in range(n + 1)}

    def total_add(self, u: dict, v: dict) -> dict:
        return {k: self.block_add(u[k], v[k]) for k in u}

    def total_sub(self, u: dict, v: dict) -> dict:
        return {k: self.block_sub(u[k], v[k]) for k in u}

    def total_diff(self, u: dict) -> dict:
        """Delta = partial + (-1)^q delta, blockwise."""
        n = sum(next(iter(u)))
        out = self.total_zero(n + 1)
        for (p, q), blk in u.items():
            part = self.partial(blk)
            out[(p, q + 1)] = self.block_add(out[(p, q + 1)], part)
            dblk = self.delta(blk)
            if _sign_pow(q) < 0:
                car = self.module.carrier
                dblk = BiCochain(dblk.p, dblk.q, dblk.dsize, dblk.gsize,
                                 tuple(car.neg(v) for v in dblk.values))
            out[(p + 1, q)] = self.block_add(out[(p + 1, q)], dblk)
        return out

    def total_is_zero(self, u: dict) -> bool:
        return all(b.is_zero() for b in u.values())

    # -- comparison maps

    def restrict_block(self, f: Cochain, p: int) -> BiCochain:
        """Read a degree-(p+q) product cochain as a block: G-arguments
        first, D-arguments last."""
        q = f.degree - p
        def fn(ds, xs):
            args = tuple(self.embed_g(x) for x in xs) + tuple(
                self.embed_d(y) for y in ds
            )
            return f.value(args)
        return self.block_from_function(p, q, fn)

    def alpha(self, f: Cochain) -> dict:
        """Blockwise shuffle-then-restrict."""
        n = f.degree
        return {
            (p, n - p): self.restrict_block(shuffle_apply(self.prod, f, p), p)
            for p in range(n + 1)
        }

    def sharp(self, u: BiCochain) -> Cochain:
        """Read a block as a product cochain through the coordinate
        projections."""
        p, q = u.p, u.q
        def fn(args):
            ds = tuple(self.proj_d(z) for z in args[q:])
            xs = tuple(self.proj_g(z) for z in args[:q])
            return u.value(ds, xs)
        return _cochain_from_fn(self.module, p + q, fn)

    def extend_zero(self, u: BiCochain) -> Cochain:
        """The closed form x_1* ... x_q* . sharp(u)(x), landing in
        filtration stage p."""
        p, q = u.p, u.q
        sharp = self.sharp(u)
        star = self.qdata.star
        mod = self.module
        def fn(args):
            acted = sharp.value(args)
            for i in range(q - 1, -1, -1):
                acted = mod.act(star[args[i]], acted)
            return acted
        return _cochain_from_fn(self.module, p + q, fn)

    def extend_zero_total(self, u: dict) -> Cochain:
        out = None
        for blk in u.values():
            g = self.extend_zero(blk)
            out = g if out is None else _cochain_add(out, g)
        return out

    def extend_zero_via_lift(self, u: BiCochain) -> Cochain:
        """The same element through the recursive extension procedure, which
        runs at inner degree one higher than the block's."""
        p, q = u.p, u.q
        if q < 1:
            return self.extend_zero(u)
        sub, to_ambient, to_local = submonoid(
            self.prod.product, sorted(self.qdata.normal)
        )
        mod_u = restrict_module(self.module, sub, to_ambient)
        table = {}
        for cosets in itertools.product(range(self.qdata.quotient.size), repeat=p):
            ds = tuple(self.d_of_coset[c] for c in cosets)
            vals = []
            for xs in itertools.product(range(sub.size), repeat=q):
                gs = tuple(self.proj_g(to_ambient[x]) for x in xs)
                vals.append(u.value(ds, gs))
            table[cosets] = cochain_from_table(mod_u, q, vals)
        from .cochains import zero_cochain

        return lift_cochain(
            table, zero_cochain(self.module, p + q + 1), self.qdata, p, q + 1
        )

    # -- the two cohomology routes

    @property
    def row_complex(self) -> CochainComplex:
        if self._row_cx is None:
            self._row_cx = CochainComplex(self.module, self.n_max, "normalised")
        return self._row_cx

    def block_dims(self, n: int) -> dict:
        m = self.module.carrier.ngens
        return {
            (p, n - p): (self.dmon.size - 1) ** p * (self.g.size - 1) ** (n - p) * m
            for p in range(n + 1)
        }

    def _block_slots(self, p: int, q: int):
        dstar = [d for d in range(self.dmon.size) if d != self.dmon.identity]
        gstar = [x for x in range(self.g.size) if x != self.g.identity]
        return itertools.product(
            itertools.product(dstar, repeat=p), itertools.product(gstar, repeat=q)
        )

    def block_slot_index(self, p, q, ds, xs) -> int | None:
        idx = 0
        for y in ds:
            r = self._dstar_rank[y]
            if r is None:
                return None
            idx = idx * (self.dmon.size - 1) + r
        for x in xs:
            r = self._gstar_rank[x]
            if r is None:
                return None
            idx = idx * (self.g.size - 1) + r
        return idx

    @property
    def tot_presented(self) -> PresentedComplex:
        """The total complex as presented lattices (degrees 0..n_max+1)."""
        if self._tot_pres is not None:
            return self._tot_pres
        top = self.n_max + 1
        m = self.module.carrier.ngens
        dims = []
        offsets = []
        for n in range(top + 1):
            bd = self.block_dims(n)
            off = {}
            total = 0
            for p in range(n + 1):
                off[(p, n - p)] = total
                total += bd[(p, n - p)]
            dims.append(total)
            offsets.append(off)
        self._tot_offsets = offsets
        rels = []
        for n in range(top + 1):
            cols = []
            for s in range(dims[n] // m if m else 0):
                for c in self.module.carrier._rel_cols:
                    cols.append({s * m + r: v for r, v in c.items()})
            rels.append(cols)
        diffs = []
        for n in range(top):
            cols = [dict() for _ in range(dims[n])]
            for p in range(n + 1):
                q = n - p
                self._assemble_partial(cols, n, p, q, offsets)
                self._assemble_delta(cols, n, p, q, offsets)
            diffs.append(cols)
        e = self.row_complex.coefficient_exponent
        self._tot_pres = PresentedComplex(
            dims, rels, diffs, [e] * (top + 1)
        )
        return self._tot_pres

    def _assemble_partial(self, cols, n, p, q, offsets) -> None:
        """G-direction block differential into (p, q+1)."""
        m = self.module.carrier.ngens
        src_off = offsets[n][(p, q)]
        dst_off = offsets[n + 1][(p, q + 1)]
        dstar = [d for d in range(self.dmon.size) if d != self.dmon.identity]
        gstar = [x for x in range(self.g.size) if x != self.g.identity]
        row = 0
        for ds in itertools.product(dstar, repeat=p):
            for xs in itertools.product(gstar, repeat=q + 1):
                terms = []
                t = self.block_slot_index(p, q, ds, xs[1:])
                if t is not None:
                    terms.append((t, self.module.action[self.embed_g(xs[0])]))
                for i in range(1, q + 1):
                    merged = xs[: i - 1] + (self.g.mul(xs[i - 1], xs[i]),) + xs[i + 1 :]
                    t = self.block_slot_index(p, q, ds, merged)
                    if t is not None:
                        terms.append((t, _sign_pow(i)))
                t = self.block_slot_index(p, q, ds, xs[:q])
                if t is not None:
                    terms.append((t, _sign_pow(q + 1)))
                for t, coeff in terms:
                    if isinstance(coeff, int):
                        for a in range(m):
                            col = cols[src_off + t * m + a]
                            rr = dst_off + row * m + a
                            w = col.get(rr, 0) + coeff
                            if w:
                                col[rr] = w
                            else:
                                col.pop(rr, None)
                    else:
                        for a in range(m):
                            for b in range(m):
                                v = coeff.at(a, b)
                                if v:
                                    col = cols[src_off + t * m + b]
                                    rr = dst_off + row * m + a
                                    w = col.get(rr, 0) + v
                                    if w:
                                        col[rr] = w
                                    else:
                                        col.pop(rr, None)
                row += 1

    def _assemble_delta(self, cols, n, p, q, offsets) -> None:
        """D-direction block differential into (p+1, q), with sign (-1)^q."""
        m = self.module.carrier.ngens
        src_off = offsets[n][(p, q)]
        dst_off = offsets[n + 1][(p + 1, q)]
        outer_sign = _sign_pow(q)
        dstar = [d for d in range(self.dmon.size) if d != self.dmon.identity]
        gstar = [x for x in range(self.g.size) if x != self.g.identity]
        row = 0
        for ds in itertools.product(dstar, repeat=p + 1):
            y1 = self.embed_d(ds[0])
            for xs in itertools.product(gstar, repeat=q):
                conj = tuple(
                    self.proj_g(self.prod.conjugate(y1, self.embed_g(x)))
                    for x in xs
                )
                terms = []
                t = self.block_slot_index(p, q, ds[1:], conj)
                if t is not None:
                    terms.append((t, self.module.action[y1]))
                for i in range(1, p + 1):
                    merged = ds[: i - 1] + (self.dmon.mul(ds[i - 1], ds[i]),) + ds[i + 1 :]
                    t = self.block_slot_index(p, q, merged, xs)
                    if t is not None:
                        terms.append((t, _sign_pow(i)))
                t = self.block_slot_index(p, q, ds[:p], xs)
                if t is not None:
                    terms.append((t, _sign_pow(p + 1)))
                for t, coeff in terms:
                    if isinstance(coeff, int):
                        for a in range(m):
                            col = cols[src_off + t * m + a]
                            rr = dst_off + row * m + a
                            w = col.get(rr, 0) + outer_sign * coeff
                            if w:
                                col[rr] = w
                            else:
                                col.pop(rr, None)
                    else:
                        for a in range(m):
                            for b in range(m):
                                v = coeff.at(a, b)
                                if v:
                                    col = cols[src_off + t * m + b]
                                    rr = dst_off + row * m + a
                                    w = col.get(rr, 0) + outer_sign * v
                                    if w:
                                        col[rr] = w
                                    else:
                                        col.pop(rr, None)
                row += 1

    def tot_cohomology(self, n: int) -> LatticeSubquotient:
        return self.tot_presented.cohomology(n)

    def total_to_vec(self, u: dict) -> dict:
        n = sum(next(iter(u)))
        offsets = None
        self.tot_presented
        offsets = self._tot_offsets[n]
        m = self.module.carrier.ngens
        out: dict[int, int] = {}
        for (p, q), blk in u.items():
            off = offsets[(p, q)]
            s = 0
            for ds, xs in self._block_slots(p, q):
                v = blk.value(ds, xs)
                for a in range(m):
                    if v[a]:
                        out[off + s * m + a] = v[a]
                s += 1
        return out

    # -- reports

    def quasi_iso_report(self, n_max: int | None = None) -> dict:
        n_max = self.n_max if n_max is None else n_max
        out = {}
        for n in range(n_max + 1):
            lhs = self.row_complex.cohomology(n).group.canonical
            rhs = self.tot_cohomology(n).group.canonical
            out[n] = {"product": lhs, "total": rhs, "match": lhs == rhs}
        return out

    def surjectivity_witness(self, w: dict) -> Cochain:
        """A product cocycle hitting the class of a total cocycle, via
        extension along zero; checked pointwise."""
        if not self.total_is_zero(self.total_diff(w)):
            raise DoubleComplexError("witness input must be a total cocycle")
        f = self.extend_zero_total(w)
        if not coboundary(f).is_zero():
            raise DoubleComplexError("extension along zero broke the cocycle")
        a = self.alpha(f)
        if not self.total_is_zero(self.total_sub(a, w)):
            raise DoubleComplexError("alpha does not recover the total cocycle")
        return f

    def injectivity_witness(self, f: Cochain, u: dict) -> Cochain:
        """Given a product cocycle whose image is the total boundary of u,
        produce h with f = dh, following the stagewise descent."""
        from .cochains import cochain_sub, zero_cochain

        n = f.degree
        if not coboundary(f).is_zero():
            raise DoubleComplexError("descent input must be a cocycle")
        if not self.total_is_zero(self.total_sub(self.alpha(f), self.total_diff(u))):
            raise DoubleComplexError("alpha(f) must bound the given total element")
        fbar = f
        ubar = dict(u)
        h = zero_cochain(self.module, n - 1)
        sub, to_ambient, to_local = submonoid(
            self.prod.product, sorted(self.qdata.normal)
        )
        mod_u = restrict_module(self.module, sub, to_ambient)
        for p in range(n - 1):
            blk = ubar[(p, n - 1 - p)]
            table = {}
            for cosets in itertools.product(
                range(self.qdata.quotient.size), repeat=p
            ):
                ds = tuple(self.d_of_coset[c] for c in cosets)
                vals = []
                for xs in itertools.product(range(sub.size), repeat=n - 1 - p):
                    gs = tuple(self.proj_g(to_ambient[x]) for x in xs)
                    vals.append(blk.value(ds, gs))
                table[cosets] = cochain_from_table(mod_u, n - 1 - p, vals)
            g = lift_cochain(table, fbar, self.qdata, p, n - p)
            fbar = cochain_sub(fbar, coboundary(g))
            ubar = self.total_sub(ubar, self.alpha(g))
            h = _cochain_add(h, g)
        g = self.sharp(ubar[(n - 1, 0)])
        fbar = cochain_sub(fbar, coboundary(g))
        h = _cochain_add(h, g)
        if not fbar.is_zero():
            raise DoubleComplexError("descent did not exhaust the cocycle")
        return h


def _cochain_from_fn(module: GModule, degree: int, fn) -> Cochain:
    mon = module.monoid
    car = module.carrier
    vals = []
    for args in itertools.product(range(mon.size), repeat=degree):
        vals.append(car.reduce(fn(args)))
    return Cochain(mon, module, degree, tuple(vals))


def _cochain_add(f: Cochain, g: Cochain) -> Cochain:
    car = f.module.carrier
    return Cochain(f.monoid, f.module, f.degree,
                   tuple(car.add(a, b) for a, b in zip(f.values, g.values)))


def build_double(dmon: FiniteMonoid, g: SetupMonoid, module: GModule,
                 n_max: int, rng=None) -> DoubleComplex:
    """Construct and (on samples) verify the double complex."""
    dc = DoubleComplex(dmon, g, module, n_max)
    if rng is not None:
        dc.verify_identities(rng)
    return dc


# ---------------------------------------------------------------------------
# mapping fiber (for free commutative monoid factors)


def chain_endomorphism_columns(cx: CochainComplex, phi_matrix) -> list[list[dict]]:
    """Per-degree sparse columns of the endomorphism induced on cochains by
    a coefficient endomorphism (value postcomposition)."""
    m = cx.module.carrier.ngens
    out = []
    for n in range(cx.max_degree + 2):
        cols = []
        for s in range(cx.slot_count(n)):
            for b in range(m):
                col = {}
                for a in range(m):
                    v = phi_matrix.at(a, b)
                    if v:
                        col[s * m + a] = v
                cols.append(col)
        out.append(cols)
    return out


def mapping_fiber(cx: CochainComplex, phi_cols) -> PresentedComplex:
    """The total complex of (C --(phi - 1)--> C): degree n carries
    C^n + C^{n-1} with differential (a, b) -> (da, (-1)^n (phi-1)a + db).

    Raises NotChainMap unless phi commutes with the differential modulo
    relations.
    """
    pres = cx.presented
    top = len(pres.dims) - 1
    for n in range(top):
        ech = pres.rel_echelon(n + 1)
        for j in range(pres.dims[n]):
            lhs = pres.differential_image(phi_cols[n][j], n)
            rhs: dict = {}
            for r, v in pres.diffs[n][j].items():
                col_addmul(rhs, phi_cols[n + 1][r], v)
            col_addmul(lhs, rhs, -1)
            if not ech.contains(lhs):
                raise NotChainMap(f"endomorphism does not commute at degree {n}")

    dims = [pres.dims[n] + (pres.dims[n - 1] if n else 0) for n in range(top + 1)]
    rels = []
    for n in range(top + 1):
        cols = list(pres.rels[n])
        if n:
            base = pres.dims[n]
            cols = cols + [
                {base + r: v for r, v in c.items()} for c in pres.rels[n - 1]
            ]
        rels.append(cols)
    diffs = []
    for n in range(top):
        cols = []
        base_src = pres.dims[n]
        base_dst = pres.dims[n + 1]
        sign = _sign_pow(n)
        for j in range(pres.dims[n]):
            col = dict(pres.diffs[n][j])
            psi: dict = {}
            col_addmul(psi, phi_cols[n][j], 1)
            psi[j] = psi.get(j, 0) - 1
            psi = {k: v for k, v in psi.items() if v}
            for r, v in psi.items():
                col[base_dst + r] = col.get(base_dst + r, 0) + sign * v
            cols.append({k: v for k, v in col.items() if v})
        if n:
            for j in range(pres.dims[n - 1]):
                col = {base_dst + r: v for r, v in pres.diffs[n - 1][j].items()}
                cols.append(col)
        diffs.append(cols)
    return PresentedComplex(dims, rels, diffs, pres.exponents)


def iterated_mapping_fiber(cx: CochainComplex, r: int) -> PresentedComplex:
    """r applications of the identity-operator fiber: models r free
    commutative generators acting trivially."""
    pres = mapping_fiber(cx, chain_endomorphism_columns(
        cx, _identity_matrix(cx.module.carrier.ngens)
    ))
    for _ in range(r - 1):
        pres = _fiber_of_presented(pres)
    return pres


def _identity_matrix(n):
    from .abelian import IntMatrix

    return IntMatrix.identity(n)


def _fiber_of_presented(pres: PresentedComplex) -> PresentedComplex:
    """Mapping fiber of (phi - 1) = 0 over an already-presented complex."""
    top = len(pres.dims) - 1
    dims = [pres.dims[n] + (pres.dims[n - 1] if n else 0) for n in range(top + 1)]
    rels = []
    for n in range(top + 1):
        cols = list(pres.rels[n])
        if n:
            base = pres.dims[n]
            cols = cols + [
                {base + r: v for r, v in c.items()} for c in pres.rels[n - 1]
            ]
        rels.append(cols)
    diffs = []
    for n in range(top):
        cols = [dict(pres.diffs[n][j]) for j in range(pres.dims[n])]
        base_dst = pres.dims[n + 1]
        if n:
            for j in range(pres.dims[n - 1]):
                cols.append(
                    {base_dst + r: v for r, v in pres.diffs[n - 1][j].items()}
                )
        diffs.append(cols)
    return PresentedComplex(dims, rels, diffs, pres.exponents)


# ---------------------------------------------------------------------------
# splittings


def product_module(g: SetupMonoid, dmon: FiniteMonoid, carrier: FgAbelianGroup,
                   g_action, d_action) -> GModule:
    """A module over the product monoid from commuting factor actions."""
    prod = product_with_factor(g, dmon)
    action = {}
    for z in range(prod.size):
        coords = prod.coords[z]
        gx = g.coord_index[coords[:-1]]
        action[z] = d_action[coords[-1]] @ g_action[gx]
    return GModule(prod.product, carrier, action)


def monoid_shapiro_report(dmon: FiniteMonoid, group: FiniteMonoid, subgroup,
                          h_module: GModule, d_action, n_max: int) -> dict:
    """Induction from a subgroup in the presence of a commutative factor:
    compare the product cohomology with induced coefficients against the
    product cohomology over the subgroup, through both total complexes.

    ``h_module`` is the coefficient module over the subgroup (as its own
    monoid); ``d_action`` gives the commuting factor action on the carrier.
    """
    from .cochains import cohomology_groups
    from .modules import induced_module
    from .monoids import coset_rep_map, setup_from_group
    from .shapiro import shapiro_context

    g_setup = setup_from_group(group)
    ctx = shapiro_context(group, subgroup, h_module)
    ind = ctx.ind
    ncos = ctx.ncosets
    m = h_module.carrier.ngens

    def blockdiag(mat):
        cols = [dict() for _ in range(ncos * m)]
        for k in range(ncos):
            for b in range(m):
                for a in range(m):
                    v = mat.at(a, b)
                    if v:
                        cols[k * m + b][k * m + a] = v
        return _int_matrix_from_cols(cols, ncos * m)

    ind_d_action = {d: blockdiag(d_action[d]) for d in range(dmon.size)}
    module_dg = product_module(g_setup, dmon, ind.carrier, ind.action, ind_d_action)

    h_setup = setup_from_group(h_module.monoid)
    module_dh = product_module(h_setup, dmon, h_module.carrier,
                               h_module.action, d_action)

    big = cohomology_groups(module_dg, n_max)
    dc_g = DoubleComplex(dmon, g_setup, module_dg, n_max)
    dc_h = DoubleComplex(dmon, h_setup, module_dh, n_max)
    small = cohomology_groups(module_dh, n_max)
    out = {}
    for n in range(n_max + 1):
        chain = {
            "product_induced": big[n].canonical,
            "total_induced": dc_g.tot_cohomology(n).group.canonical,
            "total_subgroup": dc_h.tot_cohomology(n).group.canonical,
            "product_subgroup": small[n].canonical,
        }
        chain["match"] = len(set(chain.values())) == 1
        out[n] = chain
    return out


def _int_matrix_from_cols(cols, nrows):
    from .abelian import IntMatrix

    return IntMatrix.from_columns(cols, nrows)


def splitting_report(dc: DoubleComplex, n_max: int) -> dict:
    """Product cohomology against the sum of mixed terms, for a finite
    factor acting trivially."""
    from .cochains import cohomology_groups
    from .abelian import direct_sum_canonical

    for d in range(dc.dmon.size):
        act = dc.module.action[dc.embed_d(d)]
        eye = _identity_matrix(dc.module.carrier.ngens)
        diff = act - eye
        if not all(dc.module.carrier.rel_echelon.contains(c)
                   for c in diff.columns_sparse()):
            raise ActionNotTrivial(f"factor element {d} acts nontrivially")
    sub, to_ambient, _ = submonoid(dc.prod.product,
                                   [dc.embed_g(x) for x in range(dc.g.size)])
    mod_g = restrict_module(dc.module, sub, to_ambient)
    hs = cohomology_groups(mod_g, n_max)
    over_d = {
        q: cohomology_groups(GModule.trivial(dc.dmon, hs[q]), n_max)
        for q in range(n_max + 1)
    }
    out = {}
    for n in range(n_max + 1):
        parts = [over_d[n - p][p].canonical for p in range(n + 1)]
        want = direct_sum_canonical(*parts)
        got = dc.row_complex.cohomology(n).group.canonical
        out[n] = {"product": got, "sum_of_mixed": want, "match": got == want}
    return out


def free_monoid_splitting_report(module_g: GModule, r: int, n_max: int) -> dict:
    """Cohomology of (free commutative rank-r monoid) x G with trivial
    factor action, computed through iterated mapping fibers, against the
    binomial sum of shifted cohomologies."""
    from math import comb

    from .abelian import direct_sum_canonical
    from .cochains import cohomology_groups

    cx = CochainComplex(module_g, n_max, "normalised")
    pres = iterated_mapping_fiber(cx, r)
    hs = [cx.cohomology(n).group.canonical for n in range(n_max + 1)]
    out = {}
    for n in range(n_max + 1):
        got = pres.cohomology(n).group.canonical
        parts = []
        for k in range(min(r, n) + 1):
            parts.extend([hs[n - k]] * comb(r, k))
        want = direct_sum_canonical(*parts)
        out[n] = {"fiber": got, "binomial_sum": want, "match": got == want}
    return out
