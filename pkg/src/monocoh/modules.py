"""Modules over a finite monoid: actions by integer matrices, invariants,
induced modules, short exact sequences with set-sections, and semilinear
data over finite commutative rings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .abelian import (
    AbHom,
    AbelianError,
    Echelon,
    FgAbelianGroup,
    IntMatrix,
    LatticeSubquotient,
    col_addmul,
    preimage_lattice,
    span_echelon,
    vec_to_col,
)
from .monoids import CosetRepMap, FiniteMonoid


class ModuleError(Exception):
    pass


class NotExact(ModuleError):
    def __init__(self, spot: str):
        self.spot = spot
        super().__init__(f"sequence is not exact: {spot}")


class NotEquivariant(ModuleError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"map does not commute with the action at {witness}")


class NotSemilinear(ModuleError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"semilinearity fails at {witness}")


class GModule:
    """An abelian group with a left action of a finite monoid by
    endomorphism matrices.  Verified on construction: the identity acts as
    the identity modulo relations, the action is multiplicative, and every
    matrix preserves the relation lattice."""

    def __init__(self, monoid: FiniteMonoid, carrier: FgAbelianGroup, action) -> None:
        self.monoid = monoid
        self.carrier = carrier
        acts = {}
        for g in range(monoid.size):
            m = action[g]
            if not isinstance(m, IntMatrix):
                m = IntMatrix.from_rows(m)
            acts[g] = m
        self.action = acts
        self._verify()

    def _verify(self) -> None:
        n = self.carrier.ngens
        ech = self.carrier.rel_echelon
        eye = IntMatrix.identity(n)
        for g, m in self.action.items():
            if m.rows != n or m.cols != n:
                raise ModuleError(f"action matrix of element {g} has wrong shape")
            for col in self.carrier._rel_cols:
                img = {}
                for j, v in col.items():
                    for i in range(n):
                        w = m.at(i, j) * v
                        if w:
                            img[i] = img.get(i, 0) + w
                if not ech.contains({k: v for k, v in img.items() if v}):
                    raise ModuleError(f"action of {g} does not preserve relations")
        if not self._matrices_equal(self.action[self.monoid.identity], eye):
            raise ModuleError("identity does not act as the identity")
        for g in range(self.monoid.size):
            for h in range(self.monoid.size):
                lhs = self.action[self.monoid.mul(g, h)]
                rhs = self.action[g] @ self.action[h]
                if not self._matrices_equal(lhs, rhs):
                    raise ModuleError(f"action not multiplicative at ({g}, {h})")

    def _matrices_equal(self, a: IntMatrix, b: IntMatrix) -> bool:
        ech = self.carrier.rel_echelon
        diff = a - b
        return all(ech.contains(c) for c in diff.columns_sparse())

    def act(self, g: int, vec) -> tuple:
        return self.carrier.reduce(self.action[g].apply(tuple(vec)))

    def as_hom(self, g: int) -> AbHom:
        return AbHom(self.carrier, self.carrier, self.action[g])

    def zero(self) -> tuple:
        return self.carrier.zero_elem()

    @classmethod
    def trivial(cls, monoid: FiniteMonoid, carrier: FgAbelianGroup) -> "GModule":
        eye = IntMatrix.identity(carrier.ngens)
        return cls(monoid, carrier, {g: eye for g in range(monoid.size)})

    def __repr__(self) -> str:
        return f"GModule({self.carrier!r} over monoid of size {self.monoid.size})"


def invariants_of(module: GModule, subset) -> tuple[FgAbelianGroup, AbHom]:
    """The joint fixed subgroup of the elements in ``subset`` with its
    inclusion: the kernel of the stacked maps (action(n) - id)."""
    sq = invariant_subquotient(module, subset)
    basis_cols = sq.basis
    inc = AbHom(
        sq.group,
        module.carrier,
        IntMatrix.from_columns(basis_cols, module.carrier.ngens),
    )
    return sq.group, inc


def invariant_subquotient(module: GModule, subset) -> LatticeSubquotient:
    n = module.carrier.ngens
    elems = sorted(set(int(x) for x in subset))
    eye = IntMatrix.identity(n)
    stacked_cols = [dict() for _ in range(n)]
    rel_target = Echelon()
    for blk, g in enumerate(elems):
        diff = module.action[g] - eye
        for j, col in enumerate(diff.columns_sparse()):
            for r, v in col.items():
                stacked_cols[j][blk * n + r] = stacked_cols[j].get(blk * n + r, 0) + v
        for col in module.carrier._rel_cols:
            rel_target.insert({blk * n + r: v for r, v in col.items()})
    kernel = preimage_lattice(stacked_cols, rel_target, n)
    num = kernel + module.carrier._rel_cols
    den = module.carrier._rel_cols
    return LatticeSubquotient(n, num, den)


def residual_action(module: GModule, sq: LatticeSubquotient, g: int) -> IntMatrix:
    """Matrix of action(g) on an invariant subgroup, in its basis.  Raises
    if the action does not stabilise the subgroup."""
    cols = []
    for b in sq.basis:
        img: dict = {}
        for j, v in b.items():
            for i in range(module.carrier.ngens):
                w = module.action[g].at(i, j) * v
                if w:
                    img[i] = img.get(i, 0) + w
        img = {k: v for k, v in img.items() if v}
        coeffs = sq.num_echelon.solve(img)
        if coeffs is None:
            raise ModuleError(f"element {g} does not stabilise the subgroup")
        pos = {r: k for k, r in enumerate(sq.num_echelon.pivot_rows())}
        cols.append({pos[r]: q for r, q in coeffs.items() if q})
    return IntMatrix.from_columns(cols, len(sq.basis))


def induced_module(
    group: FiniteMonoid, rep: CosetRepMap, module: GModule, to_local
) -> GModule:
    """Induction from a subgroup H to G.

    The carrier is one copy of the coefficient group per right coset,
    realising H-equivariant functions G -> A supported on the transversal;
    G acts by right translation, rerouted through the H-part map.
    ``to_local`` translates ambient H-element indices into the subgroup's
    own monoid indices.
    """
    ncos = len(rep.transversal)
    m = module.carrier.ngens
    carrier = _block_group(module.carrier, ncos)
    action = {}
    for g in range(group.size):
        cols = [dict() for _ in range(ncos * m)]
        for j, t in enumerate(rep.transversal):
            tg = group.mul(t, g)
            h = rep.rep[tg]
            k = rep.coset_of[tg]
            hmat = module.action[to_local[h]]
            # block (row j, col k) = action of h: (g.f)(t_j) = h . f(t_k)
            for a in range(m):
                for b in range(m):
                    v = hmat.at(a, b)
                    if v:
                        cols[k * m + b][j * m + a] = v
        action[g] = IntMatrix.from_columns(cols, ncos * m)
    return GModule(group, carrier, action)


def _block_group(base: FgAbelianGroup, copies: int) -> FgAbelianGroup:
    n = base.ngens
    cols = []
    for blk in range(copies):
        for col in base._rel_cols:
            cols.append({blk * n + r: v for r, v in col.items()})
    return FgAbelianGroup(copies * n, IntMatrix.from_columns(cols, copies * n))


def restrict_module(module: GModule, sub_monoid: FiniteMonoid, to_ambient) -> GModule:
    """The same carrier viewed over a submonoid."""
    return GModule(
        sub_monoid, module.carrier,
        {i: module.action[g] for i, g in enumerate(to_ambient)},
    )


def induced_eval(rep: CosetRepMap, module: GModule, to_local, vec, x: int) -> tuple:
    """Value at the group element x of the equivariant function encoded by
    ``vec``: f(x) = _H(x) . f(s(coset(x)))."""
    m = module.carrier.ngens
    k = rep.coset_of[x]
    block = tuple(vec[k * m : (k + 1) * m])
    return module.act(to_local[rep.rep[x]], block)


@dataclass
class ModuleSES:
    """A short exact sequence of modules with a chosen set-section of the
    projection (least element in the carrier enumeration)."""

    a: GModule
    b: GModule
    c: GModule
    inject: AbHom
    surject: AbHom
    _section_cache: dict = None  # type: ignore[assignment]

    def __post_init__(self):
        if self._section_cache is None:
            self._section_cache = {}

    def section(self, c_elem) -> tuple:
        """Least preimage in B of an element of C."""
        key = self.c.carrier.reduce(c_elem)
        if key not in self._section_cache:
            for b_elem in self.b.carrier.iter_elements():
                if self.c.carrier.equal(self.surject.apply(b_elem), key):
                    self._section_cache[key] = b_elem
                    break
            else:
                raise NotExact("surjectivity")
        return self._section_cache[key]

    def pull_back(self, b_elem) -> tuple:
        """The a with inject(a) = b_elem, defined for b_elem in the image
        (unique up to A's relations)."""
        return preimage_under(self.inject, b_elem)


def ses_with_section(
    a: GModule, b: GModule, c: GModule, inject: AbHom, surject: AbHom
) -> ModuleSES:
    """Verify 0 -> A -> B -> C -> 0 exactly and equip it with a section.

    Raises NotExact (with the failing spot) or NotEquivariant (with a
    witness element).
    """
    monoid = a.monoid
    for g in range(monoid.size):
        lhs = inject.matrix @ a.action[g]
        rhs = b.action[g] @ inject.matrix
        if not _cols_in(lhs - rhs, b.carrier.rel_echelon):
            raise NotEquivariant(("inject", g))
        lhs = surject.matrix @ b.action[g]
        rhs = c.action[g] @ surject.matrix
        if not _cols_in(lhs - rhs, c.carrier.rel_echelon):
            raise NotEquivariant(("surject", g))

    # injectivity: preimage of 0 under inject is exactly A's relation lattice
    ker = preimage_lattice(
        inject.matrix.columns_sparse(), b.carrier.rel_echelon, a.carrier.ngens
    )
    a_rel = a.carrier.rel_echelon
    if not all(a_rel.contains(k) for k in ker):
        raise NotExact("injectivity")

    # surjectivity: image + relations spans everything
    img_c = span_echelon(
        surject.matrix.columns_sparse(), seed=span_echelon(c.carrier._rel_cols)
    )
    for i in range(c.carrier.ngens):
        if not img_c.contains({i: 1}):
            raise NotExact("surjectivity")

    # exactness in the middle: im(inject) = ker(surject) as lattices
    ker_s = preimage_lattice(
        surject.matrix.columns_sparse(), c.carrier.rel_echelon, b.carrier.ngens
    )
    img_b = span_echelon(
        inject.matrix.columns_sparse(), seed=span_echelon(b.carrier._rel_cols)
    )
    if not all(img_b.contains(k) for k in ker_s):
        raise NotExact("kernel-image mismatch (kernel too big)")
    ker_ech = span_echelon(ker_s, seed=span_echelon(b.carrier._rel_cols))
    for col in inject.matrix.columns_sparse():
        if not ker_ech.contains(col):
            raise NotExact("kernel-image mismatch (image too big)")

    return ModuleSES(a, b, c, inject, surject)


def _cols_in(matrix: IntMatrix, ech: Echelon) -> bool:
    return all(ech.contains(c) for c in matrix.columns_sparse())


def preimage_under(hom: AbHom, target_elem) -> tuple:
    """Some v with hom(v) = target_elem modulo relations; raises if the
    target is not in the image.  Tails track only the matrix columns, so
    the combination read off is a source vector."""
    cols = hom.matrix.columns_sparse()
    ech = Echelon()
    for j, c in enumerate(cols):
        ech.insert(dict(c), {j: 1})
    for c in hom.target._rel_cols:
        ech.insert(dict(c), {})
    target = vec_to_col(hom.target.reduce(target_elem))
    combo = _solve_with_tails(ech, target)
    if combo is None:
        raise AbelianError("element is not in the image")
    out = [0] * hom.source.ngens
    for j, k in combo.items():
        out[j] += k
    return hom.source.reduce(tuple(out))


def _solve_with_tails(ech: Echelon, target: dict) -> dict | None:
    col = dict(target)
    combo: dict[int, int] = {}
    while col:
        r = min(col)
        piv = ech.cols.get(r)
        if piv is None or col[r] % piv[r] != 0:
            return None
        q = col[r] // piv[r]
        col_addmul(col, piv, -q)
        col_addmul(combo, ech.tails[r], q)
    return combo


# ---------------------------------------------------------------------------
# finite rings and semilinear modules


class FiniteRing:
    """A finite commutative unital ring on element indices, with addition
    and multiplication tables.  Ring laws are verified exhaustively."""

    def __init__(self, add, mul, zero: int, one: int, names=None) -> None:
        self.add_table = tuple(tuple(r) for r in add)
        self.mul_table = tuple(tuple(r) for r in mul)
        self.zero = zero
        self.one = one
        self.size = len(self.add_table)
        self.names = tuple(names) if names else tuple(str(i) for i in range(self.size))
        self._verify()

    @classmethod
    def integers_mod(cls, n: int) -> "FiniteRing":
        add = [[(i + j) % n for j in range(n)] for i in range(n)]
        mul = [[(i * j) % n for j in range(n)] for i in range(n)]
        return cls(add, mul, 0, 1 % n)

    def _verify(self) -> None:
        rng = range(self.size)
        add, mul = self.add_table, self.mul_table
        for a in rng:
            if add[self.zero][a] != a or mul[self.one][a] != a:
                raise ModuleError("ring units fail")
            if not any(add[a][b] == self.zero for b in rng):
                raise ModuleError("no additive inverse")
            for b in rng:
                if add[a][b] != add[b][a] or mul[a][b] != mul[b][a]:
                    raise ModuleError("ring not commutative")
                for c in rng:
                    if add[add[a][b]][c] != add[a][add[b][c]]:
                        raise ModuleError("addition not associative")
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                        raise ModuleError("multiplication not associative")
                    if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                        raise ModuleError("distributivity fails")

    def neg(self, a: int) -> int:
        for b in range(self.size):
            if self.add_table[a][b] == self.zero:
                return b
        raise ModuleError("no additive inverse")


class SemilinearModule:
    """A finite ring R with a monoid action by ring endomorphisms, a module
    A over the monoid, and an R-scalar action on A making the monoid action
    R-semilinear: g(r.a) = (g.r).(g.a), verified exhaustively."""

    def __init__(self, monoid: FiniteMonoid, ring: FiniteRing, module: GModule,
                 ring_action, scalar) -> None:
        self.monoid = monoid
        self.ring = ring
        self.module = module
        self.ring_action = {g: tuple(ring_action[g]) for g in range(monoid.size)}
        self.scalar = scalar  # dict (r_index, a_elem) -> a_elem
        self._verify()

    def scale(self, r: int, a_elem) -> tuple:
        return self.scalar[(r, self.module.carrier.reduce(a_elem))]

    def _verify(self) -> None:
        ring, mod = self.ring, self.module
        elems = mod.carrier.elements
        # ring action: unital ring endomorphisms forming a monoid action
        for g in range(self.monoid.size):
            act = self.ring_action[g]
            if act[ring.one] != ring.one:
                raise NotSemilinear(("unit", g))
            for r in range(ring.size):
                for s in range(ring.size):
                    if act[ring.add_table[r][s]] != ring.add_table[act[r]][act[s]]:
                        raise NotSemilinear(("additive", g, r, s))
                    if act[ring.mul_table[r][s]] != ring.mul_table[act[r]][act[s]]:
                        raise NotSemilinear(("multiplicative", g, r, s))
        ident = self.ring_action[self.monoid.identity]
        if any(ident[r] != r for r in range(ring.size)):
            raise NotSemilinear(("identity-action",))
        for g in range(self.monoid.size):
            for h in range(self.monoid.size):
                gh = self.ring_action[self.monoid.mul(g, h)]
                comp = tuple(self.ring_action[g][self.ring_action[h][r]]
                             for r in range(ring.size))
                if gh != comp:
                    raise NotSemilinear(("action-law", g, h))
        # scalar action: bilinear and unital
        for r in range(ring.size):
            for a in elems:
                if (r, a) not in self.scalar:
                    raise NotSemilinear(("scalar-undefined", r, a))
        for a in elems:
            if not mod.carrier.equal(self.scale(ring.one, a), a):
                raise NotSemilinear(("scalar-unit", a))
        for r in range(ring.size):
            for s in range(ring.size):
                for a in elems:
                    lhs = self.scale(ring.add_table[r][s], a)
                    rhs = mod.carrier.add(self.scale(r, a), self.scale(s, a))
                    if not mod.carrier.equal(lhs, rhs):
                        raise NotSemilinear(("scalar-add", r, s, a))
                    lhs = self.scale(ring.mul_table[r][s], a)
                    rhs = self.scale(r, self.scale(s, a))
                    if not mod.carrier.equal(lhs, rhs):
                        raise NotSemilinear(("scalar-mul", r, s, a))
        for r in range(ring.size):
            for a in elems:
                for b in elems:
                    lhs = self.scale(r, mod.carrier.add(a, b))
                    rhs = mod.carrier.add(self.scale(r, a), self.scale(r, b))
                    if not mod.carrier.equal(lhs, rhs):
                        raise NotSemilinear(("scalar-bilinear", r, a, b))
        # the semilinear law itself
        for g in range(self.monoid.size):
            for r in range(ring.size):
                for a in elems:
                    lhs = mod.act(g, self.scale(r, a))
                    rhs = self.scale(self.ring_action[g][r], mod.act(g, a))
                    if not mod.carrier.equal(lhs, rhs):
                        raise NotSemilinear((g, r, a))

    @classmethod
    def integers_mod_trivial(cls, monoid: FiniteMonoid, n: int) -> "SemilinearModule":
        """R = A = Z/n with trivial monoid action and ring multiplication as
        the scalar action."""
        return cls.integers_mod_signed(monoid, n, [0] * monoid.size)

    @classmethod
    def integers_mod_signed(cls, monoid: FiniteMonoid, n: int, exponents) -> "SemilinearModule":
        """R = Z/n with trivial ring action, A = Z/n with g acting by
        (-1)^exponents[g], ring multiplication as the scalar action."""
        ring = FiniteRing.integers_mod(n)
        carrier = FgAbelianGroup.from_invariants([n]) if n > 1 else FgAbelianGroup.zero()
        pos = IntMatrix.from_rows([[1]])
        neg = IntMatrix.from_rows([[-1]])
        module = GModule(
            monoid, carrier,
            {g: (neg if exponents[g] else pos) for g in range(monoid.size)},
        )
        ring_action = {g: tuple(range(n)) for g in range(monoid.size)}
        scalar = {}
        for r in range(n):
            for a in carrier.elements:
                scalar[(r, a)] = carrier.reduce(tuple(r * x for x in a))
        return cls(monoid, ring, module, ring_action, scalar)
