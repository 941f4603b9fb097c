"""Finite monoids with a group part and commutative monoid parts.

Elements are dense integer indices into a multiplication table.  A
``SetupMonoid`` is a product G' x M_1 x ... x M_r with G' a verified group
and each M_i a verified commutative monoid; quotients by subgroups of the
compatible shape N' x (selected M_i factors) come with a section, the
representative map ``star`` and the remainder map ``nu``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property


class MonoidError(Exception):
    pass


class NotAssociative(MonoidError):
    def __init__(self, triple):
        self.witness = triple
        super().__init__(f"associativity fails at {triple}")


class NotIdentity(MonoidError):
    def __init__(self, element):
        self.witness = element
        super().__init__(f"claimed identity is not neutral against element {element}")


class FirstFactorNotGroup(MonoidError):
    pass


class FactorNotCommutative(MonoidError):
    pass


class NotNormal(MonoidError):
    def __init__(self, g, n):
        self.witness = (g, n)
        super().__init__(f"conjugate of {n} by {g} escapes the subgroup")


class BadSection(MonoidError):
    pass


class NotSubgroup(MonoidError):
    pass


@dataclass(frozen=True)
class FiniteMonoid:
    """A finite monoid: multiplication table over element indices.

    >>> FiniteMonoid.cyclic(2).is_group()
    True
    >>> FiniteMonoid.z2_mult().is_group()
    False
    """

    table: tuple[tuple[int, ...], ...]
    identity: int
    names: tuple[str, ...] = field(default=None, compare=False)  # type: ignore[assignment]

    def __post_init__(self):
        if self.names is None:
            object.__setattr__(self, "names", tuple(str(i) for i in range(len(self.table))))

    @property
    def size(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, elems) -> int:
        out = self.identity
        for e in elems:
            out = self.table[out][e]
        return out

    def elements(self) -> range:
        return range(self.size)

    def nonidentity(self) -> list[int]:
        return [e for e in range(self.size) if e != self.identity]

    def inverse(self, a: int) -> int | None:
        for b in range(self.size):
            if self.table[a][b] == self.identity and self.table[b][a] == self.identity:
                return b
        return None

    def is_group(self) -> bool:
        return all(self.inverse(a) is not None for a in range(self.size))

    def is_commutative(self) -> bool:
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.size)
            for b in range(a + 1, self.size)
        )

    def is_subgroup(self, subset) -> bool:
        sub = set(subset)
        if self.identity not in sub:
            return False
        for a in sub:
            inv = self.inverse(a)
            if inv is None or inv not in sub:
                return False
            for b in sub:
                if self.table[a][b] not in sub:
                    return False
        return True

    # -- standard examples

    @classmethod
    def trivial(cls) -> "FiniteMonoid":
        return cls(((0,),), 0, ("1",))

    @classmethod
    def cyclic(cls, n: int) -> "FiniteMonoid":
        table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
        return cls(table, 0, tuple(f"g{i}" if i else "1" for i in range(n)))

    @classmethod
    def z2_mult(cls) -> "FiniteMonoid":
        """The two-element multiplicative monoid {0, 1}: index 0 is the
        absorbing 0, index 1 the identity."""
        return cls(((0, 0), (0, 1)), 1, ("0", "1"))

    @classmethod
    def symmetric3(cls) -> "FiniteMonoid":
        """S3 as permutations of {0,1,2} in a fixed enumeration."""
        perms = [
            (0, 1, 2),  # e
            (1, 0, 2),  # (01)
            (0, 2, 1),  # (12)
            (2, 1, 0),  # (02)
            (1, 2, 0),  # (012): 0->1, 1->2, 2->0
            (2, 0, 1),  # (021)
        ]
        index = {p: i for i, p in enumerate(perms)}

        def compose(p, q):  # apply q first, then p
            return tuple(p[q[i]] for i in range(3))

        table = tuple(
            tuple(index[compose(perms[a], perms[b])] for b in range(6)) for a in range(6)
        )
        names = ("e", "(01)", "(12)", "(02)", "(012)", "(021)")
        return cls(table, 0, names)


def build_monoid(table, identity: int, names=None) -> FiniteMonoid:
    """Validate a multiplication table as a monoid.

    Raises NotIdentity or NotAssociative with a witness on failure.
    """
    table = tuple(tuple(int(x) for x in row) for row in table)
    n = len(table)
    if any(len(row) != n for row in table):
        raise MonoidError("table is not square")
    if any(x < 0 or x >= n for row in table for x in row):
        raise MonoidError("table entry out of range")
    if not 0 <= identity < n:
        raise NotIdentity(identity)
    for x in range(n):
        if table[identity][x] != x or table[x][identity] != x:
            raise NotIdentity(x)
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            row_ab = table[ab]
            row_a = table[a]
            for c in range(n):
                if row_ab[c] != row_a[table[b][c]]:
                    raise NotAssociative((a, b, c))
    return FiniteMonoid(table, identity, tuple(names) if names else None)


def product_table(factors: list[FiniteMonoid]):
    """Componentwise product table; elements are mixed-radix tuples."""
    sizes = [f.size for f in factors]
    tuples = list(itertools.product(*(range(s) for s in sizes)))
    index = {t: i for i, t in enumerate(tuples)}
    table = tuple(
        tuple(
            index[tuple(f.mul(a, b) for f, a, b in zip(factors, ta, tb))]
            for tb in tuples
        )
        for ta in tuples
    )
    identity = index[tuple(f.identity for f in factors)]
    names = tuple("|".join(f.names[c] for f, c in zip(factors, t)) for t in tuples)
    return table, identity, names, tuples, index


@dataclass(frozen=True)
class SetupMonoid:
    """A product monoid G' x M_1 x ... x M_r with G' a group and the M_i
    commutative; carries the tuple coordinates of every element."""

    group_part: FiniteMonoid
    monoid_parts: tuple[FiniteMonoid, ...]
    product: FiniteMonoid
    coords: tuple[tuple[int, ...], ...]      # element index -> factor tuple
    coord_index: dict                         # factor tuple -> element index

    @property
    def size(self) -> int:
        return self.product.size

    @property
    def identity(self) -> int:
        return self.product.identity

    def mul(self, a: int, b: int) -> int:
        return self.product.mul(a, b)

    def group_coord(self, x: int) -> int:
        return self.coords[x][0]

    def embed(self, group_elem: int, monoid_elems=None) -> int:
        if monoid_elems is None:
            monoid_elems = tuple(m.identity for m in self.monoid_parts)
        return self.coord_index[(group_elem, *monoid_elems)]

    @cached_property
    def _group_inverses(self) -> tuple[int, ...]:
        return tuple(self.group_part.inverse(g) for g in range(self.group_part.size))

    def conjugate(self, x: int, y: int) -> int:
        """Conjugate y by x: the group part becomes x_g^{-1} y_g x_g, the
        monoid parts of y are untouched (x need not be invertible)."""
        cx, cy = self.coords[x], self.coords[y]
        gp = self.group_part
        xg_inv = self._group_inverses[cx[0]]
        new_g = gp.mul(gp.mul(xg_inv, cy[0]), cx[0])
        return self.coord_index[(new_g, *cy[1:])]


def direct_product(factors) -> SetupMonoid:
    """Form G' x M_1 x ... x M_r.  The first factor must be a group, the
    remaining factors commutative monoids."""
    factors = list(factors)
    if not factors:
        raise MonoidError("need at least one factor")
    if not factors[0].is_group():
        raise FirstFactorNotGroup("first factor must be a group")
    for k, m in enumerate(factors[1:], start=1):
        if not m.is_commutative():
            raise FactorNotCommutative(f"factor {k} is not commutative")
    table, identity, names, tuples, index = product_table(factors)
    product = FiniteMonoid(table, identity, names)
    return SetupMonoid(
        group_part=factors[0],
        monoid_parts=tuple(factors[1:]),
        product=product,
        coords=tuple(tuples),
        coord_index=index,
    )


def setup_from_group(group: FiniteMonoid) -> SetupMonoid:
    """Wrap a bare group as a SetupMonoid with no monoid parts."""
    return direct_product([group])


def conjugate_by(setup: SetupMonoid, x: int, y: int) -> int:
    """Conjugation convention for products: group parts conjugate, monoid
    parts stay fixed."""
    return setup.conjugate(x, y)


@dataclass(frozen=True)
class QuotientData:
    """A quotient G -> G/N with a chosen section.

    ``star`` is section-after-projection (choice of representative), ``nu``
    the complementary map with x = star(x) * nu(x) for every x; both are
    verified exhaustively on construction.
    """

    ambient: SetupMonoid
    normal: frozenset
    quotient: FiniteMonoid
    proj: tuple[int, ...]      # ambient element -> quotient element
    section: tuple[int, ...]   # quotient element -> ambient element
    star: tuple[int, ...]
    nu: tuple[int, ...]

    @property
    def nsize(self) -> int:
        return len(self.normal)

    def normal_elements(self) -> list[int]:
        return sorted(self.normal)


def _coset_partition(
    setup: SetupMonoid, group_trace, inside
) -> tuple[list[list[int]], list[int]]:
    """Partition by the quotient equivalence: same N'-coset on the group
    part, equal coordinates on monoid factors outside N, and monoid factors
    inside N forgotten entirely."""
    gp = setup.group_part
    size = setup.size

    def key(x):
        cx = setup.coords[x]
        gcos = min(gp.mul(cx[0], n) for n in group_trace)
        outs = tuple(
            cx[k + 1] for k in range(len(setup.monoid_parts)) if not inside[k]
        )
        return (gcos, outs)

    labels: dict = {}
    coset_of = [-1] * size
    cosets: list[list[int]] = []
    for x in range(size):
        k = key(x)
        if k not in labels:
            labels[k] = len(cosets)
            cosets.append([])
        cid = labels[k]
        coset_of[x] = cid
        cosets[cid].append(x)
    return cosets, coset_of


def quotient_with_section(
    setup: SetupMonoid, normal, section_choice=None
) -> QuotientData:
    """Quotient of a SetupMonoid by N = N' x (selected monoid factors).

    ``normal`` is the element subset.  N' (its group-part trace) must be a
    normal subgroup; each monoid factor must be either fully inside N or
    meet it only in the identity.  ``section_choice`` optionally lists one
    ambient representative per coset (the identity's coset must pick the
    identity); the default picks the least group-part representative and
    the identity on monoid factors inside N.
    """
    normal = frozenset(int(x) for x in normal)
    if setup.identity not in normal:
        raise NotNormal(setup.identity, setup.identity)
    gp = setup.group_part
    nparts = len(setup.monoid_parts)

    # split N into its factor traces and check the product shape
    group_trace = sorted({setup.coords[x][0] for x in normal})
    monoid_traces = [sorted({setup.coords[x][k + 1] for x in normal}) for k in range(nparts)]
    inside = []
    for k, trace in enumerate(monoid_traces):
        m = setup.monoid_parts[k]
        if len(trace) == m.size:
            inside.append(True)
        elif trace == [m.identity]:
            inside.append(False)
        else:
            raise NotNormal(setup.identity, min(x for x in normal
                                                if setup.coords[x][k + 1] != m.identity))
    expected = {
        setup.coord_index[(g, *combo)]
        for g in group_trace
        for combo in itertools.product(
            *(range(m.size) if inside[k] else [m.identity]
              for k, m in enumerate(setup.monoid_parts))
        )
    }
    if expected != normal:
        raise NotNormal(setup.identity, next(iter(expected ^ normal)))

    if not gp.is_subgroup(group_trace):
        raise NotSubgroup("group-part trace of N is not a subgroup")
    for g in range(gp.size):
        ginv = gp.inverse(g)
        for n in group_trace:
            if gp.mul(gp.mul(ginv, n), g) not in group_trace:
                raise NotNormal(g, n)

    cosets, coset_of = _coset_partition(setup, group_trace, inside)

    # pick or validate the section
    if section_choice is None:
        reps = []
        for members in cosets:
            best = None
            for y in members:
                cy = setup.coords[y]
                if all(inside[k] is False or cy[k + 1] == setup.monoid_parts[k].identity
                       for k in range(nparts)):
                    best = y
                    break
            if best is None:
                raise BadSection("no product-compatible representative in a coset")
            reps.append(best)
        if setup.identity in cosets[coset_of[setup.identity]]:
            reps[coset_of[setup.identity]] = setup.identity
    else:
        chosen = [int(x) for x in section_choice]
        if len(chosen) != len(cosets):
            raise BadSection(
                f"need exactly one representative per coset ({len(cosets)}), got {len(chosen)}"
            )
        reps = [None] * len(cosets)
        for x in chosen:
            cid = coset_of[x]
            if reps[cid] is not None:
                raise BadSection(f"coset represented twice: {reps[cid]} and {x}")
            reps[cid] = x
        if reps[coset_of[setup.identity]] != setup.identity:
            raise BadSection("the identity must be the chosen representative of its coset")

    proj = tuple(coset_of)
    section = tuple(reps)
    star = tuple(section[proj[x]] for x in range(setup.size))

    ginvs = setup._group_inverses
    nu = []
    for x in range(setup.size):
        cx = setup.coords[x]
        cs = setup.coords[star[x]]
        g_nu = gp.mul(ginvs[cs[0]], cx[0])
        parts = tuple(
            cx[k + 1] if inside[k] else setup.monoid_parts[k].identity
            for k in range(nparts)
        )
        nu.append(setup.coord_index[(g_nu, *parts)])
    nu = tuple(nu)

    # quotient multiplication on coset representatives
    qsize = len(cosets)
    qtable = []
    for a in range(qsize):
        row = []
        for b in range(qsize):
            row.append(proj[setup.mul(section[a], section[b])])
        qtable.append(tuple(row))
    quotient = FiniteMonoid(
        tuple(qtable), proj[setup.identity],
        tuple(setup.product.names[section[c]] + "N" for c in range(qsize)),
    )

    data = QuotientData(
        ambient=setup, normal=normal, quotient=quotient,
        proj=proj, section=section, star=star, nu=nu,
    )
    _verify_quotient(data)
    return data


def _verify_quotient(q: QuotientData) -> None:
    setup = q.ambient
    # projection is a homomorphism
    for x in range(setup.size):
        for y in range(setup.size):
            if q.proj[setup.mul(x, y)] != q.quotient.mul(q.proj[x], q.proj[y]):
                raise BadSection(f"projection not multiplicative at ({x}, {y})")
    # section splits the projection and fixes the identity
    for c in range(q.quotient.size):
        if q.proj[q.section[c]] != c:
            raise BadSection(f"section misses coset {c}")
    if q.section[q.proj[setup.identity]] != setup.identity:
        raise BadSection("section does not fix the identity")
    # the factorisation law and the two nu laws
    for x in range(setup.size):
        if setup.mul(q.star[x], q.nu[x]) != x:
            raise BadSection(f"x != star(x)*nu(x) at {x}")
        if q.nu[x] not in q.normal:
            raise BadSection(f"nu({x}) escapes N")
    for n in q.normal:
        if q.nu[n] != n:
            raise BadSection(f"nu is not the identity on N at {n}")


@dataclass(frozen=True)
class CosetRepMap:
    """The map sending g in a group G to its H-part under a chosen section
    of the right cosets H\\G: rep(g) = g * s(Hg)^{-1}."""

    group: FiniteMonoid
    subgroup: frozenset
    rep: tuple[int, ...]
    coset_of: tuple[int, ...]
    transversal: tuple[int, ...]  # coset -> section value; coset 0 is H with value 1

    def coset(self, g: int) -> int:
        return self.coset_of[g]

    def section(self, coset: int) -> int:
        return self.transversal[coset]


def coset_rep_map(group: FiniteMonoid, subgroup, transversal=None) -> CosetRepMap:
    """Build the H-part map for right cosets Hg of a subgroup H.

    The section picks the least-index representative per coset unless a
    transversal is supplied; the identity's coset always picks the
    identity.  The defining laws rep(1) = 1 and rep(hg) = h rep(g) are
    verified exhaustively.
    """
    if not group.is_group():
        raise NotSubgroup("ambient monoid is not a group")
    sub = frozenset(int(x) for x in subgroup)
    if not group.is_subgroup(sub):
        raise NotSubgroup("subset is not a subgroup")

    size = group.size
    coset_of = [-1] * size
    reps_list: list[int] = []
    order = [group.identity] + [g for g in range(size) if g != group.identity]
    for g in order:
        if coset_of[g] >= 0:
            continue
        cid = len(reps_list)
        reps_list.append(g)
        for h in sub:
            coset_of[group.mul(h, g)] = cid
    if transversal is not None:
        chosen = [int(x) for x in transversal]
        if len(chosen) != len(reps_list):
            raise NotSubgroup("transversal size does not match the coset count")
        new = [None] * len(reps_list)
        for x in chosen:
            cid = coset_of[x]
            if new[cid] is not None:
                raise NotSubgroup("transversal hits a coset twice")
            new[cid] = x
        if new[coset_of[group.identity]] != group.identity:
            raise NotSubgroup("transversal must contain the identity")
        reps_list = new  # type: ignore[assignment]

    rep = []
    for g in range(size):
        s = reps_list[coset_of[g]]
        rep.append(group.mul(g, group.inverse(s)))
    rep = tuple(rep)

    if rep[group.identity] != group.identity:
        raise NotSubgroup("rep(1) != 1")
    for g in range(size):
        if rep[g] not in sub:
            raise NotSubgroup(f"rep({g}) escapes H")
        for h in sub:
            if rep[group.mul(h, g)] != group.mul(h, rep[g]):
                raise NotSubgroup(f"rep(h*g) != h*rep(g) at (h, g) = ({h}, {g})")

    return CosetRepMap(
        group=group,
        subgroup=sub,
        rep=rep,
        coset_of=tuple(coset_of),
        transversal=tuple(reps_list),
    )


def submonoid(monoid: FiniteMonoid, subset) -> tuple[FiniteMonoid, list[int], dict]:
    """Restrict to a closed subset containing the identity.  Returns the
    restricted monoid, the list mapping local -> ambient indices, and the
    ambient -> local dict."""
    ambient_of = sorted(set(int(x) for x in subset))
    if monoid.identity not in ambient_of:
        raise MonoidError("subset misses the identity")
    local_of = {a: i for i, a in enumerate(ambient_of)}
    for a in ambient_of:
        for b in ambient_of:
            if monoid.mul(a, b) not in local_of:
                raise MonoidError(f"subset not closed at ({a}, {b})")
    table = tuple(
        tuple(local_of[monoid.mul(a, b)] for b in ambient_of) for a in ambient_of
    )
    names = tuple(monoid.names[a] for a in ambient_of)
    return (
        FiniteMonoid(table, local_of[monoid.identity], names),
        ambient_of,
        local_of,
    )


# -- tuple/table indexing helpers shared by the cochain machinery


def tuple_index(t, base: int) -> int:
    """Mixed-radix index of a tuple over ``range(base)``; first slot is most
    significant, matching itertools.product order."""
    out = 0
    for x in t:
        out = out * base + x
    return out


def iter_tuples(base: int, n: int):
    return itertools.product(range(base), repeat=n)
