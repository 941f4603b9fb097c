"""Degree-one cohomology as simply transitive actions and as semilinear
extensions, with both directions of each correspondence.

A torsor here is a finite set with a simply transitive action of the
coefficient group and a compatible monoid action; an extension is the
middle object A x R with the twisted action g.(a, r) = ((g.r).c(g) + g.a,
g.r).  Both constructions are verified exhaustively on finite data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cochains import Cochain, CochainComplex, NotCocycle, cochain_from_table, is_cocycle
from .modules import GModule, NotSemilinear, SemilinearModule


class TorsorError(Exception):
    pass


@dataclass
class TorsorInstance:
    """A finite set with a right action of the coefficient group (simply
    transitive) and a compatible monoid action."""

    module: GModule
    size: int
    a_action: dict      # (x, a_elem) -> x
    g_action: dict      # (g, x) -> x

    def mu(self, x: int, a) -> int:
        return self.a_action[(x, self.module.carrier.reduce(a))]

    def act(self, g: int, x: int) -> int:
        return self.g_action[(g, x)]

    def divide(self, x: int, y: int):
        """The unique a with y = mu(x, a)."""
        for a in self.module.carrier.elements:
            if self.a_action[(x, a)] == y:
                return a
        raise TorsorError("division failed: action is not simply transitive")

    def verify(self) -> None:
        car = self.module.carrier
        elems = car.elements
        for x in range(self.size):
            hit = {self.a_action[(x, a)] for a in elems}
            if len(hit) != self.size or len(elems) != self.size:
                raise TorsorError("action is not simply transitive")
        mon = self.module.monoid
        for g in range(mon.size):
            for x in range(self.size):
                for a in elems:
                    lhs = self.act(g, self.mu(x, a))
                    rhs = self.mu(self.act(g, x), self.module.act(g, a))
                    if lhs != rhs:
                        raise TorsorError(
                            f"monoid action incompatible at (g={g}, x={x}, a={a})"
                        )
        ident = mon.identity
        for x in range(self.size):
            if self.act(ident, x) != x:
                raise TorsorError("identity does not fix the carrier")
        for g in range(mon.size):
            for h in range(mon.size):
                for x in range(self.size):
                    if self.act(mon.mul(g, h), x) != self.act(g, self.act(h, x)):
                        raise TorsorError(f"action law fails at ({g}, {h}, {x})")


def cocycle_to_torsor(c: Cochain) -> TorsorInstance:
    """Twist the coefficient group by a 1-cocycle: g.x = c(g) + g*x."""
    if c.degree != 1:
        raise ValueError("need a degree-1 cochain")
    if not is_cocycle(c):
        raise NotCocycle("not a cocycle")
    module = c.module
    car = module.carrier
    elems = car.elements
    index = car.element_index
    a_action = {}
    g_action = {}
    for xi, x in enumerate(elems):
        for a in elems:
            a_action[(xi, a)] = index[car.add(x, a)]
        for g in range(module.monoid.size):
            g_action[(g, xi)] = index[car.add(c.value((g,)), module.act(g, x))]
    t = TorsorInstance(module, len(elems), a_action, g_action)
    t.verify()
    return t


def torsor_to_cocycle(t: TorsorInstance, basepoint: int = 0) -> Cochain:
    """c(g) = x \\ g.x for a chosen basepoint x."""
    module = t.module
    vals = [t.divide(basepoint, t.act(g, basepoint))
            for g in range(module.monoid.size)]
    c = cochain_from_table(module, 1, vals)
    if not is_cocycle(c):
        raise TorsorError("torsor did not produce a cocycle")
    return c


def torsors_isomorphic(t1: TorsorInstance, t2: TorsorInstance) -> bool:
    """Search the (at most |A|) candidate equivariant bijections: the image
    of one basepoint pins the rest by simple transitivity."""
    if t1.size != t2.size:
        return False
    car = t1.module.carrier
    elems = car.elements
    mon = t1.module.monoid
    for y0 in range(t2.size):
        j = {}
        ok = True
        for a in elems:
            j[t1.a_action[(0, a)]] = t2.a_action[(y0, a)]
        for x in range(t1.size):
            for a in elems:
                if j[t1.a_action[(x, a)]] != t2.a_action[(j[x], a)]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for g in range(mon.size):
                for x in range(t1.size):
                    if j[t1.act(g, x)] != t2.act(g, j[x]):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# extensions


@dataclass
class ExtensionInstance:
    """The middle object of 0 -> A -> E -> R -> 0 realised on the element
    set A x R, with a twisted monoid action and an R-scalar structure."""

    semilinear: SemilinearModule
    action: dict        # (g, (a, r)) -> (a, r)

    @property
    def module(self) -> GModule:
        return self.semilinear.module

    def elements(self):
        for a in self.module.carrier.elements:
            for r in range(self.semilinear.ring.size):
                yield (a, r)

    def add(self, e1, e2):
        car = self.module.carrier
        ring = self.semilinear.ring
        return (car.add(e1[0], e2[0]), ring.add_table[e1[1]][e2[1]])

    def neg(self, e):
        car = self.module.carrier
        ring = self.semilinear.ring
        return (car.neg(e[0]), ring.neg(e[1]))

    def scale(self, r: int, e):
        # the R-structure is the product structure; only the monoid action
        # is twisted
        ring = self.semilinear.ring
        return (self.semilinear.scale(r, e[0]), ring.mul_table[r][e[1]])

    def act(self, g: int, e):
        return self.action[(g, (self.module.carrier.reduce(e[0]), e[1]))]

    def inject(self, a):
        return (self.module.carrier.reduce(a), self.semilinear.ring.zero)

    def project(self, e) -> int:
        return e[1]

    def verify(self) -> None:
        sm = self.semilinear
        mon = sm.monoid
        ring = sm.ring
        car = sm.module.carrier
        elems = list(self.elements())
        # exactness on the element level
        kernel = [e for e in elems if self.project(e) == ring.zero]
        image = [self.inject(a) for a in car.elements]
        if sorted(kernel) != sorted(image):
            raise TorsorError("image of A is not the kernel of the projection")
        if {self.project(e) for e in elems} != set(range(ring.size)):
            raise TorsorError("projection not onto")
        # the action is additive, unital, multiplicative, and equivariant
        # over both structure maps
        for g in range(mon.size):
            for e1 in elems:
                for e2 in elems:
                    if self.act(g, self.add(e1, e2)) != self.add(
                        self.act(g, e1), self.act(g, e2)
                    ):
                        raise TorsorError(f"action not additive at g={g}")
        for e in elems:
            if self.act(mon.identity, e) != e:
                raise TorsorError("identity acts nontrivially")
        for g in range(mon.size):
            for h in range(mon.size):
                for e in elems:
                    if self.act(mon.mul(g, h), e) != self.act(g, self.act(h, e)):
                        raise TorsorError(f"action law fails at ({g}, {h})")
        for g in range(mon.size):
            for a in car.elements:
                if self.act(g, self.inject(a)) != self.inject(sm.module.act(g, a)):
                    raise TorsorError("injection not equivariant")
            for e in elems:
                if self.project(self.act(g, e)) != sm.ring_action[g][self.project(e)]:
                    raise TorsorError("projection not equivariant")
        # R-linearity of the structure maps and semilinearity of the action
        for r in range(ring.size):
            for a in car.elements:
                if self.scale(r, self.inject(a)) != self.inject(sm.scale(r, a)):
                    raise TorsorError("injection not R-linear")
            for e in elems:
                if self.project(self.scale(r, e)) != ring.mul_table[r][self.project(e)]:
                    raise TorsorError("projection not R-linear")
        for g in range(mon.size):
            for r in range(ring.size):
                for e in elems:
                    lhs = self.act(g, self.scale(r, e))
                    rhs = self.scale(sm.ring_action[g][r], self.act(g, e))
                    if lhs != rhs:
                        raise NotSemilinear((g, r, e))


def extension_from_cocycle(sm: SemilinearModule, c: Cochain) -> ExtensionInstance:
    """g.(a, r) = ((g.r).c(g) + g.a, g.r), verified exhaustively."""
    if c.degree != 1:
        raise ValueError("need a degree-1 cochain")
    if not is_cocycle(c):
        raise NotCocycle("not a cocycle")
    car = sm.module.carrier
    ring = sm.ring
    action = {}
    for g in range(sm.monoid.size):
        for a in car.elements:
            for r in range(ring.size):
                gr = sm.ring_action[g][r]
                twisted = car.add(sm.scale(gr, c.value((g,))), sm.module.act(g, a))
                action[(g, (a, r))] = (twisted, gr)
    e = ExtensionInstance(sm, action)
    e.verify()
    return e


def cocycle_from_extension(ext: ExtensionInstance, preimage=None) -> Cochain:
    """c(g) = g.e - e for a preimage e of the ring unit (least such by
    default); the value lands in A."""
    sm = ext.semilinear
    ring = sm.ring
    if preimage is None:
        preimage = next(e for e in ext.elements() if e[1] == ring.one)
    if preimage[1] != ring.one:
        raise ValueError("need a preimage of the ring unit")
    vals = []
    for g in range(sm.monoid.size):
        diff = ext.add(ext.act(g, preimage), ext.neg(preimage))
        if diff[1] != ring.zero:
            raise TorsorError("difference escaped the coefficient group")
        vals.append(diff[0])
    c = cochain_from_table(sm.module, 1, vals)
    if not is_cocycle(c):
        raise TorsorError("extension did not produce a cocycle")
    return c


def extensions_equivalent(e1: ExtensionInstance, e2: ExtensionInstance) -> bool:
    """Ladder equivalence on elements: any ladder map is (a, r) -> (a + t(r), r)
    with t(0) = 0; search t over additive, equivariant choices."""
    sm = e1.semilinear
    if e2.semilinear is not sm and (
        e2.semilinear.ring.size != sm.ring.size
        or e2.semilinear.module.carrier.canonical != sm.module.carrier.canonical
    ):
        return False
    ring = sm.ring
    car = sm.module.carrier
    elems = car.elements
    nonzero_r = [r for r in range(ring.size) if r != ring.zero]
    for imgs in itertools.product(elems, repeat=len(nonzero_r)):
        t = {ring.zero: car.zero_elem()}
        t.update(dict(zip(nonzero_r, imgs)))
        if not all(
            car.equal(t[ring.add_table[r][s]], car.add(t[r], t[s]))
            for r in range(ring.size)
            for s in range(ring.size)
        ):
            continue
        ok = True
        for g in range(sm.monoid.size):
            for a in elems:
                for r in range(ring.size):
                    img = (car.add(a, t[r]), r)
                    lhs = e2.act(g, img)
                    ga, gr = e1.act(g, (a, r))
                    rhs = (car.add(ga, t[gr]), gr)
                    if lhs != rhs:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# class enumeration (complete at desk scale)


def one_cocycle_classes(module: GModule) -> list[list[Cochain]]:
    """All 1-cocycles over a finite module, grouped into cohomology classes."""
    car = module.carrier
    mon = module.monoid
    slots = mon.nonidentity()
    cx = CochainComplex(module, 1)
    cocycles = []
    for combo in itertools.product(car.elements, repeat=len(slots)):
        table = []
        it = iter(combo)
        for g in range(mon.size):
            table.append(car.zero_elem() if g == mon.identity else next(it))
        c = cochain_from_table(module, 1, table)
        if is_cocycle(c):
            cocycles.append(c)
    classes: list[list[Cochain]] = []
    for c in cocycles:
        for cls in classes:
            if cx.cohomologous(c, cls[0]):
                cls.append(c)
                break
        else:
            classes.append([c])
    return classes
