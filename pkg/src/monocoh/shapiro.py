"""Transfer maps between cochains of a group and of a subgroup.

For a subgroup H of G with H-part map rep(g) = g s(Hg)^{-1}, the three
maps below realise the cohomology isomorphism with induced coefficients
explicitly at the cochain level:

  alpha: evaluate an induced-module-valued cochain at the identity;
  beta:  spread a subgroup cochain along the H-part chain of prefixes;
  kappa: the degree-lowering homotopy tying beta∘alpha to the identity.

All three are literal transcriptions; the prefix products rep(x g_1...g_i)
are shared across the terms of kappa.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cochains import Cochain, cochain_from_table
from .modules import GModule, induced_eval, induced_module
from .monoids import CosetRepMap, FiniteMonoid, coset_rep_map, submonoid


def _sign(i: int) -> int:
    # isolated so the mutation-sensitivity suite can corrupt it
    return -1 if i % 2 else 1


@dataclass
class ShapiroContext:
    """A subgroup H of a finite group G with a coset section, an H-module,
    and the induced G-module."""

    group: FiniteMonoid
    rep: CosetRepMap
    sub: FiniteMonoid
    to_local: dict
    to_ambient: list
    coeff: GModule
    ind: GModule

    @property
    def ncosets(self) -> int:
        return len(self.rep.transversal)

    def eval_ind(self, vec, x: int) -> tuple:
        """Value at x in G of the equivariant function encoded by vec."""
        return induced_eval(self.rep, self.coeff, self.to_local, vec, x)

    def ind_block(self, vec, coset: int) -> tuple:
        m = self.coeff.carrier.ngens
        return tuple(vec[coset * m : (coset + 1) * m])


def shapiro_context(group: FiniteMonoid, subgroup, coeff_local: GModule,
                    transversal=None) -> ShapiroContext:
    rep = coset_rep_map(group, subgroup, transversal)
    sub, to_ambient, to_local = submonoid(group, subgroup)
    if coeff_local.monoid.table != sub.table:
        raise ValueError("coefficient module is not over the named subgroup")
    ind = induced_module(group, rep, coeff_local, to_local)
    return ShapiroContext(group, rep, sub, to_local, to_ambient, coeff_local, ind)


def shapiro_alpha(ctx: ShapiroContext, f: Cochain) -> Cochain:
    """Restrict to subgroup arguments and evaluate at the identity."""
    n = f.degree
    sub = ctx.sub
    vals = []
    for hs in itertools.product(range(sub.size), repeat=n):
        amb = tuple(ctx.to_ambient[h] for h in hs)
        vals.append(ctx.eval_ind(f.value(amb), ctx.group.identity))
    return cochain_from_table(ctx.coeff, n, vals)


def _beta_value(ctx: ShapiroContext, f: Cochain, gs, x: int) -> tuple:
    """rep(x) . f(rep(x)^{-1} rep(x g_1), rep(x g_1)^{-1} rep(x g_1 g_2), ...)."""
    g = ctx.group
    n = len(gs)
    prefixes = [x]
    for gi in gs:
        prefixes.append(g.mul(prefixes[-1], gi))
    h = [ctx.rep.rep[p] for p in prefixes]
    args = tuple(
        ctx.to_local[g.mul(g.inverse(h[i]), h[i + 1])] for i in range(n)
    )
    return ctx.coeff.act(ctx.to_local[h[0]], f.value(args))


def shapiro_beta(ctx: ShapiroContext, f: Cochain) -> Cochain:
    """Induce a subgroup cochain up to the group."""
    n = f.degree
    g = ctx.group
    m = ctx.coeff.carrier.ngens
    vals = []
    for gs in itertools.product(range(g.size), repeat=n):
        vec = []
        for t in ctx.rep.transversal:
            vec.extend(_beta_value(ctx, f, gs, t))
        vals.append(tuple(vec))
    return cochain_from_table(ctx.ind, n, vals)


def shapiro_kappa(ctx: ShapiroContext, f: Cochain) -> Cochain:
    """The homotopy: degree n+1 in, degree n out.

    Value at (g_1..g_n) evaluated at x, with p_i = x g_1...g_i and
    h_i = rep(p_i):

      f(x^{-1}h_0, h_0^{-1}h_1, ..., h_{n-1}^{-1}h_n)(x)
      + sum_i (-1)^i f(g_1..g_i, p_i^{-1}h_i, h_i^{-1}h_{i+1}, ...,
                       h_{n-1}^{-1}h_n)(x)
    """
    if f.degree < 1:
        raise ValueError("homotopy needs degree at least 1")
    n = f.degree - 1
    g = ctx.group
    car = ctx.coeff.carrier
    vals = []
    for gs in itertools.product(range(g.size), repeat=n):
        blocks = []
        for x in ctx.rep.transversal:
            prefixes = [x]
            for gi in gs:
                prefixes.append(g.mul(prefixes[-1], gi))
            h = [ctx.rep.rep[p] for p in prefixes]
            steps = [g.mul(g.inverse(h[i]), h[i + 1]) for i in range(n)]
            acc = list(
                ctx.eval_ind(
                    f.value((g.mul(g.inverse(x), h[0]), *steps)), x
                )
            )
            for i in range(1, n + 1):
                args = (
                    *gs[:i],
                    g.mul(g.inverse(prefixes[i]), h[i]),
                    *steps[i:],
                )
                v = ctx.eval_ind(f.value(args), x)
                s = _sign(i)
                for a in range(car.ngens):
                    acc[a] += s * v[a]
            blocks.extend(car.reduce(tuple(acc)))
        vals.append(tuple(blocks))
    return cochain_from_table(ctx.ind, n, vals)
