"""Exact cohomology of finite monoids and groups.

Cochain complexes, filtrations, Shapiro maps with explicit homotopy,
shuffle operators, a Hochschild-Serre style spectral sequence and the
double-complex comparison, all over arbitrary-precision integers.
"""

from .abelian import (
    AbHom,
    FgAbelianGroup,
    IntMatrix,
    canonicalize,
    homology_at,
    smith_normal_form,
    subquotient,
)
from .monoids import (
    CosetRepMap,
    FiniteMonoid,
    QuotientData,
    SetupMonoid,
    build_monoid,
    conjugate_by,
    coset_rep_map,
    direct_product,
    quotient_with_section,
)

__all__ = [
    "AbHom",
    "FgAbelianGroup",
    "IntMatrix",
    "canonicalize",
    "homology_at",
    "smith_normal_form",
    "subquotient",
    "CosetRepMap",
    "FiniteMonoid",
    "QuotientData",
    "SetupMonoid",
    "build_monoid",
    "conjugate_by",
    "coset_rep_map",
    "direct_product",
    "quotient_with_section",
]
