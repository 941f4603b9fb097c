"""Shared builders for the standard test matrix of monoids and modules."""

import pytest

from monocoh.abelian import FgAbelianGroup, IntMatrix
from monocoh.modules import GModule
from monocoh.monoids import FiniteMonoid, direct_product, setup_from_group

C2 = FiniteMonoid.cyclic(2)
C3 = FiniteMonoid.cyclic(3)
S3 = FiniteMonoid.symmetric3()
Z2M = FiniteMonoid.z2_mult()
A3 = (0, 4, 5)

# parity exponent per element: trivial where no order-2 character exists
SIGN_EXPONENT = {
    "C2": lambda m: [0, 1],
    "C3": lambda m: [0, 0, 0],
    "S3": lambda m: [0, 1, 1, 1, 0, 0],
    "Z2M": lambda m: [0, 0],
}


def zmod_trivial(monoid: FiniteMonoid, n: int) -> GModule:
    return GModule.trivial(monoid, FgAbelianGroup.from_invariants([n]))


def z_trivial(monoid: FiniteMonoid) -> GModule:
    return GModule.trivial(monoid, FgAbelianGroup.free(1))


def zmod_signed(monoid: FiniteMonoid, n: int, exponents) -> GModule:
    """Z/n where element g acts by (-1)^exponents[g]."""
    car = FgAbelianGroup.from_invariants([n])
    pos = IntMatrix.from_rows([[1]])
    neg = IntMatrix.from_rows([[-1]])
    return GModule(monoid, car, {g: (neg if exponents[g] else pos) for g in range(monoid.size)})


def z2_swap(monoid: FiniteMonoid, exponents) -> GModule:
    """Z^2 where element g acts by swap^exponents[g]."""
    car = FgAbelianGroup.free(2)
    eye = IntMatrix.identity(2)
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    return GModule(monoid, car, {g: (swap if exponents[g] else eye) for g in range(monoid.size)})


def monoid_matrix():
    """The acceptance test matrix of monoids, with parity exponents."""
    c2xz2m = direct_product([C2, Z2M])
    return [
        ("C2", C2, [0, 1]),
        ("C3", C3, [0, 0, 0]),
        ("S3", S3, [0, 1, 1, 1, 0, 0]),
        ("Z2M", Z2M, [0, 0]),
        ("C2xZ2M", c2xz2m.product, [c2xz2m.coords[x][0] for x in range(4)]),
    ]


def module_matrix(monoid: FiniteMonoid, exponents):
    """Coefficient modules per monoid: Z/2, Z/3, Z/4 trivial, Z^2 swap."""
    return [
        ("Z/2", zmod_trivial(monoid, 2)),
        ("Z/3", zmod_trivial(monoid, 3)),
        ("Z/4", zmod_trivial(monoid, 4)),
        ("Z^2-swap", z2_swap(monoid, exponents)),
    ]


@pytest.fixture(scope="session")
def s3_setup():
    return setup_from_group(S3)


@pytest.fixture(scope="session")
def c2_setup():
    return setup_from_group(C2)
