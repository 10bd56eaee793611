"""Residue fields, power residue symbols and Frobenius classes.

Place objects, ``primes_above`` and ``valuation`` live in :mod:`cycnorm.arith`
(factorization needs them) and are re-exported here.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import (
    CycElem,
    CycInt,
    Place,
    places_over,
    primes_above,
    real_place,
    root_of_unity,
    split_unit,
    valuation,
)
from .errors import PreconditionError

__all__ = [
    "Mu", "Place", "ResidueField", "ResidueElem", "primes_above", "places_over", "real_place",
    "valuation", "residue_field", "reduce", "power_residue_symbol", "frobenius_pair",
    "frobenius_class", "is_wild",
]


@dataclass(frozen=True, slots=True)
class Mu:
    """The root of unity omega**exponent, with omega of order ``n``."""

    exponent: int
    n: int = 3

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.n)

    def __mul__(self, other: Mu) -> Mu:
        if other.n != self.n:
            raise PreconditionError(f"Mu orders differ: {self.n} vs {other.n}")
        return Mu(self.exponent + other.exponent, self.n)

    def __pow__(self, k: int) -> Mu:
        return Mu(self.exponent * k, self.n)

    def inverse(self) -> Mu:
        return Mu(-self.exponent, self.n)

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0

    def __str__(self):
        return f"w^{self.exponent}" if self.n == 3 else ("1" if self.exponent == 0 else "-1")


def is_wild(place: Place, n: int | None = None) -> bool:
    n = place.ell if n is None else n
    return not place.is_real and n % place.p == 0


class ResidueField:
    """F_q for a finite place; elements are ints (f=1) or coordinate pairs (f=2)."""

    def __init__(self, place: Place):
        if place.is_real:
            raise PreconditionError("the real place has no residue field")
        self.place = place
        self.p = place.p
        self.f = place.f
        self.q = place.q
        self.zeta_image = _zeta_image(place) if place.f == 1 else None

    def reduce_int(self, x: CycInt):
        p = self.p
        if self.f == 2:
            return (x.coords[0] % p, x.coords[1] % p)
        if len(x.coords) == 1:
            return x.coords[0] % p
        return (x.coords[0] + x.coords[1] * self.zeta_image) % p

    def one(self):
        return (1, 0) if self.f == 2 else 1

    def is_zero(self, u) -> bool:
        return u == (0, 0) if self.f == 2 else u == 0

    def mul(self, u, v):
        p = self.p
        if self.f == 1:
            return u * v % p
        a0, a1 = u
        b0, b1 = v
        t = a1 * b1
        return ((a0 * b0 - t) % p, (a0 * b1 + a1 * b0 - t) % p)

    def inv(self, u):
        p = self.p
        if self.is_zero(u):
            raise ZeroDivisionError("inverse of 0 in residue field")
        if self.f == 1:
            return pow(u, -1, p)
        a0, a1 = u
        n_inv = pow((a0 * a0 - a0 * a1 + a1 * a1) % p, -1, p)
        return ((a0 - a1) * n_inv % p, (-a1) * n_inv % p)

    def pow(self, u, k: int):
        if k < 0:
            u, k = self.inv(u), -k
        if self.f == 1:
            return pow(u, k, self.p)
        out = self.one()
        while k:
            if k & 1:
                out = self.mul(out, u)
            u = self.mul(u, u)
            k >>= 1
        return out

    def elements(self):
        """All nonzero residues, in a fixed order."""
        if self.f == 1:
            return list(range(1, self.p))
        return [(i, j) for i in range(self.p) for j in range(self.p) if (i, j) != (0, 0)]

    def lift(self, u) -> CycInt:
        ell = self.place.ell
        if self.f == 2:
            return CycInt(u, ell)
        return CycInt.of(u, ell)


@lru_cache(maxsize=None)
def _zeta_image(place: Place) -> int:
    if place.ell == 2:
        return 0
    if place.p == 3:
        return 1
    # a0 + a1 w vanishes at w = r, so r = -a0 / a1 mod p
    p = place.p
    a0, a1 = place.generator.coords
    r = -a0 * pow(a1, -1, p) % p
    assert (r * r + r + 1) % p == 0, f"no image of zeta at {place!r}"
    return r


@lru_cache(maxsize=None)
def residue_field(place: Place) -> ResidueField:
    return ResidueField(place)


@dataclass(frozen=True, slots=True)
class ResidueElem:
    value: object
    place: Place

    @property
    def field(self) -> ResidueField:
        return residue_field(self.place)

    def __mul__(self, other: ResidueElem) -> ResidueElem:
        return ResidueElem(self.field.mul(self.value, other.value), self.place)

    def __pow__(self, k: int) -> ResidueElem:
        return ResidueElem(self.field.pow(self.value, k), self.place)

    def inverse(self) -> ResidueElem:
        return ResidueElem(self.field.inv(self.value), self.place)


def reduce(x, place: Place) -> ResidueElem:
    """Reduction map on the local ring at ``place``."""
    x = CycElem.of(x, place.ell)
    F = residue_field(place)
    if not x:
        return ResidueElem(F.reduce_int(CycInt.of(0, place.ell)), place)
    if valuation(x, place) < 0:
        raise PreconditionError(f"{x} has a pole at {place.label}")
    alpha, beta = split_unit(x, place)
    return ResidueElem(F.mul(F.reduce_int(alpha), F.inv(F.reduce_int(beta))), place)


def _read_root(F: ResidueField, u, n: int, ell: int) -> int:
    w = F.reduce_int(root_of_unity(n, ell).to_cycint())
    acc = F.one()
    for s in range(n):
        if acc == u:
            return s
        acc = F.mul(acc, w)
    raise AssertionError("power map did not land in the roots of unity")


def power_residue_symbol(a, place: Place, n: int | None = None) -> Mu:
    """(a/P)_n read off against the distinguished root omega."""
    n = place.ell if n is None else n
    if place.is_real:
        raise PreconditionError("power residue symbol at the real place")
    if is_wild(place, n):
        raise PreconditionError(f"{place.label} is wild for n={n}")
    if (place.q - 1) % n:
        raise PreconditionError(f"n={n} does not divide q-1 at {place.label}")
    a = CycElem.of(a, place.ell)
    if not a or valuation(a, place) != 0:
        raise PreconditionError(f"{a} is not a unit at {place.label}")
    F = residue_field(place)
    u = F.pow(reduce(a, place).value, (place.q - 1) // n)
    return Mu(_read_root(F, u, n, place.ell), n)


def frobenius_pair(place: Place, a, b) -> tuple[Mu, Mu]:
    """Image of Frob_P in Gal(K(a^(1/l), b^(1/l))/K), as the pair of symbols."""
    if is_wild(place):
        raise PreconditionError(f"{place.label} divides l")
    a = CycElem.of(a, place.ell)
    b = CycElem.of(b, place.ell)
    for v, name in ((a, "a"), (b, "b")):
        if valuation(v, place) != 0:
            raise PreconditionError(f"{place.label} divides {name}")
    return power_residue_symbol(a, place), power_residue_symbol(b, place)


def frobenius_class(pair: tuple[Mu, Mu]) -> tuple[int, int]:
    """The partition label (i, j) in {1,-1}^2 of a Frobenius pair."""
    return tuple(1 if m.is_trivial else -1 for m in pair)
