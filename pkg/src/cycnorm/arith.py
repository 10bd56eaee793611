"""Exact arithmetic in K = Q (ell=2) and K = Q(zeta_3) (ell=3).

Cyclotomic integers are stored in the power basis: ``(a0,)`` for ell=2 and
``(a0, a1)`` meaning ``a0 + a1*w`` with ``w**2 = -1 - w`` for ell=3.  Field
elements keep rational coordinates in the same basis; the normalized
numerator/denominator pair is derived on demand.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd as igcd
from math import lcm

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .errors import ArithmeticOverflow, EllMismatch, PreconditionError

SUPPORTED_ELLS = (2, 3)
DEFAULT_BIT_BOUND = int(os.environ.get("CYCNORM_BIT_BOUND", "4096"))


def check_ell(ell: int) -> None:
    if ell not in SUPPORTED_ELLS:
        raise PreconditionError(f"unsupported ell={ell}; expected one of {SUPPORTED_ELLS}")


# Coordinate-level kernels, shared by CycInt (ints) and CycElem (Fractions).

def _mul(u, v):
    if len(u) == 1:
        return (u[0] * v[0],)
    a0, a1 = u
    b0, b1 = v
    t = a1 * b1
    return (a0 * b0 - t, a0 * b1 + a1 * b0 - t)


def _conj(u):
    if len(u) == 1:
        return u
    return (u[0] - u[1], -u[1])


def _adj(u):
    """Product of the nontrivial conjugates, so that u * _adj(u) = N(u)."""
    if len(u) == 1:
        return (1,)
    return (u[0] - u[1], -u[1])


def _norm(u):
    if len(u) == 1:
        return u[0]
    a0, a1 = u
    return a0 * a0 - a0 * a1 + a1 * a1


def _vp(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass(frozen=True, slots=True)
class CycInt:
    """An element of Z[zeta_ell]."""

    coords: tuple[int, ...]
    ell: int

    def __post_init__(self):
        check_ell(self.ell)
        if len(self.coords) != self.ell - 1:
            raise ValueError(f"expected {self.ell - 1} coordinates, got {self.coords!r}")

    @classmethod
    def of(cls, value: int, ell: int) -> CycInt:
        return cls((value,) + (0,) * (ell - 2), ell)

    def _coerce(self, other) -> CycInt:
        if isinstance(other, CycInt):
            if other.ell != self.ell:
                raise EllMismatch(f"ell={self.ell} vs ell={other.ell}")
            return other
        if isinstance(other, int):
            return CycInt.of(other, self.ell)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(tuple(a + b for a, b in zip(self.coords, other.coords)), self.ell)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(tuple(a - b for a, b in zip(self.coords, other.coords)), self.ell)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(_mul(self.coords, other.coords), self.ell)

    __rmul__ = __mul__

    def __neg__(self):
        return CycInt(tuple(-a for a in self.coords), self.ell)

    def __pow__(self, k: int) -> CycInt:
        if k < 0:
            raise ValueError("negative power of a cyclotomic integer")
        result = CycInt.of(1, self.ell)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.coords)

    def norm(self) -> int:
        """Field norm down to Q (signed for ell=2)."""
        return _norm(self.coords)

    def size(self) -> int:
        """Euclidean function |N(x)|."""
        return abs(_norm(self.coords))

    def conj(self) -> CycInt:
        return CycInt(_conj(self.coords), self.ell)

    def adj(self) -> CycInt:
        """Cofactor with x * x.adj() = N(x)."""
        return CycInt(_adj(self.coords), self.ell)

    def is_unit(self) -> bool:
        return self.size() == 1

    def exact_div(self, other: CycInt) -> CycInt | None:
        """Quotient self/other if it lies in Z[zeta], else None."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero in Z[zeta]")
        n = other.norm()
        num = _mul(self.coords, _adj(other.coords))
        if any(c % n for c in num):
            return None
        return CycInt(tuple(c // n for c in num), self.ell)

    def __str__(self):
        return format_coords(self.coords, 1)


def units(ell: int) -> tuple[CycInt, ...]:
    """All units of Z[zeta_ell], in a fixed order."""
    check_ell(ell)
    if ell == 2:
        return (CycInt((1,), 2), CycInt((-1,), 2))
    return tuple(CycInt(c, 3) for c in ((1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)))


def unit_inverse(u: CycInt) -> CycInt:
    if not u.is_unit():
        raise PreconditionError(f"{u} is not a unit")
    return CycInt(_adj(u.coords), u.ell) * u.norm()


def canonical(x: CycInt) -> tuple[CycInt, CycInt]:
    """Return ``(c, u)`` with ``c = u*x`` the canonical associate of ``x``.

    Among the unit multiples with positive leading coordinate the
    lexicographically smallest coordinate vector wins.
    """
    if not x:
        return x, CycInt.of(1, x.ell)
    best = None
    for u in units(x.ell):
        y = u * x
        if y.coords[0] > 0 and (best is None or y.coords < best[0].coords):
            best = (y, u)
    return best


def euclid_divmod(a: CycInt, b: CycInt) -> tuple[CycInt, CycInt]:
    """Division with remainder: a = q*b + r with |N(r)| < |N(b)|."""
    b = a._coerce(b)
    if not b:
        raise ZeroDivisionError("euclid_divmod by zero")
    n = b.norm()
    num = _mul(a.coords, _adj(b.coords))
    choices = []
    for c in num:
        fl = c // n
        choices.append((fl, fl + 1) if c % n else (fl,))
    best = None
    for qc in product(*choices):
        q = CycInt(tuple(qc), a.ell)
        r = a - q * b
        key = (r.size(), r.coords)
        if best is None or key < best[0]:
            best = (key, q, r)
    return best[1], best[2]


def xgcd(a: CycInt, b: CycInt) -> tuple[CycInt, CycInt, CycInt]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` canonical."""
    b = a._coerce(b)
    one, zero = CycInt.of(1, a.ell), CycInt.of(0, a.ell)
    r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
    while r1:
        q, r = euclid_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    g, u = canonical(r0)
    return g, u * s0, u * t0


def gcd(a: CycInt, b: CycInt) -> CycInt:
    return xgcd(a, b)[0]


def inverse_mod(a: CycInt, m: CycInt) -> CycInt:
    """Inverse of ``a`` modulo the ideal ``(m)``."""
    g, s, _ = xgcd(a, m)
    if not g.is_unit():
        raise PreconditionError(f"{a} is not invertible modulo {m}")
    return euclid_divmod(s * unit_inverse(g), m)[1]


def _to_fraction_coords(coords) -> tuple[Fraction, ...]:
    return tuple(c if isinstance(c, Fraction) else Fraction(c) for c in coords)


@dataclass(frozen=True, slots=True)
class CycElem:
    """An element of K stored by rational power-basis coordinates."""

    coords: tuple[Fraction, ...]
    ell: int

    def __post_init__(self):
        check_ell(self.ell)
        if len(self.coords) != self.ell - 1:
            raise ValueError(f"expected {self.ell - 1} coordinates, got {self.coords!r}")
        object.__setattr__(self, "coords", _to_fraction_coords(self.coords))

    @classmethod
    def of(cls, value, ell: int) -> CycElem:
        if isinstance(value, CycElem):
            if value.ell != ell:
                raise EllMismatch(f"ell={value.ell} vs ell={ell}")
            return value
        if isinstance(value, CycInt):
            if value.ell != ell:
                raise EllMismatch(f"ell={value.ell} vs ell={ell}")
            return cls(value.coords, ell)
        if isinstance(value, (int, Fraction)):
            return cls((Fraction(value),) + (Fraction(0),) * (ell - 2), ell)
        raise TypeError(f"cannot convert {type(value).__name__} to CycElem")

    def _coerce(self, other):
        if isinstance(other, (CycElem, CycInt, int, Fraction)):
            return CycElem.of(other, self.ell)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycElem.of(other, self.ell)
        if not isinstance(other, CycElem):
            return NotImplemented
        return self.ell == other.ell and self.coords == other.coords

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElem(tuple(a + b for a, b in zip(self.coords, other.coords)), self.ell)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElem(tuple(a - b for a, b in zip(self.coords, other.coords)), self.ell)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElem(_mul(self.coords, other.coords), self.ell)

    __rmul__ = __mul__

    def __neg__(self):
        return CycElem(tuple(-a for a in self.coords), self.ell)

    def inverse(self) -> CycElem:
        n = _norm(self.coords)
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return CycElem(tuple(c / n for c in _adj(self.coords)), self.ell)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int) -> CycElem:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = CycElem.of(1, self.ell)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.coords)

    def norm(self) -> Fraction:
        return _norm(self.coords)

    def conj(self) -> CycElem:
        return CycElem(_conj(self.coords), self.ell)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def to_cycint(self) -> CycInt:
        if not self.is_integral():
            raise PreconditionError(f"{self} is not integral")
        return CycInt(tuple(c.numerator for c in self.coords), self.ell)

    def split(self) -> tuple[CycInt, int]:
        """Return ``(alpha, d)`` with self = alpha/d, d a positive integer."""
        d = lcm(*(c.denominator for c in self.coords))
        return CycInt(tuple(c.numerator * (d // c.denominator) for c in self.coords), self.ell), d

    def num_den(self) -> tuple[CycInt, CycInt]:
        """Normalized fraction: coprime numerator and canonical denominator."""
        alpha, d = self.split()
        dd = CycInt.of(d, self.ell)
        if not alpha:
            return alpha, CycInt.of(1, self.ell)
        g = gcd(alpha, dd)
        num, den = alpha.exact_div(g), dd.exact_div(g)
        den, u = canonical(den)
        return num * u, den

    @property
    def num(self) -> CycInt:
        return self.num_den()[0]

    @property
    def den(self) -> CycInt:
        return self.num_den()[1]

    def bit_length(self) -> int:
        alpha, d = self.split()
        return max([d.bit_length()] + [abs(c).bit_length() for c in alpha.coords])

    def sort_key(self):
        return self.coords

    def __str__(self):
        alpha, d = self.split()
        return format_coords(alpha.coords, d)

    def __repr__(self):
        return f"CycElem({self}, ell={self.ell})"


def format_coords(coords, d: int = 1) -> str:
    """Render ``(c0 + c1*w)/d`` in the element grammar understood by the parser."""
    terms = []
    for i, c in enumerate(coords):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            body = "w" if mag == 1 else f"{mag}*w"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    text = "".join(s + b for s, b in terms)
    text = text[1:] if text[0] == "+" else text
    if d == 1:
        return text
    if len(terms) > 1:
        return f"({text})/{d}"
    return f"{text}/{d}"


def elem(value, ell: int) -> CycElem:
    """Coerce ints, Fractions, CycInts and element strings to CycElem."""
    if isinstance(value, str):
        from .expr import parse_elem

        return parse_elem(value, ell)
    return CycElem.of(value, ell)


def zeta(ell: int) -> CycElem:
    """The distinguished primitive ell-th root of unity (w for ell=3, -1 for ell=2)."""
    check_ell(ell)
    return CycElem((0, 1), 3) if ell == 3 else CycElem.of(-1, 2)


def root_of_unity(n: int, ell: int) -> CycElem:
    """Distinguished primitive n-th root of unity in K (n must divide |mu(K)|)."""
    if n == 2:
        return CycElem.of(-1, ell)
    if n == 3 and ell == 3:
        return zeta(3)
    raise PreconditionError(f"K for ell={ell} does not contain the {n}-th roots of unity")


# Places

@dataclass(frozen=True)
class Place:
    """A finite prime of K given by its canonical generator, or the real place."""

    kind: str
    ell: int
    p: int | None = None
    generator: CycInt | None = None
    e: int = 1
    f: int = 1
    index: int = 0
    count: int = 1

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    @property
    def q(self) -> int:
        """Size of the residue field."""
        return self.p ** self.f

    @property
    def label(self) -> str:
        if self.is_real:
            return "real"
        return str(self.p) if self.count == 1 else f"{self.p},{self.index}"

    def sort_key(self):
        if self.is_real:
            return (1, 0, ())
        return (0, self.p, self.generator.coords)

    def __lt__(self, other: Place) -> bool:
        return self.sort_key() < other.sort_key()

    def gen_elem(self) -> CycElem:
        return CycElem.of(self.generator, self.ell)

    def to_json(self) -> dict:
        if self.is_real:
            return {"kind": "real", "label": "real"}
        return {"p": self.p, "gen": list(self.generator.coords), "e": self.e, "f": self.f,
                "label": self.label}

    def __str__(self):
        return self.label

    def __repr__(self):
        if self.is_real:
            return "Place(real)"
        return f"Place({self.label}, gen={self.generator}, e={self.e}, f={self.f})"


def real_place(ell: int) -> Place:
    if ell != 2:
        raise PreconditionError("Q(zeta_3) has no real places")
    return Place("real", 2)


@lru_cache(maxsize=None)
def primes_above(p: int, ell: int) -> tuple[Place, ...]:
    """All places of K over the rational prime ``p``, canonically ordered."""
    check_ell(ell)
    if p < 2 or not isprime(p):
        raise PreconditionError(f"{p} is not prime")
    if ell == 2:
        return (Place("finite", 2, p, CycInt((p,), 2)),)
    if p == 3:
        gen, _ = canonical(CycInt((1, -1), 3))
        return (Place("finite", 3, 3, gen, e=2, f=1),)
    if p % 3 == 2:
        return (Place("finite", 3, p, CycInt((p, 0), 3), e=1, f=2),)
    s = sqrt_mod(-3, p)
    inv2 = pow(2, -1, p)
    roots = sorted({(-1 + s) * inv2 % p, (-1 - s) * inv2 % p})
    gens = sorted((gcd(CycInt((p, 0), 3), CycInt((-r, 1), 3)) for r in roots),
                  key=lambda g: g.coords)
    return tuple(Place("finite", 3, p, g, e=1, f=1, index=i, count=2) for i, g in enumerate(gens))


def places_over(ps, ell: int) -> list[Place]:
    out = []
    for p in sorted(set(ps)):
        out.extend(primes_above(p, ell))
    return out


@lru_cache(maxsize=4096)
def _cofactor(place: Place) -> CycInt:
    """p / gen**e, an element of Z[zeta] prime to the place."""
    return CycInt.of(place.p, place.ell).exact_div(place.generator ** place.e)


def _valuation_int(alpha: CycInt, place: Place) -> int:
    content = igcd(*alpha.coords)
    v = place.e * _vp(content, place.p)
    rest = CycInt(tuple(c // content for c in alpha.coords), alpha.ell)
    if place.f == 2 or (place.ell == 2):
        return v
    # residual primitive part: divide by the generator while exact
    while True:
        nxt = rest.exact_div(place.generator)
        if nxt is None:
            return v
        rest = nxt
        v += 1


def valuation(x, place: Place) -> int:
    """Normalized valuation v_P(x) for x != 0."""
    if place.is_real:
        raise PreconditionError("valuation at the real place is undefined")
    x = CycElem.of(x, place.ell)
    if not x:
        raise PreconditionError("valuation of zero")
    alpha, d = x.split()
    return _valuation_int(alpha, place) - place.e * _vp(d, place.p)


def split_unit(x: CycElem, place: Place) -> tuple[CycInt, CycInt]:
    """Write a P-integral x as alpha/beta with alpha, beta integral and beta a P-unit."""
    alpha, d = x.split()
    k = _vp(d, place.p)
    d1 = d // place.p ** k
    beta = CycInt.of(d1, x.ell)
    if k:
        pe = place.generator ** (place.e * k)
        alpha = alpha.exact_div(pe)
        if alpha is None:
            raise PreconditionError(f"{x} is not integral at {place.label}")
        beta = beta * _cofactor(place) ** k
    return alpha, beta


@dataclass(frozen=True)
class Factorization:
    """x = unit * prod(generator(P)**k)."""

    unit: CycInt
    factors: tuple[tuple[Place, int], ...]

    def exponent(self, place: Place) -> int:
        for P, k in self.factors:
            if P == place:
                return k
        return 0

    def expand(self) -> CycElem:
        out = CycElem.of(self.unit, self.unit.ell)
        for P, k in self.factors:
            out = out * P.gen_elem() ** k
        return out

    def places(self) -> list[Place]:
        return [P for P, _ in self.factors]


@lru_cache(maxsize=65536)
def factor(x: CycElem) -> Factorization:
    """Prime factorization of a nonzero element (both fields have class number 1)."""
    if not x:
        raise PreconditionError("factor of zero")
    alpha, d = x.split()
    primes = set(factorint(abs(alpha.norm()))) | set(factorint(d))
    factors = []
    rest = x
    for P in places_over(primes, x.ell):
        v = valuation(x, P)
        if v:
            factors.append((P, v))
            rest = rest / P.gen_elem() ** v
    unit = rest.to_cycint()
    assert unit.is_unit(), f"factorization residue {unit} is not a unit"
    return Factorization(unit, tuple(factors))


def support(x: CycElem) -> list[Place]:
    return factor(x).places()


def crt_approx(constraints, ell: int | None = None, bit_bound: int | None = None) -> CycElem:
    """Weak approximation at finitely many finite places.

    ``constraints`` is a list of ``(place, target, k)``; the result ``x``
    satisfies ``v_P(x - target) >= k`` for each entry.  Nonzero whenever the
    list is nonempty; an empty list gives 0 of the field ``ell`` (default 3).
    """
    bit_bound = DEFAULT_BIT_BOUND if bit_bound is None else bit_bound
    constraints = list(constraints)
    if not constraints:
        return CycElem.of(0, ell or 3)
    if ell is not None and constraints[0][0].ell != ell:
        raise EllMismatch(f"ell={ell} vs place ell={constraints[0][0].ell}")
    ell = constraints[0][0].ell
    seen = set()
    shifts = {}
    for P, t, k in constraints:
        if P.is_real:
            raise PreconditionError("crt_approx handles finite places only")
        if P in seen:
            raise PreconditionError(f"duplicate place {P.label}")
        seen.add(P)
        t = CycElem.of(t, ell)
        shifts[P] = max(0, -valuation(t, P)) if t else 0
    h = CycInt.of(1, ell)
    for P, n in shifts.items():
        h = h * P.generator ** n
    hh = CycElem.of(h, ell)
    y = CycInt.of(0, ell)
    modulus = CycInt.of(1, ell)
    for P, t, k in constraints:
        prec = k + shifts[P]
        if prec <= 0:
            continue
        m = P.generator ** prec
        s = hh * CycElem.of(t, ell)
        if s:
            a, b = split_unit(s, P)
            rep = euclid_divmod(a * inverse_mod(b, m), m)[1]
        else:
            rep = CycInt.of(0, ell)
        t_step = euclid_divmod((rep - y) * inverse_mod(modulus, m), m)[1]
        y = y + modulus * t_step
        modulus = modulus * m
        y = euclid_divmod(y, modulus)[1]
        if max(abs(c).bit_length() for c in y.coords + modulus.coords) > bit_bound:
            raise ArithmeticOverflow(f"crt_approx exceeded {bit_bound} bits")
    if not y:
        y = modulus
    x = CycElem.of(y, ell) / hh
    for P, t, k in constraints:
        diff = x - CycElem.of(t, ell)
        assert not diff or valuation(diff, P) >= k, "crt_approx postcondition failed"
    return x

