"""Hilbert symbols, local square/cube classes and the prescribed-symbol solver.

Tame symbols come from the explicit residue formula.  The unique wild place
of each supported field gets its value from Hilbert reciprocity, and
:func:`wild_split_oracle` decides triviality there independently by
saturating the local norm subgroup with norms of global elements.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import count, product
from math import ceil

from sympy import integer_nthroot, isprime

from .arith import (
    CycElem,
    CycInt,
    Place,
    check_ell,
    crt_approx,
    factor,
    places_over,
    primes_above,
    real_place,
    split_unit,
    valuation,
)
from .errors import ConditionViolated, PreconditionError, SearchExhausted
from .places import Mu, is_wild, power_residue_symbol, reduce, residue_field

DEFAULT_SEARCH_BOUND = int(os.environ.get("CYCNORM_SEARCH_BOUND", "100000"))


def _degree(ell: int, n: int | None) -> int:
    n = ell if n is None else n
    if n == 2 or (n == 3 and ell == 3):
        return n
    raise PreconditionError(f"K for ell={ell} does not contain the {n}-th roots of unity")


def wild_place(ell: int, n: int | None = None) -> Place:
    """The unique place above the residue characteristic of ``n``."""
    n = _degree(ell, n)
    (P,) = primes_above(n, ell)
    return P


def has_real_place(ell: int, n: int | None = None) -> bool:
    return ell == 2 and _degree(ell, n) == 2


def relevant_places(elements, ell: int, n: int | None = None) -> list[Place]:
    """Places where a symbol involving ``elements`` can be nontrivial, sorted."""
    n = _degree(ell, n)
    ps = {n}
    for x in elements:
        x = CycElem.of(x, ell)
        ps.update(P.p for P in factor(x).places())
    out = places_over(ps, ell)
    if has_real_place(ell, n):
        out.append(real_place(ell))
    return out


def _unit_part(x: CycElem, place: Place) -> tuple[int, CycElem]:
    v = valuation(x, place)
    return v, x / place.gen_elem() ** v


def tame_symbol(a, b, place: Place, n: int | None = None) -> Mu:
    """Hilbert symbol at a finite place not dividing ``n``."""
    n = _degree(place.ell, n)
    if place.is_real or is_wild(place, n):
        raise PreconditionError(f"{place.label} is not tame for n={n}")
    a = CycElem.of(a, place.ell)
    b = CycElem.of(b, place.ell)
    if not a or not b:
        raise PreconditionError("Hilbert symbol of zero")
    va, ua = _unit_part(a, place)
    vb, ub = _unit_part(b, place)
    F = residue_field(place)
    ra, rb = reduce(ua, place).value, reduce(ub, place).value
    # (-1)^(va vb) * ua^vb / ub^va, the generator powers cancel
    u = F.mul(F.pow(ra, vb), F.pow(rb, -va))
    if (va * vb) % 2:
        u = F.mul(u, F.reduce_int(CycInt.of(-1, place.ell)))
    return power_residue_symbol(CycElem.of(F.lift(u), place.ell), place, n)


def real_symbol(a, b, n: int = 2) -> Mu:
    a = CycElem.of(a, 2)
    b = CycElem.of(b, 2)
    return Mu(1 if a.coords[0] < 0 and b.coords[0] < 0 else 0, 2)


def hilbert_symbol(a, b, place: Place, n: int | None = None) -> Mu:
    """The degree-n Hilbert symbol (a, b) at ``place`` (n defaults to l)."""
    n = _degree(place.ell, n)
    a = CycElem.of(a, place.ell)
    b = CycElem.of(b, place.ell)
    if not a or not b:
        raise PreconditionError("Hilbert symbol of zero")
    if place.is_real:
        return real_symbol(a, b)
    if not is_wild(place, n):
        return tame_symbol(a, b, place, n)
    acc = Mu(0, n)
    for P in relevant_places((a, b), place.ell, n):
        if P != place:
            acc = acc * hilbert_symbol(a, b, P, n)
    return acc.inverse()


def all_symbols(a, b, ell: int, n: int | None = None) -> dict[Place, Mu]:
    """Symbols at every place where they can be nontrivial (wild one included)."""
    n = _degree(ell, n)
    a = CycElem.of(a, ell)
    b = CycElem.of(b, ell)
    places = relevant_places((a, b), ell, n)
    out = {}
    acc = Mu(0, n)
    wild = wild_place(ell, n)
    for P in places:
        if P != wild:
            out[P] = hilbert_symbol(a, b, P, n)
            acc = acc * out[P]
    out[wild] = acc.inverse()
    return dict(sorted(out.items(), key=lambda kv: kv[0].sort_key()))


# Local classes in K_P^* / K_P^{*n}, as vectors over F_n.

@dataclass(frozen=True)
class _WildUnits:
    """Coordinates on units mod n-th powers, tabulated modulo p**k."""

    modulus: int
    gens: tuple[tuple[int, ...], ...]
    table: dict

    @property
    def dim(self) -> int:
        return len(self.gens)


def _mod_mul(u, v, m):
    if len(u) == 1:
        return (u[0] * v[0] % m,)
    a0, a1 = u
    b0, b1 = v
    t = a1 * b1
    return ((a0 * b0 - t) % m, (a0 * b1 + a1 * b0 - t) % m)


def _mod_pow(u, k, m):
    out = (1,) + (0,) * (len(u) - 1)
    while k:
        if k & 1:
            out = _mod_mul(out, u, m)
        u = _mod_mul(u, u, m)
        k >>= 1
    return out


@lru_cache(maxsize=None)
def _wild_units(place: Place, n: int) -> _WildUnits:
    # 1 + P^(2e+1) consists of n-th powers; p^k lies inside P^(2e+1)
    k = ceil((2 * place.e + 1) / place.e)
    m = place.p ** k
    dim = place.ell - 1
    F = residue_field(place)
    group = [c for c in product(range(m), repeat=dim)
             if not F.is_zero(F.reduce_int(CycInt(c, place.ell)))]
    powers = {_mod_pow(g, n, m) for g in group}
    sub = set(powers)
    gens = []
    for g in group:
        if g in sub:
            continue
        gens.append(g)
        grown = set()
        gi = (1,) + (0,) * (dim - 1)
        for _ in range(n):
            grown.update(_mod_mul(h, gi, m) for h in sub)
            gi = _mod_mul(gi, g, m)
        sub = grown
    table = {}
    for vec in product(range(n), repeat=len(gens)):
        rep = (1,) + (0,) * (dim - 1)
        for g, e in zip(gens, vec):
            rep = _mod_mul(rep, _mod_pow(g, e, m), m)
        for h in powers:
            table[_mod_mul(rep, h, m)] = vec
    assert len(table) == len(group)
    return _WildUnits(m, tuple(gens), table)


def _unit_residue_mod(u: CycElem, place: Place, m: int) -> tuple[int, ...]:
    alpha, beta = split_unit(u, place)
    nb = beta.norm()
    inv = pow(nb % m, -1, m)
    inv_beta = tuple(c * inv % m for c in beta.adj().coords)
    return _mod_mul(tuple(c % m for c in alpha.coords), inv_beta, m)


def local_class_dim(place: Place, n: int | None = None) -> int:
    n = _degree(place.ell, n)
    if place.is_real:
        return 1
    if is_wild(place, n):
        return 1 + _wild_units(place, n).dim
    return 2


def local_class(x, place: Place, n: int | None = None) -> tuple[int, ...]:
    """Coordinates of the class of x in K_P^*/K_P^{*n}; zero vector means n-th power."""
    n = _degree(place.ell, n)
    x = CycElem.of(x, place.ell)
    if not x:
        raise PreconditionError("local class of zero")
    if place.is_real:
        return (1 if x.coords[0] < 0 else 0,)
    v, u = _unit_part(x, place)
    if is_wild(place, n):
        W = _wild_units(place, n)
        return (v % n,) + W.table[_unit_residue_mod(u, place, W.modulus)]
    return (v % n, power_residue_symbol(u, place, n).exponent)


def is_local_power(x, place: Place, n: int | None = None) -> bool:
    return not any(local_class(x, place, n))


def _kummer_norms(b: CycElem, n: int):
    """Yield N(t_0 + t_1 s + ... ) for s^n = b, over integral t in height order."""
    ell = b.ell
    dim = ell - 1
    for h in count(1):
        for flat in product(range(-h, h + 1), repeat=n * dim):
            if max(map(abs, flat)) != h:
                continue
            t = [CycElem(flat[i * dim:(i + 1) * dim], ell) for i in range(n)]
            if n == 2:
                yield t[0] * t[0] - b * t[1] * t[1]
            else:
                yield (t[0] ** 3 + b * t[1] ** 3 + b * b * t[2] ** 3
                       - 3 * b * t[0] * t[1] * t[2])


def _reduce_rows(rows, n):
    """Row echelon basis over F_n."""
    basis = []
    for r in rows:
        r = list(r)
        for piv, br in basis:
            if r[piv]:
                f = r[piv]
                r = [(x - f * y) % n for x, y in zip(r, br)]
        nz = [i for i, x in enumerate(r) if x]
        if nz:
            piv = nz[0]
            inv = pow(r[piv], -1, n)
            r = [x * inv % n for x in r]
            new = []
            for p2, br in basis:
                if br[piv]:
                    f = br[piv]
                    br = [(x - f * y) % n for x, y in zip(br, r)]
                new.append((p2, br))
            basis = new + [(piv, r)]
    return basis


def _in_span(vec, basis, n) -> bool:
    r = list(vec)
    for piv, br in basis:
        if r[piv]:
            f = r[piv]
            r = [(x - f * y) % n for x, y in zip(r, br)]
    return not any(r)


def wild_split_oracle(a, b, ell: int | None = None, n: int | None = None,
                      bound: int = DEFAULT_SEARCH_BOUND) -> bool:
    """True iff a is a local norm from K_P(b^(1/n)) at the wild place P.

    Works only with data at P: norms of integral elements of K(b^(1/n)) are
    local norms, and once their classes span a hyperplane of K_P^*/K_P^{*n}
    (the norm subgroup has index n) membership of a's class is decided.
    """
    if ell is None:
        ell = a.ell if isinstance(a, CycElem) else b.ell
    n = _degree(ell, n)
    a = CycElem.of(a, ell)
    b = CycElem.of(b, ell)
    if not a or not b:
        raise PreconditionError("wild_split_oracle of zero")
    P = wild_place(ell, n)
    if is_local_power(b, P, n):
        return True
    target = local_class_dim(P, n) - 1
    basis = []
    for i, N in enumerate(_kummer_norms(b, n)):
        if i >= bound:
            raise SearchExhausted("wild_split_oracle", bound)
        if not N:
            continue
        vec = local_class(N, P, n)
        if not _in_span(vec, basis, n):
            basis = _reduce_rows([br for _, br in basis] + [vec], n)
            if len(basis) == target:
                break
    return _in_span(local_class(a, P, n), basis, n)


@dataclass(frozen=True)
class LocalClassRep:
    """Global representatives of every class of K_P^*/K_P^{*n} and their pairing."""

    place: Place
    n: int
    reps: tuple[CycElem, ...]
    vectors: tuple[tuple[int, ...], ...]
    pairing: tuple[tuple[Mu, ...], ...]

    def __len__(self):
        return len(self.reps)

    def rep_for(self, vec) -> CycElem:
        return self.reps[self.vectors.index(tuple(vec))]

    def is_nondegenerate(self) -> bool:
        size = len(self.reps)
        for i in range(size):
            if not any(self.vectors[i]):
                continue
            if all(self.pairing[i][j].is_trivial for j in range(size)):
                return False
            if all(self.pairing[j][i].is_trivial for j in range(size)):
                return False
        return True


def _tame_nonresidue(place: Place, n: int) -> CycElem:
    F = residue_field(place)
    for u in F.elements():
        c = CycElem.of(F.lift(u), place.ell)
        if power_residue_symbol(c, place, n).exponent == 1:
            return c
    raise AssertionError(f"no primitive non-residue at {place.label}")


@lru_cache(maxsize=None)
def _class_reps(place: Place, n: int) -> tuple[tuple[CycElem, ...], tuple[tuple[int, ...], ...]]:
    ell = place.ell
    if place.is_real:
        return (CycElem.of(1, 2), CycElem.of(-1, 2)), ((0,), (1,))
    pi = place.gen_elem()
    reps, vecs = [], []
    if is_wild(place, n):
        W = _wild_units(place, n)
        unit_reps = {}
        for c, vec in sorted(W.table.items()):
            unit_reps.setdefault(vec, CycElem(c, ell))
        unit_reps[(0,) * W.dim] = CycElem.of(1, ell)
        for j in range(n):
            for vec in product(range(n), repeat=W.dim):
                reps.append(pi ** j * unit_reps[vec])
                vecs.append((j,) + vec)
    else:
        u = _tame_nonresidue(place, n)
        for j in range(n):
            for i in range(n):
                reps.append(u ** i * pi ** j)
                vecs.append((j, i))
    for r, v in zip(reps, vecs):
        assert local_class(r, place, n) == v
    return tuple(reps), tuple(vecs)


@lru_cache(maxsize=None)
def local_class_reps(place: Place, n: int | None = None) -> LocalClassRep:
    n = _degree(place.ell, n)
    reps, vecs = _class_reps(place, n)
    pairing = tuple(tuple(hilbert_symbol(r, s, place, n) for s in reps) for r in reps)
    return LocalClassRep(place, n, reps, vecs, pairing)


# Prescribing symbols

@dataclass(frozen=True)
class SymbolConstraint:
    """Require (a, x)_place = target."""

    a: CycElem
    place: Place
    target: Mu


def _row_targets(constraints, elements, places, n):
    targets = {}
    for c in constraints:
        key = (elements.index(CycElem.of(c.a, c.place.ell)), c.place)
        if key in targets and targets[key] != c.target:
            raise ConditionViolated(1, f"conflicting targets for {c.a} at {c.place.label}")
        targets[key] = c.target
    return {(i, P): targets.get((i, P), Mu(0, n)) for i in range(len(elements)) for P in places}


def _solve_place(elements, targets, place: Place, n: int) -> CycElem:
    want = [targets[(i, place)] for i in range(len(elements))]
    for r in _class_reps(place, n)[0]:
        if all(hilbert_symbol(a, r, place, n) == t for a, t in zip(elements, want)):
            return r
    raise ConditionViolated(3, f"no local solution at {place.label}")


def _shell(ell: int):
    dim = ell - 1
    yield CycInt.of(0, ell)
    for h in count(1):
        for c in product(range(-h, h + 1), repeat=dim):
            if max(map(abs, c)) == h:
                yield CycInt(c, ell)


def _is_prime_element(w: CycInt) -> bool:
    # a prime norm, or an inert rational prime times a unit
    if not w or w.is_unit():
        return False
    n = abs(w.norm())
    if isprime(n):
        return True
    if w.ell == 2:
        return False
    r, exact = integer_nthroot(n, 2)
    if not exact or r % 3 != 2 or not isprime(r):
        return False
    return w.exact_div(CycInt.of(r, w.ell)) is not None


def prescribe_symbols(constraints, modulus_places=(), ell: int | None = None,
                      n: int | None = None, search_bound: int | None = None) -> CycElem:
    """Find x with (a_i, x)_P equal to every requested target.

    Places not named by a constraint get target 1 wherever the symbol can be
    nontrivial.  Raises ConditionViolated when the family is unsolvable and
    SearchExhausted if the auxiliary prime hunt runs past ``search_bound``.
    """
    constraints = list(constraints)
    search_bound = DEFAULT_SEARCH_BOUND if search_bound is None else search_bound
    if not constraints:
        return CycElem.of(1, ell or 3)
    ell = constraints[0].place.ell if ell is None else ell
    check_ell(ell)
    n = _degree(ell, n)
    elements = []
    for c in constraints:
        if c.target.n != n:
            raise PreconditionError(f"target {c.target} is not an {n}-th root of unity")
        a = CycElem.of(c.a, ell)
        if a not in elements:
            elements.append(a)
    places = set(relevant_places(elements, ell, n))
    places.update(c.place for c in constraints)
    places.update(modulus_places)
    places = sorted(places, key=Place.sort_key)
    targets = _row_targets(constraints, elements, places, n)

    for i, a in enumerate(elements):
        acc = Mu(0, n)
        for P in places:
            acc = acc * targets[(i, P)]
        if not acc.is_trivial:
            raise ConditionViolated(2, f"row product for {a} is {acc}")

    local = {P: _solve_place(elements, targets, P, n) for P in places}
    finite = [P for P in places if not P.is_real]
    approx = []
    for P in finite:
        r = local[P]
        prec = valuation(r, P) + (2 * P.e + 1 if is_wild(P, n) else 1)
        approx.append((P, r, prec))
    x0 = crt_approx(approx, ell)
    want_negative = any(P.is_real for P in places) and local[real_place(ell)].coords[0] < 0

    def done(x):
        return all(local_class(x, P, n) == local_class(local[P], P, n) for P in places)

    # split off the part of x0 supported on S by valuations, no full factorization
    s_part = CycElem.of(1, ell)
    for P in finite:
        s_part = s_part * P.gen_elem() ** valuation(x0, P)
    w0 = (x0 / s_part).to_cycint()
    if w0.is_unit() and done(x0):
        return _checked(x0, elements, targets, places, n)
    M = CycInt.of(1, ell)
    for P, _, prec in approx:
        M = M * P.generator ** (prec - valuation(local[P], P))
    for i, k in enumerate(_shell(ell)):
        if i >= search_bound:
            raise SearchExhausted("prescribe_symbols", search_bound)
        w = w0 + M * k
        if want_negative != (w.coords[0] < 0) and ell == 2:
            continue
        if not (w.is_unit() or _is_prime_element(w)):
            continue
        x = s_part * CycElem.of(w, ell)
        if done(x):
            return _checked(x, elements, targets, places, n)
    raise SearchExhausted("prescribe_symbols", search_bound)


def _checked(x, elements, targets, places, n):
    for i, a in enumerate(elements):
        syms = all_symbols(a, x, a.ell, n)
        for P in set(places) | set(syms):
            want = targets.get((i, P), Mu(0, n))
            got = syms.get(P, Mu(0, n))
            assert got == want, f"prescribed symbol mismatch at {P.label}: {got} != {want}"
    return x
