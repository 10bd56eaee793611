"""Membership predicates for the diophantine sets built from cyclic algebras.

Every set is decided through its valuation / symbol characterization, never
by searching over the defining sums.  The fixed data (a, b, modulus) lives
in :class:`Params`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import count

from sympy import nextprime

from .arith import (
    CycElem,
    Place,
    crt_approx,
    factor,
    primes_above,
    real_place,
    units,
    valuation,
)
from .errors import PreconditionError, SearchExhausted
from .norms import delta, is_lth_power
from .places import Mu, frobenius_pair, is_wild, power_residue_symbol
from .symbols import DEFAULT_SEARCH_BOUND, hilbert_symbol

CLASSES = ((1, 1), (-1, -1), (1, -1), (-1, 1))
NONTRIVIAL = ((-1, -1), (1, -1), (-1, 1))


@dataclass(frozen=True)
class Params:
    """The fixed pair (a, b), the places p0, p1 used to build it, and the modulus."""

    ell: int
    a: CycElem
    b: CycElem
    modulus: tuple[tuple[Place, int], ...]
    p0: Place
    p1: Place
    seed: int = 0

    @property
    def modulus_places(self) -> list[Place]:
        return [P for P, _ in self.modulus]

    def divides_modulus(self, place: Place) -> bool:
        return any(P == place for P, _ in self.modulus)

    def s(self, ij) -> CycElem:
        """The element s_(i,j): a for (-1,-1) and (-1,1), b for (1,-1)."""
        if tuple(ij) == (1, -1):
            return self.b
        if tuple(ij) in ((-1, -1), (-1, 1)):
            return self.a
        raise PreconditionError(f"no s for class {ij}")

    def to_json(self) -> dict:
        from .expr import elem_to_json

        return {
            "ell": self.ell,
            "seed": self.seed,
            "a": elem_to_json(self.a),
            "b": elem_to_json(self.b),
            "p0": self.p0.to_json(),
            "p1": self.p1.to_json(),
            "modulus": [{"place": P.to_json(), "exp": k} for P, k in self.modulus],
        }

    @classmethod
    def from_json(cls, obj) -> Params:
        from .expr import elem_from_json

        ell = obj["ell"]
        a, b = elem_from_json(obj["a"]), elem_from_json(obj["b"])
        modulus = tuple((place_from_json(m["place"], ell), m["exp"]) for m in obj["modulus"])
        params = cls(ell, a, b, modulus, place_from_json(obj["p0"], ell),
                     place_from_json(obj["p1"], ell), obj.get("seed", 0))
        check_params(params)
        return params


def place_from_json(obj, ell: int) -> Place:
    if obj.get("kind") == "real":
        return real_place(ell)
    for P in primes_above(obj["p"], ell):
        if list(P.generator.coords) == list(obj["gen"]):
            return P
    raise PreconditionError(f"no place above {obj['p']} with generator {obj['gen']}")


def _modulus_for(a: CycElem, b: CycElem, ell: int) -> tuple[tuple[Place, int], ...]:
    places = {P for P in primes_above(ell, ell)}
    places.update(factor(a).places())
    places.update(factor(b).places())
    out = []
    for P in sorted(places, key=Place.sort_key):
        out.append((P, 2 * P.e + 1 if is_wild(P) else 1))
    if ell == 2:
        out.append((real_place(2), 1))
    return tuple(out)


def _vector(x: CycElem, ell: int) -> dict:
    return {P: k % ell for P, k in factor(x).factors if k % ell}


def _independent(va: dict, vb: dict, ell: int) -> bool:
    # no relation a^i b^j = l-th power with (i, j) != (0, 0), read off valuations
    for i in range(ell):
        for j in range(ell):
            if (i, j) == (0, 0):
                continue
            keys = set(va) | set(vb)
            if all((i * va.get(P, 0) + j * vb.get(P, 0)) % ell == 0 for P in keys):
                return False
    return True


def check_params(params: Params) -> None:
    """Raise PreconditionError unless the checkable conditions on (a, b) hold."""
    ell, a, b = params.ell, params.a, params.b
    if ell == 2 and (a.coords[0] <= 0 or b.coords[0] <= 0):
        raise PreconditionError("a and b must be positive for ell=2")
    if set(factor(a).places()) & set(factor(b).places()):
        raise PreconditionError("(a) and (b) are not coprime")
    if not _independent(_vector(a, ell), _vector(b, ell), ell):
        raise PreconditionError("a, b do not have independent nontrivial classes mod l-th powers")
    for x in (a, b):
        if not (x - 1).is_integral() or (x - 1) and any(
                valuation(x - 1, P) < 3 * valuation(CycElem.of(ell, ell), P)
                for P in primes_above(ell, ell)):
            raise PreconditionError(f"{x} is not in 1 + l^3 O_K")
    for P in [*factor(a).places(), *factor(b).places(), *primes_above(ell, ell)]:
        if not params.divides_modulus(P):
            raise PreconditionError(f"modulus misses {P.label}")


def _a_candidates(ell: int):
    step = ell ** 3
    for k in count(1):
        x = CycElem.of(1 + step * k, ell)
        if any(v == 1 for _, v in factor(x).factors):
            yield x


def fix_ab(ell: int = 3, seed: int = 0, search_bound: int = 10_000) -> Params:
    """Deterministic choice of (a, b) in 1 + l^3 Z, coprime and independent mod l-th powers.

    ``seed`` skips that many admissible values of a.
    """
    gen = _a_candidates(ell)
    for _ in range(seed):
        next(gen)
    a = next(gen)
    p0 = next(P for P, v in factor(a).factors if v == 1)
    va = _vector(a, ell)
    support_a = set(factor(a).places())
    step = ell ** 3
    start = int(a.coords[0]) // step + 1
    for k in range(start, start + search_bound):
        b = CycElem.of(1 + step * k, ell)
        fb = factor(b)
        if support_a & set(fb.places()):
            continue
        ones = [P for P, v in fb.factors if v == 1 and P != p0 and not is_wild(P)]
        if not ones or not _independent(va, _vector(b, ell), ell):
            continue
        params = Params(ell, a, b, _modulus_for(a, b, ell), p0, ones[0], seed)
        check_params(params)
        return params
    raise SearchExhausted("fix_ab", search_bound)


# Frobenius classes

def frobenius_exponents(place: Place, params: Params) -> tuple[int, int]:
    sa, sb = frobenius_pair(place, params.a, params.b)
    return sa.exponent, sb.exponent


def class_label(pair: tuple[int, int]) -> tuple[int, int]:
    return tuple(1 if e == 0 else -1 for e in pair)


def place_class(place: Place, params: Params) -> tuple[int, int]:
    return class_label(frobenius_exponents(place, params))


@dataclass(frozen=True)
class Classification:
    """P(x) split by Frobenius class; places dividing the modulus are listed apart."""

    primes: tuple[Place, ...]
    classes: dict = field(default_factory=dict)
    unclassifiable: tuple[Place, ...] = ()

    def of(self, ij) -> list[Place]:
        return list(self.classes.get(tuple(ij), ()))

    def to_json(self) -> dict:
        return {
            "P": [P.label for P in self.primes],
            "classes": {f"({i},{j})": [P.label for P in self.of((i, j))] for i, j in CLASSES},
            "unclassifiable": [P.label for P in self.unclassifiable],
        }


def lth_support(x: CycElem, ell: int) -> list[Place]:
    """P(x): places where v(x) is not divisible by l."""
    return [P for P, k in factor(x).factors if k % ell]


def classify(x, params: Params) -> Classification:
    x = CycElem.of(x, params.ell)
    if not x:
        raise PreconditionError("classify of zero")
    primes = lth_support(x, params.ell)
    classes = {ij: [] for ij in CLASSES}
    bad = []
    for P in primes:
        if params.divides_modulus(P):
            bad.append(P)
        else:
            classes[place_class(P, params)].append(P)
    return Classification(tuple(primes), {k: tuple(v) for k, v in classes.items()}, tuple(bad))


def psi(x: CycElem, params: Params, skip_modulus: bool = False) -> tuple[int, int]:
    """Artin image of (x) as exponent pair; requires (x) prime to the modulus."""
    ea = eb = 0
    for P, k in factor(x).factors:
        if params.divides_modulus(P):
            if skip_modulus:
                continue
            raise PreconditionError(f"({x}) is not prime to the modulus at {P.label}")
        sa, sb = frobenius_exponents(P, params)
        ea += k * sa
        eb += k * sb
    return ea % params.ell, eb % params.ell


# Valuation characterizations

@lru_cache(maxsize=4096)
def finite_delta(a: CycElem, b: CycElem) -> tuple[Place, ...]:
    return tuple(P for P in delta(a, b, ell=a.ell) if not P.is_real)


def _integral_on(x: CycElem, places) -> bool:
    return not x or all(valuation(x, P) >= 0 for P in places)


def in_T(x, a, b) -> bool:
    a, b = CycElem.of(a, _ell(a, b)), CycElem.of(b, _ell(a, b))
    return _integral_on(CycElem.of(x, a.ell), finite_delta(a, b))


def in_Tstar_Kl(x, a, b) -> bool:
    """x in K^{*l} T_{a,b}^*: valuations divisible by l on Delta."""
    ell = _ell(a, b)
    a, b, x = CycElem.of(a, ell), CycElem.of(b, ell), CycElem.of(x, ell)
    if not x:
        return False
    return all(valuation(x, P) % ell == 0 for P in finite_delta(a, b))


def in_I(x, a, b, c) -> bool:
    """x in I^c_{a,b}, by the valuation description of the set."""
    ell = _ell(a, b)
    a, b, c, x = (CycElem.of(v, ell) for v in (a, b, c, x))
    if not x or x == 1:
        return False
    pc = set(lth_support(c, ell))
    for P in finite_delta(a, b):
        v = valuation(x, P)
        if P in pc:
            if v <= 0 or v % ell == 0:
                return False
        elif v % ell or valuation(1 - x, P) % ell:
            return False
    return True


def j_places(a, b) -> list[Place]:
    ell = _ell(a, b)
    a, b = CycElem.of(a, ell), CycElem.of(b, ell)
    support = set(lth_support(a, ell)) | set(lth_support(b, ell))
    return [P for P in finite_delta(a, b) if P in support]


def in_J(x, a, b) -> bool:
    """J_{a,b}: positive valuation on Delta_{a,b} within P(a) u P(b)."""
    x = CycElem.of(x, _ell(a, b))
    return not x or all(valuation(x, P) > 0 for P in j_places(a, b))


def in_J_by_sums(x, a, b) -> bool:
    """J_{a,b} through its defining intersection (I^a + I^a) n (I^b + I^b)."""
    for c in (a, b):
        try:
            j_decompose(x, (a, b), c)
        except PreconditionError:
            return False
    return True


def _ell(*xs) -> int:
    for x in xs:
        if isinstance(x, CycElem):
            return x.ell
    raise PreconditionError("cannot infer ell; pass CycElem values")


def j_decompose(z, params, c):
    """Split z = y + (z - y) with both parts in I^c_{a,b}.

    ``params`` is a :class:`Params` or a pair (a, b).  The valuations of y
    are prescribed place by place and realized with crt_approx.
    """
    a, b = (params.a, params.b) if isinstance(params, Params) else params
    ell = _ell(a, b, c, z)
    a, b, c, z = (CycElem.of(v, ell) for v in (a, b, c, z))
    pc = set(lth_support(c, ell))
    inside = [P for P in finite_delta(a, b) if P in pc]
    outside = [P for P in finite_delta(a, b) if P not in pc]
    for P in inside:
        if z and valuation(z, P) <= 0:
            raise PreconditionError(f"z has valuation <= 0 at {P.label}")
    constraints = []
    for P in inside:
        gen = P.gen_elem()
        if not z:
            constraints.append((P, gen, 2))
            continue
        vz = valuation(z, P)
        q, r = divmod(vz, ell)
        if r == 0:
            t = 1
        elif r == 1:
            t = (q + 1) * ell + 1
        else:
            t = (q + 1) * ell - vz + 1
        if t == vz:
            # same valuation as z: pick y = u z with 1 - u a unit
            u = CycElem((0, 1), 3) if P.p == 2 else CycElem.of(-1, ell)
            constraints.append((P, u * z, t + 1))
        else:
            constraints.append((P, gen ** t, t + 1))
    for P in outside:
        m = 0 if not z else min(0, valuation(z, P))
        t = ell * ((m - 1) // ell)
        constraints.append((P, P.gen_elem() ** t, t + 1))
    y = crt_approx(constraints, ell) if constraints else CycElem.of(2, ell)
    step = _modulus_step(constraints, ell)
    for k in range(64):
        cand = y + step * k
        if in_I(cand, a, b, c) and in_I(z - cand, a, b, c):
            return cand, z - cand
    raise AssertionError("j_decompose failed to certify its own output")


def _modulus_step(constraints, ell: int) -> CycElem:
    """An element divisible enough at every constrained place to keep all congruences."""
    step = CycElem.of(1, ell)
    for P, t, k in constraints:
        step = step * P.gen_elem() ** max(k, k - valuation(t, P) + k, 1)
    return step


# R sets and the Phi / Psi families

def r_places_by_delta(ij, p, params: Params) -> tuple[Place, ...]:
    """The raw intersection of the two Delta sets defining R_p^{(i,j)}."""
    a, b = params.a, params.b
    p = CycElem.of(p, params.ell)
    pairs = {(-1, -1): (a, b), (-1, 1): (a, a * b), (1, -1): (a * b, b)}
    s1, s2 = pairs[tuple(ij)]
    d2 = set(finite_delta(s2, p))
    return tuple(P for P in finite_delta(s1, p) if P in d2)


def r_places(ij, p, params: Params) -> tuple[Place, ...]:
    """Places of the semilocal ring R_p^{(i,j)}, taken as P^{(i,j)}(p).

    For p in Phi_(i,j) this is the Delta intersection away from the
    modulus.  In general the Delta intersection is larger: for l = 3 a
    class (-1,-1) prime can have (ab/P) != 1, and primes of a or b enter
    by reciprocity.
    """
    p = CycElem.of(p, params.ell)
    if not p:
        raise PreconditionError("R_p needs p != 0")
    ij = tuple(ij)
    return tuple(P for P in lth_support(p, params.ell)
                 if not params.divides_modulus(P) and place_class(P, params) == ij)


def r11_places(p, q, params: Params) -> tuple[Place, ...]:
    a, b = params.a, params.b
    p, q = CycElem.of(p, params.ell), CycElem.of(q, params.ell)
    d2 = set(finite_delta(b * p, q))
    return tuple(P for P in finite_delta(a * p, q) if P in d2)


def in_semilocal(x: CycElem, places) -> bool:
    return _integral_on(x, places)


def is_semilocal_unit(x: CycElem, places) -> bool:
    return bool(x) and all(valuation(x, P) == 0 for P in places)


def in_coset_one_plus_J(w: CycElem, s: CycElem, places, ell: int) -> bool:
    """w in s K^{*l} (1 + J(R)) for the semilocal ring R with the given places."""
    if not w or not s:
        return False
    ratio = w / s
    if not places:
        return is_lth_power(ratio, ell, ell)
    for P in places:
        v = valuation(ratio, P)
        if v % ell:
            return False
        if is_wild(P):
            continue
        unit = ratio / P.gen_elem() ** v
        if not power_residue_symbol(unit, P).is_trivial:
            return False
    return True


def in_power_coset_units(x: CycElem, p: CycElem, r: int, places, ell: int) -> bool:
    """x in p^r K^{*l} R^*: valuations of x / p^r divisible by l on the places."""
    if not x:
        return False
    ratio = x / p ** r
    return all(valuation(ratio, P) % ell == 0 for P in places)


def in_Phi(x, ij, params: Params) -> bool:
    x = CycElem.of(x, params.ell)
    if not x:
        return False
    if any(params.divides_modulus(P) for P in factor(x).places()):
        return False
    if class_label(psi(x, params)) != tuple(ij):
        return False
    allowed = {(1, 1), tuple(ij)}
    return all(place_class(P, params) in allowed for P in lth_support(x, params.ell))


def in_PhiTilde(x, ij, params: Params) -> bool:
    """x in K^{*l} Phi_(i,j)."""
    x = CycElem.of(x, params.ell)
    if not x:
        return False
    fx = factor(x)
    if any(params.divides_modulus(P) and k % params.ell for P, k in fx.factors):
        return False
    if class_label(psi(x, params, skip_modulus=True)) != tuple(ij):
        return False
    allowed = {(1, 1), tuple(ij)}
    return all(place_class(P, params) in allowed for P in lth_support(x, params.ell))


def modulus_symbol_product(x, y, params: Params) -> Mu:
    acc = Mu(0, params.ell)
    for P in params.modulus_places:
        acc = acc * hilbert_symbol(x, y, P)
    return acc


def in_Psi(p, q, params: Params) -> bool:
    """(p, q) in Psi, with the coset condition taken at the places attached to q."""
    ell = params.ell
    p, q = CycElem.of(p, ell), CycElem.of(q, ell)
    if not p or not q:
        return False
    if not in_PhiTilde(p, (1, 1), params) or not in_PhiTilde(q, (-1, -1), params):
        return False
    if modulus_symbol_product(params.a * p, q, params).is_trivial:
        return False
    return in_coset_one_plus_J(p, params.a ** (ell - 1), r_places((-1, -1), q, params), ell)


# Generic set queries

SET_IDS = ("P", "P_ij", "T", "Tstar_Kl", "I", "J", "Phi", "PhiTilde", "Psi", "R_ij", "R11")


@dataclass(frozen=True)
class SetQuery:
    """Which set to test, with the parameters it needs."""

    set_id: str
    a: CycElem | None = None
    b: CycElem | None = None
    c: CycElem | None = None
    p: CycElem | None = None
    q: CycElem | None = None
    ij: tuple[int, int] | None = None
    place: Place | None = None

    def need(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise PreconditionError(f"query {self.set_id} is missing {', '.join(missing)}")


def member(query: SetQuery, x, params: Params | None = None) -> bool:
    """Decide x in the queried set.

    For P / P_ij the element is the one whose support is inspected and the
    query names the place; for Psi the element x plays the role of q.
    """
    sid = query.set_id
    if sid not in SET_IDS:
        raise PreconditionError(f"unknown set {sid!r}")
    a = query.a if query.a is not None else (params.a if params else None)
    b = query.b if query.b is not None else (params.b if params else None)
    if sid in ("P", "P_ij"):
        query.need("place")
        ell = query.place.ell
        x = CycElem.of(x, ell)
        inside = query.place in lth_support(x, ell)
        if sid == "P":
            return inside
        query.need("ij")
        if params is None:
            raise PreconditionError("P_ij needs params")
        return inside and place_class(query.place, params) == tuple(query.ij)
    if sid in ("T", "Tstar_Kl", "I", "J"):
        if a is None or b is None:
            raise PreconditionError(f"query {sid} needs a and b")
        if sid == "T":
            return in_T(x, a, b)
        if sid == "Tstar_Kl":
            return in_Tstar_Kl(x, a, b)
        if sid == "I":
            query.need("c")
            return in_I(x, a, b, query.c)
        return in_J(x, a, b)
    if params is None:
        raise PreconditionError(f"query {sid} needs params")
    x = CycElem.of(x, params.ell)
    if sid == "Phi":
        query.need("ij")
        return in_Phi(x, query.ij, params)
    if sid == "PhiTilde":
        query.need("ij")
        return in_PhiTilde(x, query.ij, params)
    if sid == "Psi":
        query.need("p")
        return in_Psi(query.p, x, params)
    if sid == "R_ij":
        query.need("p", "ij")
        return in_semilocal(x, r_places(query.ij, query.p, params))
    query.need("p", "q")
    return in_semilocal(x, r11_places(query.p, query.q, params))


# Prime searches

def _places_in_order(ell: int):
    p = 1
    while True:
        p = nextprime(p)
        yield from primes_above(p, ell)


def _aux_primes(params: Params, avoid=(), want=(1, 1), bound: int | None = None):
    bound = DEFAULT_SEARCH_BOUND if bound is None else bound
    for i, Q in enumerate(_places_in_order(params.ell)):
        if i >= bound:
            return
        if params.divides_modulus(Q) or Q in avoid:
            continue
        if place_class(Q, params) == tuple(want):
            yield Q


def find_aux_prime(params: Params, avoid=(), want=(1, 1), bound: int | None = None) -> Place:
    """First place prime to the modulus with Frobenius class ``want``."""
    for Q in _aux_primes(params, avoid, want, bound):
        return Q
    raise SearchExhausted("find_aux_prime", DEFAULT_SEARCH_BOUND if bound is None else bound)


def find_p(place: Place, ij, params: Params, search_bound: int | None = None) -> CycElem:
    """p in Phi_(i,j) with P^(i,j)(p) = {place}: gen(place) * gen(Q), Q of class (1,1)."""
    ij = tuple(ij)
    if ij == (1, 1):
        raise PreconditionError("find_p is for the classes other than (1,1)")
    if params.divides_modulus(place):
        raise PreconditionError(f"{place.label} divides the modulus")
    if place_class(place, params) != ij:
        raise PreconditionError(f"{place.label} is not in class {ij}")
    Q = find_aux_prime(params, avoid=(place,), bound=search_bound)
    p = place.gen_elem() * Q.gen_elem()
    assert in_Phi(p, ij, params)
    assert r_places(ij, p, params) == (place,)
    return p


def find_q(p0: Place, sigma, zeta_target: Mu, params: Params,
           search_bound: int | None = None) -> CycElem:
    """A prime element q prime to the modulus with Frobenius ``sigma`` and (q/p0) = zeta_target."""
    bound = DEFAULT_SEARCH_BOUND if search_bound is None else search_bound
    sigma = tuple(m.exponent if isinstance(m, Mu) else m % params.ell for m in sigma)
    for i, Q in enumerate(_places_in_order(params.ell)):
        if i >= bound:
            break
        if params.divides_modulus(Q) or Q == p0:
            continue
        if frobenius_exponents(Q, params) != sigma:
            continue
        for u in units(params.ell):
            q = CycElem.of(u, params.ell) * Q.gen_elem()
            if power_residue_symbol(q, p0) == zeta_target:
                return q
    raise SearchExhausted("find_q", bound)


def in_K_m1(x, params: Params) -> bool:
    """x in K_{m,1}: v_P(x - 1) >= m(P) at finite P | m, positive at a real P | m."""
    x = CycElem.of(x, params.ell)
    if not x:
        return False
    for P, k in params.modulus:
        if P.is_real:
            if x.coords[0] <= 0:
                return False
        elif x != 1 and valuation(x - 1, P) < k:
            return False
    return True
