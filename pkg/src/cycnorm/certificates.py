"""Certificates that x is not a norm from K(y^(1/l)), following the three
clauses of the diophantine characterization of non-norms."""
from __future__ import annotations

from dataclasses import dataclass

from .arith import CycElem, Place, crt_approx, factor, real_place, valuation
from .dioph import (
    NONTRIVIAL,
    Params,
    find_p,
    find_q,
    in_coset_one_plus_J,
    in_Phi,
    in_power_coset_units,
    in_Psi,
    is_semilocal_unit,
    lth_support,
    place_class,
    place_from_json,
    r11_places,
    r_places,
)
from .errors import IsANorm, PreconditionError
from .expr import elem_from_json, elem_to_json
from .norms import NormVerdict, is_lth_power, is_norm
from .places import Mu, is_wild, power_residue_symbol
from .symbols import (
    SymbolConstraint,
    _class_reps,
    _degree,
    _tame_nonresidue,
    hilbert_symbol,
    local_class,
    local_class_dim,
    local_class_reps,
    prescribe_symbols,
    wild_place,
)


@dataclass(frozen=True)
class DividesModulus:
    """The obstruction sits at a place dividing the modulus."""

    place: Place

    def to_json(self) -> dict:
        return {"variant": "divides_modulus", "place": self.place.to_json()}


@dataclass(frozen=True)
class NonSplitClass:
    """Clause for an obstruction of Frobenius class (i,j) != (1,1).

    ``swapped`` selects the branch where y (rather than x) carries p^r.
    """

    ij: tuple[int, int]
    p: CycElem
    r: int
    c: int
    d: int
    k: int
    swapped: bool = False

    def to_json(self) -> dict:
        return {"variant": "nonsplit", "ij": list(self.ij), "p": elem_to_json(self.p),
                "r": self.r, "c": self.c, "d": self.d, "k": self.k, "swapped": self.swapped}


@dataclass(frozen=True)
class SplitClass:
    """Clause for an obstruction of class (1,1), via a pair (p, q) in Psi."""

    p: CycElem
    q: CycElem
    r: int
    c: int
    d: int
    k: int
    swapped: bool = False

    def to_json(self) -> dict:
        return {"variant": "split", "p": elem_to_json(self.p), "q": elem_to_json(self.q),
                "r": self.r, "c": self.c, "d": self.d, "k": self.k, "swapped": self.swapped}


Certificate = DividesModulus | NonSplitClass | SplitClass


def certificate_from_json(obj, ell: int) -> Certificate:
    kind = obj["variant"]
    if kind == "divides_modulus":
        return DividesModulus(place_from_json(obj["place"], ell))
    common = {k: int(obj[k]) for k in ("r", "c", "d", "k")}
    common["swapped"] = bool(obj.get("swapped", False))
    if kind == "nonsplit":
        return NonSplitClass(tuple(obj["ij"]), elem_from_json(obj["p"]), **common)
    if kind == "split":
        return SplitClass(elem_from_json(obj["p"]), elem_from_json(obj["q"]), **common)
    raise PreconditionError(f"unknown certificate variant {kind!r}")


# Verification

def _combo(x: CycElem, y: CycElem, c: int, d: int, swapped: bool, ell: int) -> CycElem:
    # for l = 2, (x, x) need not vanish but (x, -x) does, so the sign moves in
    if ell == 2:
        if swapped:
            return x ** c * (-y) ** d
        return (-x) ** c * y ** d
    return x ** c * y ** d


def _ranges_ok(cert, ell: int) -> bool:
    lo_c, lo_d = (1, 0) if cert.swapped else (0, 1)
    return (1 <= cert.r <= ell - 1 and 1 <= cert.k <= ell - 1
            and lo_c <= cert.c <= ell - 1 and lo_d <= cert.d <= ell - 1)


def _clause_holds(x, y, p, s, places, cert, ell) -> bool:
    carrier = y if cert.swapped else x
    if not in_power_coset_units(carrier, p, cert.r, places, ell):
        return False
    w = _combo(x, y, cert.c, cert.d, cert.swapped, ell)
    return in_coset_one_plus_J(w, s ** cert.k, places, ell)


def verify_reason(x, y, cert: Certificate, params: Params) -> tuple[bool, str]:
    """Check a certificate using only its stated membership conditions."""
    ell = params.ell
    x, y = CycElem.of(x, ell), CycElem.of(y, ell)
    if not x or not y:
        return False, "x and y must be nonzero"
    if isinstance(cert, DividesModulus):
        if not params.divides_modulus(cert.place):
            return False, f"{cert.place.label} does not divide the modulus"
        if hilbert_symbol(x, y, cert.place).is_trivial:
            return False, f"(x, y) is trivial at {cert.place.label}"
        return True, "ok"
    if not _ranges_ok(cert, ell):
        return False, "exponent out of range"
    if isinstance(cert, NonSplitClass):
        ij = tuple(cert.ij)
        if ij not in NONTRIVIAL:
            return False, f"class {ij} is not a non-split class"
        if not in_Phi(cert.p, ij, params):
            return False, "p is not in Phi"
        places = r_places(ij, cert.p, params)
        if not _clause_holds(x, y, cert.p, params.s(ij), places, cert, ell):
            return False, "coset conditions fail"
        return True, "ok"
    if isinstance(cert, SplitClass):
        if not in_Psi(cert.p, cert.q, params):
            return False, "(p, q) is not in Psi"
        places = r11_places(cert.p, cert.q, params)
        if not is_semilocal_unit(cert.q, places):
            return False, "q is not a unit of R"
        if not _clause_holds(x, y, cert.p, cert.q, places, cert, ell):
            return False, "coset conditions fail"
        return True, "ok"
    return False, f"unknown certificate {type(cert).__name__}"


def verify_certificate(x, y, cert: Certificate, params: Params) -> bool:
    return verify_reason(x, y, cert, params)[0]


# Construction

def _branch(x, y, place: Place, vp: int, ell: int):
    """(swapped, r, c, d) making x^c y^d a unit at ``place``; vp = v(p) there."""
    vx, vy = valuation(x, place) % ell, valuation(y, place) % ell
    inv = pow(vp, -1, ell)
    if vx:
        return False, vx * inv % ell, vy, ell - vx
    if not vy:
        raise PreconditionError(f"x and y are both l-th power valuations at {place.label}")
    return True, vy * inv % ell, ell - vy, vx


def _k_for(w: CycElem, s: CycElem, place: Place, ell: int) -> int:
    # (w / place) = (s / place)^k on unit parts
    uw = w / place.gen_elem() ** valuation(w, place)
    us = s / place.gen_elem() ** valuation(s, place)
    tw = power_residue_symbol(uw, place).exponent
    ts = power_residue_symbol(us, place).exponent
    k = tw * pow(ts, -1, ell) % ell
    if not k:
        raise AssertionError(f"symbol at {place.label} is trivial after all")
    return k


def _nonsplit(x, y, place, params, search_bound):
    ell = params.ell
    ij = place_class(place, params)
    p = find_p(place, ij, params, search_bound)
    swapped, r, c, d = _branch(x, y, place, valuation(p, place), ell)
    k = _k_for(_combo(x, y, c, d, swapped, ell), params.s(ij), place, ell)
    return NonSplitClass(ij, p, r, c, d, k, swapped)


def _modulus_generators(params: Params) -> list[tuple[Place, CycElem]]:
    """Generators of K_P^* / K_P^{*l} for each place P of the modulus."""
    ell = params.ell
    out = []
    for P in params.modulus_places:
        reps, vecs = _class_reps(P, ell)
        for axis in range(local_class_dim(P, ell)):
            unit = tuple(1 if i == axis else 0 for i in range(len(vecs[0])))
            out.append((P, reps[vecs.index(unit)]))
    return out


def _adjust(e: CycElem, P: Place, anchors, params: Params) -> CycElem:
    """A global element in the local class of e at P and = 1 modulo the anchor places."""
    ell = params.ell
    if P.is_real:
        # choose -1 + (anchors) so the sign is negative and anchors see 1
        mod = CycElem.of(1, ell)
        for Q in anchors:
            mod = mod * Q.gen_elem()
        m = abs(mod.coords[0])
        return CycElem.of(1 - 2 * m, ell) if e.coords[0] < 0 else CycElem.of(1, ell)
    prec = valuation(e, P) + (2 * P.e + 1 if is_wild(P) else 1)
    out = crt_approx([(P, e, prec)] + [(Q, CycElem.of(1, ell), 1) for Q in anchors], ell)
    assert local_class(out, P, ell) == local_class(e, P, ell)
    return out


def _split(x, y, place, params, search_bound):
    ell = params.ell
    zeta = Mu(1, ell)
    # q has Frobenius (zeta^-1, zeta^-1) so that a p gets trivial symbol at (q)
    q = find_q(place, (zeta.inverse(), zeta.inverse()), zeta, params, search_bound)
    Q = factor(q).places()[0]
    anchors = (place, Q)
    E = [_adjust(e, P, anchors, params) for P, e in _modulus_generators(params)]
    e0 = crt_approx([(place, CycElem.of(1, ell), 1), (Q, _tame_nonresidue(Q, ell), 1)], ell)
    constraints = [SymbolConstraint(e, P, Mu(0, ell)) for e in E for P in anchors]
    constraints += [SymbolConstraint(e0, P, Mu(0, ell)) for P in anchors]
    constraints += [SymbolConstraint(params.a, P, Mu(0, ell)) for P in anchors]
    constraints += [SymbolConstraint(params.b, P, Mu(0, ell)) for P in anchors]
    constraints += [SymbolConstraint(q, place, zeta), SymbolConstraint(q, Q, zeta.inverse())]
    modulus = [P for P in params.modulus_places] + list(anchors)
    p = prescribe_symbols(constraints, modulus, ell, ell, search_bound)
    # strip l-th powers of modulus primes so that (p) is prime to the modulus
    for P in params.modulus_places:
        if not P.is_real:
            p = p / P.gen_elem() ** valuation(p, P)
    swapped, r, c, d = _branch(x, y, place, valuation(p, place), ell)
    k = _k_for(_combo(x, y, c, d, swapped, ell), q, place, ell)
    return SplitClass(p, q, r, c, d, k, swapped)


def build_certificate(x, y, params: Params, search_bound: int | None = None,
                      place: Place | None = None) -> Certificate:
    """Build a certificate that x is not a norm from K(y^(1/l)); raise IsANorm if it is.

    The first obstruction is used unless ``place`` picks another one.
    """
    ell = params.ell
    x, y = CycElem.of(x, ell), CycElem.of(y, ell)
    verdict = is_norm(x, y, ell, ell)
    if verdict.is_norm:
        raise IsANorm(f"{x} is a norm from K({y}^(1/{ell}))")
    if place is None:
        place = verdict.obstructions[0]
    elif place not in verdict.obstructions:
        raise PreconditionError(f"(x, y) is trivial at {place.label}")
    if params.divides_modulus(place):
        cert = DividesModulus(place)
    elif place_class(place, params) != (1, 1):
        cert = _nonsplit(x, y, place, params, search_bound)
    else:
        cert = _split(x, y, place, params, search_bound)
    ok, why = verify_reason(x, y, cert, params)
    assert ok, f"built certificate does not verify: {why}"
    return cert


# Witnesses and composite degrees

def _candidate_places(x: CycElem, ell: int):
    seen = set()
    head = list(lth_support(x, ell)) + [wild_place(ell)]
    if ell == 2:
        head.append(real_place(2))
    for P in head:
        if P not in seen:
            seen.add(P)
            yield P
    from .dioph import _places_in_order

    for P in _places_in_order(ell):
        if P not in seen:
            seen.add(P)
            yield P


def nonpower_witness(x, params: Params, search_bound: int = 10_000) -> CycElem:
    """Some y with x not a norm from K(y^(1/l)), for x not an l-th power."""
    ell = params.ell
    x = CycElem.of(x, ell)
    if not x:
        raise PreconditionError("zero has no witness")
    if is_lth_power(x, ell, ell):
        raise PreconditionError(f"{x} is an l-th power")
    for i, P in enumerate(_candidate_places(x, ell)):
        if i >= search_bound:
            break
        if not any(local_class(x, P, ell)):
            continue
        for y in local_class_reps(P, ell).reps:
            if not hilbert_symbol(x, y, P).is_trivial and not is_lth_power(y, ell, ell):
                assert not is_norm(x, y, ell, ell).is_norm
                return y
    raise AssertionError(f"no witness found for {x}")


def is_norm_squarefree(x, y, n: int, ell: int = 3) -> NormVerdict:
    """Norm test for square-free n, reduced to its prime factors."""
    from sympy import factorint

    if n < 1:
        raise PreconditionError("n must be positive")
    fac = factorint(n)
    if any(k > 1 for k in fac.values()):
        raise PreconditionError(f"{n} is not square-free")
    per_prime = []
    for p in sorted(fac):
        _degree(ell, p)
        per_prime.append((p, is_norm(x, y, p, ell)))
    obstructions = tuple(P for _, v in per_prime for P in v.obstructions)
    ok = all(v.is_norm for _, v in per_prime)
    degenerate = bool(per_prime) and all(v.degenerate for _, v in per_prime)
    return NormVerdict(ok, obstructions, degenerate, tuple(per_prime))
