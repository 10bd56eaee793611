import random

import pytest
from hypothesis import given, strategies as st
from sympy import primerange

from cycnorm.arith import CycElem, CycInt, primes_above, valuation
from cycnorm.errors import PreconditionError
from cycnorm.places import (
    Mu, frobenius_class, frobenius_pair, power_residue_symbol, reduce, residue_field,
)
from conftest import elems

PI7 = primes_above(7, 3)[0]


def E(v, ell=3):
    return CycElem.of(v, ell)


def brute_is_power(x, place, n):
    """Exhaustive n-th power test in the residue field."""
    F = residue_field(place)
    target = reduce(x, place).value
    return any(F.pow(u, n) == target for u in F.elements())


def test_primes_above_types():
    assert [P.generator.norm() for P in primes_above(7, 3)] == [7, 7]
    (two,) = primes_above(2, 3)
    assert (two.f, two.q, two.e) == (2, 4, 1)
    (lam,) = primes_above(3, 3)
    assert lam.e == 2 and lam.generator.norm() == 3
    assert lam.gen_elem() in (E(CycInt((1, -1), 3)) * E(CycInt(u, 3)) for u in
                              ((1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)))


@pytest.mark.parametrize("p", list(primerange(2, 60)))
def test_splitting_consistency(p):
    places = primes_above(p, 3)
    assert sum(P.e * P.f for P in places) == 2
    for P in places:
        assert P.generator.norm() == p ** P.f


def test_valuation_examples():
    assert valuation(E(1), PI7) == 0


def test_power_residue_examples():
    F = residue_field(PI7)
    assert F.zeta_image == 4
    assert pow(2, 2, 7) == 4  # 2^((7-1)/3) = zeta mod pi
    assert power_residue_symbol(E(2), PI7) == Mu(1, 3)
    assert power_residue_symbol(E(4), PI7) == Mu(2, 3)
    assert not brute_is_power(E(2), PI7, 3)
    for x in (2, 3, 5, 10):
        assert power_residue_symbol(E(x) ** 3, PI7).is_trivial


def test_power_residue_errors():
    with pytest.raises(PreconditionError):
        power_residue_symbol(E(7), PI7)
    with pytest.raises(PreconditionError):
        power_residue_symbol(E(2), primes_above(3, 3)[0])


def _tame_places(ell, bound):
    out = []
    for p in primerange(2, bound):
        for P in primes_above(p, ell):
            if P.p != ell and (P.q - 1) % ell == 0:
                out.append(P)
    return out


@pytest.mark.parametrize("ell", [2, 3])
def test_residue_matches_exhaustive_search(ell):
    rng = random.Random(ell)
    for P in _tame_places(ell, 120):
        for _ in range(4):
            x = E(CycInt(tuple(rng.randint(-300, 300) for _ in range(ell - 1)), ell), ell)
            if not x or valuation(x, P):
                continue
            assert power_residue_symbol(x, P).is_trivial == brute_is_power(x, P, ell)


@given(elems(3, 200), elems(3, 200), st.sampled_from(_tame_places(3, 80)))
def test_power_residue_multiplicative(a, b, P):
    if valuation(a, P) or valuation(b, P):
        return
    assert power_residue_symbol(a * b, P) == power_residue_symbol(a, P) * power_residue_symbol(b, P)


def test_frobenius_classes_28_55():
    a, b = E(28), E(55)
    seen = {}
    for p in primerange(13, 400):
        if p % 3 != 1:
            continue
        for P in primes_above(p, 3):
            pair = frobenius_pair(P, a, b)
            # independent oracle: cube test in the residue field
            brute = tuple(1 if brute_is_power(v, P, 3) else -1 for v in (a, b))
            assert frobenius_class(pair) == brute
            seen.setdefault(brute, P)
    assert {(1, 1), (-1, -1), (1, -1), (-1, 1)} <= set(seen)


def test_frobenius_trivial_class():
    assert frobenius_class((Mu(0, 3), Mu(0, 3))) == (1, 1)
    with pytest.raises(PreconditionError):
        frobenius_pair(PI7, E(28), E(55))
