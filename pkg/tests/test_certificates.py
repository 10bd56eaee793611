import json
import random
from dataclasses import replace

import pytest

from cycnorm.arith import CycElem, CycInt
from cycnorm.certificates import (
    DividesModulus, NonSplitClass, SplitClass, build_certificate, certificate_from_json,
    is_norm_squarefree, nonpower_witness, verify_certificate, verify_reason,
)
from cycnorm.dioph import _aux_primes, fix_ab
from cycnorm.errors import IsANorm, PreconditionError
from cycnorm.norms import is_norm, kummer_norm


def E(v, ell=3):
    return CycElem.of(v, ell)


@pytest.fixture(scope="module")
def p3():
    return fix_ab(3, 0)


@pytest.fixture(scope="module")
def p2():
    return fix_ab(2, 0)


def roundtrip(cert, ell):
    return certificate_from_json(json.loads(json.dumps(cert.to_json())), ell)


def test_three_minus_one(p2):
    x, y = E(3, 2), E(-1, 2)
    cert = build_certificate(x, y, p2)
    assert isinstance(cert, (DividesModulus, NonSplitClass))
    assert verify_certificate(x, y, cert, p2)
    assert roundtrip(cert, 2) == cert


def test_two_seven_clause_two():
    params = fix_ab(3, 1)
    assert not any(P.p == 7 for P in params.modulus_places)
    cert = build_certificate(E(2), E(7), params)
    assert isinstance(cert, NonSplitClass) and cert.r in (1, 2)
    assert verify_certificate(E(2), E(7), cert, params)
    assert roundtrip(cert, 3) == cert


def test_two_seven_divides_modulus(p3):
    cert = build_certificate(E(2), E(7), p3)
    assert isinstance(cert, DividesModulus)
    assert verify_certificate(E(2), E(7), cert, p3)


def test_norm_raises(p3):
    with pytest.raises(IsANorm):
        build_certificate(E(8), E(7), p3)


def test_k_zero_rejected():
    params = fix_ab(3, 1)
    cert = build_certificate(E(2), E(7), params)
    bad = replace(cert, k=0)
    ok, why = verify_reason(E(2), E(7), bad, params)
    assert not ok and "range" in why


@pytest.mark.parametrize("ell,seed", [(3, 0), (2, 0)])
def test_split_clause(ell, seed):
    params = fix_ab(ell, seed)
    rng = random.Random(ell)
    Q = next(iter(_aux_primes(params)))
    for _ in range(200):
        x = Q.gen_elem() * E(rng.randint(1, 9), ell)
        y = E(CycInt(tuple(rng.randint(-30, 30) for _ in range(ell - 1)), ell), ell)
        if y and Q in is_norm(x, y, ell, ell).obstructions:
            break
    else:
        pytest.fail("no pair obstructed at the auxiliary prime")
    cert = build_certificate(x, y, params, place=Q)
    assert isinstance(cert, SplitClass)
    assert verify_certificate(x, y, cert, params)
    assert roundtrip(cert, ell) == cert


def test_certificate_does_not_transfer_to_norms(p3):
    params = fix_ab(3, 1)
    cert = build_certificate(E(2), E(7), params)
    for t in ([1, 1, 0], [2, 0, 1], [1, -1, 1]):
        x = kummer_norm([E(c) for c in t], E(7))
        assert not verify_certificate(x, E(7), cert, params)


def test_nonpower_witness(p3):
    y = nonpower_witness(E(2), p3)
    assert not is_norm(E(2), y).is_norm
    assert verify_certificate(E(2), y, build_certificate(E(2), y, p3), p3)
    assert not is_norm(E(2), E(7)).is_norm
    with pytest.raises(PreconditionError):
        nonpower_witness(E(8), p3)


def test_powers_have_no_witness():
    rng = random.Random(4)
    for _ in range(50):
        x = E(CycInt((rng.randint(-20, 20), rng.randint(-20, 20)), 3))
        y = E(CycInt((rng.randint(-50, 50), rng.randint(-50, 50)), 3))
        if x and y:
            assert is_norm(x ** 3, y).is_norm


def test_squarefree():
    v = is_norm_squarefree(E(2), E(7), 6)
    assert not v.is_norm and dict(v.per_prime)[2].is_norm
    assert is_norm_squarefree(E(8), E(7), 6).is_norm
    assert is_norm_squarefree(E(5), E(7), 1).is_norm
    assert is_norm_squarefree(E(5) ** 6, E(7), 6).is_norm
    with pytest.raises(PreconditionError):
        is_norm_squarefree(E(5), E(7), 4)
    with pytest.raises(PreconditionError):
        is_norm_squarefree(E(5), E(7), 10)


def test_squarefree_two_only():
    rng = random.Random(6)
    for _ in range(100):
        t = E(CycInt((rng.randint(-9, 9), rng.randint(-9, 9)), 3))
        y = E(CycInt((rng.randint(-30, 30), rng.randint(-30, 30)), 3))
        if not t or not y:
            continue
        x = t ** 3
        two = is_norm(x, y, 2, 3)
        if not two.is_norm:
            v = is_norm_squarefree(x, y, 6)
            assert not v.is_norm and v.obstructions == two.obstructions
            return
    pytest.fail("no pair with only a quadratic obstruction")
