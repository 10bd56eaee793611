import json
import random

import pytest
from hypothesis import given, strategies as st

from cycnorm.arith import CycElem, CycInt, factor, primes_above, valuation
from cycnorm.errors import PreconditionError
from cycnorm.norms import delta, is_lth_power
from cycnorm.places import Mu, frobenius_class, frobenius_pair, power_residue_symbol
from cycnorm.dioph import (
    NONTRIVIAL, Params, SetQuery, check_params, classify, find_aux_prime, find_p, find_q,
    fix_ab, in_I, in_J, in_J_by_sums, in_K_m1, in_PhiTilde, j_decompose, j_places, member,
    place_class, r_places, r_places_by_delta,
)
from conftest import elems

PI7, PI7B = primes_above(7, 3)


def E(v, ell=3):
    return CycElem.of(v, ell)


@pytest.fixture(scope="module")
def params():
    return fix_ab(3, 0)


def _scan(params, ij, skip=()):
    for p in (13, 19, 31, 37, 43, 61, 67, 73, 79, 97, 103, 109, 127, 139, 151, 157, 163):
        for P in primes_above(p, 3):
            if P not in skip and place_class(P, params) == ij:
                return P
    raise AssertionError(f"no place of class {ij}")


def test_fix_ab_28_55(params):
    a, b = params.a, params.b
    assert (a, b) == (E(28), E(55))
    assert a - 1 == 27 and b - 1 == 2 * 27
    assert valuation(a, PI7) == 1 and valuation(b, primes_above(5, 3)[0]) == 1
    assert not set(factor(a).places()) & set(factor(b).places())
    assert not is_lth_power(a) and not is_lth_power(b) and not is_lth_power(a * b)
    labels = {P.label for P in params.modulus_places}
    assert labels == {"2", "3", "5", "7,0", "7,1", "11"}
    check_params(params)


def test_fix_ab_other_seeds():
    for ell, seed in ((3, 1), (3, 2), (2, 0), (2, 1)):
        p = fix_ab(ell, seed)
        check_params(p)
        assert Params.from_json(json.loads(json.dumps(p.to_json()))) == p


def test_classify_examples(params):
    c = classify(E(CycInt((0, 1), 3)) * E(13) ** 3, params)
    assert not c.primes and not any(c.of(ij) for ij in NONTRIVIAL)
    P = _scan(params, (-1, -1))
    assert frobenius_class(frobenius_pair(P, params.a, params.b)) == (-1, -1)
    assert classify(P.gen_elem(), params).of((-1, -1)) == [P]
    Q = _scan(params, (-1, -1), skip=(P,))
    c = classify(P.gen_elem() * Q.gen_elem() ** 3, params)
    assert c.primes == (P,) and c.of((-1, -1)) == [P]


def test_classify_reports_modulus_places(params):
    c = classify(E(7) * E(13), params)
    assert set(c.unclassifiable) == {PI7, PI7B}


def test_T_membership():
    q = SetQuery("T", a=E(4), b=E(4))
    assert not delta(E(4), E(4)) and member(q, E(1) / E(7))
    assert not member(SetQuery("T", a=E(2), b=E(7)), E(1) / E(7))
    assert member(SetQuery("T", a=E(2), b=E(7)), E(7) / E(5))


def test_incomplete_query():
    with pytest.raises(PreconditionError):
        member(SetQuery("I", a=E(2), b=E(7)), E(3))
    with pytest.raises(PreconditionError):
        member(SetQuery("nope"), E(3))


def test_j_decompose_empty_case():
    a, b, c = E(2), E(7), E(2)
    assert not set(delta(a, b)) & {primes_above(2, 3)[0]}
    z = E(CycInt((5, 3), 3))
    y, rest = j_decompose(z, (a, b), c)
    assert y + rest == z and in_I(y, a, b, c) and in_I(rest, a, b, c)
    for P in delta(a, b):
        assert valuation(y, P) % 3 == 0


def test_j_decompose_recipe_valuations():
    a, b, c = E(2), E(7), E(7)
    z = PI7.gen_elem() * PI7B.gen_elem() ** 2 * E(5)
    y, rest = j_decompose(z, (a, b), c)
    assert y + rest == z and in_I(y, a, b, c) and in_I(rest, a, b, c)
    # r = 1: v(y) = (0 + 1) * 3 + 1 and v(z - y) = v(z)
    assert valuation(y, PI7) == 4 and valuation(rest, PI7) == 1
    # r = 2: v(y) = 3 * (0 + 1) - 2 + 1 = 2
    assert valuation(y, PI7B) == 2
    with pytest.raises(PreconditionError):
        j_decompose(E(5), (a, b), c)


@given(elems(3, 40), st.integers(0, 3), st.integers(0, 3))
def test_J_routes_agree(z, i, j):
    a, b = E(2), E(7)
    z = z * PI7.gen_elem() ** i * PI7B.gen_elem() ** j
    assert in_J(z, a, b) == in_J_by_sums(z, a, b)
    if i and j:
        assert in_J(z, a, b)
    assert set(j_places(a, b)) == {PI7, PI7B}


def test_find_p(params):
    for ij in NONTRIVIAL:
        P = _scan(params, ij)
        p = find_p(P, ij, params)
        Q = find_aux_prime(params, avoid=(P,))
        assert p == P.gen_elem() * Q.gen_elem()
        assert member(SetQuery("Phi", ij=ij), p, params)
        assert in_PhiTilde(p, ij, params)
        cl = classify(p, params)
        for other in NONTRIVIAL:
            assert cl.of(other) == ([P] if other == ij else [])
        assert r_places(ij, p, params) == (P,)


def test_find_q(params):
    P0 = params.p0
    q = find_q(P0, (Mu(0, 3), Mu(0, 3)), Mu(0, 3), params)
    assert len(factor(q).factors) == 1 and factor(q).factors[0][1] == 1
    assert power_residue_symbol(q, P0).is_trivial
    P = _scan(params, (1, 1))
    q = find_q(P, (2, 2), Mu(1, 3), params)
    assert power_residue_symbol(q, P) == Mu(1, 3)
    (Q, k), = factor(q).factors
    assert k == 1 and frobenius_pair(Q, params.a, params.b) == (Mu(2, 3), Mu(2, 3))


def test_first_identity_holds_on_generated_p(params):
    rng = random.Random(2)
    pool = [P for p in (13, 19, 23, 29, 31, 37, 41, 43, 47) for P in primes_above(p, 3)]
    for _ in range(40):
        p = E(1)
        for P in rng.sample(pool, 2):
            p = p * P.gen_elem() ** rng.randint(1, 4)
        assert set(r_places_by_delta((-1, -1), p, params)) == set(classify(p, params).of((-1, -1)))


def test_second_identity_counterexample(params):
    p = E(CycInt((-117809, 97020), 3))
    assert in_K_m1(p, params)
    bad = primes_above(13, 3)[1]
    assert bad in r_places_by_delta((1, -1), p, params)
    assert bad not in classify(p, params).of((1, -1))


def test_K_m1(params):
    assert in_K_m1(E(1), params)
    assert not in_K_m1(E(2), params)
