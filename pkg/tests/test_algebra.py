import random

from hypothesis import given, strategies as st

from cycnorm.algebra import (
    AlgebraElem, AlgebraParams, check_T_inclusion, residue_reps, reduced_norm, reduced_trace,
    sample_norm_one_elements, sample_norm_one_traces,
)
from cycnorm.arith import CycElem, CycInt
from cycnorm.norms import delta, kummer_norm
from cycnorm.symbols import hilbert_symbol

W = CycElem((0, 1), 3)


def E(v, ell=3):
    return CycElem.of(v, ell)


def P3(a=2, b=7):
    return AlgebraParams.of(a, b, 3)


def mono(params, i, j, c=1):
    return AlgebraElem.monomial(params, i, j, c)


def rand_elem(rng, params, mag=3):
    ell = params.ell
    return AlgebraElem.from_entries(params, [
        CycElem(tuple(rng.randint(-mag, mag) for _ in range(ell - 1)), ell) for _ in range(ell * ell)
    ])


def test_relations():
    for ell, params in ((3, P3()), (2, AlgebraParams.of(-1, -1, 2))):
        S, T = mono(params, 1, 0), mono(params, 0, 1)
        assert S * T == (T * S).scale(params.omega)
        assert T ** ell == AlgebraElem.scalar(params, params.a)
        assert S ** ell == AlgebraElem.scalar(params, params.b)


def test_square_of_sum():
    params = P3()
    S, T = mono(params, 1, 0), mono(params, 0, 1)
    lhs = (S + T) * (S + T)
    rhs = S * S + (T * S).scale(1 + W) + T * T
    assert lhs == rhs
    # TS = w^-1 ST, so the S T coefficient is (1 + w) w^-1
    assert lhs.coords[1][1] == (1 + W) * W.inverse()


def test_associative():
    rng = random.Random(1)
    params = P3(3, 5)
    for _ in range(10):
        u, v, x = (rand_elem(rng, params) for _ in range(3))
        assert (u * v) * x == u * (v * x)


def test_nrd_trd_examples():
    params = P3()
    one = AlgebraElem.scalar(params, 1)
    assert reduced_norm(one) == 1 and reduced_trace(one) == 3
    T = mono(params, 0, 1)
    assert reduced_norm(T) == params.a and reduced_trace(T) == 0
    c = E(CycInt((2, 5), 3))
    assert reduced_norm(AlgebraElem.scalar(params, c)) == c ** 3
    assert reduced_trace(AlgebraElem.scalar(params, c)) == 3 * c


@given(st.integers(0, 10_000))
def test_nrd_multiplicative(seed):
    rng = random.Random(seed)
    for params in (P3(2, 7), AlgebraParams.of(3, -5, 2)):
        u, v = rand_elem(rng, params), rand_elem(rng, params)
        assert reduced_norm(u * v) == reduced_norm(u) * reduced_norm(v)
        assert reduced_trace(u + v.scale(3)) == reduced_trace(u) + 3 * reduced_trace(v)


def test_trd_on_KT_is_field_trace():
    rng = random.Random(5)
    params = P3(2, 7)
    for _ in range(20):
        c = [E(CycInt((rng.randint(-4, 4), rng.randint(-4, 4)), 3)) for _ in range(3)]
        u = AlgebraElem.from_entries(params, c + [0] * 6)
        # field trace of c0 + c1 s + c2 s^2 over K(a^(1/3)) is 3 c0
        assert reduced_trace(u) == 3 * c[0]
        assert reduced_norm(u) == kummer_norm(c, params.a)


def test_norm_one_samples():
    params = P3(2, 7)
    us = sample_norm_one_elements(params, 6)
    assert reduced_trace(us[0]) == 3
    S = mono(params, 1, 0)
    Sinv = mono(params, 2, 0, E(1) / params.b)
    assert (S * Sinv) == AlgebraElem.scalar(params, 1)
    traces = set()
    for u in us:
        assert reduced_norm(u) == 1
        conj = S * u * Sinv
        assert reduced_norm(conj) == 1
        traces.add(reduced_trace(conj))
    assert len(sample_norm_one_traces(params, 10)) == 10


def test_hilbert90_quotient():
    from cycnorm.algebra import _commutative_quotient

    params = P3(2, 7)
    c = (E(1), E(1), E(0))
    u = _commutative_quotient(params, c, use_s=False)
    one_plus_T = AlgebraElem.from_entries(params, [1, 1, 0, 0, 0, 0, 0, 0, 0])
    sigma = AlgebraElem.from_entries(params, [1, W, 0, 0, 0, 0, 0, 0, 0])
    assert u * sigma == one_plus_T
    assert reduced_norm(u) == 1


def test_T_inclusion_examples():
    reps = residue_reps(3)
    assert check_T_inclusion(E(1), E(7), [E(3)], reps) == (True, None)
    samples = sample_norm_one_traces(P3(2, 7), 10)
    assert delta(E(2), E(7))
    ok, witness = check_T_inclusion(E(2), E(7), samples, reps, limit=100)
    assert ok and witness is None
    q = AlgebraParams.of(-1, -1, 2)
    assert [P.label for P in delta(E(-1, 2), E(-1, 2))] == ["2", "real"]
    ok, _ = check_T_inclusion(E(-1, 2), E(-1, 2), sample_norm_one_traces(q, 10), residue_reps(2), limit=200)
    assert ok


def test_delta_is_nonsplit_set():
    rng = random.Random(9)
    for _ in range(20):
        a, b = (E(CycInt((rng.randint(-40, 40), rng.randint(-40, 40)), 3)) for _ in range(2))
        if not a or not b:
            continue
        for P in delta(a, b):
            assert not hilbert_symbol(a, b, P).is_trivial
