import random

import pytest
from hypothesis import given, strategies as st

from cycnorm.arith import CycElem, CycInt, primes_above, real_place
from cycnorm.errors import PreconditionError
from cycnorm.norms import (
    delta, is_lth_power, is_norm, kummer_norm, lth_root, norm_form_coeffs,
    norm_form_represents, norm_solve,
)
from cycnorm.symbols import hilbert_symbol
from cycnorm.arith import units
from conftest import elems, fractions_

PI7, PI7B = primes_above(7, 3)


def E(v, ell=3):
    return CycElem.of(v, ell)


def _mul_mod(t, u, y):
    """Product in K[s]/(s^l - y) on coefficient vectors."""
    n = len(t)
    out = [E(0, y.ell)] * n
    for i, a in enumerate(t):
        for j, b in enumerate(u):
            k, c = i + j, a * b
            if k >= n:
                k, c = k - n, c * y
            out[k] = out[k] + c
    return out


@given(st.sampled_from((2, 3)).flatmap(lambda ell: st.tuples(fractions_(ell), elems(ell))))
def test_powers_are_norms(xy):
    x, y = xy
    assert is_norm(x ** x.ell, y).is_norm
    assert not delta(x ** x.ell, y)


def test_three_minus_one():
    v = is_norm(E(3, 2), E(-1, 2))
    assert not v.is_norm and [P.label for P in v.obstructions] == ["2", "3"]
    # oracle: a^2 + b^2 = 3c^2 forces a, b, c all even mod 4, so no primitive solution
    sols = [(a, b, c) for a in range(4) for b in range(4) for c in range(4)
            if (a * a + b * b - 3 * c * c) % 4 == 0]
    assert all(a % 2 == b % 2 == c % 2 == 0 for a, b, c in sols)
    assert norm_solve(E(3, 2), E(-1, 2), 50) is None


def test_two_seven():
    v = is_norm(E(2), E(7))
    assert not v.is_norm and PI7 in v.obstructions
    assert hilbert_symbol(E(2), E(7), PI7).exponent == 1
    cubes_mod_7 = {i ** 3 % 7 for i in range(7)}
    assert 2 not in cubes_mod_7


def test_delta_examples():
    assert delta(E(5), E(1)) == []
    d = delta(E(2), E(7))
    assert PI7 in d and PI7B in d
    total = 0
    for P in d:
        total += hilbert_symbol(E(2), E(7), P).exponent
    assert total % 3 == 0


@given(st.sampled_from((2, 3)).flatmap(lambda ell: st.tuples(elems(ell, 200), elems(ell, 200))))
def test_reciprocity_on_delta(ab):
    a, b = ab
    ell = a.ell
    total = sum(hilbert_symbol(a, b, P).exponent for P in delta(a, b))
    assert total % ell == 0


def test_norm_solve_examples():
    assert [str(c) for c in norm_solve(E(7, 2), E(2, 2), 5)] == ["3", "1"]
    t = norm_solve(E(3), E(2), 1)
    assert t is not None and kummer_norm(t, E(2)) == E(3)
    assert kummer_norm([1, 1, 0], E(2)) == E(3)


def test_norm_multiplicative_on_solutions():
    rng = random.Random(3)
    for ell, y in ((2, E(2, 2)), (2, E(-1, 2)), (3, E(2)), (3, E(7))):
        xs = []
        while len(xs) < 3:
            t = [E(rng.randint(-3, 3), ell) for _ in range(ell)]
            x = kummer_norm(t, y)
            if x:
                xs.append((x, t))
        (x1, t1), (x2, t2) = xs[0], xs[1]
        assert is_norm(x1, y).is_norm and is_norm(x1 * x2, y).is_norm
        assert kummer_norm(_mul_mod(t1, t2, y), y) == x1 * x2


def test_lth_powers():
    assert is_lth_power(E(8)) and lth_root(E(8)) == E(2)
    w = E(CycInt((0, 1), 3))
    assert not is_lth_power(w)
    assert {u.coords for u in (v ** 3 for v in units(3))} == {(1, 0), (-1, 0)}
    assert not is_lth_power(E(28) / E(55))
    assert lth_root(E(28) / E(55)) is None
    assert is_lth_power(E(-8, 2)) is False and is_lth_power(E(9, 2) / E(4, 2))


@given(fractions_(3))
def test_cube_roots(t):
    assert lth_root(t ** 3) ** 3 == t ** 3


def test_norm_form_identity_basis():
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    y = E(5)
    c = norm_form_coeffs(y, I3)
    assert len(c.coeffs) == 10
    assert c.coefficient((3, 0, 0)) == 1 and c.coefficient((0, 3, 0)) == y
    assert c.coefficient((0, 0, 3)) == y * y and c.coefficient((1, 1, 1)) == -3 * y
    assert sum(1 for v in c.coeffs if v) == 4
    q = norm_form_coeffs(E(6, 2), [[1, 0], [0, 1]])
    assert [str(v) for v in q.coeffs] == ["1", "0", "-6"]


def test_norm_form_scaled_basis():
    y = E(5)
    c = norm_form_coeffs(y, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert c.coefficient((3, 0, 0)) == 8 and c.coefficient((1, 1, 1)) == -6 * y


def test_norm_form_errors():
    with pytest.raises(PreconditionError):
        norm_form_coeffs(E(8), [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(PreconditionError):
        norm_form_coeffs(E(5), [[1, 0, 0], [1, 0, 0], [0, 0, 1]])


def test_norm_form_represents():
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    c = norm_form_coeffs(E(7), I3)
    assert norm_form_represents(c, c.coefficient((3, 0, 0)))
    assert not norm_form_represents(c, E(2))
    assert not norm_form_represents(norm_form_coeffs(E(-1, 2), [[1, 0], [0, 1]]), E(3, 2))


def test_degenerate_verdict():
    v = is_norm(E(2), E(8))
    assert v.is_norm and v.degenerate and not v.obstructions


def test_real_obstruction():
    v = is_norm(E(-1, 2), E(-1, 2))
    assert real_place(2) in v.obstructions
