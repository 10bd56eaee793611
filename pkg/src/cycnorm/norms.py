"""Norm tests for Kummer extensions K(y^(1/n))/K and their norm forms."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb, isqrt

from sympy import integer_nthroot

from .arith import CycElem, CycInt, Place, factor, root_of_unity, units
from .errors import PreconditionError
from .symbols import _degree, all_symbols


@dataclass(frozen=True)
class NormVerdict:
    is_norm: bool
    obstructions: tuple[Place, ...] = ()
    degenerate: bool = False
    per_prime: tuple = ()

    def to_json(self) -> dict:
        out = {
            "is_norm": self.is_norm,
            "obstructions": [P.label for P in self.obstructions],
            "degenerate": self.degenerate,
        }
        if self.per_prime:
            out["per_prime"] = {str(p): v.to_json() for p, v in self.per_prime}
        return out


def _ell_of(*xs) -> int:
    for x in xs:
        if isinstance(x, (CycElem, CycInt)):
            return x.ell
    raise PreconditionError("cannot infer ell from plain integers; pass ell=")


def lth_root(x, n: int | None = None, ell: int | None = None) -> CycElem | None:
    """An exact n-th root of x in K, or None."""
    ell = ell or _ell_of(x)
    n = _degree(ell, n)
    x = CycElem.of(x, ell)
    if not x:
        raise PreconditionError("lth_root of zero")
    fx = factor(x)
    if any(k % n for _, k in fx.factors):
        return None
    root = None
    for u in units(ell):
        if u ** n == fx.unit:
            root = CycElem.of(u, ell)
            break
    if root is None:
        return None
    for P, k in fx.factors:
        root = root * P.gen_elem() ** (k // n)
    return root


def is_lth_power(x, n: int | None = None, ell: int | None = None) -> bool:
    return lth_root(x, n, ell) is not None


def delta(a, b, n: int | None = None, ell: int | None = None) -> list[Place]:
    """Places where (a, b) is nontrivial, in canonical order."""
    ell = ell or _ell_of(a, b)
    return [P for P, s in all_symbols(a, b, ell, n).items() if not s.is_trivial]


def is_norm(x, y, n: int | None = None, ell: int | None = None) -> NormVerdict:
    """Hasse test: is x a norm from K(y^(1/n))?"""
    ell = ell or _ell_of(x, y)
    n = _degree(ell, n)
    x = CycElem.of(x, ell)
    y = CycElem.of(y, ell)
    if not x or not y:
        raise PreconditionError("is_norm needs nonzero x and y")
    if is_lth_power(y, n, ell):
        return NormVerdict(True, (), True)
    obs = tuple(delta(x, y, n, ell))
    return NormVerdict(not obs, obs, False)


# Polynomials in t_1..t_n and s with K coefficients, reduced by s^n = y.

def _poly_mul(f: dict, g: dict, n: int, y: CycElem) -> dict:
    out = {}
    for (ef, sf), cf in f.items():
        for (eg, sg), cg in g.items():
            e = tuple(a + b for a, b in zip(ef, eg))
            s = sf + sg
            c = cf * cg
            if s >= n:
                s -= n
                c = c * y
            key = (e, s)
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def _generic_element(B, n: int, ell: int, twist: CycElem) -> dict:
    """sigma^k of sum_i t_i (sum_j B_ij s^j) with sigma(s) = twist * s."""
    poly = {}
    for i in range(n):
        e = tuple(1 if k == i else 0 for k in range(n))
        for j in range(n):
            c = CycElem.of(B[i][j], ell) * twist ** j
            if c:
                poly[(e, j)] = poly.get((e, j), 0) + c
    return poly


def monomials(n: int) -> list[tuple[int, ...]]:
    """Degree-n exponent vectors in n variables, lexicographically descending."""
    mons = [e for e in product(range(n, -1, -1), repeat=n) if sum(e) == n]
    assert len(mons) == comb(2 * n - 1, n)
    return mons


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass(frozen=True)
class NormFormCoeffs:
    ell: int
    coeffs: tuple[CycElem, ...]
    y: CycElem
    basis: tuple[tuple[CycElem, ...], ...]
    monomials: tuple[tuple[int, ...], ...] = field(default=())

    def coefficient(self, exps) -> CycElem:
        return self.coeffs[self.monomials.index(tuple(exps))]

    def evaluate(self, t) -> CycElem:
        total = CycElem.of(0, self.ell)
        for c, e in zip(self.coeffs, self.monomials):
            if c:
                term = c
                for ti, k in zip(t, e):
                    term = term * CycElem.of(ti, self.ell) ** k
                total = total + term
        return total

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def norm_form_coeffs(y, B, ell: int | None = None) -> NormFormCoeffs:
    """Expand N(sum t_i w_i), w_i = sum_j B_ij y^(j/n), into monomial coefficients."""
    ell = ell or _ell_of(y, *[c for row in B for c in row])
    n = ell
    y = CycElem.of(y, ell)
    B = tuple(tuple(CycElem.of(c, ell) for c in row) for row in B)
    if len(B) != n or any(len(row) != n for row in B):
        raise PreconditionError(f"basis matrix must be {n}x{n}")
    if not y or is_lth_power(y, n, ell):
        raise PreconditionError(f"{y} is an {n}-th power")
    if not _det(B):
        raise PreconditionError("basis matrix is singular")
    omega = root_of_unity(n, ell)
    prod_poly = {((0,) * n, 0): CycElem.of(1, ell)}
    for k in range(n):
        prod_poly = _poly_mul(prod_poly, _generic_element(B, n, ell, omega ** k), n, y)
    stray = [key for key in prod_poly if key[1] != 0]
    assert not stray, "norm expansion is not Galois invariant"
    mons = monomials(n)
    coeffs = tuple(prod_poly.get((e, 0), CycElem.of(0, ell)) for e in mons)
    return NormFormCoeffs(ell, coeffs, y, B, tuple(mons))


def norm_form_represents(coeffs: NormFormCoeffs, x) -> bool:
    """Does the norm form take the value x on K^n?  Decided through the Hasse test."""
    again = norm_form_coeffs(coeffs.y, coeffs.basis, coeffs.ell)
    if again.coeffs != coeffs.coeffs:
        raise PreconditionError("coefficients do not match their witness (y, basis)")
    x = CycElem.of(x, coeffs.ell)
    if not x:
        return True
    return is_norm(x, coeffs.y, coeffs.ell, coeffs.ell).is_norm


def kummer_norm(t, y: CycElem, n: int | None = None) -> CycElem:
    """N(t_0 + t_1 s + ... + t_{n-1} s^{n-1}) with s^n = y."""
    n = _degree(y.ell, n)
    t = [CycElem.of(c, y.ell) for c in t]
    if n == 2:
        return t[0] * t[0] - y * t[1] * t[1]
    return t[0] ** 3 + y * t[1] ** 3 + y * y * t[2] ** 3 - 3 * y * t[0] * t[1] * t[2]


def _rational_norm_is_power(z: CycElem, n: int) -> bool:
    # N_{K/Q} of an n-th power is an n-th power in Q (and positive for n = 2)
    q = z.norm()
    if n == 2 and q < 0:
        return False
    num, den = abs(q.numerator), q.denominator
    if n == 2:
        return isqrt(num) ** 2 == num and isqrt(den) ** 2 == den
    return integer_nthroot(num, n)[1] and integer_nthroot(den, n)[1]


def _shells(dim: int, bound: int):
    for h in range(1, bound + 1):
        # within a shell: lexicographic in the order 0, 1, -1, 2, -2, ...
        order = [0] + [s * k for k in range(1, h + 1) for s in (1, -1)]
        for c in product(order, repeat=dim):
            if max(map(abs, c)) == h:
                yield c


def norm_solve(x, y, height_bound: int, n: int | None = None,
               ell: int | None = None) -> tuple[CycElem, ...] | None:
    """Search u = sum c_i y^(i/n) with N(u) = x; return (c_0, ..) or None.

    Integral t are enumerated by max-coordinate height; a hit is any t with
    N(t)/x = rho^n, giving c = t/rho.
    """
    ell = ell or _ell_of(x, y)
    n = _degree(ell, n)
    x = CycElem.of(x, ell)
    y = CycElem.of(y, ell)
    if not x or not y:
        raise PreconditionError("norm_solve needs nonzero x and y")
    if is_lth_power(y, n, ell):
        raise PreconditionError(f"{y} is an {n}-th power")
    dim = ell - 1
    for flat in _shells(n * dim, height_bound):
        t = [CycElem(flat[i * dim:(i + 1) * dim], ell) for i in range(n)]
        z = kummer_norm(t, y, n) / x
        if not _rational_norm_is_power(z, n):
            continue
        rho = lth_root(z, n, ell)
        if rho is None:
            continue
        c = tuple(ti / rho for ti in t)
        assert kummer_norm(c, y, n) == x
        return c
    return None
