"""The cyclic algebra (a, b)_w = <S, T | T^l = a, S^l = b, ST = wTS>.

Elements are l x l coefficient arrays: entry (i, j) multiplies S^i T^j.
Reduced norm and trace come from the matrix model over F = K[s]/(s^l - a),

    T -> diag(s, ws, ..., w^(l-1) s),   S -> cyclic shift with a single b,

which satisfies the defining relations.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import permutations, product

from sympy import primerange

from .arith import CycElem, primes_above, root_of_unity, valuation
from .errors import ArithmeticOverflow, PreconditionError, SearchExhausted
from .norms import delta
from .places import residue_field

DEFAULT_BIT_BOUND = int(os.environ.get("CYCNORM_BIT_BOUND", "4096"))
DEFAULT_R_BOUND = 100


@dataclass(frozen=True)
class AlgebraParams:
    a: CycElem
    b: CycElem

    @property
    def ell(self) -> int:
        return self.a.ell

    @property
    def omega(self) -> CycElem:
        return root_of_unity(self.ell, self.ell)

    @classmethod
    def of(cls, a, b, ell: int) -> AlgebraParams:
        a, b = CycElem.of(a, ell), CycElem.of(b, ell)
        if not a or not b:
            raise PreconditionError("cyclic algebra needs a, b != 0")
        return cls(a, b)


@dataclass(frozen=True)
class AlgebraElem:
    params: AlgebraParams
    coords: tuple[tuple[CycElem, ...], ...]

    @classmethod
    def zero(cls, params: AlgebraParams) -> AlgebraElem:
        z = CycElem.of(0, params.ell)
        return cls(params, tuple((z,) * params.ell for _ in range(params.ell)))

    @classmethod
    def monomial(cls, params: AlgebraParams, i: int, j: int, c=1) -> AlgebraElem:
        ell = params.ell
        rows = [[CycElem.of(0, ell)] * ell for _ in range(ell)]
        rows[i][j] = CycElem.of(c, ell)
        return cls(params, tuple(map(tuple, rows)))

    @classmethod
    def scalar(cls, params: AlgebraParams, c) -> AlgebraElem:
        return cls.monomial(params, 0, 0, c)

    @classmethod
    def from_entries(cls, params: AlgebraParams, entries) -> AlgebraElem:
        """Build from l*l coefficients listed row-major over (i, j)."""
        ell = params.ell
        entries = [CycElem.of(c, ell) for c in entries]
        if len(entries) != ell * ell:
            raise PreconditionError(f"expected {ell * ell} coefficients")
        return cls(params, tuple(tuple(entries[i * ell:(i + 1) * ell]) for i in range(ell)))

    def _check(self, other: AlgebraElem):
        if other.params != self.params:
            raise PreconditionError("algebra elements have different parameters")

    def __add__(self, other: AlgebraElem) -> AlgebraElem:
        self._check(other)
        return AlgebraElem(self.params, tuple(
            tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.coords, other.coords)))

    def __sub__(self, other: AlgebraElem) -> AlgebraElem:
        return self + other.scale(-1)

    def scale(self, c) -> AlgebraElem:
        c = CycElem.of(c, self.params.ell)
        return AlgebraElem(self.params, tuple(tuple(c * x for x in r) for r in self.coords))

    def __mul__(self, other):
        if isinstance(other, AlgebraElem):
            return alg_mul(self, other)
        return self.scale(other)

    def __pow__(self, k: int) -> AlgebraElem:
        out = AlgebraElem.scalar(self.params, 1)
        for _ in range(k):
            out = out * self
        return out

    def flat(self) -> list[CycElem]:
        return [c for row in self.coords for c in row]


def alg_mul(u: AlgebraElem, v: AlgebraElem) -> AlgebraElem:
    u._check(v)
    p = u.params
    ell, w = p.ell, p.omega
    out = [[CycElem.of(0, ell)] * ell for _ in range(ell)]
    for i, j in product(range(ell), repeat=2):
        x = u.coords[i][j]
        if not x:
            continue
        for k, m in product(range(ell), repeat=2):
            y = v.coords[k][m]
            if not y:
                continue
            # S^i T^j S^k T^m = w^(-jk) S^(i+k) T^(j+m)
            c = x * y * w ** (-(j * k) % ell)
            si, tj = i + k, j + m
            if si >= ell:
                si -= ell
                c = c * p.b
            if tj >= ell:
                tj -= ell
                c = c * p.a
            out[si][tj] = out[si][tj] + c
    return AlgebraElem(p, tuple(map(tuple, out)))


# Arithmetic in F = K[s]/(s^l - a): tuples of l coefficients.

def _f_add(x, y):
    return tuple(p + q for p, q in zip(x, y))


def _f_mul(x, y, a):
    ell = len(x)
    out = [CycElem.of(0, a.ell)] * ell
    for i, p in enumerate(x):
        if not p:
            continue
        for j, q in enumerate(y):
            if not q:
                continue
            k = i + j
            c = p * q
            if k >= ell:
                k -= ell
                c = c * a
            out[k] = out[k] + c
    return tuple(out)


def _f_const(c, ell):
    z = CycElem.of(0, c.ell)
    return (c,) + (z,) * (ell - 1)


def split_matrix(u: AlgebraElem):
    """Image of u in M_l(K[s]/(s^l - a))."""
    p = u.params
    ell, w = p.ell, p.omega
    zero = CycElem.of(0, ell)
    M = [[(zero,) * ell for _ in range(ell)] for _ in range(ell)]
    for i, j in product(range(ell), repeat=2):
        c = u.coords[i][j]
        if not c:
            continue
        # S^i T^j: row r has a single entry in column (r + i) mod l,
        # the shift picks up b when it wraps, T^j contributes (w^col s)^j
        for r in range(ell):
            col = r + i
            coeff = c
            if col >= ell:
                col -= ell
                coeff = coeff * p.b
            coeff = coeff * w ** ((col * j) % ell)
            entry = [zero] * ell
            entry[j] = coeff
            M[r][col] = _f_add(M[r][col], tuple(entry))
    return M


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _to_base(x, what: str, bit_bound: int) -> CycElem:
    if any(c for c in x[1:]):
        raise AssertionError(f"{what} left the base field: {x}")
    if x[0].bit_length() > bit_bound:
        raise ArithmeticOverflow(f"{what} exceeded {bit_bound} bits")
    return x[0]


def reduced_norm(u: AlgebraElem, bit_bound: int = DEFAULT_BIT_BOUND) -> CycElem:
    p = u.params
    M = split_matrix(u)
    ell = p.ell
    total = _f_const(CycElem.of(0, ell), ell)
    for perm in permutations(range(ell)):
        term = _f_const(CycElem.of(_perm_sign(perm), ell), ell)
        for r, c in enumerate(perm):
            term = _f_mul(term, M[r][c], p.a)
        total = _f_add(total, term)
    return _to_base(total, "Nrd", bit_bound)


def reduced_trace(u: AlgebraElem, bit_bound: int = DEFAULT_BIT_BOUND) -> CycElem:
    M = split_matrix(u)
    ell = u.params.ell
    total = _f_const(CycElem.of(0, ell), ell)
    for r in range(ell):
        total = _f_add(total, M[r][r])
    return _to_base(total, "Trd", bit_bound)


# Norm-one elements from Hilbert 90 quotients c / sigma(c).

def _solve(M, rhs):
    """Gaussian elimination over K; None if singular."""
    n = len(M)
    A = [list(row) + [r] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inverse()
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


def _commutative_quotient(params: AlgebraParams, c, use_s: bool):
    """c * sigma(c)^{-1} inside K[T] (or K[S]) as an algebra element, or None."""
    ell, w = params.ell, params.omega
    rel = params.b if use_s else params.a
    # sigma: T -> wT is conjugation by S; on K[S] conjugation by T sends S -> w^-1 S
    twist = w.inverse() if use_s else w
    sc = tuple(ci * twist ** i for i, ci in enumerate(c))
    # multiplication-by-sc matrix on the basis 1, X, ..., X^(l-1)
    cols = []
    for k in range(ell):
        basis = tuple(CycElem.of(1 if i == k else 0, ell) for i in range(ell))
        cols.append(_f_mul(sc, basis, rel))
    M = [[cols[k][r] for k in range(ell)] for r in range(ell)]
    q = _solve(M, list(c))
    if q is None:
        return None
    entries = [CycElem.of(0, ell)] * (ell * ell)
    for k, qk in enumerate(q):
        i, j = (k, 0) if use_s else (0, k)
        entries[i * ell + j] = qk
    return AlgebraElem.from_entries(params, entries)


def _small_vectors(ell: int, height_bound: int):
    dim = ell - 1
    for h in range(1, height_bound + 1):
        for flat in product(range(-h, h + 1), repeat=ell * dim):
            if max(map(abs, flat)) != h:
                continue
            c = tuple(CycElem(flat[i * dim:(i + 1) * dim], ell) for i in range(ell))
            if any(c[1:]):
                yield c


def _norm_one_stream(params: AlgebraParams, height_bound: int):
    yield AlgebraElem.scalar(params, 1)
    prev = None
    for c in _small_vectors(params.ell, height_bound):
        for use_s in (False, True):
            u = _commutative_quotient(params, c, use_s)
            if u is None:
                continue
            yield u
            if prev is not None:
                yield alg_mul(prev, u)
            prev = u


def sample_norm_one_elements(params: AlgebraParams, count: int, height_bound: int = 2):
    """Deterministic list of ``count`` algebra elements with Nrd = 1."""
    if count < 1:
        raise PreconditionError("count must be >= 1")
    out = []
    for u in _norm_one_stream(params, height_bound):
        assert reduced_norm(u) == 1
        out.append(u)
        if len(out) == count:
            return out
    raise SearchExhausted("sample_norm_one_elements", height_bound)


def sample_norm_one_traces(params: AlgebraParams, count: int, height_bound: int = 3) -> list[CycElem]:
    """``count`` distinct reduced traces of norm-one elements, sorted."""
    if count < 1:
        raise PreconditionError("count must be >= 1")
    seen = set()
    for u in _norm_one_stream(params, height_bound):
        assert reduced_norm(u) == 1
        seen.add(reduced_trace(u))
        if len(seen) == count:
            return sorted(seen, key=lambda x: (x.bit_length(), x.coords))
    raise SearchExhausted("sample_norm_one_traces", height_bound)


def residue_reps(ell: int, bound: int = DEFAULT_R_BOUND) -> list[CycElem]:
    """Integral lifts of every residue field with fewer than ``bound`` elements."""
    seen = {}
    for p in primerange(2, bound):
        for P in primes_above(p, ell):
            if P.q >= bound:
                continue
            F = residue_field(P)
            for u in [0] + F.elements() if F.f == 1 else [(0, 0)] + F.elements():
                x = CycElem.of(F.lift(u), ell)
                seen.setdefault(x.coords, x)
    return [seen[k] for k in sorted(seen)]


def check_T_inclusion(a, b, samples, reps_R, limit: int | None = None,
                      ell: int | None = None):
    """Check s1 + s2 + r is integral at every finite place of delta(a, b).

    Returns ``(True, None)`` or ``(False, (s1, s2, r))``.  At most ``limit``
    triples are checked, in product order.
    """
    ell = ell or (a.ell if isinstance(a, CycElem) else b.ell)
    places = [P for P in delta(a, b, ell=ell) if not P.is_real]
    if not places:
        return True, None
    for n, (s1, s2, r) in enumerate(product(samples, samples, reps_R)):
        if limit is not None and n >= limit:
            break
        x = s1 + s2 + r
        if x and any(valuation(x, P) < 0 for P in places):
            return False, (s1, s2, r)
    return True, None

