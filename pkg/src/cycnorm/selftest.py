"""Acceptance suites, shared by the test-suite and ``cycnorm selftest``.

Each ``criterion_N`` returns a :class:`Outcome`.  Sizes default to the full
acceptance sizes; ``quick=True`` in :func:`run_all` shrinks them.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import comb

from .arith import CycElem, primes_above, real_place
from .places import Mu
from .norms import is_lth_power, is_norm, lth_root, norm_solve
from .symbols import all_symbols, local_class_reps, wild_place, wild_split_oracle

# (ell, x coords, y coords, expected is_norm, brute-force height bound)
HASSE_SUITE = (
    (2, (3,), (-1,), False, 3),
    (2, (7,), (2,), True, 3),
    (2, (2,), (7,), True, 3),
    (2, (5,), (-1,), True, 2),
    (2, (13,), (-1,), True, 3),
    (2, (-1,), (2,), True, 1),
    (2, (2,), (-1,), True, 1),
    (2, (7,), (21,), True, 7),
    (2, (25,), (-26,), True, 1),
    (2, (28,), (-27,), True, 1),
    (2, (-38,), (7,), True, 5),
    (2, (-49,), (17,), True, 1),
    (2, (-13,), (13,), True, 1),
    (2, (-50,), (34,), True, 4),
    (2, (15,), (-14,), True, 1),
    (2, (-48,), (37,), True, 2),
    (2, (7,), (15,), False, 4),
    (2, (-27,), (15,), False, 4),
    (2, (10,), (30,), False, 4),
    (2, (-12,), (-32,), False, 4),
    (2, (38,), (31,), False, 4),
    (2, (33,), (44,), False, 4),
    (2, (-42,), (-43,), False, 4),
    (2, (-40,), (8,), False, 4),
    (2, (-1,), (-42,), False, 4),
    (3, (2, 0), (7, 0), False, 1),
    (3, (7, 0), (2, 0), False, 1),
    (3, (1, 1), (2, 0), False, 1),
    (3, (10, -16), (34, 17), False, 1),
    (3, (35, -6), (-32, -2), False, 1),
    (3, (-49, -3), (11, -15), False, 1),
    (3, (29, -32), (6, -3), False, 1),
    (3, (23, -25), (-41, 15), False, 1),
    (3, (37, -7), (37, 1), False, 1),
    (3, (15, -22), (-39, 4), False, 1),
    (3, (8, 0), (7, 0), True, 1),
    (3, (3, 0), (2, 0), True, 1),
    (3, (2, 0), (3, 0), True, 1),
    (3, (5, 0), (2, 0), True, 1),
    (3, (-1, -9), (0, 9), True, 1),
    (3, (-2, 4), (-1, 4), True, 1),
    (3, (33, -6), (-4, -2), True, 1),
    (3, (-40, 3), (-5, -9), True, 1),
    (3, (-13, -22), (4, 2), True, 1),
    (3, (20, 19), (-1, 5), True, 1),
    (3, (2, 10), (-1, 2), True, 1),
    (3, (27, 13), (-1, -4), True, 1),
    (3, (47, 15), (2, 9), True, 1),
    (3, (-8, 9), (7, -9), True, 1),
    (3, (-13, 0), (2, 4), True, 1),
)


@dataclass
class Outcome:
    number: int
    title: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"criterion {self.number}: {status} - {self.title} ({self.detail})"


def _rand_elem(rng: random.Random, ell: int, mag: int) -> CycElem:
    while True:
        x = CycElem(tuple(rng.randint(-mag, mag) for _ in range(ell - 1)), ell)
        if x:
            return x


def _timed(number, title, fn):
    start = time.perf_counter()
    ok, detail, failures = fn()
    return Outcome(number, title, ok, detail, time.perf_counter() - start, failures)


def criterion_1(pairs: int = 200, mag: int = 1000, seed: int = 1) -> Outcome:
    """Wild symbol from reciprocity agrees with the truncated local norm oracle."""

    def run():
        rng = random.Random(seed)
        lam = wild_place(3)
        bad, nontrivial = [], 0
        for _ in range(pairs):
            a, b = _rand_elem(rng, 3, mag), _rand_elem(rng, 3, mag)
            sym = all_symbols(a, b, 3).get(lam)
            trivial = sym is None or sym.is_trivial
            nontrivial += not trivial
            if trivial != wild_split_oracle(a, b, 3, 3):
                bad.append((a, b))
        return not bad, f"{pairs - len(bad)}/{pairs} agree, {nontrivial} nontrivial", bad

    return _timed(1, "reciprocity vs wild oracle", run)


def criterion_2(triples: int = 1000, mag: int = 60, seed: int = 2) -> Outcome:
    """Bilinearity, antisymmetry, (x,x)=1 / (x,-x)=1, and non-degenerate local pairings."""

    def run():
        bad = []
        for ell in (2, 3):
            rng = random.Random(seed + ell)
            triv = Mu(0, ell)
            for _ in range(triples):
                x, y, z = (_rand_elem(rng, ell, mag) for _ in range(3))
                xy_z = all_symbols(x * y, z, ell)
                x_z, y_z = all_symbols(x, z, ell), all_symbols(y, z, ell)
                x_y, y_x = all_symbols(x, y, ell), all_symbols(y, x, ell)
                self_pair = all_symbols(x, x if ell == 3 else -x, ell)
                places = set(xy_z) | set(x_z) | set(y_z) | set(x_y) | set(self_pair)
                for P in places:
                    def g(d):
                        return d.get(P, triv)

                    if g(xy_z) != g(x_z) * g(y_z):
                        bad.append(("bilinear", ell, x, y, z, P.label))
                    if g(x_y) != g(y_x).inverse():
                        bad.append(("antisymmetric", ell, x, y, P.label))
                    if not g(self_pair).is_trivial:
                        bad.append(("self", ell, x, P.label))
            tables = [wild_place(ell)]
            for p in (2, 5, 7, 13):
                tables.extend(primes_above(p, ell))
            if ell == 2:
                tables.append(real_place(2))
            for P in dict.fromkeys(tables):
                if not local_class_reps(P, ell).is_nondegenerate():
                    bad.append(("degenerate", ell, P.label))
        return not bad, f"{2 * triples} triples per law, pairing tables checked", bad

    return _timed(2, "symbol algebra", run)


def criterion_3(suite=HASSE_SUITE) -> Outcome:
    """Hasse verdicts agree with the brute-force norm equation search."""

    def run():
        bad = []
        for ell, xc, yc, expected, bound in suite:
            x, y = CycElem(xc, ell), CycElem(yc, ell)
            verdict = is_norm(x, y, ell, ell)
            found = norm_solve(x, y, bound, ell, ell) is not None
            if verdict.is_norm != expected or verdict.is_norm != found:
                bad.append((ell, xc, yc, verdict.is_norm, found))
        extra = {
            "(3,-1)": [P.label for P in is_norm(CycElem.of(3, 2), CycElem.of(-1, 2)).obstructions],
            "(2,7)": [P.label for P in is_norm(CycElem.of(2, 3), CycElem.of(7, 3)).obstructions],
        }
        if extra["(3,-1)"] != ["2", "3"] or "7,0" not in extra["(2,7)"]:
            bad.append(("anchors", extra))
        return not bad, f"{len(suite) - len(bad)}/{len(suite)} pairs agree", bad

    return _timed(3, "Hasse vs brute force", run)


def _primes_off_modulus(params, limit: int = 200):
    from sympy import primerange

    return [P for p in primerange(2, limit) for P in primes_above(p, params.ell)
            if not params.divides_modulus(P)]


def _generated_p(rng: random.Random, params, pool) -> CycElem:
    from .arith import units

    p = CycElem.of(rng.choice(units(params.ell)), params.ell)
    for P in rng.sample(pool, rng.randint(1, 3)):
        p = p * P.gen_elem() ** rng.randint(1, 4)
    return p


def criterion_4(count: int = 100, seeds=(0, 1, 2, 3), ell: int = 3, seed: int = 4) -> Outcome:
    """Delta intersections against P^(i,j)(p) for generated p with (p) in I(m)."""
    from .dioph import NONTRIVIAL, classify, fix_ab, r_places_by_delta

    def run():
        held = {ij: 0 for ij in NONTRIVIAL}
        total, bad = 0, []
        for s in seeds:
            params = fix_ab(ell, s)
            rng = random.Random(seed + s)
            pool = _primes_off_modulus(params)
            for _ in range(count):
                p = _generated_p(rng, params, pool)
                cl = classify(p, params)
                total += 1
                for ij in NONTRIVIAL:
                    if set(r_places_by_delta(ij, p, params)) == set(cl.of(ij)):
                        held[ij] += 1
                    else:
                        bad.append((s, str(p), ij))
        parts = ", ".join(f"{ij}: {held[ij]}/{total}" for ij in NONTRIVIAL)
        return not bad, f"identities hold {parts}", bad

    return _timed(4, "Delta classification", run)


def _delta_pairs(rng: random.Random, ell: int, count: int, mag: int = 40):
    from .dioph import finite_delta

    out = []
    while len(out) < count:
        a, b = _rand_elem(rng, ell, mag), _rand_elem(rng, ell, mag)
        if finite_delta(a, b):
            out.append((a, b))
    return out


def _j_element(rng: random.Random, a, b, places) -> CycElem:
    ell = a.ell
    z = _rand_elem(rng, ell, 30)
    for P in places:
        if rng.random() < 0.7:
            z = z * P.gen_elem() ** rng.randint(1, 4)
    return z


def criterion_5(agreements: int = 200, decompositions: int = 100, seed: int = 5) -> Outcome:
    """J by both routes, and j_decompose round trips."""
    from .dioph import in_I, in_J, in_J_by_sums, j_decompose, j_places, lth_support, finite_delta

    def run():
        rng = random.Random(seed)
        pairs = _delta_pairs(rng, 3, 10) + _delta_pairs(rng, 2, 10)
        bad, positives = [], 0
        for _ in range(agreements):
            a, b = rng.choice(pairs)
            z = _j_element(rng, a, b, j_places(a, b))
            r1, r2 = in_J(z, a, b), in_J_by_sums(z, a, b)
            positives += r1
            if r1 != r2:
                bad.append(("J", a, b, z, r1, r2))
        for _ in range(decompositions):
            a, b = rng.choice(pairs)
            c = rng.choice((a, b))
            inside = [P for P in finite_delta(a, b) if P in set(lth_support(c, a.ell))]
            z = _rand_elem(rng, a.ell, 30)
            for P in inside:
                z = z * P.gen_elem() ** rng.randint(1, 5)
            y, rest = j_decompose(z, (a, b), c)
            if y + rest != z or not in_I(y, a, b, c) or not in_I(rest, a, b, c):
                bad.append(("decompose", a, b, c, z))
        detail = (f"{agreements} J agreements ({positives} members), "
                  f"{decompositions} decompositions, {len(bad)} failures")
        return not bad, detail, bad

    return _timed(5, "J routes and decomposition", run)


def _nonnorm_cases(rng: random.Random, params, per_kind: int, mag: int = 60):
    """(x, y, place) triples covering each certificate clause ``per_kind`` times."""
    from .dioph import _aux_primes, place_class

    ell = params.ell
    quota = {"modulus": per_kind, "nonsplit": per_kind, "split": per_kind}
    out = []
    tries = 0
    while (quota["modulus"] or quota["nonsplit"]) and tries < 5000:
        tries += 1
        x, y = _rand_elem(rng, ell, mag), _rand_elem(rng, ell, mag)
        verdict = is_norm(x, y, ell, ell)
        for P in verdict.obstructions:
            if params.divides_modulus(P):
                kind = "modulus"
            elif place_class(P, params) != (1, 1):
                kind = "nonsplit"
            else:
                kind = "split"
            if quota[kind]:
                quota[kind] -= 1
                out.append((x, y, P))
                break
    aux = list(_aux_primes(params, bound=400))
    while quota["split"] and tries < 20000:
        tries += 1
        P = rng.choice(aux[:8])
        x = P.gen_elem() * _rand_elem(rng, ell, 5)
        y = _rand_elem(rng, ell, mag)
        if rng.random() < 0.5:
            x, y = y, x
        if P in is_norm(x, y, ell, ell).obstructions:
            quota["split"] -= 1
            out.append((x, y, P))
    return out


def _fuzz_certificate(rng: random.Random, params, pool):
    from .certificates import DividesModulus, NonSplitClass, SplitClass
    from .dioph import NONTRIVIAL

    ell = params.ell
    e = lambda: rng.randint(0, ell)  # noqa: E731  out-of-range values included on purpose
    kind = rng.random()
    if kind < 0.2:
        return DividesModulus(rng.choice(params.modulus_places))
    if kind < 0.6 or not pool["split"]:
        p = rng.choice(pool["nonsplit"])
        return NonSplitClass(rng.choice(NONTRIVIAL), p, e(), e(), e(), e(), rng.random() < 0.5)
    p, q = rng.choice(pool["split"])
    return SplitClass(p, q, e(), e(), e(), e(), rng.random() < 0.5)


def _norm_pair(rng: random.Random, ell: int, mag: int = 20):
    from .norms import kummer_norm

    while True:
        y = _rand_elem(rng, ell, mag)
        if is_lth_power(y, ell, ell):
            continue
        t = [CycElem(tuple(rng.randint(-5, 5) for _ in range(ell - 1)), ell) for _ in range(ell)]
        x = kummer_norm(t, y, ell)
        if x:
            return x, y


def criterion_6(per_kind: int = 10, fuzz: int = 10_000, norm_pairs: int = 30, seed: int = 6) -> Outcome:
    """Certificates for non-norms verify; none verifies for a norm."""
    from .certificates import NonSplitClass, SplitClass, build_certificate, verify_certificate
    from .dioph import fix_ab

    def run():
        bad, built = [], 0
        pools = {}
        for ell in (2, 3):
            rng = random.Random(seed + ell)
            params = fix_ab(ell, 0)
            pool = {"nonsplit": [], "split": []}
            for x, y, P in _nonnorm_cases(rng, params, per_kind):
                cert = build_certificate(x, y, params, place=P)
                built += 1
                if not verify_certificate(x, y, cert, params):
                    bad.append(("unverified", ell, x, y, cert))
                if isinstance(cert, NonSplitClass):
                    pool["nonsplit"].append(cert.p)
                elif isinstance(cert, SplitClass):
                    pool["split"].append((cert.p, cert.q))
            pools[ell] = (params, pool)
        accepted = 0
        for ell in (2, 3):
            rng = random.Random(seed * 100 + ell)
            params, pool = pools[ell]
            pairs = [_norm_pair(rng, ell) for _ in range(norm_pairs)]
            for _ in range(fuzz // 2):
                x, y = rng.choice(pairs)
                if rng.random() < 0.5:
                    x, y = y, x
                    if not is_norm(x, y, ell, ell).is_norm:
                        x, y = y, x
                cert = _fuzz_certificate(rng, params, pool)
                if verify_certificate(x, y, cert, params):
                    accepted += 1
                    bad.append(("accepted for a norm", ell, x, y, cert))
        detail = f"{built} built and verified, {fuzz} fuzzed on norms, {accepted} accepted"
        return not bad, detail, bad

    return _timed(6, "non-norm certificates", run)


def criterion_7(pairs: int = 10, triples: int = 100, seed: int = 7) -> Outcome:
    """Sums of two norm-one traces plus a residue lift stay integral on Delta."""
    from .algebra import AlgebraParams, check_T_inclusion, residue_reps, sample_norm_one_traces

    def run():
        bad, checked = [], 0
        for ell in (2, 3):
            rng = random.Random(seed + ell)
            reps = residue_reps(ell)
            for a, b in _delta_pairs(rng, ell, pairs, mag=30):
                samples = sample_norm_one_traces(AlgebraParams.of(a, b, ell), 12)
                for _ in range(triples):
                    s1, s2, r = rng.choice(samples), rng.choice(samples), rng.choice(reps)
                    ok, _witness = check_T_inclusion(a, b, [s1, s2], [r], ell=ell)
                    checked += 1
                    if not ok:
                        bad.append((ell, a, b, s1, s2, r))
        return not bad, f"{checked} triples over {2 * pairs} algebras", bad

    return _timed(7, "trace sums in T", run)


def _sympy_norm_form(y: CycElem):
    """Coefficients of t1^3 + y t2^3 + y^2 t3^3 - 3 y t1 t2 t3, computed by sympy."""
    import sympy as sp

    w, t1, t2, t3 = sp.symbols("w t1 t2 t3")
    Y = y.coords[0] + y.coords[1] * w
    expr = sp.expand(t1**3 + Y * t2**3 + Y**2 * t3**3 - 3 * Y * t1 * t2 * t3)
    poly = sp.Poly(expr, t1, t2, t3)
    out = {}
    for mon, coeff in poly.terms():
        red = sp.Poly(sp.rem(sp.Poly(coeff, w), sp.Poly(w**2 + w + 1, w)), w)
        a1 = red.coeff_monomial(w)
        a0 = red.coeff_monomial(1)
        out[mon] = (int(a0), int(a1))
    return out


def criterion_8(count: int = 20, seed: int = 8) -> Outcome:
    """Norm-form expansion for the standard basis against an independent sympy expansion."""
    from .norms import norm_form_coeffs

    def run():
        rng = random.Random(seed)
        identity = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
        bad, done = [], 0
        while done < count:
            y = _rand_elem(rng, 3, 50)
            if is_lth_power(y, 3, 3):
                continue
            done += 1
            coeffs = norm_form_coeffs(y, identity, 3)
            if len(coeffs.coeffs) != comb(5, 3):
                bad.append(("size", y, len(coeffs.coeffs)))
                continue
            expected = _sympy_norm_form(y)
            for mon, c in zip(coeffs.monomials, coeffs.coeffs):
                if expected.get(mon, (0, 0)) != c.coords:
                    bad.append((y, mon, c, expected.get(mon)))
        return not bad, f"{count} expansions with {comb(5, 3)} coefficients each", bad

    return _timed(8, "norm-form coefficients", run)


def criterion_9(count: int = 50, seed: int = 9) -> Outcome:
    """Non-cubes get a witness y with a verifying certificate; cubes have cube roots."""
    from .certificates import build_certificate, nonpower_witness, verify_certificate
    from .dioph import fix_ab

    def run():
        rng = random.Random(seed)
        params = fix_ab(3, 0)
        bad, noncubes, cubes = [], 0, 0
        while noncubes < count:
            x = _rand_elem(rng, 3, 50)
            if is_lth_power(x, 3, 3):
                continue
            noncubes += 1
            y = nonpower_witness(x, params)
            cert = build_certificate(x, y, params)
            if not verify_certificate(x, y, cert, params):
                bad.append(("witness", x, y))
        while cubes < count:
            t = _rand_elem(rng, 3, 30)
            x = t ** 3
            cubes += 1
            root = lth_root(x, 3, 3)
            if not is_lth_power(x, 3, 3) or root is None or root ** 3 != x:
                bad.append(("cube", x, root))
        return not bad, f"{noncubes} non-cubes certified, {cubes} cubes rooted", bad

    return _timed(9, "cube characterization", run)


QUICK = {
    1: {"pairs": 20},
    2: {"triples": 50},
    3: {"suite": HASSE_SUITE[::5]},
    4: {"count": 10},
    5: {"agreements": 20, "decompositions": 10},
    6: {"per_kind": 1, "fuzz": 200, "norm_pairs": 5},
    7: {"pairs": 2, "triples": 10},
    8: {"count": 5},
    9: {"count": 5},
}

CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_all(quick: bool = False, only=None) -> list[Outcome]:
    numbers = sorted(only) if only else sorted(CRITERIA)
    return [CRITERIA[n](**(QUICK[n] if quick else {})) for n in numbers]
