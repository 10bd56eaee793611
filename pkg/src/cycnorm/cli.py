"""Command-line front end.  Every command prints one JSON document on stdout.

Exit codes: 0 for success or a true answer, 1 for a false answer, 2 for errors
(reported as JSON on stderr).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .arith import primes_above, real_place
from .errors import CycNormError, IsANorm
from .expr import format_elem, parse_elem

SCHEMA = 1


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def parse_place(label: str, ell: int):
    """'real', 'p' or 'p,idx' (index into the canonical places above p)."""
    label = label.strip()
    if label == "real":
        return real_place(ell)
    head, _, idx = label.partition(",")
    try:
        p = int(head)
        places = primes_above(p, ell)
        i = int(idx) if idx else 0
    except ValueError as exc:
        raise CliError(f"bad place label {label!r}: {exc}") from None
    if not idx and len(places) > 1:
        raise CliError(f"{p} splits; name the place as '{p},0' or '{p},1'")
    if not 0 <= i < len(places):
        raise CliError(f"no place {label!r}")
    return places[i]


def _elem(args, text):
    return parse_elem(text, args.ell)


def _elems(args, text, count=None):
    parts = [t for t in text.replace(";", ",").split(",") if t.strip()]
    if count is not None and len(parts) != count:
        raise CliError(f"expected {count} comma-separated expressions, got {len(parts)}")
    return [parse_elem(t, args.ell) for t in parts]


def _params(args):
    from .dioph import Params, fix_ab

    if args.params:
        with open(args.params) as fh:
            params = Params.from_json(json.load(fh))
        if params.ell != args.ell:
            raise CliError(f"params file is for ell={params.ell}, not {args.ell}")
        return params
    return fix_ab(args.ell, args.seed, args.search_bound)


def _mu_json(place, mu):
    return {"place": place.label, "value_exp": mu.exponent}


# Commands.  Each returns (payload, exit code).

def cmd_symbol(args):
    from .symbols import all_symbols, hilbert_symbol

    a, b = _elem(args, args.a), _elem(args, args.b)
    if args.place:
        place = parse_place(args.place, args.ell)
        return _mu_json(place, hilbert_symbol(a, b, place, args.n)), 0
    syms = all_symbols(a, b, args.ell, args.n)
    return {"symbols": [_mu_json(P, m) for P, m in syms.items() if not m.is_trivial]}, 0


def cmd_is_norm(args):
    from .certificates import is_norm_squarefree
    from .norms import is_norm, norm_solve

    x, y = _elem(args, args.x), _elem(args, args.y)
    n = args.n or args.ell
    if n == args.ell or (args.ell == 3 and n == 2):
        verdict = is_norm(x, y, n, args.ell)
    else:
        verdict = is_norm_squarefree(x, y, n, args.ell)
    out = verdict.to_json()
    if args.solve:
        if n != args.ell:
            raise CliError("--solve supports n = ell only")
        t = norm_solve(x, y, args.height_bound, n, args.ell)
        out["solution"] = None if t is None else [format_elem(c) for c in t]
    return out, 0 if verdict.is_norm else 1


def cmd_delta(args):
    from .norms import delta

    places = delta(_elem(args, args.a), _elem(args, args.b), args.n, args.ell)
    return {"delta": [P.label for P in places]}, 0


def cmd_power_residue(args):
    from .places import power_residue_symbol

    place = parse_place(args.place, args.ell)
    return _mu_json(place, power_residue_symbol(_elem(args, args.a), place, args.n)), 0


def cmd_classify(args):
    from .dioph import classify

    return classify(_elem(args, args.x), _params(args)).to_json(), 0


def cmd_member(args):
    from .dioph import SetQuery, member

    q = SetQuery(
        args.set,
        a=_elem(args, args.a) if args.a else None,
        b=_elem(args, args.b) if args.b else None,
        c=_elem(args, args.c) if args.c else None,
        p=_elem(args, args.p) if args.p else None,
        q=_elem(args, args.q) if args.q else None,
        ij=tuple(int(v) for v in args.ij.split(",")) if args.ij else None,
        place=parse_place(args.place, args.ell) if args.place else None,
    )
    needs_params = args.set not in ("P", "T", "Tstar_Kl", "I", "J") or not (args.a and args.b)
    params = _params(args) if needs_params else None
    result = member(q, _elem(args, args.x), params)
    return {"set": args.set, "member": result}, 0 if result else 1


def cmd_certificate(args):
    from .certificates import build_certificate, certificate_from_json, verify_reason
    from .dioph import Params

    if args.action == "build":
        if not (args.x and args.y):
            raise CliError("certificate build needs --x and --y")
        params = _params(args)
        x, y = _elem(args, args.x), _elem(args, args.y)
        try:
            cert = build_certificate(x, y, params, args.search_bound)
        except IsANorm:
            return {"x": format_elem(x), "y": format_elem(y), "certificate": None,
                    "is_norm": True}, 1
        return {"x": format_elem(x), "y": format_elem(y), "params": params.to_json(),
                "certificate": cert.to_json()}, 0
    if not args.cert:
        raise CliError("certificate verify needs --cert")
    with open(args.cert) as fh:
        doc = json.load(fh)
    params = Params.from_json(doc["params"]) if "params" in doc else _params(args)
    ell = params.ell
    x = parse_elem(args.x or doc["x"], ell)
    y = parse_elem(args.y or doc["y"], ell)
    if doc.get("certificate") is None:
        raise CliError("the file holds no certificate")
    cert = certificate_from_json(doc["certificate"], ell)
    ok, reason = verify_reason(x, y, cert, params)
    return {"valid": ok, "reason": reason}, 0 if ok else 1


def cmd_norm_form(args):
    from .norms import norm_form_coeffs, norm_form_represents

    y = _elem(args, args.y)
    n = args.ell
    if args.basis:
        flat = _elems(args, args.basis, n * n)
        B = [flat[i * n:(i + 1) * n] for i in range(n)]
    else:
        B = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    coeffs = norm_form_coeffs(y, B, args.ell)
    out = {"monomials": [list(m) for m in coeffs.monomials], "coeffs": coeffs.to_json()}
    if args.represents:
        out["represents"] = norm_form_represents(coeffs, _elem(args, args.represents))
        return out, 0 if out["represents"] else 1
    return out, 0


def cmd_algebra(args):
    from .algebra import AlgebraElem, AlgebraParams, reduced_norm, reduced_trace

    params = AlgebraParams.of(_elem(args, args.a), _elem(args, args.b), args.ell)
    u = AlgebraElem.from_entries(params, _elems(args, args.elem, args.ell ** 2))
    return {"nrd": format_elem(reduced_norm(u)), "trd": format_elem(reduced_trace(u))}, 0


def cmd_fixab(args):
    from .dioph import fix_ab

    return fix_ab(args.ell, args.seed, args.search_bound).to_json(), 0


def cmd_nonpower_witness(args):
    from .certificates import build_certificate, nonpower_witness

    params = _params(args)
    x = _elem(args, args.x)
    y = nonpower_witness(x, params, args.search_bound)
    cert = build_certificate(x, y, params, args.search_bound)
    return {"x": format_elem(x), "y": format_elem(y), "params": params.to_json(),
            "certificate": cert.to_json()}, 0


def cmd_selftest(args):
    from .selftest import run_all

    only = [int(v) for v in args.only.split(",")] if args.only else None
    outcomes = run_all(quick=args.quick, only=only)
    rows = [{"criterion": o.number, "title": o.title, "ok": o.ok, "detail": o.detail}
            for o in outcomes]
    ok = all(o.ok for o in outcomes)
    return {"ok": ok, "criteria": rows}, 0 if ok else 1


COMMANDS = {
    "symbol": cmd_symbol,
    "is-norm": cmd_is_norm,
    "delta": cmd_delta,
    "power-residue": cmd_power_residue,
    "classify": cmd_classify,
    "member": cmd_member,
    "certificate": cmd_certificate,
    "norm-form": cmd_norm_form,
    "algebra": cmd_algebra,
    "fixab": cmd_fixab,
    "nonpower-witness": cmd_nonpower_witness,
    "selftest": cmd_selftest,
}


def _env_int(name, default):
    value = os.environ.get(name)
    return int(value) if value else default


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--ell", type=int, choices=(2, 3), default=3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--height-bound", type=int,
                        default=_env_int("CYCNORM_HEIGHT_BOUND", 3))
    common.add_argument("--search-bound", type=int,
                        default=_env_int("CYCNORM_SEARCH_BOUND", 100_000))
    common.add_argument("--params", help="Params JSON file (default: fixab with --seed)")
    common.add_argument("--pretty", action="store_true", help="indented JSON")

    parser = _Parser(prog="cycnorm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cycnorm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("symbol", "Hilbert symbols (a, b) at one place or all nontrivial places")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--place")
    p.add_argument("--n", type=int)

    p = add("is-norm", "Hasse test: is x a norm from K(y^(1/n))?")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--n", type=int, help="degree; square-free composites use the per-prime test")
    p.add_argument("--solve", action="store_true", help="also search for t up to --height-bound")

    p = add("delta", "places where (a, b) is nontrivial")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--n", type=int)

    p = add("power-residue", "power residue symbol of a at a finite place")
    p.add_argument("--a", required=True)
    p.add_argument("--place", required=True)
    p.add_argument("--n", type=int)

    p = add("classify", "primes of P(x) by Frobenius class")
    p.add_argument("--x", required=True)

    p = add("member", "membership in one of the diophantine sets")
    p.add_argument("--set", required=True)
    p.add_argument("--x", required=True)
    for name in ("a", "b", "c", "p", "q", "ij", "place"):
        p.add_argument(f"--{name}")

    p = add("certificate", "build or verify a non-norm certificate")
    p.add_argument("action", choices=("build", "verify"))
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--cert", help="JSON file written by 'certificate build'")

    p = add("norm-form", "coefficients of the norm form for basis rows over y^(j/l)")
    p.add_argument("--y", required=True)
    p.add_argument("--basis", help="l*l comma-separated expressions, row-major (default identity)")
    p.add_argument("--represents", help="also decide whether the form takes this value")

    p = add("algebra", "reduced norm and trace in the cyclic algebra (a, b)")
    p.add_argument("action", choices=("nrd",))
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--elem", required=True, help="l*l comma-separated coefficients of T^i S^j")

    add("fixab", "the parameters (a, b, modulus) for --seed")

    p = add("nonpower-witness", "y such that x is not a norm from K(y^(1/l)), with certificate")
    p.add_argument("--x", required=True)

    p = add("selftest", "run the acceptance suites")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _dump(obj, pretty: bool) -> str:
    if pretty:
        return json.dumps(obj, indent=2, ensure_ascii=False)
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    pretty = "--pretty" in argv
    try:
        args = build_parser().parse_args(argv)
        payload, code = COMMANDS[args.command](args)
    except (CliError, CycNormError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        err = {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}
        print(_dump(err, pretty), file=sys.stderr)
        return 2
    print(_dump({"schema": SCHEMA, "command": args.command, "ell": args.ell, **payload}, pretty))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
