"""``syscow`` command line interface.

Exit codes: 0 success, 2 validation error, 3 enumeration budget exceeded.
Exact rationals are printed as ``"p/q"`` strings in JSON output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from ._exact import fraction_str
from .errors import SyscowError, ValidationError


def _load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _emit(payload: Any) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _cmd_bound(args: argparse.Namespace) -> int:
    from .bounds import ManifoldSpec, bounds_for

    kind, *rest = args.manifold
    try:
        params = tuple(int(v) for v in rest)
    except ValueError as exc:
        raise ValidationError(f"manifold parameters must be integers: {rest}") from exc
    spec = ManifoldSpec(kind, params, args.scal)
    results = bounds_for(spec, args.gamma, args.banaszczyk_c)
    if args.json:
        _emit({"manifold": spec.describe(), "kind": kind, "params": list(params),
               "scal_min": fraction_str(spec.scal_min),
               "bounds": {k: v.to_json() for k, v in results.items()}})
        return 0
    print(f"{spec.describe()} with scal >= {spec.scal_min}")
    for name, b in results.items():
        approx = "symbolic" if b.float_value is None else f"~ {b.float_value:.10g}"
        print(f"  {name} <= {b}  ({approx})")
        for line in b.trace.lines() if b.trace else []:
            print(f"      {line}")
    return 0


def _cmd_lattice(args: argparse.Namespace) -> int:
    from .normed_lattice import load_config, successive_minima

    cfg = _load_json(args.config)
    if not isinstance(cfg, dict):
        raise ValidationError("lattice config must be a JSON object")
    lattice, norm = load_config(cfg)
    res = successive_minima(lattice, norm, args.k, args.max_candidates)
    payload = {"values": list(res.values), "witnesses": [list(w) for w in res.witnesses],
               "vectors": [[fraction_str(v) for v in lattice.point(w)] for w in res.witnesses],
               "radius": res.radius, "candidates": res.candidates}
    if args.json:
        _emit(payload)
    else:
        for j, (val, w) in enumerate(zip(res.values, res.witnesses), 1):
            print(f"lambda_{j} = {val:.12g}   coords {list(w)}")
    return 0


def _read_bivector(path: str, variance: str):
    import numpy as np

    from .bivector import Bivector

    data = _load_json(path)
    if isinstance(data, dict):
        variance = data.get("variance", variance)
        if "coeffs" in data:
            data = data["coeffs"]
        elif "terms" in data:
            terms = {(int(i) - 1, int(j) - 1): float(c) for i, j, c in data["terms"]}
            return Bivector.from_terms(int(data["n"]), terms, variance)
    return Bivector(np.array(data, dtype=float), variance)


def _cmd_bivector(args: argparse.Namespace) -> int:
    from .bivector import canonical_form, comass, mass

    variance = "form" if args.op == "comass" else "vector"
    xi = _read_bivector(args.coeffs, variance)
    if args.op == "mass":
        payload: dict[str, Any] = {"mass": mass(xi)}
    elif args.op == "comass":
        payload = {"comass": comass(xi)}
    else:
        dec = canonical_form(xi)
        payload = {"lambdas": list(dec.lambdas),
                   "planes": [[u.tolist(), v.tolist()] for u, v in dec.planes]}
    if args.json:
        _emit(payload)
    else:
        for k, v in payload.items():
            print(f"{k}: {v}")
    return 0


def _cmd_prop_a1(args: argparse.Namespace) -> int:
    from .nonzero_combination import IntegerBasis, brute_force_min_cost, find_combination, v_n

    data = _load_json(args.matrix)
    try:
        basis = IntegerBasis(tuple(tuple(row) for row in data))
    except TypeError as exc:
        raise ValidationError(f"matrix must be a JSON array of integer rows: {exc}") from exc
    comb = find_combination(basis)
    payload: dict[str, Any] = {"n": basis.n, "bound": v_n(basis.n), **comb.to_json()}
    if args.oracle:
        best = brute_force_min_cost(basis, v_n(basis.n))
        payload["oracle"] = None if best is None else {
            "coeffs": list(best.coeffs), "result": list(best.result), "cost": best.cost}
    if args.json:
        _emit(payload)
    else:
        print(f"coeffs {list(comb.coeffs)} -> {list(comb.result)}  cost {comb.cost} <= V_{basis.n} = {v_n(basis.n)}")
        for step in comb.trace:
            print(f"  depth {step['depth']}: kept columns {step['subset']}, "
                  f"repair l={step['l']} c={step['c']}")
        if args.oracle:
            print(f"oracle minimum cost: {payload['oracle']['cost'] if payload['oracle'] else None}")
    return 0


def _cmd_charclass(args: argparse.Namespace) -> int:
    from . import charclass as cc

    vals = args.args
    if args.op == "ahat":
        s = cc.ahat_cp(_one_int(vals))
        payload: dict[str, Any] = {"series": s.to_json(), "text": str(s)}
    elif args.op == "index":
        if len(vals) != 2:
            raise ValidationError("index takes N K")
        n, k = (int(v) for v in vals)
        payload = {"n": n, "k": k, "index": fraction_str(cc.line_index_cp(n, k))}
    elif args.op == "min-twist":
        n = _one_int(vals)
        payload = {"n": n, "twist": cc.minimal_admissible_twist(n)}
    else:
        b = [int(v) for v in vals]
        ok, top = cc.sphere_product_admissible(b)
        payload = {"b": b, "admissible": ok, "top_coefficient": fraction_str(top)}
    if args.json:
        _emit(payload)
    else:
        for k, v in payload.items():
            print(f"{k}: {v}")
    return 0


def _one_int(vals: Sequence[str]) -> int:
    if len(vals) != 1:
        raise ValidationError("expected exactly one integer argument")
    try:
        return int(vals[0])
    except ValueError as exc:
        raise ValidationError(f"not an integer: {vals[0]}") from exc


def _cmd_flat(args: argparse.Namespace) -> int:
    from . import flat_model as fm

    if args.op == "torus":
        if not args.gram:
            raise ValidationError("flat torus needs --gram FILE")
        data = _load_json(args.gram)
        gram = data["gram"] if isinstance(data, dict) else data
        res = fm.torus_stable_2_systole(fm.FlatTorusMetric(tuple(map(tuple, gram))))
    else:
        if not args.model:
            raise ValidationError(f"flat {args.op} needs --model FILE")
        model = fm.model_from_json(_load_json(args.model))
        res = (fm.product_model_stsys(model) if args.op == "product"
               else fm.spherical_restricted_systole(model))
    if args.json:
        _emit(res.to_json())
    else:
        print(f"{args.op} systole = {res.value:.12g} ({res.kind} class)")
        print(f"witness: {res.witness.to_json()}")
    return 0


def _cmd_gamma(args: argparse.Namespace) -> int:
    from .normed_lattice import gamma_lower_bound_search

    res = gamma_lower_bound_search(args.dim, args.trials, args.seed)
    payload = {"dim": args.dim, "trials": args.trials, "seed": args.seed, **res.to_json()}
    if args.json:
        _emit(payload)
    else:
        print(f"best lambda_1 * lambda_b* = {res.value:.12g} (trial {res.trial})")
    return 0


def _cmd_asymptotic(args: argparse.Namespace) -> int:
    from .bounds import asymptotic_check_s2_power

    rows = asymptotic_check_s2_power(args.n_max, args.banaszczyk_c)
    payload = [{"n": r.n, "v_n": r.v_n, "gamma": r.gamma, "bound": r.bound,
                "envelope": r.envelope, "ok": r.ok} for r in rows]
    if args.json:
        _emit(payload)
    else:
        print(f"{'n':>4} {'V_n':>6} {'Gamma_n':>10} {'bound':>14} {'K n^4 log n':>14}")
        for r in rows:
            print(f"{r.n:>4} {r.v_n:>6} {r.gamma:>10.4f} {r.bound:>14.6g} {r.envelope:>14.6g}"
                  f"{'' if r.ok else '  VIOLATED'}")
    return 0 if all(r.ok for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    from .bounds import DEFAULT_BANASZCZYK_C

    parser = argparse.ArgumentParser(
        prog="syscow",
        description="Stable 2-systole bounds in positive scalar curvature, and their ingredients.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("bound", "stable 2-systole / volume bounds for a manifold family")
    p.add_argument("--manifold", nargs="+", required=True, metavar="KIND",
                   help="s2xs2 | s2pow N | s2tor M N | cp3 | cpodd N | generic B2 DIM")
    p.add_argument("--scal", required=True, help="lower bound on scalar curvature, exact p/q")
    p.add_argument("--gamma", default=None, help="value to use for Gamma_b (p/q)")
    p.add_argument("--banaszczyk-c", type=float, default=None,
                   help="constant C in Gamma_b <= C b log b (reported, never asserted)")
    p.set_defaults(func=_cmd_bound)

    p = add("lattice-minima", "successive minima of a lattice in a normed space")
    p.add_argument("--config", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--max-candidates", type=int, default=10**8)
    p.set_defaults(func=_cmd_lattice)

    p = add("bivector", "mass, comass or canonical form of a bivector")
    p.add_argument("op", choices=["mass", "comass", "canonical"])
    p.add_argument("--coeffs", required=True)
    p.set_defaults(func=_cmd_bivector)

    p = add("prop-a1", "integer combination with all coordinates nonzero")
    p.add_argument("--matrix", required=True)
    p.add_argument("--oracle", action="store_true", help="also run the exhaustive search")
    p.set_defaults(func=_cmd_prop_a1)

    p = add("charclass", "A-hat series, twisted indices, sphere-product admissibility")
    p.add_argument("op", choices=["ahat", "index", "min-twist", "sphere-product"])
    p.add_argument("args", nargs="+")
    p.set_defaults(func=_cmd_charclass)

    p = add("flat", "stable 2-systoles of flat and product models")
    p.add_argument("op", choices=["torus", "product", "spherical"])
    p.add_argument("--gram")
    p.add_argument("--model")
    p.set_defaults(func=_cmd_flat)

    p = add("gamma-search", "random search for large transference products")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_gamma)

    p = add("asymptotic", "tabulate the (S^2)^n bounds against K n^4 log n")
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--banaszczyk-c", type=float, default=DEFAULT_BANASZCZYK_C)
    p.set_defaults(func=_cmd_asymptotic)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SyscowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
