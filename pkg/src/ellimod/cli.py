"""Command-line front end: ``ellimod <command> [flags]``.

Every command prints one JSON object ``{"input", "result", "provenance"}``
with sorted keys. Exit status: 0 on success, 2 when the library rejects the
input (the error code is reported under ``"error"``), 1 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Callable

from . import bundles, elltorus, moduli, rootsys, spectral, verify
from .bundles import BundleDecomp
from .errors import EllimodError, ParseError

PROVENANCE = {
    "weights": "weighted projective moduli: (1, comarks of the highest coroot)",
    "casimir": "Casimir weights d_i = m_i + 1 from Coxeter-element eigenvalues",
    "strata": "isotropy strata: number of weights divisible by d",
    "canon": "W-orbit lex-min representative of a point of E (x) coroot lattice",
    "regular": "regularity: no root vanishes on mu; h0(ad) = r + #vanishing roots",
    "adjoint": "split adjoint line summands and regular adjoint unipotent blocks",
    "classify-sl": "SL(n) regular bundles: pairwise distinct twists",
    "classify-sp": "Sp(2n) regular bundle shape",
    "classify-so": "SO(m) regular bundle shape with spin liftability",
    "from-mu": "regular representative from the epsilon-coordinate lift of mu",
    "parabolic": "marked Dynkin node and unipotent radical levels",
    "family": "line-bundle exponents and C* weights of the parabolic family",
    "np": "order of the central subgroup for descent of the universal bundle",
    "spectral": "spectral cover fiber as a divisor on E",
    "cover-index": "spectral cover degree = |W . v| (orbit enumeration)",
    "verify": "invariant suites against independent oracles",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2; usage errors exit 1 here
        raise UsageError(message)


# --- helpers ---------------------------------------------------------------

def _group(args) -> rootsys.RootSystem:
    if not args.group:
        raise UsageError("--group is required")
    return rootsys.parse_group(args.group)


def _mu(args, system) -> elltorus.ELambdaPoint:
    if args.mu is None:
        raise UsageError("--mu is required")
    return elltorus.parse_mu(system, args.mu)


def _bundle(args) -> BundleDecomp:
    if args.bundle_file:
        with open(args.bundle_file) as fh:
            text = fh.read()
    elif args.bundle:
        text = args.bundle
    else:
        raise UsageError("--bundle or --bundle-file is required")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bundle is not valid JSON: {exc}") from None
    return BundleDecomp.from_json(data)


def _shape_json(shape: bundles.AdjointShape) -> dict:
    out = {"unipotent_blocks": list(shape.unipotent_blocks)}
    if shape.line_summands:
        out["line_summands"] = [p.to_strings() for p in shape.line_summands]
    return out


# --- commands --------------------------------------------------------------

def cmd_weights(args) -> dict:
    system = _group(args)
    return {"weights": list(rootsys.wp_weights(system))}


def cmd_casimir(args) -> dict:
    system = _group(args)
    return {"casimir_weights": list(rootsys.casimir_weights(system)), "exponents": list(system.exponents),
            "weyl_order": system.weyl_order, "dim": system.dim}


def cmd_strata(args) -> dict:
    system = _group(args)
    weights = rootsys.wp_weights(system)
    ds = [args.d] if args.d is not None else list(range(2, max(weights) + 1))
    return {"strata": [{"d": d, "dim": moduli.stratum_dim(system, d)} for d in ds]}


def cmd_canon(args) -> dict:
    system = _group(args)
    mu = _mu(args, system)
    out: dict = {}
    if args.compare is not None:
        nu = elltorus.parse_mu(system, args.compare)
        out["equal"] = elltorus.orbit_equal(mu, nu, heuristic=args.skip_canon)
        out["heuristic"] = bool(args.skip_canon)
        if args.skip_canon:
            return out
    elif args.skip_canon:
        out["fingerprint"] = [p.to_strings() for p in elltorus.fingerprint(mu)]
        out["heuristic"] = True
        return out
    form = elltorus.canonicalize(mu)
    out["representative"] = elltorus.format_mu(form.representative)
    out["stabilizer_order"] = form.stabilizer_order
    return out


def cmd_regular(args) -> dict:
    system = _group(args)
    mu = _mu(args, system)
    return {"is_regular": elltorus.is_regular_class(mu), "aut_dim_split": elltorus.aut_dim_split(mu),
            "vanishing_roots": [list(b) for b in elltorus.vanishing_roots(mu)]}


def cmd_adjoint(args) -> dict:
    system = _group(args)
    mu = _mu(args, system)
    return {"split": _shape_json(bundles.split_adjoint(mu)),
            "regular": _shape_json(bundles.regular_adjoint_blocks(mu))}


def cmd_classify_sl(args) -> dict:
    return bundles.sl_classify(_bundle(args))


def cmd_classify_sp(args) -> dict:
    return {"valid": True, "n": bundles.sp_validate(_bundle(args))}


def cmd_classify_so(args) -> dict:
    return {"valid": True, "n": bundles.so_validate(_bundle(args))}


def cmd_from_mu(args) -> dict:
    system = _group(args)
    mu = _mu(args, system)
    if system.kind == "A":
        return bundles.sl_class_from_mu(mu).to_json()
    return bundles.sp_class_from_mu(mu).to_json()


def cmd_parabolic(args) -> dict:
    data = moduli.parabolic_data(_group(args), args.d)
    return {"marked_node": data.marked_node, "rule": data.rule,
            "level_counts": {str(k): v for k, v in data.level_counts.items()},
            "levi": [f"{k}{n}" for k, n in data.levi], "unipotent_dim": data.unipotent_dim}


def cmd_family(args) -> dict:
    table = moduli.family_table(_group(args))
    return {"rows": [{"weight": g, "exponent": d} for g, d in table.rows]}


def cmd_np(args) -> dict:
    return {"n_P": moduli.n_P(_group(args), args.d)}


def cmd_spectral(args) -> dict:
    v = _bundle(args)
    fiber = spectral.sp_spectral_fiber(v) if v.group == "Sp" else spectral.sl_spectral_fiber(v)
    return fiber.to_json()


def cmd_cover_index(args) -> dict:
    system = _group(args)
    if args.vector:
        try:
            vec = tuple(Fraction(x) for x in args.vector.split(","))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed vector {args.vector!r}") from None
    else:
        vec = spectral.standard_cover_vector(system)
    return {"vector": [str(x) for x in vec], "index": spectral.cover_index(system, vec)}


COMMANDS: dict[str, Callable] = {
    "weights": cmd_weights, "casimir": cmd_casimir, "strata": cmd_strata, "canon": cmd_canon,
    "regular": cmd_regular, "adjoint": cmd_adjoint, "classify-sl": cmd_classify_sl,
    "classify-sp": cmd_classify_sp, "classify-so": cmd_classify_so, "from-mu": cmd_from_mu,
    "parabolic": cmd_parabolic, "family": cmd_family, "np": cmd_np, "spectral": cmd_spectral,
    "cover-index": cmd_cover_index,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ellimod", description="Moduli data of semistable G-bundles on an elliptic curve.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in list(COMMANDS) + ["verify"]:
        p = sub.add_parser(name, help=PROVENANCE[name])
        p.add_argument("--markdown", action="store_true", help="render a human-readable table instead of JSON")
        p.add_argument("--seed", type=int, default=0)
        if name == "verify":
            p.add_argument("--samples", type=int, default=1000)
            p.add_argument("--only", type=int, action="append", help="run only this criterion (repeatable)")
            continue
        if name.startswith("classify") or name == "spectral":
            p.add_argument("--bundle", help="bundle decomposition as JSON")
            p.add_argument("--bundle-file", help="file holding the bundle JSON")
            continue
        p.add_argument("--group", help="type and rank, e.g. E8")
        if name in ("canon", "regular", "adjoint", "from-mu"):
            p.add_argument("--mu", help='coordinates "a/b,c/d;..." over the simple coroots')
        if name in ("strata", "parabolic", "np"):
            p.add_argument("--d", type=int)
        if name == "canon":
            p.add_argument("--compare", help="second point; report orbit equality")
            p.add_argument("--skip-canon", action="store_true",
                           help="fingerprint comparison only (marked heuristic)")
        if name == "cover-index":
            p.add_argument("--vector", help="comma separated coroot coordinates")
    return parser


# --- output ----------------------------------------------------------------

def _cell(x) -> str:
    if isinstance(x, list) and all(isinstance(y, str) for y in x):
        return ",".join(x)
    return json.dumps(x) if isinstance(x, (list, dict)) else str(x)


def to_markdown(payload: dict) -> str:
    lines = [f"**{payload['command']}** ({payload['provenance']})", ""]
    result = payload.get("result", payload.get("error", {}))
    rows = next((v for v in result.values() if isinstance(v, list) and v and isinstance(v[0], dict)), None)
    if rows is not None:
        keys = list(rows[0])
        lines.append("| " + " | ".join(keys) + " |")
        lines.append("|" + "---|" * len(keys))
        lines += ["| " + " | ".join(_cell(r[k]) for k in keys) + " |" for r in rows]
    else:
        lines += ["| key | value |", "|---|---|"]
        lines += [f"| {k} | {_cell(v)} |" for k, v in sorted(result.items())]
    return "\n".join(lines)


def _emit(payload: dict, markdown: bool) -> None:
    if markdown:
        print(to_markdown(payload))
    else:
        print(json.dumps(payload, sort_keys=True))


def _run_verify(args) -> int:
    results = verify.run_all(samples=args.samples, seed=args.seed, only=args.only)
    for r in results:
        print(r.line(), file=sys.stderr if not args.markdown else sys.stdout)
    ok = all(r.passed for r in results)
    payload = {"command": "verify", "input": {"samples": args.samples, "seed": args.seed, "only": args.only},
               "result": {"passed": ok, "criteria": [r.to_json() for r in results]},
               "provenance": PROVENANCE["verify"]}
    _emit(payload, args.markdown)
    return 0 if ok else 2


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        random.seed(args.seed)
        if args.command == "verify":
            return _run_verify(args)
        inputs = {k: v for k, v in vars(args).items() if k not in ("command", "markdown") and v is not None and v is not False}
        if "bundle" in inputs:
            try:
                inputs["bundle"] = json.loads(inputs["bundle"])
            except json.JSONDecodeError:
                pass
        payload = {"command": args.command, "input": inputs, "provenance": PROVENANCE[args.command]}
        try:
            payload["result"] = COMMANDS[args.command](args)
            code = 0
        except EllimodError as exc:
            payload["error"] = exc.as_dict()
            code = 2
        except ValueError as exc:
            payload["error"] = {"code": "invalid_argument", "message": str(exc), "clause": str(exc)}
            code = 2
        _emit(payload, args.markdown)
        return code
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ellimod: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
