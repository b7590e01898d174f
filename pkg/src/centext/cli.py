"""
Command-line front end.

Exit codes: 0 success, 1 mathematical failure (invalid cocycle, failed
property), 2 usage or parse error.  Reports are JSON on stdout or --out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, checks, serialize
from .abelian import AbelianGroup
from .cocycle import cohomologous, is_bilinear, validate_cocycle, bilinearity_violation
from .cohomology import h2_bil, z2_b2_h2
from .embedding import embed
from .errors import CapacityError, InvalidInputError, VerificationError
from .twisted import ExtensionGroup, is_twisted_product_class, structure_report

OK, FAILURE, USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _read_json(path: str):
    p = Path(path)
    if not p.is_file():
        raise InvalidInputError(f"no such file: {path}")
    return serialize.loads(p.read_text())


def _emit(report: dict, out):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _group_of(text: str) -> AbelianGroup:
    return serialize.parse_group(text)


# -- commands ---------------------------------------------------------------


def cmd_validate(args) -> tuple:
    gamma = serialize.cocycle_from_json(_read_json(args.cocycle))
    rep = validate_cocycle(gamma)
    report = {
        "valid": rep.ok,
        "normalized": rep.normalized,
        "cocycle_identity": rep.cocycle_identity,
    }
    if not rep.ok:
        report["axiom"] = rep.axiom
        report["violation"] = [list(x) for x in rep.violation]
    else:
        beta = is_bilinear(gamma)
        report["bilinear"] = beta is not None
        if beta is None:
            v = bilinearity_violation(gamma)
            report["bilinearity_violation"] = [v[0]] + [list(x) for x in v[1:]]
    return report, OK if rep.ok else FAILURE


def cmd_h2(args) -> tuple:
    A, B = _group_of(args.a), _group_of(args.b)
    H = z2_b2_h2(A, B, max_order=args.max_a)
    S = h2_bil(A, B, H)
    report = {
        "a": list(A.factors),
        "b": list(B.factors),
        "h2": list(H.abstract.factors),
        "h2_order": H.order,
        "z2_order": H.z2_order,
        "b2_order": H.b2_order,
        "bilinear_subgroup": list(S.group.factors),
        "representatives": [serialize.cocycle_to_json(r) for r in H.representatives],
    }
    return report, OK


def cmd_cohomologous(args) -> tuple:
    g1 = serialize.cocycle_from_json(_read_json(args.first))
    g2 = serialize.cocycle_from_json(_read_json(args.second))
    for g in (g1, g2):
        rep = validate_cocycle(g)
        if not rep.ok:
            return {"error": f"{rep.axiom} fails at {rep.violation}"}, FAILURE
    h = cohomologous(g1, g2)
    report = {"cohomologous": h is not None}
    if h is not None:
        report["witness"] = h.values.tolist()
    return report, OK


def cmd_twist(args) -> tuple:
    gamma = serialize.load_cocycle_or_bilinear(_read_json(args.cocycle))
    G = ExtensionGroup(gamma, max_order=args.max_group)
    report = {"structure": structure_report(G).as_dict()}
    rep = is_twisted_product_class(G)
    report["twisted_product_class"] = rep is not None
    if rep is not None:
        report["bilinear_representative"] = serialize.bilinear_to_json(rep.delta)
    return report, OK


def cmd_embed(args) -> tuple:
    gamma = serialize.load_cocycle_or_bilinear(_read_json(args.cocycle))
    E = embed(ExtensionGroup(gamma, max_order=args.max_group))
    return serialize.embedding_to_json(E), OK


def _example_carry(p: int) -> dict:
    gamma = catalog.cyclic_carry(p)
    G = ExtensionGroup(gamma)
    v = bilinearity_violation(gamma)
    st = structure_report(G)
    return {
        "valid": validate_cocycle(gamma).ok,
        "bilinear": is_bilinear(gamma) is not None,
        "bilinearity_violation": [v[0]] + [list(x) for x in v[1:]] if v else None,
        "twisted_product_class": is_twisted_product_class(G) is not None,
        "group": st.as_dict(),
    }


def _example_commutator_power(p: int) -> dict:
    gamma = catalog.commutator_power_cocycle(p)
    G = ExtensionGroup(gamma)
    st = structure_report(G)
    E = embed(G)
    gens = AbelianGroup((p, p, p)).generators()
    return {
        "valid": validate_cocycle(gamma).ok,
        "group": st.as_dict(),
        "twisted_product_class": is_twisted_product_class(G) is not None,
        "f": {name: str(E.f_of(G.ell(g))) for name, g in zip("xyz", gens)},
        "beta_tilde": [[str(v) for v in row] for row in E.beta_tilde.entries],
        "image_of_f": list(E.image_of_f.factors),
        "checks": E.checks,
    }


def _example_carry_embedding(p: int) -> dict:
    G = ExtensionGroup(catalog.cyclic_carry(p))
    E = embed(G)
    a, l = E.phi(G.ell((1,)))
    return {
        "phi_of_generator": [list(a), str(l)],
        "beta_tilde_zero": E.beta_tilde.is_zero(),
        "target_abelian": E.target_is_abelian(),
        "h": [str(v) for v in E.h],
        "checks": E.checks,
    }


_EXAMPLES = {
    "carry": _example_carry,
    "commutator-power": _example_commutator_power,
    "carry-embedding": _example_carry_embedding,
}


def cmd_examples(args) -> tuple:
    if args.p < 2:
        raise InvalidInputError("--p must be at least 2")
    names = list(_EXAMPLES) if args.which == "all" else [catalog.EXAMPLES[args.which]]
    report = {"p": args.p}
    for name in names:
        report[name] = _EXAMPLES[name](args.p)
    ok = all(all(r.get("checks", {}).values()) and r.get("valid", True)
             for k, r in report.items() if k != "p")
    return report, OK if ok else FAILURE


def cmd_check(args) -> tuple:
    results = checks.run_all(args.only)
    report = {
        "passed": sum(r.ok for r in results),
        "failed": sum(not r.ok for r in results),
        "results": [{"name": r.name, "ok": r.ok, "detail": r.detail, "seconds": round(r.seconds, 3)}
                    for r in results],
    }
    if args.verbose:
        for r in results:
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}  ({r.seconds:.2f}s) {r.detail}", file=sys.stderr)
    return report, OK if report["failed"] == 0 else FAILURE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to this file")
    common.add_argument("-v", "--verbose", action="store_true")
    ap = _Parser(prog="centext", description="Central extensions of finite abelian groups.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check normalisation and the cocycle identity")
    p.add_argument("cocycle")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("h2", parents=[common], help="compute H²(A, B) and its bilinear subgroup")
    p.add_argument("--a", required=True, help='moduli of A, e.g. "[2,2]"')
    p.add_argument("--b", required=True, help='moduli of B, e.g. "[3]"')
    p.add_argument("--max-a", type=int, default=None, help="bound on |A| (default 16)")
    p.set_defaults(func=cmd_h2)

    p = sub.add_parser("cohomologous", parents=[common], help="decide whether two cocycles are cohomologous")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_cohomologous)

    for name, fn, text in [("twist", cmd_twist, "structure of the extension group"),
                           ("embed", cmd_embed, "embed the extension into a twisted product")]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("cocycle", help="cocycle or bilinear-map JSON file")
        p.add_argument("--max-group", type=int, default=None, help="bound on |G| (default 4096)")
        p.set_defaults(func=fn)

    p = sub.add_parser("paper-examples", aliases=["examples"], parents=[common], help="reproduce the worked examples")
    p.add_argument("--which", default="all", choices=sorted(catalog.EXAMPLES) + ["all"])
    p.add_argument("--p", type=int, default=3)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("check", parents=[common], help="run the property suite")
    p.add_argument("--only", nargs="*", default=None, help="run only the named checks")
    p.set_defaults(func=cmd_check)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        report, code = args.func(args)
    except (InvalidInputError, CapacityError) as exc:
        print(f"centext: {exc}", file=sys.stderr)
        return USAGE
    except VerificationError as exc:
        print(f"centext: verification failed: {exc}", file=sys.stderr)
        return FAILURE
    _emit(report, args.out)
    return code


def main(argv=None):
    try:
        code = run(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else USAGE
    sys.exit(code)


if __name__ == "__main__":
    main()
