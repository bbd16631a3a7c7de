"""Command-line interface.

Every subcommand prints ``key value`` lines.  Exit status: 0 when the claim
was proved (finite bound, verified certificate), 2 for a sound refusal
(infinite bound, refused certificate), 1 for usage and input errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import certificates, equicut, formats, probgen
from .bounds import ConicProblem, lower_bound, upper_bound
from .cones import ConeSpec
from .errors import ParseError, ShapeError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REFUSED = 2


def _load_problem(path: str, fmt: str) -> ConicProblem:
    if fmt == "sdpa" or (fmt == "auto" and path.endswith((".dat-s", ".sdpa"))):
        return formats.read_sdpa(path)
    return formats.read_problem(path)


def _load_solution(path: str | None, p: ConicProblem) -> formats.SolutionBundle:
    if path is None:
        return formats.SolutionBundle()
    return formats.read_solution(path, p.spec, p.m)


def _emit(items) -> None:
    sys.stdout.write(formats.format_report(items))


def cmd_lower(args) -> int:
    p = _load_problem(args.problem, args.format)
    sol = _load_solution(args.dual_approx, p)
    if sol.y is None:
        raise ShapeError(f"{args.dual_approx}: no 'y' section")
    xbar = _load_solution(args.xbar, p).xbar if args.xbar else sol.xbar
    rep = lower_bound(p, sol.y, xbar)
    _emit(formats.bound_items(rep, p))
    return EXIT_OK if rep.finite else EXIT_REFUSED


def cmd_upper(args) -> int:
    p = _load_problem(args.problem, args.format)
    sol = _load_solution(args.primal_approx, p)
    if sol.x is None:
        raise ShapeError(f"{args.primal_approx}: no 'x' section")
    ybar = _load_solution(args.ybar, p).ybar if args.ybar else sol.ybar
    rep = upper_bound(p, sol.x, ybar)
    _emit(formats.bound_items(rep, p))
    return EXIT_OK if rep.finite else EXIT_REFUSED


def _certify(args, kind: str) -> int:
    p = _load_problem(args.problem, args.format)
    sol = _load_solution(args.ray, p)
    ray = sol.y if kind == certificates.PRIMAL else sol.x
    if ray is None:
        section = "y" if kind == certificates.PRIMAL else "x"
        raise ShapeError(f"{args.ray}: no '{section}' section")
    check = (certificates.check_primal_infeasible if kind == certificates.PRIMAL
             else certificates.check_dual_infeasible)
    cert = check(p, ray)
    if cert is None:
        _emit([("kind", kind), ("status", "refused"),
               ("reason", certificates.refusal_reason(p, kind, ray))])
        return EXIT_REFUSED
    items = [("kind", kind), ("status", "certified")]
    items += sorted(cert.checks.items())
    items += [("witness_lo", [formats.format_value(v) for v in cert.witness.lo]),
              ("witness_hi", [formats.format_value(v) for v in cert.witness.hi])]
    _emit(items)
    if args.out:
        Path(args.out).write_text(formats.write_certificate(cert))
    return EXIT_OK


def cmd_certify_primal(args) -> int:
    return _certify(args, certificates.PRIMAL)


def cmd_certify_dual(args) -> int:
    return _certify(args, certificates.DUAL)


def cmd_check(args) -> int:
    p = _load_problem(args.problem, args.format)
    path = Path(args.certificate)
    cert = formats.parse_certificate(path.read_text(), str(path))
    ok = certificates.recheck(p, cert)
    _emit([("kind", cert.kind), ("status", "verified" if ok else "rejected")])
    return EXIT_OK if ok else EXIT_REFUSED


def cmd_equicut(args) -> int:
    g = formats.read_graph(args.graph)
    n = g.n
    if args.dual_approx:
        y = formats.read_solution(args.dual_approx, ConeSpec(sdp_orders=(n,)), n + 1).y
        if y is None:
            raise ShapeError(f"{args.dual_approx}: no 'y' section")
        source = "file"
    else:
        y = np.zeros(n + 1)
        source = "zero"
    lower = equicut.rigorous_lower(g, y)
    if n <= args.brute_force_limit and g.is_point:
        _, part = equicut.brute_force(g)
        method = "brute_force"
    else:
        part = equicut.heuristic_partition(g)
        method = "heuristic"
    upper = equicut.cut_value(g, part)
    _emit([("n", n), ("dual_source", source), ("lower_bound", lower),
           ("lower_bound_hex", formats.format_value(lower)), ("upper_bound", upper),
           ("upper_bound_hex", formats.format_value(upper)), ("partition_method", method),
           ("partition", [int(v) for v in part.x]), ("mu", equicut.accuracy_mu(upper, lower))])
    return EXIT_OK


_GENERATORS = {
    "optimal": probgen.gen_optimal,
    "primal-infeasible": probgen.gen_primal_infeasible,
    "dual-infeasible": probgen.gen_dual_infeasible,
}


def cmd_gen(args) -> int:
    spec = ConeSpec.parse(args.spec)
    inst = _GENERATORS[args.kind](spec, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    p = inst.problem
    (out / "problem.conic").write_text(formats.write_problem(p))
    meta = [("status", inst.status), ("spec", str(spec)), ("seed", args.seed), ("m", p.m)]
    if inst.status == probgen.OPTIMAL:
        x = probgen.perturb(inst.x_star, args.perturb, args.seed)
        y = probgen.perturb(inst.y_star, args.perturb, args.seed + 1)
        sol = formats.SolutionBundle(x, y, inst.xbar(args.cap_factor), inst.ybar(args.cap_factor))
        meta += [("f_star", inst.f_star), ("f_star_hex", formats.format_value(inst.f_star))]
    elif inst.status == probgen.PRIMAL_INFEASIBLE:
        sol = formats.SolutionBundle(y=inst.witness)
    else:
        sol = formats.SolutionBundle(x=inst.witness)
    (out / "solution.sol").write_text(formats.write_solution(spec, sol))
    (out / "meta.txt").write_text(formats.format_report(meta))
    _emit(meta + [("out", str(out))])
    return EXIT_OK


def _add_problem(sp) -> None:
    sp.add_argument("--problem", required=True, help="problem file (native or SDPA .dat-s)")
    sp.add_argument("--format", choices=("auto", "native", "sdpa"), default="auto",
                    help="problem file format (default: by extension)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="certicone",
                                 description="Rigorous bounds and infeasibility certificates for conic programs.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log refusals and diagnostics to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("lower", help="rigorous lower bound from an approximate dual point")
    _add_problem(sp)
    sp.add_argument("--dual-approx", required=True, help="solution file with a 'y' section")
    sp.add_argument("--xbar", help="solution file with an 'xbar' section (default: the dual file's)")
    sp.set_defaults(func=cmd_lower)

    sp = sub.add_parser("upper", help="rigorous upper bound from an approximate primal point")
    _add_problem(sp)
    sp.add_argument("--primal-approx", required=True, help="solution file with an 'x' section")
    sp.add_argument("--ybar", help="solution file with a 'ybar' section (default: the primal file's)")
    sp.set_defaults(func=cmd_upper)

    for name, func, section in (("certify-primal", cmd_certify_primal, "y"),
                                ("certify-dual", cmd_certify_dual, "x")):
        sp = sub.add_parser(name, help=f"verify a {name.split('-')[1]} infeasibility ray")
        _add_problem(sp)
        sp.add_argument("--ray", required=True, help=f"solution file with a '{section}' section")
        sp.add_argument("--out", help="write the certificate here")
        sp.set_defaults(func=func)

    sp = sub.add_parser("check", help="re-verify a serialized certificate")
    _add_problem(sp)
    sp.add_argument("--certificate", required=True)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("equicut", help="bounds for the minimum equicut of a graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--dual-approx", help="solution file with 'y' of length n+1 (default: zeros)")
    sp.add_argument("--brute-force-limit", type=int, default=16,
                    help="enumerate partitions up to this many vertices (max 20)")
    sp.set_defaults(func=cmd_equicut)

    sp = sub.add_parser("gen", help="write a generated instance with known answer")
    sp.add_argument("--spec", required=True, help='cone spec, e.g. "sdp 3 | soc 4 | lin 5"')
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--kind", choices=sorted(_GENERATORS), default="optimal")
    sp.add_argument("--perturb", type=float, default=0.0, help="noise added to x*, y*")
    sp.add_argument("--cap-factor", type=float, default=10.0, help="xbar/ybar as multiples of the truth")
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "brute_force_limit", 0) > equicut.MAX_BRUTE_FORCE:
        ap.error(f"--brute-force-limit cannot exceed {equicut.MAX_BRUTE_FORCE}")
    # single-threaded BLAS keeps every reduction order, hence every bit, fixed
    with threadpool_limits(limits=1):
        try:
            return args.func(args)
        except (ParseError, ShapeError, ValueError, OSError) as exc:
            print(f"certicone: error: {exc}", file=sys.stderr)
            return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
