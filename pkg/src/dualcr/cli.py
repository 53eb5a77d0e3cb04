"""Command-line interface: surface validation, frame inspection, operator
application, membership checks, integrals, decomposition, exact jet
interpolation, and the one-shot certification suite.

Exit codes: 0 all verdicts pass, 1 numeric failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import calculus, certify, characterize, config
from .dualframe import get_frame
from .errors import DualCRError
from .expressions import parse, to_string
from .operators import apply_word, parse_word
from .report import Report
from .surfaces import make_surface, random_surface_points, sample_grid


def _parse_grid(text):
    if "x" in text:
        a, b = text.split("x", 1)
        return int(a), int(b)
    n = int(text)
    return n, n


def _add_common(p):
    p.add_argument("--surface", default="sphere")
    p.add_argument("--grid", default="24")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)


def build_parser():
    ap = argparse.ArgumentParser(prog="dualcr")
    sub = ap.add_subparsers(dest="command", required=True)

    for name in ("validate-surface", "frames", "apply", "check", "pairing",
                 "integrate", "decompose", "nirenberg", "certify"):
        p = sub.add_parser(name)
        _add_common(p)
        if name == "frames":
            p.add_argument("--points", type=int, default=10)
        if name in ("check", "integrate", "decompose"):
            p.add_argument("--expr", required=True)
        if name == "apply":
            p.add_argument("--expr", required=True)
            p.add_argument("--word", required=True)
            p.add_argument("--points", type=int, default=5)
        if name == "check":
            p.add_argument("--mode", choices=("local", "global"),
                           default="local")
            p.add_argument("--side", choices=("dual", "plh"), default="dual")
            p.add_argument("--points", type=int, default=50)
        if name == "pairing":
            p.add_argument("--expr", required=True)
            p.add_argument("--expr2", required=True)
        if name == "integrate":
            p.add_argument("--weight", default="dS",
                           choices=("dS", "dS/alpha", "dS/alpha2"))
        if name == "decompose":
            p.add_argument("--side", choices=("dual", "conjugate"),
                           default="dual")
            p.add_argument("--targets", type=int, default=5)
        if name == "nirenberg":
            p.add_argument("--jet", required=True,
                           help="ten comma-separated jet coefficients")
    return ap


def _emit(report: Report, out):
    text = report.to_json()
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    settings = config.load_config(args.config) if args.config else config.Settings()
    if args.seed is not None:
        settings = settings.replace(seed=args.seed)
    try:
        return _dispatch(args, settings)
    except DualCRError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args, settings) -> int:
    cmd = args.command

    if cmd == "certify":
        grid_n, _ = _parse_grid(args.grid)
        report = certify.run_certification(settings, grid_n=grid_n)
        return _emit(report, args.out)

    if cmd == "nirenberg":
        coeffs = [complex(c.replace("i", "j")) for c in args.jet.split(",")]
        if len(coeffs) != 10:
            print("error: --jet needs exactly ten coefficients", file=sys.stderr)
            return 2
        import sympy as sp
        exact = [sp.nsimplify(c.real) + sp.I * sp.nsimplify(c.imag)
                 for c in coeffs]
        P = characterize.nirenberg_polynomial(exact)
        ok = characterize.verify_nirenberg_jet(exact)
        print(str(P))
        return 0 if ok else 1

    surface = make_surface(args.surface)
    report = Report(command=cmd, surface=args.surface, grid=args.grid)

    if cmd == "validate-surface":
        report.add("surface_valid", "defining-function-checks", 0.0, 1.0,
                   verdict=True,
                   min_tangential_eigenvalue=surface.min_tangential_eig)
        return _emit(report.finish(), args.out)

    if cmd == "frames":
        pts = random_surface_points(surface, args.points, settings.seed)
        worst = {}
        for z in pts:
            fr = get_frame(surface, z, settings.jet_order)
            for k, v in fr.residuals.items():
                worst[k] = max(worst.get(k, 0.0), float(v))
        for k, v in sorted(worst.items()):
            report.add(f"frame_{k}", "frame-residual", v, args.tol)
        return _emit(report.finish(), args.out)

    if cmd == "apply":
        expr = parse(args.expr)
        word = parse_word(args.word)
        pts = random_surface_points(surface, args.points, settings.seed)
        rows = []
        for z in pts:
            val = apply_word(word, expr, surface, z, settings.jet_order)
            rows.append({"z": [complex(z[0]), complex(z[1])], "value": val})
        report.add("apply", "word-application",
                   max(abs(r["value"]) for r in rows), float("inf"),
                   verdict=True, values=rows)
        return _emit(report.finish(), args.out)

    if cmd == "check":
        expr = parse(args.expr)
        pts = random_surface_points(surface, args.points, settings.seed)
        if args.side == "dual":
            rep = characterize.is_sum_cr_dualcr(
                expr, surface, pts, mode=args.mode, tol=args.tol,
                order=settings.jet_order, delta_sing=settings.delta_sing)
        else:
            rep = characterize.is_plh_boundary(
                expr, surface, pts, mode=args.mode, tol=args.tol,
                order=settings.jet_order, delta_sing=settings.delta_sing)
        report.add("membership", "third-order-test", rep.max_residual,
                   rep.tolerance, verdict=rep.verdict,
                   excluded_points=rep.excluded_points,
                   words=[".".join(w) for w in rep.words])
        return _emit(report.finish(), args.out)

    grid = sample_grid(surface, *_parse_grid(args.grid))

    if cmd == "pairing":
        val = calculus.pairing(parse(args.expr), parse(args.expr2),
                               surface, grid)
        report.add("pairing", "duality-pairing", abs(val), args.tol,
                   verdict=bool(abs(val) <= args.tol), value=val)
        return _emit(report.finish(), args.out)

    if cmd == "integrate":
        val = calculus.weighted_integral(parse(args.expr), surface, grid,
                                         args.weight)
        report.add("integral", "surface-integral", abs(val), float("inf"),
                   verdict=True, value=val, weight=args.weight)
        return _emit(report.finish(), args.out)

    if cmd == "decompose":
        expr = parse(args.expr)
        rng = np.random.default_rng(settings.seed)
        targets = [np.array([0.2 + 1.1 * rng.random(),
                             np.pi * (2 * rng.random() - 1),
                             np.pi * (2 * rng.random() - 1)])
                   for _ in range(args.targets)]
        base = np.array([0.8, 0.3, -0.5])
        dec = characterize.decompose(expr, surface, targets, base,
                                     side=args.side, settings=settings)
        report.add("decompose", "cr-plus-dual-split",
                   max(dec.residuals.values()), args.tol,
                   verdict=bool(dec.residuals["h_on_g"] <= args.tol),
                   basepoint=list(dec.basepoint),
                   targets=dec.targets, f=dec.f_values, g=dec.g_values)
        return _emit(report.finish(), args.out)

    raise AssertionError(f"unhandled command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
