"""Command-line front end.

Subcommands: inspect (root-system data), zeta (derive formulas and stage
artifacts), eval (numeric evaluation), verify (functional equation, poles,
desk-scale zero verification), oracle (numeric contour residues).

Exit codes: 0 success, 1 verification failure, 2 usage error (argparse),
3 internal assertion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction as Q

from . import pipeline, zerofind
from .normalize import fe_residual, pole_report
from .residue import hyperplanes_for, iterated_residue, numeric_residue_oracle, residue
from .rootsys import build_root_system
from .symexpr import to_display
from .xinum import EvalConfig, Evaluator

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _evaluator(args) -> Evaluator:
    return Evaluator(EvalConfig(precision=args.precision,
                                pole_delta=args.pole_delta))


def _write(outdir: str | None, name: str, text: str) -> None:
    if outdir:
        os.makedirs(outdir, exist_ok=True)
        path = os.path.join(outdir, name)
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    else:
        print(text)


def cmd_inspect(args) -> int:
    rs = pipeline.group_root_system(args.group)
    if args.format == "json":
        _write(args.outdir, f"{rs.name}-rootsys.json", rs.dump())
        return EXIT_OK
    print(f"group {args.group} -> root system {rs.name}")
    print(f"ambient dimension: {rs.ambient_dim}")
    print(f"positive roots: {len(rs.positive_roots)}")
    print(f"simple roots: {[tuple(map(str, r)) for r in rs.simple_roots]}")
    print(f"rho: {tuple(map(str, rs.rho))}")
    print(f"|W| = {len(rs.weyl_elements())}")
    print(f"parabolics: {', '.join(pipeline.parabolic_names(args.group))}")
    return EXIT_OK


def cmd_zeta(args) -> int:
    ev = _evaluator(args)
    res = pipeline.run(args.group, args.parabolic, ev, compare=not args.no_compare)
    stage = {"period": "period", "residue": "post_residue",
             "xi_o": "xi_o", "centered": "centered"}[args.stage]
    expr = res.stages[stage]
    base = f"{res.group}-{res.parabolic}-{args.stage}"
    suffix = {"latex": ".tex", "plain": ".txt", "json": ".json"}[args.format]
    _write(args.outdir, base + suffix, to_display(expr, args.format))
    if args.report:
        report = {
            "normalization": res.record.to_json(),
            "poles": pole_report(res.zeta).to_json(),
            "comparison": res.comparison,
        }
        _write(args.outdir, base + "-report.json", json.dumps(report, indent=1))
    if res.comparison is not None and res.comparison.get("outcome") == "mismatch":
        print("golden comparison MISMATCH", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_eval(args) -> int:
    ev = _evaluator(args)
    res = pipeline.run(args.group, args.parabolic, ev, compare=False)
    re_s, im_s = (float(x) for x in args.s.split(","))
    try:
        val, diag = ev.eval_expr(res.zeta, {"s": complex(re_s, im_s)})
    except Exception as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    out = {"value": [float(val.real), float(val.imag)],
           "near_singular": diag["near_singular"],
           "offending": diag["offending"]}
    print(json.dumps(out, indent=1))
    return EXIT_OK


def cmd_verify(args) -> int:
    ev = _evaluator(args)
    res = pipeline.run(args.group, args.parabolic, ev, compare=False)
    failures = []
    report = {}
    if args.fe:
        resid = fe_residual(res.zeta, Q(1), ev, trials=args.trials, seed=args.seed)
        report["fe_residual"] = resid
        print(f"reflection residual at c=1: {resid:.3e}")
        if resid > 1e-9:
            failures.append("functional equation")
    if args.poles:
        pr = pole_report(res.zeta, ev)
        report["poles"] = pr.to_json()
        print("poles:", ", ".join(f"s={p} (order {o})" for p, o in pr.poles) or "none")
    if args.rh:
        allow = (res.group, res.parabolic) == ("Sp4", "P2e2")
        rep = zerofind.rh_report(res.zeta, t_max=args.tmax, step=args.step,
                                 evaluator=ev,
                                 allow_central_exceptions=allow,
                                 seed=args.seed)
        report["rh"] = rep.to_json()
        n_off = sum(1 for b in rep.boxes if b.verdict == "discrepancy" and not b.flagged)
        print(f"zeros on the line up to {args.tmax}: {len(rep.zeros.zeros)}")
        for b in rep.boxes:
            tag = " [flagged]" if b.flagged else ""
            print(f"  box {b.rect}: winding {b.winding}, poles "
                  f"{sum(o for _, o in b.poles)}, on-line {b.online} -> {b.verdict}{tag}")
        if not rep.consistent:
            failures.append("box certificates")
        if rep.flagged_boxes:
            print("central-box discrepancies flagged (allowed for this zeta)")
    if args.outdir:
        _write(args.outdir, f"{res.group}-{res.parabolic}-verify.json",
               json.dumps(report, indent=1))
    if failures:
        print("verification FAILED: " + ", ".join(failures), file=sys.stderr)
        return EXIT_VERIFY
    print("verification passed")
    return EXIT_OK


def cmd_oracle(args) -> int:
    ev = _evaluator(args)
    rs = pipeline.group_root_system(args.group)
    pd = pipeline.parabolic_descriptor(args.group, args.parabolic)
    from .symexpr import build_period

    period = build_period(rs)
    hypers = hyperplanes_for(rs, pd)
    h = hypers[args.hyperplane]
    import random

    rng = random.Random(args.seed)
    anchor = {}
    for v in sorted(period.variables()):
        num = rng.randint(-300, 300)
        den = rng.randint(2, 97)
        anchor[v] = complex(Q(num, den)) + 1j * rng.uniform(0.2, 0.8)
    rep = numeric_residue_oracle(period, h, anchor, radius=args.radius,
                                 samples=args.samples, evaluator=ev)
    sym = residue(period, h)
    pt = {k: v for k, v in anchor.items() if k != h.pivot}
    symval, _ = ev.eval_expr(sym, pt)
    pivot_coeff = h.form.coeff(h.pivot)
    scaled = complex(symval) / complex(pivot_coeff)
    out = rep.to_json()
    out["symbolic_residue"] = [scaled.real, scaled.imag]
    rel = abs(complex(rep.contour_value) - scaled) / max(abs(scaled), 1e-30)
    out["relative_difference"] = rel
    print(json.dumps(out, indent=1))
    return EXIT_OK if rel < 1e-6 else EXIT_VERIFY


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="weylzeta",
                                 description=__doc__.split("\n")[0])
    ap.add_argument("--precision", type=int, default=30)
    ap.add_argument("--pole-delta", type=float, default=1e-6, dest="pole_delta")
    ap.add_argument("--seed", type=int, default=17)
    ap.add_argument("--outdir", default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="dump root-system and Weyl data")
    p.add_argument("group")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(fn=cmd_inspect)

    p = sub.add_parser("zeta", help="derive the zeta for (group, parabolic)")
    p.add_argument("group")
    p.add_argument("parabolic")
    p.add_argument("--stage", choices=["period", "residue", "xi_o", "centered"],
                   default="centered")
    p.add_argument("--format", choices=["latex", "plain", "json"], default="plain")
    p.add_argument("--report", action="store_true")
    p.add_argument("--no-compare", action="store_true")
    p.set_defaults(fn=cmd_zeta)

    p = sub.add_parser("eval", help="evaluate the centered zeta at a point")
    p.add_argument("group")
    p.add_argument("parabolic")
    p.add_argument("--s", required=True, help="re,im")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("verify", help="verify functional equation / poles / zeros")
    p.add_argument("group")
    p.add_argument("parabolic")
    p.add_argument("--fe", action="store_true")
    p.add_argument("--poles", action="store_true")
    p.add_argument("--rh", action="store_true")
    p.add_argument("--tmax", type=float, default=30.0)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("oracle", help="numeric contour residue vs symbolic")
    p.add_argument("--group", default="SL3")
    p.add_argument("--parabolic", default="P21")
    p.add_argument("--hyperplane", type=int, default=0)
    p.add_argument("--radius", type=float, default=0.05)
    p.add_argument("--samples", type=int, default=256)
    p.set_defaults(fn=cmd_oracle)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY if isinstance(exc, zerofind.NotCenteredError) else EXIT_INTERNAL
    except AssertionError as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
