#!/usr/bin/env python3
"""Regenerate the bundled golden corpus JSON files.

Each formula is transcribed display term by display term.  Two transcription
corrections are applied where the printed source contradicts itself (see
/root/notes/decisions.md): the middle sign pair of the rank-2 special-linear
formula, and a squared constant factor in the second term of the (2,2)
partition formula (forced by that formula's own functional equation).

Run from the repository root:  python tools/build_golden.py
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction as Q

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from weylzeta.symexpr import (  # noqa: E402
    LinForm,
    Poly,
    SymExpr,
    Term,
    make_expfactor,
    simplify,
    to_json,
    xi_of,
)

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "weylzeta", "golden")


def lf(a, b, var="s") -> LinForm:
    return LinForm({var: Q(a)}, Q(b))


def term(scalar, dens=(), xis=(), tpow=None, texp=None):
    """One display term.

    dens: iterable of (a, b) or (a, b, exp) for (a s + b)^exp in the
          denominator.
    xis:  iterable of (a, b) or (a, b, exp) for xi(a s + b)^exp; a == 0
          gives special values.
    tpow: (a, b) meaning exp((a s + b) * x)   [single-parameter powers]
    texp: mapping tvar -> (a, b)              [general parameter exponents]
    """
    den = []
    for d in dens:
        a, b, *rest = d
        e = rest[0] if rest else 1
        den.append((lf(a, b), e))
    sc = Q(scalar)
    xi = []
    for xx in xis:
        a, b, *rest = xx
        e = rest[0] if rest else 1
        sgn, atom = xi_of(lf(a, b))
        if sgn < 0 and e % 2:
            sc = -sc
        xi.append((atom, e))
    expf = None
    if tpow is not None:
        expf = make_expfactor({"x": lf(*tpow)})
    elif texp is not None:
        expf = make_expfactor({tv: lf(*ab) for tv, ab in texp.items()})
    return Term(sc, Poly.one(), den, xi, expf)


def emit(identifier, group, parabolic, terms, display_terms, center_shift=0,
         t_mode="", notes="", covers=()):
    expr = simplify(SymExpr(terms))
    payload = {
        "identifier": identifier,
        "group": group,
        "parabolic": parabolic,
        "parabolic_aliases": list(covers),
        "variable": "s",
        "center_shift": str(center_shift),
        "display_terms": display_terms,
        "t_mode": t_mode,
        "notes": notes,
        "expression": json.loads(to_json(expr)),
    }
    path = os.path.join(OUT, f"{identifier}.json")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
    print("wrote", path, f"({len(expr.terms)} canonical terms,"
          f" {display_terms} display terms)")


def main():
    os.makedirs(OUT, exist_ok=True)

    emit("eq01-sl2-b", "SL2", "B", [
        term(1, [(1, -1)], [(2, 0)]),
        term(-1, [(1, 0)], [(2, -1)]),
    ], display_terms=2)

    # middle sign pair corrected (transcription note in the decisions ledger)
    emit("eq02-sl3-p", "SL3", "P21", [
        term(1, [(3, -3)], [(0, 2), (3, 0)]),
        term(-1, [(3, 0)], [(0, 2), (3, -2)]),
        term(Q(-1, 3), [(3, -3)], [(3, -1)]),
        term(Q(1, 3), [(3, 0)], [(3, -1)]),
        term(Q(1, 2), [(3, -1)], [(3, -2)]),
        term(Q(-1, 2), [(3, -2)], [(3, 0)]),
    ], display_terms=6, covers=["P12"])

    emit("eq03-sl4-p31", "SL4", "P31", [
        term(1, [(4, -4)], [(0, 2), (0, 3), (4, 0)]),
        term(-1, [(4, 0)], [(0, 2), (0, 3), (4, -3)]),
        term(Q(1, 4), [(4, -2)], [(4, 0)]),
        term(Q(-1, 4), [(4, -2)], [(4, -3)]),
        term(Q(1, 3), [(4, -1)], [(0, 2), (4, -3)]),
        term(Q(1, 3), [(4, -2)], [(0, 2), (4, -3)]),
        term(Q(-1, 3), [(4, -2)], [(0, 2), (4, 0)]),
        term(Q(-1, 3), [(4, -3)], [(0, 2), (4, 0)]),
        term(Q(1, 2), [(4, 0), (4, -3)], [(4, -1)]),
        term(Q(1, 2), [(4, -1), (4, -4)], [(4, -2)]),
        term(-1, [(4, 0), (4, -4)], [(0, 2), (4, -1)]),
        term(-1, [(4, 0), (4, -4)], [(0, 2), (4, -2)]),
    ], display_terms=12, covers=["P13"])

    # second term carries the squared constant factor (its own reflection
    # symmetry forces it; ledger entry)
    emit("eq04-sl4-p22", "SL4", "P22", [
        term(1, [(2, -3)], [(0, 2, 2), (2, 0), (2, 1)]),
        term(-1, [(2, 1)], [(0, 2, 2), (2, -2), (2, -1)]),
        term(Q(1, 4), [(2, -1)], [(2, 0), (2, 1)]),
        term(Q(-1, 4), [(2, -1)], [(2, -2), (2, -1)]),
        term(1, [(2, 0, 2), (2, -3)], [(2, -1, 2)]),
        term(-1, [(2, -2, 2), (2, 1)], [(2, 0, 2)]),
        term(-1, [(2, -2)], [(0, 2), (2, 0), (2, 1)]),
        term(1, [(2, 0)], [(0, 2), (2, -2), (2, -1)]),
        term(1, [(2, -2), (2, 0)], [(2, -1), (2, 0)]),
        term(-2, [(2, -3), (2, 1)], [(0, 2), (2, -1), (2, 0)]),
    ], display_terms=10)

    emit("eq05-sl5-p41", "SL5", "P41", [
        term(1, [(5, -5)], [(0, 2), (0, 3), (0, 4), (5, 0)]),
        term(-1, [(5, 0)], [(0, 2), (0, 3), (0, 4), (5, -4)]),
        term(Q(1, 4), [(5, -1)], [(0, 2), (0, 3), (5, -4)]),
        term(Q(-1, 4), [(5, -4)], [(0, 2), (0, 3), (5, 0)]),
        term(Q(1, 4), [(5, -3)], [(0, 2), (0, 3), (5, -4)]),
        term(Q(-1, 4), [(5, -2)], [(0, 2), (0, 3), (5, 0)]),
        term(Q(1, 9), [(5, -2)], [(0, 2), (5, 0)]),
        term(Q(-1, 9), [(5, -3)], [(0, 2), (5, -4)]),
        term(Q(1, 6), [(5, -3)], [(0, 2), (5, 0)]),
        term(Q(-1, 6), [(5, -2)], [(0, 2), (5, -4)]),
        term(Q(1, 6), [(5, -2)], [(0, 2), (5, 0)]),
        term(Q(-1, 6), [(5, -3)], [(0, 2), (5, -4)]),
        term(Q(1, 3), [(5, 0), (5, -4)], [(0, 2), (5, -1)]),
        term(Q(1, 3), [(5, -5), (5, -1)], [(0, 2), (5, -3)]),
        term(Q(1, 2), [(5, -1), (5, -5)], [(0, 2), (5, -2)]),
        term(Q(1, 2), [(5, -4), (5, 0)], [(0, 2), (5, -2)]),
        term(Q(1, 3), [(5, -2), (5, -5)], [(0, 2), (5, -3)]),
        term(Q(1, 3), [(5, -3), (5, 0)], [(0, 2), (5, -1)]),
        term(Q(1, 8), [(5, -3)], [(5, -4)]),
        term(Q(-1, 8), [(5, -2)], [(5, 0)]),
        term(Q(1, 4), [(5, -2)], [(0, 2, 2), (5, -4)]),
        term(Q(-1, 4), [(5, -3)], [(0, 2, 2), (5, 0)]),
        term(Q(-1, 4), [(5, -3), (5, 0)], [(5, -1)]),
        term(Q(-1, 4), [(5, -2), (5, -5)], [(5, -3)]),
        term(-1, [(5, 0), (5, -5)], [(0, 2), (0, 3), (5, -1)]),
        term(-1, [(5, 0), (5, -5)], [(0, 2), (0, 3), (5, -3)]),
        term(Q(-1, 4), [(5, -1), (5, -4)], [(5, -2)]),
        term(-1, [(5, 0), (5, -5)], [(0, 2, 2), (5, -2)]),
    ], display_terms=28, covers=["P14"])

    emit("eq06-sl5-p32", "SL5", "P32", [
        term(1, [(5, 0)], [(0, 2, 2), (0, 3), (5, 4), (5, 5)]),
        term(Q(1, 4), [(5, 2)], [(0, 2), (5, 4), (5, 5)]),
        term(1, [(5, 4, 2), (5, 0)], [(0, 2), (5, 2), (5, 3)]),
        term(Q(-1, 2), [(5, 1)], [(0, 2), (0, 3), (5, 4), (5, 5)]),
        term(Q(-1, 3), [(5, 1)], [(0, 2, 2), (5, 4), (5, 5)]),
        term(Q(-1, 3), [(5, 2)], [(0, 2, 2), (5, 4), (5, 5)]),
        term(Q(-1, 4), [(5, 2), (5, 4)], [(5, 3), (5, 4)]),
        term(Q(1, 3), [(5, 3)], [(0, 2, 2), (5, 1), (5, 2)]),
        term(Q(-1, 2), [(5, 1), (5, 3), (5, 4)], [(5, 2), (5, 3)]),
        term(Q(1, 8), [(5, 2)], [(5, 1), (5, 2)]),
        term(-1, [(5, 1, 2), (5, 5)], [(0, 2), (5, 3), (5, 4)]),
        term(Q(-1, 6), [(5, 3)], [(0, 2), (5, 1), (5, 2)]),
        term(Q(-1, 2), [(5, 0), (5, 3, 2)], [(5, 2, 2)]),
        term(Q(-1, 4), [(5, 2), (5, 3)], [(5, 2), (5, 4)]),
        term(Q(1, 2), [(5, 4)], [(0, 2), (0, 3), (5, 1), (5, 2)]),
        term(Q(1, 2), [(5, 0), (5, 4)], [(0, 2), (5, 2), (5, 3)]),
        term(Q(1, 2), [(5, 1), (5, 4)], [(0, 2), (5, 2), (5, 3)]),
        term(Q(1, 6), [(5, 2)], [(0, 2), (5, 4), (5, 5)]),
        term(Q(1, 6), [(5, 3)], [(0, 2), (5, 4), (5, 5)]),
        term(Q(1, 2), [(5, 1), (5, 4)], [(0, 2), (5, 3), (5, 4)]),
        term(1, [(5, 1, 2), (5, 4, 2)], [(5, 3, 2)]),
        term(Q(1, 3), [(5, 2), (5, 4)], [(0, 2), (5, 2), (5, 4)]),
        term(Q(-1, 8), [(5, 3)], [(5, 4), (5, 5)]),
        term(Q(-1, 6), [(5, 2)], [(0, 2), (5, 1), (5, 2)]),
        term(Q(-1, 4), [(5, 3)], [(0, 2), (5, 1), (5, 2)]),
        term(Q(1, 2), [(5, 1), (5, 5)], [(0, 2), (5, 3), (5, 4)]),
        term(Q(1, 2), [(5, 2, 2), (5, 5)], [(5, 4, 2)]),
        term(-1, [(5, 0), (5, 5)], [(0, 2), (0, 3), (5, 2), (5, 4)]),
        term(-1, [(5, 0), (5, 5)], [(0, 2, 2), (5, 3), (5, 4)]),
        term(-1, [(5, 1), (5, 2), (5, 5)], [(0, 2), (5, 4, 2)]),
        term(Q(1, 3), [(5, 1), (5, 3)], [(0, 2), (5, 2), (5, 4)]),
        term(Q(1, 2), [(5, 1), (5, 2), (5, 4)], [(5, 3), (5, 4)]),
        term(Q(-1, 4), [(5, 1), (5, 3)], [(5, 2), (5, 3)]),
        term(-1, [(5, 5)], [(0, 2, 2), (0, 3), (5, 1), (5, 2)]),
        term(-1, [(5, 0), (5, 5)], [(0, 2, 2), (5, 2), (5, 3)]),
        term(1, [(5, 0), (5, 3), (5, 4)], [(0, 2), (5, 2, 2)]),
        term(Q(1, 3), [(5, 4)], [(0, 2, 2), (5, 1), (5, 2)]),
    ], display_terms=37, center_shift=Q(-1), covers=["P23"],
        notes="displayed in the pre-centered frame; shift s -> s-1 to center")

    emit("eq07-sp4-pe1e2", "Sp4", "Pe1-e2", [
        term(1, [(1, -2)], [(0, 2), (1, 1), (2, 0)]),
        term(-1, [(1, 1)], [(0, 2), (1, -1), (2, -1)]),
        term(-1, [(2, -2)], [(1, 1), (2, 0)]),
        term(1, [(2, 0)], [(1, -1), (2, -1)]),
        term(-1, [(2, -2), (1, 1)], [(1, 0), (2, 0)]),
        term(-1, [(2, 0), (1, -2)], [(1, 0), (2, -1)]),
    ], display_terms=6)

    emit("eq08-sp4-p2e2", "Sp4", "P2e2", [
        term(1, [(2, -3)], [(0, 2), (2, 1)]),
        term(-1, [(2, 1)], [(0, 2), (2, -2)]),
        term(Q(-1, 2), [(2, -1)], [(2, 1)]),
        term(Q(1, 2), [(2, -1)], [(2, -2)]),
        term(-1, [(2, 1), (2, -2)], [(2, 0)]),
        term(-1, [(2, 0), (2, -3)], [(2, -1)]),
    ], display_terms=6)

    emit("eq09-g2-plong", "G2", "Plong", [
        term(1, [(1, -2)], [(0, 2), (1, 1), (2, 0), (3, 0)]),
        term(-1, [(1, 1)], [(0, 2), (1, -1), (2, -1), (3, -2)]),
        term(-1, [(2, -2)], [(1, 1), (2, 0), (3, 0)]),
        term(1, [(2, 0)], [(1, -1), (2, -1), (3, -2)]),
        term(-1, [(3, 0), (2, -2)], [(1, 0), (2, 0), (3, -1)]),
        term(-1, [(3, -1), (1, -2)], [(1, 0), (2, -1), (3, -2)]),
        term(-1, [(3, -3), (2, 0)], [(1, 0), (2, -1), (3, -1)]),
        term(-1, [(3, -2), (1, 1)], [(1, 0), (2, 0), (3, 0)]),
    ], display_terms=8)

    emit("eq10-g2-pshort", "G2", "Pshort", [
        term(1, [(1, -3)], [(0, 2), (1, 2), (2, 0)]),
        term(-1, [(1, 2)], [(0, 2), (1, -2), (2, -1)]),
        term(1, [(2, -2)], [(1, -2), (2, -1)]),
        term(-1, [(2, 0)], [(1, 2), (2, 0)]),
        term(-1, [(1, 0), (1, -3)], [(1, -1), (2, -1)]),
        term(-1, [(1, -1), (1, 2)], [(1, 1), (2, 0)]),
        term(-1, [(2, -2), (1, 1)], [(1, 0), (2, 0)]),
        term(-1, [(2, 0), (1, -2)], [(1, 0), (2, -1)]),
    ], display_terms=8)

    # single-parameter exponential versions (powers of T = e^x); the last
    # term of the first formula is transcribed with xi(3s-1) (ledger note on
    # the stray t in the printed argument)
    emit("eq11-sl3-p12-T", "SL3", "P12", [
        term(1, [(3, -3)], [(0, 2), (3, 0)], tpow=(3, 1)),
        term(-1, [(3, 0)], [(0, 2), (3, -2)], tpow=(0, 1)),
        term(Q(-1, 2), [(3, -2)], [(3, 0)], tpow=(3, 0)),
        term(Q(1, 2), [(3, -1)], [(3, -2)], tpow=(-3, 3)),
        term(-1, [(3, -3), (3, 0)], [(3, -1)], tpow=(-3, 4)),
    ], display_terms=5, t_mode="rho_line")

    emit("eq12-sl3-p21-T", "SL3", "P21", [
        term(-1, [(3, 0)], [(0, 2), (3, -2)], tpow=(-3, 4)),
        term(1, [(3, -3)], [(0, 2), (3, 0)], tpow=(0, 1)),
        term(Q(-1, 2), [(3, -2)], [(3, 0)], tpow=(3, 0)),
        term(Q(1, 2), [(3, -1)], [(3, -2)], tpow=(-3, 3)),
        term(-1, [(3, -3), (3, 0)], [(3, -1)], tpow=(3, 1)),
    ], display_terms=5, t_mode="rho_line")

    # general-parameter pre-forms (five terms each, pre-centered frame)
    emit("eq11pre-sl3-p12-Tgen", "SL3", "P12", [
        term(1, [(3, 0)], [(0, 2), (3, 3)], texp={"t1": (3, 4), "t2": (3, 2)}),
        term(Q(-1, 2), [(3, 1)], [(3, 3)], texp={"t1": (3, 3), "t2": (3, 3)}),
        term(Q(1, 2), [(3, 2)], [(3, 1)], texp={"t1": (-3, 0)}),
        term(-1, [(3, 3)], [(0, 2), (3, 1)], texp={"t1": (0, 1), "t2": (-3, -1)}),
        term(-1, [(3, 0), (3, 3)], [(3, 2)], texp={"t1": (-3, 1), "t2": (0, 2)}),
    ], display_terms=5, center_shift=Q(-1), t_mode="general",
        notes="pre-centered frame; shift s -> s-1 to center")

    emit("eq12pre-sl3-p21-Tgen", "SL3", "P21", [
        term(-1, [(3, 3)], [(0, 2), (3, 1)], texp={"t1": (-3, 1), "t2": (0, 2)}),
        term(Q(-1, 2), [(3, 1)], [(3, 3)], texp={"t1": (3, 3), "t2": (3, 3)}),
        term(Q(1, 2), [(3, 2)], [(3, 1)], texp={"t1": (-3, 0)}),
        term(-1, [(3, 0), (3, 3)], [(3, 2)], texp={"t1": (3, 4), "t2": (3, 2)}),
        term(1, [(3, 0)], [(0, 2), (3, 3)], texp={"t1": (0, 1), "t2": (-3, -1)}),
    ], display_terms=5, center_shift=Q(-1), t_mode="general",
        notes="pre-centered frame; shift s -> s-1 to center")


if __name__ == "__main__":
    main()
