"""Clearing factors, functional-equation discovery, centering, pole reports.

The normalization turns an iterated-residue output (single variable s) into a
zeta candidate:

* multiply by the minimal xi factors that clear denominators: s-dependent
  factors (the I part) and constant special values (the J part);
* discover the rational constant c with  f(c - s) = f(s)  by argument
  pairing plus seeded numeric verification;
* recenter s -> s + (c-1)/2 so the symmetry becomes s <-> 1-s;
* report the exact pole set with orders from symbolic Laurent leading
  coefficients (cancellation between Weyl terms is decided exactly).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q

from .residue import Hyperplane, term_laurent
from .symexpr import LinForm, SymExpr, Term, simplify

__all__ = [
    "NormalizationRecord",
    "PoleReport",
    "JFactorPoleError",
    "clearing_factors",
    "normalize_o",
    "find_fe_constant",
    "center",
    "normalize_leading_scalar",
    "pole_report",
]


class JFactorPoleError(RuntimeError):
    """A constant clearing factor landed on a pole of xi (argument 0 or 1)."""


@dataclass
class NormalizationRecord:
    i_factors: list = field(default_factory=list)   # (a, b) for xi(a s + b)
    j_factors: list = field(default_factory=list)   # rational special values
    c_constant: Q | None = None
    c_residual: float | None = None
    candidate_table: list = field(default_factory=list)  # (candidate, residual)
    rescale: str = ""
    scalar_convention: str = "leading term scalar +1 after centering"

    def to_json(self) -> dict:
        return {
            "i_factors": [[str(a), str(b)] for a, b in self.i_factors],
            "j_factors": [str(c) for c in self.j_factors],
            "c_constant": None if self.c_constant is None else str(self.c_constant),
            "c_residual": self.c_residual,
            "candidates": [[str(c), r] for c, r in self.candidate_table],
            "rescale": self.rescale,
            "scalar_convention": self.scalar_convention,
        }


@dataclass
class PoleReport:
    poles: list            # (location Q, order int)
    candidates: list       # all rational candidate locations examined
    numeric_checked: bool = False

    def locations(self) -> list:
        return [p for p, _ in self.poles]

    def to_json(self) -> dict:
        return {
            "poles": [{"s": str(p), "order": o} for p, o in self.poles],
            "candidates": [str(c) for c in self.candidates],
            "numeric_checked": self.numeric_checked,
        }


def _single_variable(expr: SymExpr) -> str:
    tvars = set()
    for t in expr.terms:
        if t.expf:
            tvars |= {v for v, _ in t.expf}
    zvars = expr.variables() - tvars
    if len(zvars) != 1:
        raise ValueError(f"expected a single-variable expression, got {sorted(zvars)}")
    return next(iter(zvars))


def clearing_factors(expr: SymExpr, record: NormalizationRecord | None = None) -> NormalizationRecord:
    """Exact multisets of denominator xi factors after cancellation.

    The needed multiplicity of each factor is the maximum denominator
    exponent over the terms (simplify has already cancelled matching atoms,
    which gives minimality relative to the canonical form)."""
    rec = record or NormalizationRecord()
    expr = simplify(expr)
    need: dict = {}
    for t in expr.terms:
        for atom, e in t.xi:
            if e >= 0:
                continue
            if atom.kind != "xi" or atom.deriv != 0:
                # expansion leftovers are a purity problem, not clearable
                continue
            need[atom] = max(need.get(atom, 0), -e)
    i_list = []
    j_list = []
    for atom, mult in sorted(need.items(), key=lambda ae: ae[0].sort_key()):
        arg = atom.arg
        if arg.is_constant:
            if arg.const in (0, 1):
                raise JFactorPoleError(
                    f"constant clearing factor xi({arg.const}) is a pole")
            j_list.extend([arg.const] * mult)
        else:
            var = arg.coeffs[0][0]
            i_list.extend([(arg.coeff(var), arg.const)] * mult)
    rec.i_factors = i_list
    rec.j_factors = j_list
    return rec


def normalize_o(expr: SymExpr, record: NormalizationRecord | None = None) -> SymExpr:
    """Multiply by the clearing factors and distribute.

    Postcondition (asserted): no xi atom with negative exponent remains."""
    expr = simplify(expr)
    var = _single_variable(expr)
    rec = clearing_factors(expr, record)
    from .symexpr import xi_of

    multiplier = Term(Q(1))
    for a, b in rec.i_factors:
        sgn, atom = xi_of(LinForm({var: a}, b))
        multiplier = multiplier.times(Term(Q(sgn), xi=[(atom, 1)]))
    for c in rec.j_factors:
        sgn, atom = xi_of(LinForm({}, c))
        multiplier = multiplier.times(Term(Q(sgn), xi=[(atom, 1)]))
    out = simplify(expr.map_terms(lambda t: t.times(multiplier)))
    for t in out.terms:
        for atom, e in t.xi:
            if e < 0 and atom.kind == "xi" and atom.deriv == 0:
                raise AssertionError(
                    f"clearing incomplete: xi({atom.arg.text()})^{e} survives")
    return out.with_provenance(stage="normalized")


def _fe_candidates(expr: SymExpr, var: str) -> list:
    """Rational candidates for the constant c in f(c - s) = f(s).

    Pairs of xi arguments (a s + b, a s + b') demand c = (1 - b - b')/a;
    pairs of linear denominator roots demand the root set be symmetric about
    c/2, giving c = -(b + b')/a."""
    by_slope_xi: dict = {}
    by_slope_lin: dict = {}
    for t in expr.terms:
        for atom, e in t.xi:
            if atom.kind == "xi" and not atom.arg.is_constant:
                a = atom.arg.coeff(var)
                by_slope_xi.setdefault(a, set()).add(atom.arg.const)
        for lf, e in t.den:
            a = lf.coeff(var)
            if a:
                by_slope_lin.setdefault(a, set()).add(lf.const)
    cands = set()
    for a, bs in by_slope_xi.items():
        for b1 in bs:
            for b2 in bs:
                cands.add((1 - b1 - b2) / a)
    for a, bs in by_slope_lin.items():
        for b1 in bs:
            for b2 in bs:
                cands.add(-(b1 + b2) / a)
    return sorted(cands)


def fe_residual(expr: SymExpr, c: Q, evaluator, trials: int = 50, seed: int = 11,
                var: str | None = None) -> float:
    """Max relative residual of f(c - s) = f(s) over seeded sample points."""
    var = var or _single_variable(expr)
    pts = evaluator.random_points([var], trials, seed, expr_for_poles=expr)
    worst = 0.0
    for pt in pts:
        s0 = pt[var]
        try:
            v1, d1 = evaluator.eval_expr(expr, {var: s0})
            v2, d2 = evaluator.eval_expr(expr, {var: complex(c) - s0})
        except Exception:
            continue
        if d1["near_singular"] or d2["near_singular"]:
            continue
        res = abs(v1 - v2) / (1 + abs(v1))
        worst = max(worst, float(res))
    return worst


def find_fe_constant(expr: SymExpr, evaluator, trials: int = 50, seed: int = 11,
                     tol: float = 1e-9, record: NormalizationRecord | None = None):
    """Discover the reflection constant by candidate pairing plus numeric
    verification.  Returns (c, residual); c is None when nothing passes (the
    full candidate/residual table goes into the record)."""
    var = _single_variable(expr)
    table = []
    best = None
    for c in _fe_candidates(expr, var):
        res = fe_residual(expr, c, evaluator, trials=trials, seed=seed, var=var)
        table.append((c, res))
        if res < tol and (best is None or res < best[1]):
            best = (c, res)
    if record is not None:
        record.candidate_table = table
        if best:
            record.c_constant, record.c_residual = best
    if best is None:
        return None, table
    return best


def center(expr: SymExpr, c: Q, evaluator=None) -> SymExpr:
    """Shift s -> s + (c-1)/2 so the symmetry reads f(1-s) = f(s)."""
    var = _single_variable(expr)
    shift = (Q(c) - 1) / 2
    out = simplify(expr.map_terms(
        lambda t: t.substitute({var: LinForm({var: Q(1)}, shift)})))
    if evaluator is not None:
        res = fe_residual(out, Q(1), evaluator, trials=12, seed=5, var=var)
        if res > 1e-8:
            raise AssertionError(f"centering failed: residual {res:.2e}")
    return out.with_provenance(stage="centered")


def normalize_leading_scalar(expr: SymExpr) -> SymExpr:
    """Global scalar convention: first term in canonical order gets +1."""
    expr = simplify(expr)
    if expr.is_zero:
        return expr
    return simplify(expr.scaled(1 / expr.terms[0].scalar))


def _pole_candidates(expr: SymExpr, var: str) -> list:
    cands = set()
    for t in expr.terms:
        for lf, e in t.den:
            a = lf.coeff(var)
            if a:
                cands.add(-lf.const / a)
        for atom, e in t.xi:
            if atom.kind != "xi" or e < 0:
                continue
            a = atom.arg.coeff(var)
            if not a:
                continue
            for q in (Q(0), Q(1)):
                cands.add((q - atom.arg.const) / a)
    return sorted(cands)


def pole_report(expr: SymExpr, evaluator=None) -> PoleReport:
    """Exact pole set with orders.

    Candidates are zeros of linear denominators and pole hits of numerator
    xi arguments; the surviving order at each candidate is decided by the
    exact symbolic Laurent expansion of the full sum (leading coefficients
    that cancel between Weyl terms vanish exactly)."""
    expr = simplify(expr)
    var = _single_variable(expr)
    poles = []
    cands = _pole_candidates(expr, var)
    for s0 in cands:
        hyper = Hyperplane(form=LinForm({var: Q(1)}, -s0), root=(), pivot=var,
                           label=f"s={s0}")
        buckets: dict = {}
        overall_min = 0
        for t in expr.terms:
            mino, data = term_laurent(t, hyper, order=-1)
            overall_min = min(overall_min, mino)
            for k, ts in data.items():
                buckets.setdefault(k, []).extend(ts)
        order_found = 0
        for k in range(overall_min, 0):
            coeff = simplify(SymExpr(buckets.get(k, [])))
            if not coeff.is_zero:
                order_found = -k
                break
        if order_found:
            poles.append((s0, order_found))
    checked = False
    if evaluator is not None and poles:
        # light numeric confirmation: blowup near each reported pole
        for s0, order in poles:
            val, _ = evaluator.eval_expr(expr, {var: complex(s0) + 1e-7})
            if abs(val) < 1e3:
                raise AssertionError(
                    f"reported pole at {s0} does not blow up numerically")
        checked = True
    return PoleReport(poles=poles, candidates=cands, numeric_checked=checked)
