"""Iterated symbolic residues along singular hyperplanes.

A residue step substitutes ``pivot = (u - rest)/c`` so that the hyperplane
form becomes the expansion variable ``u`` exactly, expands every factor of
every term as a truncated Laurent series in ``u`` with exact symbolic
coefficients, and extracts the ``u^-1`` coefficient.  Residues are normalized
against the hyperplane form itself (not the pivot coordinate); the two differ
by the rational pivot coefficient, which is a global factor per step.

Xi factors whose argument hits a pole of the completed zeta on the hyperplane
contribute their Laurent series with symbolic constants (``XiAtom`` of kind
"laurent"); regular xi factors contribute Taylor series with symbolic
derivative atoms.  Both kinds are carried, never dropped: a clean closed form
must cancel them, and the pipeline flags survivors.

The expansion depth is capped by the stored xi-series depth (constants a0..a3,
supporting poles of order <= 4); deeper requests raise ``DepthError``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import comb, factorial
from typing import Mapping

from .rootsys import ParabolicDescriptor, RootSystem, pairing_form
from .symexpr import (
    LinForm,
    Poly,
    Q,
    SymExpr,
    Term,
    make_expfactor,
    simplify,
    xi_laurent,
    xi_of,
)

__all__ = [
    "Hyperplane",
    "DepthError",
    "ZeroResidueError",
    "OracleConvergenceError",
    "hyperplanes_for",
    "laurent_term",
    "residue",
    "iterated_residue",
    "numeric_residue_oracle",
    "OracleReport",
]

XI_SERIES_DEPTH = 4  # coefficients a0..a3 of xi at its pole are available

_U = "u0"  # reserved expansion variable


class DepthError(RuntimeError):
    """Requested Laurent order exceeds the implemented expansion depth."""


class ZeroResidueError(RuntimeError):
    pass


class OracleConvergenceError(RuntimeError):
    def __init__(self, estimate, coarse, fine):
        super().__init__(
            f"contour quadrature did not converge: estimate {estimate:.3e}")
        self.estimate = estimate
        self.coarse = coarse
        self.fine = fine


@dataclass(frozen=True)
class Hyperplane:
    """One singular hyperplane <lambda - rho, beta_check> = 0."""

    form: LinForm
    root: tuple
    pivot: str
    label: str = ""


def hyperplanes_for(rs: RootSystem, pdesc: ParabolicDescriptor) -> list[Hyperplane]:
    """Ordered hyperplanes for the retained simple roots of a maximal
    parabolic, following the definition's nesting (first retained root
    first)."""
    out = []
    for i in pdesc.retained_indices(rs.rank):
        beta = rs.simple_roots[i]
        form = pairing_form(rs, rs.coroot(beta)) - 1
        pivot = f"z{i + 1}"
        if form.coeff(pivot) == 0:  # pragma: no cover - defensive
            cands = [v for v, _ in form.coeffs]
            pivot = cands[-1]
        out.append(Hyperplane(form=form, root=beta, pivot=pivot,
                              label=f"{rs.name}:beta{i + 1}"))
    return out


# ---------------------------------------------------------------------------
# truncated Laurent series with Term-valued coefficients
#
# A series is a dict order -> list[Term]; absent orders are zero.


def _ser_scale_order(s: dict, shift: int) -> dict:
    return {k + shift: v for k, v in s.items()}


def _ser_mul(s1: dict, s2: dict, max_order: int) -> dict:
    out: dict = {}
    for k1, ts1 in s1.items():
        for k2, ts2 in s2.items():
            k = k1 + k2
            if k > max_order:
                continue
            bucket = out.setdefault(k, [])
            for t1 in ts1:
                for t2 in ts2:
                    bucket.append(t1.times(t2))
    return out


def _term_inverse(t: Term) -> Term:
    if not t.num.is_constant:
        raise ValueError("cannot invert term with polynomial numerator")
    num = Poly.one()
    for lf, e in t.den:
        num = num * Poly.from_linform(lf).pow(e)
    scalar = 1 / (t.scalar * (t.num.const_value() or Q(1)))
    xi = [(a, -e) for a, e in t.xi]
    expf = None
    if t.expf is not None:
        expf = make_expfactor({v: -f for v, f in t.expf})
    return Term(scalar, num, (), xi, expf)


def _ser_recip(s: dict, max_order: int) -> dict:
    """Reciprocal of a series whose lowest coefficient is a single term."""
    m = min(s)
    lead = s[m]
    if len(lead) != 1:
        raise ValueError("series reciprocal needs a single-term leading coefficient")
    c0inv = _term_inverse(lead[0])
    # normalized tail: s = u^m * c0 * (1 + r), r = sum_{j>=1} c0^-1 c_{m+j} u^j
    depth = max_order + m  # orders of the normalized reciprocal needed: 0..depth
    if depth < 0:
        return {}
    r = {}
    for k, ts in s.items():
        j = k - m
        if 1 <= j <= depth:
            r[j] = [c0inv.times(t) for t in ts]
    # (1+r)^-1 = sum_i (-r)^i
    inv_norm: dict = {0: [Term(Q(1))]}
    power: dict = {0: [Term(Q(1))]}
    for _ in range(depth):
        power = _ser_mul(power, {k: [t.scaled(-1) for t in ts] for k, ts in r.items()}, depth)
        if not power:
            break
        for k, ts in power.items():
            inv_norm.setdefault(k, []).extend(ts)
    out: dict = {}
    for k, ts in inv_norm.items():
        if k - m <= max_order:
            out.setdefault(k - m, []).extend(t.times(c0inv) for t in ts)
    return out


def _ser_int_pow(s: dict, e: int, max_order: int) -> dict:
    if e == 0:
        return {0: [Term(Q(1))]}
    if e < 0:
        inv = _ser_recip(s, max_order - (e + 1) * min(s))
        return _ser_int_pow(inv, -e, max_order)
    out = None
    for _ in range(e):
        out = s if out is None else _ser_mul(out, s, max_order - (e - 1) * min(s))
    return {k: v for k, v in out.items() if k <= max_order}


# -- per-factor expansions ---------------------------------------------------


def _xi_pole_series(a_coeff: Q, at_one: bool, deriv: int, max_regular: int) -> dict:
    """Series of xi^(deriv)(q + a*u) around a pole point q in {0,1}.

    Base expansion at 1 with eps = a*u:
        xi^(k)(1+eps) = (-1)^k k! eps^-(k+1) + sum_{m>=k} a_m m!/(m-k)! eps^(m-k)
    The point-0 version is the reflection with eps -> -eps and sign (-1)^k.
    Regular orders are emitted up to u^max_regular.
    """
    k = deriv
    if max_regular > XI_SERIES_DEPTH - 1 - k:
        raise DepthError(
            "expansion depth exceeded: xi Laurent constants stored only up to "
            f"a{XI_SERIES_DEPTH - 1}")
    flip = not at_one
    out: dict = {}

    def eps_pow_term(j: int, scalar: Q, atom=None) -> None:
        # multiply eps^j with eps = (+-a) u
        base = (-a_coeff) if flip else a_coeff
        c = scalar * (base ** j)
        xi = [(atom, 1)] if atom is not None else []
        out.setdefault(j, []).append(Term(c, Poly.one(), (), xi))

    sign = Q(-1) ** k if flip else Q(1)
    eps_pow_term(-(k + 1), sign * (Q(-1) ** k) * factorial(k))
    for m in range(k, XI_SERIES_DEPTH):
        j = m - k
        if j > max_regular:
            break
        eps_pow_term(j, sign * Q(factorial(m), factorial(m - k)), xi_laurent(m))
    return out


def _xi_taylor_series(arg0: LinForm, a_coeff: Q, deriv: int, length: int) -> dict:
    """Series of xi^(deriv)(arg0 + a*u) at a regular point (symbolic
    derivative atoms)."""
    if length - 1 > XI_SERIES_DEPTH:
        raise DepthError(
            f"expansion depth exceeded: xi Taylor order {length - 1} beyond "
            f"depth {XI_SERIES_DEPTH}")
    out: dict = {}
    for j in range(length):
        sgn, atom = xi_of(arg0, deriv + j)
        c = Q(sgn) * (a_coeff ** j) / factorial(j)
        out[j] = [Term(c, Poly.one(), (), [(atom, 1)])]
    return out


def _factor_series(term: Term, max_order: int):
    """Split a pivot-substituted term into per-factor series.

    Returns (series_list, min_order_total).  Raises DepthError when the xi
    series depth cannot reach max_order.
    """
    factors: list[tuple] = []  # (min_order, maker(length) -> series)

    base = Term(term.scalar)
    # numerator polynomial: exact split by powers of u
    by_u: dict[int, Poly] = {}
    for mono, c in term.num.terms.items():
        k = 0
        rest = []
        for v, e in mono:
            if v == _U:
                k = e
            else:
                rest.append((v, e))
        key = tuple(rest)
        by_u.setdefault(k, Poly({}))
        by_u[k] = by_u[k] + Poly({key: c})
    by_u = {k: p for k, p in by_u.items() if not p.is_zero}
    if set(by_u) == {0}:
        base = Term(base.scalar, by_u[0])
    else:
        ser = {k: [Term(Q(1), p)] for k, p in by_u.items()}
        factors.append((min(ser), lambda L, s=ser: s))

    for lf, e in term.den:
        a = lf.coeff(_U)
        if a == 0:
            base = base.times(Term(Q(1), Poly.one(), [(lf, e)]))
            continue
        rest = lf - LinForm({_U: a})
        if rest.is_constant and rest.const == 0:
            # exact monomial (a u)^-e
            ser = {-e: [Term(Q(1) / a ** e)]}
            factors.append((-e, lambda L, s=ser: s))
        else:
            def mk(L, rest=rest, a=a, e=e):
                s = {}
                for j in range(L):
                    c = Q(comb(e + j - 1, j)) * ((-1) ** j) * (a ** j)
                    s[j] = [Term(c, Poly.one(), [(rest, e + j)])]
                return s
            factors.append((0, mk))

    for atom, e in term.xi:
        if atom.kind == "laurent":
            base = base.times(Term(Q(1), Poly.one(), (), [(atom, e)]))
            continue
        a = atom.arg.coeff(_U)
        if a == 0:
            base = base.times(Term(Q(1), Poly.one(), (), [(atom, e)]))
            continue
        arg0 = atom.arg - LinForm({_U: a})
        is_pole = arg0.is_constant and arg0.const in (0, 1)
        if is_pole:
            at_one = arg0.const == 1
            mino = -e * (atom.deriv + 1)  # pole for e > 0, zero of that order for e < 0

            def mk(L, a=a, at_one=at_one, k=atom.deriv, e=e, mino=mino):
                # the base (single-power) series spans a window of the same
                # length L starting at -(k+1); its top regular order:
                s = _xi_pole_series(a, at_one, k, L - 1 - (k + 1))
                return _ser_int_pow(s, e, mino + L - 1)
            factors.append((mino, mk))
        else:
            def mk(L, arg0=arg0, a=a, k=atom.deriv, e=e):
                s = _xi_taylor_series(arg0, a, k, L)
                return _ser_int_pow(s, e, L - 1)
            factors.append((0, mk))

    if term.expf is not None:
        e0 = {}
        cvec = LinForm({})
        for tv, f in term.expf:
            a = f.coeff(_U)
            if a != 0:
                cvec = cvec + LinForm({tv: a})
                f = f - LinForm({_U: a})
            e0[tv] = f
        base = base.times(Term(Q(1), Poly.one(), (), (), make_expfactor(e0)))
        if cvec.coeffs:
            def mk(L, cvec=cvec):
                cp = Poly.from_linform(cvec)
                return {j: [Term(Q(1, factorial(j)), cp.pow(j))] for j in range(L)}
            factors.append((0, mk))

    factors.append((0, lambda L, s={0: [base]}: s))
    min_total = sum(m for m, _ in factors)
    return factors, min_total


def term_laurent(term: Term, hyper: Hyperplane, order: int = -1) -> tuple[int, dict]:
    """Laurent data of one term along a hyperplane.

    Returns (min_order, {order: [coefficient terms]}) for orders up to
    ``order``; coefficient terms live in the remaining variables with the
    pivot eliminated at u = 0.
    """
    c = hyper.form.coeff(hyper.pivot)
    if c == 0:
        raise ValueError(f"pivot {hyper.pivot} absent from hyperplane form")
    if _U in term.variables():
        raise ValueError("expansion variable collision")
    rest = hyper.form - LinForm({hyper.pivot: c})
    sol = LinForm({_U: Q(1) / c}) - rest * (Q(1) / c)
    sub = term.substitute({hyper.pivot: sol})
    factors, min_total = _factor_series(sub, order)
    if min_total > order:
        return (min_total, {})
    out = {0: [Term(Q(1))]}
    cur_min = 0
    for mino, mk in factors:
        length = order - min_total + 1
        s = mk(length)
        out = _ser_mul(out, s, order - (min_total - cur_min - mino))
        cur_min += mino
    out = {k: v for k, v in out.items() if k <= order and v}
    return (min_total, out)


def residue(expr: SymExpr, hyper: Hyperplane) -> SymExpr:
    """Residue of the expression along the hyperplane: per term, the u^-1
    Laurent coefficient in u = hyperplane form.  Terms regular on the
    hyperplane contribute exactly zero."""
    collected: list[Term] = []
    for t in expr.terms:
        min_order, data = term_laurent(t, hyper, order=-1)
        if min_order >= 0:
            continue
        collected.extend(data.get(-1, []))
    out = simplify(SymExpr(collected, expr.provenance))
    return out.with_provenance(stage="residue", hyperplane=hyper.form.text())


def slice_assignment(hyper: Hyperplane) -> dict[str, LinForm]:
    """Assignment placing the pivot on the hyperplane (u = 0)."""
    c = hyper.form.coeff(hyper.pivot)
    rest = hyper.form - LinForm({hyper.pivot: c})
    return {hyper.pivot: rest * (Q(-1) / c)}


def iterated_residue(expr: SymExpr, rs: RootSystem, pdesc: ParabolicDescriptor,
                     rename_to: str = "s") -> SymExpr:
    """Iterate residues over the parabolic's hyperplanes in order, then apply
    the per-parabolic rescaling to rename the surviving variable."""
    hypers = hyperplanes_for(rs, pdesc)
    cur = expr
    composed: list[Mapping[str, LinForm]] = []
    for h in hypers:
        form = h.form
        for amap in composed:
            form = form.substitute(amap)
        step = Hyperplane(form=form, root=h.root, pivot=h.pivot, label=h.label)
        if form.coeff(h.pivot) == 0:
            raise ValueError(f"pivot {h.pivot} vanished from {h.label}")
        cur = residue(cur, step)
        composed.append(slice_assignment(step))
    if cur.is_zero:
        raise ZeroResidueError(f"zero iterated residue for {rs.name}/{pdesc.name}")
    a, b = (Q(x) for x in pdesc.rescale)
    final = simplify(cur.map_terms(
        lambda t: t.substitute({pdesc.survivor: LinForm({rename_to: a}, b)})))
    vars_left = final.variables() - {v for v, _ in _collect_tvars(final)}
    if not vars_left <= {rename_to}:
        raise AssertionError(f"unexpected surviving variables {vars_left}")
    final = final.with_provenance(
        stage="iterated_residue", group=rs.name, parabolic=pdesc.name,
        surviving_symbolic_atoms=final.has_symbolic_residue_atoms())
    return final


def _collect_tvars(expr: SymExpr):
    out = set()
    for t in expr.terms:
        if t.expf:
            for v, f in t.expf:
                out.add((v, None))
    return out


# ---------------------------------------------------------------------------
# numeric contour oracle


@dataclass
class OracleReport:
    contour_value: complex
    error_estimate: float
    samples: int
    radius: float
    anchor: dict

    def to_json(self) -> dict:
        return {
            "contour_value": [self.contour_value.real, self.contour_value.imag],
            "error_estimate": self.error_estimate,
            "samples": self.samples,
            "radius": self.radius,
            "anchor": {k: [complex(v).real, complex(v).imag] for k, v in self.anchor.items()},
        }


def _pivot_singularities(expr: SymExpr, pivot: str, anchor: Mapping[str, complex]):
    """Locations in the pivot plane where some factor of some term is
    singular (linear-denominator zeros and xi-argument pole hits)."""
    locs = []
    others = {k: v for k, v in anchor.items() if k != pivot}
    for t in expr.terms:
        for lf, _ in t.den:
            a = lf.coeff(pivot)
            if a == 0:
                continue
            rest = complex((lf - LinForm({pivot: a})).eval(others))
            locs.append(-rest / complex(a))
        for atom, _ in t.xi:
            if atom.kind != "xi":
                continue
            a = atom.arg.coeff(pivot)
            if a == 0:
                continue
            rest = complex((atom.arg - LinForm({pivot: a})).eval(others))
            for q in (0.0, 1.0):
                locs.append((q - rest) / complex(a))
    return locs


def numeric_residue_oracle(expr: SymExpr, hyper: Hyperplane,
                           anchor: Mapping[str, complex], radius: float,
                           samples: int, evaluator) -> OracleReport:
    """Trapezoidal contour integral (1/2pi i) of the expression around the
    hyperplane in the pivot coordinate, remaining variables at the anchor.

    The anchor must lie on the hyperplane but off all other singular loci;
    the circle must exclude every other singularity (checked beforehand).
    Convergence is estimated by sample doubling.

    Note the convention: the symbolic :func:`residue` is normalized against
    the hyperplane form u, so it equals ``pivot_coefficient *`` this value.
    """
    pivot = hyper.pivot
    c = hyper.form.coeff(pivot)
    rest = complex((hyper.form - LinForm({pivot: c})).eval(
        {k: v for k, v in anchor.items() if k != pivot}))
    center = -rest / complex(c)

    sings = _pivot_singularities(expr, pivot, anchor)
    for s0 in sings:
        d = abs(s0 - center)
        if 1e-9 < d <= radius * 1.25:
            raise ValueError(
                f"radius {radius} too close to another singularity at distance {d:.3g}")

    def contour(n: int) -> complex:
        total = 0j
        for k in range(n):
            w = cmath.exp(2j * cmath.pi * k / n)
            z = center + radius * w
            pt = dict(anchor)
            pt[pivot] = z
            val, diag = evaluator.eval_expr(expr, pt)
            total += complex(val) * (radius * w)
        return total / n

    coarse = contour(samples // 2)
    fine = contour(samples)
    est = abs(fine - coarse)
    if est > 1e-6 * (1 + abs(fine)):
        raise OracleConvergenceError(est, coarse, fine)
    return OracleReport(contour_value=fine, error_estimate=est,
                        samples=samples, radius=radius, anchor=dict(anchor))
