"""Exact symbolic expression kernel.

Everything here is exact rational arithmetic: affine-linear forms in named
variables, multivariate polynomial numerators, opaque xi-atoms (the completed
zeta as an uninterpreted symbol), and finite sums of terms.  An expression is

    sum of  scalar * num_poly / prod(linform^k) * prod(xi-atom^k) * exp(E)

where E is linear in a set of auxiliary exponential-parameter variables with
affine coefficients in the main variables.  Floating point never enters this
module; numeric evaluation lives in :mod:`weylzeta.xinum`.

Xi-atom arguments are canonicalized through the reflection symmetry of the
completed zeta (xi(v) = xi(1-v)); with that convention, atom equality is plain
argument equality and cancellation is purely syntactic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Mapping, Optional, Sequence

Q = Fraction

__all__ = [
    "LinForm",
    "Poly",
    "XiAtom",
    "xi_of",
    "xi_laurent",
    "Term",
    "SymExpr",
    "SingularSubstitutionError",
    "build_period",
    "build_period_T",
    "intertwining_factor",
    "substitute",
    "simplify",
    "equals_up_to_scalar",
    "to_display",
    "from_json",
]


def _var_key(name: str) -> tuple:
    """Sort key giving natural order z1 < z2 < ... < z10 (not lexicographic)."""
    m = re.match(r"^([A-Za-z]+)(\d*)$", name)
    if not m:
        return (name, -1)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


def _as_q(x) -> Q:
    if isinstance(x, Q):
        return x
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, str):
        return Q(x)
    raise TypeError(f"not an exact rational: {x!r}")


# ---------------------------------------------------------------------------
# linear forms


class LinForm:
    """Affine-linear form with exact rational coefficients.

    Immutable and hashable.  Zero coefficients are never stored.
    """

    __slots__ = ("coeffs", "const", "_hash")

    def __init__(self, coeffs: Mapping[str, Q] | None = None, const=0):
        items = []
        if coeffs:
            for v, c in coeffs.items():
                c = _as_q(c)
                if c != 0:
                    items.append((v, c))
        items.sort(key=lambda vc: _var_key(vc[0]))
        object.__setattr__(self, "coeffs", tuple(items))
        object.__setattr__(self, "const", _as_q(const))
        object.__setattr__(self, "_hash", hash((self.coeffs, self.const)))

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("LinForm is immutable")

    @staticmethod
    def var(name: str) -> "LinForm":
        return LinForm({name: Q(1)})

    @staticmethod
    def constant(c) -> "LinForm":
        return LinForm({}, c)

    def coeff(self, var: str) -> Q:
        for v, c in self.coeffs:
            if v == var:
                return c
        return Q(0)

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def variables(self) -> frozenset:
        return frozenset(v for v, _ in self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Q)):
            return LinForm(dict(self.coeffs), self.const + other)
        d = dict(self.coeffs)
        for v, c in other.coeffs:
            d[v] = d.get(v, Q(0)) + c
        return LinForm(d, self.const + other.const)

    __radd__ = __add__

    def __neg__(self):
        return LinForm({v: -c for v, c in self.coeffs}, -self.const)

    def __sub__(self, other):
        if isinstance(other, (int, Q)):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        k = _as_q(k)
        return LinForm({v: c * k for v, c in self.coeffs}, self.const * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, LinForm)
            and self.coeffs == other.coeffs
            and self.const == other.const
        )

    def __hash__(self):
        return self._hash

    def leading_coeff(self) -> Q:
        """Coefficient of the first variable in canonical order (0 if constant)."""
        return self.coeffs[0][1] if self.coeffs else Q(0)

    def primitive(self) -> tuple[Q, "LinForm"]:
        """Split into (multiplier, primitive form).

        The primitive form has coprime integer coefficients with positive
        leading coefficient; ``self == multiplier * primitive``.
        """
        if not self.coeffs:
            if self.const == 0:
                return Q(0), LinForm({}, 0)
            return self.const, LinForm({}, 1)
        vals = [c for _, c in self.coeffs] + ([self.const] if self.const else [])
        den = 1
        for v in vals:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in vals]
        g = 0
        for i in ints:
            g = gcd(g, abs(i))
        mult = Q(g, den)
        if self.leading_coeff() < 0:
            mult = -mult
        inv = 1 / mult
        prim = LinForm({v: c * inv for v, c in self.coeffs}, self.const * inv)
        return mult, prim

    def substitute(self, assignment: Mapping[str, "LinForm"]) -> "LinForm":
        out = LinForm({}, self.const)
        for v, c in self.coeffs:
            repl = assignment.get(v)
            if repl is None:
                out = out + LinForm({v: c})
            else:
                out = out + repl * c
        return out

    def eval(self, point: Mapping[str, complex]):
        acc = None
        for v, c in self.coeffs:
            x = point[v]
            acc = c * x if acc is None else acc + c * x
        if acc is None:
            return self.const
        return acc + self.const

    def __repr__(self):
        return f"LinForm({self.text()})"

    def text(self) -> str:
        if not self.coeffs:
            return str(self.const)
        parts = []
        for v, c in self.coeffs:
            if c == 1:
                term = v
            elif c == -1:
                term = f"-{v}"
            else:
                term = f"{c}*{v}"
            parts.append(term)
        s = parts[0]
        for p in parts[1:]:
            s += f" + {p}" if not p.startswith("-") else f" - {p[1:]}"
        if self.const > 0:
            s += f" + {self.const}"
        elif self.const < 0:
            s += f" - {-self.const}"
        return s


# ---------------------------------------------------------------------------
# multivariate polynomials (numerators produced by merging rational functions)

Monomial = tuple  # sorted tuple of (var, exp) pairs


class Poly:
    """Multivariate polynomial with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Q] | None = None):
        d = {}
        if terms:
            for m, c in terms.items():
                c = _as_q(c)
                if c != 0:
                    d[m] = c
        self.terms = d

    @staticmethod
    def constant(c) -> "Poly":
        c = _as_q(c)
        return Poly({(): c} if c != 0 else {})

    @staticmethod
    def one() -> "Poly":
        return Poly.constant(1)

    @staticmethod
    def from_linform(lf: LinForm) -> "Poly":
        d = {((v, 1),): c for v, c in lf.coeffs}
        if lf.const != 0:
            d[()] = lf.const
        return Poly(d)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def const_value(self) -> Q:
        return self.terms.get((), Q(0))

    def variables(self) -> frozenset:
        out = set()
        for m in self.terms:
            out.update(v for v, _ in m)
        return frozenset(out)

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        d = dict(self.terms)
        for m, c in other.terms.items():
            d[m] = d.get(m, Q(0)) + c
        return Poly(d)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "Poly":
        k = _as_q(k)
        return Poly({m: c * k for m, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        d: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mv = dict(m1)
                for v, e in m2:
                    mv[v] = mv.get(v, 0) + e
                key = tuple(sorted(mv.items(), key=lambda ve: _var_key(ve[0])))
                d[key] = d.get(key, Q(0)) + c1 * c2
        return Poly(d)

    def pow(self, n: int) -> "Poly":
        out = Poly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def substitute(self, assignment: Mapping[str, LinForm]) -> "Poly":
        out = Poly({})
        for m, c in self.terms.items():
            piece = Poly.constant(c)
            for v, e in m:
                repl = assignment.get(v)
                base = Poly.from_linform(repl) if repl is not None else Poly({((v, 1),): Q(1)})
                piece = piece * base.pow(e)
            out = out + piece
        return out

    def content_and_sign(self) -> Q:
        """Rational multiplier making the polynomial primitive with positive
        leading coefficient (in canonical monomial order)."""
        if self.is_zero:
            return Q(1)
        vals = list(self.terms.values())
        den = 1
        for v in vals:
            den = den * v.denominator // gcd(den, v.denominator)
        g = 0
        for v in vals:
            g = gcd(g, abs(int(v * den)))
        mult = Q(g, den)
        lead = self.terms[self._lead_monomial()]
        if lead < 0:
            mult = -mult
        return mult

    def _lead_monomial(self) -> Monomial:
        return max(
            self.terms,
            key=lambda m: (sum(e for _, e in m), tuple((_var_key(v), e) for v, e in m)),
        )

    def divide_by_linform(self, lf: LinForm) -> Optional["Poly"]:
        """Exact quotient self / lf, or ``None`` if not divisible."""
        if lf.is_constant:
            raise ValueError("division by constant form")
        pv, pc = lf.coeffs[0]
        rest = lf - LinForm({pv: pc})
        quotient = Poly({})
        rem = self
        while True:
            # highest power of pv in rem
            dmax = 0
            for m in rem.terms:
                for v, e in m:
                    if v == pv:
                        dmax = max(dmax, e)
            if dmax == 0:
                break
            shifted: dict = {}
            for m, c in rem.terms.items():
                md = dict(m)
                if md.get(pv, 0) == dmax:
                    md[pv] = dmax - 1
                    if md[pv] == 0:
                        del md[pv]
                    key = tuple(sorted(md.items(), key=lambda ve: _var_key(ve[0])))
                    shifted[key] = c / pc
            qpart = Poly(shifted)
            quotient = quotient + qpart
            rem = rem - qpart * Poly.from_linform(lf)
        if rem.is_zero:
            return quotient
        return None

    def eval(self, point: Mapping[str, complex]):
        total = None
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                val = val * point[v] ** e
            total = val if total is None else total + val
        return total if total is not None else Q(0)

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in m) or "1"
            parts.append(f"{c}*{mono}")
        return "Poly(" + " + ".join(parts) + ")"


# ---------------------------------------------------------------------------
# xi atoms


@dataclass(frozen=True)
class XiAtom:
    """Opaque symbol in the xi-algebra.

    kind "xi":       the completed zeta (deriv-th derivative) of an affine
                     argument, argument canonicalized through v <-> 1-v.
    kind "laurent":  coefficient a_k of the expansion xi(1+e) = 1/e + a0 +
                     a1*e + ...  (the point-0 expansion is rewritten to this
                     one, so only point-1 constants exist).
    """

    kind: str
    arg: Optional[LinForm] = None
    deriv: int = 0
    index: int = 0

    def sort_key(self):
        if self.kind == "laurent":
            return (1, self.index, 0, ())
        return (0, self.deriv, 0 if self.arg.is_constant else 1, (self.arg.coeffs, self.arg.const))

    def __lt__(self, other):  # dataclass(order=True) on Optional breaks; explicit
        return self.sort_key() < other.sort_key()


def xi_of(arg: LinForm, deriv: int = 0) -> tuple[int, XiAtom]:
    """Canonical xi-atom for xi^(deriv)(arg).

    Returns (sign, atom): the reflection xi(v) = xi(1-v) flips the sign of odd
    derivatives, and we normalize arguments to positive leading coefficient
    (constants to the representative >= 1/2).
    """
    sign = 1
    if arg.is_constant:
        if arg.const < Q(1, 2):
            arg = LinForm({}, 1 - arg.const)
            sign = (-1) ** deriv
    elif arg.leading_coeff() < 0:
        arg = (-arg) + 1
        sign = (-1) ** deriv
    return sign, XiAtom("xi", arg=arg, deriv=deriv)


def xi_laurent(index: int) -> XiAtom:
    return XiAtom("laurent", index=index)


# ---------------------------------------------------------------------------
# terms


def _merge_powers(items: Iterable[tuple], key=lambda x: x) -> list:
    d: dict = {}
    for obj, e in items:
        d[obj] = d.get(obj, 0) + e
    return [(obj, e) for obj, e in d.items() if e != 0]


ExpFactor = tuple  # sorted tuple of (tvar, LinForm); meaning exp(sum tvar * form)


def make_expfactor(parts: Mapping[str, LinForm] | None) -> Optional[ExpFactor]:
    if not parts:
        return None
    items = [(v, f) for v, f in parts.items() if not (f.is_constant and f.const == 0)]
    if not items:
        return None
    return tuple(sorted(items, key=lambda vf: _var_key(vf[0])))


class Term:
    """One summand: scalar * num / prod(den^k) * prod(xi^k) * exp(E)."""

    __slots__ = ("scalar", "num", "den", "xi", "expf")

    def __init__(self, scalar=Q(1), num: Poly | None = None,
                 den: Sequence[tuple[LinForm, int]] = (),
                 xi: Sequence[tuple[XiAtom, int]] = (),
                 expf: Optional[ExpFactor] = None):
        self.scalar = _as_q(scalar)
        self.num = num if num is not None else Poly.one()
        self.den = tuple(den)
        self.xi = tuple(xi)
        self.expf = expf

    # -- canonicalization ---------------------------------------------------

    def canonical(self) -> Optional["Term"]:
        """Normalized copy, or None if the term is zero."""
        if self.scalar == 0 or self.num.is_zero:
            return None
        scalar = self.scalar
        num = self.num
        # primitive denominators, fold multipliers
        den: dict = {}
        for lf, e in self.den:
            if e == 0:
                continue
            mult, prim = lf.primitive()
            if mult == 0:
                raise ZeroDivisionError("zero linear form in denominator")
            scalar /= mult ** e
            if prim.is_constant:
                continue
            den[prim] = den.get(prim, 0) + e
        # xi exponents merge (atoms are already canonical constructs)
        xi: dict = {}
        for atom, e in self.xi:
            if e:
                xi[atom] = xi.get(atom, 0) + e
        xi = {a: e for a, e in xi.items() if e != 0}
        # numerator content
        if num.is_constant:
            scalar *= num.const_value()
            if scalar == 0:
                return None
            num = Poly.one()
        else:
            c = num.content_and_sign()
            scalar *= c
            num = num.scale(1 / c)
            # cancel numerator against denominator linear factors
            for prim in sorted(den, key=lambda p: (p.coeffs, p.const)):
                while den[prim] > 0 and not num.is_constant:
                    q = num.divide_by_linform(prim)
                    if q is None:
                        break
                    num = q
                    den[prim] -= 1
            den = {p: e for p, e in den.items() if e != 0}
            if num.is_constant:
                scalar *= num.const_value()
                num = Poly.one()
            else:
                c = num.content_and_sign()
                if c != 1:
                    scalar *= c
                    num = num.scale(1 / c)
        if scalar == 0:
            return None
        den_t = tuple(sorted(den.items(), key=lambda pe: (pe[0].coeffs, pe[0].const)))
        xi_t = tuple(sorted(xi.items(), key=lambda ae: ae[0].sort_key()))
        return Term(scalar, num, den_t, xi_t, self.expf)

    # -- signatures ---------------------------------------------------------

    def xi_signature(self):
        return tuple(sorted(((a, e) for a, e in self.xi), key=lambda ae: ae[0].sort_key()))

    def group_key(self):
        return (self.xi_signature(), self.expf)

    def structure_key(self):
        return (self.xi_signature(), self.expf, self.den, self.num.key())

    # -- algebra ------------------------------------------------------------

    def times(self, other: "Term") -> "Term":
        expf = self.expf
        if other.expf is not None:
            if expf is None:
                expf = other.expf
            else:
                d = {v: f for v, f in expf}
                for v, f in other.expf:
                    d[v] = d.get(v, LinForm({})) + f
                expf = make_expfactor(d)
        return Term(
            self.scalar * other.scalar,
            self.num * other.num,
            list(self.den) + list(other.den),
            list(self.xi) + list(other.xi),
            expf,
        )

    def scaled(self, k) -> "Term":
        return Term(self.scalar * _as_q(k), self.num, self.den, self.xi, self.expf)

    def substitute(self, assignment: Mapping[str, LinForm]) -> "Term":
        num = self.num.substitute(assignment)
        den = []
        for lf, e in self.den:
            nf = lf.substitute(assignment)
            if nf.is_constant and nf.const == 0:
                raise SingularSubstitutionError(
                    f"substitution lands on singular locus of {lf.text()}")
            den.append((nf, e))
        scalar = self.scalar
        xi = []
        for atom, e in self.xi:
            if atom.kind != "xi":
                xi.append((atom, e))
                continue
            newarg = atom.arg.substitute(assignment)
            sgn, newatom = xi_of(newarg, atom.deriv)
            scalar *= Q(sgn) ** e if sgn < 0 else 1
            xi.append((newatom, e))
        expf = self.expf
        if expf is not None:
            expf = make_expfactor({v: f.substitute(assignment) for v, f in expf})
        return Term(scalar, num, den, xi, expf)

    def substitute_tvars(self, mapping: Mapping[str, LinForm]) -> "Term":
        """Relabel the exponential-parameter variables by zero-constant linear
        combinations of new parameter variables."""
        if self.expf is None:
            return self
        parts: dict[str, LinForm] = {}
        for tv, f in self.expf:
            repl = mapping.get(tv, LinForm.var(tv))
            if repl.const != 0:
                raise ValueError("parameter relabeling must be linear")
            for newv, c in repl.coeffs:
                parts[newv] = parts.get(newv, LinForm({})) + f * c
        return Term(self.scalar, self.num, self.den, self.xi, make_expfactor(parts))

    def variables(self) -> frozenset:
        out = set(self.num.variables())
        for lf, _ in self.den:
            out |= lf.variables()
        for atom, _ in self.xi:
            if atom.kind == "xi":
                out |= atom.arg.variables()
        if self.expf:
            for v, f in self.expf:
                out.add(v)
                out |= f.variables()
        return frozenset(out)

    def has_symbolic_residue_atoms(self) -> bool:
        """True if the term carries expansion leftovers (laurent constants or
        xi-derivative atoms) that a clean closed form should not contain."""
        for atom, _ in self.xi:
            if atom.kind == "laurent" or (atom.kind == "xi" and atom.deriv > 0):
                return True
        return False

    def __repr__(self):
        return f"Term({self.plain()})"

    def plain(self) -> str:
        bits = [str(self.scalar)]
        if not self.num.is_constant or self.num.const_value() != 1:
            bits.append(f"({self.num!r})")
        for lf, e in self.den:
            bits.append(f"({lf.text()})^-{e}" if e != 1 else f"({lf.text()})^-1")
        for atom, e in self.xi:
            if atom.kind == "laurent":
                core = f"a{atom.index}"
            else:
                d = "'" * atom.deriv
                core = f"xi{d}({atom.arg.text()})"
            bits.append(core if e == 1 else f"{core}^{e}")
        if self.expf:
            inner = " + ".join(f"({f.text()})*{v}" for v, f in self.expf)
            bits.append(f"exp({inner})")
        return " * ".join(bits)


class SingularSubstitutionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# expressions


class SymExpr:
    """Canonical finite sum of terms."""

    __slots__ = ("terms", "provenance")

    def __init__(self, terms: Sequence[Term] = (), provenance: Mapping[str, str] | None = None):
        self.terms = tuple(terms)
        self.provenance = dict(provenance or {})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> frozenset:
        out = set()
        for t in self.terms:
            out |= t.variables()
        return frozenset(out)

    def __add__(self, other: "SymExpr") -> "SymExpr":
        return SymExpr(self.terms + other.terms, self.provenance)

    def scaled(self, k) -> "SymExpr":
        return SymExpr([t.scaled(k) for t in self.terms], self.provenance)

    def map_terms(self, fn: Callable[[Term], Term]) -> "SymExpr":
        return SymExpr([fn(t) for t in self.terms], self.provenance)

    def with_provenance(self, **kw) -> "SymExpr":
        p = dict(self.provenance)
        p.update({k: str(v) for k, v in kw.items()})
        return SymExpr(self.terms, p)

    def has_symbolic_residue_atoms(self) -> bool:
        return any(t.has_symbolic_residue_atoms() for t in self.terms)

    def structure(self):
        return tuple(t.structure_key() + (t.scalar,) for t in self.terms)

    def __repr__(self):
        if not self.terms:
            return "SymExpr(0)"
        return "SymExpr(\n  " + "\n+ ".join(t.plain() for t in self.terms) + "\n)"


def simplify(expr: SymExpr) -> SymExpr:
    """Canonical form: cancel xi powers, merge terms with equal xi-signature
    and exponential factor by exact rational-function addition, drop zeros,
    and order terms canonically."""
    groups: dict = {}
    for raw in expr.terms:
        t = raw.canonical()
        if t is None:
            continue
        groups.setdefault(t.group_key(), []).append(t)
    out = []
    for key, ts in groups.items():
        if len(ts) == 1:
            merged = ts[0]
        else:
            # common denominator: per primitive form, the max exponent
            common: dict = {}
            for t in ts:
                for lf, e in t.den:
                    common[lf] = max(common.get(lf, 0), e)
            total = Poly({})
            for t in ts:
                fill = Poly.constant(t.scalar) * t.num
                have = dict(t.den)
                for lf, e in common.items():
                    lack = e - have.get(lf, 0)
                    if lack:
                        fill = fill * Poly.from_linform(lf).pow(lack)
                total = total + fill
            merged = Term(Q(1), total, list(common.items()), ts[0].xi, ts[0].expf).canonical()
            if merged is None:
                continue
        out.append(merged)
    out.sort(key=lambda t: t.structure_key())
    return SymExpr(out, expr.provenance)


def substitute(expr: SymExpr, assignment: Mapping[str, LinForm]) -> SymExpr:
    """Compose every form in the expression with the assignment.

    Raises :class:`SingularSubstitutionError` when a denominator factor
    collapses to the zero form (poles must go through the residue module)."""
    return simplify(expr.map_terms(lambda t: t.substitute(assignment)))


def equals_up_to_scalar(e1: SymExpr, e2: SymExpr, trials: int = 20,
                        evaluator=None, seed: int = 7) -> Optional[Q]:
    """Return q with e1 == q * e2 when the canonical structures match.

    If structures differ, fall back to a numeric ratio test at ``trials``
    random points when an ``evaluator`` (from :mod:`weylzeta.xinum`) is given;
    a stable rational ratio is reconstructed and returned, else ``None``.
    """
    a = simplify(e1)
    b = simplify(e2)
    if a.is_zero and b.is_zero:
        return Q(1)
    if a.is_zero or b.is_zero:
        return None
    if len(a.terms) == len(b.terms):
        keys_a = [t.structure_key() for t in a.terms]
        keys_b = [t.structure_key() for t in b.terms]
        if keys_a == keys_b:
            ratio = a.terms[0].scalar / b.terms[0].scalar
            if all(ta.scalar == ratio * tb.scalar for ta, tb in zip(a.terms, b.terms)):
                return ratio
    if evaluator is None:
        return None
    return evaluator.ratio_test(a, b, trials=trials, seed=seed)


# ---------------------------------------------------------------------------
# period construction (the Weyl-sum expressions)


def _xi_ratio_for_inversions(rs, w) -> list[tuple[XiAtom, int]]:
    from .rootsys import inversion_set, pairing_form

    factors: list[tuple[XiAtom, int]] = []
    for alpha in inversion_set(rs, w):
        arg = pairing_form(rs, rs.coroot(alpha))
        s1, top = xi_of(arg)
        s2, bot = xi_of(arg + 1)
        assert s1 == 1 and s2 == 1, "chamber pairings are positive-leading"
        factors.append((top, 1))
        factors.append((bot, -1))
    return factors


def intertwining_factor(rs, w) -> Term:
    """The xi-ratio factor attached to one Weyl element."""
    return Term(Q(1), Poly.one(), (), _xi_ratio_for_inversions(rs, w), None)


def _denominator_forms(rs, w) -> list[LinForm]:
    lam_w = rs.weyl_apply(w, rs.lambda_vector())
    out = []
    for alpha in rs.simple_roots:
        cor = rs.coroot(alpha)
        form = _dot_forms(lam_w, cor) - 1  # <rho, alpha_check> = 1 for simple alpha
        out.append(form)
    return out


def _dot_forms(vec_forms: Sequence[LinForm], vec: Sequence[Q]) -> LinForm:
    out = LinForm({})
    for f, c in zip(vec_forms, vec):
        if c:
            out = out + f * c
    return out


def build_period(rs) -> SymExpr:
    """Weyl-group sum of xi-ratio factors over simple-pairing denominators;
    exactly |W| terms, one per Weyl element."""
    terms = []
    for w in rs.weyl_elements():
        den = [(f, 1) for f in _denominator_forms(rs, w)]
        terms.append(Term(Q(1), Poly.one(), den, _xi_ratio_for_inversions(rs, w), None))
    expr = SymExpr(terms, {"group": rs.name, "stage": "period"})
    return expr


def build_period_T(rs) -> SymExpr:
    """Period variant carrying exponential factors in a parameter vector.

    Each Weyl term gets exp(<w^-1 lambda + rho, T>) with T a fresh symbolic
    vector sharing the group's coordinate convention (components t1..tr).
    Setting T = 0 recovers :func:`build_period` term by term.
    """
    tvec = rs.parameter_vector("t")
    terms = []
    for w in rs.weyl_elements():
        den = [(f, 1) for f in _denominator_forms(rs, w)]
        lam_winv = rs.weyl_apply(rs.weyl_inverse(w), rs.lambda_vector())
        parts: dict[str, LinForm] = {}
        for i, tf in enumerate(tvec):
            zi = lam_winv[i] + rs.rho_vector()[i]
            for tv, c in tf.coeffs:
                parts[tv] = parts.get(tv, LinForm({})) + zi * c
        expf = make_expfactor(parts)
        terms.append(Term(Q(1), Poly.one(), den, _xi_ratio_for_inversions(rs, w), expf))
    return SymExpr(terms, {"group": rs.name, "stage": "period_T"})


# ---------------------------------------------------------------------------
# display & serialization


def _latex_linform(lf: LinForm) -> str:
    if not lf.coeffs:
        return str(lf.const)
    parts = []
    for v, c in lf.coeffs:
        name = v
        if c == 1:
            parts.append(name)
        elif c == -1:
            parts.append(f"-{name}")
        else:
            parts.append(f"{c}{name}" if c.denominator == 1 else f"\\tfrac{{{c.numerator}}}{{{c.denominator}}}{name}")
    s = parts[0]
    for p in parts[1:]:
        s += f"+{p}" if not p.startswith("-") else p
    if lf.const:
        c = lf.const
        s += f"+{c}" if c > 0 else f"-{-c}"
    return s


def _frac_latex(q: Q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"\\frac{{{q.numerator}}}{{{q.denominator}}}"


def term_to_latex(t: Term) -> str:
    num_bits = []
    if abs(t.scalar) != 1 or (t.num.is_constant and not t.den and not t.xi):
        num_bits.append(_frac_latex(abs(t.scalar)))
    sign = "-" if t.scalar < 0 else "+"
    if not t.num.is_constant:
        num_bits.append(f"\\bigl({t.num!r}\\bigr)")
    den_bits = []
    for lf, e in t.den:
        piece = f"({_latex_linform(lf)})"
        den_bits.append(piece if e == 1 else piece + f"^{{{e}}}")
    frac = "".join(num_bits) if num_bits else ""
    if den_bits:
        frac = f"\\frac{{{frac or '1'}}}{{{''.join(den_bits)}}}"
    xi_bits = []
    for atom, e in t.xi:
        if atom.kind == "laurent":
            core = f"a_{{{atom.index}}}"
        else:
            prime = "'" * atom.deriv
            core = f"\\xi{prime}\\bigl({_latex_linform(atom.arg)}\\bigr)"
        if e == 1:
            xi_bits.append(core)
        else:
            xi_bits.append(core + f"^{{{e}}}")
    exp_bit = ""
    if t.expf:
        inner = "+".join(f"({_latex_linform(f)}){v}" for v, f in t.expf)
        exp_bit = f"e^{{{inner}}}"
    return sign + " " + "\\,".join(b for b in [frac, *xi_bits, exp_bit] if b)


def to_display(expr: SymExpr, fmt: str = "plain") -> str:
    """Render as 'latex', 'plain', or lossless 'json'."""
    if fmt == "json":
        return to_json(expr)
    if fmt == "latex":
        return "\n".join(term_to_latex(t) for t in expr.terms)
    if fmt == "plain":
        return "\n".join(("+ " if t.scalar >= 0 else "- ") + t.scaled(1 if t.scalar >= 0 else -1).plain()
                         for t in expr.terms)
    raise ValueError(f"unknown format {fmt!r}")


def _lf_json(lf: LinForm):
    d = {v: str(c) for v, c in lf.coeffs}
    d["const"] = str(lf.const)
    return d


def _lf_from_json(d) -> LinForm:
    const = Q(d.get("const", "0"))
    return LinForm({v: Q(c) for v, c in d.items() if v != "const"}, const)


def to_json(expr: SymExpr) -> str:
    terms = []
    for t in expr.terms:
        xi = []
        for atom, e in t.xi:
            if atom.kind == "laurent":
                xi.append({"atom": {"kind": "laurent", "index": atom.index}, "exp": e})
            else:
                entry = {"kind": "xi", "form": _lf_json(atom.arg)}
                if atom.deriv:
                    entry["deriv"] = atom.deriv
                xi.append({"atom": entry, "exp": e})
        item = {
            "scalar": str(t.scalar),
            "lin": [{"form": _lf_json(lf), "exp": -e} for lf, e in t.den],
            "xi": xi,
            "expfactor": {v: _lf_json(f) for v, f in t.expf} if t.expf else None,
        }
        if not t.num.is_constant or t.num.const_value() != 1:
            item["num"] = [{"mono": {v: e for v, e in m}, "coeff": str(c)}
                           for m, c in sorted(t.num.terms.items())]
        terms.append(item)
    return json.dumps({
        "terms": terms,
        "variables": sorted(expr.variables(), key=_var_key),
        "provenance": expr.provenance,
    }, indent=1)


def from_json(text: str) -> SymExpr:
    data = json.loads(text)
    terms = []
    for item in data["terms"]:
        den = []
        num = Poly.one()
        for entry in item.get("lin", []):
            lf = _lf_from_json(entry["form"])
            e = int(entry["exp"])
            if e < 0:
                den.append((lf, -e))
            elif e > 0:
                num = num * Poly.from_linform(lf).pow(e)
        if "num" in item:
            p = Poly({})
            for mono in item["num"]:
                key = tuple(sorted(mono["mono"].items(), key=lambda ve: _var_key(ve[0])))
                p = p + Poly({key: Q(mono["coeff"])})
            num = num * p
        scalar = Q(item["scalar"])
        xi = []
        for entry in item.get("xi", []):
            a = entry["atom"]
            e = int(entry["exp"])
            if a.get("kind") == "laurent":
                xi.append((xi_laurent(int(a["index"])), e))
            else:
                sgn, atom = xi_of(_lf_from_json(a["form"]), int(a.get("deriv", 0)))
                if sgn < 0 and e % 2:
                    scalar = -scalar
                xi.append((atom, e))
        expf = None
        if item.get("expfactor"):
            expf = make_expfactor({v: _lf_from_json(f) for v, f in item["expfactor"].items()})
        terms.append(Term(scalar, num, den, xi, expf))
    return simplify(SymExpr(terms, data.get("provenance")))
