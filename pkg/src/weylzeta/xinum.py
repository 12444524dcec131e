"""High-precision numerics: complex Gamma, zeta, the completed zeta xi and
its derivatives, the Laurent constants of xi at its pole, and evaluation of
symbolic expressions at complex points with pole-proximity diagnostics.

All arithmetic is mpmath at a configurable decimal precision.  The symbolic
layer never sees a float; this module is the only place they appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

import mpmath as mp

from .symexpr import SymExpr, Term, XiAtom

__all__ = [
    "EvalConfig",
    "Evaluator",
    "PoleHitError",
    "default_evaluator",
    "gamma",
    "zeta",
    "xi",
    "xi_deriv",
]


class PoleHitError(ArithmeticError):
    """Evaluation landed exactly on a pole of some factor."""

    def __init__(self, what: str, where):
        super().__init__(f"pole of {what} at {where}")
        self.what = what
        self.where = where


@dataclass
class EvalConfig:
    precision: int = 30          # working decimal digits
    pole_delta: float = 1e-6     # proximity threshold for diagnostics
    max_imag: float = 200.0      # height of the supported strip
    contour_samples: int = 128   # for derivative circles and constants

    def __post_init__(self):
        if self.precision < 15:
            raise ValueError("precision must be at least 15 digits")
        if self.pole_delta <= 0:
            raise ValueError("pole_delta must be positive")


def _q2mp(q: Q):
    return mp.mpf(q.numerator) / mp.mpf(q.denominator)


class Evaluator:
    """Stateless evaluation apart from read-only constant caches."""

    def __init__(self, cfg: EvalConfig | None = None):
        self.cfg = cfg or EvalConfig()
        self._xi_cache: dict = {}
        self._laurent: list | None = None

    # -- special functions -------------------------------------------------

    def _dps(self, extra: int = 0):
        return mp.workdps(self.cfg.precision + extra)

    def gamma(self, s):
        s = mp.mpc(s)
        if s.imag == 0 and s.real <= 0 and s.real == mp.floor(s.real):
            raise PoleHitError("gamma", s)
        with self._dps(5):
            return mp.gamma(s)

    def zeta(self, s):
        s = mp.mpc(s)
        if s == 1:
            raise PoleHitError("zeta", s)
        with self._dps(5):
            return mp.zeta(s)

    def xi(self, s):
        """Completed zeta: pi^(-s/2) Gamma(s/2) zeta(s); poles at 0 and 1."""
        s = mp.mpc(s)
        if s == 0 or s == 1:
            raise PoleHitError("xi", s)
        key = (s.real, s.imag, 0)
        hit = self._xi_cache.get(key)
        if hit is not None:
            return hit
        with self._dps(8):
            val = mp.power(mp.pi, -s / 2) * mp.gamma(s / 2) * mp.zeta(s)
        self._xi_cache[key] = val
        return val

    def xi_deriv(self, s, k: int):
        """k-th derivative of xi via Cauchy-circle quadrature."""
        if k == 0:
            return self.xi(s)
        s = mp.mpc(s)
        dist = min(abs(s), abs(s - 1))
        if dist < 1e-3:
            raise PoleHitError("xi_deriv circle", s)
        key = (s.real, s.imag, k)
        hit = self._xi_cache.get(key)
        if hit is not None:
            return hit
        r = min(mp.mpf("0.3"), dist / 2)
        n = max(self.cfg.contour_samples, 16 * (k + 1))
        with self._dps(15):
            total = mp.mpc(0)
            for j in range(n):
                w = mp.expjpi(2 * mp.mpf(j) / n)
                total += self.xi(s + r * w) / w ** k
            val = mp.factorial(k) * total / (n * r ** k)
        self._xi_cache[key] = val
        return val

    # -- Laurent constants of xi at its pole ---------------------------------

    def laurent_constants(self, depth: int = 4) -> list:
        """Constants a_0..a_{depth-1} with xi(1+e) = 1/e + sum a_k e^k.

        Computed by contour extraction and cross-checked against an
        independent series-composition route.
        """
        if self._laurent is not None and len(self._laurent) >= depth:
            return self._laurent[:depth]
        contour = self._laurent_contour(depth)
        series = self._laurent_series(depth)
        tol = mp.mpf(10) ** (-(self.cfg.precision - 5))
        for a, b in zip(contour, series):
            if abs(a - b) > tol * (1 + abs(a)):
                raise AssertionError(
                    f"laurent constant routes disagree: {a} vs {b}")
        self._laurent = [(a + b) / 2 for a, b in zip(contour, series)]
        return self._laurent[:depth]

    def _laurent_contour(self, depth: int) -> list:
        n = max(self.cfg.contour_samples, 256)
        r = mp.mpf("0.5")
        with self._dps(15):
            out = []
            samples = []
            for j in range(n):
                w = mp.expjpi(2 * mp.mpf(j) / n)
                eps = r * w
                samples.append((w, self.xi(1 + eps) - 1 / eps))
            for k in range(depth):
                total = mp.mpc(0)
                for w, g in samples:
                    total += g / w ** k
                out.append((total / (n * r ** k)).real)
        return out

    def _laurent_series(self, depth: int) -> list:
        """Independent route: multiply the expansions of the three factors
        pi^(-s/2), Gamma(s/2), zeta(s) at s = 1 (Stieltjes constants for the
        zeta part)."""
        with self._dps(15):
            K = depth + 1
            lnpi = mp.log(mp.pi)
            A = [mp.power(mp.pi, mp.mpf(-1) / 2) * (-lnpi / 2) ** k / mp.factorial(k)
                 for k in range(K)]
            gtay = mp.taylor(mp.gamma, mp.mpf(1) / 2, K)
            B = [gtay[k] / mp.mpf(2) ** k for k in range(K)]
            # zeta(1+e) = 1/e + sum_k (-1)^k gamma_k e^k / k!
            C_reg = [(-1) ** k * mp.stieltjes(k) / mp.factorial(k) for k in range(K)]
            AB = [mp.fsum(A[i] * B[k - i] for i in range(k + 1)) for k in range(K)]
            # (AB)(e) * (1/e + C_reg(e)); pole coefficient AB[0] must be 1
            out = []
            for k in range(depth):
                val = AB[k + 1]
                for i in range(k + 1):
                    val += AB[i] * C_reg[k - i]
                out.append(val.real)
        return out

    # -- expression evaluation ------------------------------------------------

    def eval_expr(self, expr: SymExpr, point, collect_offending: bool = True):
        """Evaluate at a complex point (mapping variable -> number).

        Returns (value, diagnostics) with diagnostics carrying the
        near-singular flag and the offending factors.  Exact pole hits raise
        :class:`PoleHitError` naming the factor.
        """
        delta = self.cfg.pole_delta
        pt = {v: mp.mpc(x) for v, x in point.items()}
        offending: list[str] = []
        with self._dps():
            total = mp.mpc(0)
            for t in expr.terms:
                total += self._eval_term(t, pt, delta, offending)
        diag = {"near_singular": bool(offending), "offending": offending}
        return total, diag

    def _eval_term(self, t: Term, pt, delta, offending):
        val = mp.mpc(_q2mp(t.scalar))
        if not t.num.is_constant:
            val *= mp.mpc(self._eval_poly(t.num, pt))
        else:
            c = t.num.const_value()
            if c != 1:
                val *= _q2mp(c)
        for lf, e in t.den:
            x = self._eval_linform(lf, pt)
            if x == 0:
                raise PoleHitError(f"linear factor {lf.text()}", x)
            if abs(x) < delta:
                offending.append(f"linear factor {lf.text()}")
            val /= x ** e
        for atom, e in t.xi:
            if atom.kind == "laurent":
                a = self.laurent_constants(atom.index + 1)[atom.index]
                val *= a ** e
                continue
            arg = self._eval_linform(atom.arg, pt)
            if arg == 0 or arg == 1:
                raise PoleHitError(f"xi factor xi({atom.arg.text()})", arg)
            if min(abs(arg), abs(arg - 1)) < delta:
                offending.append(f"xi factor xi({atom.arg.text()})")
            if abs(mp.im(arg)) > self.cfg.max_imag:
                offending.append(f"height beyond supported strip: {atom.arg.text()}")
            val *= self.xi_deriv(arg, atom.deriv) ** e if atom.deriv else self.xi(arg) ** e
        if t.expf:
            ex = mp.mpc(0)
            for tv, f in t.expf:
                ex += pt[tv] * self._eval_linform(f, pt)
            val *= mp.exp(ex)
        return val

    @staticmethod
    def _eval_linform(lf, pt):
        acc = mp.mpc(_q2mp(lf.const))
        for v, c in lf.coeffs:
            acc += _q2mp(c) * pt[v]
        return acc

    @staticmethod
    def _eval_poly(p, pt):
        acc = mp.mpc(0)
        for mono, c in p.terms.items():
            term = mp.mpc(_q2mp(c))
            for v, e in mono:
                term *= pt[v] ** e
            acc += term
        return acc

    # -- randomized comparisons -------------------------------------------------

    def random_points(self, variables, trials: int, seed: int, box: float = 4.0,
                      expr_for_poles: SymExpr | None = None):
        """Seeded complex sample points, resampled away from near-singular
        loci of the given expression (bounded retries)."""
        import random

        rng = random.Random(seed)
        pts = []
        attempts = 0
        while len(pts) < trials and attempts < trials * 50:
            attempts += 1
            pt = {v: complex(rng.uniform(-box, box), rng.uniform(-box, box))
                  for v in variables}
            if expr_for_poles is not None:
                try:
                    _, diag = self.eval_expr(expr_for_poles, pt)
                except PoleHitError:
                    continue
                if diag["near_singular"]:
                    continue
            pts.append(pt)
        if len(pts) < trials:
            raise RuntimeError("could not sample enough pole-free points")
        return pts

    def ratio_test(self, e1: SymExpr, e2: SymExpr, trials: int = 20,
                   seed: int = 7, rel_tol: float = 1e-9):
        """Rational ratio q with e1 ~= q * e2 at seeded sample points, or
        None when the ratio is unstable."""
        variables = sorted(e1.variables() | e2.variables())
        pts = self.random_points(variables, trials, seed,
                                 expr_for_poles=e1 + e2)
        ratios = []
        for pt in pts:
            v1, _ = self.eval_expr(e1, pt)
            v2, _ = self.eval_expr(e2, pt)
            if abs(v2) < 1e-25:
                continue
            ratios.append(v1 / v2)
        if not ratios:
            return None
        base = ratios[0]
        for r in ratios[1:]:
            if abs(r - base) > rel_tol * (1 + abs(base)):
                return None
        if abs(mp.im(base)) > rel_tol * (1 + abs(base)):
            return None
        # small-denominator reconstruction only: a transcendental ratio must
        # be rejected, not approximated
        frac = Q(float(mp.re(base))).limit_denominator(2000)
        if abs(mp.re(base) - _q2mp(frac)) > rel_tol * (1 + abs(base)):
            return None
        return frac


_default: Evaluator | None = None


def default_evaluator() -> Evaluator:
    global _default
    if _default is None:
        _default = Evaluator()
    return _default


def gamma(s):
    return default_evaluator().gamma(s)


def zeta(s):
    return default_evaluator().zeta(s)


def xi(s):
    return default_evaluator().xi(s)


def xi_deriv(s, k: int):
    return default_evaluator().xi_deriv(s, k)
