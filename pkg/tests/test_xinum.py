import random
from fractions import Fraction as Q

import mpmath as mp
import pytest

from weylzeta.symexpr import LinForm, Poly, SymExpr, Term, xi_of
from weylzeta.xinum import EvalConfig, Evaluator, PoleHitError


def lf(coeffs, const=0):
    return LinForm({k: Q(v) for k, v in coeffs.items()}, Q(const))


def tol(ev, off=3):
    return mp.mpf(10) ** (-(ev.cfg.precision - off))


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(precision=10)
    with pytest.raises(ValueError):
        EvalConfig(pole_delta=0)


def test_gamma_values(ev):
    assert abs(ev.gamma(0.5) - mp.sqrt(mp.pi)) < tol(ev)
    assert abs(ev.gamma(5) - 24) < tol(ev)
    # recurrence consistency at 1+i
    assert abs(ev.gamma(1 + 1j) - 1j * ev.gamma(1j)) < tol(ev)
    with pytest.raises(PoleHitError):
        ev.gamma(-3)


def test_zeta_values(ev):
    assert abs(ev.zeta(2) - mp.pi ** 2 / 6) < tol(ev)
    assert abs(ev.zeta(0) + mp.mpf(1) / 2) < tol(ev)
    with pytest.raises(PoleHitError):
        ev.zeta(1)
    # first zero neighborhood: small value and a bracketing sign change of
    # the rotated real restriction
    t0 = 14.134725
    assert abs(ev.zeta(mp.mpc(0.5, t0))) < 1e-5

    def hardy_like(t):
        s = mp.mpc(0.5, t)
        v = ev.xi(s)
        return float(mp.re(v))

    assert hardy_like(t0 - 0.05) * hardy_like(t0 + 0.05) < 0


def test_xi_values_and_fe(ev):
    assert abs(ev.xi(2) - mp.pi / 6) < tol(ev)
    s = mp.mpc(mp.mpf("0.3"), 2)
    assert abs(ev.xi(s) - ev.xi(1 - s)) < tol(ev, 5)  # 1-s = 0.7 - 2i
    rng = random.Random(5)
    for _ in range(100):
        s = mp.mpc(rng.uniform(-8, 9), rng.uniform(-40, 40))
        if min(abs(s), abs(s - 1)) < 1e-3:
            continue
        v = ev.xi(s)
        assert abs(v - ev.xi(1 - s)) < tol(ev, 5) * (1 + abs(v))
        assert abs(ev.xi(mp.conj(s)) - mp.conj(v)) < tol(ev, 5) * (1 + abs(v))
    with pytest.raises(PoleHitError):
        ev.xi(0)
    with pytest.raises(PoleHitError):
        ev.xi(1)


def test_xi_real_no_zeros_on_real_segments(ev):
    """Supports the no-real-zeros assumption used by the residue module.

    With the pole-bearing normalization, xi is strictly negative between its
    poles and strictly positive beyond them; in particular it never changes
    sign inside either segment."""
    inner = [0.01 + k * (0.98 / 40) for k in range(41)]
    outer = [1.01 + k * ((30 - 1.01) / 60) for k in range(61)]
    for x in inner:
        v = ev.xi(x)
        assert abs(mp.im(v)) < tol(ev, 5)
        assert mp.re(v) < 0
    for x in outer:
        v = ev.xi(x)
        assert abs(mp.im(v)) < tol(ev, 5)
        assert mp.re(v) > 0


def test_xi_derivatives_match_finite_differences(ev):
    for s0, k in [(2.0, 1), (3.5, 2), (mp.mpc(2, 1), 1)]:
        d = ev.xi_deriv(s0, k)
        h = mp.mpf("1e-6")
        if k == 1:
            fd = (ev.xi(s0 + h) - ev.xi(s0 - h)) / (2 * h)
        else:
            fd = (ev.xi(s0 + h) - 2 * ev.xi(s0) + ev.xi(s0 - h)) / h ** 2
        assert abs(d - fd) < 1e-8 * (1 + abs(d))


def test_laurent_constants_two_routes_and_decay(ev):
    a = ev.laurent_constants(4)
    # route agreement is asserted inside; check the expansion reproduces xi
    # near its pole to fourth order
    errs = []
    for eps in (mp.mpf("1e-1"), mp.mpf("1e-2"), mp.mpf("1e-3")):
        approx = 1 / eps + sum(a[k] * eps ** k for k in range(4))
        errs.append(abs(ev.xi(1 + eps) - approx))
    assert errs[0] < 1e-3
    # fourth-order decay: each decade in eps gains ~4 decades
    assert errs[1] < errs[0] * 1e-3
    assert errs[2] < errs[1] * 1e-3
    # known closed form of the constant coefficient
    a0 = (mp.euler - mp.log(4 * mp.pi)) / 2
    assert abs(a[0] - a0) < tol(ev, 5)


def test_contour_residues_of_xi(ev):
    n = 512
    for center, expect in [(1, 1), (0, -1)]:
        total = mp.mpc(0)
        r = mp.mpf("0.4")
        for j in range(n):
            w = mp.expjpi(2 * mp.mpf(j) / n)
            total += ev.xi(center + r * w) * (r * w)
        assert abs(total / n - expect) < 1e-10


def test_eval_expr_structure_and_diagnostics(ev):
    # the two-term closed form at s=2: xi(4)/1 - xi(3)/2
    sgn1, xi2s = xi_of(lf({"s": 2}))
    sgn2, xi2s1 = xi_of(lf({"s": 2}, -1))
    e = SymExpr([
        Term(Q(1), Poly.one(), [(lf({"s": 1}, -1), 1)], [(xi2s, 1)]),
        Term(Q(-1), Poly.one(), [(lf({"s": 1}), 1)], [(xi2s1, 1)]),
    ])
    val, diag = ev.eval_expr(e, {"s": 2.0})
    expect = ev.xi(4) - ev.xi(3) / 2
    assert abs(val - expect) < tol(ev, 5)
    assert not diag["near_singular"]

    # near-singular flag close to the pole of the linear factor
    val, diag = ev.eval_expr(e, {"s": 1 + 1e-9})
    assert diag["near_singular"] and diag["offending"]

    with pytest.raises(PoleHitError):
        ev.eval_expr(e, {"s": 1.0})
    with pytest.raises(PoleHitError):
        ev.eval_expr(e, {"s": 0.5})  # xi(2s) pole hit


def test_eval_deterministic(ev):
    sgn, atom = xi_of(lf({"s": 3}, -1))
    e = SymExpr([Term(Q(1, 7), Poly.one(), [(lf({"s": 1}, 2), 1)], [(atom, 2)])])
    v1, _ = ev.eval_expr(e, {"s": 1.25 + 0.5j})
    v2, _ = ev.eval_expr(e, {"s": 1.25 + 0.5j})
    assert v1 == v2


def test_eval_period_value(ev):
    # two-term Weyl sum at z1 = 2.5 (i.e. z = 5): 1/4 - xi(5)/(6 xi(6))
    from weylzeta.rootsys import build_root_system
    from weylzeta.symexpr import build_period

    per = build_period(build_root_system("A", 1))
    val, _ = ev.eval_expr(per, {"z1": 2.5})
    expect = mp.mpf(1) / 4 - ev.xi(5) / (6 * ev.xi(6))
    assert abs(val - expect) < tol(ev, 5)
