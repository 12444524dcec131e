import random
from fractions import Fraction as Q

import pytest

from weylzeta.pipeline import parabolic_descriptor
from weylzeta.residue import (
    DepthError,
    Hyperplane,
    ZeroResidueError,
    hyperplanes_for,
    iterated_residue,
    numeric_residue_oracle,
    residue,
    slice_assignment,
    term_laurent,
)
from weylzeta.rootsys import ParabolicDescriptor, build_root_system
from weylzeta.symexpr import (
    LinForm,
    Poly,
    SymExpr,
    Term,
    build_period,
    simplify,
    xi_of,
)


def lf(coeffs, const=0):
    return LinForm({k: Q(v) for k, v in coeffs.items()}, Q(const))


def H(form, pivot):
    return Hyperplane(form=form, root=(), pivot=pivot)


def one_over(form):
    return Term(Q(1), Poly.one(), [(form, 1)])


def xi_factor(form, e=1, deriv=0):
    sgn, atom = xi_of(form, deriv)
    return Term(Q(sgn if e % 2 else 1), Poly.one(), (), [(atom, e)])


# -- basic Laurent extraction -------------------------------------------------


def test_residue_of_simple_pole_is_value_at_zero():
    h = H(lf({"z": 1}), "z")
    g = SymExpr([one_over(lf({"z": 1})).times(one_over(lf({"w": 1}, 2)))])
    out = residue(g, h)
    assert len(out.terms) == 1
    assert out.terms[0].den == ((lf({"w": 1}, 2), 1),)


def test_residue_of_xi_poles():
    h = H(lf({"z": 1}), "z")
    # residue of xi(z+1) at z=0 is +1; of xi(z) is -1
    assert residue(SymExpr([xi_factor(lf({"z": 1}, 1))]), h).terms[0].scalar == 1
    assert residue(SymExpr([xi_factor(lf({"z": 1}))]), h).terms[0].scalar == -1


def test_residue_of_regular_term_is_exactly_zero():
    h = H(lf({"z": 1}), "z")
    g = SymExpr([one_over(lf({"z": 1}, 3)), xi_factor(lf({"z": 2}, 5))])
    assert residue(g, h).is_zero


def test_residue_linearity():
    h = H(lf({"z": 1}), "z")
    e1 = SymExpr([one_over(lf({"z": 1})).times(xi_factor(lf({"w": 1}, 2)))])
    e2 = SymExpr([one_over(lf({"z": 1})).times(one_over(lf({"w": 1})))])
    lhs = residue(simplify(e1 + e2), h)
    rhs = simplify(residue(e1, h) + residue(e2, h))
    assert lhs.structure() == rhs.structure()


def test_double_pole_produces_laurent_constant():
    # xi(z+1)/z has residue a0 + (series constant) at z=0:
    #   xi(1+u)/u = 1/u^2 + a0/u + ...
    h = H(lf({"z": 1}), "z")
    g = SymExpr([xi_factor(lf({"z": 1}, 1)).times(one_over(lf({"z": 1})))])
    out = residue(g, h)
    assert len(out.terms) == 1
    atom, e = out.terms[0].xi[0]
    assert atom.kind == "laurent" and atom.index == 0 and e == 1
    assert out.has_symbolic_residue_atoms()


def test_depth_error_beyond_stored_series():
    h = H(lf({"z": 1}), "z")
    deep = xi_factor(lf({"z": 1}, 1)).times(
        Term(Q(1), Poly.one(), [(lf({"z": 1}), 5)]))
    with pytest.raises(DepthError):
        residue(SymExpr([deep]), h)


def test_term_laurent_orders():
    h = H(lf({"z": 1}), "z")
    t = one_over(lf({"z": 1})).times(one_over(lf({"z": 1}, 1)))
    mino, data = term_laurent(t, h, order=1)
    assert mino == -1
    # 1/(u(u+1)) = 1/u - 1 + u - ...
    assert data[-1][0].scalar == 1
    assert simplify(SymExpr(data[0])).terms[0].scalar == -1
    assert simplify(SymExpr(data[1])).terms[0].scalar == 1


def test_exp_factor_expansion_in_residue():
    # e^{z x} / z^2 has residue x at z = 0
    from weylzeta.symexpr import make_expfactor

    h = H(lf({"z": 1}), "z")
    t = Term(Q(1), Poly.one(), [(lf({"z": 1}), 2)], (),
             make_expfactor({"x": lf({"z": 1})}))
    out = residue(SymExpr([t]), h)
    assert len(out.terms) == 1
    term = out.terms[0]
    assert term.num == Poly.from_linform(lf({"x": 1}))
    assert term.expf is None  # exponent vanished at u = 0


# -- hyperplane selection ------------------------------------------------------


def test_hyperplanes_for_sl_removing_last_root():
    # removing the last simple root leaves forms z_i - z_{i+1} - 1, i=1..n-2
    for n in (4, 5):
        rs = build_root_system("A", n - 1)
        pd = ParabolicDescriptor(name="x", removed_index=n - 2, survivor=f"z{n-1}",
                                 rescale=(Q(1), Q(0)))
        hps = hyperplanes_for(rs, pd)
        assert len(hps) == n - 2
        for i, h in enumerate(hps):
            assert h.form == lf({f"z{i+1}": 1, f"z{i+2}": -1}, -1)
            assert h.pivot == f"z{i+1}"


def test_hyperplanes_for_sp4_removing_long_root():
    rs = build_root_system("C", 2)
    pd = ParabolicDescriptor(name="x", removed_index=1, survivor="z2",
                             rescale=(Q(1), Q(0)))
    (h,) = hyperplanes_for(rs, pd)
    assert h.form == lf({"z1": 1, "z2": -1}, -1)


def test_hyperplanes_for_g2():
    rs = build_root_system("G", 2)
    long_removed = parabolic_descriptor("G2", "Plong")
    (h1,) = hyperplanes_for(rs, long_removed)
    assert h1.form == lf({"z1": 1, "z2": -1}, -1)
    short_removed = parabolic_descriptor("G2", "Pshort")
    (h2,) = hyperplanes_for(rs, short_removed)
    assert h2.form == lf({"z2": 1}, -1)


def test_slice_assignment_lands_on_hyperplane():
    h = H(lf({"z1": 1, "z2": 2}, -1), "z2")
    amap = slice_assignment(h)
    assert h.form.substitute(amap) == LinForm({})


# -- iterated residues ---------------------------------------------------------


def test_iterated_residue_rank1_passthrough():
    rs = build_root_system("A", 1)
    pd = parabolic_descriptor("SL2", "B")
    out = iterated_residue(build_period(rs), rs, pd)
    assert len(out.terms) == 2
    assert out.variables() == {"s"}


def test_iterated_residue_counts():
    rs = build_root_system("A", 2)
    out = iterated_residue(build_period(rs), rs, parabolic_descriptor("SL3", "P21"))
    assert len(out.terms) == 5  # six Weyl terms, one with zero residue


def test_zero_iterated_residue_raises():
    rs = build_root_system("A", 2)
    pd = parabolic_descriptor("SL3", "P21")
    pole_free = SymExpr([Term(Q(1), Poly.one(), [(lf({"z1": 1}, 7), 1)])])
    with pytest.raises(ZeroResidueError):
        iterated_residue(pole_free, rs, pd)


# -- numeric contour oracle ------------------------------------------------------


def test_oracle_simple_pole(ev):
    h = H(lf({"z": 1}), "z")
    g = SymExpr([one_over(lf({"z": 1}))])
    rep = numeric_residue_oracle(g, h, {"z": 0.0}, radius=0.3, samples=64,
                                 evaluator=ev)
    assert abs(rep.contour_value - 1.0) < 1e-10


def test_oracle_xi_pole(ev):
    h = H(lf({"z": 1}), "z")
    g = SymExpr([xi_factor(lf({"z": 1}, 1))])
    rep = numeric_residue_oracle(g, h, {"z": 0.0}, radius=0.25, samples=128,
                                 evaluator=ev)
    assert abs(rep.contour_value - 1.0) < 1e-8
    g0 = SymExpr([xi_factor(lf({"z": 1}))])
    rep0 = numeric_residue_oracle(g0, h, {"z": 0.0}, radius=0.25, samples=128,
                                  evaluator=ev)
    assert abs(rep0.contour_value + 1.0) < 1e-8


def test_oracle_rejects_radius_hitting_other_poles(ev):
    h = H(lf({"z": 1}), "z")
    g = SymExpr([one_over(lf({"z": 1})).times(one_over(lf({"z": 1}, Q(-1, 5))))])
    with pytest.raises(ValueError):
        numeric_residue_oracle(g, h, {"z": 0.0}, radius=0.21, samples=64,
                               evaluator=ev)


def test_oracle_matches_symbolic_residue_on_period(ev):
    """Cross-module consistency at seeded anchors (the full sweep runs in the
    acceptance suite)."""
    rs = build_root_system("A", 2)
    per = build_period(rs)
    h = Hyperplane(form=lf({"z1": 1, "z2": -1}, -1), root=(), pivot="z1")
    sym = residue(per, h)
    rng = random.Random(11)
    checked = 0
    while checked < 3:
        z2 = complex(rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.0))
        try:
            rep = numeric_residue_oracle(per, h, {"z1": 0.0, "z2": z2},
                                         radius=0.04, samples=256, evaluator=ev)
        except ValueError:
            continue
        val, _ = ev.eval_expr(sym, {"z2": z2})
        pivot_coeff = complex(h.form.coeff("z1"))
        assert abs(complex(rep.contour_value) * pivot_coeff - complex(val)) \
            <= 1e-7 * (1 + abs(complex(val)))
        checked += 1
