import random
from fractions import Fraction as Q

import pytest

from weylzeta.rootsys import (
    UnsupportedGroupError,
    build_root_system,
    inversion_set,
    pairing,
    pairing_form,
    weyl_group,
)
from weylzeta.symexpr import LinForm


POS_COUNTS = {
    ("A", 1): 1, ("A", 2): 3, ("A", 3): 6, ("A", 4): 10,
    ("B", 2): 4, ("C", 2): 4, ("C", 3): 9, ("D", 3): 6, ("G", 2): 6,
}
WEYL_ORDERS = {
    ("A", 1): 2, ("A", 2): 6, ("A", 3): 24, ("A", 4): 120,
    ("B", 2): 8, ("C", 2): 8, ("C", 3): 48, ("D", 3): 24, ("G", 2): 12,
}


@pytest.mark.parametrize("fam,rank", sorted(POS_COUNTS))
def test_counts_and_rho(fam, rank):
    rs = build_root_system(fam, rank)
    assert len(rs.positive_roots) == POS_COUNTS[(fam, rank)]
    assert len(weyl_group(rs)) == WEYL_ORDERS[(fam, rank)]
    # <rho, alpha_check> = 1 for every simple root
    for alpha in rs.simple_roots:
        cor = rs.coroot(alpha)
        assert sum(r * c for r, c in zip(rs.rho, cor)) == 1
    # sum of positive roots is exactly 2 rho
    double = [sum(r[i] for r in rs.positive_roots) for i in range(rs.ambient_dim)]
    assert double == [2 * c for c in rs.rho]


def test_unsupported_families():
    with pytest.raises(UnsupportedGroupError):
        build_root_system("G", 3)
    with pytest.raises(UnsupportedGroupError):
        build_root_system("E", 6)
    with pytest.raises(UnsupportedGroupError):
        build_root_system("B", 1)


def test_c2_convention():
    rs = build_root_system("C", 2)
    assert set(rs.simple_roots) == {(Q(1), Q(-1)), (Q(0), Q(2))}
    assert rs.rho == (Q(2), Q(1))


def test_cartan_integers_match_family():
    # <alpha_i, alpha_j_check> reproduces the Cartan matrix
    expected = {
        ("A", 2): [[2, -1], [-1, 2]],
        ("C", 2): [[2, -1], [-2, 2]],
        ("G", 2): [[2, -1], [-3, 2]],
    }
    for (fam, rank), cartan in expected.items():
        rs = build_root_system(fam, rank)
        for i, ai in enumerate(rs.simple_roots):
            for j, aj in enumerate(rs.simple_roots):
                cor = rs.coroot(aj)
                val = sum(a * c for a, c in zip(ai, cor))
                assert val == cartan[i][j], (fam, rank, i, j)


def test_weyl_closure_and_lengths():
    for fam, rank in [("A", 2), ("A", 3), ("C", 2), ("G", 2)]:
        rs = build_root_system(fam, rank)
        W = weyl_group(rs)
        neg = rs._neg_set
        pos = rs._pos_set
        for w in W:
            inv = inversion_set(rs, w)  # raises if the image is not a root
            assert len(inv) == w.length
        # length subadditivity over all pairs
        by_matrix = {w.matrix: w for w in W}
        from weylzeta.rootsys import _matmul

        for w1 in W:
            for w2 in W:
                prod = by_matrix[_matmul(w1.matrix, w2.matrix)]
                assert prod.length <= w1.length + w2.length


def test_identity_and_longest_inversions():
    rs = build_root_system("A", 3)
    W = weyl_group(rs)
    ident = [w for w in W if w.length == 0][0]
    assert inversion_set(rs, ident) == []
    w0 = rs.longest_element()
    assert len(inversion_set(rs, w0)) == len(rs.positive_roots)


def test_a1_pairing_and_simple_reflection():
    rs = build_root_system("A", 1)
    alpha = rs.positive_roots[0]
    assert pairing(rs, alpha).text() == "2*z1"  # z1 - z2 with z2 eliminated
    W = weyl_group(rs)
    s = [w for w in W if w.length == 1][0]
    assert inversion_set(rs, s) == [alpha]


def test_g2_pairings():
    rs = build_root_system("G", 2)
    texts = {pairing(rs, a).text() for a in rs.positive_roots}
    assert texts == {"z1 - z2", "z2", "z1 + 2*z2", "2*z1 + z2", "z1", "z1 + z2"}


def test_a_family_elimination_consistency():
    """Pairings in the eliminated basis agree with the n-variable forms under
    the sum-zero constraint at random rational points."""
    rng = random.Random(7)
    for n in (3, 4, 5):
        rs = build_root_system("A", n - 1)
        for _ in range(100):
            free = {f"z{i+1}": Q(rng.randint(-50, 50), rng.randint(1, 20))
                    for i in range(n - 1)}
            full = dict(free)
            full[f"z{n}"] = -sum(free.values())
            for alpha in rs.positive_roots:
                i = alpha.index(Q(1))
                j = alpha.index(Q(-1))
                expected = full[f"z{i+1}"] - full[f"z{j+1}"]
                got = pairing(rs, alpha).eval(free)
                assert got == expected


def test_pairing_rejects_non_roots():
    rs = build_root_system("A", 2)
    with pytest.raises(ValueError):
        pairing(rs, (Q(1), Q(1), Q(-2)))


def test_dump_is_json_with_rational_strings():
    import json

    rs = build_root_system("C", 2)
    data = json.loads(rs.dump())
    assert data["weyl_order"] == 8
    assert data["rho"] == ["2", "1"]
    assert len(data["weyl_matrices"]) == 8
