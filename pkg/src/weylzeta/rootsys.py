"""Root systems, Weyl groups, and the coordinate conventions of the engine.

Families A, B, C, D and G2 are realized in an ambient rational vector space
with exact coordinates.  The symbolic weight vector lives in per-family
coordinates:

* A_{n-1}: variables z1..zn with the sum-zero constraint eliminated, so the
  ambient vector is (z1, ..., z_{n-1}, -(z1+...+z_{n-1})).
* B_n / C_n / D_n: unconstrained z1..zn in the orthonormal basis.
* G2: (z1, z2) against the basis (2*short + long, short + long), realized
  inside the sum-zero hyperplane of Q^3.

Weyl elements are stored as exact orthogonal matrices so that the action on
affine forms is a single matrix application.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .symexpr import LinForm, Q

Vector = tuple  # tuple of Fraction
Matrix = tuple  # tuple of row tuples

__all__ = [
    "RootSystem",
    "WeylElement",
    "ParabolicDescriptor",
    "build_root_system",
    "weyl_group",
    "inversion_set",
    "pairing",
    "pairing_form",
    "UnsupportedGroupError",
]

WEYL_SIZE_CAP = 50000


class UnsupportedGroupError(ValueError):
    pass


def _vec(*xs) -> Vector:
    return tuple(Q(x) for x in xs)


def _dot(a: Vector, b: Vector) -> Q:
    return sum((x * y for x, y in zip(a, b)), Q(0))


def _matvec(m: Matrix, v: Vector) -> Vector:
    return tuple(sum((row[j] * v[j] for j in range(len(v))), Q(0)) for row in m)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Q(0)) for j in range(n))
        for i in range(n)
    )


def _identity(n: int) -> Matrix:
    return tuple(tuple(Q(1) if i == j else Q(0) for j in range(n)) for i in range(n))


def _transpose(m: Matrix) -> Matrix:
    n = len(m)
    return tuple(tuple(m[j][i] for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class WeylElement:
    word: tuple  # reduced word in simple reflection indices (0-based)
    matrix: Matrix
    length: int

    def __hash__(self):
        return hash(self.matrix)


@dataclass(frozen=True)
class ParabolicDescriptor:
    """A maximal parabolic: one removed simple root, the rest retained."""

    name: str
    removed_index: int          # index into simple_roots
    survivor: str               # coordinate variable left after all residues
    rescale: tuple              # (a, b): survivor -> a*s + b
    aliases: tuple = ()

    def retained_indices(self, rank: int) -> list[int]:
        return [i for i in range(rank) if i != self.removed_index]


class RootSystem:
    """Exact root-system data plus the symbolic coordinate convention."""

    def __init__(self, family: str, rank: int):
        family = family.upper()
        if family == "A" and rank >= 1:
            pass
        elif family in ("B", "C", "D") and rank >= 2:
            pass
        elif family == "G" and rank == 2:
            pass
        else:
            raise UnsupportedGroupError(f"unsupported family/rank: {family}{rank}")
        self.family = family
        self.rank = rank
        self.name = f"{family}{rank}"
        self._build_roots()
        self._weyl: list[WeylElement] | None = None
        self._matrix_index: dict | None = None

    # -- construction --------------------------------------------------------

    def _build_roots(self):
        fam, n = self.family, self.rank
        if fam == "A":
            dim = n + 1
            e = lambda i: tuple(Q(1) if j == i else Q(0) for j in range(dim))
            simple = [tuple(a - b for a, b in zip(e(i), e(i + 1))) for i in range(n)]
            pos = []
            for i in range(dim):
                for j in range(i + 1, dim):
                    pos.append(tuple(a - b for a, b in zip(e(i), e(j))))
        elif fam in ("B", "C", "D"):
            dim = n
            e = lambda i: tuple(Q(1) if j == i else Q(0) for j in range(dim))
            diff = lambda i, j: tuple(a - b for a, b in zip(e(i), e(j)))
            summ = lambda i, j: tuple(a + b for a, b in zip(e(i), e(j)))
            simple = [diff(i, i + 1) for i in range(n - 1)]
            pos = [diff(i, j) for i in range(n) for j in range(i + 1, n)]
            pos += [summ(i, j) for i in range(n) for j in range(i + 1, n)]
            if fam == "B":
                simple.append(e(n - 1))
                pos += [e(i) for i in range(n)]
            elif fam == "C":
                simple.append(tuple(2 * c for c in e(n - 1)))
                pos += [tuple(2 * c for c in e(i)) for i in range(n)]
            else:
                simple.append(summ(n - 2, n - 1))
        else:  # G2 realized in the sum-zero plane of Q^3
            dim = 3
            a_s = _vec(1, -1, 0)
            a_l = _vec(-2, 1, 1)
            add = lambda u, v: tuple(x + y for x, y in zip(u, v))
            smul = lambda k, u: tuple(Q(k) * x for x in u)
            simple = [a_s, a_l]
            pos = [
                a_s,
                a_l,
                add(a_s, a_l),
                add(smul(2, a_s), a_l),
                add(smul(3, a_s), a_l),
                add(smul(3, a_s), smul(2, a_l)),
            ]
        self.ambient_dim = dim
        self.simple_roots = tuple(simple)
        self.positive_roots = tuple(pos)
        self._pos_set = frozenset(pos)
        self._neg_set = frozenset(tuple(-c for c in r) for r in pos)
        self.rho = tuple(
            sum((r[i] for r in pos), Q(0)) / 2 for i in range(dim)
        )

    def coroot(self, alpha: Vector) -> Vector:
        nn = _dot(alpha, alpha)
        return tuple(2 * c / nn for c in alpha)

    # -- symbolic coordinates --------------------------------------------------

    def variables(self) -> list[str]:
        fam, n = self.family, self.rank
        count = n if fam != "G" else 2
        return [f"z{i+1}" for i in range(count)]

    def parameter_vector(self, prefix: str) -> list[LinForm]:
        return self._coordinate_vector([f"{prefix}{i+1}" for i in range(len(self.variables()))])

    def lambda_vector(self) -> list[LinForm]:
        return self._coordinate_vector(self.variables())

    def _coordinate_vector(self, names: Sequence[str]) -> list[LinForm]:
        fam = self.family
        if fam == "A":
            forms = [LinForm.var(v) for v in names]
            last = LinForm({})
            for f in forms:
                last = last - f
            return forms + [last]
        if fam in ("B", "C", "D"):
            return [LinForm.var(v) for v in names]
        # G2: z1*(2*short+long) + z2*(short+long) = (-z2, -z1, z1+z2)
        z1, z2 = (LinForm.var(n) for n in names)
        return [-z2, -z1, z1 + z2]

    def rho_vector(self) -> list[LinForm]:
        return [LinForm.constant(c) for c in self.rho]

    # -- Weyl group ------------------------------------------------------------

    def weyl_elements(self) -> list[WeylElement]:
        if self._weyl is not None:
            return self._weyl
        dim = self.ambient_dim
        gens = []
        for alpha in self.simple_roots:
            cor = self.coroot(alpha)
            # reflection: v -> v - <v, alpha_check> alpha
            m = tuple(
                tuple(
                    (Q(1) if i == j else Q(0)) - alpha[i] * cor[j]
                    for j in range(dim)
                )
                for i in range(dim)
            )
            gens.append(m)
        ident = _identity(dim)
        seen = {ident: ()}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                word = seen[m]
                for gi, g in enumerate(gens):
                    m2 = _matmul(g, m)
                    if m2 not in seen:
                        seen[m2] = (gi,) + word
                        nxt.append(m2)
            frontier = nxt
            if len(seen) > WEYL_SIZE_CAP:
                raise UnsupportedGroupError(
                    f"Weyl group of {self.name} exceeds cap {WEYL_SIZE_CAP}")
        elems = []
        for m, word in seen.items():
            length = sum(1 for a in self.positive_roots if _matvec(m, a) in self._neg_set)
            elems.append(WeylElement(word=word, matrix=m, length=length))
        elems.sort(key=lambda w: (w.length, w.word))
        self._weyl = elems
        self._matrix_index = {w.matrix: w for w in elems}
        return elems

    def weyl_apply(self, w: WeylElement, forms: Sequence[LinForm]) -> list[LinForm]:
        out = []
        for row in w.matrix:
            f = LinForm({})
            for c, form in zip(row, forms):
                if c:
                    f = f + form * c
            out.append(f)
        return out

    def weyl_inverse(self, w: WeylElement) -> WeylElement:
        self.weyl_elements()
        return self._matrix_index[_transpose(w.matrix)]

    def longest_element(self) -> WeylElement:
        return max(self.weyl_elements(), key=lambda w: w.length)

    # -- misc -------------------------------------------------------------------

    def dump(self) -> str:
        """JSON debug dump with rational entries as strings."""
        def v2s(v):
            return [str(c) for c in v]

        data = {
            "name": self.name,
            "ambient_dim": self.ambient_dim,
            "simple_roots": [v2s(r) for r in self.simple_roots],
            "coroots": [v2s(self.coroot(r)) for r in self.positive_roots],
            "positive_roots": [v2s(r) for r in self.positive_roots],
            "rho": v2s(self.rho),
            "weyl_order": len(self.weyl_elements()),
            "weyl_matrices": [
                [v2s(row) for row in w.matrix] for w in self.weyl_elements()
            ],
        }
        return json.dumps(data, indent=1)


def build_root_system(family: str, rank: int) -> RootSystem:
    return RootSystem(family, rank)


def weyl_group(rs: RootSystem) -> list[WeylElement]:
    return rs.weyl_elements()


def inversion_set(rs: RootSystem, w: WeylElement) -> list[Vector]:
    """Positive roots sent negative by w, in root-list order."""
    out = []
    for alpha in rs.positive_roots:
        img = _matvec(w.matrix, alpha)
        if img in rs._neg_set:
            out.append(alpha)
        elif img not in rs._pos_set:
            raise AssertionError("Weyl image is not a root; closure broken")
    return out


def pairing_form(rs: RootSystem, coroot_vec: Vector) -> LinForm:
    """<lambda, coroot> as an exact form in the coordinate variables."""
    lam = rs.lambda_vector()
    out = LinForm({})
    for f, c in zip(lam, coroot_vec):
        if c:
            out = out + f * c
    return out


def pairing(rs: RootSystem, alpha: Vector) -> LinForm:
    """<lambda, alpha_check> for a root alpha of the system."""
    if alpha not in rs._pos_set and tuple(-c for c in alpha) not in rs._pos_set:
        raise ValueError("not a root of this system")
    return pairing_form(rs, rs.coroot(alpha))
