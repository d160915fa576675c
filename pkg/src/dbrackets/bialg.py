"""Lie bialgebras inside the big-bracket Poisson algebra.

A bialgebra on U is a bracket element Q_U (two starred, one unstarred
variable) plus a cobracket element Q_U* (one starred, two unstarred) whose
sum self-commutes.  The cobracket constants follow the convention of the
dual presentation, so dualization is an involution on presentations.

For a pair (U, V) the ambient Lie algebra keeps only monomials with at
least one starred and one unstarred variable; the abelian part collects
the monomials in u's and dv's only, and the structure element is
Q_U + Q_U* + Q_V - Q_V* (the sign implementing dualization of the target).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .bigbracket import BBSpace, BigBracketElement, bb_basis
from .engine import GLie, VData
from .lie import LiePresentation, morphism_defect
from .linalgq import Matrix
from .scalars import Scalar


@dataclass(frozen=True)
class BialgebraPresentation:
    """Bracket constants c[i][j][k] and cobracket constants gamma[k][i][j]
    (antisymmetric in i, j); compatibility is checked, never assumed."""

    name: str
    dim: int
    c: tuple
    gamma: tuple

    @staticmethod
    def build(name: str, dim: int,
              brackets: Mapping[tuple[int, int], Mapping[int, Scalar]],
              cobrackets: Mapping[int, Mapping[tuple[int, int], Scalar]]
              ) -> "BialgebraPresentation":
        lie = LiePresentation.from_brackets(name, dim, brackets)
        g = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for k, val in cobrackets.items():
            for (i, j), coeff in val.items():
                if i == j:
                    raise ValueError("cobracket diagonal must vanish")
                g[k][i][j] += Fraction(coeff)
                g[k][j][i] -= Fraction(coeff)
        return BialgebraPresentation(
            name, dim, lie.c, tuple(tuple(tuple(r) for r in m) for m in g))

    def lie_presentation(self) -> LiePresentation:
        return LiePresentation(self.name, self.dim, self.c)

    def dual(self) -> "BialgebraPresentation":
        """Swap bracket and cobracket: (c*)_ij^k = gamma_k^ij and back."""
        d = self.dim
        c = tuple(tuple(tuple(self.gamma[k][i][j] for k in range(d))
                        for j in range(d)) for i in range(d))
        g = tuple(tuple(tuple(self.c[i][j][k] for j in range(d))
                        for i in range(d)) for k in range(d))
        return BialgebraPresentation(f"{self.name}*", d, c, g)


def zero_cobracket(p: LiePresentation) -> BialgebraPresentation:
    z = tuple(tuple(tuple(Fraction(0) for _ in range(p.dim))
                    for _ in range(p.dim)) for _ in range(p.dim))
    return BialgebraPresentation(p.name, p.dim, p.c, z)


# ---------------------------------------------------------------------------
# encodings


def pair_bbspace(bU: BialgebraPresentation, bV: BialgebraPresentation) -> BBSpace:
    return BBSpace(f"T*[2]({bU.name}x{bV.name})[1]",
                   (("u", bU.dim), ("v", bV.dim)))


def single_bbspace(b: BialgebraPresentation) -> BBSpace:
    return BBSpace(f"T*[2]{b.name}[1]", (("u", b.dim),))


def encode_bracket(sp: BBSpace, b: BialgebraPresentation, group: str) -> BigBracketElement:
    """-(1/2) c_ij^k  g_i g_j dg_k (two starred, one unstarred)."""
    items = []
    half = Fraction(-1, 2)
    for i in range(b.dim):
        for j in range(b.dim):
            for k in range(b.dim):
                if b.c[i][j][k]:
                    items.append(((sp.starred_index(group, i),
                                   sp.starred_index(group, j),
                                   sp.unstarred_index(group, k)),
                                  half * b.c[i][j][k]))
    return BigBracketElement.build(sp, items)


def encode_cobracket(sp: BBSpace, b: BialgebraPresentation, group: str) -> BigBracketElement:
    """-(1/2) gamma_k^ij  g_k dg_i dg_j: the dual bracket in the swapped chart."""
    items = []
    half = Fraction(-1, 2)
    for k in range(b.dim):
        for i in range(b.dim):
            for j in range(b.dim):
                if b.gamma[k][i][j]:
                    items.append(((sp.unstarred_index(group, i),
                                   sp.unstarred_index(group, j),
                                   sp.starred_index(group, k)),
                                  half * b.gamma[k][i][j]))
    return BigBracketElement.build(sp, items)


def encode_bialgebra(b: BialgebraPresentation,
                     sp: BBSpace | None = None, group: str = "u"
                     ) -> tuple[BigBracketElement, BigBracketElement, BigBracketElement]:
    """Returns (Q, Q*, compatibility residual {Q+Q*, Q+Q*})."""
    sp = sp or single_bbspace(b)
    q = encode_bracket(sp, b, group)
    qs = encode_cobracket(sp, b, group)
    s = q + qs
    return q, qs, s.bracket(s)


def is_compatible(b: BialgebraPresentation) -> bool:
    return encode_bialgebra(b)[2].is_zero()


def cocycle_defect(b: BialgebraPresentation) -> dict:
    """Independent oracle: the cobracket must be a 1-cocycle of the adjoint
    action on Lambda^2 U; returns the per-pair defect tables."""
    d = b.dim
    out = {}
    for i in range(d):
        for j in range(i + 1, d):
            t = [[Fraction(0)] * d for _ in range(d)]
            # delta([e_i, e_j])
            for k in range(d):
                if b.c[i][j][k]:
                    for a in range(d):
                        for e in range(d):
                            t[a][e] += b.c[i][j][k] * b.gamma[k][a][e]
            # - e_i . delta(e_j) + e_j . delta(e_i)  (adjoint on Lambda^2)
            for x, y, s in ((i, j, -1), (j, i, 1)):
                for a in range(d):
                    for e in range(d):
                        g = b.gamma[y][a][e]
                        if not g:
                            continue
                        for k in range(d):
                            t[k][e] += s * g * b.c[x][a][k]
                            t[a][k] += s * g * b.c[x][e][k]
            if any(any(row) for row in t):
                out[(i, j)] = t
    return out


def encode_morphism_bb(sp: BBSpace, a_matrix: Matrix) -> BigBracketElement:
    """Phi = -A_le u_l dv_e, matching the vector-field convention."""
    items = []
    for e, row in enumerate(a_matrix):
        for l, c in enumerate(row):
            if c:
                items.append(((sp.starred_index("u", l),
                               sp.unstarred_index("v", e)), -c))
    return BigBracketElement.build(sp, items)


def bialgebra_morphism_residual(bU: BialgebraPresentation,
                                bV: BialgebraPresentation, a_matrix: Matrix
                                ) -> tuple[BigBracketElement, BigBracketElement]:
    """({Q_U,Phi} + 1/2{{Q_V,Phi},Phi}, {Q_V*,-Phi} + 1/2{{Q_U*,-Phi},-Phi});
    zero pair exactly when the map and its dual are both Lie morphisms."""
    sp = pair_bbspace(bU, bV)
    qu = encode_bracket(sp, bU, "u")
    qus = encode_cobracket(sp, bU, "u")
    qv = encode_bracket(sp, bV, "v")
    qvs = encode_cobracket(sp, bV, "v")
    phi = encode_morphism_bb(sp, a_matrix)
    half = Fraction(1, 2)
    first = qu.bracket(phi) + qv.bracket(phi).bracket(phi).scale(half)
    nphi = -phi
    second = qvs.bracket(nphi) + qus.bracket(nphi).bracket(nphi).scale(half)
    return first, second


def is_bialgebra_morphism(bU: BialgebraPresentation, bV: BialgebraPresentation,
                          a_matrix: Matrix) -> bool:
    """Direct oracle: phi a Lie morphism and phi* a Lie morphism of duals."""
    if morphism_defect(bU.lie_presentation(), bV.lie_presentation(), a_matrix):
        return False
    at = [[a_matrix[e][l] for e in range(bV.dim)] for l in range(bU.dim)]
    return not morphism_defect(bV.dual().lie_presentation(),
                               bU.dual().lie_presentation(), at)


# ---------------------------------------------------------------------------
# the V-data


def _in_L(sp: BBSpace, mono) -> bool:
    s = sum(1 for i in mono if sp.is_starred(i))
    return s >= 1 and len(mono) - s >= 1


def _in_a(sp: BBSpace, mono) -> bool:
    ust = {sp.starred_index("u", k) for k in range(dict(sp.groups)["u"])}
    vun = {sp.unstarred_index("v", k) for k in range(dict(sp.groups)["v"])}
    starred = [i for i in mono if sp.is_starred(i)]
    unstarred = [i for i in mono if not sp.is_starred(i)]
    return (len(starred) >= 1 and len(unstarred) >= 1
            and all(i in ust for i in starred)
            and all(i in vun for i in unstarred))


def bb_weight(sp: BBSpace):
    """Number of u's plus dv's in a monomial, minus one; min over terms."""
    ust = {sp.starred_index("u", k) for k in range(dict(sp.groups)["u"])}
    vun = {sp.unstarred_index("v", k) for k in range(dict(sp.groups)["v"])}

    def weight(x: BigBracketElement) -> int | None:
        if x.is_zero():
            return None
        return min(sum(1 for i in mono if i in ust or i in vun) - 1
                   for mono in x.terms)

    return weight


def bialgebra_vdata(bU: BialgebraPresentation, bV: BialgebraPresentation,
                    log=None) -> VData:
    """Quadruple on the (>=1, >=1)-bidegree part with
    Delta = Q_U + Q_U* + Q_V - Q_V*."""
    r1 = encode_bialgebra(bU)[2]
    r2 = encode_bialgebra(bV)[2]
    if not r1.is_zero() or not r2.is_zero():
        raise ValueError("incompatible bialgebra presentation")
    sp = pair_bbspace(bU, bV)
    basis = {}
    for deg in range(0, sp.nvars - 1):
        bs = bb_basis(sp, deg, pred=lambda m: _in_L(sp, m))
        if bs:
            basis[deg] = bs
    lie = GLie(f"C>=1,>=1({sp.name})", lambda x, y: x.bracket(y),
               BigBracketElement.zero(sp), basis)
    a_basis: dict[int, list[BigBracketElement]] = {}
    for deg, bs in basis.items():
        sel = [b for b in bs if all(_in_a(sp, m) for m in b.terms)]
        if sel:
            a_basis[deg] = sel
    delta = (encode_bracket(sp, bU, "u") + encode_cobracket(sp, bU, "u")
             + encode_bracket(sp, bV, "v") - encode_cobracket(sp, bV, "v"))
    proj = lambda x: x.filter_terms(lambda m: _in_a(sp, m))
    return VData(lie, proj, delta, a_basis, weight=bb_weight(sp),
                 name=f"bialg({bU.name},{bV.name})", log=log)
