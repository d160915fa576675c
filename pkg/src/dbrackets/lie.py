"""Lie algebras and their morphisms as homological vector fields.

Structure constants are the single source of truth; the vector fields

    Q_U = -(1/2) c_ij^k u_i u_j d/du_k,      Phi = -A_le u_l d/dv_e

are always derived from them.  The defining property of the encoding is
[[Q_U, i_X], i_Y] = i_[X,Y] (verified in the tests), and the homomorphism
defect transported through it satisfies

    [Q_U, Phi] + (1/2)[[Q_V, Phi], Phi]  =  encode(defect),
    defect(X, Y) = [phi X, phi Y]_V - phi([X, Y]_U).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .engine import BigLInfty, ExplicitLInfty, GLie, LPlusA, VData
from .linalgq import Matrix, identity, inverse, mat, matmul
from .scalars import Scalar
from .vectorfields import (OddSpace, PolyVectorField, iota, vf_basis,
                           vf_degree_range)


@dataclass(frozen=True)
class LiePresentation:
    """Antisymmetric structure constants c[i][j][k]; Jacobi is checked via
    the encoding, never assumed."""

    name: str
    dim: int
    c: tuple  # c[i][j][k] as a nested tuple of Fractions

    @staticmethod
    def from_brackets(name: str, dim: int,
                      brackets: Mapping[tuple[int, int], Mapping[int, Scalar]]
                      ) -> "LiePresentation":
        """Brackets given on pairs i < j; antisymmetry is filled in."""
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), val in brackets.items():
            if i == j:
                raise ValueError("diagonal bracket must vanish")
            for k, coeff in val.items():
                c[i][j][k] += Fraction(coeff)
                c[j][i][k] -= Fraction(coeff)
        return LiePresentation(name, dim,
                               tuple(tuple(tuple(r) for r in m) for m in c))

    def bracket_vec(self, i: int, j: int) -> dict[int, Fraction]:
        return {k: self.c[i][j][k] for k in range(self.dim) if self.c[i][j][k]}

    def is_antisymmetric(self) -> bool:
        return all(self.c[i][j][k] == -self.c[j][i][k]
                   for i in range(self.dim) for j in range(self.dim)
                   for k in range(self.dim))

    def transform(self, g: Matrix) -> "LiePresentation":
        """Pullback g*[x,y] = g [g^-1 x, g^-1 y] of the bracket."""
        gi = inverse(g)
        d = self.dim
        c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for i in range(d):
            for j in range(d):
                for a in range(d):
                    if not gi[a][i]:
                        continue
                    for b in range(d):
                        f = gi[a][i] * gi[b][j]
                        if not f:
                            continue
                        for k in range(d):
                            if self.c[a][b][k]:
                                for l in range(d):
                                    if g[l][k]:
                                        c[i][j][l] += f * self.c[a][b][k] * g[l][k]
        return LiePresentation(f"{self.name}*", d,
                               tuple(tuple(tuple(r) for r in m) for m in c))


def abelian(dim: int, name: str = "abelian") -> LiePresentation:
    return LiePresentation.from_brackets(name, dim, {})


def aff2() -> LiePresentation:
    """[e1, e2] = e1, the 2-dimensional non-abelian Lie algebra."""
    return LiePresentation.from_brackets("aff2", 2, {(0, 1): {0: 1}})


def sl2() -> LiePresentation:
    """Basis (H, E, F): [H,E] = 2E, [H,F] = -2F, [E,F] = H."""
    return LiePresentation.from_brackets(
        "sl2", 3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}})


def heis3() -> LiePresentation:
    """Heisenberg: [e1, e2] = e3."""
    return LiePresentation.from_brackets("heis3", 3, {(0, 1): {2: 1}})


def not_jacobi3() -> LiePresentation:
    """c_12^3 = 1, c_13^2 = 1: antisymmetric but fails Jacobi."""
    return LiePresentation.from_brackets(
        "nojac", 3, {(0, 1): {2: 1}, (0, 2): {1: 1}})


# ---------------------------------------------------------------------------
# encodings


def encode_lie(p: LiePresentation, space: OddSpace,
               offset: int = 0) -> PolyVectorField:
    if not p.is_antisymmetric():
        raise ValueError("structure constants must be antisymmetric")
    items = []
    half = Fraction(-1, 2)
    for i in range(p.dim):
        for j in range(p.dim):
            for k in range(p.dim):
                if p.c[i][j][k]:
                    items.append(((offset + i, offset + j), offset + k,
                                  half * p.c[i][j][k]))
    return PolyVectorField.build(space, items)


def jacobi(p: LiePresentation) -> bool:
    sp = OddSpace(p.name, tuple(f"u{i+1}" for i in range(p.dim)))
    q = encode_lie(p, sp)
    return q.bracket(q).is_zero()


def jacobi_witness(p: LiePresentation) -> tuple[int, int, int] | None:
    """First basis triple where the classical Jacobi sum fails; independent
    of the vector-field route."""
    for i, j, k in itertools.product(range(p.dim), repeat=3):
        acc = [Fraction(0)] * p.dim
        for m in range(p.dim):
            for l in range(p.dim):
                acc[l] += p.c[i][j][m] * p.c[m][k][l]
                acc[l] += p.c[j][k][m] * p.c[m][i][l]
                acc[l] += p.c[k][i][m] * p.c[m][j][l]
        if any(acc):
            return (i, j, k)
    return None


def pair_space(pU: LiePresentation, pV: LiePresentation) -> OddSpace:
    coords = tuple(f"u{i+1}" for i in range(pU.dim)) + \
        tuple(f"v{a+1}" for a in range(pV.dim))
    sectors = ("u",) * pU.dim + ("v",) * pV.dim
    return OddSpace(f"({pU.name}x{pV.name})[1]", coords, sectors)


def encode_morphism(space: OddSpace, a_matrix: Matrix) -> PolyVectorField:
    """Phi = -A_le u_l d/dv_e for the (target x source) matrix of phi."""
    uidx = space.sector_indices("u")
    vidx = space.sector_indices("v")
    items = []
    for e, row in enumerate(a_matrix):
        for l, c in enumerate(row):
            if c:
                items.append(((uidx[l],), vidx[e], -c))
    return PolyVectorField.build(space, items)


def encode_bilinear(space: OddSpace, d_table: Mapping[tuple[int, int], dict[int, Scalar]]
                    ) -> PolyVectorField:
    """-(1/2) D_ij^e u_i u_j d/dv_e for an antisymmetric bilinear U x U -> V."""
    uidx = space.sector_indices("u")
    vidx = space.sector_indices("v")
    items = []
    half = Fraction(-1, 2)
    for (i, j), val in d_table.items():
        for e, c in val.items():
            if c:
                items.append(((uidx[i], uidx[j]), vidx[e], half * Fraction(c)))
                items.append(((uidx[j], uidx[i]), vidx[e], -half * Fraction(c)))
    return PolyVectorField.build(space, items)


def morphism_defect(pU: LiePresentation, pV: LiePresentation,
                    a_matrix: Matrix) -> dict[tuple[int, int], dict[int, Fraction]]:
    """[phi X, phi Y]_V - phi([X, Y]_U) on basis pairs, exact."""
    out: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(pU.dim):
        for j in range(i + 1, pU.dim):
            acc = [Fraction(0)] * pV.dim
            for a in range(pV.dim):
                for b in range(pV.dim):
                    f = a_matrix[a][i] * a_matrix[b][j]
                    if f:
                        for e in range(pV.dim):
                            acc[e] += f * pV.c[a][b][e]
            for k in range(pU.dim):
                if pU.c[i][j][k]:
                    for e in range(pV.dim):
                        acc[e] -= pU.c[i][j][k] * a_matrix[e][k]
            val = {e: v for e, v in enumerate(acc) if v}
            if val:
                out[(i, j)] = val
    return out


def lie_morphism_residual(pU: LiePresentation, pV: LiePresentation,
                          a_matrix: Matrix,
                          space: OddSpace | None = None) -> PolyVectorField:
    """[Q_U, Phi] + (1/2)[[Q_V, Phi], Phi]; zero exactly on morphisms."""
    sp = space or pair_space(pU, pV)
    qu = encode_lie(pU, sp)
    qv = encode_lie(pV, sp, offset=pU.dim)
    phi = encode_morphism(sp, a_matrix)
    return qu.bracket(phi) + qv.bracket(phi).bracket(phi).scale(Fraction(1, 2))


def is_morphism(pU: LiePresentation, pV: LiePresentation, a_matrix: Matrix) -> bool:
    return not morphism_defect(pU, pV, a_matrix)


# ---------------------------------------------------------------------------
# the V-data of a pair of Lie algebras


def _vf_glie(space: OddSpace) -> GLie:
    basis = {d: vf_basis(space, d) for d in vf_degree_range(space)}
    basis = {d: b for d, b in basis.items() if b}
    return GLie(f"chi({space.name})",
                lambda x, y: x.bracket(y),
                PolyVectorField.zero(space), basis)


def _proj_uv(space: OddSpace):
    uset = set(space.sector_indices("u"))
    vset = set(space.sector_indices("v"))

    def pred(mono, j):
        return j in vset and all(i in uset for i in mono)

    return lambda x: x.filter_terms(pred)


def _a_basis_uv(space: OddSpace) -> dict[int, list[PolyVectorField]]:
    uidx = space.sector_indices("u")
    vidx = space.sector_indices("v")
    out: dict[int, list[PolyVectorField]] = {}
    for k in range(len(uidx) + 1):
        for mono in itertools.combinations(uidx, k):
            for j in vidx:
                out.setdefault(k - 1, []).append(
                    PolyVectorField(space, {(mono, j): 1}))
    return out


def lie_weight(space: OddSpace):
    """Filtration valuation: per term, #u's plus one if the direction is a
    v-coordinate, minus one; minimum over terms."""
    uset = set(space.sector_indices("u"))
    vset = set(space.sector_indices("v"))

    def weight(x: PolyVectorField) -> int | None:
        if x.is_zero():
            return None
        ws = []
        for (mono, j) in x.terms:
            w = sum(1 for i in mono if i in uset) + (1 if j in vset else 0) - 1
            ws.append(w)
        return min(ws)

    return weight


def lie_morphism_vdata(pU: LiePresentation, pV: LiePresentation,
                       log=None) -> VData:
    """Quadruple (chi((UxV)[1]), C(U[1]) (x) V[1], P, Q_U + Q_V)."""
    sp = pair_space(pU, pV)
    lie = _vf_glie(sp)
    delta = encode_lie(pU, sp) + encode_lie(pV, sp, offset=pU.dim)
    return VData(lie, _proj_uv(sp), delta, _a_basis_uv(sp),
                 weight=lie_weight(sp), name=f"lie({pU.name},{pV.name})",
                 log=log)


# ---------------------------------------------------------------------------
# explicit multibrackets


def nr_dgla(pU: LiePresentation, pV: LiePresentation, a_matrix: Matrix,
            check: bool = True) -> ExplicitLInfty:
    """The (suspended) deformation complex of a fixed morphism: unary
    [Q_U + [Q_V, Phi], .], binary [[Q_V, .], .], nothing higher."""
    if check and not is_morphism(pU, pV, a_matrix):
        raise ValueError("base map is not a Lie algebra morphism")
    sp = pair_space(pU, pV)
    qu = encode_lie(pU, sp)
    qv = encode_lie(pV, sp, offset=pU.dim)
    phi = encode_morphism(sp, a_matrix)
    dop = qu + qv.bracket(phi)

    def unary(args):
        return dop.bracket(args[0])

    def binary(args):
        a1, a2 = args
        return qv.bracket(a1).bracket(a2)

    return ExplicitLInfty(f"NR({pU.name},{pV.name})", PolyVectorField.zero(sp),
                          {1: unary, 2: binary}, max_arity=3)


def _split_prime(x: PolyVectorField, space: OddSpace):
    """Split an L'-element into its chi(U[1]) and chi(V[1]) components."""
    uset = set(space.sector_indices("u"))
    xu = x.filter_terms(lambda m, j: j in uset and all(i in uset for i in m))
    xv = x.filter_terms(lambda m, j: j not in uset and all(i not in uset for i in m))
    if not (x - xu - xv).is_zero():
        raise ValueError("element does not lie in chi(U[1]) (+) chi(V[1])")
    return xu, xv


def _pphi_explicit(y: PolyVectorField, phi: PolyVectorField,
                   space: OddSpace) -> PolyVectorField:
    """P_Phi on fields with only v-directions: the single surviving term
    ad_Phi^r / r! where r is the v-count of the coefficient."""
    vset = set(space.sector_indices("v"))
    if any(j not in vset for (_, j) in y.terms):
        raise ValueError("explicit P_Phi needs v-directed fields")
    out = PolyVectorField.zero(space)
    groups: dict[int, dict] = {}
    for (mono, j), c in y.terms.items():
        r = sum(1 for i in mono if i in vset)
        groups.setdefault(r, {})[(mono, j)] = c
    for r, terms in groups.items():
        cur = PolyVectorField(space, terms)
        for _ in range(r):
            cur = cur.bracket(phi)
        out = out + cur.scale(Fraction(1, factorial(r)))
    return out


def simultaneous_linfty(pU: LiePresentation, pV: LiePresentation,
                        a_matrix: Matrix, check: bool = True) -> ExplicitLInfty:
    """Closed-form multibrackets on chi(U[1])[1] (+) chi(V[1])[1] (+) a
    governing joint deformations of both brackets and the morphism.

    All n-brackets vanish for n > dim(V) + 1.
    """
    if check and not is_morphism(pU, pV, a_matrix):
        raise ValueError("base map is not a Lie algebra morphism")
    sp = pair_space(pU, pV)
    qu = encode_lie(pU, sp)
    qv = encode_lie(pV, sp, offset=pU.dim)
    phi = encode_morphism(sp, a_matrix)
    dop = qu + qv.bracket(phi)
    zero = PolyVectorField.zero(sp)

    def differential(args):
        (v,) = args
        xu, xv = _split_prime(v.x, sp)
        lpart = -qu.bracket(xu) - qv.bracket(xv)
        apart = xu.bracket(phi) + _pphi_explicit(xv, phi, sp) + dop.bracket(v.a)
        return LPlusA(lpart, apart)

    def nary(args):
        acc = LPlusA(zero, zero)
        for sign, xs, alist in _patterns_lplusa(args):
            if len(xs) == 2 and not alist:
                x, dx = xs[0]
                y, _ = xs[1]
                xu1, xv1 = _split_prime(x, sp)
                xu2, xv2 = _split_prime(y, sp)
                val = xu1.bracket(xu2) + xv1.bracket(xv2)
                if dx % 2:
                    val = -val
                term = LPlusA(val, zero)
            elif len(xs) == 1 and alist:
                xu, xv = _split_prime(xs[0][0], sp)
                cur_u = xu
                for a in alist[:1]:
                    cur_u = cur_u.bracket(a)
                term_u = cur_u if len(alist) == 1 else zero
                cur_v = xv
                for a in alist:
                    cur_v = cur_v.bracket(a)
                    if cur_v.is_zero():
                        break
                term = LPlusA(zero, term_u + _pphi_explicit(cur_v, phi, sp))
            elif not xs and len(alist) == 2:
                term = LPlusA(zero, qv.bracket(alist[0]).bracket(alist[1]))
            else:
                continue
            acc = acc + term.scale(sign)
        return acc

    brackets = {1: differential}
    top = pV.dim + 1
    for n in range(2, top + 1):
        brackets[n] = nary
    return ExplicitLInfty(f"simdef({pU.name},{pV.name})", LPlusA(zero, zero),
                          brackets, max_arity=top)


def _patterns_lplusa(args: Sequence[LPlusA]):
    from .graded import front_split_sign

    slots = []
    for v in args:
        opts = []
        for d, p in v.homogeneous_parts().items():
            if not p.x.is_zero():
                opts.append((d, "x", p.x))
            if not p.a.is_zero():
                opts.append((d, "a", p.a))
        slots.append(opts)
    n = len(args)
    for combo in itertools.product(*slots):
        degs = [d for d, _, _ in combo]
        xpos = [i for i, (_, t, _) in enumerate(combo) if t == "x"]
        sign = front_split_sign(n, xpos, degs)
        xs = [(combo[i][2], degs[i] + 1) for i in xpos]
        alist = [combo[i][2] for i in range(n) if i not in xpos]
        yield sign, xs, alist


def cubic_mc_system(pU: LiePresentation, pV: LiePresentation, a_matrix: Matrix):
    """Evaluator of the three closed-form deformation equations.

    Returns a function (xu, xv, a) -> (eq_U, eq_V, eq_mixed); the triple is
    zero exactly on simultaneous deformations.
    """
    sp = pair_space(pU, pV)
    qu = encode_lie(pU, sp)
    qv = encode_lie(pV, sp, offset=pU.dim)
    phi = encode_morphism(sp, a_matrix)
    dop = qu + qv.bracket(phi)
    half = Fraction(1, 2)

    def residual(xu: PolyVectorField, xv: PolyVectorField, a: PolyVectorField):
        eq_u = qu.bracket(xu) + xu.bracket(xu).scale(half)
        eq_v = qv.bracket(xv) + xv.bracket(xv).scale(half)
        eq_m = (xu.bracket(phi)
                + xv.bracket(phi).bracket(phi).scale(half)
                + dop.bracket(a)
                + xu.bracket(a)
                + xv.bracket(a).bracket(phi)
                + qv.bracket(a).bracket(a).scale(half)
                + xv.bracket(a).bracket(a).scale(half))
        return eq_u, eq_v, eq_m

    return residual


# ---------------------------------------------------------------------------
# subalgebras (curved case)


@dataclass(frozen=True)
class SubalgebraSplit:
    """Ambient algebra with a basis partition g = U (+) V."""

    ambient: LiePresentation
    u_indices: tuple[int, ...]
    v_indices: tuple[int, ...]

    def __post_init__(self):
        got = sorted(self.u_indices + self.v_indices)
        if got != list(range(self.ambient.dim)):
            raise ValueError("U and V indices must partition the basis")


def subalgebra_space(split: SubalgebraSplit) -> OddSpace:
    g = split.ambient
    coords, sectors = [], []
    for i in range(g.dim):
        if i in split.u_indices:
            coords.append(f"u{split.u_indices.index(i)+1}")
            sectors.append("u")
        else:
            coords.append(f"v{split.v_indices.index(i)+1}")
            sectors.append("v")
    return OddSpace(f"{g.name}[1]", tuple(coords), tuple(sectors))


def subalgebra_vdata(split: SubalgebraSplit, log=None) -> VData:
    """The curved quadruple (chi(g[1]), C(U[1]) (x) V[1], P, Q_g); flat
    exactly when U is a subalgebra."""
    sp = subalgebra_space(split)
    lie = _vf_glie(sp)
    delta = encode_lie(split.ambient, sp)
    return VData(lie, _proj_uv(sp), delta, _a_basis_uv(sp),
                 weight=lie_weight(sp), name=f"subalg({split.ambient.name})",
                 log=log)


def graph_matrix_field(split: SubalgebraSplit, a_matrix: Matrix) -> PolyVectorField:
    """The a-element of a linear map U -> V in the ambient chart."""
    sp = subalgebra_space(split)
    uidx = sp.sector_indices("u")
    vidx = sp.sector_indices("v")
    items = []
    for e, row in enumerate(a_matrix):
        for l, c in enumerate(row):
            if c:
                items.append(((uidx[l],), vidx[e], -c))
    return PolyVectorField.build(sp, items)


def graph_is_subalgebra(split: SubalgebraSplit, a_matrix: Matrix) -> bool:
    """Direct closure test: [X + phi X, Y + phi Y] in graph(phi)."""
    g = split.ambient
    uil = list(split.u_indices)
    vil = list(split.v_indices)

    def lift(l: int) -> list[Fraction]:
        vec = [Fraction(0)] * g.dim
        vec[uil[l]] = Fraction(1)
        for e in range(len(vil)):
            vec[vil[e]] += a_matrix[e][l]
        return vec

    for l1 in range(len(uil)):
        for l2 in range(len(uil)):
            x, y = lift(l1), lift(l2)
            w = [Fraction(0)] * g.dim
            for i in range(g.dim):
                if not x[i]:
                    continue
                for j in range(g.dim):
                    f = x[i] * y[j]
                    if f:
                        for k in range(g.dim):
                            w[k] += f * g.c[i][j][k]
            wu = [w[i] for i in uil]
            wv = [w[i] for i in vil]
            for e in range(len(vil)):
                expect = sum((a_matrix[e][l] * wu[l] for l in range(len(uil))),
                             start=Fraction(0))
                if wv[e] != expect:
                    return False
    return True


# ---------------------------------------------------------------------------
# the GL(U) x GL(V) symmetry


def gl_action(g: Matrix, h: Matrix, mU: LiePresentation, mV: LiePresentation,
              a_matrix: Matrix) -> tuple[LiePresentation, LiePresentation, Matrix]:
    """(g, h) . ([.,.]_U, [.,.]_V, phi) = (g*[.,.], h*[.,.], h phi g^-1)."""
    return mU.transform(g), mV.transform(h), matmul(matmul(h, a_matrix), inverse(g))


def field_to_matrix(z: PolyVectorField, coords: Sequence[int]) -> Matrix:
    """Endomorphism matrix of a linear field restricted to a coordinate block:
    [z, i_{e_k}] = i_{sum_j M[j][k] e_j}."""
    n = len(coords)
    m = [[Fraction(0)] * n for _ in range(n)]
    for (mono, j), c in z.terms.items():
        if len(mono) != 1 or mono[0] not in coords or j not in coords:
            raise ValueError("not a linear field on the block")
        k = coords.index(mono[0])
        jj = coords.index(j)
        m[jj][k] -= c
    return m


def matrix_to_field(space: OddSpace, coords: Sequence[int], m: Matrix) -> PolyVectorField:
    items = []
    for jj, row in enumerate(m):
        for k, c in enumerate(row):
            if c:
                items.append(((coords[k],), coords[jj], -c))
    return PolyVectorField.build(space, items)
