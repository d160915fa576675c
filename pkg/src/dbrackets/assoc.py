"""Associative algebras as quadratic coderivations of the tensor coalgebra.

Products live on the degree -1 shift of the underlying space, where a
product table becomes the sole quadratic Taylor coefficient of a tensor
coderivation; associativity is equivalent to that coderivation commuting
with itself (checked, never assumed).  The carrier for a pair (U, V) is the
family of multilinear maps on (U+V)[1] under the insertion (Gerstenhaber)
bracket, with the abelian part given by maps with U-inputs and V-output.

The closed-form multibrackets of the deformation algebra are implemented
next to the generic engine; disagreement between the two routes is a test
failure, not a warning.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .coderivations import Coderivation, coder_basis
from .engine import ExplicitLInfty, GLie, LPlusA, VData
from .graded import GradedSpace, direct_sum, koszul_sign
from .linalgq import Matrix, inverse, matmul
from .multilinear import MultilinearMap, compose_row, identity_map, insert
from .scalars import Scalar


@dataclass(frozen=True)
class AssocPresentation:
    """Product constants m[i][j][k]: e_i e_j = sum_k m_ij^k e_k."""

    name: str
    dim: int
    m: tuple

    @staticmethod
    def build(name: str, dim: int,
              products: Mapping[tuple[int, int], Mapping[int, Scalar]]
              ) -> "AssocPresentation":
        t = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), val in products.items():
            for k, c in val.items():
                t[i][j][k] += Fraction(c)
        return AssocPresentation(name, dim,
                                 tuple(tuple(tuple(r) for r in mm) for mm in t))

    def transform(self, g: Matrix) -> "AssocPresentation":
        """Pullback product g(g^-1 x . g^-1 y)."""
        gi = inverse(g)
        d = self.dim
        t = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
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
                            if self.m[a][b][k]:
                                for l in range(d):
                                    if g[l][k]:
                                        t[i][j][l] += f * self.m[a][b][k] * g[l][k]
        return AssocPresentation(f"{self.name}*", d,
                                 tuple(tuple(tuple(r) for r in mm) for mm in t))


def dual_numbers() -> AssocPresentation:
    """k[x]/(x^2) with basis (1, x)."""
    return AssocPresentation.build(
        "dualnum", 2,
        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})


def zero_product(dim: int, name: str = "zeroprod") -> AssocPresentation:
    return AssocPresentation.build(name, dim, {})


def associativity_witness(p: AssocPresentation) -> tuple[int, int, int] | None:
    """Classical oracle: first basis triple with (ab)c != a(bc)."""
    d = p.dim
    for i, j, k in itertools.product(range(d), repeat=3):
        for l in range(d):
            lhs = sum((p.m[i][j][t] * p.m[t][k][l] for t in range(d)),
                      start=Fraction(0))
            rhs = sum((p.m[j][k][t] * p.m[i][t][l] for t in range(d)),
                      start=Fraction(0))
            if lhs != rhs:
                return (i, j, k)
    return None


def morphism_defect_assoc(pU: AssocPresentation, pV: AssocPresentation,
                          a_matrix: Matrix) -> dict[tuple[int, int], dict[int, Fraction]]:
    """phi(x y) - phi(x) phi(y) on basis pairs."""
    out = {}
    for i in range(pU.dim):
        for j in range(pU.dim):
            acc = [Fraction(0)] * pV.dim
            for k in range(pU.dim):
                if pU.m[i][j][k]:
                    for e in range(pV.dim):
                        acc[e] += pU.m[i][j][k] * a_matrix[e][k]
            for a in range(pV.dim):
                for b in range(pV.dim):
                    f = a_matrix[a][i] * a_matrix[b][j]
                    if f:
                        for e in range(pV.dim):
                            acc[e] -= f * pV.m[a][b][e]
            val = {e: v for e, v in enumerate(acc) if v}
            if val:
                out[(i, j)] = val
    return out


def is_assoc_morphism(pU: AssocPresentation, pV: AssocPresentation,
                      a_matrix: Matrix) -> bool:
    return not morphism_defect_assoc(pU, pV, a_matrix)


# ---------------------------------------------------------------------------
# encodings


def shifted_space(p: AssocPresentation, sector: str = "U") -> GradedSpace:
    return GradedSpace(f"{p.name}[1]", tuple(f"{sector.lower()}{i+1}" for i in range(p.dim)),
                       (-1,) * p.dim, (sector,) * p.dim)


def pair_shifted_space(pU: AssocPresentation, pV: AssocPresentation) -> GradedSpace:
    return direct_sum(f"({pU.name}+{pV.name})[1]",
                      shifted_space(pU, "U"), shifted_space(pV, "V"))


def product_map(space: GradedSpace, p: AssocPresentation, offset: int) -> MultilinearMap:
    items = []
    for i in range(p.dim):
        for j in range(p.dim):
            for k in range(p.dim):
                if p.m[i][j][k]:
                    items.append(((offset + i, offset + j), offset + k, p.m[i][j][k]))
    return MultilinearMap.build(space, space, 2, 1, items)


def encode_assoc(p: AssocPresentation, cutoff: int = 6) -> tuple[Coderivation, bool]:
    """Quadratic tensor coderivation and the self-commutation verdict."""
    sp = shifted_space(p)
    q = Coderivation.from_taylor(sp, "tensor", cutoff, [product_map(sp, p, 0)])
    return q, q.commutator(q).is_zero()


def coder_element(space: GradedSpace, maps: Sequence[MultilinearMap],
                  cutoff: int) -> Coderivation:
    return Coderivation.from_taylor(space, "tensor", cutoff, maps)


def linear_map_element(space: GradedSpace, a_matrix: Matrix,
                       cutoff: int) -> Coderivation:
    """A linear map U -> V as the arity-1 element with U-input, V-output."""
    uidx = space.sector_indices("U")
    vidx = space.sector_indices("V")
    items = [((uidx[l],), vidx[e], c)
             for e, row in enumerate(a_matrix) for l, c in enumerate(row) if c]
    m = MultilinearMap.build(space, space, 1, 0, items)
    return Coderivation.from_taylor(space, "tensor", cutoff, [m])


# ---------------------------------------------------------------------------
# the V-data


def _coeff_filter(coder: Coderivation, keep) -> Coderivation:
    coeffs = {}
    for key, m in coder.coeffs.items():
        items = [(ins, out, c) for (ins, out), c in m.entries.items()
                 if keep(ins, out)]
        if items:
            mm = MultilinearMap.build(m.source, m.target, m.arity, m.degree,
                                      items, m.symmetric)
            if not mm.is_zero():
                coeffs[key] = mm
    return Coderivation(coder.space, coder.flavor, coder.cutoff, coeffs,
                        coder.allow_unit)


def assoc_weight(space: GradedSpace):
    """Per coefficient entry: number of U-inputs, minus one for a U-output;
    minimum over all stored entries."""
    usect = set(space.sector_indices("U"))

    def weight(x: Coderivation) -> int | None:
        if x.is_zero():
            return None
        ws = []
        for m in x.coeffs.values():
            for (ins, out), _ in m.entries.items():
                w = sum(1 for i in ins if i in usect) - (1 if out in usect else 0)
                ws.append(w)
        return min(ws) if ws else None

    return weight


def assoc_vdata(pU: AssocPresentation, pV: AssocPresentation,
                probe_arity: int = 3, cutoff: int = 16, log=None) -> VData:
    """Quadruple on multilinear maps of (U+V)[1] with Delta = mu + nu."""
    if associativity_witness(pU) or associativity_witness(pV):
        raise ValueError("non-associative input")
    sp = pair_shifted_space(pU, pV)
    usect = set(sp.sector_indices("U"))

    def in_a(ins, out):
        return out not in usect and all(i in usect for i in ins)

    basis_list = coder_basis(sp, "tensor", cutoff, range(1, probe_arity + 1))
    basis: dict[int, list[Coderivation]] = {}
    for b in basis_list:
        basis.setdefault(b.degree(), []).append(b)
    a_basis: dict[int, list[Coderivation]] = {}
    for d, bs in basis.items():
        sel = [b for b in bs
               if all(in_a(ins, out)
                      for m in b.coeffs.values() for (ins, out) in m.entries)]
        if sel:
            a_basis[d] = sel

    lie = GLie(f"L({sp.name})", lambda x, y: x.commutator_insertion(y),
               Coderivation.zero(sp, "tensor", cutoff), basis)
    delta = Coderivation.from_taylor(
        sp, "tensor", cutoff,
        [product_map(sp, pU, 0), product_map(sp, pV, pU.dim)])
    proj = lambda x: _coeff_filter(x, in_a)
    return VData(lie, proj, delta, a_basis, weight=assoc_weight(sp),
                 name=f"assoc({pU.name},{pV.name})", log=log)


# ---------------------------------------------------------------------------
# closed-form multibrackets


def _split_prime_assoc(x: Coderivation, space: GradedSpace):
    usect = set(space.sector_indices("U"))

    def pure(sector_in):
        def keep(ins, out):
            if sector_in == "U":
                return out in usect and all(i in usect for i in ins)
            return out not in usect and all(i not in usect for i in ins)
        return keep

    xu = _coeff_filter(x, pure("U"))
    xv = _coeff_filter(x, pure("V"))
    if not (x - xu - xv).is_zero():
        raise ValueError("element does not split into pure-U and pure-V maps")
    return xu, xv


def markl_linfty(pU: AssocPresentation, pV: AssocPresentation,
                 a_matrix: Matrix, cutoff: int = 16,
                 check: bool = True) -> ExplicitLInfty:
    """Deformation multibrackets in closed form.

    Differential: (x[1], a) -> (-[mu,x_U] - [nu,x_V],
    -Phi o x_U + x_V o Phi^(x n) + da) with
    da = nu(a (x) Phi) + nu(Phi (x) a) - (-1)^n sum_i a o_i mu; the mixed
    n-ary brackets plug the a's into chosen slots of x_V and Phi into all
    remaining ones; the pure binary is {a_1, a_2} = mu(a_1 (x) a_2).
    """
    if check and morphism_defect_assoc(pU, pV, a_matrix):
        raise ValueError("base map is not an algebra morphism")
    sp = pair_shifted_space(pU, pV)
    mu = product_map(sp, pU, 0)
    nu = product_map(sp, pV, pU.dim)
    uidx = sp.sector_indices("U")
    vidx = sp.sector_indices("V")
    phi_m = MultilinearMap.build(
        sp, sp, 1, 0,
        [((uidx[l],), vidx[e], c)
         for e, row in enumerate(a_matrix) for l, c in enumerate(row) if c])
    zero = Coderivation.zero(sp, "tensor", cutoff)

    def lift(maps):
        return Coderivation.from_taylor(sp, "tensor", cutoff,
                                        [m for m in maps if not m.is_zero()])

    def d_a(amap: MultilinearMap) -> list[MultilinearMap]:
        # the insertion-sum sign is -(-1)^{|mu||a|} with |a| the intrinsic
        # degree of the coefficient map (arity - 1 here)
        out = [compose_row(nu, [amap, phi_m]), compose_row(nu, [phi_m, amap])]
        s = 1 if amap.degree % 2 else -1
        for i in range(1, amap.arity + 1):
            out.append(insert(amap, i, mu).scale(s))
        return out

    def differential(args):
        (v,) = args
        xu, xv = _split_prime_assoc(v.x, sp)
        lpart = zero
        apart_maps: list[MultilinearMap] = []
        for (_, _), m in xu.coeffs.items():
            lpart = lpart - lift([_gerst(mu, m)])
            apart_maps.append(insert(phi_m, 1, m).scale(-1))
        for (_, _), m in xv.coeffs.items():
            lpart = lpart - lift([_gerst(nu, m)])
            apart_maps.append(compose_row(m, [phi_m] * m.arity))
        for (_, _), m in v.a.coeffs.items():
            apart_maps.extend(d_a(m))
        return LPlusA(lpart, lift(apart_maps))

    def nary(args):
        acc = LPlusA(zero, zero)
        for sign, xs, alist in _patterns_assoc(args):
            if len(xs) == 2 and not alist:
                x, dx = xs[0]
                y, _ = xs[1]
                xu1, xv1 = _split_prime_assoc(x, sp)
                xu2, xv2 = _split_prime_assoc(y, sp)
                val = xu1.commutator_insertion(xu2) + xv1.commutator_insertion(xv2)
                if dx % 2:
                    val = -val
                term = LPlusA(val, zero)
            elif len(xs) == 1 and alist:
                term = LPlusA(zero, _mixed_bracket(sp, xs[0], alist, phi_m, lift))
            elif not xs and len(alist) >= 2:
                # substitute x := mu + nu into the mixed formula; only the
                # nu-insertions survive and only while slots remain
                term = LPlusA(zero, _slot_insertions(nu, alist, phi_m, lift))
            else:
                continue
            acc = acc + term.scale(sign)
        return acc

    brackets = {1: differential}
    top = cutoff - 1
    for n in range(2, 9):
        brackets[n] = nary
    return ExplicitLInfty(f"markl({pU.name},{pV.name})", LPlusA(zero, zero),
                          brackets, max_arity=8)


def _gerst(f: MultilinearMap, g: MultilinearMap) -> MultilinearMap:
    """Insertion-formula Gerstenhaber bracket of two coefficient maps."""
    acc = None
    for pos in range(1, f.arity + 1):
        t = insert(f, pos, g)
        acc = t if acc is None else acc + t
    sgn = -1 if (f.degree * g.degree) % 2 else 1
    for pos in range(1, g.arity + 1):
        t = insert(g, pos, f).scale(-sgn)
        acc = t if acc is None else acc + t
    return acc


def _single_map(a: Coderivation) -> MultilinearMap:
    ms = list(a.coeffs.values())
    if len(ms) != 1:
        raise ValueError("expected a homogeneous coefficient family")
    return ms[0]


def _slot_insertions(xm: MultilinearMap, alist, phi_m, lift):
    """sum over ordered choices of distinct slots: plug a_t into slot I_t of
    the V-component, Phi into the rest, with the Koszul sign of sorting the
    a's into slot order."""
    amaps = [_single_map(a) if isinstance(a, Coderivation) else a for a in alist]
    degs = [a.degree for a in amaps]
    m = len(amaps)
    maps: list[MultilinearMap] = []
    slots = xm.arity
    for chosen in itertools.permutations(range(slots), m):
        order = sorted(range(m), key=lambda t: chosen[t])
        eps = koszul_sign(tuple(t + 1 for t in order), degs)
        row: list[MultilinearMap | None] = [phi_m] * slots
        for t, sl in enumerate(chosen):
            row[sl] = amaps[t]
        maps.append(compose_row(xm, row).scale(eps))
    return lift(maps)


def _mixed_bracket(sp, x_with_deg, alist, phi_m, lift):
    """{x, a_1...a_m}: for m = 1 both summands of the binary formula; for
    m >= 2 only the slot-insertion sum into x_V survives."""
    x, xdeg = x_with_deg
    xu, xv = _split_prime_assoc(x, sp)
    maps: list[MultilinearMap] = []
    m = len(alist)
    if m == 1:
        a = alist[0]
        adeg = a.degree()
        s = -1 if (xdeg * (0 if adeg is None else adeg)) % 2 else 1
        for (_, _), am in a.coeffs.items():
            for (_, _), xm in xu.coeffs.items():
                for j in range(1, am.arity + 1):
                    maps.append(insert(am, j, xm).scale(-s))
    out = lift(maps)
    for (_, _), xm in xv.coeffs.items():
        out = out + _slot_insertions(xm, alist, phi_m, lift)
    return out


def _patterns_assoc(args: Sequence[LPlusA]):
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
