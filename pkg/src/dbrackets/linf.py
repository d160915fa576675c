"""Shifted homotopy algebras as coderivations, and their morphism theory.

Presentations carry the degree-+1 graded-symmetric multibrackets directly
on the shifted carrier; a presentation is valid when its coderivation
self-commutes within the cutoff (checked, not assumed).

Three constructions live here: the recovery of the multibrackets from the
unital-coalgebra quadruple (Coder(SW), {left multiplications}, tau ->
alpha_{tau(1)}, embedded structure coderivation); the morphism quadruple on
maps S(U+V) -> U+V whose Maurer-Cartan elements are the homotopy
morphisms; and the symmetrization of tensor-coalgebra structures through
the same derived-bracket route.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .coderivations import (CoalgVec, Coderivation, Word, coder_alpha,
                            coder_basis, coder_embed_unit, sym_words,
                            word_degree)
from .engine import GLie, VData
from .graded import (GradedSpace, canonical_sym_word, direct_sum,
                     front_split_sign, koszul_sign, partition_sign)
from .multilinear import MultilinearMap, Vec, decalage_to_shifted
from .scalars import Scalar


@dataclass(frozen=True)
class LInfPresentation:
    """Degree-+1 graded-symmetric multibrackets on the shifted carrier."""

    name: str
    space: GradedSpace
    brackets: tuple[MultilinearMap, ...]

    def __post_init__(self):
        seen = set()
        for m in self.brackets:
            if m.degree != 1:
                raise ValueError("multibrackets must have degree +1")
            if m.arity in seen:
                raise ValueError("one map per arity")
            seen.add(m.arity)

    def bracket_map(self, arity: int) -> MultilinearMap | None:
        for m in self.brackets:
            if m.arity == arity:
                return m
        return None

    def max_arity(self) -> int:
        return max((m.arity for m in self.brackets), default=0)

    def to_coderivation(self, cutoff: int) -> Coderivation:
        return Coderivation.from_taylor(self.space, "sym", cutoff,
                                        list(self.brackets))

    def is_homological(self, cutoff: int | None = None) -> bool:
        n = cutoff or (self.max_arity() + 2)
        th = self.to_coderivation(n)
        return th.commutator_words(th).is_zero()


def linf_from_lie(p) -> LInfPresentation:
    """Decalage of a Lie presentation: the binary table moved to degree -1."""
    from .lie import LiePresentation

    assert isinstance(p, LiePresentation)
    v = GradedSpace(p.name, tuple(f"e{i+1}" for i in range(p.dim)), (0,) * p.dim)
    items = []
    for i in range(p.dim):
        for j in range(p.dim):
            for k in range(p.dim):
                if p.c[i][j][k]:
                    items.append(((i, j), k, p.c[i][j][k]))
    br = MultilinearMap.build(v, v, 2, 0, items)
    shifted = decalage_to_shifted(br).as_symmetric()
    return LInfPresentation(f"{p.name}[1]", v.shift(1), (shifted,))


# ---------------------------------------------------------------------------
# recovery of the structure from the unital-coalgebra quadruple


def alpha_basis(space: GradedSpace, cutoff: int) -> dict[int, list[Coderivation]]:
    out: dict[int, list[Coderivation]] = {}
    for i in range(space.dim):
        out.setdefault(space.degrees[i], []).append(
            coder_alpha(space, "sym", cutoff, {i: Fraction(1)}))
    return out


def keyli_vdata(pres: LInfPresentation, cutoff: int,
                probe_arity: int = 2) -> VData:
    """(Coder(SW), {alpha_w}, tau -> alpha_{tau(1)}, J Theta)."""
    w = pres.space
    theta = pres.to_coderivation(cutoff)
    delta = coder_embed_unit(theta)
    basis_list = coder_basis(w, "sym", cutoff, range(0, probe_arity + 1),
                             allow_unit=True)
    basis: dict[int, list[Coderivation]] = {}
    for b in basis_list:
        basis.setdefault(b.degree(), []).append(b)

    def bracket(x: Coderivation, y: Coderivation) -> Coderivation:
        # two unit insertions can meet in a composite, hence the -2
        return x.commutator_words(y, max_arity=cutoff - 2)

    def proj(t: Coderivation) -> Coderivation:
        return coder_alpha(w, "sym", cutoff, t.value_on_unit())

    return VData(GLie(f"Coder(S{w.name})", bracket,
                      Coderivation.zero(w, "sym", cutoff, allow_unit=True), basis),
                 proj, delta, alpha_basis(w, cutoff),
                 name=f"keyli({pres.name})")


def keyli_recover(pres: LInfPresentation, cutoff: int,
                  arity_top: int | None = None) -> dict[int, MultilinearMap]:
    """Derived brackets on the alpha's, read back as multilinear tables."""
    from .engine import DerivedLInfty

    vd = keyli_vdata(pres, cutoff)
    alg = DerivedLInfty(vd)
    w = pres.space
    top = arity_top if arity_top is not None else min(pres.max_arity() + 1,
                                                      cutoff - 1)
    out: dict[int, MultilinearMap] = {}
    for n in range(1, top + 1):
        items = []
        for word in sym_words(w, n):
            args = [coder_alpha(w, "sym", cutoff, {i: Fraction(1)}) for i in word]
            val = alg.bracket(args).value_on_unit()
            for o, c in val.items():
                items.append((word, o, c))
        if items:
            out[n] = MultilinearMap.build(w, w, n, 1, items,
                                          symmetric=(n >= 2))
    return out


def keyli_roundtrip_ok(pres: LInfPresentation, cutoff: int) -> bool:
    top = min(pres.max_arity() + 1, cutoff - 1)
    rec = keyli_recover(pres, cutoff, arity_top=top)
    for n in range(1, top + 1):
        mine = pres.bracket_map(n)
        got = rec.get(n)
        if mine is None and got is None:
            continue
        if mine is None or got is None:
            if (mine or got).is_zero():
                continue
            return False
        if not (mine - got).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# homotopy morphisms (the symmetric-coalgebra quadruple)


@dataclass(frozen=True)
class LInfMorphismProblem:
    """Two presentations and a family of degree-0 maps S^n U -> V.

    Everything is transported into the direct sum once, with U- and
    V-sectors tagging the split.
    """

    source: LInfPresentation
    target: LInfPresentation
    phi: tuple[MultilinearMap, ...]  # on the sum space, U-inputs, V-output

    @staticmethod
    def build(source: LInfPresentation, target: LInfPresentation,
              phi_entries: Mapping[int, Sequence[tuple[Sequence[int], int, Scalar]]]
              ) -> "LInfMorphismProblem":
        sp = sum_space(source, target)
        off = source.space.dim
        maps = []
        for arity, items in sorted(phi_entries.items()):
            moved = [(tuple(ins), off + out, c) for ins, out, c in items]
            maps.append(MultilinearMap.build(sp, sp, arity, 0, moved,
                                             symmetric=(arity >= 2)))
        return LInfMorphismProblem(source, target, tuple(maps))

    def sumspace(self) -> GradedSpace:
        return sum_space(self.source, self.target)

    def phi_coderivation(self, cutoff: int) -> Coderivation:
        sp = self.sumspace()
        return Coderivation.from_taylor(sp, "sym", cutoff, list(self.phi))


def sum_space(source: LInfPresentation, target: LInfPresentation) -> GradedSpace:
    u = GradedSpace("U", source.space.labels, source.space.degrees,
                    ("U",) * source.space.dim)
    v = GradedSpace("V", target.space.labels, target.space.degrees,
                    ("V",) * target.space.dim)
    return direct_sum(f"{source.name}+{target.name}", u, v)


def _transport(m: MultilinearMap, sp: GradedSpace, offset: int) -> MultilinearMap:
    items = [(tuple(offset + i for i in ins), offset + out, c)
             for (ins, out), c in m.entries.items()]
    return MultilinearMap.build(sp, sp, m.arity, m.degree, items, m.symmetric)


def vsym_weight(sp: GradedSpace):
    usect = set(sp.sector_indices("U"))

    def weight(x: Coderivation) -> int | None:
        if x.is_zero():
            return None
        ws = []
        for m in x.coeffs.values():
            for (ins, out), _ in m.entries.items():
                ws.append(sum(1 for i in ins if i in usect)
                          - (1 if out in usect else 0))
        return min(ws) if ws else None

    return weight


def vsym_vdata(problem: LInfMorphismProblem, cutoff: int,
               probe_arity: int = 2, log=None) -> VData:
    """Quadruple on coderivations of the reduced symmetric coalgebra of
    U (+) V with Delta = mu + nu."""
    sp = problem.sumspace()
    off = problem.source.space.dim
    usect = set(sp.sector_indices("U"))
    mu_maps = [_transport(m, sp, 0) for m in problem.source.brackets]
    nu_maps = [_transport(m, sp, off) for m in problem.target.brackets]
    delta = Coderivation.from_taylor(sp, "sym", cutoff, mu_maps + nu_maps)

    def in_a(ins, out):
        return out not in usect and all(i in usect for i in ins)

    def proj(t: Coderivation) -> Coderivation:
        coeffs = {}
        for key, m in t.coeffs.items():
            items = [(ins, out, c) for (ins, out), c in m.entries.items()
                     if in_a(ins, out)]
            if items:
                mm = MultilinearMap.build(m.source, m.target, m.arity, m.degree,
                                          items, m.symmetric)
                if not mm.is_zero():
                    coeffs[key] = mm
        return Coderivation(t.space, t.flavor, t.cutoff, coeffs, t.allow_unit)

    basis_list = coder_basis(sp, "sym", cutoff, range(1, probe_arity + 1))
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

    def bracket(x: Coderivation, y: Coderivation) -> Coderivation:
        return x.commutator_words(y, max_arity=cutoff)

    lie = GLie(f"L(S{sp.name})", bracket,
               Coderivation.zero(sp, "sym", cutoff), basis)
    return VData(lie, proj, delta, a_basis, weight=vsym_weight(sp),
                 name=f"vsym({problem.source.name},{problem.target.name})",
                 log=log)


def _apply_family(maps: Sequence[MultilinearMap], word: Word) -> Vec:
    for m in maps:
        if m.arity == len(word):
            return m.eval_basis(word)
    return {}


def _word_times_vec(sp: GradedSpace, word: Word, vec: Vec) -> CoalgVec:
    out: CoalgVec = {}
    for o, c in vec.items():
        nw, sgn = canonical_sym_word(word + (o,), sp.degrees)
        if sgn == 0:
            continue
        cc = sgn * c if sgn == -1 else c
        out[nw] = out.get(nw, 0) + cc
    return {k: v for k, v in out.items() if v}


def _vec_product(sp: GradedSpace, vecs: Sequence[Vec]) -> CoalgVec:
    acc: CoalgVec = {(): 1}
    for v in vecs:
        nxt: CoalgVec = {}
        for w, c in acc.items():
            for o, c2 in v.items():
                nw, sgn = canonical_sym_word(w + (o,), sp.degrees)
                if sgn == 0:
                    continue
                cc = c * c2
                cc = sgn * cc if sgn == -1 else cc
                nxt[nw] = nxt.get(nw, 0) + cc
        acc = {k: v2 for k, v2 in nxt.items() if v2}
    return acc


def linf_morphism_residual(problem: LInfMorphismProblem, s_top: int
                           ) -> dict[int, dict[Word, Vec]]:
    """The morphism equations per total symmetric degree s, oriented to
    match the derived Maurer-Cartan series:

        sum_n 1/n! sum_{parts} nu_n(Phi(U_{I_1})...Phi(U_{I_n}))
        - sum_{I + J} Phi_{|J|+1}(mu_{|I|}(U_I).U_J).
    """
    sp = problem.sumspace()
    off = problem.source.space.dim
    mu = [_transport(m, sp, 0) for m in problem.source.brackets]
    nu = [_transport(m, sp, off) for m in problem.target.brackets]
    phi = list(problem.phi)
    uidx = [i for i in range(sp.dim) if sp.sector(i) == "U"]
    out: dict[int, dict[Word, Vec]] = {}
    for s in range(1, s_top + 1):
        rows: dict[Word, Vec] = {}
        for word in sym_words(GradedSpace("U", tuple(sp.labels[i] for i in uidx),
                                          tuple(sp.degrees[i] for i in uidx)),
                              s):
            w = tuple(uidx[i] for i in word)
            degs = [sp.degrees[i] for i in w]
            acc: Vec = {}

            def add_vec(vec: Vec, factor) -> None:
                for o, c in vec.items():
                    t = acc.get(o, 0) + factor * c
                    if t:
                        acc[o] = t
                    else:
                        acc.pop(o, None)

            # nu side
            for n in range(1, s + 1):
                coeff = Fraction(1, factorial(n))
                for parts in _ordered_partitions_positions(s, n):
                    sgn = partition_sign(degs, parts)
                    vecs = []
                    dead = False
                    for part in parts:
                        sub = tuple(w[i] for i in part)
                        val = _apply_family(phi, sub)
                        if not val:
                            dead = True
                            break
                        vecs.append(val)
                    if dead:
                        continue
                    prod = _vec_product(sp, vecs)
                    for pw, pc in prod.items():
                        val = _apply_family(nu, pw)
                        add_vec(val, coeff * pc * sgn)
            # mu side (subtracted)
            for r in range(1, s + 1):
                for chosen in itertools.combinations(range(s), r):
                    sgn = front_split_sign(s, chosen, degs)
                    sub = tuple(w[i] for i in chosen)
                    rest = tuple(w[i] for i in range(s) if i not in chosen)
                    inner = _apply_family(mu, sub)
                    if not inner:
                        continue
                    for pw, pc in _vecs_then_word(sp, inner, rest).items():
                        val = _apply_family(phi, pw)
                        add_vec(val, -pc * sgn)
            if acc:
                rows[w] = acc
        out[s] = rows
    return out


def _vecs_then_word(sp: GradedSpace, vec: Vec, rest: Word) -> CoalgVec:
    out: CoalgVec = {}
    for o, c in vec.items():
        nw, sgn = canonical_sym_word((o,) + rest, sp.degrees)
        if sgn == 0:
            continue
        cc = sgn * c if sgn == -1 else c
        out[nw] = out.get(nw, 0) + cc
    return {k: v for k, v in out.items() if v}


def _ordered_partitions_positions(s: int, n: int):
    """Ordered tuples of disjoint nonempty ascending position groups."""
    from .graded import ordered_partitions

    return ordered_partitions(s, n)


def derived_morphism_residual(problem: LInfMorphismProblem, cutoff: int
                              ) -> Coderivation:
    from .engine import DerivedLInfty

    vd = vsym_vdata(problem, cutoff)
    return DerivedLInfty(vd).mc_residual(problem.phi_coderivation(cutoff))


def morphism_residuals_agree(problem: LInfMorphismProblem, cutoff: int,
                             s_top: int) -> bool:
    explicit = linf_morphism_residual(problem, s_top)
    derived = derived_morphism_residual(problem, cutoff)
    table: dict[Word, Vec] = {}
    for m in derived.coeffs.values():
        for (ins, o), c in m.entries.items():
            table.setdefault(ins, {})[o] = table.get(ins, {}).get(o, 0) + c
    want: dict[Word, Vec] = {}
    for s, rows in explicit.items():
        for wd, vec in rows.items():
            want[wd] = vec
    keys = set(table) | set(want)
    for k in keys:
        if len(k) > s_top:
            continue
        a, b = table.get(k, {}), want.get(k, {})
        outs = set(a) | set(b)
        for o in outs:
            if a.get(o, 0) != b.get(o, 0):
                return False
    return True


# ---------------------------------------------------------------------------
# tensor-coalgebra structures and symmetrization


@dataclass(frozen=True)
class AInfPresentation:
    """Degree-+1 tensor multimaps on the shifted carrier."""

    name: str
    space: GradedSpace
    ops: tuple[MultilinearMap, ...]

    def to_coderivation(self, cutoff: int) -> Coderivation:
        return Coderivation.from_taylor(self.space, "tensor", cutoff,
                                        list(self.ops))

    def is_homological(self, cutoff: int | None = None) -> bool:
        n = cutoff or (max((m.arity for m in self.ops), default=1) + 2)
        th = self.to_coderivation(n)
        return th.commutator_words(th).is_zero()


def symmetrize_ainf(pres: AInfPresentation, cutoff: int,
                    arity_top: int | None = None) -> dict[int, MultilinearMap]:
    """Derived-bracket symmetrization on the unital tensor coalgebra,
    using every-slot insertions as the abelian part."""
    from .engine import DerivedLInfty

    w = pres.space
    theta = pres.to_coderivation(cutoff)
    delta = coder_embed_unit(theta)

    def bracket(x, y):
        return x.commutator_words(y, max_arity=cutoff - 2)

    def proj(t: Coderivation) -> Coderivation:
        return coder_alpha(w, "tensor", cutoff, t.value_on_unit())

    basis_list = coder_basis(w, "tensor", cutoff, range(0, 2), allow_unit=True)
    basis: dict[int, list[Coderivation]] = {}
    for b in basis_list:
        basis.setdefault(b.degree(), []).append(b)
    vd = VData(GLie(f"Coder(T{w.name})", bracket,
                    Coderivation.zero(w, "tensor", cutoff, allow_unit=True),
                    basis),
               proj, delta,
               {d: [coder_alpha(w, "tensor", cutoff, {i: Fraction(1)})
                    for i in w.indices_of_degree(d)]
                for d in set(w.degrees)},
               name=f"symainf({pres.name})")
    alg = DerivedLInfty(vd)
    top = arity_top if arity_top is not None else min(
        max((m.arity for m in pres.ops), default=1), cutoff - 1)
    out: dict[int, MultilinearMap] = {}
    for n in range(1, top + 1):
        items = []
        for word in sym_words(w, n):
            args = [coder_alpha(w, "tensor", cutoff, {i: Fraction(1)})
                    for i in word]
            val = alg.bracket(args).value_on_unit()
            for o, c in val.items():
                items.append((word, o, c))
        m = MultilinearMap.build(w, w, n, 1, items, symmetric=(n >= 2))
        if not m.is_zero():
            out[n] = m
    return out


def symmetrize_direct(pres: AInfPresentation, arity: int) -> MultilinearMap:
    """Oracle: m_n(w_1..w_n) = sum over permutations with Koszul signs."""
    w = pres.space
    table = None
    for m in pres.ops:
        if m.arity == arity:
            table = m
    items = []
    for word in sym_words(w, arity):
        degs = list(w.degrees)
        acc: Vec = {}
        for perm in itertools.permutations(range(arity)):
            pw = tuple(word[i] for i in perm)
            sgn = koszul_sign(tuple(i + 1 for i in perm),
                              [degs[i] for i in word])
            val = table.eval_basis(pw) if table is not None else {}
            for o, c in val.items():
                t = acc.get(o, 0) + sgn * c
                if t:
                    acc[o] = t
                else:
                    acc.pop(o, None)
        for o, c in acc.items():
            items.append((word, o, c))
    return MultilinearMap.build(w, w, arity, 1, items, symmetric=(arity >= 2))
