"""The degree -2 Poisson algebra of functions on an odd cotangent space.

For a vector space with coordinate groups (u for U, v for V, ...) the
function algebra is generated by odd variables: the "starred" coordinates
u_i, v_a (duals) and the "unstarred" du_i, dv_a (the vectors themselves).
All generators have degree 1; a monomial of length k has degree k, hence
degree k-2 after the [2]-shift that makes the bracket a graded Lie bracket.

Bracket on generators: {u_i, du_j} = delta_ij = {du_j, u_i}, all other pairs
zero (v-groups pair the same way, u/v cross pairs vanish).  The extension to
monomials is the biderivation rule; on sorted square-free monomials
x_1...x_p and y_1...y_q it reads

    {a, b} = sum_{s,t} (-1)^{(p-s)+(t-1)} kappa(x_s, y_t)
             * (a without x_s) * (b without y_t).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .scalars import Scalar
from .terms import TermsMixin
from .vectorfields import Mono, OddSpace, PolyVectorField, mono_normalize

TermKey = Mono  # sorted tuple of variable indices


@dataclass(frozen=True)
class BBSpace:
    """Variable chart: for each named group of dimension n there are n
    starred and n unstarred generators.

    Global index order: all starred variables (groups in order), then all
    unstarred ones; ``partner`` links u_i <-> du_i.
    """

    name: str
    groups: tuple[tuple[str, int], ...]

    @property
    def half(self) -> int:
        return sum(n for _, n in self.groups)

    @property
    def nvars(self) -> int:
        return 2 * self.half

    def is_starred(self, idx: int) -> bool:
        return idx < self.half

    def partner(self, idx: int) -> int:
        return idx + self.half if self.is_starred(idx) else idx - self.half

    def group_of(self, idx: int) -> str:
        off = idx if self.is_starred(idx) else idx - self.half
        for g, n in self.groups:
            if off < n:
                return g
            off -= n
        raise IndexError(idx)

    def var_name(self, idx: int) -> str:
        off = idx if self.is_starred(idx) else idx - self.half
        for g, n in self.groups:
            if off < n:
                return (f"{g}{off + 1}" if self.is_starred(idx) else f"d{g}{off + 1}")
            off -= n
        raise IndexError(idx)

    def starred_index(self, group: str, k: int) -> int:
        off = 0
        for g, n in self.groups:
            if g == group:
                if k >= n:
                    raise IndexError((group, k))
                return off + k
            off += n
        raise KeyError(group)

    def unstarred_index(self, group: str, k: int) -> int:
        return self.starred_index(group, k) + self.half


@dataclass(frozen=True, eq=False)
class BigBracketElement(TermsMixin):
    space: BBSpace
    terms: Mapping[TermKey, Scalar] = field(default_factory=dict)

    @staticmethod
    def build(space: BBSpace,
              items: Iterable[tuple[Sequence[int], Scalar]]) -> "BigBracketElement":
        acc: dict[TermKey, Scalar] = {}
        for mono, c in items:
            m, sgn = mono_normalize(mono)
            if sgn == 0 or not c:
                continue
            s = acc.get(m, 0) + (sgn * c if sgn == -1 else c)
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return BigBracketElement(space, acc)

    @staticmethod
    def zero(space: BBSpace) -> "BigBracketElement":
        return BigBracketElement(space, {})

    def _replace_terms(self, terms: dict) -> "BigBracketElement":
        return BigBracketElement(self.space, terms)

    def term_degree(self, key: TermKey) -> int:
        return len(key) - 2  # degree in C(M)[2]

    def _key(self):
        return ("bb", self.space)

    def term_bidegree(self, key: TermKey) -> tuple[int, int]:
        s = sum(1 for i in key if self.space.is_starred(i))
        return s, len(key) - s

    def bracket(self, other: "BigBracketElement") -> "BigBracketElement":
        self._check_compatible(other)
        sp = self.space
        acc: dict[TermKey, Scalar] = {}
        for a, ca in self.terms.items():
            p = len(a)
            for b, cb in other.terms.items():
                coeff = ca * cb
                for s, x in enumerate(a, start=1):
                    y = sp.partner(x)
                    if y not in b:
                        continue
                    t = b.index(y) + 1
                    rem_a = a[: s - 1] + a[s:]
                    rem_b = b[: t - 1] + b[t:]
                    mono, msgn = mono_normalize(rem_a + rem_b)
                    if msgn == 0:
                        continue
                    sgn = msgn if ((p - s) + (t - 1)) % 2 == 0 else -msgn
                    v = acc.get(mono, 0) + (sgn * coeff if sgn == -1 else coeff)
                    if v:
                        acc[mono] = v
                    else:
                        acc.pop(mono, None)
        return BigBracketElement(sp, acc)

    def filter_terms(self, pred) -> "BigBracketElement":
        return BigBracketElement(
            self.space, {k: v for k, v in self.terms.items() if pred(k)}
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono, c in sorted(self.terms.items()):
            m = "".join(self.space.var_name(i) for i in mono) or "1"
            bits.append(f"({c})*{m}")
        return " + ".join(bits)


def embed_vector_field(x: PolyVectorField, space: BBSpace) -> BigBracketElement:
    """Fiberwise-linear functions: u_A d/du_j  ->  u_A * du_j.

    The coordinate order of the vector-field chart must match the starred
    block of ``space``.
    """
    if x.space.dim != space.half:
        raise ValueError("chart size mismatch")
    items = []
    for (mono, j), c in x.terms.items():
        items.append((tuple(mono) + (j + space.half,), c))
    return BigBracketElement.build(space, items)


def bb_basis(space: BBSpace, degree: int, pred=None) -> list[BigBracketElement]:
    """Monomial basis of a homogeneous degree component of C(M)[2]."""
    k = degree + 2
    out = []
    if k < 0 or k > space.nvars:
        return out
    for mono in itertools.combinations(range(space.nvars), k):
        if pred is None or pred(mono):
            out.append(BigBracketElement(space, {mono: 1}))
    return out
