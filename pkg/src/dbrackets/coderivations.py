"""Coderivations of truncated tensor / symmetric coalgebras.

A coderivation is stored through its Taylor coefficients only (one sparse
multilinear map per arity and homogeneous degree); the full action on words
of length <= cutoff is reconstructed on demand.  Exceeding the cutoff is a
hard error, never a silent truncation.

Two commutator routes are provided: the generic word-level extraction
(valid for every flavor, used as the independent oracle and whenever unit
insertions are present) and the insertion formula for tensor-flavor
families without arity-0 coefficients (the Gerstenhaber bracket).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graded import GradedSpace, canonical_sym_word, front_split_sign
from .multilinear import MultilinearMap, Vec, insert
from .scalars import Scalar

Word = tuple[int, ...]
CoalgVec = dict[Word, Scalar]
CoeffKey = tuple[int, int]  # (arity, degree)


class CutoffOverflowError(RuntimeError):
    """A word grew past the coalgebra cutoff; results would be corrupted."""


def word_degree(space: GradedSpace, word: Word) -> int:
    return sum(space.degrees[i] for i in word)


def sym_words(space: GradedSpace, length: int) -> list[Word]:
    """Canonical symmetric monomials of the given length (odd squares drop)."""
    out = []
    for w in itertools.combinations_with_replacement(range(space.dim), length):
        _, sgn = canonical_sym_word(w, space.degrees)
        if sgn:
            out.append(w)
    return out


def tensor_words(space: GradedSpace, length: int) -> list[Word]:
    return [tuple(w) for w in itertools.product(range(space.dim), repeat=length)]


def add_into(acc: CoalgVec, word: Word, c: Scalar) -> None:
    s = acc.get(word, 0) + c
    if s:
        acc[word] = s
    else:
        acc.pop(word, None)


def tensor_coproduct(word: Word, reduced: bool) -> list[tuple[Word, Word, int]]:
    lo = 1 if reduced else 0
    hi = len(word) - 1 if reduced else len(word)
    return [(word[:i], word[i:], 1) for i in range(lo, hi + 1)]


def sym_coproduct(space: GradedSpace, word: Word, reduced: bool) -> list[tuple[Word, Word, int]]:
    degs = [space.degrees[i] for i in word]
    out = []
    n = len(word)
    for r in range(n + 1):
        if reduced and (r == 0 or r == n):
            continue
        for chosen in itertools.combinations(range(n), r):
            sgn = front_split_sign(n, chosen, degs)
            left = tuple(word[i] for i in chosen)
            right = tuple(word[i] for i in range(n) if i not in chosen)
            out.append((left, right, sgn))
    return out


@dataclass(frozen=True, eq=False)
class Coderivation:
    space: GradedSpace
    flavor: str  # "tensor" | "sym"
    cutoff: int
    coeffs: Mapping[CoeffKey, MultilinearMap] = field(default_factory=dict)
    allow_unit: bool = False  # coderivation of the unital coalgebra

    def __post_init__(self):
        if self.flavor not in ("tensor", "sym"):
            raise ValueError(f"unknown flavor {self.flavor!r}")

    @staticmethod
    def from_taylor(space: GradedSpace, flavor: str, cutoff: int,
                    maps: Iterable[MultilinearMap],
                    allow_unit: bool = False) -> "Coderivation":
        acc: dict[CoeffKey, MultilinearMap] = {}
        for m in maps:
            if m.is_zero():
                continue
            if m.source is not space and m.source != space:
                raise ValueError("coefficient source space mismatch")
            if m.arity == 0 and not allow_unit:
                raise ValueError("arity-0 coefficient needs the unital coalgebra")
            if m.arity > cutoff:
                raise ValueError("coefficient arity exceeds cutoff")
            if flavor == "sym" and m.arity >= 2 and not m.symmetric:
                m = m.as_symmetric()
            key = (m.arity, m.degree)
            acc[key] = acc[key] + m if key in acc else m
        acc = {k: v for k, v in acc.items() if not v.is_zero()}
        return Coderivation(space, flavor, cutoff, acc, allow_unit)

    @staticmethod
    def zero(space: GradedSpace, flavor: str, cutoff: int,
             allow_unit: bool = False) -> "Coderivation":
        return Coderivation(space, flavor, cutoff, {}, allow_unit)

    def coeff(self, arity: int) -> MultilinearMap | None:
        """Total Taylor coefficient of one arity (summed over degrees)."""
        ms = [m for (a, _), m in self.coeffs.items() if a == arity]
        if not ms:
            return None
        tot = ms[0]
        for m in ms[1:]:
            if m.degree != tot.degree:
                raise ValueError("inhomogeneous coefficient; take homogeneous parts")
            tot = tot + m
        return tot

    def max_arity(self) -> int:
        return max((a for a, _ in self.coeffs), default=0)

    # -- linear structure ------------------------------------------------------

    def _binop(self, other: "Coderivation", op) -> "Coderivation":
        if (self.space, self.flavor, self.cutoff) != (other.space, other.flavor, other.cutoff):
            raise ValueError("coderivation carrier mismatch")
        acc = dict(self.coeffs)
        for k, v in other.coeffs.items():
            acc[k] = op(acc[k], v) if k in acc else op(None, v)
        acc = {k: v for k, v in acc.items() if not v.is_zero()}
        return Coderivation(self.space, self.flavor, self.cutoff, acc,
                            self.allow_unit or other.allow_unit)

    def __add__(self, other):
        if not isinstance(other, Coderivation):
            return NotImplemented
        return self._binop(other, lambda a, b: b if a is None else a + b)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: Scalar) -> "Coderivation":
        if not c:
            return Coderivation(self.space, self.flavor, self.cutoff, {}, self.allow_unit)
        return Coderivation(self.space, self.flavor, self.cutoff,
                            {k: m.scale(c) for k, m in self.coeffs.items()},
                            self.allow_unit)

    def __rmul__(self, c):
        return self.scale(c)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, Coderivation):
            return NotImplemented
        return (self.space, self.flavor, self.cutoff) == \
            (other.space, other.flavor, other.cutoff) and \
            dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.flavor, self.cutoff, frozenset(self.coeffs.items())))

    def homogeneous_parts(self) -> dict[int, "Coderivation"]:
        parts: dict[int, dict] = {}
        for (a, d), m in self.coeffs.items():
            parts.setdefault(d, {})[(a, d)] = m
        return {d: Coderivation(self.space, self.flavor, self.cutoff, cs, self.allow_unit)
                for d, cs in sorted(parts.items())}

    def degree(self) -> int | None:
        degs = {d for _, d in self.coeffs}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous coderivation, degrees {sorted(degs)}")
        return degs.pop()

    # -- action on words -------------------------------------------------------

    def apply_word(self, word: Word) -> CoalgVec:
        if len(word) > self.cutoff:
            raise CutoffOverflowError(f"word of length {len(word)} > cutoff {self.cutoff}")
        if not word and not self.allow_unit:
            raise ValueError("empty word in a reduced coalgebra")
        out: CoalgVec = {}
        for (a, d), m in self.coeffs.items():
            if a > len(word):
                continue
            if self.flavor == "tensor":
                self._apply_tensor(m, d, word, out)
            else:
                self._apply_sym(m, d, word, out)
        for w in out:
            if len(w) > self.cutoff:
                raise CutoffOverflowError(
                    f"result word of length {len(w)} exceeds cutoff {self.cutoff}")
        return out

    def _apply_tensor(self, m: MultilinearMap, d: int, word: Word, out: CoalgVec) -> None:
        n = len(word)
        a = m.arity
        positions = range(n + 1) if a == 0 else range(n - a + 1)
        for s in positions:
            pre = word[:s]
            sgn = -1 if (d % 2 and word_degree(self.space, pre) % 2) else 1
            vals = m.eval_basis(word[s:s + a])
            for o, c in vals.items():
                nw = pre + (o,) + word[s + a:]
                add_into(out, nw, sgn * c if sgn == -1 else c)

    def _apply_sym(self, m: MultilinearMap, d: int, word: Word, out: CoalgVec) -> None:
        n = len(word)
        a = m.arity
        degs = [self.space.degrees[i] for i in word]
        for chosen in itertools.combinations(range(n), a):
            sgn = front_split_sign(n, chosen, degs)
            sub = tuple(word[i] for i in chosen)
            rest = tuple(word[i] for i in range(n) if i not in chosen)
            for o, c in m.eval_basis(sub).items():
                nw, csgn = canonical_sym_word((o,) + rest, self.space.degrees)
                t = sgn * csgn
                if t == 0:
                    continue
                add_into(out, nw, t * c if t == -1 else c)

    def apply(self, elem: CoalgVec) -> CoalgVec:
        out: CoalgVec = {}
        for w, c in elem.items():
            for nw, nc in self.apply_word(w).items():
                add_into(out, nw, c * nc)
        return out

    def value_on_unit(self) -> Vec:
        """tau(1), a sparse vector in W (zero without arity-0 coefficients)."""
        out: Vec = {}
        for (a, _), m in self.coeffs.items():
            if a == 0:
                for (_, o), c in m.entries.items():
                    out[o] = out.get(o, 0) + c
        return {k: v for k, v in out.items() if v}

    # -- commutators -----------------------------------------------------------

    def commutator(self, other: "Coderivation", max_arity: int | None = None) -> "Coderivation":
        if self.flavor == "tensor" and not self._has_unit_coeff() and not other._has_unit_coeff():
            return self.commutator_insertion(other)
        return self.commutator_words(other, max_arity=max_arity)

    def _has_unit_coeff(self) -> bool:
        return any(a == 0 for a, _ in self.coeffs)

    def commutator_insertion(self, other: "Coderivation") -> "Coderivation":
        """[Q, Q'] via the Gerstenhaber insertion formula (tensor flavor)."""
        if self.flavor != "tensor":
            raise ValueError("insertion commutator is tensor-flavor only")
        out: dict[CoeffKey, MultilinearMap] = {}

        def accumulate(m: MultilinearMap, sign: int) -> None:
            if m.is_zero():
                return
            key = (m.arity, m.degree)
            mm = m.scale(sign) if sign == -1 else m
            out[key] = out[key] + mm if key in out else mm

        for (pa, pd), f in self.coeffs.items():
            for (qa, qd), g in other.coeffs.items():
                sgn = -1 if (pd * qd) % 2 else 1
                for pos in range(1, pa + 1):
                    accumulate(insert(f, pos, g), 1)
                for pos in range(1, qa + 1):
                    accumulate(insert(g, pos, f), -sgn)
        out = {k: v for k, v in out.items() if not v.is_zero()}
        for (a, _) in out:
            if a > self.cutoff:
                raise CutoffOverflowError("commutator arity exceeds cutoff")
        return Coderivation(self.space, self.flavor, self.cutoff, out, self.allow_unit)

    def commutator_words(self, other: "Coderivation",
                         max_arity: int | None = None) -> "Coderivation":
        """[Q, Q'] extracted from the composite word action.

        Exact for arities where intermediate words stay within the cutoff;
        overflow raises.
        """
        if (self.space, self.flavor, self.cutoff) != (other.space, other.flavor, other.cutoff):
            raise ValueError("coderivation carrier mismatch")
        arity_top = self.cutoff if max_arity is None else max_arity
        unit = self.allow_unit or other.allow_unit
        words_of = sym_words if self.flavor == "sym" else tensor_words
        items_by_key: dict[CoeffKey, list] = {}
        for dx, xp in self.homogeneous_parts().items():
            for dy, yp in other.homogeneous_parts().items():
                sgn = -1 if (dx * dy) % 2 else 1
                lo = 0 if unit else 1
                for n in range(lo, arity_top + 1):
                    for w in words_of(self.space, n):
                        val: Vec = {}
                        for nw, c in xp.apply(yp.apply({w: 1})).items():
                            if len(nw) == 1:
                                val[nw[0]] = val.get(nw[0], 0) + c
                        for nw, c in yp.apply(xp.apply({w: 1})).items():
                            if len(nw) == 1:
                                s = sgn * c if sgn == -1 else c
                                val[nw[0]] = val.get(nw[0], 0) - s
                        for o, c in val.items():
                            if c:
                                d = self.space.degrees[o] - word_degree(self.space, w)
                                items_by_key.setdefault((n, d), []).append((w, o, c))
        coeffs: dict[CoeffKey, MultilinearMap] = {}
        for (a, d), items in items_by_key.items():
            m = MultilinearMap.build(self.space, self.space, a, d, items,
                                     symmetric=(self.flavor == "sym" and a >= 2))
            if not m.is_zero():
                coeffs[(a, d)] = m
        return Coderivation(self.space, self.flavor, self.cutoff, coeffs, unit)

    # -- defect checks -----------------------------------------------------------

    def coleibniz_defect(self, word: Word) -> dict[tuple[Word, Word], Scalar]:
        """Delta(Q x) - (Q (x) Id + Id (x) Q)(Delta x) on one word."""
        reduced = not self.allow_unit
        coprod = (lambda w: tensor_coproduct(w, reduced)) if self.flavor == "tensor" \
            else (lambda w: sym_coproduct(self.space, w, reduced))
        defect: dict[tuple[Word, Word], Scalar] = {}

        def add(lw: Word, rw: Word, c: Scalar) -> None:
            s = defect.get((lw, rw), 0) + c
            if s:
                defect[(lw, rw)] = s
            else:
                defect.pop((lw, rw), None)

        for nw, c in self.apply_word(word).items():
            for lw, rw, sgn in coprod(nw):
                add(lw, rw, sgn * c if sgn == -1 else c)
        for d, part in self.homogeneous_parts().items():
            for lw, rw, sgn in coprod(word):
                # (Q (x) Id) term
                for nw, c in part.apply_word(lw).items():
                    add(nw, rw, -(sgn * c if sgn == -1 else c))
                # (Id (x) Q) term crosses the left factor
                ssgn = -1 if (d % 2 and word_degree(self.space, lw) % 2) else 1
                for nw, c in part.apply_word(rw).items():
                    t = sgn * ssgn
                    add(lw, nw, -(t * c if t == -1 else c))
        return defect


def coder_alpha(space: GradedSpace, flavor: str, cutoff: int, vec: Vec) -> Coderivation:
    """Left-multiplication (sym) / every-slot insertion (tensor) by a vector."""
    maps = []
    bydeg: dict[int, list] = {}
    for o, c in vec.items():
        if c:
            bydeg.setdefault(space.degrees[o], []).append(((), o, c))
    for d, items in bydeg.items():
        maps.append(MultilinearMap.build(space, space, 0, d, items))
    return Coderivation.from_taylor(space, flavor, cutoff, maps, allow_unit=True)


def coder_embed_unit(theta: Coderivation) -> Coderivation:
    """Extend a reduced-coalgebra coderivation by zero on the unit."""
    if theta._has_unit_coeff():
        raise ValueError("arity-0 coefficient present; not in the reduced image")
    return Coderivation(theta.space, theta.flavor, theta.cutoff,
                        dict(theta.coeffs), True)


def coder_desuspend(theta: Coderivation) -> dict[int, MultilinearMap]:
    """Taylor coefficients transported from W = V[1] down to V, by arity."""
    from .multilinear import decalage_from_shifted

    out: dict[int, MultilinearMap] = {}
    for (a, _), m in theta.coeffs.items():
        mm = decalage_from_shifted(m.expanded() if m.symmetric else m)
        out[a] = out[a] + mm if a in out else mm
    return out


def coder_basis(space: GradedSpace, flavor: str, cutoff: int,
                arities: Sequence[int], allow_unit: bool = False,
                entry_pred=None) -> list[Coderivation]:
    """Single-entry coderivations spanning the chosen arities."""
    words_of = sym_words if flavor == "sym" else tensor_words
    out = []
    for a in arities:
        if a == 0 and not allow_unit:
            continue
        for w in (words_of(space, a) if a else [()]):
            for o in range(space.dim):
                if entry_pred is not None and not entry_pred(w, o):
                    continue
                d = space.degrees[o] - word_degree(space, w)
                m = MultilinearMap.build(space, space, a, d, [(w, o, 1)],
                                         symmetric=(flavor == "sym" and a >= 2))
                out.append(Coderivation.from_taylor(space, flavor, cutoff, [m],
                                                    allow_unit=allow_unit))
    return out
