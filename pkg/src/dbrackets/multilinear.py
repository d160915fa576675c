"""Sparse basis-indexed multilinear maps between graded spaces.

A map of arity n stores entries ``((i_1..i_n), out) -> coefficient`` and an
intrinsic degree; every stored entry must satisfy

    deg(out) = deg(i_1) + ... + deg(i_n) + degree.

Graded-symmetric maps are stored in canonical (sorted-index) form; Koszul
signs are applied at exactly one place, canonicalization, so permuted
evaluations cannot pick up a second sign.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graded import GradedSpace, canonical_sym_word, koszul_sign
from .scalars import Scalar

Entry = tuple[tuple[int, ...], int]
Vec = dict[int, Scalar]


@dataclass(frozen=True)
class MultilinearMap:
    source: GradedSpace
    target: GradedSpace
    arity: int
    degree: int
    entries: Mapping[Entry, Scalar] = field(default_factory=dict)
    symmetric: bool = False

    @staticmethod
    def build(
        source: GradedSpace,
        target: GradedSpace,
        arity: int,
        degree: int,
        items: Iterable[tuple[Sequence[int], int, Scalar]] = (),
        symmetric: bool = False,
    ) -> "MultilinearMap":
        """Accumulate (inputs, output, coeff) items into canonical storage."""
        acc: dict[Entry, Scalar] = {}
        for ins, out, coeff in items:
            ins = tuple(ins)
            if len(ins) != arity:
                raise ValueError(f"entry arity {len(ins)} != {arity}")
            if symmetric:
                ins, sgn = canonical_sym_word(ins, source.degrees)
                if sgn == 0:
                    continue
                coeff = sgn * coeff if sgn == -1 else coeff
            key = (ins, out)
            acc[key] = acc.get(key, 0) + coeff
        acc = {k: v for k, v in acc.items() if v}
        m = MultilinearMap(source, target, arity, degree, acc, symmetric)
        m._check_degrees()
        return m

    @staticmethod
    def zero(source: GradedSpace, target: GradedSpace, arity: int, degree: int,
             symmetric: bool = False) -> "MultilinearMap":
        return MultilinearMap(source, target, arity, degree, {}, symmetric)

    def _check_degrees(self) -> None:
        for (ins, out), _ in self.entries.items():
            want = sum(self.source.degrees[i] for i in ins) + self.degree
            if self.target.degrees[out] != want:
                raise ValueError(
                    f"entry {ins}->{out} violates degree bookkeeping "
                    f"({self.target.degrees[out]} != {want})"
                )

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "MultilinearMap") -> "MultilinearMap":
        if (self.arity, self.degree) != (other.arity, other.degree):
            raise ValueError("cannot add maps of different arity/degree")
        if self.symmetric != other.symmetric:
            raise ValueError("cannot add symmetric and non-symmetric storage")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            s = acc.get(k, 0) + v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return MultilinearMap(self.source, self.target, self.arity, self.degree,
                              acc, self.symmetric)

    def __neg__(self) -> "MultilinearMap":
        return self.scale(-1)

    def __sub__(self, other: "MultilinearMap") -> "MultilinearMap":
        return self + (-other)

    def scale(self, c: Scalar) -> "MultilinearMap":
        if not c:
            return MultilinearMap(self.source, self.target, self.arity,
                                  self.degree, {}, self.symmetric)
        return MultilinearMap(self.source, self.target, self.arity, self.degree,
                              {k: c * v for k, v in self.entries.items()},
                              self.symmetric)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultilinearMap):
            return NotImplemented
        if (self.arity, self.degree, self.symmetric) != (other.arity, other.degree, other.symmetric):
            return False
        return dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash((self.arity, self.degree, self.symmetric,
                     frozenset(self.entries.items())))

    # -- evaluation ----------------------------------------------------------

    def eval_basis(self, ins: Sequence[int]) -> Vec:
        """Value on a tuple of basis vectors, as a sparse target vector."""
        ins = tuple(ins)
        sgn = 1
        if self.symmetric:
            ins, sgn = canonical_sym_word(ins, self.source.degrees)
            if sgn == 0:
                return {}
        out: Vec = {}
        for (key, o), c in self.entries.items():
            if key == ins:
                out[o] = out.get(o, 0) + (sgn * c if sgn == -1 else c)
        return {k: v for k, v in out.items() if v}

    def eval_vectors(self, vectors: Sequence[Vec]) -> Vec:
        """Multilinear extension to sparse vectors (scalars are even)."""
        if len(vectors) != self.arity:
            raise ValueError("wrong number of arguments")
        out: Vec = {}
        for combo in itertools.product(*[v.items() for v in vectors]):
            idxs = tuple(i for i, _ in combo)
            coeff: Scalar = 1
            for _, c in combo:
                coeff = coeff * c
            if not coeff:
                continue
            for o, c in self.eval_basis(idxs).items():
                s = out.get(o, 0) + coeff * c
                if s:
                    out[o] = s
                else:
                    out.pop(o, None)
        return out

    # -- symmetry ------------------------------------------------------------

    def expanded(self) -> "MultilinearMap":
        """Explicitly symmetrized full table (flag dropped)."""
        if not self.symmetric:
            return self
        items = []
        for (ins, out), c in self.entries.items():
            seen = set()
            for perm in itertools.permutations(range(len(ins))):
                pins = tuple(ins[p] for p in perm)
                if pins in seen:
                    continue
                seen.add(pins)
                # sign moving the canonical word to this ordering
                _, sgn = canonical_sym_word(pins, self.source.degrees)
                if sgn:
                    items.append((pins, out, sgn * c))
        return MultilinearMap.build(self.source, self.target, self.arity,
                                    self.degree, items, symmetric=False)

    def as_symmetric(self) -> "MultilinearMap":
        """Reinterpret a full table as graded-symmetric storage; raises if the
        table is not graded-symmetric."""
        if self.symmetric:
            return self
        sym = MultilinearMap.build(
            self.source, self.target, self.arity, self.degree,
            [(ins, out, c) for (ins, out), c in self.entries.items()],
            symmetric=True,
        )
        # the canonical accumulation above collapses orbits; verify faithfulness
        mult = _orbit_multiplicities(self, sym)
        if mult is None:
            raise ValueError("table is not graded-symmetric")
        return mult

    def sector_filter(self, input_sector: str, output_sector: str) -> "MultilinearMap":
        """Keep entries with all inputs in one sector and output in another."""
        items = []
        for (ins, out), c in self.entries.items():
            if all(self.source.sector(i) == input_sector for i in ins) and \
                    self.target.sector(out) == output_sector:
                items.append((ins, out, c))
        return MultilinearMap.build(self.source, self.target, self.arity,
                                    self.degree, items, self.symmetric)


def _orbit_multiplicities(full: MultilinearMap, sym: MultilinearMap):
    """Check the full table equals the expansion of its symmetrization."""
    # accumulate handled duplicates; compare expansions entrywise
    back = sym
    # each orbit was summed len(orbit) times relative to a single entry, so
    # rescale by the orbit size
    items = []
    for (ins, out), c in sym.entries.items():
        orbit = {tuple(ins[p] for p in perm)
                 for perm in itertools.permutations(range(len(ins)))}
        items.append((ins, out, Fraction(1, len(orbit)) * c if not isinstance(c, int)
                      else Fraction(c, len(orbit))))
    rescaled = MultilinearMap.build(sym.source, sym.target, sym.arity,
                                    sym.degree, items, symmetric=True)
    if rescaled.expanded() == full:
        return rescaled
    return None


# -- decalage -----------------------------------------------------------------


def _decalage_sign(degs: Sequence[int]) -> int:
    n = len(degs)
    e = sum((n - t) * degs[t - 1] for t in range(1, n))
    return -1 if e % 2 else 1


def decalage_to_shifted(f: MultilinearMap) -> MultilinearMap:
    """Transport a map on V to the corresponding map on V[1].

    Entry signs use unshifted degrees: (-1)^((n-1)|v_1| + ... + |v_{n-1}|).
    """
    src, tgt = f.source.shift(1), f.target.shift(1)
    items = []
    for (ins, out), c in f.entries.items():
        degs = [f.source.degrees[i] for i in ins]
        s = _decalage_sign(degs)
        items.append((ins, out, s * c if s == -1 else c))
    return MultilinearMap.build(src, tgt, f.arity, f.degree + f.arity - 1, items)


def decalage_from_shifted(f: MultilinearMap) -> MultilinearMap:
    """Inverse transport, from V[1] back to V; round trip is the identity."""
    src, tgt = f.source.shift(-1), f.target.shift(-1)
    items = []
    for (ins, out), c in f.entries.items():
        degs = [f.source.degrees[i] + 1 for i in ins]  # degrees down in V
        s = _decalage_sign(degs)
        items.append((ins, out, s * c if s == -1 else c))
    return MultilinearMap.build(src, tgt, f.arity, f.degree - f.arity + 1, items)


# -- tensor composition --------------------------------------------------------


def identity_map(space: GradedSpace) -> MultilinearMap:
    return MultilinearMap.build(space, space, 1, 0,
                                [((i,), i, 1) for i in range(space.dim)])


def insert(f: MultilinearMap, pos: int, g: MultilinearMap) -> MultilinearMap:
    """f o (Id^{pos-1} x g x Id^{arity-pos}), pos is 1-based.

    Operator Koszul rule: g passing the first pos-1 inputs of f contributes
    (-1)^(|g| * sum of their degrees).
    """
    if not 1 <= pos <= f.arity:
        raise ValueError("insertion slot out of range")
    row = [None] * f.arity
    row[pos - 1] = g
    return compose_row(f, row)


def compose_row(f: MultilinearMap, gs: Sequence[MultilinearMap | None]) -> MultilinearMap:
    """f o (g_1 x ... x g_n) with None meaning the identity factor."""
    if len(gs) != f.arity:
        raise ValueError("row length must equal arity")
    out_arity = sum(1 if g is None else g.arity for g in gs)
    out_degree = f.degree + sum(0 if g is None else g.degree for g in gs)
    items: list[tuple[tuple[int, ...], int, Scalar]] = []
    src = None
    for g in gs:
        if g is not None:
            src = g.source
            break
    if src is None:
        src = f.source
    for (ins, out), c in f.entries.items():
        # choices[t] iterates over ways to produce basis vector ins[t]
        choices = []
        for t, g in enumerate(gs):
            if g is None:
                choices.append([((ins[t],), 1)])
            else:
                opts = [(gi, gc) for (gi, go), gc in g.entries.items() if go == ins[t]]
                choices.append(opts)
        for combo in itertools.product(*choices):
            coeff: Scalar = c
            new_ins: list[int] = []
            # Koszul: each g_t of odd degree crosses the inputs of blocks < t
            prefix_deg = 0
            for t, g in enumerate(gs):
                block, bc = combo[t]
                gdeg = 0 if g is None else g.degree
                if gdeg % 2 and prefix_deg % 2:
                    coeff = -coeff
                coeff = coeff * bc if bc != 1 else coeff
                new_ins.extend(block)
                prefix_deg += sum(src.degrees[b] for b in block)
            if coeff:
                items.append((tuple(new_ins), out, coeff))
    return MultilinearMap.build(src, f.target, out_arity, out_degree, items)
