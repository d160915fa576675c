"""Graded bases, Koszul signs, unshuffles and word utilities.

Sign conventions (fixed once, used everywhere):

* A permutation ``p`` of size n is a tuple with ``p[i] = sigma(i+1)`` in
  one-based image notation, so the permuted tuple of ``v`` is
  ``(v[p[0]-1], ..., v[p[n-1]-1])``.
* ``koszul_sign(p, degs)`` is the sign eps(sigma) with
  ``v_{sigma(1)} ... v_{sigma(n)} = eps(sigma) * v_1 ... v_n`` in the free
  graded-commutative algebra: each adjacent swap of elements of degrees
  a, b contributes (-1)^(a*b).  No extra parity sign is included.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Sequence

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def compose_perms(p: Perm, q: Perm) -> Perm:
    """(p o q)(i) = p(q(i))."""
    if len(p) != len(q):
        raise ValueError("size mismatch in permutation composition")
    return tuple(p[q[i] - 1] for i in range(len(p)))


def invert_perm(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v - 1] = i + 1
    return tuple(inv)


def koszul_sign(perm: Perm, degs: Sequence[int]) -> int:
    """Koszul sign of ``perm`` acting on elements of the given degrees.

    Computed by bubble-sorting the permuted sequence back to identity;
    independence of the decomposition is a property test, not an input.
    """
    n = len(perm)
    if len(degs) != n:
        raise ValueError(f"permutation size {n} != number of degrees {len(degs)}")
    items = [(perm[i], degs[perm[i] - 1]) for i in range(n)]
    sign = 1
    for i in range(n):
        for j in range(n - 1 - i):
            if items[j][0] > items[j + 1][0]:
                if (items[j][1] * items[j + 1][1]) % 2:
                    sign = -sign
                items[j], items[j + 1] = items[j + 1], items[j]
    return sign


def unshuffles(i: int, j: int) -> list[Perm]:
    """All (i, j)-unshuffles in S_{i+j}: ascending on 1..i and on i+1..i+j."""
    if i < 0 or j < 0:
        raise ValueError("unshuffle block sizes must be >= 0")
    n = i + j
    out = []
    for left in itertools.combinations(range(1, n + 1), i):
        right = tuple(k for k in range(1, n + 1) if k not in left)
        out.append(left + right)
    assert len(out) == comb(n, i)
    return out


def front_split_sign(n: int, chosen: Sequence[int], degs: Sequence[int]) -> int:
    """Koszul sign of moving the ``chosen`` positions of an n-letter word to
    the front, keeping relative order inside both groups.

    Each crossing of a chosen letter over an earlier unchosen one of degrees
    a, b contributes (-1)^(a*b).
    """
    chosen_set = set(chosen)
    sign = 1
    for i in chosen:
        if degs[i] % 2 == 0:
            continue
        for j in range(i):
            if j not in chosen_set and degs[j] % 2:
                sign = -sign
    return sign


def partition_sign(degs: Sequence[int], parts: Sequence[Sequence[int]]) -> int:
    """Koszul sign of rearranging an n-letter word into the concatenation of
    the given position groups (each internally ascending)."""
    sign = 1
    for s in range(len(parts)):
        for t in range(s + 1, len(parts)):
            for p in parts[s]:
                if degs[p] % 2 == 0:
                    continue
                for q in parts[t]:
                    if q < p and degs[q] % 2:
                        sign = -sign
    return sign


def ordered_partitions(s: int, n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Ordered tuples (I_1, ..., I_n) of disjoint nonempty sets covering 0..s-1."""

    def rec(remaining: tuple[int, ...], parts_left: int):
        # builds the partition with parts ordered by minimal element
        if parts_left == 0:
            if not remaining:
                yield ()
            return
        if len(remaining) < parts_left:
            return
        first, rest = remaining[0], remaining[1:]
        for extra in _subsets(rest):
            part = (first,) + extra
            left = tuple(x for x in rest if x not in extra)
            for tail in rec(left, parts_left - 1):
                yield (part,) + tail

    for parts in rec(tuple(range(s)), n):
        for perm in itertools.permutations(parts):
            yield perm


def _subsets(seq: Sequence[int]) -> Iterator[tuple[int, ...]]:
    for r in range(len(seq) + 1):
        yield from itertools.combinations(seq, r)


@dataclass(frozen=True)
class GradedSpace:
    """Finite-dimensional Z-graded vector space with a chosen ordered basis.

    ``sectors`` optionally tags each basis vector (e.g. "U" / "V") so that
    projections onto summands stay index-free.
    """

    name: str
    labels: tuple[str, ...]
    degrees: tuple[int, ...]
    sectors: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.labels) != len(self.degrees):
            raise ValueError("labels and degrees must align")
        if self.sectors and len(self.sectors) != len(self.labels):
            raise ValueError("sectors must align with labels")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def degree(self, index: int) -> int:
        return self.degrees[index]

    def sector(self, index: int) -> str:
        return self.sectors[index] if self.sectors else ""

    def indices_of_degree(self, d: int) -> tuple[int, ...]:
        return tuple(i for i, dd in enumerate(self.degrees) if dd == d)

    def dims_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out

    def shift(self, k: int) -> "GradedSpace":
        """W[k]: the same basis with every degree lowered by k."""
        return GradedSpace(
            f"{self.name}[{k}]",
            self.labels,
            tuple(d - k for d in self.degrees),
            self.sectors,
        )

    def sector_indices(self, sector: str) -> tuple[int, ...]:
        return tuple(i for i in range(self.dim) if self.sector(i) == sector)


def direct_sum(name: str, *spaces: GradedSpace) -> GradedSpace:
    labels: list[str] = []
    degrees: list[int] = []
    sectors: list[str] = []
    for sp in spaces:
        labels.extend(f"{sp.name}.{l}" if len(spaces) > 1 else l for l in sp.labels)
        degrees.extend(sp.degrees)
        sectors.extend(sp.sectors if sp.sectors else (sp.name,) * sp.dim)
    return GradedSpace(name, tuple(labels), tuple(degrees), tuple(sectors))


def canonical_sym_word(word: Sequence[int], degs: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sort a graded-symmetric word into ascending index order.

    Returns (sorted word, Koszul sign); zero sign when an odd-degree index
    repeats (its square vanishes).
    """
    w = list(word)
    d = [degs[i] for i in w]
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                if (d[j] * d[j + 1]) % 2:
                    sign = -sign
                w[j], w[j + 1] = w[j + 1], w[j]
                d[j], d[j + 1] = d[j + 1], d[j]
    for a, b in zip(w, w[1:]):
        if a == b and degs[a] % 2:
            return tuple(w), 0
    return tuple(w), sign
