"""Polynomial vector fields on a shifted vector space W[1].

Coordinates are odd (degree +1) functions, so monomials are square-free and
strictly increasing in index; the sign of any reordering is absorbed into
the coefficient.  A term ``c * u_{i1}...u_{ik} d/du_j`` has degree k-1.

Brackets are graded commutators of derivations, computed by acting on the
coordinate generators and applying the Leibniz rule; no structure-constant
tables of the vector-field algebra are precomputed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .scalars import Scalar
from .terms import TermsMixin

Mono = tuple[int, ...]
Poly = dict[Mono, Scalar]
TermKey = tuple[Mono, int]


@dataclass(frozen=True)
class OddSpace:
    """Coordinate chart of W[1]: named odd coordinates with sector tags."""

    name: str
    coords: tuple[str, ...]
    sectors: tuple[str, ...] = ()

    def __post_init__(self):
        if self.sectors and len(self.sectors) != len(self.coords):
            raise ValueError("sectors must align with coords")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def sector(self, i: int) -> str:
        return self.sectors[i] if self.sectors else ""

    def sector_indices(self, sector: str) -> tuple[int, ...]:
        return tuple(i for i in range(self.dim) if self.sector(i) == sector)


def mono_normalize(idxs: Sequence[int]) -> tuple[Mono, int]:
    """Sort an odd monomial; zero sign on repeated indices."""
    w = list(idxs)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                w[j], w[j + 1] = w[j + 1], w[j]
                sign = -sign
    for a, b in zip(w, w[1:]):
        if a == b:
            return tuple(w), 0
    return tuple(w), sign


def mono_mul(a: Mono, b: Mono) -> tuple[Mono, int]:
    return mono_normalize(a + b)


def poly_add_into(acc: Poly, mono: Mono, c: Scalar) -> None:
    s = acc.get(mono, 0) + c
    if s:
        acc[mono] = s
    else:
        acc.pop(mono, None)


def mono_derivative(mono: Mono, j: int) -> tuple[Mono, int] | None:
    """d/du_j of an odd monomial (left derivative): sign (-1)^(position)."""
    if j not in mono:
        return None
    pos = mono.index(j)
    rest = mono[:pos] + mono[pos + 1:]
    return rest, -1 if pos % 2 else 1


@dataclass(frozen=True, eq=False)
class PolyVectorField(TermsMixin):
    space: OddSpace
    terms: Mapping[TermKey, Scalar] = field(default_factory=dict)

    @staticmethod
    def build(space: OddSpace,
              items: Iterable[tuple[Sequence[int], int, Scalar]]) -> "PolyVectorField":
        acc: dict[TermKey, Scalar] = {}
        for mono, j, c in items:
            m, sgn = mono_normalize(mono)
            if sgn == 0 or not c:
                continue
            key = (m, j)
            s = acc.get(key, 0) + (sgn * c if sgn == -1 else c)
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        return PolyVectorField(space, acc)

    @staticmethod
    def zero(space: OddSpace) -> "PolyVectorField":
        return PolyVectorField(space, {})

    def _replace_terms(self, terms: dict) -> "PolyVectorField":
        return PolyVectorField(self.space, terms)

    def term_degree(self, key: TermKey) -> int:
        return len(key[0]) - 1

    def _key(self):
        return ("vf", self.space)

    # -- action on polynomials -------------------------------------------------

    def apply_poly(self, poly: Poly) -> Poly:
        """Derivation action on a polynomial in the odd coordinates."""
        out: Poly = {}
        for (mono, j), c in self.terms.items():
            for pmono, pc in poly.items():
                d = mono_derivative(pmono, j)
                if d is None:
                    continue
                dm, ds = d
                prod, ps = mono_mul(mono, dm)
                if ps == 0:
                    continue
                sgn = ds * ps
                poly_add_into(out, prod, (sgn * c) * pc if sgn == -1 else c * pc)
        return out

    def apply_coord(self, k: int) -> Poly:
        return self.apply_poly({(k,): 1})

    def bracket(self, other: "PolyVectorField") -> "PolyVectorField":
        """Graded commutator [X, Y] = XY - (-1)^{|X||Y|} YX."""
        self._check_compatible(other)
        acc: dict[TermKey, Scalar] = {}
        for dx, xpart in self.homogeneous_parts().items():
            for dy, ypart in other.homogeneous_parts().items():
                sgn = -1 if (dx * dy) % 2 else 1
                for k in range(self.space.dim):
                    pk = xpart.apply_poly(ypart.apply_coord(k))
                    qk = ypart.apply_poly(xpart.apply_coord(k))
                    for mono, c in pk.items():
                        key = (mono, k)
                        s = acc.get(key, 0) + c
                        if s:
                            acc[key] = s
                        else:
                            acc.pop(key, None)
                    for mono, c in qk.items():
                        key = (mono, k)
                        s = acc.get(key, 0) - (sgn * c if sgn == -1 else c)
                        if s:
                            acc[key] = s
                        else:
                            acc.pop(key, None)
        return PolyVectorField(self.space, acc)

    # -- structure helpers -------------------------------------------------------

    def filter_terms(self, pred) -> "PolyVectorField":
        return PolyVectorField(
            self.space, {k: v for k, v in self.terms.items() if pred(*k)}
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (mono, j), c in sorted(self.terms.items()):
            m = "".join(self.space.coords[i] for i in mono) or "1"
            bits.append(f"({c})*{m} d/d{self.space.coords[j]}")
        return " + ".join(bits)


def iota(space: OddSpace, coeffs: Mapping[int, Scalar]) -> PolyVectorField:
    """Constant vector field identifying W with degree -1 fields on W[1]."""
    return PolyVectorField.build(space, [((), j, c) for j, c in coeffs.items()])


def vf_basis(space: OddSpace, degree: int) -> list[PolyVectorField]:
    """Basis of the homogeneous degree component (monomials x directions)."""
    import itertools

    out = []
    k = degree + 1
    if k < 0 or k > space.dim:
        return out
    for mono in itertools.combinations(range(space.dim), k):
        for j in range(space.dim):
            out.append(PolyVectorField(space, {(mono, j): 1}))
    return out


def vf_degree_range(space: OddSpace) -> range:
    return range(-1, space.dim)
