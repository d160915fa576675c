"""Shared linear structure for elements stored as sparse term dictionaries."""

from __future__ import annotations

from typing import Mapping

from .scalars import Scalar


class TermsMixin:
    """Mixin for immutable elements with a ``terms: dict[key, Scalar]`` field.

    Subclasses provide ``_replace_terms(terms)`` returning a new instance and
    ``term_degree(key)`` giving the degree of a single term.
    """

    terms: Mapping

    def _replace_terms(self, terms: dict):  # pragma: no cover - interface
        raise NotImplementedError

    def term_degree(self, key) -> int:  # pragma: no cover - interface
        raise NotImplementedError

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        self._check_compatible(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            s = acc.get(k, 0) + v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return self._replace_terms(acc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._replace_terms({k: -v for k, v in self.terms.items()})

    def scale(self, c: Scalar):
        if not c:
            return self._replace_terms({})
        return self._replace_terms({k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._key() == other._key() and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self._key(), frozenset(self.terms.items())))

    def _key(self):
        return type(self).__name__

    def _check_compatible(self, other) -> None:
        if self._key() != other._key():
            raise ValueError(f"incompatible carriers: {self._key()} vs {other._key()}")

    def homogeneous_parts(self) -> dict[int, "TermsMixin"]:
        parts: dict[int, dict] = {}
        for k, v in self.terms.items():
            parts.setdefault(self.term_degree(k), {})[k] = v
        return {d: self._replace_terms(t) for d, t in sorted(parts.items())}

    def degree(self) -> int | None:
        """Degree when homogeneous, None for 0, error when mixed."""
        degs = {self.term_degree(k) for k in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element with degrees {sorted(degs)}")
        return degs.pop()
