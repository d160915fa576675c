"""Exact scalars: rationals and truncated polynomials in a formal variable eps.

Everything downstream is generic over "scalars": plain ints, ``Fraction``,
or :class:`Eps` (an element of Q[eps]/(eps^(N+1)) with a fixed truncation
order N).  No floating point enters the core.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction, "Eps"]

QZERO = Fraction(0)
QONE = Fraction(1)


class Eps:
    """Truncated polynomial ``c_0 + c_1*eps + ... + c_N*eps^N``.

    The truncation order is fixed at construction; mixing two different
    orders is an error (the order is a property of the computation, not of
    the value).  Products are re-truncated at the same order.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = [Fraction(c) for c in coeffs[: order + 1]]
        cs += [QZERO] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def var(cls, order: int) -> "Eps":
        """The generator eps itself (zero when order is 0)."""
        return cls([0, 1], order)

    @classmethod
    def const(cls, c, order: int) -> "Eps":
        return cls([c], order)

    def _coerce(self, other) -> "Eps | None":
        if isinstance(other, Eps):
            if other.order != self.order:
                raise ValueError(
                    f"mixed eps truncation orders {self.order} != {other.order}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Eps.const(other, self.order)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Eps([a + b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return Eps([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Eps([a - b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = [QZERO] * (self.order + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if i + j > self.order:
                    break
                if b:
                    out[i + j] += a * b
        return Eps(out, self.order)

    __rmul__ = __mul__

    def inverse(self) -> "Eps":
        """Multiplicative inverse; requires an invertible constant term."""
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("eps-series with zero constant term")
        inv = [QZERO] * (self.order + 1)
        inv[0] = 1 / c0
        for n in range(1, self.order + 1):
            s = QZERO
            for k in range(1, n + 1):
                s += self.coeffs[k] * inv[n - k]
            inv[n] = -s / c0
        return Eps(inv, self.order)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Eps.const(other, self.order)
        if not isinstance(other, Eps):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def __bool__(self):
        return any(self.coeffs)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if k <= self.order else QZERO

    def __repr__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*eps")
            else:
                parts.append(f"{c}*eps^{k}")
        body = " + ".join(parts) if parts else "0"
        return f"Eps({body}; order={self.order})"


def scalar_from_string(s: str) -> Fraction:
    """Parse an exact scalar in ``p`` or ``p/q`` form."""
    return Fraction(s.strip())


def scalar_to_string(c: Scalar) -> str:
    if isinstance(c, Eps):
        raise TypeError("eps-series do not serialize to problem files")
    f = Fraction(c)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def rationalize(x: float, max_denominator: int = 10**6) -> Fraction:
    """Nearest small-denominator rational (continued fractions)."""
    return Fraction(x).limit_denominator(max_denominator)
