"""Floating-point Newton search for Maurer-Cartan elements.

Strictly a front-end: the iteration runs in floats on the polynomial
residual, but a candidate is only ever labeled a solution after its
continued-fraction rationalization passes the exact residual check.
Jacobian columns are exact directional derivatives, read off from an
eps-truncated evaluation at order one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .engine import LPlusA
from .coderivations import Coderivation
from .scalars import Eps, rationalize


def flatten_terms(elem) -> dict:
    """Sparse coordinates of a carrier element under a stable hashable key."""
    if isinstance(elem, LPlusA):
        out = {}
        for k, v in flatten_terms(elem.x).items():
            out[("x",) + (k if isinstance(k, tuple) else (k,))] = v
        for k, v in flatten_terms(elem.a).items():
            out[("a",) + (k if isinstance(k, tuple) else (k,))] = v
        return out
    if isinstance(elem, Coderivation):
        out = {}
        for (a, d), m in elem.coeffs.items():
            for (ins, o), c in m.entries.items():
                out[(a, d, ins, o)] = c
        return out
    if hasattr(elem, "terms"):
        return dict(elem.terms)
    raise TypeError(f"cannot flatten {type(elem).__name__}")


@dataclass
class NewtonResult:
    verdict: str  # "exact-solution" | "float-only" | "diverged"
    candidate: list[float]
    exact: list[Fraction] | None
    residual_norm: float
    iterations: int
    message: str = ""


@dataclass
class MCSystem:
    """A Maurer-Cartan residual as a polynomial map in basis coordinates."""

    residual: Callable  # element -> element
    basis: Sequence     # degree-0 basis of the unknowns

    _keys: dict = field(default_factory=dict)

    def element(self, coords: Sequence) -> object:
        acc = None
        for c, b in zip(coords, self.basis):
            t = b.scale(c)
            acc = t if acc is None else acc + t
        return acc

    def _vec(self, elem, pick=lambda v: v) -> np.ndarray:
        t = flatten_terms(elem)
        for k in t:
            self._keys.setdefault(k, len(self._keys))
        out = np.zeros(len(self._keys))
        for k, v in t.items():
            out[self._keys[k]] = float(pick(v))
        return out

    def _pad(self, v: np.ndarray) -> np.ndarray:
        if len(v) < len(self._keys):
            return np.concatenate([v, np.zeros(len(self._keys) - len(v))])
        return v

    def residual_float(self, x: np.ndarray) -> np.ndarray:
        phi = self.element([Fraction(float(c)) for c in x])
        return self._vec(self.residual(phi))

    def residual_exact(self, coords: Sequence[Fraction]):
        return self.residual(self.element(list(coords)))

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        eps = Eps.var(1)
        cols = []
        for j in range(len(self.basis)):
            coords = [Eps.const(Fraction(float(c)), 1) for c in x]
            coords[j] = coords[j] + eps
            r = self.residual(self.element(coords))
            cols.append(self._vec(r, pick=lambda v: v.coeff(1)
                                  if isinstance(v, Eps) else 0))
        n = len(self._keys)
        return np.stack([self._pad(c) for c in cols], axis=1) if cols else \
            np.zeros((n, 0))


def _snap_exact(system: MCSystem, x: np.ndarray,
                max_denominator: int) -> list[Fraction] | None:
    """Progressive continued-fraction rounding; only exactly verified
    candidates are accepted."""
    bounds = [b for b in (1, 2, 3, 4, 6, 8, 12, 16, 24, 48, 10**3, 10**6)
              if b <= max_denominator] or [max_denominator]
    if bounds[-1] != max_denominator:
        bounds.append(max_denominator)
    seen = set()
    for b in bounds:
        cand = tuple(rationalize(float(c), b) for c in x)
        if cand in seen:
            continue
        seen.add(cand)
        if system.residual_exact(list(cand)).is_zero():
            return list(cand)
    return None


def solve_mc_newton(system: MCSystem, seed: Sequence[float], tol: float = 1e-10,
                    max_iter: int = 40, max_denominator: int = 10**4
                    ) -> NewtonResult:
    x = np.asarray(list(seed), dtype=float)
    if len(x) != len(system.basis):
        raise ValueError(f"seed dimension {len(x)} != {len(system.basis)}")
    last_norm = None
    for it in range(max_iter + 1):
        r = system.residual_float(x)
        rn = float(np.max(np.abs(r))) if r.size else 0.0
        if rn < tol:
            cand = _snap_exact(system, x, max_denominator)
            if cand is not None:
                return NewtonResult("exact-solution", [float(c) for c in x],
                                    cand, rn, it)
            return NewtonResult("float-only", [float(c) for c in x], None, rn,
                                it, "rationalized candidate fails exact check")
        if it == max_iter:
            break
        jac = system.jacobian(x)
        r = system._pad(r)
        try:
            step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        except np.linalg.LinAlgError:
            return NewtonResult("diverged", [float(c) for c in x], None, rn,
                                it, "singular Jacobian")
        if not np.all(np.isfinite(step)):
            return NewtonResult("diverged", [float(c) for c in x], None, rn,
                                it, "non-finite Newton step")
        # damping: backtrack until the residual actually decreases
        lam = 1.0
        while lam > 1e-12:
            xn = x + lam * step
            rn_new = float(np.max(np.abs(system.residual_float(xn)))) \
                if r.size else 0.0
            if rn_new < rn * (1 - 1e-4) or rn_new < tol:
                break
            lam *= 0.5
        else:
            return NewtonResult("diverged", [float(c) for c in x], None, rn,
                                it, "no descent direction")
        if last_norm is not None and rn >= last_norm and lam <= 1e-12:
            return NewtonResult("diverged", [float(c) for c in x], None, rn, it,
                                "stalled")
        last_norm = rn
        x = x + lam * step
    return NewtonResult("diverged", [float(c) for c in x], None,
                        float(np.max(np.abs(system.residual_float(x))))
                        if len(system._keys) else 0.0,
                        max_iter, "iteration limit reached")
