"""Derived-bracket engine: V-data, higher brackets, twists, Maurer-Cartan.

All carriers plug in through :class:`GLie` (a graded Lie algebra with an
enumerable homogeneous spanning set); a V-data is the quadruple on top of
it.  Exponentials ``e^{[.,phi]}`` terminate by filtration-weight bookkeeping
when a weight is supplied and by exact nilpotency detection (with a
dimension guard) otherwise; there is no fixed iteration cap.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping, Sequence

from .graded import front_split_sign, koszul_sign, unshuffles
from .scalars import Scalar


class TruncationError(RuntimeError):
    """A series could not be verified to terminate."""


# ---------------------------------------------------------------------------
# carriers


@dataclass
class GLie:
    """A concrete graded Lie algebra: bracket plus a finite spanning set."""

    name: str
    bracket: Callable
    zero: object
    basis_by_degree: Mapping[int, Sequence]

    def degrees(self):
        return sorted(self.basis_by_degree)

    def dim_at(self, d: int) -> int:
        return len(self.basis_by_degree.get(d, ()))

    def validate(self, samples: int = 60, seed: int = 7) -> "Report":
        """Graded antisymmetry and Jacobi on random homogeneous triples."""
        rng = random.Random(seed)
        pool = [(d, b) for d, bs in self.basis_by_degree.items() for b in bs]
        checks = []
        ok_anti = ok_jac = True
        wit_anti = wit_jac = None
        for _ in range(samples):
            (da, a), (db, b), (dc, c) = (rng.choice(pool) for _ in range(3))
            ab = self.bracket(a, b)
            s = -1 if (da * db) % 2 else 1
            anti = ab + self.bracket(b, a).scale(s)
            if not anti.is_zero():
                ok_anti, wit_anti = False, f"[{a!r},{b!r}]"
            jac = self.bracket(a, self.bracket(b, c)) \
                - self.bracket(self.bracket(a, b), c) \
                - self.bracket(b, self.bracket(a, c)).scale(s)
            if not jac.is_zero():
                ok_jac, wit_jac = False, f"({a!r},{b!r},{c!r})"
        checks.append(Check("graded antisymmetry", ok_anti, wit_anti))
        checks.append(Check("graded Jacobi", ok_jac, wit_jac))
        return Report(checks)


@dataclass
class Check:
    name: str
    passed: bool
    witness: str | None = None


@dataclass
class Report:
    checks: list[Check]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __repr__(self):
        lines = [f"[{'pass' if c.passed else 'FAIL'}] {c.name}"
                 + (f"  witness: {c.witness}" if c.witness and not c.passed else "")
                 for c in self.checks]
        return "\n".join(lines)


@dataclass
class TwistLog:
    """Termination orders of exponential series against predicted bounds."""

    records: list[tuple[int, int | None]] = field(default_factory=list)

    def add(self, order: int, bound: int | None) -> None:
        self.records.append((order, bound))

    def within_bounds(self) -> bool:
        return all(b is None or k <= b for k, b in self.records)


@dataclass
class VData:
    """Quadruple (L, a, P, Delta); curved when P(Delta) != 0.

    ``weight`` is an optional filtration valuation (min over terms; None on
    the zero element) making the V-data filtered in the sense of the
    convergence conditions; ``a_basis_by_degree`` spans the abelian part.
    """

    lie: GLie
    proj: Callable
    delta: object
    a_basis_by_degree: Mapping[int, Sequence]
    weight: Callable | None = None
    name: str = ""
    log: TwistLog | None = None

    _weight_cap_cache: int | None = field(default=None, repr=False)

    def in_a(self, x) -> bool:
        return (self.proj(x) - x).is_zero()

    def is_flat(self) -> bool:
        return self.proj(self.delta).is_zero()

    def weight_cap(self) -> int:
        """Max weight of any nonzero spanning element; above it all vanish."""
        if self.weight is None:
            raise TruncationError("no filtration weight supplied")
        if self._weight_cap_cache is None:
            cap = None
            for bs in self.lie.basis_by_degree.values():
                for b in bs:
                    w = self.weight(b)
                    if w is not None:
                        cap = w if cap is None else max(cap, w)
            self._weight_cap_cache = cap if cap is not None else 0
        return self._weight_cap_cache

    def _dim_bound(self, x) -> int:
        try:
            degs = set(x.homogeneous_parts())
        except ValueError:
            degs = set()
        if not degs:
            return sum(self.lie.dim_at(d) for d in self.lie.degrees())
        return max(1, sum(self.lie.dim_at(d) for d in degs))

    # -- exponential flows -----------------------------------------------------

    def ad_exp(self, x, phi, collect=None):
        """e^{[.,phi]} x = sum_k ad_phi^k(x)/k! with verified termination."""
        acc = x
        term = x
        k = 0
        if self.weight is not None:
            wx = self.weight(x)
            wphi = self.weight(phi)
            if wphi is not None and wphi < 1:
                raise TruncationError(
                    f"twisting element has weight {wphi} < 1; series unverifiable")
            bound = None if wx is None else max(0, self.weight_cap() - wx + 1)
        else:
            bound = self._dim_bound(x) + 1
        while True:
            k += 1
            term = self.lie.bracket(term, phi)
            if term.is_zero():
                break
            if bound is not None and k > bound:
                if self.weight is not None:
                    raise TruncationError(
                        f"e^[.,phi] did not terminate by order {bound} "
                        "predicted by the filtration weight")
                raise TruncationError(
                    "e^[.,phi] is not nilpotent and no filtration weight is "
                    "supplied; truncation unverifiable")
            acc = acc + term.scale(Fraction(1, factorial(k)))
        if collect is not None:
            collect.add(k, bound)
        elif self.log is not None:
            self.log.add(k, bound)
        return acc

    def twisted_proj(self, phi) -> Callable:
        return lambda x: self.proj(self.ad_exp(x, phi))

    def twist(self, phi, require_mc: bool = True) -> "VData":
        """V-data with projection P_phi = P o e^{[.,phi]}.

        ``phi`` must be a degree-0 Maurer-Cartan element of the derived
        algebra (equivalently P_phi(Delta) = 0), unless ``require_mc`` is
        disabled for exploratory use.
        """
        if not self.in_a(phi):
            raise ValueError("twisting element must lie in the abelian part")
        pphi = self.twisted_proj(phi)
        if require_mc and not pphi(self.delta).is_zero():
            raise ValueError("twisting element is not Maurer-Cartan: "
                             "P_phi(Delta) != 0")
        return VData(self.lie, pphi, self.delta, self.a_basis_by_degree,
                     self.weight, f"{self.name}^phi", self.log)


# ---------------------------------------------------------------------------
# validation


def validate_vdata(vd: VData, expect_flat: bool | None = None,
                   pair_cap: int = 400, seed: int = 11) -> Report:
    """Check every V-data axiom on spanning sets; failures carry witnesses."""
    rng = random.Random(seed)
    checks: list[Check] = []

    basis = [(d, b) for d, bs in vd.lie.basis_by_degree.items() for b in bs]
    a_basis = [(d, b) for d, bs in vd.a_basis_by_degree.items() for b in bs]

    # P is idempotent and lands in a
    bad = None
    for _, b in basis:
        pb = vd.proj(b)
        if not (vd.proj(pb) - pb).is_zero():
            bad = repr(b)
            break
    checks.append(Check("P o P = P", bad is None, bad))

    # a is abelian
    bad = None
    for (_, a1), (_, a2) in _pairs(a_basis, pair_cap, rng):
        if not vd.lie.bracket(a1, a2).is_zero():
            bad = f"[{a1!r}, {a2!r}]"
            break
    checks.append(Check("[a, a] = 0", bad is None, bad))

    # a-basis really lies in a
    bad = None
    for _, a1 in a_basis:
        if not vd.in_a(a1):
            bad = repr(a1)
            break
    checks.append(Check("a-basis fixed by P", bad is None, bad))

    # ker P is a subalgebra
    kernel = []
    for _, b in basis:
        k = b - vd.proj(b)
        if not k.is_zero():
            kernel.append(k)
    bad = None
    for k1, k2 in _pairs([(0, k) for k in kernel], pair_cap, rng,):
        br = vd.lie.bracket(k1[1], k2[1])
        if not vd.proj(br).is_zero():
            bad = f"[{k1[1]!r}, {k2[1]!r}]"
            break
    checks.append(Check("[ker P, ker P] in ker P", bad is None, bad))

    # Delta
    try:
        ddeg = vd.delta.degree()
        deg_ok = ddeg in (1, None)
    except ValueError:
        deg_ok = False
    checks.append(Check("Delta has degree 1", deg_ok,
                        None if deg_ok else "inhomogeneous or wrong degree"))
    sq = vd.lie.bracket(vd.delta, vd.delta)
    checks.append(Check("[Delta, Delta] = 0", sq.is_zero(),
                        None if sq.is_zero() else repr(sq)))

    flat = vd.is_flat()
    if expect_flat is None:
        checks.append(Check("Delta in ker P (flat)" if flat else
                            "curved: P(Delta) != 0 tolerated", True, None))
    else:
        ok = flat == expect_flat
        checks.append(Check(f"flatness matches expectation ({expect_flat})", ok,
                            None if ok else f"P(Delta) = {vd.proj(vd.delta)!r}"))
    return Report(checks)


def _pairs(items, cap, rng):
    n = len(items)
    if n * n <= cap:
        yield from itertools.product(items, items)
    else:
        for _ in range(cap):
            yield rng.choice(items), rng.choice(items)


def check_filtration(vd: VData, pair_cap: int = 400, seed: int = 13) -> Report:
    """Filtered V-data conditions (a) bracket additivity, (b) degree-0 a-part
    weight >= 1, (c) P weight-nonincreasing, each on spanning sets."""
    if vd.weight is None:
        return Report([Check("weight function supplied", False, "missing")])
    rng = random.Random(seed)
    checks = []
    basis = [(d, b) for d, bs in vd.lie.basis_by_degree.items() for b in bs]

    bad = None
    for (_, x), (_, y) in _pairs(basis, pair_cap, rng):
        br = vd.lie.bracket(x, y)
        wb = vd.weight(br)
        if wb is None:
            continue
        wx, wy = vd.weight(x), vd.weight(y)
        if wb < wx + wy:
            bad = f"wt[{x!r},{y!r}] = {wb} < {wx}+{wy}"
            break
    checks.append(Check("bracket weight-additive", bad is None, bad))

    bad = None
    for a0 in vd.a_basis_by_degree.get(0, ()):
        w = vd.weight(a0)
        if w is not None and w < 1:
            bad = f"wt({a0!r}) = {w}"
            break
    checks.append(Check("degree-0 a-part has weight >= 1", bad is None, bad))

    bad = None
    for _, x in basis:
        px = vd.proj(x)
        wp = vd.weight(px)
        if wp is None:
            continue
        if wp < vd.weight(x):
            bad = f"wt(P {x!r}) = {wp} < {vd.weight(x)}"
            break
    checks.append(Check("P weight-nonincreasing", bad is None, bad))
    return Report(checks)


# ---------------------------------------------------------------------------
# L-infinity[1] algebras


class LInftyBase:
    """Shared relation/residual machinery over abstract multibrackets."""

    zero_elem: object

    def curvature(self):
        raise NotImplementedError

    def bracket(self, args: Sequence):
        raise NotImplementedError

    def relation_residual(self, n: int, inputs: Sequence, curved: bool = None):
        """Sum over i+j = n+1 of unshuffled compositions m_j(m_i(...), ...)."""
        if curved is None:
            curved = not self._curvature_is_zero()
        degs = [_elem_degree(v) for v in inputs]
        acc = self.zero_elem
        lo = 0 if curved else 1
        for i in range(lo, n + 1):
            j = n + 1 - i
            if j < 1:
                continue
            if i == 0:
                inner = self.curvature()
                acc = acc + self.bracket([inner] + list(inputs))
                continue
            for sigma in unshuffles(i, n - i):
                eps = koszul_sign(sigma, degs)
                chosen = [inputs[sigma[t] - 1] for t in range(i)]
                rest = [inputs[sigma[t] - 1] for t in range(i, n)]
                inner = self.bracket(chosen)
                if inner.is_zero():
                    continue
                term = self.bracket([inner] + rest)
                acc = acc + term.scale(eps)
        return acc

    def _curvature_is_zero(self) -> bool:
        c = self.curvature()
        return c is None or c.is_zero()

    def mc_residual(self, phi, cutoff: int | None = None):
        raise NotImplementedError

    def gauge_field(self, z, m):
        raise NotImplementedError


def _elem_degree(v) -> int:
    d = v.degree()
    return 0 if d is None else d


class ExplicitLInfty(LInftyBase):
    """Multibrackets given directly as per-arity callables with a known
    finite vanishing bound."""

    def __init__(self, name: str, zero, brackets: Mapping[int, Callable],
                 max_arity: int, m0=None):
        self.name = name
        self.zero_elem = zero
        self._brackets = dict(brackets)
        self.max_arity = max_arity
        self._m0 = m0 if m0 is not None else zero

    def curvature(self):
        return self._m0

    def bracket(self, args: Sequence):
        n = len(args)
        if n > self.max_arity:
            return self.zero_elem
        fn = self._brackets.get(n)
        return self.zero_elem if fn is None else fn(list(args))

    def mc_residual(self, phi, cutoff: int | None = None):
        top = self.max_arity if cutoff is None else min(cutoff, self.max_arity)
        acc = self._m0
        for n in range(1, top + 1):
            t = self.bracket([phi] * n)
            acc = acc + t.scale(Fraction(1, factorial(n)))
        return acc

    def gauge_field(self, z, m):
        acc = self.zero_elem
        for n in range(0, self.max_arity):
            t = self.bracket([z] + [m] * n)
            acc = acc + t.scale(Fraction(1, factorial(n)))
        return acc


class DerivedLInfty(LInftyBase):
    """The derived brackets {a_1..a_n} = P[...[Delta,a_1],...,a_n] on a."""

    def __init__(self, vd: VData, proj: Callable | None = None, name: str = ""):
        self.vd = vd
        self.proj = proj if proj is not None else vd.proj
        self.zero_elem = vd.lie.zero
        self.name = name or f"a^P_Delta({vd.name})"

    def curvature(self):
        return self.proj(self.vd.delta)

    def bracket(self, args: Sequence):
        x = self.vd.delta
        for a in args:
            x = self.vd.lie.bracket(x, a)
            if x.is_zero():
                break
        return self.proj(x)

    def mc_residual(self, phi, cutoff: int | None = None):
        """m_0 + sum 1/n! m_n(phi..phi), summed via the terminating ad-orbit."""
        acc = self.proj(self.vd.delta)
        term = self.vd.delta
        k = 0
        bound = self._series_bound(phi)
        while True:
            k += 1
            term = self.vd.lie.bracket(term, phi)
            if term.is_zero():
                break
            if bound is not None and k > bound:
                raise TruncationError("Maurer-Cartan series did not terminate")
            if cutoff is not None and k > cutoff:
                raise TruncationError(
                    f"series alive past requested cutoff {cutoff}")
            acc = acc + self.proj(term).scale(Fraction(1, factorial(k)))
        return acc

    def _series_bound(self, phi) -> int | None:
        vd = self.vd
        if vd.weight is not None:
            wphi = vd.weight(phi)
            if wphi is not None and wphi < 1:
                raise TruncationError("degree-0 element of weight < 1")
            wd = vd.weight(vd.delta)
            base = 0 if wd is None else wd
            return max(0, vd.weight_cap() - base + 1)
        return vd._dim_bound(vd.delta) + 1

    def gauge_field(self, z, m):
        """Y^z|_m = P(e^{ad_m}([Delta, z])) for the derived algebra."""
        dz = self.vd.lie.bracket(self.vd.delta, z)
        return self.proj(self.vd.ad_exp(dz, m))


# ---------------------------------------------------------------------------
# the big algebra on L[1] (+) a


@dataclass(frozen=True, eq=False)
class LPlusA:
    """Element (x[1], a) of L[1] (+) a; x is stored unshifted."""

    x: object
    a: object

    def __add__(self, other):
        return LPlusA(self.x + other.x, self.a + other.a)

    def __sub__(self, other):
        return LPlusA(self.x - other.x, self.a - other.a)

    def __neg__(self):
        return LPlusA(-self.x, -self.a)

    def scale(self, c: Scalar):
        return LPlusA(self.x.scale(c), self.a.scale(c))

    def __rmul__(self, c):
        return self.scale(c)

    def is_zero(self):
        return self.x.is_zero() and self.a.is_zero()

    def __eq__(self, other):
        if not isinstance(other, LPlusA):
            return NotImplemented
        return (self.x - other.x).is_zero() and (self.a - other.a).is_zero()

    def __hash__(self):
        raise TypeError("LPlusA is not hashable")

    def homogeneous_parts(self) -> dict[int, "LPlusA"]:
        xz, az = self.x.scale(0), self.a.scale(0)
        parts: dict[int, LPlusA] = {}
        for d, xp in self.x.homogeneous_parts().items():
            parts[d - 1] = LPlusA(xp, az)
        for d, ap in self.a.homogeneous_parts().items():
            if d in parts:
                parts[d] = LPlusA(parts[d].x, ap)
            else:
                parts[d] = LPlusA(xz, ap)
        return dict(sorted(parts.items()))

    def degree(self) -> int | None:
        parts = self.homogeneous_parts()
        if not parts:
            return None
        if len(parts) > 1:
            raise ValueError(f"inhomogeneous element, degrees {sorted(parts)}")
        return next(iter(parts))

    def __repr__(self):
        return f"({self.x!r})[1] (+) ({self.a!r})"


class BigLInfty(LInftyBase):
    """The structure on L[1] (+) a induced by a flat V-data.

    Differential d(x[1], a) = (-(Dx)[1], P(x + Da)); binary
    {x[1], y[1]} = [x,y][1] (-1)^{|x|}; the only other nonvanishing brackets
    are {x[1], a_1..a_n} and {a_1,...,a_n} via nested brackets, up to
    permutation (handled by Koszul reordering of mixed arguments).
    """

    def __init__(self, vd: VData, proj: Callable | None = None, name: str = ""):
        if not vd.is_flat():
            raise ValueError("the big algebra needs flat V-data (Delta in ker P)")
        self.vd = vd
        self.proj = proj if proj is not None else vd.proj
        self.zero_elem = LPlusA(vd.lie.zero, vd.lie.zero)
        self.name = name or f"(L[1](+)a)({vd.name})"

    def curvature(self):
        return self.zero_elem

    def d(self, v: LPlusA) -> LPlusA:
        br = self.vd.lie.bracket
        dx = br(self.vd.delta, v.x)
        da = br(self.vd.delta, v.a)
        return LPlusA(-dx, self.proj(v.x + da))

    def bracket(self, args: Sequence[LPlusA]):
        n = len(args)
        if n == 1:
            return self.d(args[0])
        acc = self.zero_elem
        br = self.vd.lie.bracket
        zero = self.vd.lie.zero
        for sign, xs, alist in self._patterns(args):
            if len(xs) == 2 and not alist:
                x, dx = xs[0]
                y, _ = xs[1]
                val = br(x, y)
                if dx % 2:
                    val = -val
                term = LPlusA(val, zero)
            elif len(xs) == 1 and alist:
                cur = xs[0][0]
                for a in alist:
                    cur = br(cur, a)
                    if cur.is_zero():
                        break
                term = LPlusA(zero, self.proj(cur))
            elif not xs and len(alist) >= 2:
                cur = br(self.vd.delta, alist[0])
                for a in alist[1:]:
                    cur = br(cur, a)
                    if cur.is_zero():
                        break
                term = LPlusA(zero, self.proj(cur))
            else:
                continue
            acc = acc + term.scale(sign)
        return acc

    def _patterns(self, args: Sequence[LPlusA]):
        """Multilinear expansion into canonical (x's first) patterns.

        Yields (koszul sign, [(x, deg_x), ...], [a, ...]) over all choices of
        component per slot and homogeneous parts.
        """
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

    def mc_residual(self, v: LPlusA, cutoff: int | None = None) -> LPlusA:
        """Closed-form residual for a degree-0 element (x[1], a):

        L-part  -(1/2)[Delta+x, Delta+x] shifted by the flatness of Delta;
        a-part  P(e^{ad_a} x) + sum_n 1/n! P(ad_a^{n-1} Da).
        """
        if _elem_degree(v) not in (0,):
            raise ValueError("Maurer-Cartan candidates have degree 0")
        br = self.vd.lie.bracket
        x, a = v.x, v.a
        lpart = -(br(self.vd.delta, x) + br(x, x).scale(Fraction(1, 2)))
        apart = self.proj(self.vd.ad_exp(x, a))
        da = br(self.vd.delta, a)
        acc = self.proj(da)
        term = da
        k = 1
        bound = self._series_bound(a)
        while True:
            k += 1
            term = br(term, a)
            if term.is_zero():
                break
            if bound is not None and k > bound:
                raise TruncationError("Maurer-Cartan series did not terminate")
            acc = acc + self.proj(term).scale(Fraction(1, factorial(k)))
        return LPlusA(lpart, apart + acc)

    def _series_bound(self, phi) -> int | None:
        vd = self.vd
        if vd.weight is not None:
            wphi = vd.weight(phi)
            if wphi is not None and wphi < 1:
                raise TruncationError("degree-0 element of weight < 1")
            return vd.weight_cap() + 2
        return vd._dim_bound(vd.delta) + 2

    def mc_residual_series(self, v: LPlusA, arity_top: int) -> LPlusA:
        """Plain series sum(1/n! m_n(v..v)) up to a caller-chosen arity; the
        independent cross-check for :meth:`mc_residual`."""
        acc = self.zero_elem
        for n in range(1, arity_top + 1):
            t = self.bracket([v] * n)
            acc = acc + t.scale(Fraction(1, factorial(n)))
        return acc

    def gauge_field(self, z: LPlusA, m: LPlusA) -> LPlusA:
        """Y^z|_m = dz + {z,m} + 1/2!{z,m,m} + ... in closed form."""
        br = self.vd.lie.bracket
        lpart = -br(self.vd.delta, z.x) + br(z.x, m.x)
        inner = z.x + br(self.vd.delta, z.a) + br(m.x, z.a)
        apart = self.proj(self.vd.ad_exp(inner, m.a))
        return LPlusA(lpart, apart)

    def gauge_field_series(self, z: LPlusA, m: LPlusA, arity_top: int) -> LPlusA:
        acc = self.zero_elem
        for n in range(0, arity_top):
            t = self.bracket([z] + [m] * n)
            acc = acc + t.scale(Fraction(1, factorial(n)))
        return acc


# ---------------------------------------------------------------------------
# the main equivalence


@dataclass
class MachineCheck:
    lhs_flat: bool
    lhs_mc: bool
    rhs: bool
    lhs_flat_witness: object
    lhs_mc_witness: object
    rhs_witness: LPlusA

    @property
    def lhs(self) -> bool:
        return self.lhs_flat and self.lhs_mc

    @property
    def agrees(self) -> bool:
        return self.lhs == self.rhs


def thm_machine_check(vd: VData, phi, delta_t, phi_t) -> MachineCheck:
    """Both sides of the deformation equivalence, by independent routes.

    Left: [Delta+dt, Delta+dt] = 0 and phi+pt Maurer-Cartan in the derived
    (possibly curved) algebra of (L, a, P, Delta+dt).  Right: (dt[1], pt)
    Maurer-Cartan in the big algebra of (L, a, P_phi, Delta).
    """
    lie = vd.lie
    new_delta = vd.delta + delta_t
    sq = lie.bracket(new_delta, new_delta)

    vd_def = VData(lie, vd.proj, new_delta, vd.a_basis_by_degree,
                   vd.weight, f"{vd.name}+dt", vd.log)
    lhs_res = DerivedLInfty(vd_def).mc_residual(phi + phi_t)

    twisted = vd.twist(phi)
    big = BigLInfty(twisted)
    rhs_res = big.mc_residual(LPlusA(delta_t, phi_t))

    return MachineCheck(
        lhs_flat=sq.is_zero(),
        lhs_mc=lhs_res.is_zero(),
        rhs=rhs_res.is_zero(),
        lhs_flat_witness=sq,
        lhs_mc_witness=lhs_res,
        rhs_witness=rhs_res,
    )
