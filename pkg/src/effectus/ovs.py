"""Ordered vector spaces over Q: unit intervals, subbases, totalization and the two norms.

All arithmetic is exact.  Optimization goes through :func:`effectus.lp.solve_lp`,
linear algebra (rank, coordinates) through sympy's rational matrices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import sympy

from .algebra import Violation
from .cone import Cone, Vector, dot, unit_vector, vadd, vec, vscale, vsub
from .lp import solve_lp
from .modules import RationalEffectModule, RationalWeightModule, is_cancellative
from .monoid import format_rational


def _to_fraction(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


@dataclass(frozen=True)
class RationalOVS:
    """``Q^n`` ordered by a polyhedral cone, optionally with an order unit or a trace."""

    cone: Cone
    unit: Optional[Vector] = None
    trace: Optional[Vector] = None

    def __post_init__(self):
        if self.unit is not None:
            object.__setattr__(self, "unit", vec(self.unit))
            if len(self.unit) != self.dimension:
                raise ValueError("order unit has the wrong dimension")
            for i in range(self.dimension):
                if not _norm_lp(self.cone, self.unit, unit_vector(self.dimension, i)).optimal:
                    raise ValueError(f"{self.unit} is not an order unit: basis vector {i} is not bounded by it")
        if self.trace is not None:
            object.__setattr__(self, "trace", vec(self.trace))
            if len(self.trace) != self.dimension:
                raise ValueError("trace has the wrong dimension")
            bad = [g for g in self.cone.rays() if any(g) and dot(self.trace, g) <= 0]
            if bad:
                g = bad[0]
                raise ValueError(
                    f"trace is not strictly positive: it is {format_rational(dot(self.trace, g))} "
                    f"on generator ({', '.join(format_rational(x) for x in g)})"
                )

    @property
    def dimension(self) -> int:
        return self.cone.dimension

    @property
    def positively_generated(self) -> bool:
        rays = self.cone.rays()
        return bool(rays) and sympy.Matrix([list(r) for r in rays]).rank() == self.dimension

    def leq(self, a, b) -> bool:
        return self.cone.contains(vsub(b, a))

    def to_dict(self) -> dict:
        d = {"kind": "ovs", **self.cone.to_dict()}
        if self.unit is not None:
            d["unit"] = [format_rational(x) for x in self.unit]
        if self.trace is not None:
            d["trace"] = [format_rational(x) for x in self.trace]
        return d


def unit_interval(a: RationalOVS) -> RationalEffectModule:
    """The interval ``[0, u]`` as an effect module over the rational unit interval."""
    if a.unit is None:
        raise ValueError("unit_interval needs an order unit")
    return RationalEffectModule(a.cone, a.unit)


def subbase(v: RationalOVS) -> RationalWeightModule:
    """``{x >= 0 : tau(x) <= 1}`` with weight ``tau``."""
    if v.trace is None:
        raise ValueError("subbase needs a trace")
    return RationalWeightModule(v.cone, v.trace)


# ---------------------------------------------------------------- norms


def _norm_lp(cone: Cone, u: Sequence, a: Sequence):
    # minimize r:  r u - a = R m1,  r u + a = R m2,  r, m1, m2 >= 0
    rays = cone.rays()
    n, k = cone.dimension, len(rays)
    rows, rhs = [], []
    for sign in (-1, 1):
        for i in range(n):
            row = [u[i]] + [0] * (2 * k)
            off = 1 if sign < 0 else 1 + k
            for j, g in enumerate(rays):
                row[off + j] = -g[i]
            rows.append(row)
            rhs.append(-sign * a[i])
    return solve_lp([1] + [0] * (2 * k), rows, rhs)


def order_unit_norm(a: RationalOVS, x) -> Fraction:
    """``inf { r >= 0 : -r u <= x <= r u }``."""
    if a.unit is None:
        raise ValueError("order_unit_norm needs an order unit")
    res = _norm_lp(a.cone, a.unit, vec(x))
    if not res.optimal:
        raise ValueError(f"order-unit LP is {res.status}; {a.unit} does not bound {x}")
    return res.value


def base_seminorm(v: RationalOVS, x, trace: Optional[Sequence] = None) -> Fraction:
    """``inf { tau(x1) + tau(x2) : x = x1 - x2, x1, x2 >= 0 }``.

    ``trace`` overrides the trace of ``v`` and need not be strictly positive;
    a ``ValueError`` reports an unbounded or infeasible program.
    """
    tau = vec(trace) if trace is not None else v.trace
    if tau is None:
        raise ValueError("base_seminorm needs a trace")
    x = vec(x)
    rays = v.cone.rays()
    n, k = v.dimension, len(rays)
    rows = [[g[i] for g in rays] + [-g[i] for g in rays] for i in range(n)]
    c = [dot(tau, g) for g in rays] * 2
    res = solve_lp(c, rows, list(x))
    if not res.optimal:
        raise ValueError(f"base-seminorm LP is {res.status}")
    return res.value


def check_norm_is_norm(v: RationalOVS, trace: Optional[Sequence] = None, generators: Optional[Sequence] = None):
    """Probe the seminorm on basis vectors and generators (both signs).

    Returns ``(True, None)`` or ``(False, (vector, value))``; an unbounded
    program counts as a failure with value ``None``.
    """
    n = v.dimension
    probes = [unit_vector(n, i) for i in range(n)] + [vec(g) for g in (generators or v.cone.rays())]
    for p in probes:
        for q in (p, vscale(-1, p)):
            if not any(q):
                continue
            try:
                val = base_seminorm(v, q, trace)
            except ValueError:
                return False, (q, None)
            if val <= 0:
                return False, (q, val)
    return True, None


# ---------------------------------------------------------------- scaling


def chain_supremum(le: Callable, chain: Sequence):
    """Join of an ascending, eventually constant chain: its last element."""
    if not chain:
        raise ValueError("empty chain")
    for a, b in zip(chain, chain[1:]):
        if not le(a, b):
            raise ValueError(f"not ascending: {a} then {b}")
    return chain[-1]


def check_scaling_lemma(e: RationalEffectModule, chain: Sequence, n: int) -> bool:
    """``sup_k 2^-n a_k == 2^-n sup_k a_k`` for an ascending chain in ``e``."""
    chain = [vec(a) for a in chain]
    if not all(e.contains(a) for a in chain):
        raise ValueError("chain leaves the interval")
    le = lambda a, b: e.cone.contains(vsub(b, a))
    r = Fraction(1, 2 ** n)
    lhs = chain_supremum(le, [e.act(r, a) for a in chain])
    rhs = e.act(r, chain_supremum(le, chain))
    return lhs == rhs


# ---------------------------------------------------------------- totalization


def _matrix(cols: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(c[i].numerator, c[i].denominator) for c in cols] for i in range(len(cols[0]))])


@dataclass(frozen=True)
class Totalization:
    """``space`` is the span of ``module``; ``basis`` (columns in ambient coordinates) identifies the two."""

    space: RationalOVS
    module: RationalWeightModule
    basis: tuple[Vector, ...]

    def embed(self, y) -> Vector:
        """Coordinates in ``space`` to the ambient point of ``module``."""
        out = tuple(Fraction(0) for _ in range(self.module.dimension))
        for c, b in zip(y, self.basis):
            out = vadd(out, vscale(c, b))
        return out

    def coordinates(self, x) -> Vector:
        """Inverse of :meth:`embed` on the span."""
        x = vec(x)
        a = _matrix(self.basis)
        sol, params = a.gauss_jordan_solve(sympy.Matrix([sympy.Rational(v.numerator, v.denominator) for v in x]))
        if params.shape[0]:
            raise ValueError("basis is not independent")
        return tuple(_to_fraction(s) for s in sol)

    def check(self, sample: Optional[Sequence] = None) -> list[Violation]:
        """Round-trip both ways on the sample grid, preserving weight and summability."""
        out = []
        x_mod = self.module
        base_mod = subbase(self.space)
        pts = list(sample) if sample is not None else x_mod.sample()
        for x in pts:
            y = self.coordinates(x)
            if self.embed(y) != x:
                out.append(Violation("totalize.roundtrip", (x,)))
            if not base_mod.contains(y):
                out.append(Violation("totalize.into_subbase", (x, y)))
            if base_mod.weight(y) != x_mod.weight(x):
                out.append(Violation("totalize.weight", (x,)))
        for x, z in itertools.product(pts[:16], repeat=2):
            s = x_mod.add(x, z)
            t = base_mod.add(self.coordinates(x), self.coordinates(z))
            if (s is None) != (t is None) or (s is not None and self.coordinates(s) != t):
                out.append(Violation("totalize.additive", (x, z)))
        for y in base_mod.sample():
            if self.coordinates(self.embed(y)) != y or not x_mod.contains(self.embed(y)):
                out.append(Violation("totalize.inverse", (y,)))
        return out


def totalize(x: RationalWeightModule) -> Totalization:
    """The ordered vector space spanned by a cone-slice weight module, with trace extending the weight."""
    if not isinstance(x, RationalWeightModule):
        c = is_cancellative(x)
        if not c:
            raise ValueError(f"weight module is not cancellative: {c.witness}")
        raise TypeError("only cone-slice modules in Q^n can be totalized")
    rays = [g for g in x.cone.rays() if any(g)]
    n = x.dimension
    if not rays:
        return Totalization(RationalOVS(Cone(0, ()), trace=()), x, ())
    m = _matrix(rays)
    if m.rank() == n:
        basis = tuple(unit_vector(n, i) for i in range(n))
    else:
        _, pivots = m.rref()
        basis = tuple(rays[j] for j in pivots)
    tot = Totalization(None, x, basis)  # type: ignore[arg-type]
    gens = tuple(tot.coordinates(g) for g in rays)
    cone = Cone(n) if len(basis) == n and x.cone.coordinatewise else Cone(len(basis), gens)
    trace = tuple(dot(x.trace, b) for b in basis)
    return Totalization(RationalOVS(cone, trace=trace), x, basis)


def space_isomorphism(v: RationalOVS, t: Totalization) -> list[Violation]:
    """``totalize(subbase(v))`` presents ``v`` again: same cone and trace under the returned basis."""
    out = []
    n = v.dimension
    if len(t.basis) != n:
        return [Violation("totalize.dimension", (n, len(t.basis)))]
    for g in v.cone.rays():
        if not t.space.cone.contains(t.coordinates(g)):
            out.append(Violation("totalize.cone", (g,)))
    for g in t.space.cone.rays():
        if not v.cone.contains(t.embed(g)):
            out.append(Violation("totalize.cone_inverse", (g,)))
    for i in range(n):
        e = unit_vector(n, i)
        if dot(t.space.trace, t.coordinates(e)) != dot(v.trace, e):
            out.append(Violation("totalize.trace", (i,)))
    return out


# ---------------------------------------------------------------- morphisms


def is_positive_trace_decreasing(v: RationalOVS, w: RationalOVS, matrix) -> bool:
    for g in v.cone.rays():
        img = tuple(dot(row, g) for row in matrix)
        if not w.cone.contains(img) or dot(w.trace, img) > dot(v.trace, g):
            return False
    return True


def restrict_map(v: RationalOVS, w: RationalOVS, matrix) -> Callable:
    """The positive linear map as a function on the subbase of ``v``."""
    mat = tuple(vec(r) for r in matrix)
    return lambda x: tuple(dot(row, x) for row in mat)


def is_subbase_morphism(x: RationalWeightModule, y: RationalWeightModule, f: Callable, sample=None) -> bool:
    """Additive, scalar-preserving and weight-decreasing on the sample grid of ``x``."""
    pts = list(sample) if sample is not None else x.sample(32)
    for a in pts:
        fa = f(a)
        if not y.contains(fa) or y.weight(fa) > x.weight(a):
            return False
        for r in (Fraction(0), Fraction(1, 3), Fraction(1, 2)):
            if f(x.act(r, a)) != y.act(r, fa):
                return False
    for a, b in itertools.product(pts[:12], repeat=2):
        s = x.add(a, b)
        if s is not None and f(s) != y.add(f(a), f(b)):
            return False
    return True


def extend_map(x: RationalWeightModule, y: RationalWeightModule, f: Callable) -> tuple[tuple[Fraction, ...], ...]:
    """The unique linear map agreeing with ``f`` on the module, as a matrix.

    It is read off from the values of ``f`` on normalized generators, which
    span the ambient space.
    """
    n = x.dimension
    pts = [p for p in x.vertices() if any(p)]
    if not pts or _matrix(pts).rank() != n:
        raise ValueError("module does not span its ambient space")
    _, pivots = _matrix(pts).rref()
    basis = [pts[j] for j in pivots]
    images = [vec(f(b)) for b in basis]
    # M B = F  =>  M = F B^-1
    bmat = _matrix(basis)
    mmat = _matrix(images) * bmat.inv()
    return tuple(tuple(_to_fraction(mmat[i, j]) for j in range(n)) for i in range(y.dimension))


def check_morphism_correspondence(v: RationalOVS, w: RationalOVS, grid: Sequence = (0, Fraction(1, 2), 1)) -> list[Violation]:
    """For every matrix with entries in ``grid``: positive trace-decreasing iff its restriction is a
    morphism of subbases, and restriction followed by extension returns the same matrix."""
    x, y = subbase(v), subbase(w)
    grid = [Fraction(g) for g in grid]
    out = []
    sample = x.sample(32)
    for flat in itertools.product(grid, repeat=v.dimension * w.dimension):
        mat = tuple(tuple(flat[i * v.dimension:(i + 1) * v.dimension]) for i in range(w.dimension))
        f = restrict_map(v, w, mat)
        pos = is_positive_trace_decreasing(v, w, mat)
        if pos != is_subbase_morphism(x, y, f, sample):
            out.append(Violation("correspondence.morphism", (mat,)))
        if pos and extend_map(x, y, f) != mat:
            out.append(Violation("correspondence.roundtrip", (mat,)))
    return out
