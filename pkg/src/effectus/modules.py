"""Effect modules and weight modules over a scalar system.

Two carrier backends share one duck-typed interface (``zero``, ``add``,
``act``, plus ``top`` or ``weight``):

* finite tables over a :class:`FiniteEffectMonoid`, elements are indices;
* rational coordinates over :class:`RationalUnitInterval`, elements are
  tuples of ``Fraction``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import (
    FiniteEffectAlgebra,
    FinitePcm,
    Violation,
    check_effect_algebra_axioms,
    check_pcm_axioms,
)
from .cone import Cone, Vector, dot, vadd, vec, vscale, vsub
from .lp import solve_lp
from .monoid import (
    FiniteEffectMonoid,
    RationalUnitInterval,
    ScalarSystem,
    format_rational,
    two_monoid,
)

Q = RationalUnitInterval()


# ---------------------------------------------------------------- finite backends


@dataclass(frozen=True)
class FiniteEffectModule:
    algebra: FiniteEffectAlgebra
    scalars: FiniteEffectMonoid
    action: tuple[tuple[int, ...], ...]  # action[r][a]

    finite = True

    def __post_init__(self):
        object.__setattr__(self, "action", tuple(tuple(r) for r in self.action))

    @property
    def elements(self) -> range:
        return self.algebra.elements

    @property
    def size(self) -> int:
        return self.algebra.size

    @property
    def zero(self) -> int:
        return self.algebra.zero

    @property
    def top(self) -> int:
        return self.algebra.top

    def add(self, a, b):
        return self.algebra.add(a, b)

    def act(self, r, a):
        return self.action[r][a]

    def label(self, a) -> str:
        return self.algebra.label(a)


@dataclass(frozen=True)
class FiniteWeightModule:
    size: int
    zero: int
    sum: tuple[tuple[Optional[int], ...], ...]
    action: tuple[tuple[int, ...], ...]  # action[r][x]
    weights: tuple[int, ...]
    scalars: FiniteEffectMonoid
    labels: Optional[tuple[str, ...]] = None

    finite = True

    def __post_init__(self):
        object.__setattr__(self, "sum", tuple(tuple(r) for r in self.sum))
        object.__setattr__(self, "action", tuple(tuple(r) for r in self.action))
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def pcm(self) -> FinitePcm:
        return FinitePcm(self.size, self.zero, self.sum, self.labels)

    def add(self, a, b):
        return self.sum[a][b]

    def act(self, r, x):
        return self.action[r][x]

    def weight(self, x):
        return self.weights[x]

    def label(self, x) -> str:
        return self.labels[x] if self.labels else str(x)


def pointed_set(size: int, base: int = 0, labels: Optional[Sequence[str]] = None) -> FiniteWeightModule:
    """A set with a distinguished point as a weight module over ``{0,1}``."""
    if not 0 <= base < size:
        raise ValueError("base point out of range")
    two = two_monoid()
    table = [[None] * size for _ in range(size)]
    for x in range(size):
        table[base][x] = table[x][base] = x
    action = (tuple(base for _ in range(size)), tuple(range(size)))
    weights = tuple(0 if x == base else 1 for x in range(size))
    return FiniteWeightModule(size, base, table, action, weights, two, tuple(labels) if labels else None)


def monoid_as_weight_module(m: FiniteEffectMonoid) -> FiniteWeightModule:
    """The scalars acting on themselves by left multiplication, weight = identity."""
    return FiniteWeightModule(m.size, m.zero, m.algebra.sum, m.product, tuple(m.elements), m, m.algebra.labels)


def monoid_as_effect_module(m: FiniteEffectMonoid) -> FiniteEffectModule:
    return FiniteEffectModule(m.algebra, m, m.product)


def trivial_action(e: FiniteEffectAlgebra) -> FiniteEffectModule:
    """The only ``{0,1}``-action on an effect algebra."""
    two = two_monoid()
    return FiniteEffectModule(e, two, (tuple(e.zero for _ in e.elements), tuple(e.elements)))


# ---------------------------------------------------------------- rational backends


@dataclass(frozen=True)
class RationalEffectModule:
    """The interval ``[0, u]`` of a polyhedral cone, acted on by ``[0,1] ∩ Q``."""

    cone: Cone
    unit: Vector

    finite = False
    scalars = Q

    def __post_init__(self):
        object.__setattr__(self, "unit", vec(self.unit))

    @property
    def dimension(self) -> int:
        return self.cone.dimension

    @property
    def zero(self) -> Vector:
        return tuple(Fraction(0) for _ in range(self.dimension))

    @property
    def top(self) -> Vector:
        return self.unit

    def contains(self, a) -> bool:
        return len(a) == self.dimension and self.cone.contains(a) and self.cone.contains(vsub(self.unit, a))

    def add(self, a, b):
        s = vadd(a, b)
        return s if self.cone.contains(vsub(self.unit, s)) else None

    def act(self, r, a):
        return vscale(r, a)

    def orthosupplement(self, a):
        return vsub(self.unit, a)

    def max_scale(self, g: Vector) -> Fraction:
        """Largest ``t`` with ``t g`` in the interval."""
        if self.cone.coordinatewise:
            ratios = [self.unit[i] / g[i] for i in range(self.dimension) if g[i] > 0]
            return min(ratios) if ratios else Fraction(0)
        rays = self.cone.rays()
        # maximize t: u - t g = sum l_k ray_k, l >= 0
        A = [[g[i]] + [r[i] for r in rays] for i in range(self.dimension)]
        res = solve_lp([1] + [0] * len(rays), A, list(self.unit), maximize=True)
        return res.value if res.optimal else Fraction(0)

    def anchor_points(self) -> list[Vector]:
        pts = [self.zero, self.unit]
        if self.cone.coordinatewise:
            pts += [tuple(self.unit[i] if bits >> i & 1 else Fraction(0) for i in range(self.dimension))
                    for bits in range(1 << self.dimension)]
        else:
            for g in self.cone.rays():
                t = self.max_scale(g)
                pts += [vscale(t, g), vsub(self.unit, vscale(t, g))]
        return _dedupe(pts)

    def sample(self, count: int = 64, seed: int = 0) -> list[Vector]:
        return grid_sample(self.anchor_points(), count, seed)

    def to_dict(self) -> dict:
        return {"kind": "effect_module", **self.cone.to_dict(), "unit": [format_rational(x) for x in self.unit]}


@dataclass(frozen=True)
class RationalWeightModule:
    """The subbase ``{x in C : trace(x) <= 1}`` of a cone with a positive trace."""

    cone: Cone
    trace: Vector

    finite = False
    scalars = Q

    def __post_init__(self):
        object.__setattr__(self, "trace", vec(self.trace))
        if len(self.trace) != self.cone.dimension:
            raise ValueError("trace has wrong dimension")

    @property
    def dimension(self) -> int:
        return self.cone.dimension

    @property
    def zero(self) -> Vector:
        return tuple(Fraction(0) for _ in range(self.dimension))

    def contains(self, x) -> bool:
        return len(x) == self.dimension and self.cone.contains(x) and dot(self.trace, x) <= 1

    def add(self, x, y):
        s = vadd(x, y)
        return s if dot(self.trace, s) <= 1 else None

    def act(self, r, x):
        return vscale(r, x)

    def weight(self, x) -> Fraction:
        return dot(self.trace, x)

    def vertices(self) -> list[Vector]:
        pts = [self.zero]
        for g in self.cone.rays():
            t = dot(self.trace, g)
            if t > 0:
                pts.append(vscale(1 / t, g))
        return _dedupe(pts)

    def sample(self, count: int = 64, seed: int = 0) -> list[Vector]:
        return grid_sample(self.vertices(), count, seed)

    def to_dict(self) -> dict:
        return {"kind": "weight_module", **self.cone.to_dict(), "trace": [format_rational(x) for x in self.trace]}


def simplex_module(dimension: int) -> RationalWeightModule:
    """``{x >= 0 : sum x <= 1}`` in ``Q^dimension``."""
    return RationalWeightModule(Cone(dimension), tuple(Fraction(1) for _ in range(dimension)))


def box_module(unit: Sequence) -> RationalEffectModule:
    u = vec(unit)
    return RationalEffectModule(Cone(len(u)), u)


def _dedupe(pts):
    seen, out = set(), []
    for p in pts:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def grid_sample(anchors: Sequence[Vector], count: int = 64, seed: int = 0) -> list[Vector]:
    """Anchors, their pairwise midpoints, the barycenter, and seeded random convex combinations.

    The random combinations use denominators up to 16, so every point is a
    member of any convex carrier containing the anchors.
    """
    anchors = _dedupe(anchors)
    pts = list(anchors)
    for a, b in itertools.combinations(anchors, 2):
        pts.append(vscale(Fraction(1, 2), vadd(a, b)))
    k = len(anchors)
    pts.append(tuple(sum((a[i] for a in anchors), Fraction(0)) / k for i in range(len(anchors[0]))))
    rng = random.Random(seed)
    for _ in range(count):
        d = rng.randint(1, 16)
        cuts = sorted(rng.randint(0, d) for _ in range(k - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
        p = tuple(sum((Fraction(w, d) * a[i] for w, a in zip(parts, anchors)), Fraction(0)) for i in range(len(anchors[0])))
        pts.append(p)
    return _dedupe(pts)


# ---------------------------------------------------------------- checkers


def _carrier(x, sample):
    if sample is not None:
        return list(sample)
    return list(x.elements) if x.finite else x.sample()


def _scalar_sample(m: ScalarSystem) -> list:
    return list(m.elements) if m.finite else m.sample()


TRIPLE_CAP = 24  # sample points used in the cubic loops on rational carriers


def _action_laws(mod, xs, rs, out: list[Violation]) -> None:
    m = mod.scalars
    z = mod.zero
    ys = xs if mod.finite else xs[:TRIPLE_CAP]
    for a in xs:
        if mod.act(m.one, a) != a:
            out.append(Violation("action.unit", (a,)))
        if mod.act(m.zero, a) != z:
            out.append(Violation("action.zero_scalar", (a,)))
    for r in rs:
        if mod.act(r, z) != z:
            out.append(Violation("action.zero_vector", (r,)))
    for r in rs:
        for s in rs:
            rs_sum = m.add(r, s)
            rs_prod = m.mul(r, s)
            for a in ys:
                if mod.act(rs_prod, a) != mod.act(r, mod.act(s, a)):
                    out.append(Violation("action.associativity", (r, s, a)))
                if rs_sum is not None and mod.add(mod.act(r, a), mod.act(s, a)) != mod.act(rs_sum, a):
                    out.append(Violation("action.biadditivity.scalar", (r, s, a)))
    for a in ys:
        for b in ys:
            ab = mod.add(a, b)
            if ab is None:
                continue
            for r in rs:
                if mod.add(mod.act(r, a), mod.act(r, b)) != mod.act(r, ab):
                    out.append(Violation("action.biadditivity.vector", (r, a, b)))


def _finite_action_shape(mod) -> list[Violation]:
    n, k = mod.size, mod.scalars.size
    a = mod.action
    if len(a) != k or any(len(row) != n for row in a) or any(not (isinstance(v, int) and 0 <= v < n) for row in a for v in row):
        return [Violation("structure.action", (), "action table malformed")]
    return []


def check_effect_module_axioms(e, sample: Optional[Sequence] = None, scalar_sample: Optional[Sequence] = None) -> list[Violation]:
    """Effect-algebra laws of the carrier and the five action equations.

    Finite carriers are checked exhaustively; rational ones on the sample grid.
    """
    if e.finite:
        out = check_effect_algebra_axioms(e.algebra) + _finite_action_shape(e)
        if out:
            return out
    else:
        out = []
        if not e.contains(e.top):
            out.append(Violation("structure.unit", (e.top,), "unit not in the interval"))
            return out
    xs = _carrier(e, sample)
    rs = list(scalar_sample) if scalar_sample is not None else _scalar_sample(e.scalars)
    if not e.finite:
        for a in xs:
            if not e.contains(a):
                out.append(Violation("structure.sample", (a,), "sample point outside the carrier"))
                continue
            ap = e.orthosupplement(a)
            if e.add(a, ap) != e.top:
                out.append(Violation("ea.orthosupplement.missing", (a,)))
            if a != e.zero and e.add(a, e.top) is not None:
                out.append(Violation("ea.positivity", (a,)))
        for r in rs:
            for a in xs[:16]:
                if not e.contains(e.act(r, a)):
                    out.append(Violation("structure.action", (r, a), "action leaves the carrier"))
    _action_laws(e, xs, rs, out)
    return out


def check_weight_module_axioms(w, sample: Optional[Sequence] = None, scalar_sample: Optional[Sequence] = None) -> list[Violation]:
    """PCM laws, the action equations, and the three conditions on the weight."""
    m = w.scalars
    if w.finite:
        out = check_pcm_axioms(w.pcm) + _finite_action_shape(w)
        if len(w.weights) != w.size or any(not (isinstance(v, int) and 0 <= v < m.size) for v in w.weights):
            out.append(Violation("structure.weight", (), "weight table malformed"))
        if out:
            return out
    else:
        out = []
        if any(dot(w.trace, g) <= 0 for g in w.cone.rays()):
            out.append(Violation("weight.positivity", (), "trace not strictly positive on the cone"))
    xs = _carrier(w, sample)
    rs = list(scalar_sample) if scalar_sample is not None else _scalar_sample(m)
    if not w.finite:
        for a, b in itertools.product(xs[:24], repeat=2):
            ab = w.add(a, b)
            if ab is not None:
                for c in xs[:8]:
                    bc = w.add(b, c)
                    left = w.add(ab, c)
                    right = None if bc is None else w.add(a, bc)
                    if left != right:
                        out.append(Violation("pcm.associativity", (a, b, c)))
    _action_laws(w, xs, rs, out)
    if w.weight(w.zero) != m.zero:
        out.append(Violation("weight.additive", (w.zero,), "weight of zero is not zero"))
    for x in xs:
        if w.weight(x) == m.zero and x != w.zero:
            out.append(Violation("weight.reflects_zero", (x,)))
        for r in rs:
            if w.weight(w.act(r, x)) != m.mul(r, w.weight(x)):
                out.append(Violation("weight.action", (r, x)))
    for x in xs:
        for y in xs:
            xy = w.add(x, y)
            wsum = m.add(w.weight(x), w.weight(y))
            if xy is not None and w.weight(xy) != wsum:
                out.append(Violation("weight.additive", (x, y)))
            if wsum is not None and xy is None:
                out.append(Violation("weight.reflects_summability", (x, y)))
    return out


@dataclass(frozen=True)
class Cancellativity:
    cancellative: bool
    witness: tuple = ()
    justification: str = "exhaustive"

    def __bool__(self):
        return self.cancellative


def is_cancellative(w) -> Cancellativity:
    if not w.finite:
        return Cancellativity(True, (), "vector-addition")
    for x in w.elements:
        seen = {}
        for y in w.elements:
            s = w.add(x, y)
            if s is None:
                continue
            if s in seen:
                return Cancellativity(False, (x, seen[s], y, s))
            seen[s] = y
    return Cancellativity(True)


@dataclass(frozen=True)
class RationalBase:
    """The weight-one slice of a rational weight module."""

    module: RationalWeightModule

    def __contains__(self, x) -> bool:
        return self.module.contains(x) and self.module.weight(x) == 1

    def sample(self, count: int = 32, seed: int = 0) -> list[Vector]:
        tops = [v for v in self.module.vertices() if v != self.module.zero]
        return grid_sample(tops, count, seed) if tops else []


def base(w):
    if w.finite:
        return frozenset(x for x in w.elements if w.weight(x) == w.scalars.one)
    return RationalBase(w)


def check_base_convexity(w, trials: int = 50, seed: int = 0) -> list[Violation]:
    """Sums ``r_1 x_1 + ... + r_n x_n`` with weight-one ``x_i`` and ``r_i`` summing to one stay in the base."""
    m = w.scalars
    b = base(w)
    pts = sorted(b) if w.finite else b.sample()
    if not pts:
        return []
    rs = _scalar_sample(m)
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        k = rng.randint(1, 3)
        xs = [rng.choice(pts) for _ in range(k)]
        # pick scalars that partition one
        coeffs, rest = [], m.one
        for _ in range(k - 1):
            below = [r for r in rs if m.leq(r, rest)]
            r = rng.choice(below)
            coeffs.append(r)
            rest = m.ominus(rest, r)
        coeffs.append(rest)
        acc = w.zero
        for r, x in zip(coeffs, xs):
            acc = w.add(acc, w.act(r, x))
            if acc is None:
                break
        if acc is None or acc not in b:
            out.append(Violation("base.convexity", (tuple(coeffs), tuple(xs))))
    return out


# ---------------------------------------------------------------- coproducts


@dataclass(frozen=True)
class FiniteCoproduct:
    """Coproduct of finite weight modules with its structure maps as tables."""

    module: FiniteWeightModule
    summands: tuple[FiniteWeightModule, ...]
    tuples: tuple[tuple[int, ...], ...]

    def index(self, t: Sequence[int]) -> int:
        return self.tuples.index(tuple(t))

    def coprojection(self, i: int) -> tuple[int, ...]:
        z = [s.zero for s in self.summands]
        out = []
        for x in self.summands[i].elements:
            t = list(z)
            t[i] = x
            out.append(self.index(t))
        return tuple(out)

    def projection(self, i: int) -> tuple[int, ...]:
        return tuple(t[i] for t in self.tuples)

    def cotuple(self, target, tables: Sequence[Sequence[int]]) -> tuple[int, ...]:
        """``(x_i) -> f_1(x_1) + ... + f_n(x_n)`` in ``target``; raises if a sum is undefined."""
        out = []
        for t in self.tuples:
            acc = target.zero
            for f, x in zip(tables, t):
                acc = target.add(acc, f[x])
                if acc is None:
                    raise ValueError("cotuple sum undefined")
            out.append(acc)
        return tuple(out)


@dataclass(frozen=True)
class RationalCoproduct:
    module: RationalWeightModule
    summands: tuple[RationalWeightModule, ...]

    def offsets(self) -> list[int]:
        offs, o = [], 0
        for s in self.summands:
            offs.append(o)
            o += s.dimension
        return offs

    def coprojection(self, i: int) -> tuple[tuple[Fraction, ...], ...]:
        n = self.module.dimension
        k = self.summands[i].dimension
        o = self.offsets()[i]
        return tuple(tuple(Fraction(int(r == o + c)) for c in range(k)) for r in range(n))

    def projection(self, i: int) -> tuple[tuple[Fraction, ...], ...]:
        n = self.module.dimension
        k = self.summands[i].dimension
        o = self.offsets()[i]
        return tuple(tuple(Fraction(int(c == o + r)) for c in range(n)) for r in range(k))


def weight_module_coproduct(ws: Sequence):
    ws = tuple(ws)
    if not ws:
        raise ValueError("empty coproduct")
    if any(w.scalars != ws[0].scalars for w in ws):
        raise ValueError("summands have different scalar systems")
    if ws[0].finite:
        return _finite_coproduct(ws)
    return _rational_coproduct(ws)


def _finite_coproduct(ws: tuple[FiniteWeightModule, ...]) -> FiniteCoproduct:
    m = ws[0].scalars
    tuples = []
    for t in itertools.product(*(w.elements for w in ws)):
        if m.sum(w.weight(x) for w, x in zip(ws, t)) is not None:
            tuples.append(t)
    index = {t: i for i, t in enumerate(tuples)}
    n = len(tuples)
    table = [[None] * n for _ in range(n)]
    for i, s in enumerate(tuples):
        for j, t in enumerate(tuples):
            parts = tuple(w.add(a, b) for w, a, b in zip(ws, s, t))
            if None not in parts and parts in index:
                table[i][j] = index[parts]
    action = [[index[tuple(w.act(r, x) for w, x in zip(ws, t))] for t in tuples] for r in m.elements]
    weights = [m.sum(w.weight(x) for w, x in zip(ws, t)) for t in tuples]
    labels = tuple("(" + ",".join(w.label(x) for w, x in zip(ws, t)) + ")" for t in tuples)
    zero = index[tuple(w.zero for w in ws)]
    mod = FiniteWeightModule(n, zero, table, action, weights, m, labels)
    return FiniteCoproduct(mod, ws, tuple(tuples))


def _rational_coproduct(ws: tuple[RationalWeightModule, ...]) -> RationalCoproduct:
    n = sum(w.dimension for w in ws)
    gens, trace, o = [], [], 0
    all_coord = all(w.cone.coordinatewise for w in ws)
    for w in ws:
        for g in w.cone.rays():
            gens.append(tuple([Fraction(0)] * o + list(g) + [Fraction(0)] * (n - o - w.dimension)))
        trace.extend(w.trace)
        o += w.dimension
    cone = Cone(n) if all_coord else Cone(n, tuple(gens))
    return RationalCoproduct(RationalWeightModule(cone, tuple(trace)), ws)


# ---------------------------------------------------------------- enumeration of small modules


def effect_module_actions(e: FiniteEffectAlgebra, m: FiniteEffectMonoid) -> list[FiniteEffectModule]:
    """Every action of ``m`` on ``e`` satisfying the module equations."""
    from .algebra import additive_maps

    adds = [f.table for f in additive_maps(e, e)]
    free = [r for r in m.elements if r not in (m.zero, m.one)]
    found = []
    rows: dict[int, tuple[int, ...]] = {m.zero: tuple(e.zero for _ in e.elements), m.one: tuple(e.elements)}

    def go(i):
        if i == len(free):
            action = tuple(rows[r] for r in m.elements)
            mod = FiniteEffectModule(e, m, action)
            if not check_effect_module_axioms(mod):
                found.append(mod)
            return
        for t in adds:
            rows[free[i]] = t
            go(i + 1)
        rows.pop(free[i], None)

    go(0)
    return found
