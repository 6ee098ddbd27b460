"""Effectus instances and their axiom checkers.

Four concrete instances are provided:

* ``Pfn``: finite sets (given by their size) and partial functions;
* ``WMod``: finite weight modules over a finite effect monoid;
* ``EModOp``: finite effect modules over a finite effect monoid, arrows reversed;
* ``RationalWMod``: cone slices in Q^n over the rational unit interval.

Morphisms are immutable values compared by their data.  Homsets of the finite
instances are enumerated exhaustively; the rational instance samples matrices.
"""
from __future__ import annotations

import itertools
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from .algebra import FiniteEffectAlgebra, Violation, check_effect_algebra_axioms
from .cone import Cone, dot, vec
from .modules import (
    FiniteEffectModule,
    FiniteWeightModule,
    RationalWeightModule,
    monoid_as_effect_module,
    monoid_as_weight_module,
    weight_module_coproduct,
)
from .algebra import product as algebra_product
from .monoid import FiniteEffectMonoid, RationalUnitInterval, check_effect_monoid_axioms

HOM_CAP = 100_000


class SampleTooLarge(RuntimeError):
    """A homset would exceed the enumeration cap."""


class NotSummable(ValueError):
    """Components whose truths are not summable cannot be recombined."""


@dataclass(frozen=True)
class Coproduct:
    obj: Any
    summands: tuple
    coprojections: tuple
    projections: tuple
    cotuple: Callable = field(compare=False, repr=False)

    def codiagonal(self, inst: "Effectus"):
        b = self.summands[0]
        return self.cotuple([inst.identity(b) for _ in self.summands])


class Effectus(ABC):
    """Interface shared by all instances."""

    name = "effectus"
    exhaustive = True

    @abstractmethod
    def unit(self): ...

    @abstractmethod
    def hom(self, a, b) -> list: ...

    @abstractmethod
    def compose(self, g, f): ...

    @abstractmethod
    def identity(self, a): ...

    @abstractmethod
    def zero(self, a, b): ...

    @abstractmethod
    def truth(self, a): ...

    @abstractmethod
    def add(self, f, g):
        """Sum of two parallel morphisms, ``None`` when not summable."""

    @abstractmethod
    def coproduct(self, objs: Sequence) -> Coproduct: ...

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def complement(self, p):
        """The unique predicate adding up with ``p`` to truth, found by search."""
        a = self.source(p)
        top = self.truth(a)
        hits = [q for q in self.hom(a, self.unit()) if self.add(p, q) == top]
        return hits[0] if len(hits) == 1 else None

    def sum_all(self, fs: Sequence, a=None, b=None):
        fs = list(fs)
        if not fs:
            return self.zero(a, b)
        acc = fs[0]
        for f in fs[1:]:
            acc = self.add(acc, f)
            if acc is None:
                return None
        return acc

    def objects(self) -> list:
        """Default object sample used by checkers and the CLI."""
        return [self.unit()]


def _cap(n: int):
    if n > HOM_CAP:
        raise SampleTooLarge(f"homset of size {n} exceeds cap {HOM_CAP}")


# ---------------------------------------------------------------- Pfn


@dataclass(frozen=True)
class PartialFunction:
    source: int
    target: int
    values: tuple[Optional[int], ...]

    def __call__(self, x):
        return self.values[x]

    def domain(self) -> frozenset:
        return frozenset(x for x, y in enumerate(self.values) if y is not None)


class Pfn(Effectus):
    """Finite sets ``{0..n-1}`` and partial functions."""

    name = "pfn"

    def __init__(self, max_size: int = 3):
        self.max_size = max_size

    def objects(self):
        return list(range(self.max_size + 1))

    def unit(self):
        return 1

    def hom(self, a, b):
        _cap((b + 1) ** a)
        return [PartialFunction(a, b, v) for v in itertools.product([None, *range(b)], repeat=a)]

    def compose(self, g, f):
        if f.target != g.source:
            raise ValueError("composition of non-matching arrows")
        return PartialFunction(f.source, g.target, tuple(None if y is None else g.values[y] for y in f.values))

    def identity(self, a):
        return PartialFunction(a, a, tuple(range(a)))

    def zero(self, a, b):
        return PartialFunction(a, b, (None,) * a)

    def truth(self, a):
        return PartialFunction(a, 1, (0,) * a)

    def add(self, f, g):
        if (f.source, f.target) != (g.source, g.target):
            raise ValueError("sum of non-parallel arrows")
        out = []
        for x, y in zip(f.values, g.values):
            if x is not None and y is not None:
                return None
            out.append(x if y is None else y)
        return PartialFunction(f.source, f.target, tuple(out))

    def coproduct(self, objs):
        objs = tuple(objs)
        offs = list(itertools.accumulate([0, *objs]))
        total = offs[-1]
        kappas = tuple(PartialFunction(a, total, tuple(range(o, o + a))) for a, o in zip(objs, offs))
        projs = tuple(
            PartialFunction(total, a, tuple(y - o if o <= y < o + a else None for y in range(total)))
            for a, o in zip(objs, offs)
        )

        def cotuple(fs):
            tgt = fs[0].target
            vals = []
            for f, o in zip(fs, offs):
                vals.extend(f.values)
            return PartialFunction(total, tgt, tuple(vals))

        return Coproduct(total, objs, kappas, projs, cotuple)

    def complement(self, p):
        return PartialFunction(p.source, 1, tuple(None if v is not None else 0 for v in p.values))


class CorruptedPfn(Pfn):
    """Negative control: composition that treats 'undefined' as the element 0."""

    name = "pfn-corrupted"

    def compose(self, g, f):
        vals = []
        for y in f.values:
            y = 0 if y is None and g.source > 0 else y
            vals.append(None if y is None else g.values[y])
        return PartialFunction(f.source, g.target, tuple(vals))


# ---------------------------------------------------------------- module maps


@dataclass(frozen=True, eq=False, repr=False)
class ModuleMap:
    """A map of finite modules.  ``reversed`` marks arrows of the opposite category,
    whose ``table`` runs from ``target`` elements to ``source`` elements."""

    source: Any
    target: Any
    table: tuple[int, ...]
    reversed: bool = False

    def __call__(self, x):
        return self.table[x]

    def __eq__(self, other):
        return (
            isinstance(other, ModuleMap)
            and self.table == other.table
            and self.reversed == other.reversed
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return hash((self.table, self.reversed))

    def __repr__(self):
        return f"ModuleMap({list(self.table)}{', reversed' if self.reversed else ''})"


def _preorder_rank(mod) -> list[int]:
    """Elements ordered so that summands and action images tend to come first."""
    below = {x: 0 for x in mod.elements}
    for a in mod.elements:
        for b in mod.elements:
            s = mod.add(a, b)
            if s is not None:
                below[s] += 1
    return sorted(mod.elements, key=lambda x: (below[x], x))


def module_maps(src, tgt, weight_decreasing: bool = False) -> list[tuple[int, ...]]:
    """All additive action-preserving maps ``src -> tgt`` as tables.

    With ``weight_decreasing`` the weight of each image is bounded by the
    weight of the argument.
    """
    m = src.scalars
    if tgt.scalars != m:
        raise ValueError("modules over different scalars")
    order = _preorder_rank(src)
    pos = {x: i for i, x in enumerate(order)}
    checks: dict[int, list] = {x: [] for x in src.elements}
    for a in src.elements:
        for b in src.elements:
            s = src.add(a, b)
            if s is not None:
                checks[max((a, b, s), key=pos.__getitem__)].append(("sum", a, b, s))
    for r in m.elements:
        for x in src.elements:
            y = src.act(r, x)
            checks[max((x, y), key=pos.__getitem__)].append(("act", r, x, y))
    allowed = {}
    for x in src.elements:
        if x == src.zero:
            allowed[x] = [tgt.zero]
        elif weight_decreasing:
            allowed[x] = [y for y in tgt.elements if m.leq(tgt.weight(y), src.weight(x))]
        else:
            allowed[x] = list(tgt.elements)
    table: list[Optional[int]] = [None] * src.size
    out = []

    def ok(x) -> bool:
        for kind, a, b, c in checks[x]:
            if kind == "sum":
                if tgt.add(table[a], table[b]) != table[c]:
                    return False
            elif table[c] != tgt.act(a, table[b]):
                return False
        return True

    def go(i):
        if i == len(order):
            out.append(tuple(table))
            _cap(len(out))
            return
        x = order[i]
        for y in allowed[x]:
            table[x] = y
            if ok(x):
                go(i + 1)
        table[x] = None

    go(0)
    return out


def effect_module_product(mods: Sequence[FiniteEffectModule]):
    """Cartesian product with pointwise operations; returns the module and its tuples."""
    m = mods[0].scalars
    if any(e.scalars != m for e in mods):
        raise ValueError("factors have different scalar systems")
    alg, tuples = algebra_product(*(e.algebra for e in mods))
    index = {t: i for i, t in enumerate(tuples)}
    action = tuple(tuple(index[tuple(e.act(r, x) for e, x in zip(mods, t))] for t in tuples) for r in m.elements)
    return FiniteEffectModule(alg, m, action), tuples


# ---------------------------------------------------------------- WMod


class WMod(Effectus):
    """Finite weight modules over a finite effect monoid, weight-decreasing maps."""

    name = "wmod"

    def __init__(self, scalars: FiniteEffectMonoid, sample: Optional[Sequence[FiniteWeightModule]] = None):
        self.m = scalars
        self._unit = monoid_as_weight_module(scalars)
        self._sample = list(sample) if sample is not None else None
        self._homs: dict = {}
        self._coproducts: dict = {}

    def objects(self):
        return self._sample if self._sample is not None else [self._unit]

    def unit(self):
        return self._unit

    def hom(self, a, b):
        key = (a, b)
        if key not in self._homs:
            self._homs[key] = [ModuleMap(a, b, t) for t in module_maps(a, b, weight_decreasing=True)]
        return self._homs[key]

    def compose(self, g, f):
        return ModuleMap(f.source, g.target, tuple(g.table[y] for y in f.table))

    def identity(self, a):
        return ModuleMap(a, a, tuple(a.elements))

    def zero(self, a, b):
        return ModuleMap(a, b, tuple(b.zero for _ in a.elements))

    def truth(self, a):
        return ModuleMap(a, self._unit, a.weights)

    def add(self, f, g):
        a, b, m = f.source, f.target, self.m
        out = []
        for x in a.elements:
            w = m.add(b.weight(f.table[x]), b.weight(g.table[x]))
            if w is None or not m.leq(w, a.weight(x)):
                return None
            out.append(b.add(f.table[x], g.table[x]))
        return ModuleMap(a, b, tuple(out))

    def coproduct(self, objs):
        objs = tuple(objs)
        if objs in self._coproducts:
            return self._coproducts[objs]
        cp = weight_module_coproduct(objs)
        x = cp.module
        kappas = tuple(ModuleMap(a, x, cp.coprojection(i)) for i, a in enumerate(objs))
        projs = tuple(ModuleMap(x, a, cp.projection(i)) for i, a in enumerate(objs))

        def cotuple(fs):
            tgt = fs[0].target
            return ModuleMap(x, tgt, cp.cotuple(tgt, [f.table for f in fs]))

        out = Coproduct(x, objs, kappas, projs, cotuple)
        self._coproducts[objs] = out
        return out

    def complement(self, p):
        a, m = p.source, self.m
        vals = tuple(m.ominus(a.weight(x), p.table[x]) for x in a.elements)
        if None in vals:
            return None
        return ModuleMap(a, self._unit, vals)


# ---------------------------------------------------------------- EModOp


class EModOp(Effectus):
    """Finite effect modules with reversed arrows; a morphism ``A -> B`` is a module map ``B -> A``."""

    name = "emodop"

    def __init__(self, scalars: FiniteEffectMonoid, sample: Optional[Sequence[FiniteEffectModule]] = None):
        self.m = scalars
        self._unit = monoid_as_effect_module(scalars)
        self._sample = list(sample) if sample is not None else None
        self._homs: dict = {}
        self._coproducts: dict = {}

    def objects(self):
        return self._sample if self._sample is not None else [self._unit]

    def unit(self):
        return self._unit

    def hom(self, a, b):
        key = (a, b)
        if key not in self._homs:
            self._homs[key] = [ModuleMap(a, b, t, True) for t in module_maps(b, a)]
        return self._homs[key]

    def compose(self, g, f):
        # module direction: C -> B -> A
        return ModuleMap(f.source, g.target, tuple(f.table[y] for y in g.table), True)

    def identity(self, a):
        return ModuleMap(a, a, tuple(a.elements), True)

    def zero(self, a, b):
        return ModuleMap(a, b, tuple(a.zero for _ in b.elements), True)

    def truth(self, a):
        return ModuleMap(a, self._unit, tuple(a.act(s, a.top) for s in self.m.elements), True)

    def add(self, f, g):
        a, b = f.source, f.target
        if a.add(f.table[b.top], g.table[b.top]) is None:
            return None
        return ModuleMap(a, b, tuple(a.add(x, y) for x, y in zip(f.table, g.table)), True)

    def coproduct(self, objs):
        objs = tuple(objs)
        if objs in self._coproducts:
            return self._coproducts[objs]
        prod, tuples = effect_module_product(objs)
        index = {t: i for i, t in enumerate(tuples)}
        kappas = tuple(ModuleMap(a, prod, tuple(t[i] for t in tuples), True) for i, a in enumerate(objs))
        projs = []
        for i, a in enumerate(objs):
            zeros = [e.zero for e in objs]
            tab = []
            for x in a.elements:
                t = list(zeros)
                t[i] = x
                tab.append(index[tuple(t)])
            projs.append(ModuleMap(prod, a, tuple(tab), True))

        def cotuple(fs):
            tgt = fs[0].target
            return ModuleMap(prod, tgt, tuple(index[tuple(f.table[c] for f in fs)] for c in tgt.elements), True)

        out = Coproduct(prod, objs, kappas, tuple(projs), cotuple)
        self._coproducts[objs] = out
        return out

    def complement(self, p):
        a, m = p.source, self.m
        from .algebra import orthosupplement

        e = orthosupplement(a.algebra, p.table[m.one])
        return ModuleMap(a, self._unit, tuple(a.act(s, e) for s in m.elements), True)


# ---------------------------------------------------------------- rational WMod


@dataclass(frozen=True, repr=False)
class LinearMap:
    source: RationalWeightModule
    target: RationalWeightModule
    matrix: tuple[tuple[Fraction, ...], ...]  # target.dimension rows

    def __call__(self, x):
        return tuple(dot(row, x) for row in self.matrix)

    def __repr__(self):
        rows = "; ".join(" ".join(str(v) for v in r) for r in self.matrix)
        return f"LinearMap([{rows}])"


def _matmul(a, b, rows, cols, inner):
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)) for i in range(rows))


class RationalWMod(Effectus):
    """Cone slices over the rational unit interval with sampled homsets."""

    name = "wmod-q"
    exhaustive = False

    GRID = (Fraction(0), Fraction(1, 2), Fraction(1))

    def __init__(self, sample: Optional[Sequence[RationalWeightModule]] = None, hom_limit: int = 200, seed: int = 0):
        self._unit = RationalWeightModule(Cone(1), (Fraction(1),))
        self._sample = list(sample) if sample is not None else None
        self.hom_limit = hom_limit
        self.seed = seed
        self._homs: dict = {}

    def objects(self):
        return self._sample if self._sample is not None else [self._unit]

    def unit(self):
        return self._unit

    def is_morphism(self, a, b, mat) -> bool:
        for g in a.cone.rays():
            img = tuple(dot(row, g) for row in mat)
            if not b.cone.contains(img) or dot(b.trace, img) > dot(a.trace, g):
                return False
        return True

    def hom(self, a, b):
        """Matrices with entries in {0, 1/2, 1} that are morphisms, seeded-subsampled above the limit."""
        key = (a, b)
        if key in self._homs:
            return self._homs[key]
        n, k = a.dimension, b.dimension
        cells = n * k
        total = len(self.GRID) ** cells
        if total <= 4 * self.hom_limit:
            cands = itertools.product(self.GRID, repeat=cells)
        else:
            rng = random.Random(hash((self.seed, n, k)) & 0xFFFF)
            cands = [tuple(rng.choice(self.GRID) for _ in range(cells)) for _ in range(4 * self.hom_limit)]
        out, seen = [], set()
        for flat in [(Fraction(0),) * cells, *cands]:
            mat = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(k))
            if mat not in seen and self.is_morphism(a, b, mat):
                seen.add(mat)
                out.append(LinearMap(a, b, mat))
            if len(out) >= self.hom_limit:
                break
        self._homs[key] = out
        return out

    def compose(self, g, f):
        return LinearMap(f.source, g.target, _matmul(g.matrix, f.matrix, g.target.dimension, f.source.dimension, f.target.dimension))

    def identity(self, a):
        n = a.dimension
        return LinearMap(a, a, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    def zero(self, a, b):
        return LinearMap(a, b, tuple((Fraction(0),) * a.dimension for _ in range(b.dimension)))

    def truth(self, a):
        return LinearMap(a, self._unit, (tuple(a.trace),))

    def add(self, f, g):
        mat = tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(f.matrix, g.matrix))
        return LinearMap(f.source, f.target, mat) if self.is_morphism(f.source, f.target, mat) else None

    def coproduct(self, objs):
        objs = tuple(objs)
        cp = weight_module_coproduct(objs)
        x = cp.module
        kappas = tuple(LinearMap(a, x, cp.coprojection(i)) for i, a in enumerate(objs))
        projs = tuple(LinearMap(x, a, cp.projection(i)) for i, a in enumerate(objs))

        def cotuple(fs):
            tgt = fs[0].target
            rows = tuple(tuple(v for f in fs for v in f.matrix[r]) for r in range(tgt.dimension))
            return LinearMap(x, tgt, rows)

        return Coproduct(x, objs, kappas, projs, cotuple)

    def complement(self, p):
        a = p.source
        return LinearMap(a, self._unit, (tuple(t - v for t, v in zip(a.trace, p.matrix[0])),))


# ---------------------------------------------------------------- derived structure


def total_morphisms(inst: Effectus, a, b) -> list:
    ta = inst.truth(a)
    return [f for f in inst.hom(a, b) if inst.compose(inst.truth(b), f) == ta]


def substates(inst: Effectus, a) -> list:
    return inst.hom(inst.unit(), a)


def states(inst: Effectus, a) -> list:
    return total_morphisms(inst, inst.unit(), a)


@dataclass(frozen=True)
class HomAlgebra:
    """A homset packaged as a finite effect algebra (or monoid); ``morphisms[i]`` is element ``i``."""

    algebra: FiniteEffectAlgebra
    morphisms: tuple
    monoid: Optional[FiniteEffectMonoid] = None

    def index(self, f) -> int:
        return self.morphisms.index(f)


def _hom_table(inst, ms):
    idx = {f: i for i, f in enumerate(ms)}
    table = []
    for f in ms:
        row = []
        for g in ms:
            s = inst.add(f, g)
            row.append(None if s is None else idx.get(s))
        table.append(row)
    return table, idx


def predicates(inst: Effectus, a) -> HomAlgebra:
    """The predicates on ``a`` as a finite effect algebra; finite instances only."""
    if not inst.exhaustive:
        raise TypeError("predicates of a sampled instance do not form a finite algebra")
    i = inst.unit()
    ms = tuple(inst.hom(a, i))
    table, idx = _hom_table(inst, ms)
    return HomAlgebra(FiniteEffectAlgebra.from_table(table, idx[inst.zero(a, i)], idx[inst.truth(a)]), ms)


def scalars(inst: Effectus):
    """Scalars ``I -> I`` with composition as product (``r * s = r o s``)."""
    if isinstance(inst, RationalWMod):
        return RationalUnitInterval()
    i = inst.unit()
    ms = tuple(inst.hom(i, i))
    table, idx = _hom_table(inst, ms)
    alg = FiniteEffectAlgebra.from_table(table, idx[inst.zero(i, i)], idx[inst.identity(i)])
    prod = tuple(tuple(idx[inst.compose(r, s)] for s in ms) for r in ms)
    return HomAlgebra(alg, ms, FiniteEffectMonoid(alg, prod))


# ---------------------------------------------------------------- checkers


def _pairs(inst, hs):
    """Summable ordered pairs of a homset with their sums."""
    out = []
    for f in hs:
        for g in hs:
            s = inst.add(f, g)
            if s is not None:
                out.append((f, g, s))
    return out


def _triples(seqs: Sequence[Sequence], budget: int, seed: int):
    total = 1
    for s in seqs:
        total *= len(s)
    if total <= budget:
        yield from itertools.product(*seqs)
        return
    rng = random.Random(seed)
    for _ in range(budget):
        yield tuple(rng.choice(s) for s in seqs)


def _limit(inst, xs, k):
    return xs if inst.exhaustive or len(xs) <= k else xs[:k]


def check_category_and_pac_axioms(
    inst: Effectus, objects: Optional[Sequence] = None, assoc_budget: int = 4000, sample_budget: int = 60
) -> list[Violation]:
    """Category laws, homset PCM laws, biadditive composition, coproduct laws,
    compatible-sum and untying axioms on every sampled homset.

    Associativity of composition is exhaustive when the triple count is within
    ``assoc_budget`` per object quadruple and seeded-sampled above it.  On
    sampled instances the biadditivity loops are further cut to
    ``sample_budget`` pairs and composites.
    """
    objs = list(objects) if objects is not None else inst.objects()
    out: list[Violation] = []
    homs = {(a, b): inst.hom(a, b) for a in objs for b in objs}
    for (a, b), hs in homs.items():
        ia, ib = inst.identity(a), inst.identity(b)
        zab = inst.zero(a, b)
        for f in hs:
            if inst.compose(ib, f) != f or inst.compose(f, ia) != f:
                out.append(Violation("category.identity", (a, b, f)))
            if inst.add(f, zab) != f:
                out.append(Violation("homset.unit", (f,)))
        pairs = _pairs(inst, hs)
        sums = {(id(f), id(g)): s for f, g, s in pairs}
        if not inst.exhaustive and len(pairs) > sample_budget:
            pairs = random.Random(len(hs)).sample(pairs, sample_budget)
        for f, g, s in pairs:
            if inst.add(g, f) != s:
                out.append(Violation("homset.commutativity", (f, g)))
        # Kleene associativity: a side is defined only if one of its inner sums is
        for f, g, fg in pairs:
            for h in hs:
                left = inst.add(fg, h)
                gh = sums.get((id(g), id(h)))
                right = None if gh is None else inst.add(f, gh)
                if left != right:
                    out.append(Violation("homset.associativity", (f, g, h)))
        for g, h, gh in pairs:
            for f in hs:
                if sums.get((id(f), id(g))) is None and inst.add(f, gh) is not None:
                    out.append(Violation("homset.associativity", (f, g, h)))
        for c in objs:
            for k in _limit(inst, homs[(b, c)], sample_budget):
                if inst.compose(k, zab) != inst.zero(a, c):
                    out.append(Violation("composition.zero", (k,)))
                for f, g, s in pairs:
                    left = inst.add(inst.compose(k, f), inst.compose(k, g))
                    if left != inst.compose(k, s):
                        out.append(Violation("composition.biadditive.left", (k, f, g)))
            for f0 in _limit(inst, homs[(c, a)], sample_budget):
                for f, g, s in pairs:
                    left = inst.add(inst.compose(f, f0), inst.compose(g, f0))
                    if left != inst.compose(s, f0):
                        out.append(Violation("composition.biadditive.right", (f, g, f0)))
    for a, b, c, d in itertools.product(objs, repeat=4):
        seqs = (homs[(a, b)], homs[(b, c)], homs[(c, d)])
        budget = assoc_budget if inst.exhaustive else min(assoc_budget, 4 * sample_budget)
        for f, g, h in _triples(seqs, budget, seed=len(out)):
            if inst.compose(h, inst.compose(g, f)) != inst.compose(inst.compose(h, g), f):
                out.append(Violation("category.associativity", (f, g, h)))
    for a in objs:
        for b in objs:
            out += _coproduct_laws(inst, [a, b], objs)
            cp = inst.coproduct([b, b])
            nabla = cp.codiagonal(inst)
            for h in inst.hom(a, cp.obj):
                f = inst.compose(cp.projections[0], h)
                g = inst.compose(cp.projections[1], h)
                s = inst.add(f, g)
                if s is None or s != inst.compose(nabla, h):
                    out.append(Violation("pac.compatible_sum", (h,)))
            for f, g, _ in _pairs(inst, homs[(a, b)]):
                if inst.add(inst.compose(cp.coprojections[0], f), inst.compose(cp.coprojections[1], g)) is None:
                    out.append(Violation("pac.untying", (f, g)))
    return out


def _coproduct_laws(inst: Effectus, summands: Sequence, objs: Sequence) -> list[Violation]:
    out = []
    cp = inst.coproduct(summands)
    for i, ai in enumerate(summands):
        for k, ak in enumerate(summands):
            got = inst.compose(cp.projections[i], cp.coprojections[k])
            want = inst.identity(ai) if i == k else inst.zero(ak, ai)
            if got != want:
                out.append(Violation("coproduct.partial_projection", (i, k)))
    parts = [inst.compose(k, p) for k, p in zip(cp.coprojections, cp.projections)]
    if inst.sum_all(parts) != inst.identity(cp.obj):
        out.append(Violation("coproduct.projection_sum", tuple(summands)))
    for c in objs:
        homs = [inst.hom(a, c) for a in summands]
        for fs in _triples(homs, 400, seed=7):
            t = cp.cotuple(list(fs))
            for k, f in zip(cp.coprojections, fs):
                if inst.compose(t, k) != f:
                    out.append(Violation("coproduct.cotuple", tuple(fs)))
        for h in inst.hom(cp.obj, c)[:400]:
            if cp.cotuple([inst.compose(h, k) for k in cp.coprojections]) != h:
                out.append(Violation("coproduct.uniqueness", (h,)))
    return out


def check_effectus_axioms(inst: Effectus, objects: Optional[Sequence] = None) -> list[Violation]:
    """(i) predicates form an effect algebra, (ii) truth-zero maps are zero,
    (iii) maps with summable truths are summable."""
    objs = list(objects) if objects is not None else inst.objects()
    out: list[Violation] = []
    unit = inst.unit()
    for a in objs:
        if inst.exhaustive:
            for v in check_effect_algebra_axioms(predicates(inst, a).algebra):
                out.append(Violation("effectus.predicates." + v.axiom, (a,) + v.witness, v.detail))
        else:
            out += _sampled_predicate_laws(inst, a)
    for a in objs:
        for b in objs:
            hs = inst.hom(a, b)
            tb = inst.truth(b)
            z = inst.zero(a, unit)
            for f in hs:
                if inst.compose(tb, f) == z and f != inst.zero(a, b):
                    out.append(Violation("effectus.truth_reflects_zero", (f,)))
            for f in hs:
                tf = inst.compose(tb, f)
                for g in hs:
                    if inst.add(tf, inst.compose(tb, g)) is not None and inst.add(f, g) is None:
                        out.append(Violation("effectus.truth_reflects_summability", (f, g)))
    return out


def _sampled_predicate_laws(inst: Effectus, a) -> list[Violation]:
    out = []
    ps = inst.hom(a, inst.unit())
    top = inst.truth(a)
    z = inst.zero(a, inst.unit())
    for p in ps:
        q = inst.complement(p)
        if q is None or inst.add(p, q) != top or inst.complement(q) != p:
            out.append(Violation("effectus.predicates.ea.orthosupplement", (p,)))
        if p != z and inst.add(p, top) is not None:
            out.append(Violation("effectus.predicates.ea.positivity", (p,)))
        for r in ps:
            pr = inst.add(p, r)
            if pr != inst.add(r, p):
                out.append(Violation("effectus.predicates.pcm.commutativity", (p, r)))
            if pr == top and r != q:
                out.append(Violation("effectus.predicates.ea.orthosupplement.ambiguous", (p, r)))
    for p, r, s in itertools.islice(itertools.product(ps, repeat=3), 5000):
        pr, rs = inst.add(p, r), inst.add(r, s)
        left = None if pr is None else inst.add(pr, s)
        right = None if rs is None else inst.add(p, rs)
        if left != right:
            out.append(Violation("effectus.predicates.pcm.associativity", (p, r, s)))
    return out


def _families(inst, hs, j):
    """J-tuples from ``hs`` whose running sums are all defined."""
    def go(prefix, acc):
        if len(prefix) == j:
            yield tuple(prefix), acc
            return
        for f in hs:
            s = f if acc is None and not prefix else inst.add(acc, f)
            if s is not None:
                yield from go(prefix + [f], s)
    yield from go([], None)


def check_sigma_characterization(
    inst: Effectus, objects: Optional[Sequence] = None, j_sizes: Sequence[int] = (1, 2, 3), test_objects: Optional[Sequence] = None
) -> list[Violation]:
    """Joint monicity of partial projections on copowers, the compatibility
    condition, truth of a coproduct as cotuple of truths, and unique complements."""
    objs = list(objects) if objects is not None else inst.objects()
    tests = list(test_objects) if test_objects is not None else objs
    out: list[Violation] = []
    for a in objs:
        for j in j_sizes:
            cp = inst.coproduct([a] * j)
            nabla = cp.codiagonal(inst)
            for x in tests:
                seen = {}
                for h in inst.hom(x, cp.obj):
                    comps = tuple(inst.compose(p, h) for p in cp.projections)
                    if comps in seen and seen[comps] != h:
                        out.append(Violation("sigma.joint_monicity", (x, a, j)))
                    seen[comps] = h
                    s = inst.sum_all(comps)
                    if s is None or s != inst.compose(nabla, h):
                        out.append(Violation("sigma.compatible_sum", (h,)))
                if inst.exhaustive:
                    for fam, _ in _families(inst, inst.hom(x, a), j):
                        if fam not in seen:
                            out.append(Violation("sigma.compatibility_limit", (x, a, j)))
    for a in objs:
        for b in objs:
            cp = inst.coproduct([a, b])
            if inst.truth(cp.obj) != cp.cotuple([inst.truth(a), inst.truth(b)]):
                out.append(Violation("sigma.truth_of_coproduct", (a, b)))
    unit = inst.unit()
    ii = inst.coproduct([unit, unit])
    nabla = ii.codiagonal(inst)
    for a in objs:
        top = inst.truth(a)
        if inst.exhaustive:
            partners: dict = {}
            for h in inst.hom(a, ii.obj):
                if inst.compose(nabla, h) == top:
                    p = inst.compose(ii.projections[0], h)
                    partners.setdefault(p, []).append(inst.compose(ii.projections[1], h))
            for p in inst.hom(a, unit):
                qs = partners.get(p, [])
                if len(qs) != 1:
                    out.append(Violation("sigma.unique_complement", (p,), f"{len(qs)} complements"))
                elif inst.complement(p) != qs[0]:
                    out.append(Violation("sigma.complement_formula", (p,)))
        else:
            for p in inst.hom(a, unit):
                q = inst.complement(p)
                if q is None or inst.add(p, q) != top:
                    out.append(Violation("sigma.unique_complement", (p,)))
    return out


def decompose_morphism(inst: Effectus, f, cp: Coproduct) -> list:
    return [inst.compose(p, f) for p in cp.projections]


def recompose(inst: Effectus, components: Sequence, cp: Coproduct):
    truths = [inst.compose(inst.truth(inst.target(g)), g) for g in components]
    if inst.sum_all(truths) is None:
        raise NotSummable("truths of the components are not summable")
    parts = [inst.compose(k, g) for k, g in zip(cp.coprojections, components)]
    out = inst.sum_all(parts)
    if out is None:
        raise NotSummable("components are not compatible")
    return out


def check_decomposition(inst: Effectus, objects: Optional[Sequence] = None, j_sizes: Sequence[int] = (2,)) -> list[Violation]:
    """``recompose . decompose = id`` on every arrow into a copower, and the converse on summable families."""
    objs = list(objects) if objects is not None else inst.objects()
    out: list[Violation] = []
    for a in objs:
        for b in objs:
            for j in j_sizes:
                cp = inst.coproduct([b] * j)
                for f in inst.hom(a, cp.obj):
                    try:
                        back = recompose(inst, decompose_morphism(inst, f, cp), cp)
                    except NotSummable:
                        back = None
                    if back != f:
                        out.append(Violation("decomposition.roundtrip", (f,)))
                if inst.exhaustive:
                    fams = _families(inst, inst.hom(a, b), j)
                else:
                    fams = ((fam, None) for fam in itertools.islice(itertools.product(inst.hom(a, b), repeat=j), 400))
                for fam, _ in fams:
                    try:
                        g = recompose(inst, fam, cp)
                    except NotSummable:
                        truths = [inst.compose(inst.truth(b), f) for f in fam]
                        if inst.sum_all(truths) is not None:
                            out.append(Violation("decomposition.rejected_summable", fam))
                        continue
                    if tuple(decompose_morphism(inst, g, cp)) != tuple(fam):
                        out.append(Violation("decomposition.inverse", fam))
    return out


def check_scalars(inst: Effectus) -> list[Violation]:
    s = scalars(inst)
    if isinstance(s, RationalUnitInterval):
        from .monoid import check_scalar_laws

        return check_scalar_laws(s)
    return check_effect_monoid_axioms(s.monoid)


def rational_object(trace: Sequence, generators: Optional[Sequence] = None) -> RationalWeightModule:
    t = vec(trace)
    cone = Cone(len(t)) if generators is None else Cone(len(t), tuple(vec(g) for g in generators))
    return RationalWeightModule(cone, t)
