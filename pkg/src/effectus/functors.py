"""Functors between effectus instances, with law, faithfulness and separation checks."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .algebra import Violation, boolean_algebra
from .category import (
    EModOp,
    Effectus,
    ModuleMap,
    PartialFunction,
    Pfn,
    WMod,
    predicates,
    scalars,
    states,
    substates,
)
from .modules import FiniteEffectModule, FiniteWeightModule, pointed_set, trivial_action
from .monoid import opposite, two_monoid


@dataclass
class EffectusMorphismData:
    """A functor given by object and arrow maps, plus the unit comparison ``I_D -> F(I_C)``."""

    name: str
    source: Effectus
    target: Effectus
    obj: Callable
    mor: Callable
    unit_witness: Any = None
    contravariant: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def on_object(self, a):
        key = ("obj", a)
        if key not in self._cache:
            self._cache[key] = self.obj(a)
        return self._cache[key]

    def __call__(self, f):
        return self.mor(f)


def _is_module_map(x, y, table, weight_decreasing: bool) -> bool:
    for u in x.elements:
        for v in x.elements:
            s = x.add(u, v)
            if s is not None and y.add(table[u], table[v]) != table[s]:
                return False
        for r in x.scalars.elements:
            if table[x.act(r, u)] != y.act(r, table[u]):
                return False
        if weight_decreasing and not x.scalars.leq(y.weight(table[u]), x.weight(u)):
            return False
    return True


def find_inverse(inst: Effectus, f):
    """An arrow ``g`` with ``g f = id`` and ``f g = id``, or ``None``."""
    a, b = inst.source(f), inst.target(f)
    ia, ib = inst.identity(a), inst.identity(b)
    if isinstance(f, ModuleMap):
        # module direction x -> y
        x, y = (b, a) if f.reversed else (a, b)
        if x.size != y.size or sorted(f.table) != list(y.elements):
            return None
        inv = [0] * y.size
        for i, j in enumerate(f.table):
            inv[j] = i
        if not _is_module_map(y, x, inv, isinstance(inst, WMod)):
            return None
        g = ModuleMap(b, a, tuple(inv), f.reversed)
        return g if inst.compose(g, f) == ia and inst.compose(f, g) == ib else None
    if isinstance(f, PartialFunction):
        if f.source != f.target or None in f.values or len(set(f.values)) != f.source:
            return None
        inv = [0] * f.source
        for i, j in enumerate(f.values):
            inv[j] = i
        return PartialFunction(f.target, f.source, tuple(inv))
    for g in inst.hom(b, a):
        if inst.compose(g, f) == ia and inst.compose(f, g) == ib:
            return g
    return None


def check_functor_laws(F: EffectusMorphismData, objects: Optional[Sequence] = None) -> list[Violation]:
    """Identities, composition, unit and truth preservation, sums and binary coproducts."""
    C, D = F.source, F.target
    objs = list(objects) if objects is not None else C.objects()
    out: list[Violation] = []
    for a in objs:
        if F(C.identity(a)) != D.identity(F.on_object(a)):
            out.append(Violation("functor.identity", (a,)))
    for a, b, c in itertools.product(objs, repeat=3):
        for f in C.hom(a, b):
            ff = F(f)
            for g in C.hom(b, c):
                gf = F(C.compose(g, f))
                want = D.compose(ff, F(g)) if F.contravariant else D.compose(F(g), ff)
                if gf != want:
                    out.append(Violation("functor.composition", (f, g)))
    for a, b in itertools.product(objs, repeat=2):
        hs = C.hom(a, b)
        for f in hs:
            for g in hs:
                s = C.add(f, g)
                if s is not None and D.add(F(f), F(g)) != F(s):
                    out.append(Violation("functor.sum", (f, g)))
    u = F.unit_witness
    if u is not None:
        if find_inverse(D, u) is None:
            out.append(Violation("functor.unit_object", (), "unit comparison is not invertible"))
        for a in objs:
            # F(1_A) = u o 1_{FA}
            if F(C.truth(a)) != D.compose(u, D.truth(F.on_object(a))):
                out.append(Violation("functor.truth", (a,)))
    for a, b in itertools.product(objs, repeat=2):
        cp_c = C.coproduct([a, b])
        cp_d = D.coproduct([F.on_object(a), F.on_object(b)])
        if F.on_object(cp_c.obj) != D.target(F(cp_c.coprojections[0])):
            out.append(Violation("functor.coproduct_object", (a, b)))
            continue
        comparison = cp_d.cotuple([F(k) for k in cp_c.coprojections])
        if find_inverse(D, comparison) is None:
            out.append(Violation("functor.coproduct", (a, b), "comparison map is not invertible"))
    return out


def check_faithful(F: EffectusMorphismData, objects: Optional[Sequence] = None):
    """``(True, None)`` or ``(False, (f, g))`` with ``f != g`` and ``F f == F g``."""
    C = F.source
    objs = list(objects) if objects is not None else C.objects()
    for a, b in itertools.product(objs, repeat=2):
        seen = {}
        for f in C.hom(a, b):
            img = F(f)
            if img in seen and seen[img] != f:
                return False, (seen[img], f)
            seen[img] = f
    return True, None


def check_separation(inst: Effectus, mode: str, objects: Optional[Sequence] = None):
    """Whether distinct parallel arrows are told apart by predicates, substates or states.

    Returns ``(True, None)`` or ``(False, (f, g))``.
    """
    objs = list(objects) if objects is not None else inst.objects()
    unit = inst.unit()
    for a, b in itertools.product(objs, repeat=2):
        if mode == "predicate":
            probes = inst.hom(b, unit)
            sig = lambda f: tuple(inst.compose(p, f) for p in probes)
        elif mode == "substate":
            probes = substates(inst, a)
            sig = lambda f: tuple(inst.compose(f, w) for w in probes)
        elif mode == "state":
            probes = states(inst, a)
            sig = lambda f: tuple(inst.compose(f, w) for w in probes)
        else:
            raise ValueError(f"unknown separation mode {mode!r}")
        seen = {}
        for f in inst.hom(a, b):
            s = sig(f)
            if s in seen and seen[s] != f:
                return False, (seen[s], f)
            seen[s] = f
    return True, None


# ---------------------------------------------------------------- Pred and substates


def pred_functor(inst: Effectus) -> EffectusMorphismData:
    """``A -> Pred(A)`` into effect modules (reversed arrows) over the scalars of ``inst``."""
    sc = scalars(inst)
    m = sc.monoid
    target = EModOp(m)
    cache: dict = {}

    def obj(a):
        if a not in cache:
            pa = predicates(inst, a)
            idx = {p: i for i, p in enumerate(pa.morphisms)}
            action = tuple(tuple(idx[inst.compose(r, p)] for p in pa.morphisms) for r in sc.morphisms)
            cache[a] = (FiniteEffectModule(pa.algebra, m, action), pa.morphisms, idx)
        return cache[a]

    def mor(f):
        ma, _, ia = obj(inst.source(f))
        mb, pb, _ = obj(inst.target(f))
        return ModuleMap(ma, mb, tuple(ia[inst.compose(q, f)] for q in pb), True)

    F = EffectusMorphismData("Pred", inst, target, lambda a: obj(a)[0], mor)
    unit_mod = F.on_object(inst.unit())
    F.unit_witness = _identity_if_equal(target, target.unit(), unit_mod)
    target._sample = [F.on_object(a) for a in inst.objects()]
    return F


def substate_functor(inst: Effectus) -> EffectusMorphismData:
    """``A -> St(A)`` into weight modules over the opposite scalars; action ``w . r = w o r``."""
    sc = scalars(inst)
    mop = opposite(sc.monoid)
    target = WMod(mop)
    sidx = {r: i for i, r in enumerate(sc.morphisms)}
    unit = inst.unit()
    cache: dict = {}

    def obj(a):
        if a not in cache:
            ws = tuple(substates(inst, a))
            idx = {w: i for i, w in enumerate(ws)}
            table = [[None if inst.add(v, w) is None else idx[inst.add(v, w)] for w in ws] for v in ws]
            action = tuple(tuple(idx[inst.compose(w, r)] for w in ws) for r in sc.morphisms)
            weights = tuple(sidx[inst.compose(inst.truth(a), w)] for w in ws)
            mod = FiniteWeightModule(len(ws), idx[inst.zero(unit, a)], table, action, weights, mop)
            cache[a] = (mod, ws, idx)
        return cache[a]

    def mor(f):
        ma, ws, _ = obj(inst.source(f))
        mb, _, ib = obj(inst.target(f))
        return ModuleMap(ma, mb, tuple(ib[inst.compose(f, w)] for w in ws))

    F = EffectusMorphismData("St", inst, target, lambda a: obj(a)[0], mor)
    F.unit_witness = _identity_if_equal(target, target.unit(), F.on_object(unit))
    target._sample = [F.on_object(a) for a in inst.objects()]
    return F


def _identity_if_equal(inst, a, b):
    """The comparison ``a -> b`` when both carry the same tables, else a search for an iso."""
    if isinstance(a, FiniteWeightModule) and isinstance(b, FiniteWeightModule):
        same = (a.sum, a.action, a.weights, a.zero) == (b.sum, b.action, b.weights, b.zero)
        if same:
            return ModuleMap(a, b, tuple(a.elements))
    if isinstance(a, FiniteEffectModule) and isinstance(b, FiniteEffectModule):
        if (a.algebra.sum, a.action, a.algebra.top, a.algebra.zero) == (b.algebra.sum, b.action, b.algebra.top, b.algebra.zero):
            return ModuleMap(a, b, tuple(a.elements), True)
    for f in inst.hom(a, b):
        if find_inverse(inst, f) is not None:
            return f
    return None


# ---------------------------------------------------------------- pointed sets and partial functions


@dataclass
class Equivalence:
    forward: EffectusMorphismData   # weight modules over {0,1} -> Pfn
    backward: EffectusMorphismData  # Pfn -> weight modules over {0,1}
    eta: Callable                   # X -> backward(forward(X)), an iso in WMod
    epsilon: Callable               # forward(backward(n)) -> n, an iso in Pfn


def pointed_sets(max_size: int = 4) -> list[FiniteWeightModule]:
    """Every pointed set with up to ``max_size`` elements, base point in every position."""
    return [pointed_set(n, b) for n in range(1, max_size + 1) for b in range(n)]


def _nonbase(x: FiniteWeightModule) -> list[int]:
    return [e for e in x.elements if e != x.zero]


def pfn_wmod_equivalence(max_size: int = 4) -> Equivalence:
    two = two_monoid()
    wmod = WMod(two, pointed_sets(max_size))
    pfn = Pfn(max_size - 1)

    def fwd_obj(x):
        return x.size - 1

    def fwd_mor(f):
        src, tgt = _nonbase(f.source), _nonbase(f.target)
        pos = {e: i for i, e in enumerate(tgt)}
        vals = tuple(None if f.table[e] == f.target.zero else pos[f.table[e]] for e in src)
        return PartialFunction(len(src), len(tgt), vals)

    def back_obj(n):
        return pointed_set(n + 1, 0)

    def back_mor(f):
        a, b = back_obj(f.source), back_obj(f.target)
        return ModuleMap(a, b, (0,) + tuple(0 if y is None else y + 1 for y in f.values))

    forward = EffectusMorphismData("Pfn<-WMod", wmod, pfn, fwd_obj, fwd_mor)
    backward = EffectusMorphismData("WMod<-Pfn", pfn, wmod, back_obj, back_mor)
    forward.unit_witness = pfn.identity(1)
    backward.unit_witness = _identity_if_equal(wmod, wmod.unit(), back_obj(1))

    def eta(x):
        y = back_obj(fwd_obj(x))
        table = [0] * x.size
        for i, e in enumerate(_nonbase(x)):
            table[e] = i + 1
        return ModuleMap(x, y, tuple(table))

    def epsilon(n):
        return pfn.identity(n)

    return Equivalence(forward, backward, eta, epsilon)


def check_equivalence(eq: Equivalence, objects: Optional[Sequence] = None) -> list[Violation]:
    """Both functors lawful, unit and counit invertible at every object and natural in every arrow."""
    W, P = eq.forward.source, eq.backward.source
    objs = list(objects) if objects is not None else W.objects()
    sets = sorted({eq.forward.on_object(x) for x in objs})
    out = check_functor_laws(eq.forward, objs) + check_functor_laws(eq.backward, sets)
    for x in objs:
        e = eq.eta(x)
        if find_inverse(W, e) is None:
            out.append(Violation("equivalence.eta_iso", (x,)))
        for y in objs:
            ey = eq.eta(y)
            for f in W.hom(x, y):
                if W.compose(ey, f) != W.compose(eq.backward(eq.forward(f)), e):
                    out.append(Violation("equivalence.eta_natural", (f,)))
    for n in sets:
        if find_inverse(P, eq.epsilon(n)) is None:
            out.append(Violation("equivalence.epsilon_iso", (n,)))
        for k in sets:
            for f in P.hom(n, k):
                if P.compose(eq.epsilon(k), eq.forward(eq.backward(f))) != P.compose(f, eq.epsilon(n)):
                    out.append(Violation("equivalence.epsilon_natural", (f,)))
    return out


# ---------------------------------------------------------------- powerset


def powerset_functor(max_size: int = 3) -> EffectusMorphismData:
    """Finite sets to powerset algebras, a partial function going to its preimage map."""
    pfn = Pfn(max_size)
    target = EModOp(two_monoid())
    cache: dict = {}

    def obj(n):
        if n not in cache:
            cache[n] = trivial_action(boolean_algebra(n))
        return cache[n]

    def mor(f):
        a, b = obj(f.source), obj(f.target)
        table = []
        for s in range(1 << f.target):
            table.append(sum(1 << x for x, y in enumerate(f.values) if y is not None and s >> y & 1))
        return ModuleMap(a, b, tuple(table), True)

    F = EffectusMorphismData("P", pfn, target, obj, mor)
    F.unit_witness = _identity_if_equal(target, target.unit(), obj(1))
    target._sample = [obj(n) for n in pfn.objects()]
    return F


def check_lattice_preservation(F: EffectusMorphismData, objects: Optional[Sequence] = None) -> list[Violation]:
    """Preimage maps preserve binary unions and intersections."""
    C = F.source
    objs = list(objects) if objects is not None else C.objects()
    out = []
    for a, b in itertools.product(objs, repeat=2):
        for f in C.hom(a, b):
            t = F(f).table
            for s, u in itertools.product(range(1 << b), repeat=2):
                if t[s | u] != t[s] | t[u] or t[s & u] != t[s] & t[u]:
                    out.append(Violation("powerset.lattice", (f, s, u)))
    return out


def predicate_embedding(inst: Pfn, n: int) -> tuple[int, ...]:
    """Predicates on ``n`` sent to subsets (bitmasks): a predicate goes to its domain."""
    return tuple(sum(1 << x for x in p.domain()) for p in predicates(inst, n).morphisms)


def check_predicate_embedding(inst: Pfn, objects: Optional[Sequence] = None) -> list[Violation]:
    """The map from predicates into the powerset algebra is injective and additive."""
    objs = list(objects) if objects is not None else inst.objects()
    out = []
    for n in objs:
        pa = predicates(inst, n)
        emb = predicate_embedding(inst, n)
        if len(set(emb)) != len(emb):
            out.append(Violation("embedding.injective", (n,)))
        ba = boolean_algebra(n)
        for i in pa.algebra.elements:
            for j in pa.algebra.elements:
                s = pa.algebra.add(i, j)
                if s is not None and ba.add(emb[i], emb[j]) != emb[s]:
                    out.append(Violation("embedding.additive", (n, i, j)))
    return out
