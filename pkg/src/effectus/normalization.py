"""Normalizing substates into states, and the division / zero-divisor / epi equivalences."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from .category import (
    Effectus,
    LinearMap,
    RationalWMod,
    WMod,
    states,
    substates,
)
from .modules import is_cancellative, monoid_as_weight_module
from .monoid import (
    FiniteEffectMonoid,
    as_fraction,
    division_failures,
    geometric_normalizer,
    has_division,
    zero_divisors,
)


class NotNormalizable(ValueError):
    """Raised when a substate has no state, or several, normalizing it."""

    def __init__(self, substate, candidates):
        self.substate = substate
        self.candidates = list(candidates)
        n = len(self.candidates)
        super().__init__(f"substate has {n} normalizing state{'s' if n != 1 else ''}")


@dataclass
class NormalizationResult:
    state: Any
    weight: Any          # the scalar 1 o w, as an arrow I -> I
    certificate: str     # "exhaustive" or "algebraic"


def weight_of(inst: Effectus, w):
    return inst.compose(inst.truth(inst.target(w)), w)


def substate_from_vector(inst: RationalWMod, obj, coords) -> LinearMap:
    """The substate ``I -> obj`` picking out the given point."""
    xs = [as_fraction(c) for c in coords]
    if len(xs) != obj.dimension:
        raise ValueError(f"expected {obj.dimension} coordinates, got {len(xs)}")
    if not obj.contains(tuple(xs)):
        raise ValueError("point lies outside the cone or has weight above 1")
    return LinearMap(inst.unit(), obj, tuple((x,) for x in xs))


def normalize(inst: Effectus, w) -> NormalizationResult:
    """The unique state ``v`` with ``v o (1 o w) = w``.

    Raises ``ValueError`` on the zero substate and :class:`NotNormalizable`
    when there is no such state or more than one.
    """
    a = inst.target(w)
    if w == inst.zero(inst.unit(), a):
        raise ValueError("the zero substate cannot be normalized")
    s = weight_of(inst, w)
    if isinstance(inst, RationalWMod):
        t = s.matrix[0][0]
        v = LinearMap(w.source, a, tuple(tuple(x / t for x in row) for row in w.matrix))
        if inst.compose(v, s) != w or weight_of(inst, v) != inst.identity(inst.unit()):
            raise NotNormalizable(w, [])
        # uniqueness: v o s = v' o s means t*v = t*v' coordinatewise, and t != 0
        assert is_cancellative(a)
        return NormalizationResult(v, s, "algebraic")
    found = [v for v in states(inst, a) if inst.compose(v, s) == w]
    if len(found) != 1:
        raise NotNormalizable(w, found)
    return NormalizationResult(found[0], s, "exhaustive")


def check_scalar_epi(inst: Effectus, s, objects: Optional[Sequence] = None):
    """Whether ``w1 o s = w2 o s`` forces ``w1 = w2`` for substates of sampled objects.

    Returns ``(True, None)`` or ``(False, (w1, w2))``.
    """
    objs = list(objects) if objects is not None else inst.objects()
    for a in objs:
        seen = {}
        for w in substates(inst, a):
            key = inst.compose(w, s)
            if key in seen and seen[key] != w:
                return False, (seen[key], w)
            seen[key] = w
    return True, None


def check_normalization(inst: Effectus, objects: Optional[Sequence] = None):
    """Every nonzero substate of every sampled object normalizes uniquely.

    Returns ``(True, None)`` or ``(False, (substate, candidate_states))``.
    """
    objs = list(objects) if objects is not None else inst.objects()
    unit = inst.unit()
    for a in objs:
        z = inst.zero(unit, a)
        for w in substates(inst, a):
            if w == z:
                continue
            try:
                normalize(inst, w)
            except NotNormalizable as e:
                return False, (w, e.candidates)
    return True, None


def check_states_determine_substates(inst: Effectus, objects: Optional[Sequence] = None):
    """Parallel arrows agreeing on all states agree on all substates.

    Returns ``(True, None)`` or ``(False, (f, g))``.
    """
    objs = list(objects) if objects is not None else inst.objects()
    for a, b in itertools.product(objs, repeat=2):
        st, sub = states(inst, a), substates(inst, a)
        hs = inst.hom(a, b)
        for f, g in itertools.combinations(hs, 2):
            if all(inst.compose(f, v) == inst.compose(g, v) for v in st):
                if any(inst.compose(f, w) != inst.compose(g, w) for w in sub):
                    return False, (f, g)
    return True, None


@dataclass
class NormalizationReport:
    division: bool
    zero_divisor_free: bool
    geometric: bool
    normalization: bool
    scalar_epi: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return len({self.division, self.zero_divisor_free, self.geometric, self.normalization, self.scalar_epi}) == 1

    def to_dict(self) -> dict:
        return {
            "division": self.division,
            "zero_divisor_free": self.zero_divisor_free,
            "geometric": self.geometric,
            "normalization": self.normalization,
            "scalar_epi": self.scalar_epi,
            "consistent": self.consistent,
            "witnesses": {k: repr(v) for k, v in self.witnesses.items()},
        }


def geometric_failures(m: FiniteEffectMonoid) -> list[int]:
    return [s for s in m.elements if s != m.one and geometric_normalizer(m, s) != m.one]


def check_normalization_theorem(m: FiniteEffectMonoid, objects: Optional[Sequence] = None) -> NormalizationReport:
    """Evaluate the algebraic clauses on ``m`` and the instance clauses inside weight modules over ``m``.

    Default sample objects: ``m`` itself and ``m + m``.
    """
    inst = WMod(m)
    if objects is None:
        unit = monoid_as_weight_module(m)
        objects = [unit, inst.coproduct([unit, unit]).obj]
    wit = {}
    zd = zero_divisors(m)
    if not zd.empty:
        wit["zero_divisor"] = zd.witnesses[0]
    div = has_division(m)
    if not div:
        wit["division"] = division_failures(m)[0]
    geo = geometric_failures(m)
    if geo:
        wit["geometric"] = (geo[0], geometric_normalizer(m, geo[0]))
    norm_ok, w = check_normalization(inst, objects)
    if not norm_ok:
        wit["normalization"] = w
    epi_ok = True
    zero = inst.zero(inst.unit(), inst.unit())
    for s in inst.hom(inst.unit(), inst.unit()):
        if s == zero:
            continue
        ok, w = check_scalar_epi(inst, s, objects)
        if not ok:
            epi_ok = False
            wit["scalar_epi"] = (s, w)
            break
    return NormalizationReport(div, zd.empty, not geo, norm_ok, epi_ok, wit)


def rational_scalar(inst: RationalWMod, t) -> LinearMap:
    u = inst.unit()
    return LinearMap(u, u, ((Fraction(t),),))
