"""Shipped example structures, effectus object samples, and deliberately broken variants."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any, Callable

from .algebra import (
    FiniteEffectAlgebra,
    FinitePcm,
    boolean_algebra,
    chain,
    check_effect_algebra_axioms,
    check_pcm_axioms,
    two,
)
from .category import rational_object
from .cone import Cone
from .enumerate import enumerate_effect_algebras
from .modules import (
    FiniteEffectModule,
    RationalEffectModule,
    RationalWeightModule,
    box_module,
    check_effect_module_axioms,
    check_weight_module_axioms,
    effect_module_actions,
    monoid_as_effect_module,
    monoid_as_weight_module,
    pointed_set,
    simplex_module,
    trivial_action,
)
from .monoid import (
    FiniteEffectMonoid,
    boolean_meet_monoid,
    check_effect_monoid_axioms,
    two_monoid,
)


def algebras() -> dict[str, FiniteEffectAlgebra]:
    return {"two": two(), "chain3": chain(3), "powerset2": boolean_algebra(2), "powerset3": boolean_algebra(3)}


def monoids() -> dict[str, FiniteEffectMonoid]:
    return {"two": two_monoid(), "meet2": boolean_meet_monoid(2), "meet3": boolean_meet_monoid(3)}


def effect_modules() -> dict[str, Any]:
    out: dict[str, Any] = {f"{k}/trivial": trivial_action(e) for k, e in algebras().items()}
    out.update({f"{k}/self": monoid_as_effect_module(m) for k, m in monoids().items()})
    out["box(1,1)"] = box_module((1, 1))
    out["skew"] = RationalEffectModule(Cone(2, ((2, 1), (-1, 1))), (1, 2))
    return out


def weight_modules() -> dict[str, Any]:
    out: dict[str, Any] = {f"pointed{n}": pointed_set(n) for n in (1, 2, 3)}
    out.update({f"{k}/self": monoid_as_weight_module(m) for k, m in monoids().items()})
    out.update({f"simplex{d}": simplex_module(d) for d in (1, 2, 3)})
    out["skew-slice"] = RationalWeightModule(Cone(2, ((2, 1), (-1, 1))), (1, 2))
    # (1, 1) is redundant among the generators
    out["dependent-slice"] = RationalWeightModule(Cone(2, ((1, 0), (0, 1), (1, 1))), (1, 1))
    return out


# ---------------------------------------------------------------- effectus samples


def pfn_objects() -> list[int]:
    return [0, 1, 2, 3]


def small_algebras(max_size: int = 4) -> list[FiniteEffectAlgebra]:
    return [e for n in range(1, max_size + 1) for e in enumerate_effect_algebras(n)]


def emod_two_objects(max_size: int = 4) -> list[FiniteEffectModule]:
    """Effect modules over {0,1} (the action is forced) with at most ``max_size`` elements."""
    return [trivial_action(e) for e in small_algebras(max_size)]


def emod_meet2_objects(max_size: int = 4) -> list[FiniteEffectModule]:
    """Every effect module over the powerset of {1,2} with at most ``max_size`` elements."""
    m = boolean_meet_monoid(2)
    return [mod for e in small_algebras(max_size) for mod in effect_module_actions(e, m)]


def wmod_two_objects(max_size: int = 3):
    return [pointed_set(n) for n in range(1, max_size + 1)]


def rational_wmod_objects():
    return [rational_object([1]), rational_object([1, 1]), rational_object([1, 2])]


# ---------------------------------------------------------------- negative controls


@dataclass(frozen=True)
class NegativeControl:
    name: str
    structure: Any
    checker: Callable
    expected: str  # axiom id that must be reported

    def violations(self):
        return self.checker(self.structure)


def _mutate(table, i, j, v, symmetric=True):
    t = [list(r) for r in table]
    t[i][j] = v
    if symmetric:
        t[j][i] = v
    return tuple(tuple(r) for r in t)


def negative_controls() -> list[NegativeControl]:
    p2, c3, c4 = boolean_algebra(2), chain(3), chain(4)
    meet = boolean_meet_monoid(2)
    triv3 = trivial_action(c3)
    pt3 = pointed_set(3)
    unit2 = monoid_as_weight_module(two_monoid())
    return [
        NegativeControl(
            "one-sided sum", FinitePcm(4, 0, _mutate(p2.sum, 1, 2, None, False)), check_pcm_axioms, "pcm.commutativity"
        ),
        NegativeControl("zero not neutral", FinitePcm(3, 0, _mutate(c3.sum, 0, 1, 2)), check_pcm_axioms, "pcm.unit"),
        NegativeControl(
            "chain with 2/3+2/3 defined", FinitePcm(4, 0, _mutate(c4.sum, 2, 2, 3)), check_pcm_axioms, "pcm.associativity"
        ),
        NegativeControl(
            "two complements",
            FiniteEffectAlgebra(FinitePcm(4, 0, _mutate(p2.sum, 1, 1, 3)), 3),
            check_effect_algebra_axioms,
            "ea.orthosupplement.ambiguous",
        ),
        NegativeControl(
            "missing complement",
            FiniteEffectAlgebra(FinitePcm(3, 0, _mutate(c3.sum, 1, 1, None)), 2),
            check_effect_algebra_axioms,
            "ea.orthosupplement.missing",
        ),
        NegativeControl(
            "meet with a wrong entry",
            FiniteEffectMonoid(p2, _mutate(meet.product, 1, 2, 1)),
            check_effect_monoid_axioms,
            "monoid.biadditivity.left",
        ),
        NegativeControl(
            "unit scalar kills an element",
            FiniteEffectModule(c3, triv3.scalars, _mutate(triv3.action, 1, 1, 0, False)),
            check_effect_module_axioms,
            "action.unit",
        ),
        NegativeControl(
            "weightless point",
            dataclasses.replace(pt3, weights=(0, 1, 0)),
            check_weight_module_axioms,
            "weight.reflects_zero",
        ),
        NegativeControl(
            "sum beyond the weight",
            dataclasses.replace(unit2, sum=((0, 1), (1, 1))),
            check_weight_module_axioms,
            "weight.additive",
        ),
        NegativeControl(
            "trace negative on a ray",
            RationalWeightModule(Cone(2), (1, -1)),
            check_weight_module_axioms,
            "weight.positivity",
        ),
    ]
