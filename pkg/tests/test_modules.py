import dataclasses
import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effectus.algebra import chain
from effectus.category import module_maps
from effectus.cone import Cone
from effectus.enumerate import enumerate_effect_algebras
from effectus.fixtures import effect_modules, weight_modules
from effectus.modules import (
    FiniteWeightModule,
    RationalWeightModule,
    base,
    box_module,
    check_base_convexity,
    check_effect_module_axioms,
    check_weight_module_axioms,
    effect_module_actions,
    is_cancellative,
    monoid_as_weight_module,
    pointed_set,
    simplex_module,
    trivial_action,
    weight_module_coproduct,
)
from effectus.monoid import RationalUnitInterval, boolean_meet_monoid, two_monoid

SMALL = [e for n in range(1, 6) for e in enumerate_effect_algebras(n)]


def axioms(vs):
    return {v.axiom for v in vs}


@pytest.mark.parametrize("name", sorted(effect_modules()))
def test_effect_module_fixtures(name):
    assert check_effect_module_axioms(effect_modules()[name]) == []


@pytest.mark.parametrize("name", sorted(weight_modules()))
def test_weight_module_fixtures(name):
    assert check_weight_module_axioms(weight_modules()[name]) == []


def test_trivial_action_on_every_small_algebra():
    for e in SMALL:
        assert check_effect_module_axioms(trivial_action(e)) == []


def test_boolean_action_is_unique():
    for e in SMALL:
        assert len(effect_module_actions(e, two_monoid())) == 1


def test_box_module():
    assert check_effect_module_axioms(box_module((1, 1))) == []
    assert check_effect_module_axioms(box_module((1,))) == []


def test_corrupted_unit_action():
    mod = trivial_action(chain(3))
    bad = dataclasses.replace(mod, action=(mod.action[0], (0, 0, 2)))
    assert "action.unit" in axioms(check_effect_module_axioms(bad))


def test_pointed_set_and_simplex():
    assert check_weight_module_axioms(pointed_set(2)) == []
    assert check_weight_module_axioms(simplex_module(2)) == []


def test_zero_weight_flagged():
    bad = dataclasses.replace(pointed_set(2), weights=(0, 0))
    assert "weight.reflects_zero" in axioms(check_weight_module_axioms(bad))
    flat = RationalWeightModule(Cone(2), (0, 0))
    assert "weight.reflects_zero" in axioms(check_weight_module_axioms(flat)) or "weight.positivity" in axioms(
        check_weight_module_axioms(flat)
    )


def test_cancellativity():
    c = is_cancellative(simplex_module(2))
    assert c and c.justification == "vector-addition"
    assert is_cancellative(pointed_set(3))
    # 0, x, y, z, w with x + y = x + z = w
    n = None
    table = (
        (0, 1, 2, 3, 4),
        (1, n, 4, 4, n),
        (2, 4, n, n, n),
        (3, 4, n, n, n),
        (4, n, n, n, n),
    )
    w = FiniteWeightModule(5, 0, table, ((0,) * 5, tuple(range(5))), (0, 1, 1, 1, 1), two_monoid())
    c = is_cancellative(w)
    assert not c
    x, y, z, s = c.witness
    assert w.add(x, y) == w.add(x, z) == s and y != z


def test_base():
    p = pointed_set(2)
    assert base(p) == frozenset({1})
    b = base(simplex_module(2))
    assert (F(1, 3), F(2, 3)) in b
    assert (F(1, 3), F(1, 3)) not in b
    s = simplex_module(2)
    half = F(1, 2)
    assert s.add(s.act(half, (F(1), F(0))), s.act(half, (F(0), F(1)))) == (half, half)
    assert (half, half) in b


@pytest.mark.parametrize("name", ["pointed3", "meet2/self", "simplex2", "simplex3", "skew-slice"])
def test_base_convexity(name):
    assert check_base_convexity(weight_modules()[name]) == []


# ---------------------------------------------------------------- coproducts


def test_wedge_of_pointed_sets():
    cp = weight_module_coproduct([pointed_set(2), pointed_set(2)])
    assert sorted(cp.tuples) == [(0, 0), (0, 1), (1, 0)]
    assert check_weight_module_axioms(cp.module) == []


def test_rational_coproduct_is_triangle():
    q1 = simplex_module(1)
    cp = weight_module_coproduct([q1, q1])
    m = cp.module
    assert m.contains((F(1, 2), F(1, 2)))
    assert not m.contains((F(2, 3), F(1, 2)))
    assert m.weight((F(1, 4), F(1, 3))) == F(7, 12)
    assert m.trace == (1, 1)


def _apply(mat, x):
    return tuple(sum(r * v for r, v in zip(row, x)) for row in mat)


def test_projection_after_coprojection():
    q1 = simplex_module(1)
    cp = weight_module_coproduct([q1, q1])
    for i, j in itertools.product(range(2), repeat=2):
        k, p = cp.coprojection(i), cp.projection(j)
        out = _apply(p, _apply(k, (F(1, 3),)))
        assert out == ((F(1, 3),) if i == j else (F(0),))
    fin = weight_module_coproduct([pointed_set(3), pointed_set(2)])
    for i, j in itertools.product(range(2), repeat=2):
        k, p = fin.coprojection(i), fin.projection(j)
        for x in fin.summands[i].elements:
            assert p[k[x]] == (x if i == j else fin.summands[j].zero)


def test_mismatched_scalars():
    with pytest.raises(ValueError):
        weight_module_coproduct([pointed_set(2), monoid_as_weight_module(boolean_meet_monoid(2))])


def test_coproduct_universal_property():
    objs = [pointed_set(n) for n in (1, 2, 3)]
    for a, b in itertools.product(objs[:2], repeat=2):
        cp = weight_module_coproduct([a, b])
        for c in objs:
            maps = module_maps(cp.module, c, weight_decreasing=True)
            ka, kb = cp.coprojection(0), cp.coprojection(1)
            for f in module_maps(a, c, weight_decreasing=True):
                for g in module_maps(b, c, weight_decreasing=True):
                    hits = [h for h in maps if tuple(h[x] for x in ka) == tuple(f) and tuple(h[x] for x in kb) == tuple(g)]
                    try:
                        cot = cp.cotuple(c, [f, g])
                    except ValueError:
                        cot = None
                    assert len(hits) == 1
                    assert hits[0] == cot
                    assert all(c.weight(cot[i]) <= cp.module.weight(i) for i in cp.module.elements)


rat = st.fractions(min_value=0, max_value=1, max_denominator=12)


@settings(max_examples=200, deadline=None)
@given(rat, rat, rat, rat)
def test_summable_iff_weights_summable(a, b, c, d):
    for w in (simplex_module(2), weight_modules()["skew-slice"]):
        x, y = (a, b), (c, d)
        if not (w.contains(x) and w.contains(y)):
            continue
        q = RationalUnitInterval()
        assert (w.add(x, y) is None) == (q.add(w.weight(x), w.weight(y)) is None)
