import itertools

import pytest

from effectus.algebra import boolean_algebra, chain, find_isomorphism
from effectus.category import EModOp, PartialFunction, Pfn, WMod
from effectus.functors import (
    check_equivalence,
    check_faithful,
    check_functor_laws,
    check_lattice_preservation,
    check_predicate_embedding,
    check_separation,
    pfn_wmod_equivalence,
    pointed_sets,
    powerset_functor,
    pred_functor,
    substate_functor,
)
from effectus.modules import check_weight_module_axioms, pointed_set, trivial_action
from effectus.monoid import boolean_meet_monoid, two_monoid

PFN = Pfn(3)


def test_pred_sends_sets_to_powersets():
    F = pred_functor(PFN)
    for n in range(4):
        assert find_isomorphism(F.on_object(n).algebra, boolean_algebra(n)) is not None


def test_pred_laws_on_pfn():
    F = pred_functor(PFN)
    assert check_functor_laws(F, [0, 1, 2]) == []
    for n in range(4):
        assert F(PFN.identity(n)) == F.target.identity(F.on_object(n))


def test_pred_composition_in_module_direction():
    F = pred_functor(PFN)
    D = F.target
    for a, b, c in itertools.product(range(3), repeat=3):
        for f in PFN.hom(a, b):
            for g in PFN.hom(b, c):
                mg = F(PFN.compose(g, f))
                # module direction: Pred(g o f) = Pred(f) after Pred(g)
                assert mg.table == tuple(F(f).table[i] for i in F(g).table)
                # covariant into the opposite category
                assert mg == D.compose(F(g), F(f))


def test_substate_functor_on_pfn():
    F = substate_functor(PFN)
    assert check_functor_laws(F, [0, 1, 2]) == []
    for n in range(4):
        st = F.on_object(n)
        assert st.size == n + 1
        assert check_weight_module_axioms(st) == []
        # a pointed set: every nonzero substate has weight 1, and no two are summable
        one = st.scalars.one
        nz = [x for x in st.elements if x != st.zero]
        assert all(st.weight(x) == one for x in nz)
        assert all(st.add(x, y) is None for x in nz for y in nz)
    z = PFN.zero(2, 3)
    img = F(z)
    assert set(img.table) == {F.on_object(3).zero}


def test_substate_coproduct_weight_preserved():
    F = substate_functor(PFN)
    for a, b in itertools.product(range(3), repeat=2):
        cp = PFN.coproduct([a, b])
        cpd = F.target.coproduct([F.on_object(a), F.on_object(b)])
        comp = cpd.cotuple([F(k) for k in cp.coprojections])
        src, tgt = cpd.obj, F.on_object(cp.obj)
        for x in src.elements:
            assert tgt.weight(comp.table[x]) == src.weight(x)


@pytest.mark.parametrize("m", [two_monoid(), boolean_meet_monoid(2)], ids=["two", "meet2"])
def test_functors_on_wmod(m):
    inst = WMod(m)
    u = inst.unit()
    objs = [u, inst.coproduct([u, u]).obj] if m.size == 2 else [u]
    assert check_functor_laws(pred_functor(inst), objs) == []
    assert check_functor_laws(substate_functor(inst), objs) == []


def test_functors_on_emodop_two():
    inst = EModOp(two_monoid(), [trivial_action(e) for e in (boolean_algebra(0), boolean_algebra(1), chain(3))])
    objs = inst.objects()
    assert check_functor_laws(pred_functor(inst), objs) == []
    assert check_functor_laws(substate_functor(inst), objs) == []


# ---------------------------------------------------------------- equivalence


def test_equivalence_object_and_arrow_rules():
    eq = pfn_wmod_equivalence(4)
    assert eq.forward.on_object(pointed_set(3)) == 2
    p3, p2 = pointed_set(3), pointed_set(2)
    const = [f for f in eq.forward.source.hom(p3, p2) if set(f.table) == {0}]
    assert len(const) == 1
    assert eq.forward(const[0]) == PartialFunction(2, 1, (None, None))


def test_equivalence_on_all_pointed_sets():
    eq = pfn_wmod_equivalence(4)
    assert len(pointed_sets(4)) == 10
    assert check_equivalence(eq) == []


# ---------------------------------------------------------------- powerset


def test_powerset_formula():
    F = powerset_functor(3)
    f = PartialFunction(2, 2, (0, None))
    assert F(f).table[0b01] == 0b01
    assert F(f).table[0] == 0


@pytest.mark.parametrize("n,count", [(2, 9), (3, 64)])
def test_powerset_faithful_on_endomaps(n, count):
    F = powerset_functor(3)
    hs = PFN.hom(n, n)
    assert len(hs) == count
    assert len({F(f).table for f in hs}) == count


def test_powerset_laws():
    F = powerset_functor(3)
    objs = [0, 1, 2, 3]
    assert check_functor_laws(F, objs) == []
    assert check_faithful(F, objs) == (True, None)
    assert check_lattice_preservation(F, objs) == []
    assert check_predicate_embedding(PFN) == []


# ---------------------------------------------------------------- separation


def test_pfn_separation():
    for mode in ("predicate", "substate", "state"):
        assert check_separation(PFN, mode, [0, 1, 2, 3]) == (True, None)


def test_substate_separation_fails_on_chain_module():
    c3 = trivial_action(chain(3))
    inst = EModOp(two_monoid(), [c3])
    ok, (f, g) = check_separation(inst, "substate", [c3])
    assert not ok and f != g
    assert not check_faithful(substate_functor(inst), [c3])[0]
    # predicates still separate
    assert check_separation(inst, "predicate", [c3])[0]


@pytest.mark.parametrize(
    "inst",
    [
        Pfn(2),
        WMod(two_monoid(), [pointed_set(n) for n in (1, 2, 3)]),
        WMod(boolean_meet_monoid(2)),
        EModOp(two_monoid(), [trivial_action(chain(3)), trivial_action(boolean_algebra(1))]),
    ],
    ids=["pfn", "wmod-two", "wmod-meet2", "emodop-chain"],
)
def test_separation_matches_faithfulness(inst):
    objs = inst.objects()
    assert check_separation(inst, "predicate", objs)[0] == check_faithful(pred_functor(inst), objs)[0]
    assert check_separation(inst, "substate", objs)[0] == check_faithful(substate_functor(inst), objs)[0]
