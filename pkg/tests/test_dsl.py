import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effectus.algebra import boolean_algebra, chain, check_effect_algebra_axioms, find_isomorphism
from effectus.category import PartialFunction
from effectus.dsl import (
    DslDocument,
    DslError,
    algebra_declaration,
    format_document,
    monoid_declaration,
    ovs_declaration,
    parse,
)
from effectus.enumerate import enumerate_effect_algebras
from effectus.modules import check_effect_module_axioms, check_weight_module_axioms
from effectus.monoid import boolean_meet_monoid, check_effect_monoid_axioms
from effectus.ovs import RationalOVS
from effectus.cone import Cone

CORPUS = Path(__file__).resolve().parent.parent / "fixtures"
GOOD = sorted(p for p in CORPUS.glob("*.eff") if not p.name.startswith("bad_syntax"))


def test_two_element_algebra():
    doc = parse("effect_algebra Two { elements 0 1; top 1; }")
    e = doc["Two"]
    assert e.size == 2 and check_effect_algebra_axioms(e) == []
    assert e.add(1, 1) is None


def test_dangling_reference_located():
    with pytest.raises(DslError) as info:
        parse("effect_algebra T {\n  elements 0 a 1\n  top 1\n  a + b = q\n}\n", "t.eff")
    d = info.value.diagnostics[0]
    assert (d.line, d.source) == (4, "t.eff")
    assert d.column > 1
    assert "b" in d.message or "q" in d.message


@pytest.mark.parametrize(
    "text,needle",
    [
        ("frobnicate X { }", "frobnicate"),
        ("effect_algebra A { elements 0 0 1; top 1 }", "duplicate"),
        ("ovs V { dimension 2; unit 1 0.5 }", "0.5"),
        ("effect_algebra A { elements 0 1; top 1; bogus 3 }", "bogus"),
        ("effect_algebra A { elements 0 1; top 1", "unterminated"),
        ("module M { algebra Nope; scalars Nope }", "Nope"),
    ],
)
def test_diagnostics(text, needle):
    with pytest.raises(DslError) as info:
        parse(text)
    ds = info.value.diagnostics
    assert ds and all(d.line >= 1 and d.column >= 1 for d in ds)
    assert any(needle in d.message for d in ds), [d.message for d in ds]


def test_chain_and_monoid():
    doc = parse((CORPUS / "modules.eff").read_text())
    assert find_isomorphism(doc["Chain3"], chain(3)) is not None
    assert check_effect_monoid_axioms(doc["Meet2"]) == []
    assert doc["Meet2"].product == boolean_meet_monoid(2).product
    assert check_effect_module_axioms(doc["Chain3OverMeet"]) == []
    assert check_weight_module_axioms(doc["Pointed3"]) == []


def test_pfn_declarations():
    doc = parse((CORPUS / "pfn.eff").read_text())
    assert doc["g"] == PartialFunction(3, 2, (1, None, 0))


def test_ovs_declarations():
    doc = parse((CORPUS / "ovs.eff").read_text())
    assert doc["Skew"] == RationalOVS(Cone(2, ((2, 1), (-1, 1))), (1, 2), (1, 2))
    assert doc["Line"].dimension == 1


@pytest.mark.parametrize("path", GOOD, ids=lambda p: p.name)
def test_corpus_round_trip(path):
    doc = parse(path.read_text(), path.name)
    text = format_document(doc)
    again = parse(text)
    assert again.declarations == doc.declarations
    assert format_document(again) == text
    assert set(again.objects) == set(doc.objects)


def test_generated_declarations_round_trip():
    decls = [algebra_declaration(e, f"A{i}") for i, e in enumerate(enumerate_effect_algebras(4))]
    decls.append(algebra_declaration(boolean_algebra(3), "P3"))
    decls.append(monoid_declaration(boolean_meet_monoid(2), "M"))
    decls.append(ovs_declaration(RationalOVS(Cone(2, ((2, 1), (-1, 1))), (1, 2), (1, 2)), "V"))
    doc = parse(format_document(DslDocument(decls)))
    assert doc.declarations == decls
    assert find_isomorphism(doc["P3"], boolean_algebra(3)) is not None
    assert doc["M"].product == boolean_meet_monoid(2).product


def test_bytes_input():
    assert parse(b"effect_algebra T { elements 0 1; top 1 }")["T"].size == 2
    with pytest.raises(DslError):
        parse(b"\xff\xfe")


@settings(max_examples=400, deadline=None)
@given(st.text(max_size=200))
def test_parser_total_on_text(text):
    try:
        parse(text)
    except DslError as e:
        assert e.diagnostics


tokens = st.sampled_from(
    ["effect_algebra", "effect_monoid", "module", "weight_module", "ovs", "pfn_object", "pfn_morphism",
     "A", "B", "{", "}", ";", "\n", "+", "*", "=", "->", "0", "1", "a", "1/2", "-1", "elements", "top", "zero",
     "weight", "scalars", "algebra", "dimension", "generator", "unit", "trace", "size", "source", "target", "#", "x"]
)


@settings(max_examples=400, deadline=None)
@given(st.lists(tokens, max_size=40))
def test_parser_total_on_token_soup(toks):
    try:
        parse(" ".join(toks))
    except DslError as e:
        assert e.diagnostics


@pytest.mark.parametrize("path", GOOD, ids=lambda p: p.name)
def test_parser_total_on_mutations(path):
    text = path.read_text()
    rng = random.Random(path.name)
    for _ in range(200):
        chars = list(text)
        for _ in range(rng.randint(1, 4)):
            i = rng.randrange(len(chars))
            op = rng.random()
            if op < 0.4:
                del chars[i]
            elif op < 0.8:
                chars.insert(i, rng.choice("{};+*=->01ab/ \n#"))
            else:
                chars[i] = rng.choice("xyz9-")
        try:
            parse("".join(chars))
        except DslError:
            pass
