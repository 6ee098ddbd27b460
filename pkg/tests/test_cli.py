import io
import json
from pathlib import Path

import pytest

from effectus.cli import run

CORPUS = Path(__file__).resolve().parent.parent / "fixtures"

EXPECTED_EXIT = {
    "two.eff": 0,
    "chain3.eff": 0,
    "powerset.eff": 0,
    "modules.eff": 0,
    "ovs.eff": 0,
    "pfn.eff": 0,
    "two.json": 0,
    "bad_monoid.eff": 1,
    "bad_weight.eff": 1,
    "bad_syntax.eff": 2,
}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_corpus_is_complete():
    assert {p.name for p in CORPUS.iterdir() if p.suffix in (".eff", ".json")} == set(EXPECTED_EXIT)


@pytest.mark.parametrize("name,code", sorted(EXPECTED_EXIT.items()))
def test_check_exit_codes(name, code):
    got, out, err = call("check", str(CORPUS / name))
    assert got == code, out + err


def test_syntax_error_is_located():
    code, _, err = call("check", str(CORPUS / "bad_syntax.eff"))
    assert code == 2
    assert "bad_syntax.eff:4:3" in err and "'q'" in err


def test_check_json():
    code, out, _ = call("check", str(CORPUS / "bad_monoid.eff"), "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["schema"] == 1 and doc["ok"] is False
    assert doc["results"][0]["violations"]


def test_usage_errors():
    assert call()[0] == 2
    assert call("bogus")[0] == 2
    assert call("check")[0] == 2
    assert call("check", str(CORPUS / "missing.eff"))[0] == 2
    assert call("normalize", "--instance", "wmod-q", "--state", "a,b")[0] == 2
    assert call("enumerate", "--size", "x")[0] == 2


def test_normalize_rational():
    code, out, _ = call("normalize", "--instance", "wmod-q", "--state", "1/4,1/4")
    assert code == 0 and "(1/2, 1/2) with weight 1/2" in out


def test_normalize_zero_weight():
    code, out, err = call("normalize", "--instance", "wmod-q", "--state", "0,0")
    assert code == 1


def test_normalize_pfn_json():
    code, out, _ = call("--format", "json", "normalize", "--instance", "pfn", "--size", "3", "--state", "1")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1


def test_classify_size4():
    code, out, _ = call("classify", "--size", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    rows = doc["rows"]
    assert [r["size"] for r in rows] == [1, 2, 4]
    assert all(r["size"] <= 2 for r in rows if r["zero_divisor_free"])


def test_enumerate_counts():
    code, out, _ = call("enumerate", "--size", "4", "--kind", "algebra", "--format", "json")
    assert code == 0 and len(json.loads(out)["rows"]) == 3
    code, out, _ = call("enumerate", "--size", "4", "--kind", "monoid", "--format", "json")
    assert code == 0 and len(json.loads(out)["rows"]) == 1


def test_enumerate_tsv_is_tab_separated():
    code, out, _ = call("enumerate", "--size", "4", "--kind", "algebra", "--format", "tsv")
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert code == 0 and all(l.count("\t") == 3 for l in lines)


def test_represent_skew():
    code, out, _ = call("represent", str(CORPUS / "ovs.eff"), "--name", "Skew", "--vector", "1,0", "--format", "json")
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["order_unit_norm"] == "1/3" and row["base_seminorm"] == "5/3"


def test_functors_single_suite():
    code, out, _ = call("functors", "--suite", "powerset", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["rows"]


@pytest.mark.parametrize(
    "argv",
    [
        ("check", str(CORPUS / "modules.eff")),
        ("classify", "--size", "4"),
        ("enumerate", "--size", "5", "--format", "tsv"),
        ("normalize", "--instance", "wmod-q", "--state", "1/3,1/6", "--format", "json"),
    ],
)
def test_output_reproducible(argv):
    assert call(*argv) == call(*argv)


def test_empty_enumeration_says_so():
    code, out, _ = call("enumerate", "--size", "5", "--kind", "monoid")
    assert code == 0 and out == "no results\n"
