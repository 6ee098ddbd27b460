"""The eight acceptance criteria, one test each.

Each test prints a single PASS/FAIL line with its runtime; the lines are
also collected into the terminal summary.
"""
import io
import random
import time
from fractions import Fraction as F
from pathlib import Path

from conftest import ACCEPTANCE_LINES
from effectus.algebra import boolean_algebra, canonical_form, chain, check_effect_algebra_axioms, check_pcm_axioms
from effectus.category import (
    EModOp,
    Pfn,
    RationalWMod,
    WMod,
    check_category_and_pac_axioms,
    check_decomposition,
    check_effectus_axioms,
    check_sigma_characterization,
    substates,
)
from effectus.cli import run
from effectus.cone import Cone, dot
from effectus.dsl import DslError, format_document, parse
from effectus.enumerate import (
    census,
    enumerate_effect_algebras,
    enumerate_effect_monoids,
    naive_effect_algebras,
    naive_effect_monoids,
    verify_classification,
)
from effectus.fixtures import (
    algebras,
    effect_modules,
    emod_meet2_objects,
    emod_two_objects,
    monoids,
    negative_controls,
    rational_wmod_objects,
    weight_modules,
    wmod_two_objects,
)
from effectus.functors import (
    check_equivalence,
    check_faithful,
    check_functor_laws,
    check_separation,
    pfn_wmod_equivalence,
    powerset_functor,
    pred_functor,
    substate_functor,
)
from effectus.modules import (
    RationalWeightModule,
    check_effect_module_axioms,
    check_weight_module_axioms,
    monoid_as_weight_module,
    pointed_set,
    trivial_action,
)
from effectus.monoid import boolean_meet_monoid, check_effect_monoid_axioms, two_monoid
from effectus.normalization import (
    check_normalization,
    check_states_determine_substates,
    normalize,
    weight_of,
)
from effectus.ovs import (
    RationalOVS,
    base_seminorm,
    check_morphism_correspondence,
    order_unit_norm,
    space_isomorphism,
    subbase,
    totalize,
)

import oracles

CORPUS = Path(__file__).resolve().parent.parent / "fixtures"


class Criterion:
    """Times a block and records one PASS/FAIL line for it."""

    def __init__(self, number, title, limit=None):
        self.number, self.title, self.limit = number, title, limit
        self.failures = []

    def expect(self, cond, what):
        if not cond:
            self.failures.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if self.limit is not None and elapsed >= self.limit:
            self.failures.append(f"runtime {elapsed:.1f}s exceeds {self.limit}s")
        status = "PASS" if not self.failures else "FAIL"
        line = f"[{status}] {self.number}. {self.title} ({elapsed:.2f}s)"
        if self.failures:
            line += ": " + "; ".join(str(f) for f in self.failures[:3])
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert not self.failures, line
        return False


# ---------------------------------------------------------------- 1


def test_criterion_1_axiom_suites():
    with Criterion(1, "axiom suites on fixtures and negative controls", limit=10) as c:
        for name, e in algebras().items():
            c.expect(check_pcm_axioms(e.pcm) == [], f"pcm {name}")
            c.expect(check_effect_algebra_axioms(e) == [], f"algebra {name}")
        for name, m in monoids().items():
            c.expect(check_effect_monoid_axioms(m) == [], f"monoid {name}")
        for name, mod in effect_modules().items():
            c.expect(check_effect_module_axioms(mod) == [], f"effect module {name}")
        for name, w in weight_modules().items():
            c.expect(check_weight_module_axioms(w) == [], f"weight module {name}")
        controls = negative_controls()
        c.expect(len(controls) == 10, "ten negative controls")
        for nc in controls:
            found = {v.axiom for v in nc.violations()}
            c.expect(nc.expected in found, f"control {nc.name!r} missed {nc.expected}")


# ---------------------------------------------------------------- 2


def test_criterion_2_classification():
    with Criterion(2, "effect monoids of size <= 5 classified", limit=300) as c:
        for n in range(1, 5):
            fast, slow = enumerate_effect_algebras(n), naive_effect_algebras(n)
            c.expect(
                sorted(canonical_form(e)[0] for e in fast) == sorted(canonical_form(e)[0] for e in slow),
                f"algebra generators disagree at size {n}",
            )
            for e in fast:
                c.expect(len(enumerate_effect_monoids(e)) == len(naive_effect_monoids(e)), f"monoid generators at {n}")
        rows = census(5)
        c.expect(verify_classification(rows).ok, "classification report")
        c.expect(all(r.commutative for r in rows), "commutativity")
        for r in rows:
            c.expect(r.zero_divisor_free == r.has_division == r.geometric_witness, f"equivalence fails on {r.id}")
        survivors = sorted(r.size for r in rows if r.zero_divisor_free)
        c.expect(survivors == [1, 2], f"survivors {survivors}")


# ---------------------------------------------------------------- 3


def _effectus_suite():
    return [
        ("Pfn", Pfn(), [0, 1, 2, 3]),
        ("EModOp{0,1}", EModOp(two_monoid()), emod_two_objects(4)),
        ("EModOp(P2)", EModOp(boolean_meet_monoid(2)), emod_meet2_objects(4)),
        ("WMod{0,1}", WMod(two_monoid()), wmod_two_objects(3)),
        ("WMod[0,1]Q", RationalWMod(rational_wmod_objects()), None),
    ]


def test_criterion_3_effectus_instances():
    with Criterion(3, "effectus instances: axioms, PAC, sigma at J<=3, decomposition") as c:
        for name, inst, objs in _effectus_suite():
            objs = objs if objs is not None else inst.objects()
            for label, vs in (
                ("effectus", check_effectus_axioms(inst, objs)),
                ("pac", check_category_and_pac_axioms(inst, objs)),
                ("sigma", check_sigma_characterization(inst, objs, j_sizes=(1, 2, 3))),
                ("decomposition", check_decomposition(inst, objs, j_sizes=(1, 2, 3))),
            ):
                c.expect(vs == [], f"{name} {label}: {vs[:1]}")


# ---------------------------------------------------------------- 4


def test_criterion_4_functors():
    with Criterion(4, "functor laws, equivalence, powerset faithfulness, separation") as c:
        pfn = Pfn(3)
        sampled = [
            (pfn, [0, 1, 2, 3]),
            (WMod(two_monoid()), [pointed_set(n) for n in (1, 2, 3)]),
            (WMod(boolean_meet_monoid(2)), None),
            (EModOp(two_monoid()), [trivial_action(e) for e in (boolean_algebra(0), boolean_algebra(1), chain(3))]),
        ]
        for inst, objs in sampled:
            objs = objs if objs is not None else inst.objects()
            for F_ in (pred_functor(inst), substate_functor(inst)):
                vs = check_functor_laws(F_, objs)
                c.expect(vs == [], f"{type(inst).__name__} {F_.name}: {vs[:1]}")
        c.expect(check_equivalence(pfn_wmod_equivalence(4)) == [], "Pfn ~ WMod{0,1}")
        P = powerset_functor(3)
        for n, count in ((2, 9), (3, 64)):
            hs = pfn.hom(n, n)
            c.expect(len(hs) == count and len({P(f).table for f in hs}) == count, f"powerset on {n}")
        c.expect(check_faithful(P, [0, 1, 2, 3]) == (True, None), "powerset faithful")
        for inst, objs in sampled + [(EModOp(two_monoid(), [trivial_action(chain(3))]), None)]:
            objs = objs if objs is not None else inst.objects()
            for mode, F_ in (("predicate", pred_functor(inst)), ("substate", substate_functor(inst))):
                c.expect(
                    check_separation(inst, mode, objs)[0] == check_faithful(F_, objs)[0],
                    f"separation vs faithfulness, {mode}, {type(inst).__name__}",
                )


# ---------------------------------------------------------------- 5


def test_criterion_5_normalization():
    with Criterion(5, "normalization exact, idempotent, unique; states determine substates") as c:
        suite = [
            (Pfn(3), [0, 1, 2, 3]),
            (WMod(two_monoid()), wmod_two_objects(3)),
            (EModOp(two_monoid()), emod_two_objects(4)),
            (RationalWMod(rational_wmod_objects()), None),
        ]
        for inst, objs in suite:
            objs = objs if objs is not None else inst.objects()
            one = inst.identity(inst.unit())
            for a in objs:
                z = inst.zero(inst.unit(), a)
                for w in substates(inst, a):
                    if w == z:
                        continue
                    r = normalize(inst, w)
                    c.expect(inst.compose(r.state, r.weight) == w, f"not exact on {w}")
                    c.expect(weight_of(inst, r.state) == one, f"not a state: {r.state}")
                    again = normalize(inst, r.state)
                    c.expect(again.state == r.state and again.weight == one, f"not idempotent on {w}")
        # the counterexample side: zero divisors break uniqueness
        meet = boolean_meet_monoid(2)
        wm = WMod(meet)
        u = monoid_as_weight_module(meet)
        ok, wit = check_normalization(wm, [wm.coproduct([u, u]).obj])
        c.expect(not ok and len(wit[1]) == 2, "meet counterexample")
        c.expect(check_states_determine_substates(Pfn(3), [0, 1, 2, 3])[0], "Pfn states determine substates")
        c.expect(
            check_states_determine_substates(RationalWMod(rational_wmod_objects()))[0],
            "WMod/Q states determine substates",
        )


# ---------------------------------------------------------------- 6

SKEW_NORM_FIXTURES = [
    (((2, 1), (-1, 1)), (1, 2), (1, 0), F(1, 3)),
    (((1, 0), (1, 1)), (2, 1), (1, F(1, 2)), F(1, 2)),
    (((1, 0), (1, 1)), (2, 1), (-1, 1), F(2)),
    (((1, 2), (2, 1)), (1, 1), (F(1, 3), F(-1, 2)), F(4, 3)),
    (((1, 0, 0), (0, 1, 0), (1, 1, 1), (0, 0, 1)), (1, 1, 1), (1, -1, F(1, 2)), F(1)),
]

SKEW_SEMINORM_FIXTURES = [
    (((2, 1), (-1, 1)), (1, 2), (1, 0), F(5, 3)),
    (((1, 0), (1, 1)), (1, 1), (F(1, 2), F(-1, 3)), F(3, 2)),
    (((1, 2), (2, 1)), (1, 1), (1, -1), F(6)),
    (((1, 0), (1, 1)), (3, -1), (0, 1), F(5)),
    (((1, 0, 0), (0, 1, 0), (1, 1, 1)), (1, 1, 1), (1, -1, F(1, 2)), F(7, 2)),
]


def test_criterion_6_norms():
    with Criterion(6, "order-unit norm and base seminorm", limit=30) as c:
        rng = random.Random(6)
        for _ in range(100):
            n = rng.randint(1, 4)
            x = tuple(F(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(n))
            v = RationalOVS(Cone(n), unit=(1,) * n, trace=(1,) * n)
            c.expect(order_unit_norm(v, x) == max(abs(a) for a in x), f"max norm at {x}")
            c.expect(base_seminorm(v, x) == sum(abs(a) for a in x), f"l1 norm at {x}")
        for gens, u, a, want in SKEW_NORM_FIXTURES:
            got = order_unit_norm(RationalOVS(Cone(len(u), gens), unit=u), a)
            c.expect(got == want == oracles.order_unit_norm_oracle(gens, u, a), f"order-unit norm {gens}")
        for gens, tau, x, want in SKEW_SEMINORM_FIXTURES:
            got = base_seminorm(RationalOVS(Cone(len(tau), gens)), x, trace=tau)
            c.expect(got == want == oracles.base_seminorm_oracle(gens, tau, x), f"base seminorm {gens}")
        spaces = [RationalOVS(Cone(2), trace=(1, 1)), RationalOVS(Cone(2, ((2, 1), (-1, 1))), trace=(1, 2))]
        count = 0
        while count < 50:
            v = spaces[count % 2]
            coeffs = [F(rng.randint(0, 12), rng.randint(1, 12)) for _ in v.cone.rays()]
            p = tuple(sum(k * g[i] for k, g in zip(coeffs, v.cone.rays())) for i in range(2))
            if not subbase(v).contains(p):
                continue
            c.expect(base_seminorm(v, p) == dot(v.trace, p), f"seminorm on subbase point {p}")
            count += 1


# ---------------------------------------------------------------- 7


def test_criterion_7_representation():
    with Criterion(7, "totalize/subbase round trip and morphism correspondence") as c:
        slices = {k: w for k, w in weight_modules().items() if isinstance(w, RationalWeightModule)}
        c.expect("dependent-slice" in slices, "dependent generators fixture")
        for name, w in slices.items():
            c.expect(totalize(w).check() == [], f"subbase o totalize on {name}")
        doc = parse((CORPUS / "ovs.eff").read_text())
        spaces = [doc[k] for k in ("Square", "Skew", "Dependent", "Line")]
        for v in spaces:
            c.expect(space_isomorphism(v, totalize(subbase(v))) == [], f"totalize o subbase on {v.to_dict()}")
        plane = [v for v in spaces if v.dimension == 2]
        for v in plane:
            for w in plane:
                c.expect(check_morphism_correspondence(v, w) == [], "morphism correspondence")


# ---------------------------------------------------------------- 8

EXIT_CODES = {
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

WORDS = [
    "effect_algebra", "effect_monoid", "module", "weight_module", "ovs", "pfn_object", "pfn_morphism", "elements",
    "top", "zero", "weight", "scalars", "algebra", "dimension", "generator", "unit", "trace", "A", "a", "b", "0", "1",
    "1/2", "-1", "1/0", "{", "}", ";", "+", "*", "=", "->", "#", "\n",
]


def _fuzz_inputs(count, rng):
    texts = [p.read_text() for p in sorted(CORPUS.glob("*.eff"))]
    alphabet = "abc01/ -+*=;{}\n#>_." + "effect_algebra elements top"
    for i in range(count):
        kind = i % 4
        if kind == 0:
            yield "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
        elif kind == 1:
            yield " ".join(rng.choice(WORDS) for _ in range(rng.randint(0, 30)))
        elif kind == 2:
            chars = list(rng.choice(texts))
            for _ in range(rng.randint(1, 4)):
                j = rng.randrange(len(chars))
                if rng.random() < 0.5:
                    del chars[j]
                else:
                    chars.insert(j, rng.choice(alphabet))
            yield "".join(chars)
        else:
            yield bytes(rng.randrange(256) for _ in range(rng.randint(0, 40)))


def _cli(*argv):
    return run(list(argv), out=io.StringIO(), err=io.StringIO())


def test_criterion_8_cli(tmp_path):
    with Criterion(8, "parse round trip, 1e5 fuzz inputs, exit codes") as c:
        for p in sorted(CORPUS.glob("*.eff")):
            if p.name == "bad_syntax.eff":
                continue
            doc = parse(p.read_text(), p.name)
            c.expect(parse(format_document(doc)).declarations == doc.declarations, f"round trip {p.name}")
        rng = random.Random(8)
        crashes = 0
        for text in _fuzz_inputs(100_000, rng):
            try:
                parse(text)
            except DslError:
                pass
            except Exception:
                crashes += 1
        c.expect(crashes == 0, f"{crashes} parser crashes")
        target = tmp_path / "fuzz.eff"
        for text in _fuzz_inputs(300, random.Random(80)):
            target.write_bytes(text if isinstance(text, bytes) else text.encode())
            c.expect(_cli("check", str(target)) in (0, 1, 2), "cli exit code outside the contract")
        for name, code in EXIT_CODES.items():
            c.expect(_cli("check", str(CORPUS / name)) == code, f"exit code for {name}")
        c.expect(_cli() == 2 and _cli("bogus") == 2 and _cli("check", str(tmp_path / "none.eff")) == 2, "usage")
        c.expect(_cli("normalize", "--instance", "wmod-q", "--state", "1/4,1/4") == 0, "normalize")
        c.expect(_cli("classify", "--size", "4") == 0, "classify")
