"""Command-line front end.

Exit codes: 0 when every check passes, 1 when violations are found,
2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import FiniteEffectAlgebra, Violation, _jsonable, check_effect_algebra_axioms
from .dsl import DslError, parse
from .modules import check_effect_module_axioms, check_weight_module_axioms
from .monoid import check_effect_monoid_axioms, format_rational, parse_rational

SCHEMA = 1


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_cell(x) for x in v)
    return "" if v is None else str(v)


def _json_default(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    return str(x)


def emit(report: dict, fmt: str, out=None) -> None:
    """Write a report; ``report["rows"]`` (a list of flat dicts) is the table for tsv/text."""
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps({"schema": SCHEMA, **report}, sort_keys=True, indent=2, default=_json_default) + "\n")
        return
    rows = report.get("rows")
    if fmt == "tsv":
        if rows:
            cols = list(rows[0])
            out.write("\t".join(cols) + "\n")
            for r in rows:
                out.write("\t".join(_cell(r[c]) for c in cols) + "\n")
        for k in sorted(report):
            if k != "rows" and not isinstance(report[k], (dict, list)):
                out.write(f"# {k}\t{_cell(report[k])}\n")
        return
    # text
    if "message" in report:
        out.write(report["message"] + "\n")
    if rows:
        cols = list(rows[0])
        widths = [max(len(c), *(len(_cell(r[c])) for r in rows)) for c in cols]
        out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
        for r in rows:
            out.write("  ".join(_cell(r[c]).ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
    elif rows is not None:
        out.write("no results\n")
    for line in report.get("details", []):
        out.write(line + "\n")
    if "ok" in report:
        out.write(("ok" if report["ok"] else "FAILED") + "\n")


# ---------------------------------------------------------------- loading


def load_structures(path: str) -> list[tuple[str, str, object]]:
    """``(name, kind, structure)`` triples from a DSL file or a JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}")
    if path.endswith(".json"):
        return _load_json(text, path)
    doc = parse(text, path)
    return [(d.name, d.kind, doc.objects[d.name]) for d in doc.declarations]


def _load_json(text: str, path: str):
    from .cone import Cone
    from .ovs import RationalOVS

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}:{e.lineno}:{e.colno}: {e.msg}")
    items = data if isinstance(data, list) else [data]
    out = []
    for i, d in enumerate(items):
        if not isinstance(d, dict):
            raise UsageError(f"{path}: item {i} is not an object")
        name = str(d.get("name", f"item{i}"))
        kind = d.get("kind", "effect_algebra")
        try:
            if kind == "effect_algebra":
                out.append((name, kind, FiniteEffectAlgebra.from_dict(d)))
            elif kind == "ovs":
                q = lambda xs: None if xs is None else tuple(parse_rational(str(x)) for x in xs)
                gens = d.get("generators")
                cone = Cone(int(d["dimension"]), None if gens is None else tuple(q(g) for g in gens))
                out.append((name, kind, RationalOVS(cone, q(d.get("unit")), q(d.get("trace")))))
            else:
                raise UsageError(f"{path}: unsupported kind {kind!r} in JSON input")
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise UsageError(f"{path}: item {i}: {e}")
    return out


# ---------------------------------------------------------------- verbs


def _check_one(kind: str, obj) -> list[Violation]:
    if kind == "effect_algebra":
        return check_effect_algebra_axioms(obj)
    if kind == "effect_monoid":
        return check_effect_monoid_axioms(obj)
    if kind == "module":
        return check_effect_module_axioms(obj)
    if kind == "weight_module":
        return check_weight_module_axioms(obj)
    if kind == "ovs":
        from .ovs import check_norm_is_norm, subbase, unit_interval

        out = []
        if obj.unit is not None:
            out += check_effect_module_axioms(unit_interval(obj))
        if obj.trace is not None:
            out += check_weight_module_axioms(subbase(obj))
            ok, w = check_norm_is_norm(obj)
            if not ok:
                out.append(Violation("norm.definite", _jsonable(w)))
        return out
    return []  # pfn objects and morphisms are valid once parsed


def cmd_check(args) -> tuple[dict, int]:
    rows, results, details = [], [], []
    for name, kind, obj in load_structures(args.file):
        vs = _check_one(kind, obj)
        rows.append({"name": name, "kind": kind, "ok": not vs, "violations": len(vs)})
        results.append({"name": name, "kind": kind, "ok": not vs, "violations": [v.to_dict() for v in vs]})
        details += [f"{name}: {v.axiom} {_cell(_jsonable(v.witness))} {v.detail}".rstrip() for v in vs]
    ok = all(r["ok"] for r in rows)
    report = {"command": "check", "file": args.file, "ok": ok, "results": results, "rows": rows, "details": details}
    return report, 0 if ok else 1


_FILTERS = {
    "commutative": "commutative",
    "zero-divisor-free": "zero_divisor_free",
    "division": "has_division",
    "boolean": "idempotent",
    "chain": "chain",
}


def cmd_enumerate(args) -> tuple[dict, int]:
    from .enumerate import ALGEBRA_CAP, MONOID_CAP, census, enumerate_effect_algebras

    filters = [f for f in (args.filter or "").split(",") if f]
    for f in filters:
        if f not in _FILTERS:
            raise UsageError(f"unknown filter {f!r}; choose from {', '.join(_FILTERS)}")
    if args.kind == "algebra":
        if filters:
            raise UsageError("filters apply to --kind monoid only")
        if not 1 <= args.size <= ALGEBRA_CAP:
            raise UsageError(f"--size must be between 1 and {ALGEBRA_CAP}")
        algs = enumerate_effect_algebras(args.size, workers=args.workers)
        rows = [
            {"id": f"A{args.size}.{i}", "size": e.size, "top": e.top, "sum": ";".join(f"{a}+{b}={c}" for a, b, c in e.to_dict()["sum"])}
            for i, e in enumerate(algs)
        ]
        return {"command": "enumerate", "kind": "algebra", "size": args.size, "count": len(rows), "rows": rows}, 0
    if not 1 <= args.size <= MONOID_CAP:
        raise UsageError(f"--size must be between 1 and {MONOID_CAP}")
    rows = [r for r in census(args.size, workers=args.workers) if r.size == args.size]
    rows = [r for r in rows if all(getattr(r, _FILTERS[f]) for f in filters)]
    table = [{k: v for k, v in r.to_dict().items() if not k.endswith("_key")} for r in rows]
    return {"command": "enumerate", "kind": "monoid", "size": args.size, "count": len(table), "rows": table}, 0


def cmd_classify(args) -> tuple[dict, int]:
    from .enumerate import MONOID_CAP, census, enumerate_effect_monoids, enumerate_effect_algebras, verify_classification
    from .normalization import check_normalization_theorem

    if not 1 <= args.size <= MONOID_CAP:
        raise UsageError(f"--size must be between 1 and {MONOID_CAP}")
    rows = census(args.size, workers=args.workers)
    monoids = {}
    for n in range(1, args.size + 1):
        for i, e in enumerate(enumerate_effect_algebras(n)):
            for j, m in enumerate(enumerate_effect_monoids(e)):
                monoids[f"M{n}.{i}.{j}"] = m
    table = []
    consistent = True
    for r in rows:
        rep = check_normalization_theorem(monoids[r.id])
        consistent &= rep.consistent
        table.append({
            "id": r.id,
            "size": r.size,
            "commutative": r.commutative,
            "zero_divisor_free": r.zero_divisor_free,
            "division": r.has_division,
            "geometric": r.geometric_witness,
            "normalization": rep.normalization,
            "scalar_epi": rep.scalar_epi,
        })
    cls = verify_classification(rows)
    ok = cls.ok and consistent
    report = {
        "command": "classify",
        "size": args.size,
        "ok": ok,
        "counts": cls.counts,
        "failures": [list(f) for f in cls.failures],
        "rows": table,
    }
    return report, 0 if ok else 1


def _parse_vector(s: str) -> tuple[Fraction, ...]:
    parts = [p.strip() for p in s.replace("(", "").replace(")", "").split(",")]
    try:
        return tuple(parse_rational(p) for p in parts)
    except ValueError as e:
        raise UsageError(f"bad vector {s!r}: {e}")


def cmd_normalize(args) -> tuple[dict, int]:
    from .category import Pfn, PartialFunction, RationalWMod, WMod, rational_object
    from .normalization import NotNormalizable, normalize, substate_from_vector

    inst_name = args.instance
    if inst_name == "wmod-q":
        v = _parse_vector(args.state)
        trace = _parse_vector(args.trace) if args.trace else (Fraction(1),) * len(v)
        if len(trace) != len(v):
            raise UsageError("--trace and --state have different lengths")
        inst = RationalWMod()
        try:
            obj = rational_object(trace)
            w = substate_from_vector(inst, obj, v)
        except ValueError as e:
            raise UsageError(str(e))
        try:
            res = normalize(inst, w)
        except ValueError as e:
            return {"command": "normalize", "ok": False, "message": str(e)}, 1
        state = tuple(row[0] for row in res.state.matrix)
        weight = res.weight.matrix[0][0]
        msg = f"({', '.join(format_rational(x) for x in state)}) with weight {format_rational(weight)}"
        return {"command": "normalize", "ok": True, "state": list(state), "weight": weight,
                "certificate": res.certificate, "message": msg}, 0
    if inst_name == "pfn":
        if args.size is None:
            raise UsageError("--size is required for --instance pfn")
        inst = Pfn(max(args.size, 1))
        s = args.state.strip()
        if s in ("", "-", "none"):
            w = PartialFunction(1, args.size, (None,))
        elif s.isdigit() and int(s) < args.size:
            w = PartialFunction(1, args.size, (int(s),))
        else:
            raise UsageError(f"state must be an element below {args.size} or '-'")
        try:
            res = normalize(inst, w)
        except ValueError as e:
            return {"command": "normalize", "ok": False, "message": str(e)}, 1
        return {"command": "normalize", "ok": True, "state": res.state.values[0], "weight": 1,
                "certificate": res.certificate, "message": f"{res.state.values[0]} with weight 1"}, 0
    # finite weight module from a file
    if not args.file or not args.module:
        raise UsageError("--instance wmod needs --file and --module")
    structs = {n: (k, o) for n, k, o in load_structures(args.file)}
    if args.module not in structs or structs[args.module][0] != "weight_module":
        raise UsageError(f"no weight_module named {args.module!r} in {args.file}")
    x = structs[args.module][1]
    labels = [x.label(i) for i in x.elements]
    if args.state not in labels:
        raise UsageError(f"{args.state!r} is not an element of {args.module}")
    inst = WMod(x.scalars)
    target = labels.index(args.state)
    m = x.scalars
    cands = [w for w in inst.hom(inst.unit(), x) if w.table[m.one] == target]
    if not cands:
        raise UsageError("no substate picks out that element")
    try:
        res = normalize(inst, cands[0])
    except NotNormalizable as e:
        options = sorted(labels[c.table[m.one]] for c in e.candidates)
        msg = f"{args.state} is not uniquely normalizable: {len(options)} candidate states {options}"
        return {"command": "normalize", "ok": False, "candidates": options, "message": msg}, 1
    except ValueError as e:
        return {"command": "normalize", "ok": False, "message": str(e)}, 1
    state = labels[res.state.table[m.one]]
    weight = m.algebra.label(res.weight.table[m.one])
    return {"command": "normalize", "ok": True, "state": state, "weight": weight, "certificate": res.certificate,
            "message": f"{state} with weight {weight}"}, 0


def cmd_represent(args) -> tuple[dict, int]:
    from .ovs import base_seminorm, order_unit_norm, space_isomorphism, subbase, totalize

    vectors = [_parse_vector(v) for v in args.vector or []]
    rows, details = [], []
    ok = True
    spaces = [(n, v) for n, k, v in load_structures(args.file) if k == "ovs" and (args.name is None or n == args.name)]
    if not spaces:
        raise UsageError(f"no ovs declaration{' named ' + args.name if args.name else ''} in {args.file}")
    for vec in vectors:
        if not any(len(vec) == v.dimension for _, v in spaces):
            raise UsageError(f"vector ({', '.join(map(format_rational, vec))}) fits none of the declared spaces")
    for name, v in spaces:
        for vec in vectors:
            if len(vec) != v.dimension:
                continue
            row = {"name": name, "vector": [format_rational(x) for x in vec]}
            try:
                row["order_unit_norm"] = format_rational(order_unit_norm(v, vec)) if v.unit is not None else None
                row["base_seminorm"] = format_rational(base_seminorm(v, vec)) if v.trace is not None else None
            except ValueError as e:
                raise UsageError(f"{name}: {e}")
            rows.append(row)
        desc = v.to_dict()
        if v.trace is not None:
            t = totalize(subbase(v))
            problems = t.check() + space_isomorphism(v, t)
            ok &= not problems
            desc["totalization"] = {"dimension": t.space.dimension, "roundtrip": not problems}
        details.append(f"{name}: " + json.dumps(desc, sort_keys=True))
    report = {"command": "represent", "file": args.file, "ok": ok, "rows": rows, "details": details}
    return report, 0 if ok else 1


def cmd_functors(args) -> tuple[dict, int]:
    from .category import EModOp, Pfn, WMod
    from .fixtures import emod_two_objects, wmod_two_objects
    from .functors import (
        check_equivalence,
        check_faithful,
        check_functor_laws,
        check_lattice_preservation,
        check_predicate_embedding,
        check_separation,
        pfn_wmod_equivalence,
        powerset_functor,
        pred_functor,
        substate_functor,
    )
    from .monoid import two_monoid

    suites = args.suite
    instances = {
        "pfn": Pfn(3),
        "wmod-two": WMod(two_monoid(), wmod_two_objects(3)),
        "emodop-two": EModOp(two_monoid(), emod_two_objects(3)),
    }
    rows = []

    def add(suite, subject, vs):
        rows.append({"suite": suite, "subject": subject, "ok": not vs, "violations": len(vs)})

    for key, inst in instances.items():
        if suites in ("all", "pred"):
            add("pred", key, check_functor_laws(pred_functor(inst)))
        if suites in ("all", "substate"):
            add("substate", key, check_functor_laws(substate_functor(inst)))
        if suites in ("all", "separation"):
            for mode, F in (("predicate", pred_functor), ("substate", substate_functor)):
                sep, _ = check_separation(inst, mode)
                faith, _ = check_faithful(F(inst))
                add(f"separation-{mode}", key, [] if sep == faith else [Violation("separation.agreement", (key, mode))])
    if suites in ("all", "equivalence"):
        add("equivalence", "pointed<=4", check_equivalence(pfn_wmod_equivalence(4)))
    if suites in ("all", "powerset"):
        P = powerset_functor(3)
        faith, w = check_faithful(P)
        vs = check_functor_laws(P) + check_lattice_preservation(P) + check_predicate_embedding(P.source)
        if not faith:
            vs.append(Violation("powerset.faithful", w))
        add("powerset", "sets<=3", vs)
    ok = all(r["ok"] for r in rows)
    return {"command": "functors", "suite": suites, "ok": ok, "rows": rows}, 0 if ok else 1


# ---------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="effectus", description="Check, enumerate and represent effect algebras, monoids and modules.")
    p.add_argument("--format", choices=("json", "tsv", "text"), default="text")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run the axiom suites on every declaration in a file")
    c.add_argument("file")

    e = sub.add_parser("enumerate", help="list effect algebras or monoids of a given size")
    e.add_argument("--size", type=int, required=True)
    e.add_argument("--kind", choices=("algebra", "monoid"), default="algebra")
    e.add_argument("--filter", help="comma list: " + ",".join(_FILTERS))
    e.add_argument("--workers", type=int, default=1)

    k = sub.add_parser("classify", help="census of effect monoids with the normalization clauses")
    k.add_argument("--size", type=int, required=True)
    k.add_argument("--workers", type=int, default=1)

    n = sub.add_parser("normalize", help="normalize a substate")
    n.add_argument("--instance", choices=("pfn", "wmod-q", "wmod"), required=True)
    n.add_argument("--state", required=True)
    n.add_argument("--trace", help="trace covector for wmod-q (default all ones)")
    n.add_argument("--size", type=int, help="set size for pfn")
    n.add_argument("--file", help="declarations file for wmod")
    n.add_argument("--module", help="weight_module name for wmod")

    r = sub.add_parser("represent", help="norms and totalization of ordered vector spaces")
    r.add_argument("file")
    r.add_argument("--vector", action="append", help="p/q coordinates, comma separated")
    r.add_argument("--name", help="only this ovs declaration")

    f = sub.add_parser("functors", help="functor law, faithfulness and separation suites")
    f.add_argument("--suite", choices=("all", "pred", "substate", "separation", "equivalence", "powerset"), default="all")
    return p


COMMANDS = {
    "check": cmd_check,
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "normalize": cmd_normalize,
    "represent": cmd_represent,
    "functors": cmd_functors,
}


def _argv_format(argv: Sequence[str]) -> str:
    for i, a in enumerate(argv):
        if a.startswith("--format="):
            return a.split("=", 1)[1]
        if a == "--format" and i + 1 < len(argv):
            return argv[i + 1]
    return "text"


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out, err = out or sys.stdout, err or sys.stderr
    # --format is accepted anywhere on the line
    fmt = _argv_format(argv)
    argv = [a for i, a in enumerate(argv) if not (a.startswith("--format=") or a == "--format" or (i and argv[i - 1] == "--format"))]
    if fmt not in ("json", "tsv", "text"):
        err.write(f"effectus: error: unknown format {fmt!r}\n")
        return 2
    try:
        args = build_parser().parse_args(argv)
        report, code = COMMANDS[args.command](args)
    except UsageError as e:
        if fmt == "json":
            emit({"ok": False, "error": "usage", "message": str(e)}, fmt, out)
        err.write(f"effectus: error: {e}\n")
        return 2
    except DslError as e:
        if fmt == "json":
            emit({"ok": False, "error": "parse", "diagnostics": [d.to_dict() for d in e.diagnostics]}, fmt, out)
        for d in e.diagnostics:
            err.write(str(d) + "\n")
        return 2
    emit(report, fmt, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
