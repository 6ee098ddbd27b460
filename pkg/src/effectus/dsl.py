"""A small text format for declaring structures, with located diagnostics.

A document is a sequence of blocks::

    effect_algebra Two { elements 0 1; top 1; }

    effect_algebra Chain3 {
      elements 0 h 1
      top 1
      h + h = 1
    }

Statements end with ``;`` or a newline.  Sums and products that are not
listed are undefined, except those forced by the zero and the unit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Optional

from .algebra import FiniteEffectAlgebra
from .category import PartialFunction
from .cone import Cone
from .modules import FiniteEffectModule, FiniteWeightModule
from .monoid import FiniteEffectMonoid, format_rational, parse_rational

MAX_ELEMENTS = 64
MAX_DIMENSION = 8

KINDS = ("effect_algebra", "effect_monoid", "module", "weight_module", "pfn_object", "pfn_morphism", "ovs")

# keywords taking a list of words, per block kind
_WORD_KEYWORDS = {
    "effect_algebra": {"elements", "zero", "top"},
    "effect_monoid": {"elements", "zero", "top", "algebra"},
    "module": {"algebra", "scalars"},
    "weight_module": {"elements", "zero", "scalars", "weight"},
    "pfn_object": {"size"},
    "pfn_morphism": {"source", "target"},
    "ovs": {"dimension", "generator", "unit", "trace"},
}
_OPERATORS = {
    "effect_algebra": {"+"},
    "effect_monoid": {"+", "*"},
    "module": {"*"},
    "weight_module": {"+", "*"},
    "pfn_object": set(),
    "pfn_morphism": {"->"},
    "ovs": set(),
}

_TOKEN = re.compile(r"(?P<nl>\n)|(?P<ws>[ \t\r\f\v]+)|(?P<comment>#[^\n]*)|(?P<arrow>->)|(?P<punct>[{};+*=])|(?P<word>-?[A-Za-z0-9_/'.]+)")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_LABEL = re.compile(r"[A-Za-z0-9_/']+\Z")


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int
    source: str = "<input>"

    def __str__(self):
        return f"{self.source}:{self.line}:{self.column}: {self.severity}: {self.message}"

    def to_dict(self) -> dict:
        return {"severity": self.severity, "message": self.message, "line": self.line, "column": self.column, "source": self.source}


class DslError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class Statement:
    """``keyword args...`` or an entry ``a op b = c`` (stored with ``keyword = op``)."""

    keyword: str
    args: tuple[str, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Declaration:
    kind: str
    name: str
    statements: tuple[Statement, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass
class DslDocument:
    declarations: list[Declaration]
    objects: dict[str, Any] = field(default_factory=dict, compare=False)
    source: str = field(default="<input>", compare=False)

    def __getitem__(self, name):
        return self.objects[name]

    def declaration(self, name) -> Declaration:
        for d in self.declarations:
            if d.name == name:
                return d
        raise KeyError(name)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str, source: str, diags: list[Diagnostic]) -> list[_Tok]:
    toks = []
    pos, line, col0 = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - col0 + 1
        if m is None:
            diags.append(Diagnostic("error", f"unexpected character {text[pos]!r}", line, col, source))
            pos += 1
            continue
        kind = m.lastgroup
        if kind == "nl":
            toks.append(_Tok("end", "\n", line, col))
            line, col0 = line + 1, m.end()
        elif kind in ("arrow", "punct", "word"):
            t = m.group()
            toks.append(_Tok("end" if t == ";" else kind, t, line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, len(text) - col0 + 1))
    return toks


def _parse_syntax(toks: list[_Tok], source: str, diags: list[Diagnostic]) -> list[Declaration]:
    decls = []
    i = 0

    def err(t: _Tok, msg):
        diags.append(Diagnostic("error", msg, t.line, t.column, source))

    def skip_block(j):
        while toks[j].kind != "eof" and toks[j].text != "}":
            j += 1
        return j + 1 if toks[j].kind != "eof" else j

    while toks[i].kind != "eof":
        t = toks[i]
        if t.kind == "end":
            i += 1
            continue
        if t.kind != "word" or t.text not in KINDS:
            err(t, f"unknown keyword {t.text!r}; expected one of {', '.join(KINDS)}")
            i = skip_block(i)
            continue
        name_tok = toks[i + 1]
        if name_tok.kind != "word" or not _IDENT.match(name_tok.text):
            err(name_tok, f"expected a name after {t.text!r}")
            i = skip_block(i)
            continue
        brace = toks[i + 2]
        if brace.text != "{":
            err(brace, "expected '{'")
            i = skip_block(i)
            continue
        i += 3
        stmts = []
        closed = False
        while toks[i].kind != "eof":
            if toks[i].text == "}":
                closed = True
                i += 1
                break
            if toks[i].kind == "end":
                i += 1
                continue
            j = i
            while toks[j].kind not in ("end", "eof") and toks[j].text != "}":
                j += 1
            st = _statement(t.text, toks[i:j], source, diags)
            if st is not None:
                stmts.append(st)
            i = j
        if not closed:
            err(toks[i], f"unterminated block {name_tok.text!r}")
        decls.append(Declaration(t.text, name_tok.text, tuple(stmts), t.line, t.column))
    return decls


def _statement(kind: str, ts: list[_Tok], source: str, diags: list[Diagnostic]) -> Optional[Statement]:
    head = ts[0]

    def err(t, msg):
        diags.append(Diagnostic("error", msg, t.line, t.column, source))
        return None

    if len(ts) >= 2 and ts[1].kind in ("punct", "arrow") and ts[1].text in ("+", "*", "->"):
        op = ts[1].text
        if op not in _OPERATORS[kind]:
            return err(ts[1], f"operator {op!r} is not allowed in {kind}")
        if op == "->":
            if len(ts) != 3 or ts[2].kind != "word":
                return err(head, "expected 'x -> y'")
            return Statement(op, (head.text, ts[2].text), head.line, head.column)
        if len(ts) != 5 or ts[2].kind != "word" or ts[3].text != "=" or ts[4].kind != "word" or head.kind != "word":
            return err(head, f"expected 'a {op} b = c'")
        return Statement(op, (head.text, ts[2].text, ts[4].text), head.line, head.column)
    if head.kind != "word" or head.text not in _WORD_KEYWORDS[kind]:
        return err(head, f"unknown keyword {head.text!r} in {kind}")
    if head.text == "weight":
        if len(ts) != 4 or ts[1].kind != "word" or ts[2].text != "=" or ts[3].kind != "word":
            return err(head, "expected 'weight x = r'")
        return Statement("weight", (ts[1].text, ts[3].text), head.line, head.column)
    for t in ts[1:]:
        if t.kind != "word":
            return err(t, f"unexpected {t.text!r}")
    return Statement(head.text, tuple(t.text for t in ts[1:]), head.line, head.column)


# ---------------------------------------------------------------- semantic pass


class _Builder:
    def __init__(self, source: str, diags: list[Diagnostic]):
        self.source = source
        self.diags = diags
        self.objects: dict[str, Any] = {}
        self.kinds: dict[str, str] = {}

    def err(self, where, msg):
        self.diags.append(Diagnostic("error", msg, where.line, where.column, self.source))

    def build(self, d: Declaration):
        if d.name in self.objects or d.name in self.kinds:
            self.err(d, f"duplicate declaration {d.name!r}")
            return
        n_before = len(self.diags)
        try:
            obj = getattr(self, "_" + d.kind)(d)
        except ValueError as e:  # constructor rejected the data
            self.err(d, str(e))
            obj = None
        if obj is not None and len(self.diags) == n_before:
            self.objects[d.name] = obj
            self.kinds[d.name] = d.kind

    # helpers

    def _single(self, d: Declaration, kw: str, required=True):
        found = [s for s in d.statements if s.keyword == kw]
        if len(found) > 1:
            self.err(found[1], f"{kw!r} given more than once")
        if not found:
            if required:
                self.err(d, f"missing {kw!r} in {d.name}")
            return None
        s = found[0]
        if len(s.args) != 1:
            self.err(s, f"{kw!r} takes exactly one argument")
            return None
        return s

    def _ref(self, d, kw, kinds):
        s = self._single(d, kw)
        if s is None:
            return None
        name = s.args[0]
        if name not in self.objects:
            self.err(s, f"dangling reference {name!r}")
            return None
        if self.kinds[name] not in kinds:
            self.err(s, f"{name!r} is a {self.kinds[name]}, expected {' or '.join(kinds)}")
            return None
        return self.objects[name]

    def _labels(self, d) -> Optional[dict[str, int]]:
        found = [s for s in d.statements if s.keyword == "elements"]
        if not found:
            self.err(d, f"missing 'elements' in {d.name}")
            return None
        if len(found) > 1:
            self.err(found[1], "'elements' given more than once")
        s = found[0]
        idx: dict[str, int] = {}
        for a in s.args:
            if not _LABEL.match(a):
                self.err(s, f"bad label {a!r}")
            elif a in idx:
                self.err(s, f"duplicate label {a!r}")
            else:
                idx[a] = len(idx)
        if not idx:
            self.err(s, "'elements' needs at least one label")
            return None
        if len(idx) > MAX_ELEMENTS:
            self.err(s, f"at most {MAX_ELEMENTS} elements are supported")
            return None
        return idx

    def _label(self, s, idx, a):
        if a not in idx:
            self.err(s, f"dangling reference {a!r}")
            return None
        return idx[a]

    def _sum_table(self, d, idx, zero):
        n = len(idx)
        table = [[None] * n for _ in range(n)]
        for x in range(n):
            table[zero][x] = table[x][zero] = x
        for s in d.statements:
            if s.keyword != "+":
                continue
            a, b, c = (self._label(s, idx, t) for t in s.args)
            if None in (a, b, c):
                continue
            for x, y in ((a, b), (b, a)):
                if table[x][y] is not None and table[x][y] != c:
                    self.err(s, f"conflicting sum for {s.args[0]} + {s.args[1]}")
                table[x][y] = c
        return table

    def _algebra_from(self, d) -> Optional[FiniteEffectAlgebra]:
        idx = self._labels(d)
        if idx is None:
            return None
        labels = list(idx)
        zs = self._single(d, "zero", required=False)
        zero = 0 if zs is None else self._label(zs, idx, zs.args[0])
        ts = self._single(d, "top")
        top = None if ts is None else self._label(ts, idx, ts.args[0])
        if zero is None or top is None:
            return None
        table = self._sum_table(d, idx, zero)
        return FiniteEffectAlgebra.from_table(table, zero, top, labels)

    # kinds

    def _effect_algebra(self, d):
        return self._algebra_from(d)

    def _effect_monoid(self, d):
        if any(s.keyword == "algebra" for s in d.statements):
            alg = self._ref(d, "algebra", ("effect_algebra",))
            for s in d.statements:
                if s.keyword in ("elements", "zero", "top", "+"):
                    self.err(s, f"{s.keyword!r} conflicts with 'algebra'")
        else:
            alg = self._algebra_from(d)
        if alg is None:
            return None
        idx = {alg.label(i): i for i in alg.elements}
        n = alg.size
        prod = [[None] * n for _ in range(n)]
        for x in range(n):
            prod[alg.zero][x] = prod[x][alg.zero] = alg.zero
            prod[alg.top][x] = prod[x][alg.top] = x
        for s in d.statements:
            if s.keyword != "*":
                continue
            a, b, c = (self._label(s, idx, t) for t in s.args)
            if None in (a, b, c):
                continue
            if prod[a][b] is not None and prod[a][b] != c:
                self.err(s, f"conflicting product for {s.args[0]} * {s.args[1]}")
            prod[a][b] = c
        missing = [(a, b) for a in range(n) for b in range(n) if prod[a][b] is None]
        if missing:
            a, b = missing[0]
            self.err(d, f"product {alg.label(a)} * {alg.label(b)} is not given")
            return None
        return FiniteEffectMonoid(alg, tuple(tuple(r) for r in prod))

    def _module(self, d):
        alg = self._ref(d, "algebra", ("effect_algebra",))
        m = self._ref(d, "scalars", ("effect_monoid",))
        if alg is None or m is None:
            return None
        aidx = {alg.label(i): i for i in alg.elements}
        sidx = {m.algebra.label(i): i for i in m.elements}
        act = [[None] * alg.size for _ in m.elements]
        for x in alg.elements:
            act[m.zero][x] = alg.zero
            act[m.one][x] = x
        for r in m.elements:
            act[r][alg.zero] = alg.zero
        for s in d.statements:
            if s.keyword != "*":
                continue
            r = self._label(s, sidx, s.args[0])
            a = self._label(s, aidx, s.args[1])
            b = self._label(s, aidx, s.args[2])
            if None in (r, a, b):
                continue
            if act[r][a] is not None and act[r][a] != b:
                self.err(s, f"conflicting action for {s.args[0]} * {s.args[1]}")
            act[r][a] = b
        for r in m.elements:
            for a in alg.elements:
                if act[r][a] is None:
                    self.err(d, f"action {m.algebra.label(r)} * {alg.label(a)} is not given")
                    return None
        return FiniteEffectModule(alg, m, tuple(tuple(r) for r in act))

    def _weight_module(self, d):
        m = self._ref(d, "scalars", ("effect_monoid",))
        idx = self._labels(d)
        if m is None or idx is None:
            return None
        zs = self._single(d, "zero", required=False)
        zero = 0 if zs is None else self._label(zs, idx, zs.args[0])
        if zero is None:
            return None
        n = len(idx)
        table = self._sum_table(d, idx, zero)
        sidx = {m.algebra.label(i): i for i in m.elements}
        act = [[None] * n for _ in m.elements]
        for x in range(n):
            act[m.zero][x] = zero
            act[m.one][x] = x
        for r in m.elements:
            act[r][zero] = zero
        weights: list[Optional[int]] = [None] * n
        weights[zero] = m.zero
        for s in d.statements:
            if s.keyword == "*":
                r = self._label(s, sidx, s.args[0])
                a = self._label(s, idx, s.args[1])
                b = self._label(s, idx, s.args[2])
                if None not in (r, a, b):
                    if act[r][a] is not None and act[r][a] != b:
                        self.err(s, f"conflicting action for {s.args[0]} * {s.args[1]}")
                    act[r][a] = b
            elif s.keyword == "weight":
                a = self._label(s, idx, s.args[0])
                r = self._label(s, sidx, s.args[1])
                if None not in (a, r):
                    if weights[a] is not None and weights[a] != r:
                        self.err(s, f"conflicting weight for {s.args[0]}")
                    weights[a] = r
        labels = list(idx)
        for r in m.elements:
            for a in range(n):
                if act[r][a] is None:
                    self.err(d, f"action {m.algebra.label(r)} * {labels[a]} is not given")
                    return None
        if None in weights:
            self.err(d, f"weight of {labels[weights.index(None)]} is not given")
            return None
        return FiniteWeightModule(n, zero, table, act, weights, m, labels)

    def _nat(self, s):
        a = s.args[0]
        if not a.isdigit():
            self.err(s, f"expected a natural number, got {a!r}")
            return None
        return int(a)

    def _pfn_object(self, d):
        s = self._single(d, "size")
        return None if s is None else self._nat(s)

    def _pfn_morphism(self, d):
        src = self._ref(d, "source", ("pfn_object",))
        tgt = self._ref(d, "target", ("pfn_object",))
        if src is None or tgt is None:
            return None
        vals: list[Optional[int]] = [None] * src
        for s in d.statements:
            if s.keyword != "->":
                continue
            x, y = s.args
            if not (x.isdigit() and int(x) < src):
                self.err(s, f"{x!r} is not an element of the source")
                continue
            if not (y.isdigit() and int(y) < tgt):
                self.err(s, f"{y!r} is not an element of the target")
                continue
            if vals[int(x)] is not None and vals[int(x)] != int(y):
                self.err(s, f"{x} is mapped twice")
            vals[int(x)] = int(y)
        return PartialFunction(src, tgt, tuple(vals))

    def _rationals(self, s):
        out = []
        for a in s.args:
            try:
                out.append(parse_rational(a))
            except ValueError:
                self.err(s, f"malformed rational {a!r}")
                return None
        return tuple(out)

    def _ovs(self, d):
        from .ovs import RationalOVS

        ds = self._single(d, "dimension")
        n = None if ds is None else self._nat(ds)
        if n is None:
            return None
        if not 1 <= n <= MAX_DIMENSION:
            self.err(ds, f"dimension must be between 1 and {MAX_DIMENSION}")
            return None
        gens = []
        unit = trace = None
        for s in d.statements:
            if s.keyword in ("generator", "unit", "trace"):
                v = self._rationals(s)
                if v is None:
                    continue
                if len(v) != n:
                    self.err(s, f"expected {n} coordinates, got {len(v)}")
                    continue
                if s.keyword == "generator":
                    gens.append(v)
                elif s.keyword == "unit":
                    unit = v
                else:
                    trace = v
        cone = Cone(n, tuple(gens)) if gens else Cone(n)
        return RationalOVS(cone, unit, trace)


def parse(text: str, source: str = "<input>") -> DslDocument:
    """Parse and resolve a document; raises :class:`DslError` carrying every diagnostic."""
    diags: list[Diagnostic] = []
    if not isinstance(text, str):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DslError([Diagnostic("error", f"input is not UTF-8: {e.reason}", 1, 1, source)])
    toks = _tokenize(text, source, diags)
    decls = _parse_syntax(toks, source, diags)
    b = _Builder(source, diags)
    if not diags:
        for d in decls:
            b.build(d)
    if diags:
        raise DslError(diags)
    return DslDocument(decls, b.objects, source)


def format_document(doc: DslDocument) -> str:
    """Canonical text; ``parse(format_document(doc))`` has the same declarations."""
    out = []
    for d in doc.declarations:
        out.append(f"{d.kind} {d.name} {{")
        for s in d.statements:
            if s.keyword in ("+", "*"):
                out.append(f"  {s.args[0]} {s.keyword} {s.args[1]} = {s.args[2]};")
            elif s.keyword == "->":
                out.append(f"  {s.args[0]} -> {s.args[1]};")
            elif s.keyword == "weight":
                out.append(f"  weight {s.args[0]} = {s.args[1]};")
            else:
                out.append("  " + " ".join((s.keyword,) + s.args) + ";")
        out.append("}")
        out.append("")
    return "\n".join(out)


# ---------------------------------------------------------------- printing built structures


def algebra_declaration(e: FiniteEffectAlgebra, name: str) -> Declaration:
    """The declaration that rebuilds ``e`` (labels default to indices)."""
    labels = [e.label(i) for i in e.elements]
    if not all(_LABEL.match(a) for a in labels) or len(set(labels)) != len(labels):
        labels = [f"e{i}" for i in e.elements]
    stmts = [Statement("elements", tuple(labels)), Statement("zero", (labels[e.zero],)), Statement("top", (labels[e.top],))]
    for a in e.elements:
        for b in e.elements:
            c = e.add(a, b)
            if a <= b and c is not None and e.zero not in (a, b):
                stmts.append(Statement("+", (labels[a], labels[b], labels[c])))
    return Declaration("effect_algebra", name, tuple(stmts))


def monoid_declaration(m: FiniteEffectMonoid, name: str) -> Declaration:
    alg = algebra_declaration(m.algebra, name)
    lab = alg.statements[0].args.__getitem__
    stmts = list(alg.statements)
    for a in m.elements:
        for b in m.elements:
            if {a, b} & {m.zero, m.one}:
                continue
            stmts.append(Statement("*", (lab(a), lab(b), lab(m.mul(a, b)))))
    return Declaration("effect_monoid", name, tuple(stmts))


def ovs_declaration(v, name: str) -> Declaration:
    stmts = [Statement("dimension", (str(v.dimension),))]
    if not v.cone.coordinatewise:
        stmts += [Statement("generator", tuple(format_rational(x) for x in g)) for g in v.cone.generators]
    if v.unit is not None:
        stmts.append(Statement("unit", tuple(format_rational(x) for x in v.unit)))
    if v.trace is not None:
        stmts.append(Statement("trace", tuple(format_rational(x) for x in v.trace)))
    return Declaration("ovs", name, tuple(stmts))
