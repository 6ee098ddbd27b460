"""Finite partial commutative monoids and effect algebras.

Elements are addressed by index ``0..size-1``.  The partial sum is stored as
a square table whose entries are either an index or ``None`` (undefined).
Nothing here raises on undefinedness: a missing sum is just ``None``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

Table = tuple[tuple[Optional[int], ...], ...]


@dataclass(frozen=True)
class Violation:
    """One failed law, with the element indices that witness it.

    ``axiom`` is a dotted machine-readable id.  Ids starting with
    ``structure.`` describe malformed input rather than a broken law.
    """

    axiom: str
    witness: tuple = ()
    detail: str = ""

    @property
    def structural(self) -> bool:
        return self.axiom.startswith("structure.")

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": _jsonable(self.witness), "detail": self.detail}


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, str)) or x is None:
        return x
    return str(x)


def _freeze(table: Sequence[Sequence[Optional[int]]]) -> Table:
    return tuple(tuple(row) for row in table)


@dataclass(frozen=True)
class FinitePcm:
    size: int
    zero: int
    sum: Table
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "sum", _freeze(self.sum))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    def add(self, a: int, b: int) -> Optional[int]:
        return self.sum[a][b]

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    @property
    def elements(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class FiniteEffectAlgebra:
    pcm: FinitePcm
    top: int

    @classmethod
    def from_table(cls, sum_table, zero: int, top: int, labels=None) -> "FiniteEffectAlgebra":
        return cls(FinitePcm(len(sum_table), zero, _freeze(sum_table), labels), top)

    @property
    def size(self) -> int:
        return self.pcm.size

    @property
    def zero(self) -> int:
        return self.pcm.zero

    @property
    def sum(self) -> Table:
        return self.pcm.sum

    @property
    def labels(self):
        return self.pcm.labels

    @property
    def elements(self) -> range:
        return range(self.pcm.size)

    def add(self, a: int, b: int) -> Optional[int]:
        return self.pcm.sum[a][b]

    def label(self, i: int) -> str:
        return self.pcm.label(i)

    def index(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    # derived structure, valid only on algebras that pass the checkers

    @cached_property
    def _ortho(self) -> tuple[Optional[int], ...]:
        out = []
        for a in self.elements:
            hits = [b for b in self.elements if self.add(a, b) == self.top]
            out.append(hits[0] if len(hits) == 1 else None)
        return tuple(out)

    @cached_property
    def _diff(self) -> dict[tuple[int, int], int]:
        # (a, b) -> c with a + c = b
        d = {}
        for a in self.elements:
            for c in self.elements:
                b = self.add(a, c)
                if b is not None:
                    d.setdefault((a, b), c)
        return d

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "zero": self.zero,
            "top": self.top,
            "sum": sum_triples(self.sum),
            "labels": list(self.labels) if self.labels else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FiniteEffectAlgebra":
        n = d["size"]
        table = [[None] * n for _ in range(n)]
        for a, b, c in d["sum"]:
            table[a][b] = c
            table[b][a] = c
        return cls.from_table(table, d["zero"], d["top"], d.get("labels"))


def sum_triples(table: Table) -> list[list[int]]:
    """Defined entries ``a + b = c`` with ``a <= b``, row-major."""
    return [[a, b, c] for a, row in enumerate(table) for b, c in enumerate(row) if c is not None and a <= b]


# ---------------------------------------------------------------- builders


def chain(n: int) -> FiniteEffectAlgebra:
    """The ``n``-element chain ``0 < 1/(n-1) < ... < 1``, ``i + j`` defined when ``<= n-1``."""
    if n < 1:
        raise ValueError("chain needs at least one element")
    top = n - 1
    table = [[i + j if i + j <= top else None for j in range(n)] for i in range(n)]
    if n == 1:
        labels = ("0",)
    else:
        labels = tuple("0" if i == 0 else "1" if i == top else f"{i}/{top}" for i in range(n))
    return FiniteEffectAlgebra.from_table(table, 0, top, labels)


def two() -> FiniteEffectAlgebra:
    return chain(2)


def trivial() -> FiniteEffectAlgebra:
    return chain(1)


def _subset_label(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1) + "}"


def boolean_algebra(atoms: int) -> FiniteEffectAlgebra:
    """Powerset of ``{1..atoms}``; element ``i`` is the subset with bitmask ``i``.

    Disjoint subsets are summable and sum to their union.
    """
    n = 1 << atoms
    table = [[a | b if a & b == 0 else None for b in range(n)] for a in range(n)]
    return FiniteEffectAlgebra.from_table(table, 0, n - 1, tuple(_subset_label(m) for m in range(n)))


# ---------------------------------------------------------------- checkers


def _structure(size: int, zero: int, table: Table, top: Optional[int] = None) -> list[Violation]:
    out = []
    if size < 1:
        out.append(Violation("structure.size", (size,), "carrier must be nonempty"))
        return out
    if len(table) != size or any(len(row) != size for row in table):
        out.append(Violation("structure.shape", (size,), "sum table is not size x size"))
        return out
    for idx, name in ((zero, "zero"), (top, "top")):
        if idx is not None and not (isinstance(idx, int) and 0 <= idx < size):
            out.append(Violation(f"structure.{name}", (idx,), f"{name} index out of range"))
    for a, row in enumerate(table):
        for b, c in enumerate(row):
            if c is not None and not (isinstance(c, int) and 0 <= c < size):
                out.append(Violation("structure.entry", (a, b, c), "sum entry out of range"))
    return out


def check_pcm_axioms(p: FinitePcm | FiniteEffectAlgebra) -> list[Violation]:
    """All commutativity, unit and Kleene-associativity failures of ``p``.

    Structural problems (bad shape, out-of-range indices) are reported alone,
    since the laws cannot be evaluated on a malformed table.
    """
    pcm = p.pcm if isinstance(p, FiniteEffectAlgebra) else p
    top = p.top if isinstance(p, FiniteEffectAlgebra) else None
    bad = _structure(pcm.size, pcm.zero, pcm.sum, top)
    if bad:
        return bad
    s, n, z = pcm.sum, pcm.size, pcm.zero
    out = []
    for x in range(n):
        if s[z][x] != x:
            out.append(Violation("pcm.unit", (x,), f"0 + {x} = {s[z][x]}"))
    for x in range(n):
        for y in range(x + 1, n):
            if s[x][y] != s[y][x]:
                out.append(Violation("pcm.commutativity", (x, y)))
    for x in range(n):
        for y in range(n):
            xy = s[x][y]
            for w in range(n):
                yw = s[y][w]
                left = None if xy is None else s[xy][w]
                right = None if yw is None else s[x][yw]
                if left != right:
                    out.append(Violation("pcm.associativity", (x, y, w), f"{left} vs {right}"))
    return out


def check_effect_algebra_axioms(e: FiniteEffectAlgebra) -> list[Violation]:
    """PCM laws plus unique orthosupplements, positivity and antisymmetry of ``<=``."""
    out = check_pcm_axioms(e)
    if any(v.structural for v in out):
        return out
    s, n, z, top = e.sum, e.size, e.zero, e.top
    for a in range(n):
        hits = [b for b in range(n) if s[a][b] == top]
        if len(hits) == 0:
            out.append(Violation("ea.orthosupplement.missing", (a,)))
        elif len(hits) > 1:
            out.append(Violation("ea.orthosupplement.ambiguous", (a, *hits)))
        if a != z and s[a][top] is not None:
            out.append(Violation("ea.positivity", (a,), f"{a} + top is defined"))
    below = _leq_matrix(s, n)
    for a in range(n):
        for b in range(a + 1, n):
            if below[a][b] and below[b][a]:
                out.append(Violation("ea.antisymmetry", (a, b)))
    return out


def _leq_matrix(s: Table, n: int) -> list[list[bool]]:
    m = [[False] * n for _ in range(n)]
    for a in range(n):
        for c in range(n):
            b = s[a][c]
            if b is not None:
                m[a][b] = True
    return m


# ---------------------------------------------------------------- operations


def orthosupplement(e: FiniteEffectAlgebra, x: int) -> int:
    r = e._ortho[x]
    if r is None:
        raise ValueError(f"element {x} has no unique orthosupplement")
    return r


def leq(e: FiniteEffectAlgebra, a: int, b: int) -> bool:
    return (a, b) in e._diff


def partial_diff(e: FiniteEffectAlgebra, a: int, b: int) -> Optional[int]:
    """The ``c`` with ``a + c = b``, if ``a <= b``."""
    return e._diff.get((a, b))


def downset(e: FiniteEffectAlgebra, b: int) -> list[int]:
    return [a for a in e.elements if leq(e, a, b)]


def summable(e: FiniteEffectAlgebra, a: int, b: int) -> bool:
    return e.add(a, b) is not None


def fold_sum(e: FiniteEffectAlgebra | FinitePcm, xs: Iterable[int]) -> Optional[int]:
    acc = e.zero
    for x in xs:
        acc = e.add(acc, x)
        if acc is None:
            return None
    return acc


def supremum(e: FiniteEffectAlgebra, xs: Iterable[int]) -> Optional[int]:
    """Least upper bound of ``xs`` in the induced order, if it exists."""
    xs = list(xs)
    ubs = [u for u in e.elements if all(leq(e, x, u) for x in xs)]
    least = [u for u in ubs if all(leq(e, u, v) for v in ubs)]
    return least[0] if least else None


# ---------------------------------------------------------------- countable sums


@dataclass(frozen=True)
class CountableFamily:
    """Finite-support stand-in for a countable family; omitted entries are zero."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        entries = tuple((int(x), int(m)) for x, m in self.entries)
        for _, m in entries:
            if m < 1:
                raise ValueError("multiplicities must be >= 1")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *xs: int) -> "CountableFamily":
        return cls(tuple((x, 1) for x in xs))

    def expand(self) -> list[int]:
        return [x for x, m in self.entries for _ in range(m)]


def sigma_sum(e: FiniteEffectAlgebra, fam: CountableFamily) -> Optional[int]:
    """Canonical countable sum: the join of all finite partial sums.

    For finite support the join is attained by the full finite sum, and it
    exists exactly when every finite subfamily is summable (downward closure).
    """
    return fold_sum(e, fam.expand())


def max_multiplicity(e: FiniteEffectAlgebra, x: int) -> Optional[int]:
    """Largest ``k`` with ``k`` copies of ``x`` summable; ``None`` for ``x = 0``.

    Bounded by ``size - 1`` for nonzero ``x``: the partial sums form a strictly
    increasing chain.  So no family repeating a nonzero element infinitely
    often is summable, and finite support loses nothing.
    """
    if x == e.zero:
        return None
    acc, k = e.zero, 0
    while True:
        nxt = e.add(acc, x)
        if nxt is None:
            return k
        acc, k = nxt, k + 1
        if k > e.size:
            raise AssertionError("unbounded repetition in a finite effect algebra")


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[head], *part]
        for i in range(len(part)):
            yield part[:i] + [[head, *part[i]]] + part[i + 1:]


def check_sigma_pam_axioms(
    e: FiniteEffectAlgebra,
    sample_families: Optional[Iterable[CountableFamily]] = None,
    sample_partitions: Optional[dict] = None,
) -> list[Violation]:
    """Partition-associativity, unary-sum and limit axioms for :func:`sigma_sum`.

    ``sample_partitions`` maps a family to a list of partitions of its expanded
    positions; a block may be empty, standing for an infinite block of zeros.
    By default every family of up to three nonzero entries is tried against
    every set partition of its positions.
    """
    out = []
    for x in e.elements:
        if sigma_sum(e, CountableFamily.of(x)) != x:
            out.append(Violation("sigma.unary", (x,)))
    if sample_families is None:
        nonzero = [x for x in e.elements if x != e.zero]
        sample_families = [CountableFamily.of(*c) for k in range(4) for c in itertools.combinations_with_replacement(nonzero, k)]
    for fam in sample_families:
        xs = fam.expand()
        total = sigma_sum(e, fam)
        parts = (sample_partitions or {}).get(fam)
        if parts is None:
            parts = list(set_partitions(range(len(xs))))
        for part in parts:
            block_sums = [fold_sum(e, (xs[i] for i in block)) for block in part]
            if any(b is None for b in block_sums):
                grouped = None
            else:
                grouped = fold_sum(e, block_sums)
            if grouped != total:
                out.append(Violation("sigma.partition_associativity", (tuple(xs), tuple(map(tuple, part))), f"{total} vs {grouped}"))
        finite_ok = all(
            fold_sum(e, sub) is not None for k in range(len(xs) + 1) for sub in itertools.combinations(xs, k)
        )
        if finite_ok and total is None:
            out.append(Violation("sigma.limit", (tuple(xs),)))
        if len(xs) == 2 and total != e.add(xs[0], xs[1]):
            out.append(Violation("sigma.extends_pcm", tuple(xs)))
    return out


# ---------------------------------------------------------------- additive maps


@dataclass(frozen=True)
class AdditiveMap:
    source: FiniteEffectAlgebra
    target: FiniteEffectAlgebra
    table: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))

    def __call__(self, x: int) -> int:
        return self.table[x]


def check_additive(f: AdditiveMap) -> list[Violation]:
    src, tgt, t = f.source, f.target, f.table
    if len(t) != src.size or any(not 0 <= y < tgt.size for y in t):
        return [Violation("structure.map", tuple(t), "table does not map source into target")]
    out = []
    if t[src.zero] != tgt.zero:
        out.append(Violation("additive.zero", (src.zero,)))
    for x in src.elements:
        for y in src.elements:
            xy = src.add(x, y)
            if xy is not None and tgt.add(t[x], t[y]) != t[xy]:
                out.append(Violation("additive.sum", (x, y)))
    return out


def increasing_chains(e: FiniteEffectAlgebra, limit: int = 100_000) -> Iterator[tuple[int, ...]]:
    """Every strictly increasing chain ``a0 < a1 < ...`` (stabilizing sequences up to repeats)."""
    count = 0
    stack: list[tuple[int, ...]] = [(a,) for a in e.elements]
    while stack:
        c = stack.pop()
        count += 1
        if count > limit:
            raise RuntimeError("too many chains")
        yield c
        last = c[-1]
        for b in e.elements:
            if b != last and leq(e, last, b):
                stack.append(c + (b,))


def check_omega_continuous(f: AdditiveMap) -> list[Violation]:
    """``f`` preserves the supremum of every increasing (hence stabilizing) chain."""
    out = []
    for c in increasing_chains(f.source):
        sup_src = supremum(f.source, c)
        sup_img = supremum(f.target, (f(x) for x in c))
        if sup_src is None or sup_img is None or f(sup_src) != sup_img:
            out.append(Violation("omega_continuity", c))
    return out


def additive_maps(src: FiniteEffectAlgebra, tgt: FiniteEffectAlgebra) -> list[AdditiveMap]:
    """All additive maps, by backtracking in ascending order of downset size."""
    order = sorted(src.elements, key=lambda x: (len(downset(src, x)), x))
    pos = {x: i for i, x in enumerate(order)}
    table: list[Optional[int]] = [None] * src.size
    found = []

    # every defined sum, filed under whichever of its three elements is assigned last
    checks: dict[int, list[tuple[int, int, int]]] = {x: [] for x in src.elements}
    for y in src.elements:
        for w in src.elements:
            s = src.add(y, w)
            if s is not None:
                checks[max((y, w, s), key=pos.__getitem__)].append((y, w, s))

    def consistent(x: int) -> bool:
        return all(tgt.add(table[y], table[w]) == table[s] for y, w, s in checks[x])

    def go(i: int):
        if i == len(order):
            found.append(AdditiveMap(src, tgt, tuple(table)))
            return
        x = order[i]
        cands = [tgt.zero] if x == src.zero else tgt.elements
        for v in cands:
            table[x] = v
            if consistent(x):
                go(i + 1)
        table[x] = None

    go(0)
    return found


# ---------------------------------------------------------------- isomorphism


def relabel(e: FiniteEffectAlgebra, perm: Sequence[int]) -> FiniteEffectAlgebra:
    """Image of ``e`` under the bijection ``x -> perm[x]``."""
    n = e.size
    table = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            c = e.add(a, b)
            table[perm[a]][perm[b]] = None if c is None else perm[c]
    labels = None
    if e.labels:
        inv = [0] * n
        for x, y in enumerate(perm):
            inv[y] = x
        labels = tuple(e.labels[inv[y]] for y in range(n))
    return FiniteEffectAlgebra.from_table(table, perm[e.zero], perm[e.top], labels)


def table_key(table: Table) -> tuple[int, ...]:
    return tuple(-1 if c is None else c for row in table for c in row)


def _normalizing_perms(e: FiniteEffectAlgebra) -> Iterator[tuple[int, ...]]:
    """Bijections sending zero to 0 and top to size-1."""
    n = e.size
    if n == 1:
        yield (0,)
        return
    middle = [x for x in e.elements if x not in (e.zero, e.top)]
    for img in itertools.permutations(range(1, n - 1)):
        perm = [0] * n
        perm[e.zero] = 0
        perm[e.top] = n - 1
        for x, y in zip(middle, img):
            perm[x] = y
        yield tuple(perm)


def canonical_form(e: FiniteEffectAlgebra) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Lexicographically least table key over relabelings, with a bijection attaining it."""
    best = None
    for perm in _normalizing_perms(e):
        key = table_key(relabel(e, perm).sum)
        if best is None or key < best[0]:
            best = (key, perm)
    return best


def find_isomorphism(e: FiniteEffectAlgebra, d: FiniteEffectAlgebra) -> Optional[tuple[int, ...]]:
    if e.size != d.size:
        return None
    for perm in itertools.permutations(range(e.size)):
        if is_isomorphism(e, d, perm):
            return perm
    return None


def is_isomorphism(e: FiniteEffectAlgebra, d: FiniteEffectAlgebra, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(d.size)) or perm[e.zero] != d.zero or perm[e.top] != d.top:
        return False
    for a in e.elements:
        for b in e.elements:
            c = e.add(a, b)
            if d.add(perm[a], perm[b]) != (None if c is None else perm[c]):
                return False
    return True


def automorphisms(e: FiniteEffectAlgebra) -> list[tuple[int, ...]]:
    return [p for p in _normalizing_perms_fixed(e) if is_isomorphism(e, e, p)]


def _normalizing_perms_fixed(e: FiniteEffectAlgebra) -> Iterator[tuple[int, ...]]:
    middle = [x for x in e.elements if x not in (e.zero, e.top)]
    for img in itertools.permutations(middle):
        perm = list(range(e.size))
        for x, y in zip(middle, img):
            perm[x] = y
        yield tuple(perm)


def product(*algebras: FiniteEffectAlgebra) -> tuple[FiniteEffectAlgebra, list[tuple[int, ...]]]:
    """Cartesian product with pointwise sum; returns the algebra and its index -> tuple list."""
    tuples = list(itertools.product(*(a.elements for a in algebras)))
    index = {t: i for i, t in enumerate(tuples)}
    n = len(tuples)
    table = [[None] * n for _ in range(n)]
    for i, s in enumerate(tuples):
        for j, t in enumerate(tuples):
            parts = [a.add(x, y) for a, x, y in zip(algebras, s, t)]
            if all(p is not None for p in parts):
                table[i][j] = index[tuple(parts)]
    zero = index[tuple(a.zero for a in algebras)]
    top = index[tuple(a.top for a in algebras)]
    labels = tuple("(" + ",".join(a.label(x) for a, x in zip(algebras, t)) + ")" for t in tuples)
    return FiniteEffectAlgebra.from_table(table, zero, top, labels), tuples
