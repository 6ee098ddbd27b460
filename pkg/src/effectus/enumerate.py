"""Exhaustive generation of small effect algebras and effect monoids, up to isomorphism.

Two generators are provided for each structure kind: a pruned backtracking
search (the one used everywhere) and a naive filter-all-tables generator kept
only for cross-checking at small sizes.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable

from .algebra import (
    FiniteEffectAlgebra,
    automorphisms,
    canonical_form,
    check_effect_algebra_axioms,
    downset,
    table_key,
)
from .monoid import (
    FiniteEffectMonoid,
    check_effect_monoid_axioms,
    geometric_normalizer,
    has_division,
    is_commutative,
    zero_divisors,
)

ALGEBRA_CAP = 6
MONOID_CAP = 5


# ---------------------------------------------------------------- effect algebras


def _assoc_ok(t, n) -> bool:
    """Kleene associativity on every triple whose two sides are already determined."""
    U = _UNKNOWN
    for x in range(n):
        for y in range(n):
            xy = t[x][y]
            if xy is U:
                continue
            for z in range(n):
                yz = t[y][z]
                if yz is U:
                    continue
                left = None if xy is None else t[xy][z]
                right = None if yz is None else t[x][yz]
                if left is U or right is U:
                    continue
                if left != right:
                    return False
    return True


class _Unknown:
    def __repr__(self):
        return "?"


_UNKNOWN = _Unknown()


def _algebra_search(n: int, first_cell_value=_UNKNOWN) -> list[FiniteEffectAlgebra]:
    if n == 1:
        return [FiniteEffectAlgebra.from_table([[0]], 0, 0)]
    top = n - 1
    U = _UNKNOWN
    t = [[U] * n for _ in range(n)]
    for x in range(n):
        t[0][x] = t[x][0] = x
    for x in range(1, n):
        t[top][x] = t[x][top] = None
    middle = list(range(1, top))
    cells = [(a, b) for a in middle for b in middle if a <= b]
    found: dict[tuple, FiniteEffectAlgebra] = {}

    def row_ok(a) -> bool:
        vals = [v for v in t[a] if v is not U and v is not None]
        if len(vals) != len(set(vals)):
            return False
        return vals.count(top) <= 1

    def go(i):
        if i == len(cells):
            table = [list(r) for r in t]
            e = FiniteEffectAlgebra.from_table(table, 0, top)
            if not check_effect_algebra_axioms(e):
                key, perm = canonical_form(e)
                if key not in found:
                    found[key] = _from_key(key, n)
            return
        a, b = cells[i]
        options: Iterable = [None] + [c for c in range(1, n) if c != a and c != b]
        if i == 0 and first_cell_value is not U:
            options = [first_cell_value]
        for c in options:
            t[a][b] = t[b][a] = c
            if row_ok(a) and row_ok(b) and _assoc_ok(t, n):
                go(i + 1)
        t[a][b] = t[b][a] = U

    go(0)
    return [found[k] for k in sorted(found)]


def _from_key(key: tuple, n: int) -> FiniteEffectAlgebra:
    table = [[None if key[a * n + b] == -1 else key[a * n + b] for b in range(n)] for a in range(n)]
    return FiniteEffectAlgebra.from_table(table, 0, n - 1)


def enumerate_effect_algebras(n: int, cap: int = ALGEBRA_CAP, workers: int = 1) -> list[FiniteEffectAlgebra]:
    """All effect algebras with ``n`` elements, one canonical representative per class.

    Representatives have zero ``0`` and top ``n-1`` and are sorted by table key.
    """
    if n < 1:
        raise ValueError("size must be positive")
    if n > cap:
        raise ValueError(f"size {n} exceeds cap {cap}")
    if workers <= 1 or n < 4:
        return _algebra_search(n)
    # split on the value of the first free cell
    options = [None] + [c for c in range(1, n) if c != 1]
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_algebra_search, [n] * len(options), options))
    merged = {}
    for part in parts:
        for e in part:
            merged[table_key(e.sum)] = e
    return [merged[k] for k in sorted(merged)]


def naive_effect_algebras(n: int) -> list[FiniteEffectAlgebra]:
    """Filter every symmetric table with unit row 0; slow, for cross-checks at ``n <= 4``."""
    from .algebra import find_isomorphism

    if n == 1:
        return [FiniteEffectAlgebra.from_table([[0]], 0, 0)]
    rest = list(range(1, n))
    cells = [(a, b) for a in rest for b in rest if a <= b]
    reps: list[FiniteEffectAlgebra] = []
    for values in itertools.product([None, *range(n)], repeat=len(cells)):
        t = [[None] * n for _ in range(n)]
        for x in range(n):
            t[0][x] = t[x][0] = x
        for (a, b), v in zip(cells, values):
            t[a][b] = t[b][a] = v
        for top in rest:
            e = FiniteEffectAlgebra.from_table(t, 0, top)
            if check_effect_algebra_axioms(e):
                continue
            if not any(find_isomorphism(e, r) for r in reps):
                reps.append(e)
    return reps


# ---------------------------------------------------------------- effect monoids


def _monoid_search(e: FiniteEffectAlgebra) -> list[FiniteEffectMonoid]:
    n, z, one = e.size, e.zero, e.top
    U = _UNKNOWN
    p = [[U] * n for _ in range(n)]
    for x in range(n):
        p[z][x] = p[x][z] = z
        p[one][x] = p[x][one] = x
    middle = [x for x in e.elements if x not in (z, one)]
    cells = [(a, b) for a in middle for b in middle]
    down = {x: set(downset(e, x)) for x in e.elements}
    sums = [(a, b, e.add(a, b)) for a in e.elements for b in e.elements if e.add(a, b) is not None]
    raw = []

    def ok() -> bool:
        for a in range(n):
            for b in range(n):
                ab = p[a][b]
                if ab is U:
                    continue
                for c in range(n):
                    bc = p[b][c]
                    if bc is U:
                        continue
                    left, right = p[ab][c], p[a][bc]
                    if left is not U and right is not U and left != right:
                        return False
        for a, b, s in sums:
            for c in range(n):
                ca, cb, cs = p[c][a], p[c][b], p[c][s]
                if U not in (ca, cb, cs) and e.add(ca, cb) != cs:
                    return False
                ac, bc, sc = p[a][c], p[b][c], p[s][c]
                if U not in (ac, bc, sc) and e.add(ac, bc) != sc:
                    return False
        return True

    def go(i):
        if i == len(cells):
            m = FiniteEffectMonoid(e, tuple(tuple(r) for r in p))
            if not check_effect_monoid_axioms(m):
                raw.append(m)
            return
        a, b = cells[i]
        for c in sorted(down[a] & down[b]):
            p[a][b] = c
            if ok():
                go(i + 1)
        p[a][b] = U

    go(0)
    return _dedupe_monoids(e, raw)


def _product_key(m: FiniteEffectMonoid) -> tuple[int, ...]:
    return tuple(c for row in m.product for c in row)


def _relabel_product(m: FiniteEffectMonoid, perm) -> tuple[int, ...]:
    n = m.size
    out = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            out[perm[a]][perm[b]] = perm[m.product[a][b]]
    return tuple(c for row in out for c in row)


def monoid_canonical_key(m: FiniteEffectMonoid, autos=None) -> tuple[int, ...]:
    autos = autos if autos is not None else automorphisms(m.algebra)
    return min(_relabel_product(m, g) for g in autos)


def _dedupe_monoids(e: FiniteEffectAlgebra, ms: list[FiniteEffectMonoid]) -> list[FiniteEffectMonoid]:
    autos = automorphisms(e)
    seen = {}
    for m in ms:
        k = monoid_canonical_key(m, autos)
        if k not in seen:
            n = e.size
            seen[k] = FiniteEffectMonoid(e, tuple(tuple(k[a * n + b] for b in range(n)) for a in range(n)))
    return [seen[k] for k in sorted(seen)]


def enumerate_effect_monoids(e: FiniteEffectAlgebra, cap: int = MONOID_CAP) -> list[FiniteEffectMonoid]:
    """All effect-monoid products on ``e``, one per orbit under automorphisms of ``e``."""
    if e.size > cap:
        raise ValueError(f"size {e.size} exceeds cap {cap}")
    return _monoid_search(e)


def naive_effect_monoids(e: FiniteEffectAlgebra) -> list[FiniteEffectMonoid]:
    """Every total table with the forced unit and zero rows, filtered; small sizes only."""
    n = e.size
    middle = [x for x in e.elements if x not in (e.zero, e.top)]
    cells = [(a, b) for a in middle for b in middle]
    raw = []
    for values in itertools.product(range(n), repeat=len(cells)):
        p = [[0] * n for _ in range(n)]
        for x in range(n):
            p[e.zero][x] = p[x][e.zero] = e.zero
            p[e.top][x] = p[x][e.top] = x
        for (a, b), v in zip(cells, values):
            p[a][b] = v
        m = FiniteEffectMonoid(e, p)
        if not check_effect_monoid_axioms(m):
            raw.append(m)
    return _dedupe_monoids(e, raw)


# ---------------------------------------------------------------- census


@dataclass(frozen=True)
class CensusRow:
    id: str
    size: int
    commutative: bool
    zero_divisor_free: bool
    has_division: bool
    geometric_witness: bool
    idempotent: bool
    chain: bool
    algebra_key: tuple = ()
    product_key: tuple = ()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["algebra_key"] = list(self.algebra_key)
        d["product_key"] = list(self.product_key)
        return d


def _is_chain(e: FiniteEffectAlgebra) -> bool:
    from .algebra import leq

    return all(leq(e, a, b) or leq(e, b, a) for a in e.elements for b in e.elements)


def census_row(m: FiniteEffectMonoid, ident: str) -> CensusRow:
    geo = all(geometric_normalizer(m, s) == m.one for s in m.elements if s != m.one)
    return CensusRow(
        id=ident,
        size=m.size,
        commutative=is_commutative(m),
        zero_divisor_free=zero_divisors(m).empty,
        has_division=has_division(m),
        geometric_witness=geo,
        idempotent=all(m.mul(a, a) == a for a in m.elements),
        chain=_is_chain(m.algebra),
        algebra_key=table_key(m.algebra.sum),
        product_key=_product_key(m),
    )


def _monoids_for(e: FiniteEffectAlgebra) -> list[FiniteEffectMonoid]:
    return enumerate_effect_monoids(e)


def census(n_max: int, workers: int = 1, cap: int = MONOID_CAP) -> list[CensusRow]:
    """One row per effect monoid of size ``<= n_max``, in canonical order.

    Ids are ``M<size>.<algebra #>.<monoid #>``; identical for every worker count.
    """
    if n_max > cap:
        raise ValueError(f"size {n_max} exceeds cap {cap}")
    algebras = [(n, i, e) for n in range(1, n_max + 1) for i, e in enumerate(enumerate_effect_algebras(n))]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_monoids_for, [e for _, _, e in algebras]))
    else:
        results = [_monoids_for(e) for _, _, e in algebras]
    rows = []
    for (n, i, _), ms in zip(algebras, results):
        for j, m in enumerate(ms):
            rows.append(census_row(m, f"M{n}.{i}.{j}"))
    return rows


@dataclass(frozen=True)
class ClassificationReport:
    ok: bool
    failures: tuple[tuple[str, str], ...]
    counts: dict

    def __bool__(self):
        return self.ok


def verify_classification(rows: list[CensusRow]) -> ClassificationReport:
    """Every row commutative; division, zero-divisor freeness and the series witness agree;
    zero-divisor-free rows only at sizes 1 and 2."""
    fails = []
    for r in rows:
        if not r.commutative:
            fails.append((r.id, "non-commutative"))
        if not (r.zero_divisor_free == r.has_division == r.geometric_witness):
            fails.append((r.id, "division / zero-divisor / series disagreement"))
        if r.zero_divisor_free and r.size > 2:
            fails.append((r.id, "zero-divisor-free above size 2"))
    counts = {
        "rows": len(rows),
        "zero_divisor_free": sum(r.zero_divisor_free for r in rows),
        "zero_divisor_free_sizes": sorted({r.size for r in rows if r.zero_divisor_free}),
        "by_size": {n: sum(r.size == n for r in rows) for n in sorted({r.size for r in rows})},
    }
    return ClassificationReport(not fails, tuple(fails), counts)
