"""Effect monoids: finite product tables and the exact rational unit interval."""
from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

from .algebra import (
    FiniteEffectAlgebra,
    Violation,
    boolean_algebra,
    check_effect_algebra_axioms,
    chain,
    fold_sum,
    leq as ea_leq,
    orthosupplement as ea_ortho,
    partial_diff,
    trivial,
)


@dataclass(frozen=True)
class Division:
    """Outcome of dividing ``s`` by ``t``: ``unique``, ``none`` or ``ambiguous``."""

    status: str
    value: Any = None
    witnesses: tuple = ()

    @property
    def ok(self) -> bool:
        return self.status == "unique"


class ScalarSystem(ABC):
    """Common interface for scalar monoids, finite or not."""

    finite: bool = False

    @property
    @abstractmethod
    def zero(self): ...

    @property
    @abstractmethod
    def one(self): ...

    @abstractmethod
    def add(self, a, b):
        """Partial sum, ``None`` when undefined."""

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def leq(self, a, b) -> bool: ...

    @abstractmethod
    def ominus(self, b, a):
        """The ``c`` with ``a + c = b``, or ``None``."""

    def orthosupplement(self, a):
        return self.ominus(self.one, a)

    @abstractmethod
    def divide(self, s, t) -> Division: ...

    def sum(self, family: Iterable):
        acc = self.zero
        for x in family:
            acc = self.add(acc, x)
            if acc is None:
                return None
        return acc

    def is_summable(self, family: Iterable) -> bool:
        return self.sum(family) is not None

    def sample(self) -> list:
        return list(self.elements)

    @property
    def elements(self):
        raise TypeError("infinite scalar system has no element list")

    def format(self, a) -> str:
        return str(a)

    def parse(self, s: str):
        raise NotImplementedError


# ---------------------------------------------------------------- finite


@dataclass(frozen=True)
class FiniteEffectMonoid(ScalarSystem):
    algebra: FiniteEffectAlgebra
    product: tuple[tuple[int, ...], ...]

    finite = True

    def __post_init__(self):
        object.__setattr__(self, "product", tuple(tuple(r) for r in self.product))

    @property
    def zero(self) -> int:
        return self.algebra.zero

    @property
    def one(self) -> int:
        return self.algebra.top

    @property
    def size(self) -> int:
        return self.algebra.size

    @property
    def elements(self) -> range:
        return self.algebra.elements

    def add(self, a, b):
        return self.algebra.add(a, b)

    def mul(self, a, b):
        return self.product[a][b]

    def leq(self, a, b):
        return ea_leq(self.algebra, a, b)

    def ominus(self, b, a):
        return partial_diff(self.algebra, a, b)

    def orthosupplement(self, a):
        return ea_ortho(self.algebra, a)

    def divide(self, s, t) -> Division:
        return divide(self, s, t)

    def format(self, a) -> str:
        return self.algebra.label(a)

    def parse(self, s: str):
        return self.algebra.index(s)


def forced_product(e: FiniteEffectAlgebra) -> list[list[Optional[int]]]:
    """Product table with only the rows and columns fixed by the unit and zero laws."""
    n = e.size
    p: list[list[Optional[int]]] = [[None] * n for _ in range(n)]
    for x in range(n):
        p[e.zero][x] = p[x][e.zero] = e.zero
        p[e.top][x] = p[x][e.top] = x
    return p


def trivial_monoid() -> FiniteEffectMonoid:
    return FiniteEffectMonoid(trivial(), ((0,),))


def two_monoid() -> FiniteEffectMonoid:
    e = chain(2)
    return FiniteEffectMonoid(e, forced_product(e))


def boolean_meet_monoid(atoms: int) -> FiniteEffectMonoid:
    """Powerset of ``{1..atoms}`` with intersection as product."""
    e = boolean_algebra(atoms)
    return FiniteEffectMonoid(e, tuple(tuple(a & b for b in e.elements) for a in e.elements))


def check_effect_monoid_axioms(m: FiniteEffectMonoid) -> list[Violation]:
    out = check_effect_algebra_axioms(m.algebra)
    if out:
        return out
    e, p, n = m.algebra, m.product, m.size
    if len(p) != n or any(len(r) != n for r in p) or any(not (isinstance(c, int) and 0 <= c < n) for r in p for c in r):
        return [Violation("structure.product", (), "product table malformed")]
    one = e.top
    for a in range(n):
        if p[one][a] != a or p[a][one] != a:
            out.append(Violation("monoid.unit", (a,)))
    for a in range(n):
        for b in range(n):
            ab = p[a][b]
            for c in range(n):
                if p[ab][c] != p[a][p[b][c]]:
                    out.append(Violation("monoid.associativity", (a, b, c)))
    for a in range(n):
        for b in range(n):
            s = e.add(a, b)
            if s is None:
                continue
            for c in range(n):
                if e.add(p[c][a], p[c][b]) != p[c][s]:
                    out.append(Violation("monoid.biadditivity.left", (c, a, b)))
                if e.add(p[a][c], p[b][c]) != p[s][c]:
                    out.append(Violation("monoid.biadditivity.right", (a, b, c)))
    return out


def opposite(m: FiniteEffectMonoid) -> FiniteEffectMonoid:
    n = m.size
    return FiniteEffectMonoid(m.algebra, tuple(tuple(m.product[b][a] for b in range(n)) for a in range(n)))


def is_commutative(m: FiniteEffectMonoid) -> bool:
    return opposite(m).product == m.product


@dataclass(frozen=True)
class ZeroDivisorReport:
    witnesses: tuple[tuple[int, int], ...]

    @property
    def empty(self) -> bool:
        return not self.witnesses

    def __bool__(self):
        return bool(self.witnesses)


def zero_divisors(m: FiniteEffectMonoid) -> ZeroDivisorReport:
    z = m.zero
    return ZeroDivisorReport(tuple(
        (s, t) for s in m.elements for t in m.elements if s != z and t != z and m.mul(s, t) == z
    ))


def divide(m: FiniteEffectMonoid, s: int, t: int) -> Division:
    """The unique ``u`` with ``u * t = s``; needs ``s <= t`` and ``t != 0``."""
    if t == m.zero or not m.leq(s, t):
        raise ValueError("division needs s <= t and t != 0")
    hits = tuple(u for u in m.elements if m.mul(u, t) == s)
    if not hits:
        return Division("none")
    if len(hits) > 1:
        return Division("ambiguous", None, hits)
    return Division("unique", hits[0], hits)


def division_failures(m: FiniteEffectMonoid) -> list[tuple[int, int, Division]]:
    out = []
    for t in m.elements:
        if t == m.zero:
            continue
        for s in m.elements:
            if m.leq(s, t):
                d = divide(m, s, t)
                if not d.ok:
                    out.append((s, t, d))
    return out


def has_division(m: FiniteEffectMonoid) -> bool:
    return not division_failures(m)


def power(m: FiniteEffectMonoid, s: int, k: int) -> int:
    acc = m.one
    for _ in range(k):
        acc = m.mul(acc, s)
    return acc


def geometric_normalizer(m: FiniteEffectMonoid, s: int) -> int:
    """Join of the partial sums of ``s_perp * s^k``, k = 0, 1, ...

    The partial sums increase, so they stabilize once a term is zero or a
    power repeats; ``size`` extra rounds past the last change are enough.
    """
    sp = m.orthosupplement(s)
    acc = m.zero
    term = sp
    quiet = 0
    for _ in range(4 * m.size + 4):
        nxt = m.add(acc, term)
        if nxt is None:
            raise AssertionError(f"partial geometric sum undefined at s={s}")
        quiet = quiet + 1 if nxt == acc else 0
        acc = nxt
        if quiet > m.size:
            break
        term = m.mul(term, s)
    return acc


# ---------------------------------------------------------------- rational


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(s: str) -> Fraction:
    """``p/q`` or an integer; decimal points and exponents are refused."""
    t = s.strip()
    if not t or any(ch in t for ch in ".eE_ ") or t.count("/") > 1:
        raise ValueError(f"malformed rational {s!r}")
    num, _, den = t.partition("/")
    if not _is_int(num) or (den and not den.isdigit()):
        raise ValueError(f"malformed rational {s!r}")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {s!r}")
    return Fraction(int(num), int(den) if den else 1)


def _is_int(s: str) -> bool:
    body = s[1:] if s[:1] in "+-" else s
    return body.isdigit()


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class RationalUnitInterval(ScalarSystem):
    """Exact rationals in ``[0, 1]`` with truncated-free partial sum."""

    finite = False
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "RationalUnitInterval()"

    def __reduce__(self):
        return (RationalUnitInterval, ())

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def contains(self, a) -> bool:
        return isinstance(a, Fraction) and 0 <= a <= 1

    def add(self, a, b):
        s = a + b
        return s if s <= 1 else None

    def mul(self, a, b):
        return a * b

    def leq(self, a, b):
        return a <= b

    def ominus(self, b, a):
        return b - a if a <= b else None

    def divide(self, s, t) -> Division:
        if t == 0 or s > t:
            raise ValueError("division needs s <= t and t != 0")
        return Division("unique", Fraction(s) / t)

    def sample(self, count: int = 24, seed: int = 0) -> list[Fraction]:
        fixed = [Fraction(k, d) for d in (1, 2, 3, 4) for k in range(d + 1)]
        rng = random.Random(seed)
        extra = []
        for _ in range(count):
            d = rng.randint(1, 16)
            extra.append(Fraction(rng.randint(0, d), d))
        return sorted(set(fixed + extra))

    def format(self, a) -> str:
        return format_rational(a)

    def parse(self, s: str):
        q = parse_rational(s)
        if not 0 <= q <= 1:
            raise ValueError(f"{s} is outside [0, 1]")
        return q


def check_scalar_laws(m: ScalarSystem, sample: Optional[Sequence] = None) -> list[Violation]:
    """Effect-monoid laws on a sample of an arbitrary scalar system."""
    xs = list(sample if sample is not None else m.sample())
    out = []
    for a in xs:
        if m.mul(m.one, a) != a or m.mul(a, m.one) != a:
            out.append(Violation("monoid.unit", (a,)))
        ap = m.orthosupplement(a)
        if ap is None or m.add(a, ap) != m.one or m.orthosupplement(ap) != a:
            out.append(Violation("ea.orthosupplement", (a,)))
        if a != m.zero and m.add(a, m.one) is not None:
            out.append(Violation("ea.positivity", (a,)))
    for a in xs:
        for b in xs:
            if m.add(a, b) != m.add(b, a):
                out.append(Violation("pcm.commutativity", (a, b)))
            ab = m.add(a, b)
            for c in xs[:12]:
                left = None if ab is None else m.add(ab, c)
                bc = m.add(b, c)
                right = None if bc is None else m.add(a, bc)
                if left != right:
                    out.append(Violation("pcm.associativity", (a, b, c)))
                if m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)):
                    out.append(Violation("monoid.associativity", (a, b, c)))
                if ab is not None:
                    if m.add(m.mul(c, a), m.mul(c, b)) != m.mul(c, ab):
                        out.append(Violation("monoid.biadditivity.left", (c, a, b)))
                    if m.add(m.mul(a, c), m.mul(b, c)) != m.mul(ab, c):
                        out.append(Violation("monoid.biadditivity.right", (a, b, c)))
    return out


def scalar_system(name: str) -> ScalarSystem:
    """Named scalar systems: ``bool``, ``Q``, ``P<k>`` (Boolean meet monoid), ``trivial``."""
    if name in ("bool", "two", "{0,1}"):
        return two_monoid()
    if name in ("Q", "rational", "[0,1]"):
        return RationalUnitInterval()
    if name == "trivial":
        return trivial_monoid()
    if name.startswith("P") and name[1:].isdigit():
        return boolean_meet_monoid(int(name[1:]))
    raise KeyError(name)


def product_sum(m: FiniteEffectMonoid, xs: Iterable[int]) -> Optional[int]:
    return fold_sum(m.algebra, xs)
