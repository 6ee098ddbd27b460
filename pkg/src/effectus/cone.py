"""Polyhedral cones in Q^n, given by generator rays or as the positive orthant."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .lp import feasible

Vector = tuple[Fraction, ...]


def vec(xs) -> Vector:
    from .monoid import as_fraction

    return tuple(as_fraction(x) for x in xs)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def vadd(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vscale(r, a: Sequence) -> Vector:
    return tuple(r * x for x in a)


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(n))


@dataclass(frozen=True)
class Cone:
    """``generators = None`` means the coordinatewise cone ``Q^n_+``."""

    dimension: int
    generators: Optional[tuple[Vector, ...]] = None

    def __post_init__(self):
        if self.generators is not None:
            gens = tuple(vec(g) for g in self.generators)
            if any(len(g) != self.dimension for g in gens):
                raise ValueError("generator of wrong dimension")
            object.__setattr__(self, "generators", gens)

    @property
    def coordinatewise(self) -> bool:
        return self.generators is None

    def rays(self) -> tuple[Vector, ...]:
        if self.generators is None:
            return tuple(unit_vector(self.dimension, i) for i in range(self.dimension))
        return self.generators

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.dimension:
            return False
        if self.generators is None:
            return all(x >= 0 for x in v)
        facets = _facets(self.generators, self.dimension)
        if facets is None:
            return self.decompose(v) is not None
        return all(dot(h, v) >= 0 for h in facets)

    def decompose(self, v: Sequence) -> Optional[tuple[Fraction, ...]]:
        """Nonnegative coefficients expressing ``v`` over the rays, if any."""
        rays = self.rays()
        if not rays:
            return () if all(x == 0 for x in v) else None
        A = [[g[i] for g in rays] for i in range(self.dimension)]
        return feasible(A, list(v))

    def to_dict(self) -> dict:
        from .monoid import format_rational

        return {
            "dimension": self.dimension,
            "generators": None if self.generators is None else [[format_rational(x) for x in g] for g in self.generators],
        }


@lru_cache(maxsize=256)
def _facets(generators: tuple, n: int) -> Optional[tuple[Vector, ...]]:
    """Inward facet normals of a full-dimensional cone, or ``None`` if it is not full-dimensional."""
    import sympy

    gens = [g for g in generators if any(g)]
    if not gens or sympy.Matrix([list(g) for g in gens]).rank() < n:
        return None
    out = set()
    for sub in itertools.combinations(gens, n - 1):
        m = sympy.Matrix([list(g) for g in sub]) if sub else sympy.zeros(0, n)
        null = m.nullspace() if sub else [sympy.eye(n)[:, i] for i in range(n)]
        if len(null) != 1:
            continue
        h = [Fraction(int(x.p), int(x.q)) for x in null[0]]
        signs = {(dot(h, g) > 0) - (dot(h, g) < 0) for g in gens} - {0}
        if signs == {1}:
            out.add(tuple(h))
        elif signs == {-1}:
            out.add(tuple(-x for x in h))
        elif not signs:
            raise AssertionError("full-dimensional cone cannot lie in a hyperplane")
    return tuple(sorted(out))
