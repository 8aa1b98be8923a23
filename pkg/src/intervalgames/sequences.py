"""Fixed injective enumerations of countable dense subsets of [0, 1].

Used for countable cover targets, dense-G-delta deletions and the
first-category avoidance sequences.  Each enumeration is deterministic
and injective; `rationals` eventually lists every rational of [0, 1],
`triadic` lists the points k/3^n (and in particular never produces 1/2).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Iterator


def _rationals() -> Iterator[Fraction]:
    yield Fraction(0)
    yield Fraction(1)
    q = 2
    while True:
        for p in range(1, q):
            if gcd(p, q) == 1:
                yield Fraction(p, q)
        q += 1


def _triadic() -> Iterator[Fraction]:
    yield Fraction(0)
    yield Fraction(1)
    den = 3
    while True:
        for num in range(1, den):
            if num % 3 != 0:
                yield Fraction(num, den)
        den *= 3


class Enumeration:
    """Memoized view of an infinite injective point sequence."""

    def __init__(self, name: str, gen_factory: Callable[[], Iterator[Fraction]]):
        self.name = name
        self._gen = gen_factory()
        self._cache: list[Fraction] = []

    def point(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("enumeration index must be >= 0")
        while len(self._cache) <= k:
            self._cache.append(next(self._gen))
        return self._cache[k]


_FACTORIES = {"rationals": _rationals, "triadic": _triadic}


def enumeration(name: str) -> Enumeration:
    if name not in _FACTORIES:
        raise ValueError(
            f"unknown enumeration {name!r}; available: {sorted(_FACTORIES)}"
        )
    return Enumeration(name, _FACTORIES[name])


def enumeration_names() -> list[str]:
    return sorted(_FACTORIES)
