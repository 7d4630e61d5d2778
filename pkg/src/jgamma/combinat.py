"""Finite sets {1..m}, injections, bijections, block sums, shuffles, complements.

Elements are 1-based throughout; the set of size m is always {1,...,m}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError

__all__ = [
    "Injection",
    "identity",
    "empty_into",
    "compose",
    "block_sum",
    "shuffle",
    "complement",
    "all_injections",
    "all_bijections",
]


@dataclass(frozen=True)
class Injection:
    """An injective map {1..domain_size} -> {1..codomain_size} given by its value table."""

    domain_size: int
    codomain_size: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.domain_size < 0 or self.codomain_size < 0:
            raise InputError("sizes must be non-negative")
        if len(self.values) != self.domain_size:
            raise InputError("value table length must equal domain_size")
        seen = set()
        for v in self.values:
            if not 1 <= v <= self.codomain_size:
                raise InputError(f"value {v} outside 1..{self.codomain_size}")
            if v in seen:
                raise InputError(f"value {v} repeated; map is not injective")
            seen.add(v)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.domain_size:
            raise InputError(f"argument {i} outside 1..{self.domain_size}")
        return self.values[i - 1]

    @property
    def is_bijection(self) -> bool:
        return self.domain_size == self.codomain_size

    @property
    def is_identity(self) -> bool:
        return self.is_bijection and all(v == i + 1 for i, v in enumerate(self.values))

    def image(self) -> frozenset[int]:
        return frozenset(self.values)

    def inverse(self) -> Injection:
        if not self.is_bijection:
            raise InputError("only bijections can be inverted")
        inv = [0] * self.domain_size
        for i, v in enumerate(self.values):
            inv[v - 1] = i + 1
        return Injection(self.domain_size, self.domain_size, tuple(inv))


def identity(n: int) -> Injection:
    return Injection(n, n, tuple(range(1, n + 1)))


def empty_into(n: int) -> Injection:
    """The unique injection from the empty set into {1..n}."""
    return Injection(0, n, ())


def compose(g: Injection, f: Injection) -> Injection:
    """g after f."""
    if f.codomain_size != g.domain_size:
        raise InputError(
            f"cannot compose: codomain {f.codomain_size} != domain {g.domain_size}"
        )
    return Injection(
        f.domain_size, g.codomain_size, tuple(g.values[v - 1] for v in f.values)
    )


def block_sum(f: Injection, g: Injection) -> Injection:
    """Ordered concatenation: f on the first block, g shifted by f's codomain."""
    shift = f.codomain_size
    return Injection(
        f.domain_size + g.domain_size,
        f.codomain_size + g.codomain_size,
        f.values + tuple(v + shift for v in g.values),
    )


def shuffle(m: int, n: int) -> Injection:
    """The block shuffle chi_{m,n}: {1..m+n} -> {1..m+n} moving the first m past the last n."""
    return Injection(
        m + n,
        m + n,
        tuple(i + n for i in range(1, m + 1)) + tuple(range(1, n + 1)),
    )


def complement(f: Injection) -> tuple[int, ...]:
    """Elements of the codomain not hit by f, ascending."""
    img = f.image()
    return tuple(v for v in range(1, f.codomain_size + 1) if v not in img)


def all_injections(m: int, n: int):
    """All injections {1..m} -> {1..n} in lexicographic order of value tables."""
    for values in itertools.permutations(range(1, n + 1), m):
        yield Injection(m, n, values)


def all_bijections(n: int):
    yield from all_injections(n, n)
