"""Finite groups as multiplication tables on element indices ``0..n-1``."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .zlin import AbelianGroup, IntegerMatrix, PresentedGroup


class GroupError(ValueError):
    """Invalid group data or subgroup specification."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group of one of three kinds.

    ``cyclic``: element ``i`` is the ``i``-th power of a generator.
    ``abelian``: a divisibility chain of factors; elements are mixed-radix
    encodings of coordinate tuples (last factor varies fastest).
    ``table``: an explicit, verified multiplication table.
    """

    kind: str
    factors: tuple[int, ...] = ()
    table: tuple[tuple[int, ...], ...] | None = None
    identity: int = 0
    name: str = ""

    def __post_init__(self):
        if self.kind == "cyclic":
            if len(self.factors) != 1 or self.factors[0] < 1:
                raise GroupError("a cyclic group needs one order >= 1")
        elif self.kind == "abelian":
            AbelianGroup(0, self.factors)  # validates the chain
        elif self.kind == "table":
            if self.table is None:
                raise GroupError("table kind requires a multiplication table")
            _check_table(self.table, self.identity)
        else:
            raise GroupError(f"unknown group kind {self.kind!r}")

    # constructors ------------------------------------------------------------

    @classmethod
    def cyclic(cls, d: int) -> FiniteGroup:
        return cls("cyclic", (d,), name=f"Z/{d}")

    @classmethod
    def abelian(cls, factors: Sequence[int]) -> FiniteGroup:
        factors = tuple(factors)
        if len(factors) == 1:
            return cls.cyclic(factors[0])
        if not factors:
            return cls.cyclic(1)
        return cls("abelian", factors, name=" x ".join(f"Z/{d}" for d in factors))

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], identity: int | None = None,
                   name: str = "") -> FiniteGroup:
        table = tuple(tuple(int(x) for x in row) for row in table)
        if identity is None:
            identity = _find_identity(table)
        return cls("table", (), table, identity, name or f"G{len(table)}")

    @classmethod
    def dihedral(cls, m: int) -> FiniteGroup:
        """``D_{2m}``; element ``i + m*e`` is ``r^i s^e``."""
        if m < 1:
            raise GroupError("dihedral group needs m >= 1")
        n = 2 * m
        table = []
        for x in range(n):
            i, a = x % m, x // m
            row = []
            for y in range(n):
                j, b = y % m, y // m
                k = (i + (j if a == 0 else -j)) % m
                row.append(k + m * ((a + b) % 2))
            table.append(row)
        return cls.from_table(table, 0, f"D{n}")

    @classmethod
    def product(cls, orders: Sequence[int], name: str = "") -> FiniteGroup:
        """Direct product of cyclic groups in the given (not necessarily
        canonical) order, as a table with mixed-radix element encoding."""
        orders = tuple(orders)
        elems = list(itertools.product(*[range(d) for d in orders]))
        index = {e: n for n, e in enumerate(elems)}
        table = [[index[tuple((a + b) % d for a, b, d in zip(x, y, orders))] for y in elems]
                 for x in elems]
        return cls.from_table(table, 0, name or " x ".join(f"Z/{d}" for d in orders))

    # structure ---------------------------------------------------------------

    @cached_property
    def order(self) -> int:
        if self.kind == "table":
            return len(self.table)
        return math.prod(self.factors)

    @cached_property
    def mul(self) -> tuple[tuple[int, ...], ...]:
        if self.kind == "table":
            return self.table
        if self.kind == "cyclic":
            d = self.factors[0]
            return tuple(tuple((a + b) % d for b in range(d)) for a in range(d))
        elems = self._coords
        index = {e: n for n, e in enumerate(elems)}
        return tuple(
            tuple(index[tuple((a + b) % d for a, b, d in zip(x, y, self.factors))] for y in elems)
            for x in elems)

    @cached_property
    def _coords(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*[range(d) for d in self.factors]))

    @property
    def e(self) -> int:
        return self.identity if self.kind == "table" else 0

    @cached_property
    def inv(self) -> tuple[int, ...]:
        e = self.e
        return tuple(row.index(e) for row in self.mul)

    @cached_property
    def is_abelian(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(a))

    @cached_property
    def is_cyclic(self) -> bool:
        return any(self.element_order(g) == self.order for g in range(self.order))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.e:
            x = self.mul[x][g]
            k += 1
        return k

    def key(self) -> tuple:
        return (self.kind, self.factors, self.table, self.identity)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return self.name or f"{self.kind}{self.factors}"

    # subgroups ---------------------------------------------------------------

    def closure(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Sorted elements of the subgroup generated by ``gens``."""
        gens = [int(g) for g in gens]
        for g in gens:
            if not 0 <= g < self.order:
                raise GroupError(f"element {g} out of range")
        seen = {self.e}
        frontier = [self.e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def subgroup(self, gens: Iterable[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The subgroup generated by ``gens`` as a table group, with the
        embedding (subgroup index -> element of ``self``)."""
        elems = self.closure(gens)
        pos = {g: n for n, g in enumerate(elems)}
        table = [[pos[self.mul[a][b]] for b in elems] for a in elems]
        return FiniteGroup.from_table(table, pos[self.e], f"<{','.join(map(str, gens))}>"), elems

    def commutator_subgroup(self) -> tuple[int, ...]:
        m, inv = self.mul, self.inv
        comms = {m[m[inv[a]][inv[b]]][m[a][b]] for a in range(self.order) for b in range(self.order)}
        return self.closure(comms)

    def abelian_invariants(self) -> AbelianGroup:
        """Canonical form of the abelianisation.

        Computed from the presentation of ``G^ab`` as ``Z^G`` modulo
        ``[a] + [b] - [ab]``.
        """
        n = self.order
        rels = []
        for a in range(n):
            for b in range(a, n):
                col = [0] * n
                col[a] += 1
                col[b] += 1
                col[self.mul[a][b]] -= 1
                rels.append(col)
        return PresentedGroup(n, IntegerMatrix.from_columns(rels, n)).group

    def is_homomorphism(self, target: FiniteGroup, images: Sequence[int]) -> bool:
        if len(images) != self.order:
            return False
        m, tm = self.mul, target.mul
        return all(images[m[a][b]] == tm[images[a]][images[b]]
                   for a in range(self.order) for b in range(self.order))


def _find_identity(table) -> int:
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    raise GroupError("multiplication table has no identity")


def _check_table(table, identity: int) -> None:
    n = len(table)
    if n == 0:
        raise GroupError("empty multiplication table")
    for row in table:
        if len(row) != n or any(not 0 <= x < n for x in row):
            raise GroupError("multiplication table is not an n x n table on 0..n-1")
    if not 0 <= identity < n or any(table[identity][x] != x or table[x][identity] != x
                                    for x in range(n)):
        raise GroupError("identity element is wrong")
    for row in table:
        if identity not in row:
            raise GroupError("some element has no inverse")
    for a in range(n):
        ta = table[a]
        for b in range(n):
            ab = ta[b]
            tab, tb = table[ab], table[b]
            for c in range(n):
                if tab[c] != ta[tb[c]]:
                    raise GroupError(f"multiplication is not associative at ({a}, {b}, {c})")
