"""Cohomology of finite groups acting trivially on their coefficients.

Three independent routes are provided:

* closed forms for cyclic groups (:func:`cyclic_cohomology`);
* the tensor product of periodic resolutions for finite abelian groups
  (:func:`abelian_cohomology_Z`, :func:`abelian_cohomology`);
* the normalised bar complex for any small group (:func:`bar_cohomology`),
  which is the brute-force oracle for the other two.

Restriction and transfer (:func:`restriction_map`, :func:`transfer_map`) are
computed on bar cocycles.  Every result can carry one of the provenance tags
``closed_form``, ``periodic_resolution``, ``bar_oracle`` or ``fallback_law``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, NamedTuple, Sequence

from .groups import FiniteGroup, GroupError
from .zlin import (
    AbelianGroup,
    AbelianHom,
    GroupValue,
    IntegerMatrix,
    IntegerSolver,
    PresentedGroup,
    SparseCokernel,
    SymbolicGroup,
    ZlinError,
    integer_kernel,
)

CLOSED_FORM = "closed_form"
PERIODIC_RESOLUTION = "periodic_resolution"
BAR_ORACLE = "bar_oracle"
FALLBACK_LAW = "fallback_law"

DEFAULT_ORACLE_BUDGET = 4096
BUDGET_ENV = "STACKYCOH_ORACLE_BUDGET"

Z = AbelianGroup.free(1)


class BudgetExceeded(RuntimeError):
    """A bar-complex computation would exceed the configured cochain budget."""

    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what}: {size} cochains exceed the oracle budget of {budget} "
                         f"(set {BUDGET_ENV} to raise it)")
        self.what = what
        self.size = size
        self.budget = budget


class WildError(ValueError):
    """The characteristic divides a group order."""


def oracle_budget() -> int:
    """Cochain budget for the bar oracle, honouring the environment override."""
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_ORACLE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value


def _check_budget(group: FiniteGroup, r: int, what: str) -> None:
    size = group.order ** r
    budget = oracle_budget()
    if size > budget:
        raise BudgetExceeded(what, size, budget)


def check_tame(order: int, characteristic: int) -> None:
    if characteristic < 0:
        raise ValueError("characteristic must be >= 0")
    if characteristic > 0 and order % characteristic == 0:
        raise WildError(f"characteristic {characteristic} divides the group order {order}")


# ---------------------------------------------------------------------------
# coefficient modules


@dataclass(frozen=True)
class ModuleDescriptor:
    """Coefficient module with trivial action.

    ``finitely_generated`` wraps an :class:`AbelianGroup`.  ``units_of_field``
    and ``picard_zero`` are divisible groups whose ``n``-torsion, for ``n``
    prime to the characteristic, is ``(Z/n)^torsion_rank``.
    """

    kind: str
    group: AbelianGroup | None = None
    genus: int = 0
    characteristic: int = 0
    action: str = "trivial"

    def __post_init__(self):
        if self.action != "trivial":
            raise ValueError("only the trivial action is supported")
        if self.kind == "finitely_generated":
            if not isinstance(self.group, AbelianGroup):
                raise ValueError("finitely_generated needs an AbelianGroup")
        elif self.kind in ("units_of_field", "picard_zero"):
            if self.characteristic < 0 or self.genus < 0:
                raise ValueError("characteristic and genus must be >= 0")
        else:
            raise ValueError(f"unknown module kind {self.kind!r}")

    @classmethod
    def finitely_generated(cls, group: AbelianGroup) -> ModuleDescriptor:
        return cls("finitely_generated", group)

    @classmethod
    def units_of_field(cls, characteristic: int = 0) -> ModuleDescriptor:
        return cls("units_of_field", characteristic=characteristic)

    @classmethod
    def picard_zero(cls, genus: int, characteristic: int = 0) -> ModuleDescriptor:
        return cls("picard_zero", genus=genus, characteristic=characteristic)

    @property
    def symbolic(self) -> bool:
        return self.kind != "finitely_generated"

    @property
    def torsion_rank(self) -> int:
        return 1 if self.kind == "units_of_field" else 2 * self.genus

    def value(self) -> GroupValue:
        """The module itself as a group value."""
        if self.kind == "finitely_generated":
            return self.group
        if self.kind == "units_of_field":
            return SymbolicGroup("k*")
        if self.genus == 0:
            return AbelianGroup()
        return SymbolicGroup(f"Pic0(g={self.genus})")


def as_module(m: ModuleDescriptor | AbelianGroup) -> ModuleDescriptor:
    return m if isinstance(m, ModuleDescriptor) else ModuleDescriptor.finitely_generated(m)


class Computed(NamedTuple):
    value: GroupValue
    provenance: str


# ---------------------------------------------------------------------------
# closed forms


def cyclic_cohomology(d: int, m: ModuleDescriptor | AbelianGroup, r: int) -> GroupValue:
    """``H^r(Z/d, M)`` for the trivial action.

    ``M`` in degree 0, ``M[d]`` in odd degrees, ``M/dM`` in positive even
    degrees.  For the divisible modules the odd degrees are
    ``(Z/d)^torsion_rank`` and the positive even degrees vanish.
    """
    if d < 1:
        raise ValueError("cyclic order must be >= 1")
    if r < 0:
        raise ValueError("degree must be >= 0")
    m = as_module(m)
    if m.symbolic:
        check_tame(d, m.characteristic)
        if r == 0:
            return m.value()
        if r % 2:
            return AbelianGroup.cyclic(d) * m.torsion_rank
        return AbelianGroup()
    a = m.group
    if r == 0:
        return a
    return a.n_torsion(d) if r % 2 else a.mod(d)


# ---------------------------------------------------------------------------
# cochain complexes of free abelian groups


class CochainCohomology:
    """Cohomology at one spot of a cochain complex of free abelian groups.

    ``incoming`` is the differential into ``Z^n`` and ``outgoing`` the one
    out of it.  Classes are presented on a basis of the cocycle lattice.
    """

    def __init__(self, n: int, incoming: IntegerMatrix | None, outgoing: IntegerMatrix | None):
        incoming = incoming if incoming is not None else IntegerMatrix.zeros(n, 0)
        outgoing = outgoing if outgoing is not None else IntegerMatrix.zeros(0, n)
        if incoming.nrows != n or outgoing.ncols != n:
            raise ZlinError("differentials do not meet at this spot")
        if not (outgoing @ incoming).is_zero():
            raise ZlinError("consecutive differentials do not compose to zero")
        self.n = n
        self.cycles = integer_kernel(outgoing)
        self._solver = IntegerSolver(self.cycles)
        rels = [self._solve(col) for col in incoming.columns()]
        self.presented = PresentedGroup(self.cycles.ncols,
                                        IntegerMatrix.from_columns(rels, self.cycles.ncols))

    def _solve(self, x: Sequence[int]) -> tuple[int, ...]:
        y = self._solver.solve(x)
        if y is None:
            raise ZlinError("vector is not a cocycle")
        return y

    @property
    def group(self) -> AbelianGroup:
        return self.presented.group

    def cocycle_coords(self, x: Sequence[int]) -> tuple[int, ...]:
        """Coordinates in the presentation generators (cocycle basis)."""
        return self._solve(x)

    def coords(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of the cocycle ``x``."""
        return self.presented.coords(self._solve(x))

    def representative(self, c: Sequence[int]) -> tuple[int, ...]:
        return self.cycles @ self.presented.lift(c)


# ---------------------------------------------------------------------------
# periodic resolutions of finite abelian groups


def _compositions(r: int, k: int) -> list[tuple[int, ...]]:
    if k == 0:
        return [()] if r == 0 else []
    out = []
    for first in range(r + 1):
        for rest in _compositions(r - first, k - 1):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=None)
def _tensor_cells(factors: tuple[int, ...], r: int) -> tuple[tuple[int, ...], ...]:
    return tuple(_compositions(r, len(factors))) if r >= 0 else ()


@lru_cache(maxsize=None)
def _tensor_differential(factors: tuple[int, ...], r: int) -> IntegerMatrix:
    """Differential from degree ``r`` to ``r + 1`` of the tensor product of the
    integral cochain complexes ``Z -0-> Z -n-> Z -0-> Z -n-> ...``."""
    src = _tensor_cells(factors, r)
    dst = _tensor_cells(factors, r + 1)
    pos = {c: i for i, c in enumerate(dst)}
    rows = [[0] * len(src) for _ in dst]
    for j, cell in enumerate(src):
        sign = 1  # Koszul sign of the factors before i
        for i, (ji, n) in enumerate(zip(cell, factors)):
            if ji % 2:
                target = cell[:i] + (ji + 1,) + cell[i + 1:]
                rows[pos[target]][j] += sign * n
                sign = -sign
    return IntegerMatrix(rows, len(src))


@lru_cache(maxsize=None)
def tensor_cohomology(factors: tuple[int, ...], r: int) -> CochainCohomology:
    """``H^r(Z/n_1 x ... x Z/n_k, Z)`` as cohomology of the tensor complex.

    The factors need not form a divisibility chain.
    """
    factors = tuple(int(n) for n in factors)
    if any(n < 1 for n in factors):
        raise ValueError("cyclic factors must be >= 1")
    n = len(_tensor_cells(factors, r))
    incoming = _tensor_differential(factors, r - 1) if r >= 1 else None
    return CochainCohomology(n, incoming, _tensor_differential(factors, r))


def abelian_cohomology_Z(factors: Sequence[int], r: int) -> AbelianGroup:
    """``H^r(G, Z)`` for ``G = Z/n_1 x ... x Z/n_k`` acting trivially."""
    if r < 0:
        raise ValueError("degree must be >= 0")
    return tensor_cohomology(tuple(factors), r).group


def abelian_cohomology(factors: Sequence[int], coeff: AbelianGroup, r: int) -> AbelianGroup:
    """``H^r(G, A)`` for finitely generated ``A`` by universal coefficients."""
    h = abelian_cohomology_Z(factors, r)
    nxt = abelian_cohomology_Z(factors, r + 1)
    return h.tensor(coeff) + nxt.torsion().tor(coeff)


def projection_pullback(g0_factors: Sequence[int], d: int, r: int) -> AbelianHom:
    """``H^r(G_0, Z) -> H^r(G_0 x Z/d, Z)`` induced by the projection.

    At cochain level a cell ``j`` of ``G_0`` goes to the cell ``(j, 0)``.
    """
    g0 = tuple(g0_factors)
    src = tensor_cohomology(g0, r)
    dst = tensor_cohomology(g0 + (d,), r)
    dst_pos = {c: i for i, c in enumerate(_tensor_cells(g0 + (d,), r))}
    src_cells = _tensor_cells(g0, r)
    cols = []
    for k in range(src.cycles.ncols):
        x = src.cycles.column(k)
        y = [0] * dst.n
        for cell, v in zip(src_cells, x):
            y[dst_pos[cell + (0,)]] += v
        cols.append(dst.cocycle_coords(y))
    hom = AbelianHom(src.presented, dst.presented,
                     IntegerMatrix.from_columns(cols, dst.presented.ngens))
    hom.provenance = PERIODIC_RESOLUTION
    return hom


def pullback_quotient(g0_factors: Sequence[int], d: int, r: int) -> AbelianGroup:
    """Cokernel of :func:`projection_pullback`."""
    return projection_pullback(g0_factors, d, r).cokernel()[0].group


# ---------------------------------------------------------------------------
# the bar complex


@lru_cache(maxsize=None)
def bar_tuples(group: FiniteGroup, r: int) -> tuple[tuple[int, ...], ...]:
    """Index set of normalised ``r``-cochains: tuples of non-identity elements."""
    ne = [g for g in range(group.order) if g != group.e]
    return tuple(itertools.product(ne, repeat=r))


@lru_cache(maxsize=None)
def bar_index(group: FiniteGroup, r: int) -> dict[tuple[int, ...], int]:
    return {t: i for i, t in enumerate(bar_tuples(group, r))}


def bar_faces(group: FiniteGroup, t: tuple[int, ...]):
    """Signed faces of an ``(r+1)``-tuple under the trivial-action coboundary.

    Yields ``(sign, face)`` pairs; faces containing the identity are
    dropped because normalised cochains vanish on them.
    """
    m, e = group.mul, group.e
    r = len(t) - 1
    yield 1, t[1:]
    for i in range(r):
        p = m[t[i]][t[i + 1]]
        if p != e:
            yield (-1 if i % 2 == 0 else 1), t[:i] + (p,) + t[i + 2:]
    yield (1 if (r + 1) % 2 == 0 else -1), t[:r]


@lru_cache(maxsize=None)
def bar_differential_columns(group: FiniteGroup, r: int) -> tuple[int, tuple[dict[int, int], ...]]:
    """Sparse columns of the coboundary ``C^r -> C^{r+1}`` on normalised
    integral cochains, with the row count."""
    src = bar_index(group, r)
    cols: list[dict[int, int]] = [dict() for _ in src]
    rows = bar_tuples(group, r + 1)
    for ri, t in enumerate(rows):
        for sign, face in bar_faces(group, t):
            c = cols[src[face]]
            c[ri] = c.get(ri, 0) + sign
    return len(rows), tuple(cols)


@lru_cache(maxsize=None)
def _bar_cokernel(group: FiniteGroup, r: int) -> SparseCokernel:
    """Tracked cokernel of the coboundary out of degree ``r``."""
    nrows, cols = bar_differential_columns(group, r)
    return SparseCokernel(nrows, cols)


@lru_cache(maxsize=None)
def _bar_divisors(group: FiniteGroup, r: int) -> tuple[int, tuple[int, ...]]:
    """Rank and invariant factors of the coboundary out of degree ``r``.

    A matrix and its transpose share their Smith form; the transpose has
    one short relation per ``(r+1)``-tuple, which keeps elimination cheap.
    """
    nrows, cols = bar_differential_columns(group, r)
    rows: list[dict[int, int]] = [dict() for _ in range(nrows)]
    for j, c in enumerate(cols):
        for i, v in c.items():
            rows[i][j] = v
    ck = SparseCokernel(len(cols), rows, track=False)
    return ck.rank, ck.torsion


def bar_coboundary(group: FiniteGroup, f: Mapping[tuple[int, ...], Sequence[int]], r: int,
                   dim: int) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Coboundary of a normalised ``r``-cochain with values in ``Z^dim``.

    Cochains are sparse maps from tuples of non-identity elements.
    """
    out = {}
    for t in bar_tuples(group, r + 1):
        acc = [0] * dim
        hit = False
        for sign, face in bar_faces(group, t):
            v = f.get(face)
            if v is not None:
                hit = True
                for i, x in enumerate(v):
                    acc[i] += sign * x
        if hit and any(acc):
            out[t] = tuple(acc)
    return out


class BarIntegral(NamedTuple):
    free_rank: int
    torsion: tuple[int, ...]
    next_torsion: tuple[int, ...]


def _bar_integral(group: FiniteGroup, r: int) -> BarIntegral:
    _check_budget(group, r, f"bar complex of {group} in degree {r}")
    n_r = len(bar_tuples(group, r))
    rank, next_torsion = _bar_divisors(group, r)
    prev_rank, torsion = _bar_divisors(group, r - 1) if r >= 1 else (0, ())
    return BarIntegral(n_r - rank - prev_rank, torsion, next_torsion)


def bar_cohomology(group: FiniteGroup, coeff: AbelianGroup | ModuleDescriptor = Z,
                   r: int = 0) -> AbelianGroup:
    """``H^r(G, A)`` from normalised bar cochains ``G^r -> A``.

    Integral cohomology is read off Smith forms of the integral coboundaries;
    a finitely generated ``A`` enters through universal coefficients.
    Raises :class:`BudgetExceeded` when ``|G|^r`` exceeds the oracle budget.
    """
    if r < 0:
        raise ValueError("degree must be >= 0")
    m = as_module(coeff)
    if m.symbolic:
        raise ValueError("the bar oracle takes finitely generated coefficients")
    b = _bar_integral(group, r)
    h = AbelianGroup(b.free_rank, b.torsion)
    return h.tensor(m.group) + AbelianGroup(0, b.next_torsion).tor(m.group)


class BarClasses:
    """Integral classes in degree ``r`` of the normalised bar complex.

    For ``r >= 1`` the group is the torsion of ``C^r / im(d)``; cocycles map
    to canonical coordinates and canonical generators lift to cocycles.
    """

    def __init__(self, group: FiniteGroup, r: int):
        _check_budget(group, r, f"cohomology classes of {group} in degree {r}")
        self.fgroup = group
        self.r = r
        self.index = bar_index(group, r)
        if r == 0:
            self.group = Z
            self._ck = None
        else:
            self._ck = _bar_cokernel(group, r - 1)
            self.group = AbelianGroup(0, self._ck.torsion)

    def coords(self, cocycle: Mapping[tuple[int, ...], int]) -> tuple[int, ...]:
        if self._ck is None:
            return (cocycle.get((), 0),)
        return self._ck.torsion_coords({self.index[t]: v for t, v in cocycle.items() if v})

    def representative(self, k: int) -> dict[tuple[int, ...], int]:
        if self._ck is None:
            return {(): 1}
        tuples = bar_tuples(self.fgroup, self.r)
        return {tuples[i]: v for i, v in self._ck.torsion_lift(k).items()}


def bar_classes(group: FiniteGroup, r: int) -> BarClasses:
    # the budget can change between calls, so check it before the cache
    _check_budget(group, r, f"cohomology classes of {group} in degree {r}")
    return _cached_classes(group, r)


@lru_cache(maxsize=None)
def _cached_classes(group: FiniteGroup, r: int) -> BarClasses:
    return BarClasses(group, r)


# ---------------------------------------------------------------------------
# restriction and transfer


def _subgroup(group: FiniteGroup, h: Sequence[int], as_elements: bool):
    h = [int(x) for x in h]
    if as_elements:
        closed = group.closure(h)
        if set(closed) != set(h) | {group.e}:
            raise GroupError(f"elements {sorted(set(h))} do not form a subgroup")
    sub, emb = group.subgroup(h)
    return sub, emb


def _right_cosets(group: FiniteGroup, emb: Sequence[int]) -> tuple[list[int], list[int]]:
    """Right coset representatives of ``H`` (identity first) and, for every
    element ``x``, the element ``x * rep(x)^{-1}`` of ``H`` as a ``G``-index."""
    m, inv = group.mul, group.inv
    rep_of = [-1] * group.order
    reps = []
    for g in [group.e] + [x for x in range(group.order) if x != group.e]:
        if rep_of[g] != -1:
            continue
        reps.append(g)
        for h in emb:
            rep_of[m[h][g]] = g
    rho = [m[x][inv[rep_of[x]]] for x in range(group.order)]
    return reps, rho


def _hom(domain: AbelianGroup, codomain: AbelianGroup, cols: list[Sequence[int]],
         provenance: str) -> AbelianHom:
    mat = IntegerMatrix.from_columns(cols, codomain.ngens) if cols else \
        IntegerMatrix.zeros(codomain.ngens, 0)
    hom = AbelianHom(domain.presentation(), codomain.presentation(), mat)
    hom.provenance = provenance
    return hom


def _restriction_bar(group: FiniteGroup, sub: FiniteGroup, emb, r: int) -> AbelianHom:
    big, small = bar_classes(group, r), bar_classes(sub, r)
    cols = []
    for k in range(big.group.ngens):
        f = big.representative(k)
        fr = {}
        for t in bar_tuples(sub, r):
            v = f.get(tuple(emb[x] for x in t), 0)
            if v:
                fr[t] = v
        cols.append(small.coords(fr))
    return _hom(big.group, small.group, cols, BAR_ORACLE)


def _transfer_bar(group: FiniteGroup, sub: FiniteGroup, emb, r: int) -> AbelianHom:
    big, small = bar_classes(group, r), bar_classes(sub, r)
    reps, rho = _right_cosets(group, emb)
    pos = {g: i for i, g in enumerate(emb)}
    m, inv = group.mul, group.inv
    cols = []
    for k in range(small.group.ngens):
        f = small.representative(k)
        cor = {}
        for t in bar_tuples(group, r):
            total = 0
            for s in reps:
                x = s
                args = []
                for g in t:
                    y = m[x][g]
                    a = m[inv[rho[x]]][rho[y]]
                    if a == group.e:
                        break
                    args.append(pos[a])
                    x = y
                else:
                    total += f.get(tuple(args), 0)
            if total:
                cor[t] = total
        if r == 0:
            cor = {(): len(reps) * f[()]}
        cols.append(big.coords(cor))
    return _hom(small.group, big.group, cols, BAR_ORACLE)


def _element_coords(group: FiniteGroup, x: int) -> tuple[int, ...] | None:
    if group.kind == "cyclic":
        return (x,)
    if group.kind == "abelian":
        return group._coords[x]
    return None


def _fallback(group: FiniteGroup, sub: FiniteGroup, emb, r: int, which: str) -> AbelianHom | None:
    """Composition laws used when the bar complex is over budget.

    Cyclic in cyclic: on ``H^{2i}`` restriction sends the generator ``x^i`` to
    ``res(x)^i`` and transfer is multiplication by the index on it.
    Cyclic subgroup of a finite abelian group in degree 2: ``H^2 = Hom(-, Q/Z)``,
    restriction restricts characters and transfer precomposes with ``x -> k x``.
    These maps are written in the character basis, not the bar complex's
    canonical basis, so they compose with each other but agree with the bar
    maps only up to automorphisms of source and target.
    """
    k = group.order // sub.order
    a = sub.order
    if r == 0:
        return _hom(Z, Z, [(1,)] if which == "res" else [(k,)], FALLBACK_LAW)
    if group.is_cyclic:
        n = group.order
        hg = cyclic_cohomology(n, Z, r)
        hh = cyclic_cohomology(a, Z, r)
        if r % 2 or a == 1:
            cols = [(0,) * hh.ngens] * hg.ngens if which == "res" else [(0,) * hg.ngens] * hh.ngens
        else:
            cols = [(1,)] if which == "res" else [(k,)]
        if which == "res":
            return _hom(hg, hh, cols, FALLBACK_LAW)
        return _hom(hh, hg, cols, FALLBACK_LAW)
    if r != 2 or group.kind != "abelian" or not sub.is_cyclic:
        return None
    factors = group.factors
    dual = AbelianGroup(0, factors)
    hh = AbelianGroup.cyclic(a)
    gen = next((emb[i] for i in range(sub.order) if sub.element_order(i) == a), None)
    h = _element_coords(group, gen)
    if which == "res":
        cols = [((hi * a // d) % a,) if a > 1 else () for hi, d in zip(h, factors)]
        return _hom(dual, hh, cols, FALLBACK_LAW)
    if a == 1:
        return _hom(hh, dual, [], FALLBACK_LAW)
    multiples = {}
    x = group.e
    for j in range(a):
        multiples[_element_coords(group, x)] = j
        x = group.mul[x][gen]
    col = []
    for i, d in enumerate(factors):
        ke = tuple((k if t == i else 0) % dd for t, dd in enumerate(factors))
        mi = multiples[ke]
        col.append(mi * d // a % d)
    return _hom(hh, dual, [tuple(col)], FALLBACK_LAW)


def restriction_map(group: FiniteGroup, h: Sequence[int], r: int,
                    as_elements: bool = False) -> AbelianHom:
    """``res: H^r(G, Z) -> H^r(H, Z)`` between canonical forms.

    ``h`` lists generators of the subgroup (or, with ``as_elements``, all of
    its elements, which are then checked to be closed).
    """
    if r < 0:
        raise ValueError("degree must be >= 0")
    sub, emb = _subgroup(group, h, as_elements)
    try:
        return _restriction_bar(group, sub, emb, r)
    except BudgetExceeded:
        hom = _fallback(group, sub, emb, r, "res")
        if hom is None:
            raise
        return hom


def transfer_map(group: FiniteGroup, h: Sequence[int], r: int,
                 as_elements: bool = False) -> AbelianHom:
    """Transfer ``H^r(H, Z) -> H^r(G, Z)`` between canonical forms.

    On inhomogeneous cochains, with right coset representatives ``s`` and
    ``rho(x) = x rep(x)^{-1}``::

        cor(f)(g_1..g_r) = sum_s f(rho(x_0)^-1 rho(x_1), ..., rho(x_{r-1})^-1 rho(x_r))

    where ``x_0 = s`` and ``x_i = x_{i-1} g_i``.
    """
    if r < 0:
        raise ValueError("degree must be >= 0")
    sub, emb = _subgroup(group, h, as_elements)
    try:
        return _transfer_bar(group, sub, emb, r)
    except BudgetExceeded:
        hom = _fallback(group, sub, emb, r, "cor")
        if hom is None:
            raise
        return hom


def subgroup_index(group: FiniteGroup, h: Sequence[int]) -> int:
    return group.order // len(group.closure(h))


def transfer_identity_holds(group: FiniteGroup, h: Sequence[int], r: int) -> bool:
    """Whether transfer after restriction is multiplication by the index."""
    res = restriction_map(group, h, r)
    cor = transfer_map(group, h, r)
    comp = cor @ res
    k = subgroup_index(group, h)
    return comp.equals(AbelianHom.identity(res.domain).scale(k))


# ---------------------------------------------------------------------------
# characters and divisible coefficients


def hom_to_units(group: FiniteGroup, characteristic: int = 0) -> AbelianGroup:
    """``Hom(G, k^*)`` for an algebraically closed field ``k``.

    Under tameness this is the dual of the abelianisation, which is
    (non-canonically) isomorphic to the abelianisation itself.
    """
    check_tame(group.order, characteristic)
    if group.kind in ("cyclic", "abelian"):
        return AbelianGroup(0, tuple(d for d in group.factors if d > 1))
    n, m = group.order, group.mul
    cols = []
    for a in range(n):
        for b in range(a, n):
            c = {a: 1}
            c[b] = c.get(b, 0) + 1
            c[m[a][b]] = c.get(m[a][b], 0) - 1
            cols.append(c)
    return SparseCokernel(n, cols, track=False).group


def _cyclic_factors(group: FiniteGroup) -> tuple[int, ...] | None:
    if group.kind in ("cyclic", "abelian"):
        return group.factors
    return None


def integral_cohomology(group: FiniteGroup, r: int) -> Computed:
    """``H^r(G, Z)`` by the cheapest applicable route."""
    if group.kind == "cyclic":
        return Computed(cyclic_cohomology(group.order, Z, r), CLOSED_FORM)
    if group.kind == "abelian":
        return Computed(abelian_cohomology_Z(group.factors, r), PERIODIC_RESOLUTION)
    return Computed(bar_cohomology(group, Z, r), BAR_ORACLE)


def divisible_cohomology(group: FiniteGroup, coeff: ModuleDescriptor, r: int) -> GroupValue:
    """``H^r(G, D)`` for ``D`` the units of the field or ``Pic^0`` of a curve.

    For ``r >= 1`` the prime-to-``p`` torsion of ``D`` is ``(Q/Z)'^t`` with
    ``t`` the torsion rank, and the uniquely divisible part is acyclic, so
    ``H^r(G, D) = H^{r+1}(G, Z)^t``.
    """
    if not coeff.symbolic:
        raise ValueError("divisible_cohomology takes units_of_field or picard_zero")
    check_tame(group.order, coeff.characteristic)
    if r < 0:
        raise ValueError("degree must be >= 0")
    if r == 0:
        return coeff.value()
    return integral_cohomology(group, r + 1).value * coeff.torsion_rank


def group_cohomology(group: FiniteGroup, coeff: ModuleDescriptor | AbelianGroup, r: int,
                     oracle: bool = False) -> Computed:
    """``H^r(G, M)`` with a provenance tag; ``oracle`` forces the bar complex."""
    m = as_module(coeff)
    if r < 0:
        raise ValueError("degree must be >= 0")
    if oracle:
        if m.symbolic:
            check_tame(group.order, m.characteristic)
            if r == 0:
                return Computed(m.value(), BAR_ORACLE)
            return Computed(bar_cohomology(group, Z, r + 1) * m.torsion_rank, BAR_ORACLE)
        return Computed(bar_cohomology(group, m.group, r), BAR_ORACLE)
    if group.kind == "cyclic":
        return Computed(cyclic_cohomology(group.order, m, r), CLOSED_FORM)
    if m.symbolic:
        prov = PERIODIC_RESOLUTION if group.kind == "abelian" else BAR_ORACLE
        return Computed(divisible_cohomology(group, m, r), prov)
    if group.kind == "abelian":
        return Computed(abelian_cohomology(group.factors, m.group, r), PERIODIC_RESOLUTION)
    return Computed(bar_cohomology(group, m.group, r), BAR_ORACLE)
